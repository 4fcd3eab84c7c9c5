// Copyright 2026 The Research Space Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RSPACE_EVALUATE_HPP
#define RSPACE_EVALUATE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "rspace/common.hpp"
#include "rspace/ingest.hpp"
#include "rspace/predict.hpp"
#include "rspace/space.hpp"
#include "rspace/states.hpp"

namespace rspace {

/// Candidate fields of one entity with the realized outcome (1 = reached the target band).
struct EntityLabels {
  std::string entity;
  std::vector<std::size_t> fields;
  std::vector<int> labels;
};

struct TransitionLabels {
  Transition transition = Transition::InactiveToActive;
  FieldIndex fields;
  std::vector<EntityLabels> entities;  // sorted by entity id
};

/// Candidates are the fields in the initial band at t0; an entity missing
/// from t1 gets all-zero labels.
TransitionLabels observe_transitions(const StateMatrix& t0, const StateMatrix& t1,
                                     const TransitionSpec& spec);

/// Mann-Whitney AUC with half credit for ties; nullopt without both classes.
/// Throws std::invalid_argument on a length mismatch.
std::optional<double> roc_auc(std::span<const double> scores, std::span<const int> labels);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  friend bool operator==(const RocPoint&, const RocPoint&) = default;
};

/// One point per distinct score (descending), starting at (0, 0). Empty when
/// either class is missing.
std::vector<RocPoint> roc_curve(std::span<const double> scores, std::span<const int> labels);
double trapezoid_area(std::span<const RocPoint> curve);

/// Sum of X over all fields per entity.
std::map<std::string, double> entity_totals(const PresenceMatrix& x);

/// Entities with total >= b * delta_t, where `x_total` covers [T0, T0 + delta_t).
std::set<std::string> inclusion_filter(const PresenceMatrix& x_total, double b, int delta_t);
std::set<std::string> inclusion_filter(const std::map<std::string, double>& totals, double b,
                                       int delta_t);

/// Boxplot statistics. Quantiles interpolate linearly between order
/// statistics; whiskers sit at the 2nd and 98th percentiles.
struct BoxStats {
  std::size_t n = 0;
  double mean = 0.0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double w_lo = 0.0;
  double w_hi = 0.0;
};

double quantile(std::vector<double> values, double q);
BoxStats summarize(std::span<const double> values);

struct GroupComparison {
  double mean_a = 0.0;
  double mean_b = 0.0;
  double f = 0.0;
  double p_value = 1.0;
  std::size_t n_a = 0;
  std::size_t n_b = 0;
};

/// One-way ANOVA over two groups, p from F(1, n_a + n_b - 2).
/// Zero within-group variance: equal means give F = 0, p = 1; different
/// means give F = inf, p = 0.
GroupComparison compare_groups(std::span<const double> a, std::span<const double> b);
/// Pooled-variance two-sample t statistic (mean_a - mean_b) / se.
double pooled_t_statistic(std::span<const double> a, std::span<const double> b);

struct MapPair {
  std::string field_i;
  std::string field_j;
  double weight_a = 0.0;
  double weight_b = 0.0;
};

struct MapCorrelation {
  std::vector<MapPair> pairs;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// OLS of b on a over unordered pairs of shared fields where both weights
/// are positive. Throws std::invalid_argument with fewer than 3 pairs.
MapCorrelation correlate_maps(const ProximityMatrix& a, const ProximityMatrix& b);
void write_scatter_csv(std::ostream& out, const MapCorrelation& c);

struct EntityAuc {
  std::string entity;
  std::optional<double> auc;
  std::size_t positives = 0;
  std::size_t negatives = 0;
  std::vector<RocPoint> roc;
};

struct TransitionEvaluation {
  Transition transition = Transition::InactiveToActive;
  Level level = Level::Author;
  std::string map_label;
  std::vector<EntityAuc> entities;  // included entities that had candidates
  std::size_t excluded_undefined = 0;
  std::size_t excluded_inclusion = 0;
  BoxStats summary;

  std::vector<double> defined_aucs() const;
};

/// Joins scores with realized labels for the included entities. Throws
/// std::runtime_error("empty evaluation set") when nothing survives
/// inclusion or no entity has a defined AUC.
TransitionEvaluation evaluate_rankings(const Rankings& rankings, const TransitionLabels& labels,
                                       const std::set<std::string>& included, Level level);

/// Replaces every omega with a seeded uniform draw; the null model for AUC.
Rankings randomize_scores(const Rankings& rankings, std::uint64_t seed);

struct PipelineInputs {
  const std::vector<FieldedPublication>* author_pubs = nullptr;
  const AffiliationMap* affiliations = nullptr;
  Level level = Level::Author;
  Transition transition = Transition::InactiveToActive;
  const ProximityMatrix* phi = nullptr;
  std::string map_label = "research-space";
  YearWindow state_window{2008, 2011};
  YearWindow outcome_window{2011, 2014};
  double b = 3.0;
  int delta_t = 3;
  DensityOptions density_options;
};

/// states -> U -> omega -> rankings -> labels -> per-entity AUC, with the
/// inclusion window [state_window.start, state_window.start + delta_t).
TransitionEvaluation evaluate_pipeline(const PipelineInputs& in);

}  // namespace rspace

#endif  // RSPACE_EVALUATE_HPP
