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

#ifndef RSPACE_PREDICT_HPP
#define RSPACE_PREDICT_HPP

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "rspace/common.hpp"
#include "rspace/space.hpp"
#include "rspace/states.hpp"

namespace rspace {

enum class Transition { InactiveToActive, NascentToDeveloped, IntermediateToDeveloped };

std::string_view to_string(Transition t);
Transition parse_transition(std::string_view text);

/// Which RCA band feeds U_sf.
enum class UBand { Developed, Active };

/// Band predicates of one studied transition.
struct TransitionSpec {
  Transition name = Transition::InactiveToActive;

  static TransitionSpec of(Transition t) { return {t}; }

  bool initial(ActivityState s) const;
  bool target(ActivityState s) const;
  /// Developed-target transitions use RCA >= 1; inactive->active uses RCA > 0.
  UBand u_band() const;
  bool in_u(ActivityState s) const;
};

/// Binary entity x field matrix; members[s] holds ascending field positions.
struct UMatrix {
  FieldIndex fields;
  std::vector<std::string> entities;
  std::vector<std::vector<std::size_t>> members;
};

UMatrix u_matrix(const RcaMatrix& r, const TransitionSpec& spec);
/// Same as above, reading the band from the stored states (every entity of
/// `states` gets a row, possibly empty).
UMatrix u_matrix(const StateMatrix& states, const TransitionSpec& spec);

struct DensityOptions {
  /// Weight neighbours by phi[f'][f] instead of phi[f][f'].
  bool transpose = false;
};

/// Dense entity x field omega scores.
struct DensityScores {
  MapKind map_kind = MapKind::CareerPath;
  FieldIndex fields;
  std::vector<std::string> entities;
  std::vector<double> omega;  // row-major, entities x fields

  double at(std::size_t entity, std::size_t field) const {
    return omega[entity * fields.size() + field];
  }
};

/// omega_sf = sum_f' U_sf' phi_ff' / sum_f' phi_ff', 0 when the denominator is 0.
/// Throws std::invalid_argument when U and phi use different field indexes.
DensityScores density(const UMatrix& u, const ProximityMatrix& phi, DensityOptions options = {});

/// Relabels fields with a seeded random permutation: out[f][g] = phi[pi f][pi g].
ProximityMatrix shuffle_fields(const ProximityMatrix& phi, std::uint64_t seed);

struct RankedField {
  std::size_t field = 0;
  double omega = 0.0;
  std::size_t rank = 0;  // 1-based
  bool tied = false;     // another candidate of the entity has the same omega
};

/// Candidate fields per entity, best first.
struct Rankings {
  std::string map_label;
  Transition transition = Transition::InactiveToActive;
  FieldIndex fields;
  std::vector<std::string> entities;
  std::vector<std::vector<RankedField>> ranked;
};

/// Candidates are the fields in the spec's initial band at t0, ordered by omega
/// descending with ties broken by field id.
Rankings rank_candidates(const DensityScores& omega, const StateMatrix& states,
                         const TransitionSpec& spec, std::string map_label);

/// `entity_id,field_id,omega,rank,map_kind,transition`; omega is written with
/// 17 significant digits so scores round-trip exactly.
void write_predictions_csv(std::ostream& out, const Rankings& rankings);
Rankings read_predictions_csv(std::istream& in, const FieldIndex& fields);
Rankings read_predictions_csv(const std::filesystem::path& path, const FieldIndex& fields);

}  // namespace rspace

#endif  // RSPACE_PREDICT_HPP
