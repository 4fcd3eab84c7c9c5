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

#include "rspace/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include <boost/math/distributions/fisher_f.hpp>

#include "rspace/csv.hpp"
#include "rspace/parallel.hpp"
#include "rspace/random.hpp"

namespace rspace {

TransitionLabels observe_transitions(const StateMatrix& t0, const StateMatrix& t1,
                                     const TransitionSpec& spec) {
  if (!(t0.fields() == t1.fields()))
    throw std::invalid_argument("state matrices use different field universes");
  if (t0.level() != t1.level())
    throw std::invalid_argument("state matrices are at different aggregation levels");
  TransitionLabels out{spec.name, t0.fields(), {}};
  const std::size_t n = t0.fields().size();
  for (std::size_t s = 0; s < t0.n_entities(); ++s) {
    EntityLabels e{t0.entity(s), {}, {}};
    auto later = t1.find_entity(t0.entity(s));
    for (std::size_t f = 0; f < n; ++f) {
      if (!spec.initial(t0.state(s, f))) continue;
      e.fields.push_back(f);
      e.labels.push_back(later && spec.target(t1.state(*later, f)) ? 1 : 0);
    }
    out.entities.push_back(std::move(e));
  }
  return out;
}

namespace {

void check_lengths(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size())
    throw std::invalid_argument("scores and labels differ in length");
}

// Indices sorted by score descending.
std::vector<std::size_t> order_desc(std::span<const double> scores) {
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return idx;
}

}  // namespace

std::optional<double> roc_auc(std::span<const double> scores, std::span<const int> labels) {
  check_lengths(scores, labels);
  const auto idx = order_desc(scores);
  // Walk tie groups from the lowest score upwards; twice the Mann-Whitney
  // count stays an exact integer.
  std::int64_t n_pos = 0, n_neg = 0, twice = 0;
  std::size_t i = idx.size();
  while (i > 0) {
    std::size_t j = i;
    std::int64_t p = 0, q = 0;
    while (j > 0 && scores[idx[j - 1]] == scores[idx[i - 1]]) {
      --j;
      (labels[idx[j]] != 0 ? p : q) += 1;
    }
    twice += 2 * p * n_neg + p * q;
    n_pos += p;
    n_neg += q;
    i = j;
  }
  if (n_pos == 0 || n_neg == 0) return std::nullopt;
  return static_cast<double>(twice) / static_cast<double>(2 * n_pos * n_neg);
}

std::vector<RocPoint> roc_curve(std::span<const double> scores, std::span<const int> labels) {
  check_lengths(scores, labels);
  std::int64_t n_pos = 0;
  for (int l : labels) n_pos += l != 0;
  const std::int64_t n_neg = static_cast<std::int64_t>(labels.size()) - n_pos;
  if (n_pos == 0 || n_neg == 0) return {};
  const auto idx = order_desc(scores);
  std::vector<RocPoint> curve{{0.0, 0.0}};
  std::int64_t tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < idx.size()) {
    const double s = scores[idx[i]];
    while (i < idx.size() && scores[idx[i]] == s) {
      (labels[idx[i]] != 0 ? tp : fp) += 1;
      ++i;
    }
    curve.push_back({static_cast<double>(fp) / static_cast<double>(n_neg),
                     static_cast<double>(tp) / static_cast<double>(n_pos)});
  }
  return curve;
}

double trapezoid_area(std::span<const RocPoint> curve) {
  double area = 0.0;
  for (std::size_t i = 1; i < curve.size(); ++i)
    area += (curve[i].fpr - curve[i - 1].fpr) * (curve[i].tpr + curve[i - 1].tpr) / 2.0;
  return area;
}

std::map<std::string, double> entity_totals(const PresenceMatrix& x) {
  std::map<std::string, double> totals;
  const auto sums = x.values.row_sums();
  for (std::size_t s = 0; s < sums.size(); ++s) totals.emplace(x.values.entity(s), sums[s]);
  return totals;
}

std::set<std::string> inclusion_filter(const std::map<std::string, double>& totals, double b,
                                       int delta_t) {
  if (!(b >= 0.0)) throw std::invalid_argument("B must be >= 0");
  if (delta_t < 1) throw std::invalid_argument("delta_t must be >= 1");
  const double bar = b * delta_t;
  std::set<std::string> kept;
  for (const auto& [entity, total] : totals)
    if (total >= bar) kept.insert(entity);
  return kept;
}

std::set<std::string> inclusion_filter(const PresenceMatrix& x_total, double b, int delta_t) {
  return inclusion_filter(entity_totals(x_total), b, delta_t);
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

BoxStats summarize(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("cannot summarize an empty sample");
  std::vector<double> v(values.begin(), values.end());
  BoxStats s;
  s.n = v.size();
  s.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  s.median = quantile(v, 0.5);
  s.q1 = quantile(v, 0.25);
  s.q3 = quantile(v, 0.75);
  s.w_lo = quantile(v, 0.02);
  s.w_hi = quantile(v, 0.98);
  return s;
}

namespace {

double mean_of(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sum_sq_dev(std::span<const double> v, double m) {
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return ss;
}

}  // namespace

GroupComparison compare_groups(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ANOVA groups must be nonempty");
  const std::size_t n = a.size() + b.size();
  if (n < 3) throw std::invalid_argument("ANOVA needs at least 3 observations");
  GroupComparison out;
  out.n_a = a.size();
  out.n_b = b.size();
  out.mean_a = mean_of(a);
  out.mean_b = mean_of(b);
  const double grand = (out.mean_a * a.size() + out.mean_b * b.size()) / static_cast<double>(n);
  const double ss_between = a.size() * (out.mean_a - grand) * (out.mean_a - grand) +
                            b.size() * (out.mean_b - grand) * (out.mean_b - grand);
  const double ss_within = sum_sq_dev(a, out.mean_a) + sum_sq_dev(b, out.mean_b);
  const double df_within = static_cast<double>(n - 2);
  if (ss_within == 0.0) {
    if (out.mean_a == out.mean_b) {
      out.f = 0.0;
      out.p_value = 1.0;
    } else {
      out.f = std::numeric_limits<double>::infinity();
      out.p_value = 0.0;
    }
    return out;
  }
  out.f = ss_between / (ss_within / df_within);
  boost::math::fisher_f_distribution<double> dist(1.0, df_within);
  out.p_value = boost::math::cdf(boost::math::complement(dist, out.f));
  return out;
}

double pooled_t_statistic(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty() || a.size() + b.size() < 3)
    throw std::invalid_argument("t statistic needs two nonempty groups and 3 observations");
  const double ma = mean_of(a), mb = mean_of(b);
  const double pooled =
      (sum_sq_dev(a, ma) + sum_sq_dev(b, mb)) / static_cast<double>(a.size() + b.size() - 2);
  const double se = std::sqrt(pooled * (1.0 / a.size() + 1.0 / b.size()));
  return (ma - mb) / se;
}

MapCorrelation correlate_maps(const ProximityMatrix& a, const ProximityMatrix& b) {
  MapCorrelation out;
  const auto& ids = a.fields();
  std::vector<std::pair<std::size_t, std::size_t>> common;  // (position in a, position in b)
  for (std::size_t i = 0; i < ids.size(); ++i)
    if (auto j = b.fields().find(ids.id(i))) common.emplace_back(i, *j);
  for (std::size_t x = 0; x < common.size(); ++x)
    for (std::size_t y = x + 1; y < common.size(); ++y) {
      const double wa = a.at(common[x].first, common[y].first);
      const double wb = b.at(common[x].second, common[y].second);
      if (wa > 0.0 && wb > 0.0)
        out.pairs.push_back({ids.id(common[x].first), ids.id(common[y].first), wa, wb});
    }
  if (out.pairs.size() < 3)
    throw std::invalid_argument("map correlation needs at least 3 common positive pairs");
  double mx = 0.0, my = 0.0;
  for (const auto& p : out.pairs) {
    mx += p.weight_a;
    my += p.weight_b;
  }
  mx /= static_cast<double>(out.pairs.size());
  my /= static_cast<double>(out.pairs.size());
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (const auto& p : out.pairs) {
    const double dx = p.weight_a - mx, dy = p.weight_b - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  auto constant = [&](double MapPair::*w) {
    return std::all_of(out.pairs.begin(), out.pairs.end(),
                       [&](const MapPair& p) { return p.*w == out.pairs[0].*w; });
  };
  const bool flat_a = constant(&MapPair::weight_a), flat_b = constant(&MapPair::weight_b);
  if (flat_a) {
    out.slope = 0.0;
    out.intercept = my;
    out.r_squared = 0.0;
    return out;
  }
  out.slope = flat_b ? 0.0 : sxy / sxx;
  out.intercept = my - out.slope * mx;
  out.r_squared = flat_b ? 0.0 : std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
  return out;
}

void write_scatter_csv(std::ostream& out, const MapCorrelation& c) {
  out << "field_i,field_j,weight_a,weight_b\n";
  for (const auto& p : c.pairs)
    out << csv::escape(p.field_i) << ',' << csv::escape(p.field_j) << ','
        << format_number(p.weight_a, 12) << ',' << format_number(p.weight_b, 12) << '\n';
}

std::vector<double> TransitionEvaluation::defined_aucs() const {
  std::vector<double> v;
  for (const auto& e : entities)
    if (e.auc) v.push_back(*e.auc);
  return v;
}

TransitionEvaluation evaluate_rankings(const Rankings& rankings, const TransitionLabels& labels,
                                       const std::set<std::string>& included, Level level) {
  TransitionEvaluation out;
  out.transition = labels.transition;
  out.level = level;
  out.map_label = rankings.map_label;
  if (!(rankings.fields == labels.fields))
    throw std::invalid_argument("rankings and labels use different field indexes");

  std::unordered_map<std::string, std::size_t> ranking_row;
  for (std::size_t i = 0; i < rankings.entities.size(); ++i)
    ranking_row.emplace(rankings.entities[i], i);

  std::vector<const EntityLabels*> selected;
  for (const auto& e : labels.entities) {
    if (!included.count(e.entity)) {
      ++out.excluded_inclusion;
      continue;
    }
    if (e.fields.empty()) continue;
    selected.push_back(&e);
  }
  if (selected.empty()) throw std::runtime_error("empty evaluation set");

  out.entities.resize(selected.size());
  parallel_chunks(selected.size(), [&](std::size_t, std::size_t begin, std::size_t end) {
    std::vector<double> score_of(labels.fields.size());
    for (std::size_t k = begin; k < end; ++k) {
      const auto& e = *selected[k];
      std::fill(score_of.begin(), score_of.end(), 0.0);
      if (auto it = ranking_row.find(e.entity); it != ranking_row.end())
        for (const auto& r : rankings.ranked[it->second]) score_of[r.field] = r.omega;
      std::vector<double> scores;
      scores.reserve(e.fields.size());
      for (auto f : e.fields) scores.push_back(score_of[f]);
      auto& slot = out.entities[k];
      slot.entity = e.entity;
      slot.positives = static_cast<std::size_t>(std::count(e.labels.begin(), e.labels.end(), 1));
      slot.negatives = e.labels.size() - slot.positives;
      slot.auc = roc_auc(scores, e.labels);
      slot.roc = roc_curve(scores, e.labels);
    }
  });
  for (const auto& e : out.entities)
    if (!e.auc) ++out.excluded_undefined;
  const auto aucs = out.defined_aucs();
  if (aucs.empty()) throw std::runtime_error("empty evaluation set");
  out.summary = summarize(aucs);
  return out;
}

Rankings randomize_scores(const Rankings& rankings, std::uint64_t seed) {
  Rankings out = rankings;
  Rng rng(seed);
  for (auto& row : out.ranked) {
    for (auto& r : row) r.omega = rng.uniform();
    std::sort(row.begin(), row.end(), [&](const RankedField& a, const RankedField& b) {
      if (a.omega != b.omega) return a.omega > b.omega;
      return out.fields.id(a.field) < out.fields.id(b.field);
    });
    for (std::size_t i = 0; i < row.size(); ++i) {
      row[i].rank = i + 1;
      row[i].tied = false;
    }
  }
  return out;
}

TransitionEvaluation evaluate_pipeline(const PipelineInputs& in) {
  if (!in.author_pubs || !in.phi || (in.level != Level::Author && !in.affiliations))
    throw std::invalid_argument("evaluate_pipeline: missing input");
  const auto& fields = in.phi->fields();
  AffiliationMap none;
  auto pubs = aggregate_entities(*in.author_pubs, in.affiliations ? *in.affiliations : none,
                                 in.level)
                  .pubs;
  const auto spec = TransitionSpec::of(in.transition);

  auto x0 = presence_matrix(pubs, fields, in.state_window, in.level);
  auto x1 = presence_matrix(pubs, fields, in.outcome_window, in.level);
  if (x0.values.empty()) throw std::runtime_error("empty evaluation set");
  const auto states0 = classify_states(rca(x0));
  const StateMatrix states1 =
      x1.values.empty() ? StateMatrix(in.level, in.outcome_window, fields, {}, {})
                        : classify_states(rca(x1));

  const YearWindow incl{in.state_window.start, in.state_window.start + in.delta_t};
  const auto included =
      inclusion_filter(presence_matrix(pubs, fields, incl, in.level), in.b, in.delta_t);

  const auto omega = density(u_matrix(states0, spec), *in.phi, in.density_options);
  const auto ranked = rank_candidates(omega, states0, spec, in.map_label);
  const auto labels = observe_transitions(states0, states1, spec);
  return evaluate_rankings(ranked, labels, included, in.level);
}

}  // namespace rspace
