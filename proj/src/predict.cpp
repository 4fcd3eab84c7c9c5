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

#include "rspace/predict.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "rspace/csv.hpp"
#include "rspace/parallel.hpp"
#include "rspace/random.hpp"

namespace rspace {

std::string_view to_string(Transition t) {
  switch (t) {
    case Transition::InactiveToActive:
      return "inactive_to_active";
    case Transition::NascentToDeveloped:
      return "nascent_to_developed";
    case Transition::IntermediateToDeveloped:
      return "intermediate_to_developed";
  }
  return "inactive_to_active";
}

Transition parse_transition(std::string_view text) {
  if (text == "inactive_to_active") return Transition::InactiveToActive;
  if (text == "nascent_to_developed") return Transition::NascentToDeveloped;
  if (text == "intermediate_to_developed") return Transition::IntermediateToDeveloped;
  throw std::invalid_argument("unknown transition: " + std::string(text));
}

bool TransitionSpec::initial(ActivityState s) const {
  switch (name) {
    case Transition::InactiveToActive:
      return s == ActivityState::Inactive;
    case Transition::NascentToDeveloped:
      return s == ActivityState::Nascent;
    case Transition::IntermediateToDeveloped:
      return s == ActivityState::Intermediate;
  }
  return false;
}

bool TransitionSpec::target(ActivityState s) const {
  return name == Transition::InactiveToActive ? is_active(s) : s == ActivityState::Developed;
}

UBand TransitionSpec::u_band() const {
  return name == Transition::InactiveToActive ? UBand::Active : UBand::Developed;
}

bool TransitionSpec::in_u(ActivityState s) const {
  return u_band() == UBand::Active ? is_active(s) : s == ActivityState::Developed;
}

UMatrix u_matrix(const RcaMatrix& r, const TransitionSpec& spec) {
  const auto& v = r.values;
  UMatrix u{v.fields(), v.entities(), std::vector<std::vector<std::size_t>>(v.n_entities())};
  const bool developed = spec.u_band() == UBand::Developed;
  for (std::size_t s = 0; s < v.n_entities(); ++s)
    for (const auto& e : v.row(s))
      if (developed ? e.value >= 1.0 : e.value > 0.0) u.members[s].push_back(e.field);
  return u;
}

UMatrix u_matrix(const StateMatrix& states, const TransitionSpec& spec) {
  UMatrix u{states.fields(), states.entities(),
            std::vector<std::vector<std::size_t>>(states.n_entities())};
  for (std::size_t s = 0; s < states.n_entities(); ++s)
    for (const auto& c : states.row(s))
      if (spec.in_u(c.state)) u.members[s].push_back(c.field);
  return u;
}

DensityScores density(const UMatrix& u, const ProximityMatrix& phi, DensityOptions options) {
  if (!(u.fields == phi.fields()))
    throw std::invalid_argument("U and proximity matrix use different field indexes");
  const std::size_t n = phi.size();
  // by_neighbour[g * n + f]: weight of neighbour g when scoring f.
  std::vector<double> by_neighbour(n * n);
  std::vector<double> denom(n, 0.0);
  for (std::size_t f = 0; f < n; ++f)
    for (std::size_t g = 0; g < n; ++g) {
      const double w = options.transpose ? phi.at(g, f) : phi.at(f, g);
      by_neighbour[g * n + f] = w;
    }
  for (std::size_t f = 0; f < n; ++f)
    for (std::size_t g = 0; g < n; ++g) denom[f] += by_neighbour[g * n + f];

  DensityScores out{phi.kind(), phi.fields(), u.entities,
                    std::vector<double>(u.entities.size() * n, 0.0)};
  parallel_chunks(u.entities.size(), [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t s = begin; s < end; ++s) {
      double* row = out.omega.data() + s * n;
      for (auto g : u.members[s]) {
        const double* w = by_neighbour.data() + g * n;
        for (std::size_t f = 0; f < n; ++f) row[f] += w[f];
      }
      for (std::size_t f = 0; f < n; ++f) row[f] = denom[f] > 0.0 ? row[f] / denom[f] : 0.0;
    }
  });
  return out;
}

ProximityMatrix shuffle_fields(const ProximityMatrix& phi, std::uint64_t seed) {
  const std::size_t n = phi.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
  ProximityMatrix out(phi.fields(), phi.kind());
  for (std::size_t f = 0; f < n; ++f)
    for (std::size_t g = 0; g < n; ++g) out.at(f, g) = phi.at(perm[f], perm[g]);
  return out;
}

namespace {

void finish_ranking(std::vector<RankedField>& ranked, const FieldIndex& fields) {
  std::sort(ranked.begin(), ranked.end(), [&](const RankedField& a, const RankedField& b) {
    if (a.omega != b.omega) return a.omega > b.omega;
    return fields.id(a.field) < fields.id(b.field);
  });
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    ranked[i].rank = i + 1;
    ranked[i].tied = (i > 0 && ranked[i - 1].omega == ranked[i].omega) ||
                     (i + 1 < ranked.size() && ranked[i + 1].omega == ranked[i].omega);
  }
}

}  // namespace

Rankings rank_candidates(const DensityScores& omega, const StateMatrix& states,
                         const TransitionSpec& spec, std::string map_label) {
  if (!(omega.fields == states.fields()))
    throw std::invalid_argument("density scores and states use different field indexes");
  std::unordered_map<std::string, std::size_t> omega_row;
  for (std::size_t i = 0; i < omega.entities.size(); ++i) omega_row.emplace(omega.entities[i], i);

  Rankings out{std::move(map_label), spec.name, states.fields(), states.entities(),
               std::vector<std::vector<RankedField>>(states.n_entities())};
  const std::size_t n = states.fields().size();
  for (std::size_t s = 0; s < states.n_entities(); ++s) {
    auto it = omega_row.find(states.entity(s));
    auto& ranked = out.ranked[s];
    for (std::size_t f = 0; f < n; ++f) {
      if (!spec.initial(states.state(s, f))) continue;
      const double w = it == omega_row.end() ? 0.0 : omega.at(it->second, f);
      ranked.push_back({f, w, 0, false});
    }
    finish_ranking(ranked, states.fields());
  }
  return out;
}

void write_predictions_csv(std::ostream& out, const Rankings& rankings) {
  out << "entity_id,field_id,omega,rank,map_kind,transition\n";
  const std::string suffix = "," + csv::escape(rankings.map_label) + "," +
                             std::string(to_string(rankings.transition)) + "\n";
  for (std::size_t s = 0; s < rankings.entities.size(); ++s)
    for (const auto& r : rankings.ranked[s])
      out << csv::escape(rankings.entities[s]) << ',' << csv::escape(rankings.fields.id(r.field))
          << ',' << format_number(r.omega, 17) << ',' << r.rank << suffix;
}

Rankings read_predictions_csv(std::istream& in, const FieldIndex& fields) {
  Rankings out;
  out.fields = fields;
  std::map<std::string, std::vector<RankedField>> acc;
  bool first = true;
  csv::Reader reader(in, {"entity_id", "field_id", "omega", "rank", "map_kind", "transition"});
  while (auto row = reader.next()) {
    const std::string where = "predictions line " + std::to_string(row->line);
    if (!row->ok()) throw std::invalid_argument(where + ": " + row->error);
    auto& c = row->cells;
    auto transition = parse_transition(c[5]);
    if (first) {
      out.map_label = c[4];
      out.transition = transition;
      first = false;
    } else if (out.map_label != c[4] || out.transition != transition) {
      throw std::invalid_argument(where + ": mixed map kinds or transitions in one file");
    }
    auto f = fields.find(c[1]);
    if (!f) throw std::invalid_argument(where + ": unknown field " + c[1]);
    double w = 0.0;
    try {
      w = std::stod(c[2]);
    } catch (const std::exception&) {
      throw std::invalid_argument(where + ": bad omega");
    }
    acc[c[0]].push_back({*f, w, 0, false});
  }
  for (auto& [entity, ranked] : acc) {
    finish_ranking(ranked, fields);
    out.entities.push_back(entity);
    out.ranked.push_back(std::move(ranked));
  }
  return out;
}

Rankings read_predictions_csv(const std::filesystem::path& path, const FieldIndex& fields) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_predictions_csv(in, fields);
}

}  // namespace rspace
