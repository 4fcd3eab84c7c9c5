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

#include "rspace/space.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

#include "rspace/csv.hpp"
#include "rspace/parallel.hpp"

namespace rspace {

PresenceMatrix presence_matrix(const std::vector<FieldedPublication>& pubs,
                               const FieldIndex& fields, YearWindow window, Level level) {
  if (window.empty()) throw std::invalid_argument("presence window is empty");
  std::vector<EntityFieldMatrix::Triplet> triplets;
  for (const auto& p : pubs) {
    if (!window.contains(p.year)) continue;
    auto f = fields.find(p.field_id);
    if (!f) continue;
    triplets.push_back({p.entity_id, *f, p.weight});
  }
  return {level, window, EntityFieldMatrix::from_triplets(fields, std::move(triplets))};
}

std::vector<std::int64_t> BinaryPresence::member_counts() const {
  std::vector<std::int64_t> counts(fields.size(), 0);
  for (const auto& row : members)
    for (auto f : row) ++counts[f];
  return counts;
}

BinaryPresence discretize(const PresenceMatrix& x, double threshold) {
  if (!(threshold >= 0.0)) throw std::invalid_argument("threshold must be >= 0");
  BinaryPresence p;
  p.level = x.level;
  p.threshold = threshold;
  p.fields = x.values.fields();
  p.entities = x.values.entities();
  p.members.resize(x.values.n_entities());
  for (std::size_t s = 0; s < x.values.n_entities(); ++s)
    for (const auto& e : x.values.row(s))
      if (e.value > threshold) p.members[s].push_back(e.field);
  return p;
}

CooccurrenceMatrix cooccurrence(const BinaryPresence& p) {
  if (p.level != Level::Author)
    throw std::invalid_argument("co-occurrence is defined on author careers only, got level " +
                                std::string(to_string(p.level)));
  const std::size_t n = p.fields.size();
  const std::size_t chunks = planned_chunks(p.members.size());
  std::vector<std::vector<std::int64_t>> partial(chunks);
  parallel_chunks(p.members.size(), [&](std::size_t c, std::size_t begin, std::size_t end) {
    auto& local = partial[c];
    local.assign(n * n, 0);
    for (std::size_t s = begin; s < end; ++s) {
      const auto& row = p.members[s];
      for (auto f : row)
        for (auto g : row) ++local[f * n + g];
    }
  });
  CooccurrenceMatrix m(p.fields);
  for (const auto& local : partial)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m.at(i, j) += local[i * n + j];
  return m;
}

std::string_view to_string(MapKind kind) {
  return kind == MapKind::CareerPath ? "career_path" : "external";
}

bool ProximityMatrix::is_symmetric() const {
  for (std::size_t f = 0; f < size(); ++f)
    for (std::size_t g = f + 1; g < size(); ++g)
      if (at(f, g) != at(g, f)) return false;
  return true;
}

ProximityMatrix proximity(const CooccurrenceMatrix& m, const BinaryPresence& p) {
  if (!(m.fields() == p.fields))
    throw std::invalid_argument("co-occurrence and presence use different field indexes");
  const auto members = p.member_counts();
  ProximityMatrix phi(p.fields, MapKind::CareerPath);
  const std::size_t n = phi.size();
  for (std::size_t g = 0; g < n; ++g) {
    if (members[g] == 0) continue;
    const double denom = static_cast<double>(members[g]);
    for (std::size_t f = 0; f < n; ++f) phi.at(f, g) = static_cast<double>(m.at(f, g)) / denom;
  }
  return phi;
}

ProximityMatrix symmetrize_max(const ProximityMatrix& phi) {
  ProximityMatrix out = phi;
  for (std::size_t f = 0; f < phi.size(); ++f)
    for (std::size_t g = f + 1; g < phi.size(); ++g) {
      const double w = std::max(phi.at(f, g), phi.at(g, f));
      out.at(f, g) = w;
      out.at(g, f) = w;
    }
  return out;
}

ExternalMapLoad load_external_map(std::istream& in, const FieldIndex& fields) {
  ExternalMapLoad result{ProximityMatrix(fields, MapKind::External), {}, 0};
  std::set<std::string> unknown;
  std::vector<bool> seen(fields.size() * fields.size(), false);
  csv::Reader reader(in, {"field_i", "field_j", "weight"});
  while (auto row = reader.next()) {
    const std::string where = "external map line " + std::to_string(row->line);
    if (!row->ok()) throw std::invalid_argument(where + ": " + row->error);
    double w = 0.0;
    try {
      std::size_t used = 0;
      w = std::stod(row->cells[2], &used);
      if (used != row->cells[2].size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw std::invalid_argument(where + ": weight is not a number");
    }
    if (!(w >= 0.0)) throw std::invalid_argument(where + ": negative weight");
    auto a = fields.find(row->cells[0]);
    auto b = fields.find(row->cells[1]);
    if (!a || !b) {
      if (!a) unknown.insert(row->cells[0]);
      if (!b) unknown.insert(row->cells[1]);
      ++result.skipped_edges;
      continue;
    }
    const std::size_t key = std::min(*a, *b) * fields.size() + std::max(*a, *b);
    if (seen[key] && result.map.at(*a, *b) != w)
      throw std::invalid_argument(where + ": conflicting duplicate edge " + row->cells[0] + "," +
                                  row->cells[1]);
    seen[key] = true;
    result.map.at(*a, *b) = w;
    result.map.at(*b, *a) = w;
  }
  result.unknown_fields.assign(unknown.begin(), unknown.end());
  return result;
}

ExternalMapLoad load_external_map(const std::filesystem::path& path, const FieldIndex& fields) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return load_external_map(in, fields);
}

void write_phi_csv(std::ostream& out, const ProximityMatrix& phi) {
  out << "field_from,field_to,phi\n";
  const auto& ids = phi.fields();
  for (std::size_t f = 0; f < phi.size(); ++f)
    for (std::size_t g = 0; g < phi.size(); ++g) {
      const double v = phi.at(f, g);
      if (v == 0.0 && f != g) continue;
      out << csv::escape(ids.id(f)) << ',' << csv::escape(ids.id(g)) << ','
          << format_number(v, 12) << '\n';
    }
}

ProximityMatrix read_phi_csv(std::istream& in, MapKind kind) {
  struct Cell {
    std::string from, to;
    double value;
  };
  std::vector<Cell> cells;
  std::vector<std::string> ids;
  csv::Reader reader(in, {"field_from", "field_to", "phi"});
  while (auto row = reader.next()) {
    if (!row->ok())
      throw std::invalid_argument("phi line " + std::to_string(row->line) + ": " + row->error);
    double v = 0.0;
    try {
      v = std::stod(row->cells[2]);
    } catch (const std::exception&) {
      throw std::invalid_argument("phi line " + std::to_string(row->line) + ": bad value");
    }
    ids.push_back(row->cells[0]);
    ids.push_back(row->cells[1]);
    cells.push_back({std::move(row->cells[0]), std::move(row->cells[1]), v});
  }
  ProximityMatrix phi(FieldIndex(std::move(ids)), kind);
  for (const auto& c : cells)
    phi.at(phi.fields().index_of(c.from), phi.fields().index_of(c.to)) = c.value;
  return phi;
}

ProximityMatrix read_phi_csv(const std::filesystem::path& path, MapKind kind) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_phi_csv(in, kind);
}

}  // namespace rspace
