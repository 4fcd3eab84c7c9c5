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

#include "rspace/states.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <stdexcept>

#include "rspace/csv.hpp"

namespace rspace {

RcaMatrix rca(const PresenceMatrix& x) {
  const auto& v = x.values;
  const double total = v.total();
  if (!(total > 0.0)) throw std::invalid_argument("RCA of an empty presence matrix");
  const auto row_totals = v.row_sums();
  const auto col_totals = v.column_sums();

  std::vector<std::vector<SparseEntry>> rows(v.n_entities());
  for (std::size_t s = 0; s < v.n_entities(); ++s) {
    for (const auto& e : v.row(s)) {
      const double share = e.value / row_totals[s];
      const double global = col_totals[e.field] / total;
      rows[s].push_back({e.field, share / global});
    }
  }
  return {x.level, x.window, EntityFieldMatrix::from_rows(v.fields(), v.entities(), std::move(rows))};
}

std::string_view to_string(ActivityState s) {
  switch (s) {
    case ActivityState::Inactive:
      return "inactive";
    case ActivityState::Nascent:
      return "nascent";
    case ActivityState::Intermediate:
      return "intermediate";
    case ActivityState::Developed:
      return "developed";
  }
  return "inactive";
}

ActivityState parse_state(std::string_view text) {
  if (text == "inactive") return ActivityState::Inactive;
  if (text == "nascent") return ActivityState::Nascent;
  if (text == "intermediate") return ActivityState::Intermediate;
  if (text == "developed") return ActivityState::Developed;
  throw std::invalid_argument("unknown activity state: " + std::string(text));
}

ActivityState classify(double rca_value) {
  if (rca_value >= 1.0) return ActivityState::Developed;
  if (rca_value >= 0.5) return ActivityState::Intermediate;
  if (rca_value > 0.0) return ActivityState::Nascent;
  return ActivityState::Inactive;
}

StateMatrix::StateMatrix(Level level, YearWindow window, FieldIndex fields,
                         std::vector<std::string> entities, std::vector<std::vector<StateCell>> rows)
    : level_(level),
      window_(window),
      fields_(std::move(fields)),
      entities_(std::move(entities)),
      rows_(std::move(rows)) {
  if (entities_.size() != rows_.size()) throw std::invalid_argument("entity/row count mismatch");
  for (std::size_t i = 0; i < entities_.size(); ++i) {
    if (i > 0 && !(entities_[i - 1] < entities_[i]))
      throw std::invalid_argument("state entities must be sorted and unique");
    lookup_.emplace(entities_[i], i);
  }
}

std::optional<std::size_t> StateMatrix::find_entity(std::string_view id) const {
  auto it = lookup_.find(std::string(id));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

const StateCell* StateMatrix::cell(std::size_t row, std::size_t field) const {
  const auto& r = rows_[row];
  auto it = std::lower_bound(r.begin(), r.end(), field,
                             [](const StateCell& c, std::size_t f) { return c.field < f; });
  return (it != r.end() && it->field == field) ? &*it : nullptr;
}

ActivityState StateMatrix::state(std::size_t row, std::size_t field) const {
  const auto* c = cell(row, field);
  return c ? c->state : ActivityState::Inactive;
}

double StateMatrix::rca(std::size_t row, std::size_t field) const {
  const auto* c = cell(row, field);
  return c ? c->rca : 0.0;
}

StateMatrix classify_states(const RcaMatrix& r) {
  const auto& v = r.values;
  std::vector<std::vector<StateCell>> rows(v.n_entities());
  for (std::size_t s = 0; s < v.n_entities(); ++s)
    for (const auto& e : v.row(s)) {
      auto st = classify(e.value);
      if (is_active(st)) rows[s].push_back({e.field, st, e.value});
    }
  return StateMatrix(r.level, r.window, v.fields(), v.entities(), std::move(rows));
}

void write_states_csv(std::ostream& out, const StateMatrix& states) {
  out << "entity_id,field_id,rca,state\n";
  for (std::size_t s = 0; s < states.n_entities(); ++s)
    for (const auto& c : states.row(s))
      out << csv::escape(states.entity(s)) << ',' << csv::escape(states.fields().id(c.field)) << ','
          << format_number(c.rca, 6) << ',' << to_string(c.state) << '\n';
}

StateMatrix read_states_csv(std::istream& in, const FieldIndex& fields, Level level,
                            YearWindow window) {
  std::map<std::string, std::map<std::size_t, StateCell>> acc;
  csv::Reader reader(in, {"entity_id", "field_id", "rca", "state"});
  while (auto row = reader.next()) {
    const std::string where = "states line " + std::to_string(row->line);
    if (!row->ok()) throw std::invalid_argument(where + ": " + row->error);
    auto f = fields.find(row->cells[1]);
    if (!f) throw std::invalid_argument(where + ": unknown field " + row->cells[1]);
    auto st = parse_state(row->cells[3]);
    double value = 0.0;
    try {
      value = std::stod(row->cells[2]);
    } catch (const std::exception&) {
      throw std::invalid_argument(where + ": bad rca");
    }
    auto& cells = acc[row->cells[0]];
    if (!is_active(st)) continue;
    if (!cells.emplace(*f, StateCell{*f, st, value}).second)
      throw std::invalid_argument(where + ": duplicate cell");
  }
  std::vector<std::string> entities;
  std::vector<std::vector<StateCell>> rows;
  for (auto& [entity, cells] : acc) {
    entities.push_back(entity);
    std::vector<StateCell> r;
    for (auto& [f, c] : cells) r.push_back(c);
    rows.push_back(std::move(r));
  }
  return StateMatrix(level, window, fields, std::move(entities), std::move(rows));
}

StateMatrix read_states_csv(const std::filesystem::path& path, const FieldIndex& fields,
                            Level level, YearWindow window) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_states_csv(in, fields, level, window);
}

}  // namespace rspace
