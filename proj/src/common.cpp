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

#include "rspace/common.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <stdexcept>

namespace rspace {

std::string_view to_string(Level level) {
  switch (level) {
    case Level::Author:
      return "author";
    case Level::Organization:
      return "organization";
    case Level::Country:
      return "country";
  }
  return "author";
}

Level parse_level(std::string_view text) {
  if (text == "author" || text == "individual") return Level::Author;
  if (text == "organization" || text == "org") return Level::Organization;
  if (text == "country") return Level::Country;
  throw std::invalid_argument("unknown aggregation level: " + std::string(text));
}

FieldIndex::FieldIndex(std::vector<std::string> ids) : ids_(std::move(ids)) {
  std::sort(ids_.begin(), ids_.end());
  ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
  lookup_.reserve(ids_.size());
  for (std::size_t i = 0; i < ids_.size(); ++i) lookup_.emplace(ids_[i], i);
}

std::optional<std::size_t> FieldIndex::find(std::string_view id) const {
  auto it = lookup_.find(std::string(id));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

std::size_t FieldIndex::index_of(std::string_view id) const {
  auto pos = find(id);
  if (!pos) throw std::out_of_range("unknown field id: " + std::string(id));
  return *pos;
}

EntityFieldMatrix EntityFieldMatrix::from_triplets(FieldIndex fields,
                                                   std::vector<Triplet> triplets) {
  std::map<std::string, std::map<std::size_t, double>> acc;
  for (auto& t : triplets) {
    if (t.field >= fields.size()) throw std::out_of_range("triplet field position out of range");
    acc[std::move(t.entity)][t.field] += t.value;
  }
  std::vector<std::string> entities;
  std::vector<std::vector<SparseEntry>> rows;
  for (auto& [entity, cells] : acc) {
    std::vector<SparseEntry> row;
    for (const auto& [field, value] : cells) {
      if (value > 0.0) row.push_back({field, value});
    }
    if (row.empty()) continue;
    entities.push_back(entity);
    rows.push_back(std::move(row));
  }
  return from_rows(std::move(fields), std::move(entities), std::move(rows));
}

EntityFieldMatrix EntityFieldMatrix::from_rows(FieldIndex fields, std::vector<std::string> entities,
                                               std::vector<std::vector<SparseEntry>> rows) {
  if (entities.size() != rows.size()) throw std::invalid_argument("entity/row count mismatch");
  EntityFieldMatrix m(std::move(fields));
  m.entities_ = std::move(entities);
  m.rows_ = std::move(rows);
  m.lookup_.reserve(m.entities_.size());
  for (std::size_t i = 0; i < m.entities_.size(); ++i) {
    if (i > 0 && !(m.entities_[i - 1] < m.entities_[i]))
      throw std::invalid_argument("entities must be sorted and unique");
    m.lookup_.emplace(m.entities_[i], i);
  }
  return m;
}

std::size_t EntityFieldMatrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& r : rows_) n += r.size();
  return n;
}

std::optional<std::size_t> EntityFieldMatrix::find_entity(std::string_view id) const {
  auto it = lookup_.find(std::string(id));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

double EntityFieldMatrix::value(std::size_t row, std::size_t field) const {
  const auto& r = rows_[row];
  auto it = std::lower_bound(r.begin(), r.end(), field,
                             [](const SparseEntry& e, std::size_t f) { return e.field < f; });
  return (it != r.end() && it->field == field) ? it->value : 0.0;
}

std::vector<double> EntityFieldMatrix::row_sums() const {
  std::vector<double> sums(rows_.size(), 0.0);
  for (std::size_t i = 0; i < rows_.size(); ++i)
    for (const auto& e : rows_[i]) sums[i] += e.value;
  return sums;
}

std::vector<double> EntityFieldMatrix::column_sums() const {
  std::vector<double> sums(fields_.size(), 0.0);
  for (const auto& r : rows_)
    for (const auto& e : r) sums[e.field] += e.value;
  return sums;
}

double EntityFieldMatrix::total() const {
  double t = 0.0;
  for (const auto& r : rows_)
    for (const auto& e : r) t += e.value;
  return t;
}

std::string format_number(double value, int significant_digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", significant_digits, value);
  return buf;
}

}  // namespace rspace
