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

#ifndef RSPACE_COMMON_HPP
#define RSPACE_COMMON_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace rspace {

/// Aggregation level of the entities carried by a matrix.
enum class Level { Author, Organization, Country };

std::string_view to_string(Level level);
/// Accepts "author", "organization"/"org", "country".
Level parse_level(std::string_view text);

/// Half-open interval of calendar years [start, end).
struct YearWindow {
  int start = 0;
  int end = 0;

  bool empty() const { return end <= start; }
  bool contains(int year) const { return year >= start && year < end; }
  int length() const { return empty() ? 0 : end - start; }
  friend bool operator==(const YearWindow&, const YearWindow&) = default;
};

/// Sorted, duplicate-free list of field ids with O(1) lookup.
class FieldIndex {
 public:
  FieldIndex() = default;
  explicit FieldIndex(std::vector<std::string> ids);

  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  const std::string& id(std::size_t i) const { return ids_[i]; }
  const std::vector<std::string>& ids() const { return ids_; }

  std::optional<std::size_t> find(std::string_view id) const;
  /// Throws std::out_of_range for unknown ids.
  std::size_t index_of(std::string_view id) const;

  friend bool operator==(const FieldIndex& a, const FieldIndex& b) { return a.ids_ == b.ids_; }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::size_t> lookup_;
};

struct SparseEntry {
  std::size_t field = 0;
  double value = 0.0;
};

/// Entity-major sparse matrix over a shared FieldIndex. Entities are kept in
/// sorted id order and each row is sorted by field position. Only strictly
/// positive values are stored.
class EntityFieldMatrix {
 public:
  struct Triplet {
    std::string entity;
    std::size_t field = 0;
    double value = 0.0;
  };

  EntityFieldMatrix() = default;
  explicit EntityFieldMatrix(FieldIndex fields) : fields_(std::move(fields)) {}

  /// Sums duplicate (entity, field) triplets; drops cells whose sum is <= 0.
  static EntityFieldMatrix from_triplets(FieldIndex fields, std::vector<Triplet> triplets);
  /// Rows must be sorted by field with positive values; entities must be sorted and unique.
  static EntityFieldMatrix from_rows(FieldIndex fields, std::vector<std::string> entities,
                                     std::vector<std::vector<SparseEntry>> rows);

  const FieldIndex& fields() const { return fields_; }
  std::size_t n_entities() const { return entities_.size(); }
  std::size_t n_fields() const { return fields_.size(); }
  std::size_t nonzeros() const;
  bool empty() const { return entities_.empty(); }

  const std::string& entity(std::size_t row) const { return entities_[row]; }
  const std::vector<std::string>& entities() const { return entities_; }
  std::span<const SparseEntry> row(std::size_t r) const { return rows_[r]; }
  std::optional<std::size_t> find_entity(std::string_view id) const;
  double value(std::size_t row, std::size_t field) const;

  std::vector<double> row_sums() const;
  std::vector<double> column_sums() const;
  double total() const;

 private:
  FieldIndex fields_;
  std::vector<std::string> entities_;
  std::vector<std::vector<SparseEntry>> rows_;
  std::unordered_map<std::string, std::size_t> lookup_;
};

/// printf("%.*g") formatting used by every text export.
std::string format_number(double value, int significant_digits);

}  // namespace rspace

#endif  // RSPACE_COMMON_HPP
