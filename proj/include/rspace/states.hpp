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

#ifndef RSPACE_STATES_HPP
#define RSPACE_STATES_HPP

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rspace/common.hpp"
#include "rspace/space.hpp"

namespace rspace {

/// Balassa index per (entity, field); zero cells are not stored.
struct RcaMatrix {
  Level level = Level::Author;
  YearWindow window;
  EntityFieldMatrix values;
};

/// RCA_sf = (X_sf / sum_f X_sf) / (sum_s X_sf / sum_sf X_sf).
/// Throws std::invalid_argument when X has no mass.
RcaMatrix rca(const PresenceMatrix& x);

enum class ActivityState : std::uint8_t { Inactive, Nascent, Intermediate, Developed };

std::string_view to_string(ActivityState s);
ActivityState parse_state(std::string_view text);

/// Inactive: 0, Nascent: (0, 0.5), Intermediate: [0.5, 1), Developed: [1, inf).
ActivityState classify(double rca_value);
inline bool is_active(ActivityState s) { return s != ActivityState::Inactive; }

struct StateCell {
  std::size_t field = 0;
  ActivityState state = ActivityState::Inactive;
  double rca = 0.0;
};

/// Four-way partition of entity x field. Only active cells are stored; any
/// other (entity, field) pair of a known entity is Inactive.
class StateMatrix {
 public:
  StateMatrix() = default;
  /// Rows must be sorted by field and hold active cells only; entities sorted and unique.
  StateMatrix(Level level, YearWindow window, FieldIndex fields, std::vector<std::string> entities,
              std::vector<std::vector<StateCell>> rows);

  Level level() const { return level_; }
  YearWindow window() const { return window_; }
  const FieldIndex& fields() const { return fields_; }
  std::size_t n_entities() const { return entities_.size(); }
  const std::string& entity(std::size_t row) const { return entities_[row]; }
  const std::vector<std::string>& entities() const { return entities_; }
  std::span<const StateCell> row(std::size_t r) const { return rows_[r]; }
  std::optional<std::size_t> find_entity(std::string_view id) const;

  ActivityState state(std::size_t row, std::size_t field) const;
  double rca(std::size_t row, std::size_t field) const;

 private:
  const StateCell* cell(std::size_t row, std::size_t field) const;

  Level level_ = Level::Author;
  YearWindow window_;
  FieldIndex fields_;
  std::vector<std::string> entities_;
  std::vector<std::vector<StateCell>> rows_;
  std::unordered_map<std::string, std::size_t> lookup_;
};

StateMatrix classify_states(const RcaMatrix& r);

/// `entity_id,field_id,rca,state`, active cells only, RCA to 6 significant digits.
void write_states_csv(std::ostream& out, const StateMatrix& states);
/// The state column is authoritative; rows naming fields outside `fields`
/// throw std::invalid_argument. Inactive rows are accepted and ignored.
StateMatrix read_states_csv(std::istream& in, const FieldIndex& fields, Level level = Level::Author,
                            YearWindow window = {});
StateMatrix read_states_csv(const std::filesystem::path& path, const FieldIndex& fields,
                            Level level = Level::Author, YearWindow window = {});

}  // namespace rspace

#endif  // RSPACE_STATES_HPP
