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

#ifndef RSPACE_SPACE_HPP
#define RSPACE_SPACE_HPP

#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "rspace/common.hpp"
#include "rspace/ingest.hpp"

namespace rspace {

/// X_sf: summed share weights of entity s in field f over a year window.
struct PresenceMatrix {
  Level level = Level::Author;
  YearWindow window;
  EntityFieldMatrix values;
};

/// Shares falling inside `window` summed per (entity, field). Shares whose
/// field is not in `fields` are ignored.
PresenceMatrix presence_matrix(const std::vector<FieldedPublication>& pubs,
                               const FieldIndex& fields, YearWindow window,
                               Level level = Level::Author);

/// P_sf: (s, f) is a member iff X_sf > threshold.
struct BinaryPresence {
  Level level = Level::Author;
  double threshold = 0.1;
  FieldIndex fields;
  std::vector<std::string> entities;
  /// members[s] lists field positions in ascending order; entities without
  /// any membership are kept with an empty list.
  std::vector<std::vector<std::size_t>> members;

  std::vector<std::int64_t> member_counts() const;
};

BinaryPresence discretize(const PresenceMatrix& x, double threshold = 0.1);

/// Dense symmetric field x field count matrix M.
class CooccurrenceMatrix {
 public:
  CooccurrenceMatrix() = default;
  explicit CooccurrenceMatrix(FieldIndex fields)
      : fields_(std::move(fields)), counts_(fields_.size() * fields_.size(), 0) {}

  const FieldIndex& fields() const { return fields_; }
  std::size_t size() const { return fields_.size(); }
  std::int64_t at(std::size_t f, std::size_t g) const { return counts_[f * size() + g]; }
  std::int64_t& at(std::size_t f, std::size_t g) { return counts_[f * size() + g]; }
  const std::vector<std::int64_t>& counts() const { return counts_; }

 private:
  FieldIndex fields_;
  std::vector<std::int64_t> counts_;
};

/// Counts scholars shared by every pair of fields. Only defined for
/// author-level presence; other levels throw std::invalid_argument.
CooccurrenceMatrix cooccurrence(const BinaryPresence& p);

enum class MapKind { CareerPath, External };

std::string_view to_string(MapKind kind);

/// Dense field x field proximity; at(f, g) is the weight of g as seen from f.
/// For the career-path map, at(f, g) = P(presence in f | presence in g).
class ProximityMatrix {
 public:
  ProximityMatrix() = default;
  ProximityMatrix(FieldIndex fields, MapKind kind)
      : fields_(std::move(fields)), values_(fields_.size() * fields_.size(), 0.0), kind_(kind) {}

  const FieldIndex& fields() const { return fields_; }
  std::size_t size() const { return fields_.size(); }
  MapKind kind() const { return kind_; }
  double at(std::size_t f, std::size_t g) const { return values_[f * size() + g]; }
  double& at(std::size_t f, std::size_t g) { return values_[f * size() + g]; }
  const std::vector<double>& values() const { return values_; }
  bool is_symmetric() const;

 private:
  FieldIndex fields_;
  std::vector<double> values_;
  MapKind kind_ = MapKind::CareerPath;
};

/// phi[f][g] = M[f][g] / (members of g), 0 for memberless g.
ProximityMatrix proximity(const CooccurrenceMatrix& m, const BinaryPresence& p);

/// out[f][g] = max(phi[f][g], phi[g][f]).
ProximityMatrix symmetrize_max(const ProximityMatrix& phi);

struct ExternalMapLoad {
  ProximityMatrix map;
  /// Distinct ids that did not resolve against the field index, sorted.
  std::vector<std::string> unknown_fields;
  std::size_t skipped_edges = 0;
};

/// Reads a `field_i,field_j,weight` edge list into a symmetric matrix over
/// `fields`. Negative weights and conflicting duplicates throw
/// std::invalid_argument.
ExternalMapLoad load_external_map(std::istream& in, const FieldIndex& fields);
ExternalMapLoad load_external_map(const std::filesystem::path& path, const FieldIndex& fields);

/// `field_from,field_to,phi` with 12 significant digits. The diagonal of every
/// field is always written so the field index survives the round trip; other
/// zero cells are omitted.
void write_phi_csv(std::ostream& out, const ProximityMatrix& phi);
ProximityMatrix read_phi_csv(std::istream& in, MapKind kind = MapKind::CareerPath);
ProximityMatrix read_phi_csv(const std::filesystem::path& path, MapKind kind = MapKind::CareerPath);

}  // namespace rspace

#endif  // RSPACE_SPACE_HPP
