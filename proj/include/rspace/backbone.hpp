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

#ifndef RSPACE_BACKBONE_HPP
#define RSPACE_BACKBONE_HPP

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rspace/ingest.hpp"
#include "rspace/space.hpp"
#include "rspace/states.hpp"

namespace rspace {

/// Undirected edge between field positions a < b.
struct WeightedEdge {
  std::size_t a = 0;
  std::size_t b = 0;
  double weight = 0.0;
  friend bool operator==(const WeightedEdge&, const WeightedEdge&) = default;
};

struct SpanningForest {
  std::vector<WeightedEdge> edges;  // sorted by (a, b)
  /// Components among nodes with at least one positive off-diagonal weight.
  std::size_t components = 0;
  std::size_t connected_nodes = 0;
  std::vector<std::size_t> isolated;
  double total_weight() const;
};

/// Kruskal over the positive-weight graph, heaviest edges first, ties broken
/// by (a, b). Throws std::invalid_argument on an asymmetric matrix.
SpanningForest max_spanning_tree(const ProximityMatrix& sym);

/// Unordered pairs with weight > tau, sorted by (a, b).
std::vector<WeightedEdge> threshold_edges(const ProximityMatrix& sym, double tau = 0.212);

enum class EdgeOrigin { Mst, Threshold, Both };
std::string_view to_string(EdgeOrigin o);

struct BackboneNode {
  std::string id;
  std::string name;
  std::string area;
  double size = 0.0;
  std::optional<ActivityState> state;
};

struct BackboneEdge {
  std::size_t a = 0;  // node positions, a < b
  std::size_t b = 0;
  double weight = 0.0;
  EdgeOrigin origin = EdgeOrigin::Mst;
};

struct BackboneGraph {
  std::vector<BackboneNode> nodes;  // sorted by id
  std::vector<BackboneEdge> edges;  // sorted by (a, b)
};

/// Max-symmetrizes phi, then keeps the spanning forest plus every link above
/// tau. Node names and areas come from `classification` when given; missing
/// sizes are 0.
BackboneGraph build_backbone(const ProximityMatrix& phi, double tau,
                             const std::map<std::string, double>& node_sizes,
                             const FieldClassification* classification = nullptr);

/// Annotates every node with the entity's state (Inactive when absent).
/// Throws std::invalid_argument for an unknown entity.
BackboneGraph overlay_states(BackboneGraph graph, const StateMatrix& states,
                             std::string_view entity);

enum class GraphFormat { GraphML, Dot, Json };
GraphFormat parse_graph_format(std::string_view text);

std::string export_graph(const BackboneGraph& graph, GraphFormat format);

}  // namespace rspace

#endif  // RSPACE_BACKBONE_HPP
