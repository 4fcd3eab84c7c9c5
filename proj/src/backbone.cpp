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

#include "rspace/backbone.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace rspace {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> rank_;
};

bool by_pair(const WeightedEdge& x, const WeightedEdge& y) {
  return x.a != y.a ? x.a < y.a : x.b < y.b;
}

std::string format_exact(double v) { return format_number(v, 17); }

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

bool has_states(const BackboneGraph& g) {
  return std::any_of(g.nodes.begin(), g.nodes.end(),
                     [](const BackboneNode& n) { return n.state.has_value(); });
}

std::string to_graphml(const BackboneGraph& g) {
  std::ostringstream out;
  const bool states = has_states(g);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
      << "  <key id=\"name\" for=\"node\" attr.name=\"name\" attr.type=\"string\"/>\n"
      << "  <key id=\"area\" for=\"node\" attr.name=\"area\" attr.type=\"string\"/>\n"
      << "  <key id=\"size\" for=\"node\" attr.name=\"size\" attr.type=\"double\"/>\n";
  if (states) out << "  <key id=\"state\" for=\"node\" attr.name=\"state\" attr.type=\"string\"/>\n";
  out << "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n"
      << "  <key id=\"origin\" for=\"edge\" attr.name=\"origin\" attr.type=\"string\"/>\n"
      << "  <graph id=\"backbone\" edgedefault=\"undirected\">\n";
  for (const auto& n : g.nodes) {
    out << "    <node id=\"" << xml_escape(n.id) << "\">"
        << "<data key=\"name\">" << xml_escape(n.name) << "</data>"
        << "<data key=\"area\">" << xml_escape(n.area) << "</data>"
        << "<data key=\"size\">" << format_exact(n.size) << "</data>";
    if (n.state) out << "<data key=\"state\">" << to_string(*n.state) << "</data>";
    out << "</node>\n";
  }
  for (const auto& e : g.edges) {
    out << "    <edge source=\"" << xml_escape(g.nodes[e.a].id) << "\" target=\""
        << xml_escape(g.nodes[e.b].id) << "\">"
        << "<data key=\"weight\">" << format_exact(e.weight) << "</data>"
        << "<data key=\"origin\">" << to_string(e.origin) << "</data></edge>\n";
  }
  out << "  </graph>\n</graphml>\n";
  return out.str();
}

std::string to_dot(const BackboneGraph& g) {
  std::ostringstream out;
  out << "graph backbone {\n";
  for (const auto& n : g.nodes) {
    out << "  " << dot_quote(n.id) << " [name=" << dot_quote(n.name)
        << ", area=" << dot_quote(n.area) << ", size=" << format_exact(n.size);
    if (n.state) out << ", state=" << dot_quote(to_string(*n.state));
    out << "];\n";
  }
  for (const auto& e : g.edges)
    out << "  " << dot_quote(g.nodes[e.a].id) << " -- " << dot_quote(g.nodes[e.b].id)
        << " [weight=" << format_exact(e.weight) << ", origin=" << dot_quote(to_string(e.origin))
        << "];\n";
  out << "}\n";
  return out.str();
}

std::string to_json(const BackboneGraph& g) {
  nlohmann::ordered_json doc;
  doc["nodes"] = nlohmann::ordered_json::array();
  doc["edges"] = nlohmann::ordered_json::array();
  for (const auto& n : g.nodes) {
    nlohmann::ordered_json node{{"id", n.id}, {"name", n.name}, {"area", n.area}, {"size", n.size}};
    if (n.state) node["state"] = std::string(to_string(*n.state));
    doc["nodes"].push_back(std::move(node));
  }
  for (const auto& e : g.edges)
    doc["edges"].push_back({{"source", g.nodes[e.a].id},
                            {"target", g.nodes[e.b].id},
                            {"weight", e.weight},
                            {"origin", std::string(to_string(e.origin))}});
  return doc.dump();
}

}  // namespace

double SpanningForest::total_weight() const {
  double t = 0.0;
  for (const auto& e : edges) t += e.weight;
  return t;
}

SpanningForest max_spanning_tree(const ProximityMatrix& sym) {
  if (!sym.is_symmetric()) throw std::invalid_argument("spanning tree needs a symmetric matrix");
  const std::size_t n = sym.size();
  std::vector<WeightedEdge> candidates;
  std::vector<bool> touched(n, false);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (sym.at(a, b) > 0.0) {
        candidates.push_back({a, b, sym.at(a, b)});
        touched[a] = touched[b] = true;
      }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const WeightedEdge& x, const WeightedEdge& y) {
                     if (x.weight != y.weight) return x.weight > y.weight;
                     return by_pair(x, y);
                   });
  SpanningForest forest;
  DisjointSets sets(n);
  for (const auto& e : candidates)
    if (sets.unite(e.a, e.b)) forest.edges.push_back(e);
  std::sort(forest.edges.begin(), forest.edges.end(), by_pair);
  for (std::size_t v = 0; v < n; ++v) {
    if (!touched[v]) {
      forest.isolated.push_back(v);
      continue;
    }
    ++forest.connected_nodes;
    if (sets.find(v) == v) ++forest.components;
  }
  return forest;
}

std::vector<WeightedEdge> threshold_edges(const ProximityMatrix& sym, double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw std::invalid_argument("tau must lie in [0, 1]");
  std::vector<WeightedEdge> out;
  for (std::size_t a = 0; a < sym.size(); ++a)
    for (std::size_t b = a + 1; b < sym.size(); ++b)
      if (sym.at(a, b) > tau) out.push_back({a, b, sym.at(a, b)});
  return out;
}

std::string_view to_string(EdgeOrigin o) {
  switch (o) {
    case EdgeOrigin::Mst:
      return "mst";
    case EdgeOrigin::Threshold:
      return "threshold";
    case EdgeOrigin::Both:
      return "both";
  }
  return "mst";
}

BackboneGraph build_backbone(const ProximityMatrix& phi, double tau,
                             const std::map<std::string, double>& node_sizes,
                             const FieldClassification* classification) {
  const auto sym = symmetrize_max(phi);
  const auto forest = max_spanning_tree(sym);
  const auto above = threshold_edges(sym, tau);

  BackboneGraph g;
  const auto& ids = sym.fields();
  for (std::size_t f = 0; f < ids.size(); ++f) {
    BackboneNode node{ids.id(f), ids.id(f), "", 0.0, std::nullopt};
    if (classification)
      if (const auto* meta = classification->meta(ids.id(f))) {
        node.name = meta->name;
        node.area = meta->area_id;
      }
    if (auto it = node_sizes.find(ids.id(f)); it != node_sizes.end()) node.size = it->second;
    g.nodes.push_back(std::move(node));
  }
  std::map<std::pair<std::size_t, std::size_t>, BackboneEdge> edges;
  for (const auto& e : forest.edges) edges[{e.a, e.b}] = {e.a, e.b, e.weight, EdgeOrigin::Mst};
  for (const auto& e : above) {
    auto [it, inserted] =
        edges.try_emplace({e.a, e.b}, BackboneEdge{e.a, e.b, e.weight, EdgeOrigin::Threshold});
    if (!inserted) it->second.origin = EdgeOrigin::Both;
  }
  for (auto& [key, e] : edges) g.edges.push_back(e);
  return g;
}

BackboneGraph overlay_states(BackboneGraph graph, const StateMatrix& states,
                             std::string_view entity) {
  auto row = states.find_entity(entity);
  if (!row) throw std::invalid_argument("unknown entity " + std::string(entity));
  for (auto& node : graph.nodes) {
    auto f = states.fields().find(node.id);
    node.state = f ? states.state(*row, *f) : ActivityState::Inactive;
  }
  return graph;
}

GraphFormat parse_graph_format(std::string_view text) {
  if (text == "graphml") return GraphFormat::GraphML;
  if (text == "dot") return GraphFormat::Dot;
  if (text == "json") return GraphFormat::Json;
  throw std::invalid_argument("unknown graph format: " + std::string(text));
}

std::string export_graph(const BackboneGraph& graph, GraphFormat format) {
  switch (format) {
    case GraphFormat::GraphML:
      return to_graphml(graph);
    case GraphFormat::Dot:
      return to_dot(graph);
    case GraphFormat::Json:
      return to_json(graph);
  }
  throw std::invalid_argument("unknown graph format");
}

}  // namespace rspace
