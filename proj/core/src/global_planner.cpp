// Copyright 2026 The vipguide Authors
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

#include "vipguide/global_planner.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>

#include "json.hpp"
#include "vipguide/errors.hpp"
#include "vipguide/frame_io.hpp"

namespace vipguide::global_planner
{
namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();

std::pair<std::string, std::string> key_of(const std::string & u, const std::string & v)
{
  return u < v ? std::pair{u, v} : std::pair{v, u};
}

const std::string & other_end(const Edge & e, const std::string & from)
{
  return e.u == from ? e.v : e.u;
}

/// Single-source distances over unblocked edges.
std::vector<double> dijkstra(const NavGraph & g, std::size_t source)
{
  std::vector<double> dist(g.node_count(), kInf);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist[source] = 0.0;
  queue.push({0.0, source});
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (d > dist[u]) {
      continue;
    }
    for (auto ei : g.incident(u)) {
      const Edge & e = g.edges()[ei];
      if (e.blocked) {
        continue;
      }
      const std::size_t v = g.index_of(other_end(e, g.nodes()[u].id));
      const double nd = d + e.weight;
      if (nd < dist[v]) {
        dist[v] = nd;
        queue.push({nd, v});
      }
    }
  }
  return dist;
}

}  // namespace

void NavGraph::add_node(Node node)
{
  if (node.id.empty()) {
    throw SchemaError("node id must be non-empty");
  }
  if (index_.count(node.id) != 0) {
    throw SchemaError("duplicate node '" + node.id + "'");
  }
  auto pos = std::lower_bound(nodes_.begin(), nodes_.end(), node.id, [](const Node & n, const std::string & id) {
    return n.id < id;
  });
  nodes_.insert(pos, std::move(node));
  reindex();
}

void NavGraph::add_edge(const std::string & u, const std::string & v, double weight, bool blocked)
{
  const std::string name = "edge " + u + "-" + v;
  if (!has_node(u)) {
    throw SchemaError(name + " references unknown node '" + u + "'");
  }
  if (!has_node(v)) {
    throw SchemaError(name + " references unknown node '" + v + "'");
  }
  if (u == v) {
    throw SchemaError(name + " is a self-loop");
  }
  if (!(weight > 0.0) || !std::isfinite(weight)) {
    throw SchemaError(name + " has non-positive or non-finite weight");
  }
  const auto key = key_of(u, v);
  if (edge_lookup_.count(key) != 0) {
    throw SchemaError("duplicate " + name);
  }
  edge_lookup_.emplace(key, edges_.size());
  adjacency_[index_.at(u)].push_back(edges_.size());
  adjacency_[index_.at(v)].push_back(edges_.size());
  edges_.push_back({u, v, weight, blocked});
}

void NavGraph::block_edge(const std::string & u, const std::string & v)
{
  auto it = edge_lookup_.find(key_of(u, v));
  if (it == edge_lookup_.end()) {
    throw SchemaError("cannot block missing edge " + u + "-" + v);
  }
  edges_[it->second].blocked = true;
}

const Edge * NavGraph::find_edge(const std::string & u, const std::string & v) const
{
  auto it = edge_lookup_.find(key_of(u, v));
  return it == edge_lookup_.end() ? nullptr : &edges_[it->second];
}

std::size_t NavGraph::index_of(const std::string & id) const
{
  auto it = index_.find(id);
  if (it == index_.end()) {
    throw SchemaError("unknown node '" + id + "'");
  }
  return it->second;
}

void NavGraph::reindex()
{
  index_.clear();
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    index_.emplace(nodes_[i].id, i);
  }
  adjacency_.assign(nodes_.size(), {});
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    adjacency_[index_.at(edges_[e].u)].push_back(e);
    adjacency_[index_.at(edges_[e].v)].push_back(e);
  }
}

NavGraph load_graph(std::string_view json_text)
{
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text.begin(), json_text.end());
  } catch (const nlohmann::json::exception & e) {
    throw SchemaError(std::string("graph is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("nodes") || !j["nodes"].is_array() || !j.contains("edges") ||
      !j["edges"].is_array()) {
    throw SchemaError("graph must be an object with 'nodes' and 'edges' arrays");
  }
  NavGraph g;
  for (std::size_t i = 0; i < j["nodes"].size(); ++i) {
    const auto & n = j["nodes"][i];
    const std::string name = "nodes[" + std::to_string(i) + "]";
    if (!n.is_object() || !n.contains("id") || !n["id"].is_string()) {
      throw SchemaError(name + " needs a string 'id'");
    }
    Node node{n["id"].get<std::string>(), 0.0, 0.0};
    if (n.contains("pos")) {
      const auto & pos = n["pos"];
      if (!pos.is_array() || pos.size() != 2 || !pos[0].is_number() || !pos[1].is_number()) {
        throw SchemaError("node '" + node.id + "' has a malformed 'pos'");
      }
      node.x = pos[0].get<double>();
      node.y = pos[1].get<double>();
    }
    g.add_node(std::move(node));
  }
  for (std::size_t i = 0; i < j["edges"].size(); ++i) {
    const auto & e = j["edges"][i];
    const std::string name = "edges[" + std::to_string(i) + "]";
    if (!e.is_object() || !e.contains("u") || !e["u"].is_string() || !e.contains("v") ||
        !e["v"].is_string() || !e.contains("w") || !e["w"].is_number()) {
      throw SchemaError(name + " needs string 'u', 'v' and numeric 'w'");
    }
    bool blocked = false;
    if (e.contains("blocked")) {
      if (!e["blocked"].is_boolean()) {
        throw SchemaError(name + ".blocked must be a boolean");
      }
      blocked = e["blocked"].get<bool>();
    }
    g.add_edge(e["u"].get<std::string>(), e["v"].get<std::string>(), e["w"].get<double>(), blocked);
  }
  return g;
}

NavGraph load_graph_file(const std::string & path)
{
  return load_graph(perception::read_file(path));
}

std::string graph_to_json(const NavGraph & graph)
{
  nlohmann::ordered_json j;
  j["nodes"] = nlohmann::ordered_json::array();
  for (const auto & n : graph.nodes()) {
    j["nodes"].push_back({{"id", n.id}, {"pos", {n.x, n.y}}});
  }
  j["edges"] = nlohmann::ordered_json::array();
  for (const auto & e : graph.edges()) {
    nlohmann::ordered_json edge{{"u", e.u}, {"v", e.v}, {"w", e.weight}};
    if (e.blocked) {
      edge["blocked"] = true;
    }
    j["edges"].push_back(std::move(edge));
  }
  return j.dump(2);
}

Route shortest_path(const NavGraph & graph, const std::string & src, const std::string & dst)
{
  const std::size_t s = graph.index_of(src);
  const std::size_t t = graph.index_of(dst);
  if (s == t) {
    return Route{{src}, 0.0};
  }
  const auto to_dst = dijkstra(graph, t);
  const double total = to_dst[s];
  if (!std::isfinite(total)) {
    throw UnreachableError("no unblocked route from '" + src + "' to '" + dst + "'");
  }

  // Walk forward choosing the smallest next id that still completes an
  // optimal route; this yields the lexicographically smallest optimal sequence.
  const double eps = 1e-9 * std::max(1.0, total);
  Route route{{src}, 0.0};
  std::vector<bool> visited(graph.node_count(), false);
  visited[s] = true;
  std::size_t u = s;
  double acc = 0.0;
  while (u != t) {
    std::size_t best = graph.node_count();
    double best_w = 0.0;
    for (auto ei : graph.incident(u)) {
      const Edge & e = graph.edges()[ei];
      if (e.blocked) {
        continue;
      }
      const std::size_t v = graph.index_of(other_end(e, graph.nodes()[u].id));
      if (visited[v] || acc + e.weight + to_dst[v] > total + eps) {
        continue;
      }
      if (v < best) {
        best = v;
        best_w = e.weight;
      }
    }
    if (best == graph.node_count()) {
      throw UnreachableError("route reconstruction failed from '" + src + "'");
    }
    visited[best] = true;
    acc += best_w;
    route.nodes.push_back(graph.nodes()[best].id);
    u = best;
  }
  route.total_cost = acc;
  return route;
}

NavGraph block_edge(NavGraph graph, const std::string & u, const std::string & v)
{
  graph.block_edge(u, v);
  return graph;
}

Route replan(const NavGraph & graph, const std::string & current, const std::string & dst)
{
  return shortest_path(graph, current, dst);
}

GraphStore::GraphStore(NavGraph graph) : graph_(std::make_shared<const NavGraph>(std::move(graph)))
{
}

std::shared_ptr<const NavGraph> GraphStore::snapshot() const
{
  std::lock_guard lock(mutex_);
  return graph_;
}

void GraphStore::block_edge(const std::string & u, const std::string & v)
{
  std::lock_guard lock(mutex_);
  auto next = std::make_shared<NavGraph>(*graph_);
  next->block_edge(u, v);
  graph_ = std::move(next);
}

}  // namespace vipguide::global_planner
