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

#ifndef VIPGUIDE__GLOBAL_PLANNER_HPP_
#define VIPGUIDE__GLOBAL_PLANNER_HPP_

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace vipguide::global_planner
{

struct Node
{
  std::string id;
  double x = 0.0;
  double y = 0.0;
};

struct Edge
{
  std::string u;
  std::string v;
  double weight = 0.0;
  bool blocked = false;
};

/// Undirected street graph. Node ids are ordered lexicographically, which is
/// the order used for deterministic tie-breaking.
class NavGraph
{
public:
  /// Throws SchemaError on a duplicate id.
  void add_node(Node node);

  /// Throws SchemaError on unknown endpoints, self-loops, duplicate pairs or a
  /// weight that is not finite and positive.
  void add_edge(const std::string & u, const std::string & v, double weight, bool blocked = false);

  /// Marks the edge as never traversable. Idempotent. Throws SchemaError if
  /// the edge does not exist.
  void block_edge(const std::string & u, const std::string & v);

  bool has_node(const std::string & id) const { return index_.count(id) != 0; }
  const Edge * find_edge(const std::string & u, const std::string & v) const;

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Node> & nodes() const { return nodes_; }
  const std::vector<Edge> & edges() const { return edges_; }

  /// Dense index of a node id (position in id order). Throws SchemaError if unknown.
  std::size_t index_of(const std::string & id) const;

  /// Edge indices incident to the node at `index`.
  const std::vector<std::size_t> & incident(std::size_t index) const { return adjacency_[index]; }

private:
  void reindex();

  std::vector<Node> nodes_;  // sorted by id
  std::map<std::string, std::size_t> index_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::map<std::pair<std::string, std::string>, std::size_t> edge_lookup_;
};

/// `{"nodes":[{"id":str,"pos":[x,y]}],"edges":[{"u":str,"v":str,"w":float}]}`.
/// An optional boolean "blocked" per edge is honoured.
NavGraph load_graph(std::string_view json_text);
NavGraph load_graph_file(const std::string & path);
std::string graph_to_json(const NavGraph & graph);

struct Route
{
  std::vector<std::string> nodes;
  double total_cost = 0.0;

  bool operator==(const Route &) const = default;
};

/// Minimum-cost route over unblocked edges. Among equal-cost routes the
/// lexicographically smallest node-id sequence wins. Throws
/// UnreachableError when no route exists, SchemaError for unknown nodes.
Route shortest_path(const NavGraph & graph, const std::string & src, const std::string & dst);

/// Functional form of NavGraph::block_edge.
NavGraph block_edge(NavGraph graph, const std::string & u, const std::string & v);

/// Shortest route from the current position under the graph's present
/// blocked state.
Route replan(const NavGraph & graph, const std::string & current, const std::string & dst);

/// Single-writer holder of the live graph. Readers take an immutable snapshot.
class GraphStore
{
public:
  explicit GraphStore(NavGraph graph);

  std::shared_ptr<const NavGraph> snapshot() const;
  void block_edge(const std::string & u, const std::string & v);

private:
  mutable std::mutex mutex_;
  std::shared_ptr<const NavGraph> graph_;
};

}  // namespace vipguide::global_planner

#endif  // VIPGUIDE__GLOBAL_PLANNER_HPP_
