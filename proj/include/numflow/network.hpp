// Copyright 2026 The numflow Authors
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

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "numflow/utility.hpp"

namespace numflow {

// Node ids are 1..M and link ids 1..L. Matrix rows/columns are 0-based:
// row l-1 of a routing matrix is link l.
using NodeId = int;
using LinkId = int;
using Path = std::vector<LinkId>;

struct Link {
  NodeId tail = 0;
  NodeId head = 0;
  double capacity = 0.0;
  bool operator==(const Link&) const = default;
};

// Directed capacitated graph. Immutable after construction.
class Network {
 public:
  Network() = default;
  // Throws Error(kInvalidNetwork) on non-positive capacities, self-loops,
  // out-of-range node ids, or repeated (tail, head) pairs unless
  // `allow_parallel` is set.
  Network(int node_count, std::vector<Link> links,
          std::vector<NodeId> gateways = {}, bool allow_parallel = false);

  int node_count() const { return node_count_; }
  int link_count() const { return static_cast<int>(links_.size()); }
  const Link& link(LinkId id) const { return links_[static_cast<std::size_t>(id - 1)]; }
  const std::vector<Link>& links() const { return links_; }
  std::vector<double> capacities() const;
  // Outgoing link ids of `node`, ascending.
  const std::vector<LinkId>& out_links(NodeId node) const {
    return out_links_[static_cast<std::size_t>(node - 1)];
  }
  const std::vector<LinkId>& in_links(NodeId node) const {
    return in_links_[static_cast<std::size_t>(node - 1)];
  }
  // Designated ground-connected nodes (empty when the topology has none).
  const std::vector<NodeId>& gateways() const { return gateways_; }
  bool allow_parallel() const { return allow_parallel_; }

  bool operator==(const Network& other) const {
    return node_count_ == other.node_count_ && links_ == other.links_ &&
           gateways_ == other.gateways_;
  }

 private:
  int node_count_ = 0;
  std::vector<Link> links_;
  std::vector<NodeId> gateways_;
  bool allow_parallel_ = false;
  std::vector<std::vector<LinkId>> out_links_;
  std::vector<std::vector<LinkId>> in_links_;
};

// Flows sharing one source-destination pair. Single-path classes carry one
// path; multipath classes carry J.
struct FlowClass {
  NodeId source = 0;
  NodeId destination = 0;
  std::vector<Path> paths;
  std::vector<UtilityFamily> flows;

  const Path& path() const { return paths.front(); }
  bool operator==(const FlowClass&) const = default;
};

// Sparse 0-1 matrix stored by column; every entry present has value 1.
class RoutingMatrix {
 public:
  RoutingMatrix() = default;
  RoutingMatrix(int rows, std::vector<std::vector<int>> columns);

  int rows() const { return rows_; }
  int cols() const { return static_cast<int>(columns_.size()); }
  // Sorted 0-based row indices of column `col`.
  const std::vector<int>& column(int col) const {
    return columns_[static_cast<std::size_t>(col)];
  }
  bool contains(int row, int col) const;
  std::size_t nonzeros() const;

  // R x (length rows) and R^T y (length cols).
  std::vector<double> apply(std::span<const double> x) const;
  std::vector<double> apply_transpose(std::span<const double> y) const;

  bool operator==(const RoutingMatrix&) const = default;

 private:
  int rows_ = 0;
  std::vector<std::vector<int>> columns_;
};

enum class PathMode { kSinglePath, kMultipath };

// The unit of solver input. Use make_instance() to build a validated one.
struct Instance {
  Network network;
  std::vector<FlowClass> classes;
  RoutingMatrix routing;
  PathMode mode = PathMode::kSinglePath;
  int paths_per_class = 1;
  std::uint64_t seed = 0;

  int class_count() const { return static_cast<int>(classes.size()); }
  int flow_count() const;
  // Offset of class i's first flow in the flattened flow vector.
  std::vector<int> flow_offsets() const;
  bool operator==(const Instance&) const = default;
};

// Validates classes and builds the routing matrix ([S_1, ..., S_N] for
// multipath). Throws kInvalidPath, kInvalidUtility, kDimensionMismatch.
Instance make_instance(Network network, std::vector<FlowClass> classes,
                       PathMode mode = PathMode::kSinglePath,
                       std::uint64_t seed = 0);

// Throws Error(kInvalidPath) unless `path` is a directed walk from `src` to
// `dst` over known links with no repeated link.
void validate_path(const Network& net, NodeId src, NodeId dst, const Path& path);

struct PathFilter {
  std::vector<bool> excluded_links;  // indexed by link id - 1
  std::vector<bool> excluded_nodes;  // indexed by node id - 1
};

// Minimum-hop path avoiding the filtered links/nodes; ties go to the
// smallest next node id, then the smallest link id. nullopt if unreachable.
std::optional<Path> shortest_path(const Network& net, NodeId src, NodeId dst,
                                  const PathFilter& filter = {});

// Unit-weight Dijkstra. Throws Error(kNoPath) if dst is unreachable.
Path dijkstra_path(const Network& net, NodeId src, NodeId dst);

RoutingMatrix routing_matrix(const Network& net,
                             std::span<const FlowClass> classes,
                             PathMode mode = PathMode::kSinglePath);

// L x K matrix with one column per flow, equal to its class column.
RoutingMatrix flow_routing_matrix(const Instance& inst);

// Six-node bidirectional ring plus a 1<->4 chord: M = 6, L = 14, c = 10.
// Links 2i-1 and 2i (i = 1..6) are i -> i%6+1 and back; link 13 is 1 -> 4,
// link 14 is 4 -> 1.
Network small_topology();

// 6 planes x 11 satellites, node id = 11 p + s + 1 (p = 0..5, s = 0..10).
// Links 1..132 are the intra-plane rings: for each (p, s), s -> s+1 mod 11
// then the reverse. Links 133..192 are 30 cross-plane pairs between planes
// p and p+1 (p = 0..4, no link across the counter-rotating seam) at slots
// s in {0, 2, 4, 6, 8, 10}, each as (p,s) -> (p+1,s) then the reverse.
// Gateways: one per plane, at slot (2 p) mod 11. All capacities 10.
Network iridium_topology();

// Strongly connected random graph: a directed ring 1 -> 2 -> ... -> M -> 1
// (both directions when `bidirectional_ring`), then extra distinct links
// drawn uniformly until `link_count` links exist. Capacities are uniform on
// [cap_lo, cap_hi].
Network random_topology(int node_count, int link_count, std::uint64_t seed,
                        double cap_lo = 5.0, double cap_hi = 15.0,
                        bool bidirectional_ring = false);

enum class EndpointRule { kAllPairs, kGatewayConstrained };

// Ordered (src, dst) pairs, src != dst, in lexicographic order. The
// gateway-constrained rule keeps pairs with at least one gateway endpoint.
std::vector<std::pair<NodeId, NodeId>> admissible_pairs(const Network& net,
                                                        EndpointRule rule);

struct GenOptions {
  UtilityTag family = UtilityTag::kWeightedLog;
  double exponent = 1.0;  // NegPower only
  int k_min = 10;
  int k_max = 20;
  EndpointRule endpoints = EndpointRule::kAllPairs;
};

// Seeded instance generation with SplitMix64(seed), draws in this order:
//  1. partial Fisher-Yates over admissible_pairs(): for i = 0..N-1,
//     j = i + uniform_index(P - i), swap(pairs[i], pairs[j]); class i gets
//     pairs[i];
//  2. for each class in order: K_i = uniform_int(k_min, k_max), then K_i
//     weights w = uniform_open01();
//  3. each class is routed with dijkstra_path.
// Throws kTooManyClasses, kNoPath.
Instance gen_instance(const Network& net, int n_classes, std::uint64_t seed,
                      const GenOptions& options = {});

// Shared by the single- and multipath generators: steps 1 and 2 above.
std::vector<FlowClass> draw_classes(const Network& net, int n_classes,
                                    std::uint64_t seed,
                                    const GenOptions& options);

}  // namespace numflow
