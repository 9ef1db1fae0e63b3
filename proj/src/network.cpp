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

#include "numflow/network.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <set>
#include <string>

#include "numflow/errors.hpp"
#include "numflow/rng.hpp"

namespace numflow {

Network::Network(int node_count, std::vector<Link> links,
                 std::vector<NodeId> gateways, bool allow_parallel)
    : node_count_(node_count),
      links_(std::move(links)),
      gateways_(std::move(gateways)),
      allow_parallel_(allow_parallel) {
  if (node_count_ <= 0) {
    throw Error(ErrorCode::kInvalidNetwork, "node count must be positive");
  }
  out_links_.assign(static_cast<std::size_t>(node_count_), {});
  in_links_.assign(static_cast<std::size_t>(node_count_), {});
  std::set<std::pair<NodeId, NodeId>> seen;
  for (std::size_t i = 0; i < links_.size(); ++i) {
    const Link& l = links_[i];
    const std::string where = "link " + std::to_string(i + 1);
    if (l.tail < 1 || l.tail > node_count_ || l.head < 1 ||
        l.head > node_count_) {
      throw Error(ErrorCode::kInvalidNetwork, where + ": node id out of range");
    }
    if (l.tail == l.head) {
      throw Error(ErrorCode::kInvalidNetwork, where + ": self-loop");
    }
    if (!(l.capacity > 0.0) || !std::isfinite(l.capacity)) {
      throw Error(ErrorCode::kInvalidNetwork, where + ": capacity must be > 0");
    }
    if (!seen.insert({l.tail, l.head}).second && !allow_parallel_) {
      throw Error(ErrorCode::kInvalidNetwork, where + ": parallel link");
    }
    out_links_[static_cast<std::size_t>(l.tail - 1)].push_back(
        static_cast<LinkId>(i + 1));
    in_links_[static_cast<std::size_t>(l.head - 1)].push_back(
        static_cast<LinkId>(i + 1));
  }
  for (NodeId g : gateways_) {
    if (g < 1 || g > node_count_) {
      throw Error(ErrorCode::kInvalidNetwork, "gateway id out of range");
    }
  }
}

std::vector<double> Network::capacities() const {
  std::vector<double> c;
  c.reserve(links_.size());
  for (const auto& l : links_) c.push_back(l.capacity);
  return c;
}

RoutingMatrix::RoutingMatrix(int rows, std::vector<std::vector<int>> columns)
    : rows_(rows), columns_(std::move(columns)) {
  for (auto& col : columns_) {
    std::sort(col.begin(), col.end());
    if (std::adjacent_find(col.begin(), col.end()) != col.end()) {
      throw Error(ErrorCode::kInvalidPath, "duplicate routing entry");
    }
    for (int r : col) {
      if (r < 0 || r >= rows_) {
        throw Error(ErrorCode::kDimensionMismatch, "routing row out of range");
      }
    }
  }
}

bool RoutingMatrix::contains(int row, int col) const {
  const auto& c = column(col);
  return std::binary_search(c.begin(), c.end(), row);
}

std::size_t RoutingMatrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& c : columns_) n += c.size();
  return n;
}

std::vector<double> RoutingMatrix::apply(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != cols()) {
    throw Error(ErrorCode::kDimensionMismatch, "R x: wrong vector length");
  }
  std::vector<double> y(static_cast<std::size_t>(rows_), 0.0);
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    for (int r : columns_[j]) y[static_cast<std::size_t>(r)] += x[j];
  }
  return y;
}

std::vector<double> RoutingMatrix::apply_transpose(
    std::span<const double> y) const {
  if (static_cast<int>(y.size()) != rows_) {
    throw Error(ErrorCode::kDimensionMismatch, "R^T y: wrong vector length");
  }
  std::vector<double> x(columns_.size(), 0.0);
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    double s = 0.0;
    for (int r : columns_[j]) s += y[static_cast<std::size_t>(r)];
    x[j] = s;
  }
  return x;
}

int Instance::flow_count() const {
  int k = 0;
  for (const auto& c : classes) k += static_cast<int>(c.flows.size());
  return k;
}

std::vector<int> Instance::flow_offsets() const {
  std::vector<int> off;
  off.reserve(classes.size() + 1);
  int k = 0;
  for (const auto& c : classes) {
    off.push_back(k);
    k += static_cast<int>(c.flows.size());
  }
  off.push_back(k);
  return off;
}

void validate_path(const Network& net, NodeId src, NodeId dst,
                   const Path& path) {
  if (path.empty()) throw Error(ErrorCode::kInvalidPath, "empty path");
  std::set<LinkId> used;
  NodeId at = src;
  for (LinkId id : path) {
    if (id < 1 || id > net.link_count()) {
      throw Error(ErrorCode::kInvalidPath,
                  "unknown link id " + std::to_string(id));
    }
    const Link& l = net.link(id);
    if (l.tail != at) {
      throw Error(ErrorCode::kInvalidPath,
                  "link " + std::to_string(id) + " does not continue the walk");
    }
    if (!used.insert(id).second) {
      throw Error(ErrorCode::kInvalidPath,
                  "link " + std::to_string(id) + " repeated");
    }
    at = l.head;
  }
  if (at != dst) {
    throw Error(ErrorCode::kInvalidPath, "path does not end at destination");
  }
}

RoutingMatrix routing_matrix(const Network& net,
                             std::span<const FlowClass> classes,
                             PathMode mode) {
  std::vector<std::vector<int>> columns;
  for (const auto& cls : classes) {
    if (mode == PathMode::kSinglePath && cls.paths.size() != 1) {
      throw Error(ErrorCode::kInvalidPath,
                  "single-path class must carry exactly one path");
    }
    for (const auto& path : cls.paths) {
      validate_path(net, cls.source, cls.destination, path);
      std::vector<int> col;
      col.reserve(path.size());
      for (LinkId id : path) col.push_back(id - 1);
      columns.push_back(std::move(col));
    }
  }
  return RoutingMatrix(net.link_count(), std::move(columns));
}

RoutingMatrix flow_routing_matrix(const Instance& inst) {
  if (inst.mode != PathMode::kSinglePath) {
    throw Error(ErrorCode::kDimensionMismatch,
                "flow routing matrix is defined for single-path instances");
  }
  std::vector<std::vector<int>> columns;
  columns.reserve(static_cast<std::size_t>(inst.flow_count()));
  for (int i = 0; i < inst.class_count(); ++i) {
    const auto& col = inst.routing.column(i);
    for (std::size_t k = 0; k < inst.classes[static_cast<std::size_t>(i)].flows.size(); ++k) {
      columns.push_back(col);
    }
  }
  return RoutingMatrix(inst.routing.rows(), std::move(columns));
}

Instance make_instance(Network network, std::vector<FlowClass> classes,
                       PathMode mode, std::uint64_t seed) {
  Instance inst;
  inst.mode = mode;
  inst.seed = seed;
  inst.paths_per_class =
      classes.empty() ? 1 : static_cast<int>(classes.front().paths.size());
  for (const auto& cls : classes) {
    if (cls.source == cls.destination) {
      throw Error(ErrorCode::kInvalidPath, "class source equals destination");
    }
    if (cls.flows.empty()) {
      throw Error(ErrorCode::kInvalidUtility, "class has no flows");
    }
    for (const auto& f : cls.flows) validate_utility(f);
    if (static_cast<int>(cls.paths.size()) != inst.paths_per_class) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "all classes must carry the same number of paths");
    }
    std::set<std::vector<LinkId>> distinct;
    for (const auto& p : cls.paths) {
      std::vector<LinkId> sorted = p;
      std::sort(sorted.begin(), sorted.end());
      if (!distinct.insert(sorted).second) {
        throw Error(ErrorCode::kInvalidPath, "class paths must be distinct");
      }
    }
  }
  inst.routing = routing_matrix(network, classes, mode);
  inst.network = std::move(network);
  inst.classes = std::move(classes);
  return inst;
}

std::optional<Path> shortest_path(const Network& net, NodeId src, NodeId dst,
                                  const PathFilter& filter) {
  const auto link_ok = [&](LinkId id) {
    return filter.excluded_links.empty() ||
           !filter.excluded_links[static_cast<std::size_t>(id - 1)];
  };
  const auto node_ok = [&](NodeId n) {
    return filter.excluded_nodes.empty() ||
           !filter.excluded_nodes[static_cast<std::size_t>(n - 1)];
  };
  if (!node_ok(src) || !node_ok(dst)) return std::nullopt;

  // With unit weights Dijkstra's label-setting order is breadth-first, so
  // hop distances to dst are computed by BFS over reversed links.
  constexpr int kUnreached = std::numeric_limits<int>::max();
  std::vector<int> dist(static_cast<std::size_t>(net.node_count()), kUnreached);
  std::deque<NodeId> queue{dst};
  dist[static_cast<std::size_t>(dst - 1)] = 0;
  while (!queue.empty()) {
    const NodeId v = queue.front();
    queue.pop_front();
    for (LinkId id : net.in_links(v)) {
      if (!link_ok(id)) continue;
      const NodeId u = net.link(id).tail;
      if (!node_ok(u) || dist[static_cast<std::size_t>(u - 1)] != kUnreached) {
        continue;
      }
      dist[static_cast<std::size_t>(u - 1)] = dist[static_cast<std::size_t>(v - 1)] + 1;
      queue.push_back(u);
    }
  }
  if (dist[static_cast<std::size_t>(src - 1)] == kUnreached) return std::nullopt;

  Path path;
  NodeId at = src;
  while (at != dst) {
    const int want = dist[static_cast<std::size_t>(at - 1)] - 1;
    LinkId best = 0;
    for (LinkId id : net.out_links(at)) {
      if (!link_ok(id)) continue;
      const NodeId h = net.link(id).head;
      if (!node_ok(h) || dist[static_cast<std::size_t>(h - 1)] != want) continue;
      if (best == 0 || h < net.link(best).head) best = id;  // ids ascend
    }
    path.push_back(best);
    at = net.link(best).head;
  }
  return path;
}

Path dijkstra_path(const Network& net, NodeId src, NodeId dst) {
  if (src == dst) throw Error(ErrorCode::kInvalidPath, "src equals dst");
  if (src < 1 || src > net.node_count() || dst < 1 || dst > net.node_count()) {
    throw Error(ErrorCode::kInvalidPath, "node id out of range");
  }
  auto path = shortest_path(net, src, dst);
  if (!path) {
    throw Error(ErrorCode::kNoPath, "no path from " + std::to_string(src) +
                                        " to " + std::to_string(dst));
  }
  return *std::move(path);
}

Network small_topology() {
  std::vector<Link> links;
  for (int i = 1; i <= 6; ++i) {
    const int next = i % 6 + 1;
    links.push_back({i, next, 10.0});
    links.push_back({next, i, 10.0});
  }
  links.push_back({1, 4, 10.0});
  links.push_back({4, 1, 10.0});
  return Network(6, std::move(links));
}

Network iridium_topology() {
  constexpr int kPlanes = 6;
  constexpr int kSlots = 11;
  const auto node = [](int p, int s) { return p * kSlots + s + 1; };
  std::vector<Link> links;
  for (int p = 0; p < kPlanes; ++p) {
    for (int s = 0; s < kSlots; ++s) {
      const int next = (s + 1) % kSlots;
      links.push_back({node(p, s), node(p, next), 10.0});
      links.push_back({node(p, next), node(p, s), 10.0});
    }
  }
  for (int p = 0; p + 1 < kPlanes; ++p) {
    for (int s = 0; s < kSlots; s += 2) {
      links.push_back({node(p, s), node(p + 1, s), 10.0});
      links.push_back({node(p + 1, s), node(p, s), 10.0});
    }
  }
  std::vector<NodeId> gateways;
  for (int p = 0; p < kPlanes; ++p) gateways.push_back(node(p, (2 * p) % kSlots));
  return Network(kPlanes * kSlots, std::move(links), std::move(gateways));
}

Network random_topology(int node_count, int link_count, std::uint64_t seed,
                        double cap_lo, double cap_hi, bool bidirectional_ring) {
  if (node_count < 2) {
    throw Error(ErrorCode::kInvalidNetwork, "random topology needs M >= 2");
  }
  const int ring = bidirectional_ring && node_count > 2 ? 2 * node_count
                                                         : node_count;
  const int max_links = node_count * (node_count - 1);
  if (link_count < ring || link_count > max_links) {
    throw Error(ErrorCode::kInvalidNetwork, "link count out of range");
  }
  SplitMix64 rng(seed);
  std::set<std::pair<NodeId, NodeId>> present;
  std::vector<std::pair<NodeId, NodeId>> arcs;
  for (int i = 1; i <= node_count; ++i) {
    const int next = i % node_count + 1;
    if (present.insert({i, next}).second) arcs.push_back({i, next});
    if (bidirectional_ring && present.insert({next, i}).second) {
      arcs.push_back({next, i});
    }
  }
  std::vector<std::pair<NodeId, NodeId>> candidates;
  for (int u = 1; u <= node_count; ++u) {
    for (int v = 1; v <= node_count; ++v) {
      if (u != v && !present.count({u, v})) candidates.push_back({u, v});
    }
  }
  const std::size_t extra = static_cast<std::size_t>(link_count) - arcs.size();
  for (std::size_t i = 0; i < extra; ++i) {
    const std::size_t j = i + rng.uniform_index(candidates.size() - i);
    std::swap(candidates[i], candidates[j]);
    arcs.push_back(candidates[i]);
  }
  std::vector<Link> links;
  links.reserve(arcs.size());
  for (const auto& [u, v] : arcs) links.push_back({u, v, rng.uniform(cap_lo, cap_hi)});
  return Network(node_count, std::move(links));
}

std::vector<std::pair<NodeId, NodeId>> admissible_pairs(const Network& net,
                                                        EndpointRule rule) {
  std::vector<bool> gateway(static_cast<std::size_t>(net.node_count()), false);
  for (NodeId g : net.gateways()) gateway[static_cast<std::size_t>(g - 1)] = true;
  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (NodeId s = 1; s <= net.node_count(); ++s) {
    for (NodeId d = 1; d <= net.node_count(); ++d) {
      if (s == d) continue;
      if (rule == EndpointRule::kGatewayConstrained &&
          !gateway[static_cast<std::size_t>(s - 1)] &&
          !gateway[static_cast<std::size_t>(d - 1)]) {
        continue;
      }
      pairs.push_back({s, d});
    }
  }
  return pairs;
}

std::vector<FlowClass> draw_classes(const Network& net, int n_classes,
                                    std::uint64_t seed,
                                    const GenOptions& options) {
  auto pairs = admissible_pairs(net, options.endpoints);
  if (n_classes < 0 || static_cast<std::size_t>(n_classes) > pairs.size()) {
    throw Error(ErrorCode::kTooManyClasses,
                std::to_string(n_classes) + " classes requested, " +
                    std::to_string(pairs.size()) + " admissible pairs");
  }
  if (options.k_min < 1 || options.k_max < options.k_min) {
    throw Error(ErrorCode::kInvalidParams, "flow count range is empty");
  }
  if (options.family != UtilityTag::kWeightedLog &&
      options.family != UtilityTag::kNegPower) {
    throw Error(ErrorCode::kNotSupportedUtility,
                "instance generation draws log or power utilities only");
  }
  SplitMix64 rng(seed);
  for (std::size_t i = 0; i < static_cast<std::size_t>(n_classes); ++i) {
    const std::size_t j = i + rng.uniform_index(pairs.size() - i);
    std::swap(pairs[i], pairs[j]);
  }
  std::vector<FlowClass> classes(static_cast<std::size_t>(n_classes));
  for (std::size_t i = 0; i < classes.size(); ++i) {
    auto& cls = classes[i];
    cls.source = pairs[i].first;
    cls.destination = pairs[i].second;
    const auto k = rng.uniform_int(options.k_min, options.k_max);
    cls.flows.reserve(static_cast<std::size_t>(k));
    for (std::int64_t f = 0; f < k; ++f) {
      const double w = rng.uniform_open01();
      if (options.family == UtilityTag::kWeightedLog) {
        cls.flows.emplace_back(WeightedLog{w});
      } else {
        cls.flows.emplace_back(NegPower{w, options.exponent});
      }
    }
  }
  return classes;
}

Instance gen_instance(const Network& net, int n_classes, std::uint64_t seed,
                      const GenOptions& options) {
  auto classes = draw_classes(net, n_classes, seed, options);
  for (auto& cls : classes) {
    cls.paths = {dijkstra_path(net, cls.source, cls.destination)};
  }
  return make_instance(net, std::move(classes), PathMode::kSinglePath, seed);
}

}  // namespace numflow
