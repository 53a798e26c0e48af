// Copyright 2026 The gateforge Authors
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

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <utility>
#include <vector>

namespace gateforge {

/// Vantage-point tree over points 0..n-1 of a metric space. The tree stores
/// indices only; callers supply distances as callables, so the same tree can
/// serve any point storage. Queries are exact: pruning relies only on the
/// triangle inequality of the metric used at build time.
class VpTree {
 public:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  struct Hit {
    std::size_t index = npos;
    double distance = std::numeric_limits<double>::infinity();
  };

  VpTree() = default;

  /// `pair_distance(i, j)` must be a metric on 0..n-1.
  template <typename PairDistance>
  VpTree(std::size_t n, PairDistance&& pair_distance, std::uint64_t seed = 0x5eedu) {
    if (n == 0) return;
    if (n > std::numeric_limits<std::uint32_t>::max())
      throw std::length_error("VpTree: too many points");
    std::vector<Item> items(n);
    for (std::size_t i = 0; i < n; ++i) items[i].index = static_cast<std::uint32_t>(i);
    nodes_.reserve(n);
    std::mt19937_64 rng(seed);
    root_ = build(items, 0, n, pair_distance, rng);
  }

  std::size_t size() const noexcept { return nodes_.size(); }
  bool empty() const noexcept { return nodes_.empty(); }

  /// Closest point whose distance is <= bound; ties go to the smaller index.
  /// `distance_to(i)` is the distance from point i to the query.
  template <typename QueryDistance>
  std::optional<Hit> nearest(QueryDistance&& distance_to,
                             double bound = std::numeric_limits<double>::infinity()) const {
    Hit best{npos, bound};
    if (root_ < 0) return std::nullopt;
    std::vector<std::pair<std::int32_t, double>> stack{{root_, 0.0}};
    while (!stack.empty()) {
      const auto [id, lower] = stack.back();
      stack.pop_back();
      if (lower > best.distance) continue;
      const Node& node = nodes_[static_cast<std::size_t>(id)];
      const double d = distance_to(static_cast<std::size_t>(node.point));
      if (d < best.distance || (d == best.distance && node.point < best.index))
        best = {node.point, d};
      const double lower_in = std::max(0.0, d - node.radius);
      const double lower_out = std::max(0.0, node.radius - d);
      // Near side is pushed last so it is popped first.
      if (d < node.radius) {
        push(stack, node.outside, lower_out, best.distance);
        push(stack, node.inside, lower_in, best.distance);
      } else {
        push(stack, node.inside, lower_in, best.distance);
        push(stack, node.outside, lower_out, best.distance);
      }
    }
    if (best.index == npos) return std::nullopt;
    return best;
  }

  /// All points within `radius` of the query, in ascending index order.
  template <typename QueryDistance>
  std::vector<Hit> within(QueryDistance&& distance_to, double radius) const {
    std::vector<Hit> out;
    if (root_ < 0) return out;
    std::vector<std::int32_t> stack{root_};
    while (!stack.empty()) {
      const Node& node = nodes_[static_cast<std::size_t>(stack.back())];
      stack.pop_back();
      const double d = distance_to(static_cast<std::size_t>(node.point));
      if (d <= radius) out.push_back({node.point, d});
      if (node.inside >= 0 && d - node.radius <= radius) stack.push_back(node.inside);
      if (node.outside >= 0 && node.radius - d <= radius) stack.push_back(node.outside);
    }
    std::sort(out.begin(), out.end(),
              [](const Hit& a, const Hit& b) { return a.index < b.index; });
    return out;
  }

 private:
  struct Node {
    std::uint32_t point = 0;
    double radius = 0.0;
    std::int32_t inside = -1;   // distance to point <= radius
    std::int32_t outside = -1;  // distance to point >= radius
  };

  struct Item {
    std::uint32_t index = 0;
    double distance = 0.0;
  };

  static void push(std::vector<std::pair<std::int32_t, double>>& stack,
                   std::int32_t child, double lower, double best) {
    if (child >= 0 && lower <= best) stack.emplace_back(child, lower);
  }

  template <typename PairDistance>
  std::int32_t build(std::vector<Item>& items, std::size_t lo, std::size_t hi,
                     PairDistance& pair_distance, std::mt19937_64& rng) {
    if (lo >= hi) return -1;
    std::uniform_int_distribution<std::size_t> pick(lo, hi - 1);
    std::swap(items[lo], items[pick(rng)]);
    const auto id = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back({items[lo].index, 0.0, -1, -1});
    if (hi - lo == 1) return id;

    const std::uint32_t vantage = items[lo].index;
    for (std::size_t k = lo + 1; k < hi; ++k)
      items[k].distance = pair_distance(static_cast<std::size_t>(vantage),
                                        static_cast<std::size_t>(items[k].index));
    const std::size_t mid = lo + 1 + (hi - lo - 1) / 2;
    std::nth_element(items.begin() + static_cast<std::ptrdiff_t>(lo + 1),
                     items.begin() + static_cast<std::ptrdiff_t>(mid),
                     items.begin() + static_cast<std::ptrdiff_t>(hi),
                     [](const Item& a, const Item& b) {
                       return a.distance < b.distance ||
                              (a.distance == b.distance && a.index < b.index);
                     });
    const double radius = items[mid].distance;
    const std::int32_t inside = build(items, lo + 1, mid, pair_distance, rng);
    const std::int32_t outside = build(items, mid, hi, pair_distance, rng);
    Node& node = nodes_[static_cast<std::size_t>(id)];
    node.radius = radius;
    node.inside = inside;
    node.outside = outside;
    return id;
  }

  std::vector<Node> nodes_;
  std::int32_t root_ = -1;
};

}  // namespace gateforge
