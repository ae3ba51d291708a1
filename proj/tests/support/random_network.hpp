// Copyright 2026 The netcode Authors
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

// Random multicast networks with explicit flows.
//
// Each flow is source -> entry node -> node-simple walk through a small
// inner graph -> optional relay -> sink.  Walks for one sink never share an
// edge, and edges are created only when a flow uses them, so nothing is
// dead.  acyclic uses two forward layers; simple_cycle walks one directed
// ring; knot adds a hub with spokes so cycles share edges.  The shape is
// checked after construction and the attempt repeated until it matches.
//
// In knot networks only one flow per sink walks the inner graph.  When two
// flows of the same sink cross a knot, the knot-exit columns of M_t are
// often rank deficient for every choice of exponents, because each knot
// edge carries a fixed combination of all entering symbols.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "netcode/flow_graph.hpp"

namespace testnet {

enum class Shape { acyclic, simple_cycle, knot };

inline const char* to_string(Shape s) {
  switch (s) {
    case Shape::acyclic: return "acyclic";
    case Shape::simple_cycle: return "simple-cycle";
    case Shape::knot: return "knot";
  }
  return "?";
}

struct Limits {
  std::size_t max_edges = 40;
  std::size_t max_h = 4;
  std::size_t max_sinks = 4;
  std::size_t max_knot_edges = 0;  // 0: unbounded
};

inline std::optional<Shape> classify(const netcode::FlowNetwork& net, const netcode::FlowStructure& st,
                                     std::size_t max_knot_edges = 0) {
  const auto knots = netcode::find_knots(net, st);
  if (knots.empty()) return Shape::acyclic;
  bool any_knot = false;
  for (const auto& k : knots) {
    if (max_knot_edges && k.edges.size() > max_knot_edges) return std::nullopt;
    if (k.kind == netcode::KnotKind::knot) any_knot = true;
  }
  return any_knot ? Shape::knot : Shape::simple_cycle;
}

namespace detail {

class Builder {
 public:
  explicit Builder(std::mt19937_64& rng) : rng_(rng) {}

  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool coin(double p) { return std::bernoulli_distribution(p)(rng_); }

  netcode::NodeIndex node(const std::string& name) {
    if (auto n = net_.find_node(name)) return *n;
    return net_.add_node(name);
  }

  /// Lowest parallel copy of u->v not yet used by sink t.
  netcode::EdgeIndex edge(netcode::NodeIndex u, netcode::NodeIndex v, std::size_t t) {
    for (std::size_t copy = 0;; ++copy) {
      auto key = std::make_tuple(u, v, copy);
      auto it = edges_.find(key);
      netcode::EdgeIndex e;
      if (it == edges_.end()) {
        e = net_.add_edge("e" + std::to_string(net_.edges.size() + 1), u, v);
        edges_[key] = e;
      } else {
        e = it->second;
      }
      if (used_[t].insert(e).second) return e;
    }
  }

  bool used(netcode::NodeIndex u, netcode::NodeIndex v, std::size_t t) const {
    auto it = edges_.find(std::make_tuple(u, v, std::size_t{0}));
    return it != edges_.end() && used_[t].count(it->second);
  }

  netcode::FlowNetwork& net() { return net_; }
  void sinks(std::size_t r) { used_.assign(r, {}); }

 private:
  std::mt19937_64& rng_;
  netcode::FlowNetwork net_;
  std::map<std::tuple<netcode::NodeIndex, netcode::NodeIndex, std::size_t>, netcode::EdgeIndex> edges_;
  std::vector<std::set<netcode::EdgeIndex>> used_;
};

inline netcode::FlowNetwork attempt(std::mt19937_64& rng, Shape shape, const Limits& lim) {
  Builder b(rng);
  const std::size_t h = 1 + b.pick(lim.max_h);
  const std::size_t r = 1 + b.pick(lim.max_sinks);
  b.sinks(r);
  std::vector<netcode::NodeIndex> src, snk;
  for (std::size_t i = 0; i < h; ++i) src.push_back(b.node("S" + std::to_string(i + 1)));

  // Inner graph as adjacency over node indices.
  std::vector<netcode::NodeIndex> inner;
  std::vector<std::vector<netcode::NodeIndex>> out;
  std::size_t first_layer = 0;
  auto link = [&](std::size_t a, std::size_t c) { out[a].push_back(static_cast<netcode::NodeIndex>(c)); };
  if (shape == Shape::acyclic) {
    const std::size_t l1 = 2 + b.pick(2), l2 = 2 + b.pick(2);
    first_layer = l1;
    for (std::size_t k = 0; k < l1 + l2; ++k) inner.push_back(b.node("N" + std::to_string(k + 1)));
    out.assign(inner.size(), {});
    for (std::size_t a = 0; a < l1; ++a)
      for (std::size_t c = l1; c < l1 + l2; ++c) link(a, c);
  } else {
    const std::size_t k = 3 + b.pick(3);
    for (std::size_t j = 0; j < k; ++j) inner.push_back(b.node("N" + std::to_string(j + 1)));
    out.assign(k, {});
    for (std::size_t j = 0; j < k; ++j) link(j, (j + 1) % k);
    if (shape == Shape::knot) {
      inner.push_back(b.node("H"));
      out.emplace_back();
      const std::size_t hub = k;
      const std::size_t spokes = 1 + b.pick(2);
      for (std::size_t s = 0; s < spokes; ++s) {
        link(b.pick(k), hub);
        link(hub, b.pick(k));
      }
      if (b.coin(0.5)) link(b.pick(k), b.pick(k));
    }
  }
  for (auto& o : out) {
    std::sort(o.begin(), o.end());
    o.erase(std::unique(o.begin(), o.end()), o.end());
  }

  std::vector<std::size_t> entry(h);
  for (std::size_t i = 0; i < h; ++i) entry[i] = b.pick(shape == Shape::acyclic ? first_layer : inner.size());
  for (std::size_t i = 0; i < h; ++i) b.net().add_source(src[i], std::string(1, static_cast<char>('a' + i)));
  for (std::size_t t = 0; t < r; ++t) {
    snk.push_back(b.node("T" + std::to_string(t + 1)));
    b.net().add_sink(snk[t], "t" + std::to_string(t + 1));
  }
  const netcode::NodeIndex relay = b.node("Q");

  for (std::size_t t = 0; t < r; ++t) {
    const std::size_t walker = b.pick(h);
    for (std::size_t i = 0; i < h; ++i) {
      std::vector<netcode::EdgeIndex> path{b.edge(src[i], inner[entry[i]], t)};
      std::size_t at = entry[i];
      std::set<std::size_t> seen{at};
      std::size_t len = shape == Shape::acyclic ? 1 : b.pick(inner.size() + 1);
      if (shape == Shape::knot && i != walker) len = 0;
      for (std::size_t step = 0; step < len; ++step) {
        std::vector<std::size_t> options;
        for (auto w : out[at])
          if (!seen.count(w) && !b.used(inner[at], inner[w], t)) options.push_back(w);
        if (options.empty()) break;
        const std::size_t w = options[b.pick(options.size())];
        path.push_back(b.edge(inner[at], inner[w], t));
        seen.insert(w);
        at = w;
      }
      if (b.coin(0.3)) {
        path.push_back(b.edge(inner[at], relay, t));
        path.push_back(b.edge(relay, snk[t], t));
      } else {
        path.push_back(b.edge(inner[at], snk[t], t));
      }
      b.net().set_path(t, i, path);
    }
  }
  return b.net();
}

}  // namespace detail

/// A validated random network of the requested shape.  Deterministic in the
/// state of rng.
inline netcode::FlowNetwork random_network(std::mt19937_64& rng, Shape shape, const Limits& lim = {}) {
  for (int tries = 0; tries < 100000; ++tries) {
    auto net = detail::attempt(rng, shape, lim);
    if (net.edges.size() > lim.max_edges) continue;
    const auto st = netcode::validate(net);
    if (classify(net, st, lim.max_knot_edges) == shape) {
      net.name = std::string("random-") + to_string(shape);
      return net;
    }
  }
  throw std::runtime_error("random_network: no instance of the requested shape");
}

}  // namespace testnet
