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

/**
 * @file flow_graph.hpp
 * @brief Directed multigraph with unit-rate sources, sinks and per-sink
 * edge-disjoint flow paths.
 *
 * The flow paths induce a precedence relation on edges: e' -> e whenever
 * some sink's flow has e' immediately before e.  Everything downstream
 * (visitation order, flow cycles, knots, line graphs) is derived from that
 * relation, which is materialised once in FlowStructure.
 *
 * Network file format, one declaration per line, '#' starts a comment:
 *
 *     node <id>
 *     edge <id> <from> <to>
 *     source <node> <symbol>
 *     sink <node> <name>
 *     flow <sink> <symbol> : <edge> <edge> ...
 */

#include <algorithm>
#include <cstdint>
#include <deque>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "netcode/errors.hpp"
#include "netcode/gf2.hpp"

namespace netcode {

using NodeIndex = std::size_t;
using EdgeIndex = std::size_t;
inline constexpr std::size_t kNone = static_cast<std::size_t>(-1);

struct Edge {
  std::string id;
  NodeIndex from = 0;
  NodeIndex to = 0;
};

struct Source {
  NodeIndex node = 0;
  std::string symbol;
};

struct Sink {
  NodeIndex node = 0;
  std::string name;
};

struct FlowNetwork {
  std::string name;
  std::vector<std::string> nodes;
  std::vector<Edge> edges;
  std::vector<Source> sources;
  std::vector<Sink> sinks;
  /// paths[t][i] is f^{s_i,t}; an empty vector means "not given".
  std::vector<std::vector<std::vector<EdgeIndex>>> paths;

  std::size_t h() const { return sources.size(); }

  NodeIndex add_node(const std::string& id) {
    if (find_node(id)) throw InputError("duplicate node '" + id + "'");
    nodes.push_back(id);
    return nodes.size() - 1;
  }

  EdgeIndex add_edge(const std::string& id, NodeIndex from, NodeIndex to) {
    if (find_edge(id)) throw InputError("duplicate edge '" + id + "'");
    edges.push_back({id, from, to});
    return edges.size() - 1;
  }

  std::size_t add_source(NodeIndex node, const std::string& symbol) {
    if (find_source(symbol)) throw InputError("duplicate source symbol '" + symbol + "'");
    for (const auto& s : sources)
      if (s.node == node) throw InputError("node '" + nodes[node] + "' already hosts a source");
    sources.push_back({node, symbol});
    for (auto& per_sink : paths) per_sink.resize(sources.size());
    return sources.size() - 1;
  }

  std::size_t add_sink(NodeIndex node, const std::string& name) {
    if (find_sink(name)) throw InputError("duplicate sink '" + name + "'");
    for (const auto& t : sinks)
      if (t.node == node) throw InputError("node '" + nodes[node] + "' already hosts a sink");
    sinks.push_back({node, name});
    paths.emplace_back(sources.size());
    return sinks.size() - 1;
  }

  void set_path(std::size_t sink, std::size_t source, std::vector<EdgeIndex> path) {
    paths.at(sink).at(source) = std::move(path);
  }

  bool has_flows() const {
    for (const auto& per_sink : paths)
      for (const auto& p : per_sink)
        if (!p.empty()) return true;
    return false;
  }

  std::optional<NodeIndex> find_node(const std::string& id) const { return find(nodes, id); }
  std::optional<EdgeIndex> find_edge(const std::string& id) const {
    for (std::size_t i = 0; i < edges.size(); ++i)
      if (edges[i].id == id) return i;
    return std::nullopt;
  }
  std::optional<std::size_t> find_source(const std::string& symbol) const {
    for (std::size_t i = 0; i < sources.size(); ++i)
      if (sources[i].symbol == symbol) return i;
    return std::nullopt;
  }
  std::optional<std::size_t> find_sink(const std::string& name) const {
    for (std::size_t i = 0; i < sinks.size(); ++i)
      if (sinks[i].name == name) return i;
    return std::nullopt;
  }

 private:
  static std::optional<std::size_t> find(const std::vector<std::string>& v, const std::string& id) {
    auto it = std::find(v.begin(), v.end(), id);
    if (it == v.end()) return std::nullopt;
    return static_cast<std::size_t>(it - v.begin());
  }
};

// ---------------------------------------------------------------------------
// Text format

inline FlowNetwork parse_network(std::istream& in, std::string name = "network") {
  FlowNetwork net;
  net.name = std::move(name);
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw InputError(net.name + ":" + std::to_string(lineno) + ": " + msg);
  };
  auto node_of = [&](const std::string& id) {
    auto n = net.find_node(id);
    if (!n) fail("unknown node '" + id + "'");
    return *n;
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    std::vector<std::string> args;
    for (std::string tok; ls >> tok;) args.push_back(tok);
    try {
      if (kw == "node") {
        if (args.size() != 1) fail("expected: node <id>");
        net.add_node(args[0]);
      } else if (kw == "edge") {
        if (args.size() != 3) fail("expected: edge <id> <from> <to>");
        net.add_edge(args[0], node_of(args[1]), node_of(args[2]));
      } else if (kw == "source") {
        if (args.size() != 2) fail("expected: source <node> <symbol>");
        net.add_source(node_of(args[0]), args[1]);
      } else if (kw == "sink") {
        if (args.size() != 2) fail("expected: sink <node> <name>");
        net.add_sink(node_of(args[0]), args[1]);
      } else if (kw == "flow") {
        if (args.size() < 3 || args[2] != ":") fail("expected: flow <sink> <symbol> : <edges>");
        auto t = net.find_sink(args[0]);
        if (!t) fail("unknown sink '" + args[0] + "'");
        auto s = net.find_source(args[1]);
        if (!s) fail("unknown source symbol '" + args[1] + "'");
        if (!net.paths[*t][*s].empty()) fail("duplicate flow for " + args[0] + "/" + args[1]);
        std::vector<EdgeIndex> path;
        for (std::size_t k = 3; k < args.size(); ++k) {
          std::stringstream parts(args[k]);
          for (std::string id; std::getline(parts, id, ',');) {
            if (id.empty()) continue;
            auto e = net.find_edge(id);
            if (!e) fail("unknown edge '" + id + "'");
            path.push_back(*e);
          }
        }
        if (path.empty()) fail("empty flow path");
        net.set_path(*t, *s, std::move(path));
      } else {
        fail("unknown keyword '" + kw + "'");
      }
    } catch (const InputError& e) {
      std::string what = e.what();
      if (what.rfind(net.name + ":", 0) == 0) throw;
      fail(what);
    }
  }
  return net;
}

inline FlowNetwork load_network(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::string stem = path.substr(path.find_last_of('/') + 1);
  if (auto dot = stem.rfind('.'); dot != std::string::npos) stem.erase(dot);
  return parse_network(in, stem);
}

inline std::string write_network(const FlowNetwork& net) {
  std::ostringstream out;
  for (const auto& n : net.nodes) out << "node " << n << "\n";
  for (const auto& e : net.edges)
    out << "edge " << e.id << " " << net.nodes[e.from] << " " << net.nodes[e.to] << "\n";
  for (const auto& s : net.sources) out << "source " << net.nodes[s.node] << " " << s.symbol << "\n";
  for (const auto& t : net.sinks) out << "sink " << net.nodes[t.node] << " " << t.name << "\n";
  for (std::size_t t = 0; t < net.sinks.size(); ++t)
    for (std::size_t i = 0; i < net.sources.size(); ++i) {
      const auto& p = net.paths[t][i];
      if (p.empty()) continue;
      out << "flow " << net.sinks[t].name << " " << net.sources[i].symbol << " :";
      for (auto e : p) out << " " << net.edges[e].id;
      out << "\n";
    }
  return out.str();
}

// ---------------------------------------------------------------------------
// Derived structure

struct FlowStructure {
  std::size_t h = 0;
  /// pred[e][t] = f<-^t(e), kNone when e is first on its path or unused by t.
  std::vector<std::vector<EdgeIndex>> pred;
  std::vector<std::vector<EdgeIndex>> succ;
  /// path_source[e][t] = i such that e lies on f^{s_i,t}, else kNone.
  std::vector<std::vector<std::size_t>> path_source;
  /// P(e), P'(e) and T(e), ascending.
  std::vector<std::vector<EdgeIndex>> preds;
  std::vector<std::vector<EdgeIndex>> phys_preds;
  std::vector<std::vector<std::size_t>> sinks_using;
  std::vector<bool> on_flow;
  /// source_of[e] = i when e is the first edge of a path from s_i.
  std::vector<std::size_t> source_of;
  std::vector<std::string> warnings;
};

/// Checks every flow invariant and derives predecessor structure.  Edges on
/// no flow path produce a warning and are excluded from encoding.
inline FlowStructure validate(const FlowNetwork& net) {
  const std::size_t m = net.edges.size();
  const std::size_t r = net.sinks.size();
  const std::size_t h = net.h();
  if (h == 0) throw InputError("network has no sources");
  if (r == 0) throw InputError("network has no sinks");
  for (const auto& t : net.sinks)
    for (const auto& s : net.sources)
      if (t.node == s.node) throw InputError("node '" + net.nodes[t.node] + "' is both source and sink");

  FlowStructure st;
  st.h = h;
  st.pred.assign(m, std::vector<EdgeIndex>(r, kNone));
  st.succ.assign(m, std::vector<EdgeIndex>(r, kNone));
  st.path_source.assign(m, std::vector<std::size_t>(r, kNone));
  st.preds.assign(m, {});
  st.phys_preds.assign(m, {});
  st.sinks_using.assign(m, {});
  st.on_flow.assign(m, false);
  st.source_of.assign(m, kNone);

  std::vector<bool> inner(m, false);  // appears at a non-first position
  for (std::size_t t = 0; t < r; ++t) {
    const std::string tname = net.sinks[t].name;
    for (std::size_t i = 0; i < h; ++i) {
      const auto& path = net.paths[t][i];
      const std::string label = "flow " + tname + "/" + net.sources[i].symbol;
      if (path.empty()) throw InputError(label + " is missing");
      if (net.edges[path.front()].from != net.sources[i].node)
        throw InputError(label + " does not start at its source");
      if (net.edges[path.back()].to != net.sinks[t].node)
        throw InputError(label + " does not end at its sink");
      for (std::size_t k = 0; k < path.size(); ++k) {
        EdgeIndex e = path[k];
        if (k + 1 < path.size()) {
          if (net.edges[e].to != net.edges[path[k + 1]].from)
            throw InputError(label + " breaks continuity between " + net.edges[e].id + " and " +
                             net.edges[path[k + 1]].id);
          if (net.edges[e].to == net.sinks[t].node)
            throw InputError(label + " passes through its sink before the end");
        }
        if (st.path_source[e][t] != kNone) {
          if (st.path_source[e][t] == i)
            throw InputError(label + " revisits edge " + net.edges[e].id);
          throw InputError("flows to " + tname + " are not edge-disjoint at " + net.edges[e].id);
        }
        st.path_source[e][t] = i;
        st.on_flow[e] = true;
        if (k == 0) {
          if (st.source_of[e] != kNone && st.source_of[e] != i)
            throw InputError("edge " + net.edges[e].id + " starts paths of two sources");
          st.source_of[e] = i;
        } else {
          inner[e] = true;
          st.pred[e][t] = path[k - 1];
        }
        if (k + 1 < path.size()) st.succ[e][t] = path[k + 1];
      }
    }
  }

  for (EdgeIndex e = 0; e < m; ++e) {
    if (st.source_of[e] != kNone && inner[e])
      throw InputError("edge " + net.edges[e].id +
                       " is both the first edge of a source path and an inner flow edge");
    std::set<EdgeIndex> p;
    for (std::size_t t = 0; t < r; ++t) {
      if (st.path_source[e][t] != kNone) st.sinks_using[e].push_back(t);
      if (st.pred[e][t] != kNone) p.insert(st.pred[e][t]);
    }
    st.preds[e].assign(p.begin(), p.end());
    for (EdgeIndex q = 0; q < m; ++q)
      if (net.edges[q].to == net.edges[e].from) st.phys_preds[e].push_back(q);
    if (!st.on_flow[e])
      st.warnings.push_back("edge " + net.edges[e].id + " lies on no flow path; it is not encoded");
  }
  return st;
}

// ---------------------------------------------------------------------------
// Flow cycles and knots

enum class KnotKind { simple_cycle, knot };

inline const char* to_string(KnotKind k) { return k == KnotKind::simple_cycle ? "simple-cycle" : "knot"; }

struct KnotComponent {
  std::vector<EdgeIndex> edges;         // C_E, ascending
  std::vector<NodeIndex> nodes;         // C_V, ascending
  std::vector<EdgeIndex> predecessors;  // P(C), ascending
  KnotKind kind = KnotKind::knot;

  bool contains(EdgeIndex e) const { return std::binary_search(edges.begin(), edges.end(), e); }
};

/// Strongly connected components (with at least one arc) of the flow
/// precedence digraph, ordered by smallest member edge.
inline std::vector<KnotComponent> find_knots(const FlowNetwork& net, const FlowStructure& st) {
  const std::size_t m = net.edges.size();
  std::vector<std::vector<EdgeIndex>> out(m);
  for (EdgeIndex e = 0; e < m; ++e)
    for (EdgeIndex p : st.preds[e]) out[p].push_back(e);

  // Iterative Tarjan.
  std::vector<std::size_t> index(m, kNone), low(m, 0);
  std::vector<bool> on_stack(m, false);
  std::vector<EdgeIndex> stack;
  std::vector<std::vector<EdgeIndex>> comps;
  std::size_t counter = 0;
  for (EdgeIndex root = 0; root < m; ++root) {
    if (!st.on_flow[root] || index[root] != kNone) continue;
    std::vector<std::pair<EdgeIndex, std::size_t>> call{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [v, next] = call.back();
      if (next < out[v].size()) {
        EdgeIndex w = out[v][next++];
        if (index[w] == kNone) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::vector<EdgeIndex> comp;
        EdgeIndex w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
        } while (w != v);
        if (comp.size() >= 2) comps.push_back(std::move(comp));
      }
      EdgeIndex done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
    }
  }

  std::vector<KnotComponent> knots;
  for (auto& comp : comps) {
    KnotComponent k;
    std::sort(comp.begin(), comp.end());
    k.edges = comp;
    std::set<NodeIndex> nodes;
    std::set<EdgeIndex> preds;
    bool single_cycle = true;
    for (EdgeIndex e : comp) {
      nodes.insert(net.edges[e].to);
      std::size_t in_arcs = 0;
      for (EdgeIndex p : st.preds[e]) {
        if (k.contains(p))
          ++in_arcs;
        else
          preds.insert(p);
      }
      std::size_t out_arcs = 0;
      for (EdgeIndex s : out[e])
        if (k.contains(s)) ++out_arcs;
      if (in_arcs != 1 || out_arcs != 1) single_cycle = false;
    }
    k.nodes.assign(nodes.begin(), nodes.end());
    k.predecessors.assign(preds.begin(), preds.end());
    k.kind = single_cycle ? KnotKind::simple_cycle : KnotKind::knot;
    knots.push_back(std::move(k));
  }
  std::sort(knots.begin(), knots.end(),
            [](const KnotComponent& a, const KnotComponent& b) { return a.edges.front() < b.edges.front(); });
  return knots;
}

// ---------------------------------------------------------------------------
// Visitation plan

struct PlanStep {
  enum class Kind { edge, knot };
  Kind kind = Kind::edge;
  std::size_t index = 0;  // EdgeIndex, or position in the knot list

  friend bool operator==(const PlanStep&, const PlanStep&) = default;
};

/// Order in which the encoder visits the network: source edges first, then
/// single edges whenever one has all its flow predecessors visited (lowest
/// id first), and whole knots only when no single edge is eligible.  With a seed, ties among eligible
/// edges are broken at random instead.
inline std::vector<PlanStep> visitation_plan(const FlowNetwork& net, const FlowStructure& st,
                                             const std::vector<KnotComponent>& knots,
                                             std::optional<std::uint64_t> order_seed = std::nullopt) {
  const std::size_t m = net.edges.size();
  std::vector<std::size_t> knot_of(m, kNone);
  for (std::size_t k = 0; k < knots.size(); ++k)
    for (EdgeIndex e : knots[k].edges) knot_of[e] = k;

  std::vector<bool> visited(m, false);
  std::vector<bool> knot_done(knots.size(), false);
  std::size_t remaining = 0;
  for (EdgeIndex e = 0; e < m; ++e)
    if (st.on_flow[e]) ++remaining;

  std::optional<std::mt19937_64> rng;
  if (order_seed) rng.emplace(*order_seed);

  auto ready = [&](const std::vector<EdgeIndex>& ps) {
    return std::all_of(ps.begin(), ps.end(), [&](EdgeIndex p) { return visited[p]; });
  };

  std::vector<PlanStep> plan;
  for (EdgeIndex e = 0; e < m; ++e)
    if (st.on_flow[e] && st.source_of[e] != kNone) {
      visited[e] = true;
      --remaining;
      plan.push_back({PlanStep::Kind::edge, e});
    }
  while (remaining > 0) {
    std::vector<EdgeIndex> eligible;
    for (EdgeIndex e = 0; e < m; ++e)
      if (st.on_flow[e] && !visited[e] && knot_of[e] == kNone && ready(st.preds[e]))
        eligible.push_back(e);
    if (!eligible.empty()) {
      EdgeIndex pick = eligible.front();
      if (rng) pick = eligible[std::uniform_int_distribution<std::size_t>(0, eligible.size() - 1)(*rng)];
      visited[pick] = true;
      --remaining;
      plan.push_back({PlanStep::Kind::edge, pick});
      continue;
    }
    bool progressed = false;
    for (std::size_t k = 0; k < knots.size(); ++k) {
      if (knot_done[k] || !ready(knots[k].predecessors)) continue;
      knot_done[k] = true;
      for (EdgeIndex e : knots[k].edges) visited[e] = true;
      remaining -= knots[k].edges.size();
      plan.push_back({PlanStep::Kind::knot, k});
      progressed = true;
      break;
    }
    if (!progressed) throw CodingError("visitation stalled with no eligible edge or knot");
  }
  return plan;
}

inline std::vector<PlanStep> topo_layers(const FlowNetwork& net, const FlowStructure& st) {
  return visitation_plan(net, st, find_knots(net, st));
}

// ---------------------------------------------------------------------------
// Line graph of a knot

struct LineArc {
  std::size_t from = 0;  // local vertex index
  std::size_t to = 0;
  Gf2Poly gain;

  friend bool operator==(const LineArc&, const LineArc&) = default;
};

struct LineGraph {
  std::vector<EdgeIndex> vertices;  // knot edges, ascending
  std::vector<LineArc> arcs;        // sorted by (from, to)

  std::optional<std::size_t> local(EdgeIndex e) const {
    auto it = std::lower_bound(vertices.begin(), vertices.end(), e);
    if (it == vertices.end() || *it != e) return std::nullopt;
    return static_cast<std::size_t>(it - vertices.begin());
  }

  std::vector<std::vector<std::size_t>> successors() const {
    std::vector<std::vector<std::size_t>> adj(vertices.size());
    for (const auto& a : arcs) adj[a.from].push_back(a.to);
    return adj;
  }

  const LineArc* arc(std::size_t from, std::size_t to) const {
    for (const auto& a : arcs)
      if (a.from == from && a.to == to) return &a;
    return nullptr;
  }
};

/// Vertices are the knot's edges; e' -> e is an arc iff some sink's flow has
/// e' immediately before e.  Every branch gain is the unit link delay D.
inline LineGraph build_line_graph(const KnotComponent& knot, const FlowStructure& st) {
  LineGraph g;
  g.vertices = knot.edges;
  for (std::size_t j = 0; j < g.vertices.size(); ++j)
    for (EdgeIndex p : st.preds[g.vertices[j]])
      if (auto i = g.local(p)) g.arcs.push_back({*i, j, Gf2Poly::monomial(1)});
  std::sort(g.arcs.begin(), g.arcs.end(),
            [](const LineArc& a, const LineArc& b) { return std::tie(a.from, a.to) < std::tie(b.from, b.to); });
  return g;
}

// ---------------------------------------------------------------------------
// Convenience flow computation

/// h edge-disjoint paths per sink by BFS augmenting paths (Edmonds-Karp)
/// from a super source attached to every source node.  Edges entering a
/// source node are never used, so source edges stay predecessor-free.  With
/// an rng the adjacency order is shuffled, which yields different (still
/// valid) flows.  No optimality is attempted.
inline FlowNetwork compute_flows(FlowNetwork net, std::size_t h, std::mt19937_64* rng = nullptr) {
  if (h != net.h())
    throw InputError("compute_flows: h = " + std::to_string(h) + " but the network declares " +
                     std::to_string(net.h()) + " sources");
  const std::size_t n = net.nodes.size();
  const std::size_t super = n;
  std::vector<bool> is_source(n, false);
  for (const auto& s : net.sources) is_source[s.node] = true;

  for (std::size_t t = 0; t < net.sinks.size(); ++t) {
    const NodeIndex sink = net.sinks[t].node;
    // Residual arcs: even = forward, odd = reverse.  Forward arc 2k
    // corresponds to network edge k for k < m; the rest come from the super
    // source.
    struct Arc {
      std::size_t to;
      int cap;
    };
    std::vector<Arc> arcs;
    std::vector<std::vector<std::size_t>> adj(n + 1);
    auto add = [&](std::size_t u, std::size_t v, int cap) {
      adj[u].push_back(arcs.size());
      arcs.push_back({v, cap});
      adj[v].push_back(arcs.size());
      arcs.push_back({u, 0});
    };
    for (const auto& e : net.edges) add(e.from, e.to, is_source[e.to] ? 0 : 1);
    for (const auto& s : net.sources) add(super, s.node, 1);
    if (rng)
      for (auto& a : adj) std::shuffle(a.begin(), a.end(), *rng);

    std::size_t flow = 0;
    while (flow < h) {
      std::vector<std::size_t> via(n + 1, kNone);
      std::vector<bool> seen(n + 1, false);
      std::deque<std::size_t> queue{super};
      seen[super] = true;
      while (!queue.empty() && !seen[sink]) {
        std::size_t u = queue.front();
        queue.pop_front();
        if (u == sink) break;
        for (std::size_t a : adj[u])
          if (arcs[a].cap > 0 && !seen[arcs[a].to]) {
            seen[arcs[a].to] = true;
            via[arcs[a].to] = a;
            queue.push_back(arcs[a].to);
          }
      }
      if (!seen[sink]) break;
      for (std::size_t v = sink; v != super;) {
        std::size_t a = via[v];
        arcs[a].cap -= 1;
        arcs[a ^ 1].cap += 1;
        v = arcs[a ^ 1].to;
      }
      ++flow;
    }
    if (flow < h)
      throw CapacityError(net.sinks[t].name, "sink " + net.sinks[t].name + " has min-cut " +
                                                 std::to_string(flow) + " < h = " + std::to_string(h));

    // Decompose into paths, dropping any circulation on the way.
    std::vector<bool> carries(net.edges.size(), false);
    for (std::size_t k = 0; k < net.edges.size(); ++k)
      carries[k] = net.edges[k].from != net.edges[k].to && arcs[2 * k].cap == 0 && !is_source[net.edges[k].to] &&
                   arcs[2 * k + 1].cap == 1;
    std::vector<std::vector<EdgeIndex>> out_flow(n);
    for (std::size_t k = 0; k < net.edges.size(); ++k)
      if (carries[k]) out_flow[net.edges[k].from].push_back(k);
    std::vector<std::size_t> cursor(n, 0);
    for (std::size_t i = 0; i < h; ++i) {
      std::vector<EdgeIndex> path;
      std::map<NodeIndex, std::size_t> position{{net.sources[i].node, 0}};
      NodeIndex u = net.sources[i].node;
      while (u != sink) {
        if (cursor[u] >= out_flow[u].size()) throw CodingError("flow decomposition failed");
        EdgeIndex e = out_flow[u][cursor[u]++];
        path.push_back(e);
        u = net.edges[e].to;
        if (auto it = position.find(u); it != position.end()) {
          for (std::size_t k = it->second; k < path.size(); ++k) position.erase(net.edges[path[k]].to);
          path.resize(it->second);
          position[u] = path.size();
        } else {
          position[u] = path.size();
        }
      }
      net.set_path(t, i, std::move(path));
    }
  }
  return net;
}

// ---------------------------------------------------------------------------
// DOT export

namespace detail {
inline const std::vector<std::string>& sink_colors() {
  static const std::vector<std::string> c{"red",    "blue",  "darkgreen", "orange", "purple",
                                          "brown",  "cyan4", "magenta",   "gold3",  "navy"};
  return c;
}
inline const std::vector<std::string>& source_styles() {
  static const std::vector<std::string> s{"solid", "dashed", "dotted", "bold", "tapered", "dashed,bold"};
  return s;
}
inline std::string quote(const std::string& s) { return "\"" + s + "\""; }
}  // namespace detail

/// Each flow path is drawn in its sink's color with its source's pattern;
/// edges on no flow are gray.
inline std::string to_dot(const FlowNetwork& net) {
  std::ostringstream out;
  out << "digraph " << detail::quote(net.name) << " {\n  rankdir=LR;\n";
  for (std::size_t s = 0; s < net.sources.size(); ++s)
    out << "  " << detail::quote(net.nodes[net.sources[s].node]) << " [shape=box];\n";
  for (const auto& t : net.sinks) out << "  " << detail::quote(net.nodes[t.node]) << " [shape=doublecircle];\n";
  std::vector<bool> used(net.edges.size(), false);
  for (std::size_t t = 0; t < net.sinks.size(); ++t)
    for (std::size_t i = 0; i < net.sources.size(); ++i)
      for (EdgeIndex e : net.paths[t][i]) {
        used[e] = true;
        const auto& ed = net.edges[e];
        out << "  " << detail::quote(net.nodes[ed.from]) << " -> " << detail::quote(net.nodes[ed.to])
            << " [label=" << detail::quote(ed.id)
            << ", color=" << detail::sink_colors()[t % detail::sink_colors().size()]
            << ", style=" << detail::quote(detail::source_styles()[i % detail::source_styles().size()])
            << "];\n";
      }
  for (EdgeIndex e = 0; e < net.edges.size(); ++e)
    if (!used[e])
      out << "  " << detail::quote(net.nodes[net.edges[e].from]) << " -> "
          << detail::quote(net.nodes[net.edges[e].to]) << " [label=" << detail::quote(net.edges[e].id)
          << ", color=gray];\n";
  out << "}\n";
  return out.str();
}

inline std::string to_dot(const LineGraph& g, const FlowNetwork& net, const std::string& title) {
  std::ostringstream out;
  out << "digraph " << detail::quote(title) << " {\n";
  for (EdgeIndex e : g.vertices) out << "  " << detail::quote(net.edges[e].id) << ";\n";
  for (const auto& a : g.arcs)
    out << "  " << detail::quote(net.edges[g.vertices[a.from]].id) << " -> "
        << detail::quote(net.edges[g.vertices[a.to]].id) << " [label=" << detail::quote(a.gain.to_string())
        << "];\n";
  out << "}\n";
  return out.str();
}

}  // namespace netcode
