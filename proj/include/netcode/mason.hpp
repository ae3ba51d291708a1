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
 * @file mason.hpp
 * @brief Mason's gain formula on knot line graphs over F2[D].
 *
 * A symbol entering a knot through predecessor p is injected on every knot
 * edge e with p in P(e), one link delay after leaving p.  It then circulates
 * along line-graph arcs, except arcs leaving an edge that ends at the node
 * where the symbol entered: that node strips the returning copy.  The
 * transfer function tau(p, e) is the total gain from the injection to e.
 *
 * In characteristic 2 every Mason sign is +, so the determinant is the sum
 * over all sets of pairwise vertex-disjoint cycles of their gain products.
 */

#include <cstdint>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "netcode/errors.hpp"
#include "netcode/flow_graph.hpp"
#include "netcode/gf2.hpp"

namespace netcode {

struct MasonLimits {
  std::size_t cycle_cap = 100000;
  std::size_t path_cap = 100000;
  /// Bound on disjoint-cycle subsets visited while expanding a determinant.
  std::size_t term_cap = 1000000;
};

struct Cycle {
  std::vector<std::size_t> vertices;  // local indices, rotated to start at the smallest
  Gf2Poly gain;
};

/// Arcs (e', e'') with end(e') = end(p) removed.
inline LineGraph prune_for_symbol(const LineGraph& line, const KnotComponent& knot, EdgeIndex p,
                                  const FlowNetwork& net) {
  if (!std::binary_search(knot.predecessors.begin(), knot.predecessors.end(), p))
    throw std::invalid_argument("edge " + net.edges.at(p).id + " is not a predecessor of the knot");
  const NodeIndex entry_node = net.edges[p].to;
  LineGraph out;
  out.vertices = line.vertices;
  for (const auto& a : line.arcs)
    if (net.edges[line.vertices[a.from]].to != entry_node) out.arcs.push_back(a);
  return out;
}

/// Knot edges on which p's symbol is injected: those with p in P(e).
inline std::vector<std::size_t> entry_vertices(const LineGraph& line, EdgeIndex p, const FlowStructure& st) {
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < line.vertices.size(); ++v) {
    const auto& ps = st.preds[line.vertices[v]];
    if (std::binary_search(ps.begin(), ps.end(), p)) out.push_back(v);
  }
  return out;
}

/// Every simple directed cycle once (Johnson's algorithm).
inline std::vector<Cycle> enumerate_cycles(const LineGraph& line, const MasonLimits& limits = {}) {
  const std::size_t n = line.vertices.size();
  const auto adj = line.successors();
  std::vector<Cycle> cycles;
  std::vector<bool> blocked(n);
  std::vector<std::vector<std::size_t>> bset(n);
  std::vector<std::size_t> stack;

  std::function<void(std::size_t)> unblock = [&](std::size_t u) {
    blocked[u] = false;
    auto pending = std::move(bset[u]);
    bset[u].clear();
    for (std::size_t w : pending)
      if (blocked[w]) unblock(w);
  };

  for (std::size_t s = 0; s < n; ++s) {
    std::fill(blocked.begin(), blocked.end(), false);
    for (auto& b : bset) b.clear();
    std::function<bool(std::size_t)> circuit = [&](std::size_t v) -> bool {
      bool found = false;
      stack.push_back(v);
      blocked[v] = true;
      for (std::size_t w : adj[v]) {
        if (w < s) continue;
        if (w == s) {
          Cycle c;
          c.vertices = stack;
          c.gain = Gf2Poly::one();
          for (std::size_t k = 0; k < stack.size(); ++k)
            c.gain *= line.arc(stack[k], stack[(k + 1) % stack.size()])->gain;
          cycles.push_back(std::move(c));
          if (cycles.size() > limits.cycle_cap)
            throw ResourceError("cycle enumeration exceeded cap " + std::to_string(limits.cycle_cap));
          found = true;
        } else if (!blocked[w] && circuit(w)) {
          found = true;
        }
      }
      if (found) {
        unblock(v);
      } else {
        for (std::size_t w : adj[v]) {
          if (w < s) continue;
          if (std::find(bset[w].begin(), bset[w].end(), v) == bset[w].end()) bset[w].push_back(v);
        }
      }
      stack.pop_back();
      return found;
    };
    circuit(s);
  }
  return cycles;
}

/// Determinant with the number of contributing subsets per power of D.
struct DeltaExpansion {
  Gf2Poly value;
  /// term_counts[k] = number of disjoint-cycle subsets whose gain is D^k
  /// (monomial gains only; a non-monomial subset gain is counted under -1).
  std::map<int, std::uint64_t> term_counts;

  /// Integer form, e.g. "1+4D^3+3D^6".
  std::string integer_form() const {
    std::string s;
    for (const auto& [k, c] : term_counts) {
      if (!s.empty()) s += "+";
      std::string mono = k == 0 ? "" : k == 1 ? "D" : "D^" + std::to_string(k);
      if (k < 0) mono = "?";
      if (mono.empty())
        s += std::to_string(c);
      else
        s += (c == 1 ? "" : std::to_string(c)) + mono;
    }
    return s.empty() ? "0" : s;
  }
};

/// Determinant restricted to cycles avoiding the excluded vertices.
inline DeltaExpansion compute_delta(const std::vector<Cycle>& cycles, std::size_t vertex_count,
                                    const std::vector<bool>& excluded = {}, const MasonLimits& limits = {}) {
  std::vector<const Cycle*> usable;
  for (const auto& c : cycles) {
    bool ok = true;
    for (std::size_t v : c.vertices)
      if (!excluded.empty() && excluded[v]) ok = false;
    if (ok) usable.push_back(&c);
  }
  DeltaExpansion out;
  std::vector<bool> used(vertex_count, false);
  std::size_t visited = 0;
  std::function<void(std::size_t, const Gf2Poly&)> walk = [&](std::size_t start, const Gf2Poly& gain) {
    if (++visited > limits.term_cap)
      throw ResourceError("determinant expansion exceeded cap " + std::to_string(limits.term_cap));
    out.value += gain;
    out.term_counts[gain.is_monomial() ? gain.degree() : -1] += 1;
    for (std::size_t i = start; i < usable.size(); ++i) {
      const auto& c = *usable[i];
      bool disjoint = true;
      for (std::size_t v : c.vertices)
        if (used[v]) disjoint = false;
      if (!disjoint) continue;
      for (std::size_t v : c.vertices) used[v] = true;
      walk(i + 1, gain * c.gain);
      for (std::size_t v : c.vertices) used[v] = false;
    }
  };
  walk(0, Gf2Poly::one());
  return out;
}

struct ForwardPath {
  std::vector<std::size_t> vertices;  // from entry to target
  Gf2Poly gain;                       // includes the injection delay
  DeltaExpansion cofactor;
};

/// Simple paths from one vertex to another; the gain carries one extra D
/// for the hop from the predecessor onto the entry edge.
inline std::vector<ForwardPath> forward_paths(const LineGraph& line, std::size_t from, std::size_t to,
                                              const MasonLimits& limits = {}) {
  const auto adj = line.successors();
  std::vector<ForwardPath> paths;
  std::vector<std::size_t> stack{from};
  std::vector<bool> on(line.vertices.size(), false);
  on[from] = true;
  std::function<void(std::size_t, const Gf2Poly&)> dfs = [&](std::size_t v, const Gf2Poly& gain) {
    if (v == to) {
      paths.push_back({stack, gain, {}});
      if (paths.size() > limits.path_cap)
        throw ResourceError("forward-path enumeration exceeded cap " + std::to_string(limits.path_cap));
      return;
    }
    for (std::size_t w : adj[v]) {
      if (on[w]) continue;
      on[w] = true;
      stack.push_back(w);
      dfs(w, gain * line.arc(v, w)->gain);
      stack.pop_back();
      on[w] = false;
    }
  };
  dfs(from, Gf2Poly::monomial(1));
  return paths;
}

/// Everything Mason's formula produced for one symbol on one pruned graph.
struct MasonInstance {
  LineGraph graph;
  std::vector<std::size_t> entries;
  std::vector<Cycle> cycles;
  DeltaExpansion delta;
};

inline MasonInstance make_instance(LineGraph graph, std::vector<std::size_t> entries,
                                   const MasonLimits& limits = {}) {
  MasonInstance m;
  m.graph = std::move(graph);
  m.entries = std::move(entries);
  m.cycles = enumerate_cycles(m.graph, limits);
  m.delta = compute_delta(m.cycles, m.graph.vertices.size(), {}, limits);
  return m;
}

struct TransferBreakdown {
  std::vector<ForwardPath> paths;
  Gf2Poly numerator;
  Gf2Rational value;
};

/// Sum over entries and forward paths of F_i * Delta_i, divided by Delta.
inline TransferBreakdown transfer_detail(const MasonInstance& m, std::size_t to, const MasonLimits& limits = {}) {
  TransferBreakdown out;
  const std::size_t n = m.graph.vertices.size();
  for (std::size_t entry : m.entries)
    for (auto& fp : forward_paths(m.graph, entry, to, limits)) {
      std::vector<bool> excluded(n, false);
      for (std::size_t v : fp.vertices) excluded[v] = true;
      fp.cofactor = compute_delta(m.cycles, n, excluded, limits);
      out.numerator += fp.gain * fp.cofactor.value;
      out.paths.push_back(std::move(fp));
    }
  out.value = rat_reduce(out.numerator, m.delta.value);
  return out;
}

inline Gf2Rational transfer(const LineGraph& line, std::size_t from, std::size_t to,
                            const MasonLimits& limits = {}) {
  return transfer_detail(make_instance(line, {from}, limits), to, limits).value;
}

struct TransferTable {
  std::vector<EdgeIndex> predecessors;  // P(C)
  std::vector<EdgeIndex> edges;         // C_E
  std::vector<std::vector<Gf2Rational>> tau;
  std::vector<MasonInstance> instances;  // one per predecessor

  const Gf2Rational& at(EdgeIndex p, EdgeIndex e) const {
    auto pi = std::lower_bound(predecessors.begin(), predecessors.end(), p);
    auto ei = std::lower_bound(edges.begin(), edges.end(), e);
    if (pi == predecessors.end() || *pi != p || ei == edges.end() || *ei != e)
      throw std::out_of_range("tau lookup outside the knot");
    return tau[pi - predecessors.begin()][ei - edges.begin()];
  }
};

inline TransferTable transfer_table(const FlowNetwork& net, const KnotComponent& knot, const FlowStructure& st,
                                    const MasonLimits& limits = {}) {
  TransferTable table;
  table.predecessors = knot.predecessors;
  table.edges = knot.edges;
  const LineGraph line = build_line_graph(knot, st);
  for (EdgeIndex p : knot.predecessors) {
    auto inst = make_instance(prune_for_symbol(line, knot, p, net), entry_vertices(line, p, st), limits);
    std::vector<Gf2Rational> row;
    for (std::size_t v = 0; v < line.vertices.size(); ++v) row.push_back(transfer_detail(inst, v, limits).value);
    table.tau.push_back(std::move(row));
    table.instances.push_back(std::move(inst));
  }
  return table;
}

/// Human-readable dump: per symbol, the pruned graph in DOT, cycles, the
/// determinant, and the path/cofactor decomposition for every target.
inline std::string mason_debug_dump(const FlowNetwork& net, const TransferTable& table,
                                    const MasonLimits& limits = {}) {
  std::ostringstream out;
  auto name = [&](const LineGraph& g, std::size_t v) { return net.edges[g.vertices[v]].id; };
  for (std::size_t k = 0; k < table.predecessors.size(); ++k) {
    const auto& inst = table.instances[k];
    const std::string p = net.edges[table.predecessors[k]].id;
    out << "== symbol via " << p << "\n";
    out << to_dot(inst.graph, net, "pruned_" + p);
    out << "cycles:";
    if (inst.cycles.empty()) out << " none";
    out << "\n";
    for (const auto& c : inst.cycles) {
      out << "  {";
      for (std::size_t i = 0; i < c.vertices.size(); ++i) out << (i ? "," : "") << name(inst.graph, c.vertices[i]);
      out << "} gain " << c.gain.to_string() << "\n";
    }
    out << "Delta = " << inst.delta.integer_form() << " = " << inst.delta.value.to_string() << "\n";
    for (std::size_t v = 0; v < inst.graph.vertices.size(); ++v) {
      auto d = transfer_detail(inst, v, limits);
      out << "tau(" << p << "," << name(inst.graph, v) << ") = " << d.value.to_string() << "\n";
      for (const auto& fp : d.paths) {
        out << "  F = " << fp.gain.to_string() << " via ";
        for (std::size_t i = 0; i < fp.vertices.size(); ++i)
          out << (i ? "," : "") << name(inst.graph, fp.vertices[i]);
        out << "; Delta_i = " << fp.cofactor.integer_form() << "\n";
      }
    }
  }
  return out.str();
}

}  // namespace netcode
