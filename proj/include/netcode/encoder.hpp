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
 * @file encoder.hpp
 * @brief Binary linear network code synthesis with delays.
 *
 * Edges are visited in flow order.  Each edge combines its flow
 * predecessors with one unit of link delay plus an artificial delay
 * D^i per predecessor; the exponents are the first vector, in order of
 * increasing sum, that keeps every affected sink's matrix M_t at full rank
 * h over F2(D).  Flow cycles are encoded as a unit using transfer functions
 * from the Mason module, and the sources can be precoded so that every
 * sink sees a polynomial code.
 *
 * Conventions: globals[e][i] is the coefficient of source i in v_e, in the
 * basis of the undelayed symbols sigma_i(x).  M_t[i][j] is the coefficient
 * of source i on the j-th edge currently held by sink t, where column j
 * follows the flow from source j.
 */

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "netcode/errors.hpp"
#include "netcode/flow_graph.hpp"
#include "netcode/gf2.hpp"
#include "netcode/mason.hpp"
#include "netcode/rational_matrix.hpp"

namespace netcode {

struct EncoderOptions {
  /// Edges leaving a flow cycle read the freshest in-cycle value.
  bool shortcut = true;
  /// Overrides the per-exponent bound I (default |T(e)|, or the number of
  /// sinks crossing a knot).
  std::optional<int> exponent_cap;
  MasonLimits mason;
  /// Recompute every sink's rank after each committed step.
  bool audit_rank = false;
  /// Random tie-breaking among eligible edges.
  std::optional<std::uint64_t> order_seed;
};

enum class EncodingKind { source, acyclic, knot, shortcut };

inline const char* to_string(EncodingKind k) {
  switch (k) {
    case EncodingKind::source: return "source";
    case EncodingKind::acyclic: return "acyclic";
    case EncodingKind::knot: return "knot";
    case EncodingKind::shortcut: return "shortcut";
  }
  return "?";
}

/// Contributes D^delay * factor * v_edge(x).  delay is the artificial part.
struct Term {
  EdgeIndex edge = kNone;
  int delay = 0;
  Gf2Rational factor;

  Gf2Rational coefficient() const { return factor.times_power_of_d(delay); }
};

struct LocalEquation {
  EncodingKind kind = EncodingKind::acyclic;
  std::size_t source = kNone;  // source edges: v_e = D * sigma_source
  std::size_t knot = kNone;
  std::vector<Term> terms;
  /// Knot edges: stale copies of entering symbols, subtracted (XORed).
  std::vector<Term> removals;
};

struct SinkDecoder {
  std::vector<EdgeIndex> edges;  // E_t, column j from source j
  RationalMatrix m;              // M_t
  RationalMatrix inverse;        // M_t^-1, rows index received edges
  RationalMatrix decode;         // M_t^-1 / precode
  int delay = 0;                 // d_t
  int lower_bound = 0;           // longest flow path into t
  std::optional<int> upper_bound;  // largest D power in M_t when polynomial
};

struct SearchRecord {
  PlanStep step;
  std::vector<EdgeIndex> unknowns;  // ascending
  std::vector<int> exponents;
  int cap = 1;
  std::size_t tries = 0;
  EdgeIndex shortcut_via = kNone;
};

struct EncoderStats {
  std::size_t rank_checks = 0;
  std::size_t audit_checks = 0;
  std::size_t audit_violations = 0;
  std::size_t searched_edges = 0;  // non-source edges encoded
  std::size_t delayed_edges = 0;   // of which some exponent is nonzero
  int max_exponent = 0;
  bool cap_respected = true;
};

struct NetworkCode {
  std::size_t h = 0;
  std::vector<std::optional<LocalEquation>> locals;
  std::vector<std::vector<Gf2Rational>> globals;  // empty for dead edges
  std::vector<SinkDecoder> decoders;
  Gf2Poly precode = Gf2Poly::one();
  std::vector<PlanStep> plan;
  std::vector<KnotComponent> knots;
  std::vector<TransferTable> transfers;
  std::vector<SearchRecord> searches;
  EncoderStats stats;

  /// precode * M_t, the code as seen from sink t.
  RationalMatrix sink_view(std::size_t t) const {
    RationalMatrix v = decoders.at(t).m;
    for (auto& row : v)
      for (auto& x : row) x = x * Gf2Rational(precode);
    return v;
  }
};

namespace detail {

/// Enumerates [0, cap)^n in order of increasing sum, ties in descending
/// lexicographic order (earlier unknowns are delayed first), and returns the
/// first vector accepted by visit.  tries counts the candidates examined.
inline std::optional<std::vector<int>> greedy_search(std::size_t n, int cap,
                                                     const std::function<bool(const std::vector<int>&)>& visit,
                                                     std::size_t& tries) {
  tries = 0;
  std::vector<int> v(n, 0);
  if (n == 0) {
    ++tries;
    if (visit(v)) return v;
    return std::nullopt;
  }
  std::function<bool(std::size_t, int)> fill = [&](std::size_t k, int left) -> bool {
    if (k + 1 == n) {
      v[k] = left;
      ++tries;
      return visit(v);
    }
    const int rest_max = static_cast<int>(n - k - 1) * (cap - 1);
    for (int x = std::min(left, cap - 1); x >= std::max(0, left - rest_max); --x) {
      v[k] = x;
      if (fill(k + 1, left - x)) return true;
    }
    return false;
  };
  const int max_sum = static_cast<int>(n) * (cap - 1);
  for (int s = 0; s <= max_sum; ++s)
    if (fill(0, s)) return v;
  return std::nullopt;
}

}  // namespace detail

class Encoder {
 public:
  Encoder(const FlowNetwork& net, const FlowStructure& st, EncoderOptions options = {})
      : net_(net), st_(st), opt_(std::move(options)) {}

  const NetworkCode& code() const { return code_; }

  /// Source edges carry D * sigma_i; every M_t becomes D * I.
  void initialize() {
    const std::size_t m = net_.edges.size();
    const std::size_t h = net_.h();
    code_ = NetworkCode{};
    code_.h = h;
    code_.locals.assign(m, std::nullopt);
    code_.globals.assign(m, {});
    code_.knots = find_knots(net_, st_);
    code_.plan = visitation_plan(net_, st_, code_.knots, opt_.order_seed);
    knot_of_.assign(m, kNone);
    for (std::size_t k = 0; k < code_.knots.size(); ++k)
      for (EdgeIndex e : code_.knots[k].edges) knot_of_[e] = k;
    code_.transfers.assign(code_.knots.size(), {});
    transfers_ready_.assign(code_.knots.size(), false);
    for (EdgeIndex e = 0; e < m; ++e) {
      if (!st_.on_flow[e] || st_.source_of[e] == kNone) continue;
      LocalEquation eq;
      eq.kind = EncodingKind::source;
      eq.source = st_.source_of[e];
      code_.locals[e] = eq;
      code_.globals[e] = unit(h, st_.source_of[e], Gf2Rational::power_of_d(1));
    }
    cursor_.assign(net_.sinks.size(), std::vector<std::size_t>(h, 0));
    audit();
  }

  /// v_e = sum over P(e) of D^{i_p + 1} v_p, with the i_p found by search.
  void encode_acyclic_edge(EdgeIndex e) {
    require_ready(st_.preds[e], e);
    const auto& preds = st_.preds[e];
    const int cap = cap_for(st_.sinks_using[e].size());
    SearchRecord rec{{PlanStep::Kind::edge, e}, preds, {}, cap, 0, kNone};
    std::vector<Gf2Rational> candidate;
    auto win = detail::greedy_search(
        preds.size(), cap,
        [&](const std::vector<int>& x) {
          candidate = combine(preds, x, Gf2Rational::power_of_d(1));
          return full_rank_with({{e, &candidate}}, st_.sinks_using[e]);
        },
        rec.tries);
    if (!win) search_failed(net_.edges[e].id, st_.sinks_using[e].size(), cap);
    rec.exponents = *win;
    LocalEquation eq;
    eq.kind = EncodingKind::acyclic;
    for (std::size_t k = 0; k < preds.size(); ++k)
      eq.terms.push_back({preds[k], rec.exponents[k], Gf2Rational::power_of_d(1)});
    auto global = combine(preds, rec.exponents, Gf2Rational::power_of_d(1));
    commit(e, std::move(eq), std::move(global), std::move(rec));
  }

  /// Every knot edge gets sum over P(C) of D^{i_C(p)} tau(p, e) v_p, with one
  /// exponent per predecessor shared by the whole knot.
  void encode_knot(std::size_t k) {
    const KnotComponent& knot = code_.knots.at(k);
    require_ready(knot.predecessors, knot.edges.front());
    const TransferTable& tau = transfer_table_for(k);
    const auto& preds = knot.predecessors;
    const auto sinks = sinks_crossing(knot);
    const int cap = cap_for(sinks.size());
    SearchRecord rec{{PlanStep::Kind::knot, k}, preds, {}, cap, 0, kNone};

    auto globals_for = [&](const std::vector<int>& x) {
      std::vector<std::vector<Gf2Rational>> out;
      for (EdgeIndex e : knot.edges) {
        std::vector<Gf2Rational> g(code_.h);
        for (std::size_t q = 0; q < preds.size(); ++q) {
          const Gf2Rational c = tau.at(preds[q], e).times_power_of_d(x[q]);
          if (c.is_zero()) continue;
          for (std::size_t i = 0; i < code_.h; ++i) g[i] += c * code_.globals[preds[q]][i];
        }
        out.push_back(std::move(g));
      }
      return out;
    };
    auto try_candidate = [&](const std::vector<int>& x) {
      auto g = globals_for(x);
      std::vector<std::pair<EdgeIndex, const std::vector<Gf2Rational>*>> upd;
      for (std::size_t q = 0; q < knot.edges.size(); ++q) upd.push_back({knot.edges[q], &g[q]});
      return full_rank_with(upd, sinks);
    };
    auto win = detail::greedy_search(preds.size(), cap, try_candidate, rec.tries);
    if (!win) search_failed("knot " + knot_label(knot), sinks.size(), cap);
    rec.exponents = *win;

    auto g = globals_for(rec.exponents);
    std::map<EdgeIndex, int> delay;
    for (std::size_t q = 0; q < preds.size(); ++q) delay[preds[q]] = rec.exponents[q];
    for (std::size_t q = 0; q < knot.edges.size(); ++q) {
      const EdgeIndex e = knot.edges[q];
      LocalEquation eq;
      eq.kind = EncodingKind::knot;
      eq.knot = k;
      std::vector<EdgeIndex> inside;
      for (EdgeIndex p : st_.preds[e]) {
        if (knot.contains(p)) {
          inside.push_back(p);
          eq.terms.push_back({p, 0, Gf2Rational::power_of_d(1)});
        } else {
          eq.terms.push_back({p, delay.at(p), Gf2Rational::power_of_d(1)});
        }
      }
      for (EdgeIndex p : st_.phys_preds[e]) {
        if (!std::binary_search(preds.begin(), preds.end(), p)) continue;
        Gf2Rational sum;
        for (EdgeIndex ep : inside) sum += tau.at(p, ep);
        sum = sum * Gf2Rational::power_of_d(1);
        if (!sum.is_zero()) eq.removals.push_back({p, delay.at(p), sum});
      }
      code_.locals[e] = std::move(eq);
      code_.globals[e] = std::move(g[q]);
    }
    advance_columns();
    code_.stats.searched_edges += knot.edges.size();
    record(std::move(rec), knot.edges.size());
    audit();
  }

  /// Edge leaving a flow cycle at a node where some knot predecessor also
  /// enters: read the in-cycle edge s_C that leaves the same node, undelayed,
  /// instead of the in-cycle predecessors.  Returns false when the rule does
  /// not apply or no candidate keeps full rank; the caller then falls back
  /// to encode_acyclic_edge.
  bool encode_post_knot_edge(EdgeIndex e) {
    require_ready(st_.preds[e], e);
    std::size_t k = kNone;
    std::vector<EdgeIndex> outside;
    for (EdgeIndex p : st_.preds[e]) {
      if (knot_of_[p] == kNone) {
        outside.push_back(p);
        continue;
      }
      if (k != kNone && knot_of_[p] != k) return false;
      k = knot_of_[p];
    }
    if (k == kNone || knot_of_[e] != kNone) return false;
    const KnotComponent& knot = code_.knots[k];
    bool entry_here = false;
    for (EdgeIndex p : st_.phys_preds[e])
      if (std::binary_search(knot.predecessors.begin(), knot.predecessors.end(), p)) entry_here = true;
    if (!entry_here) return false;

    const int cap = cap_for(st_.sinks_using[e].size());
    for (EdgeIndex s : knot.edges) {
      if (net_.edges[s].from != net_.edges[e].from) continue;
      std::vector<EdgeIndex> unknowns = outside;
      unknowns.push_back(s);
      std::sort(unknowns.begin(), unknowns.end());
      auto build = [&](const std::vector<int>& x) {
        std::vector<Gf2Rational> g(code_.h);
        for (std::size_t q = 0; q < unknowns.size(); ++q) {
          const Gf2Rational c = Gf2Rational::power_of_d(unknowns[q] == s ? x[q] : x[q] + 1);
          for (std::size_t i = 0; i < code_.h; ++i) g[i] += c * code_.globals[unknowns[q]][i];
        }
        return g;
      };
      std::vector<Gf2Rational> candidate;
      auto try_candidate = [&](const std::vector<int>& x) {
        candidate = build(x);
        return full_rank_with({{e, &candidate}}, st_.sinks_using[e]);
      };
      SearchRecord rec{{PlanStep::Kind::edge, e}, unknowns, {}, cap, 0, s};
      auto win = detail::greedy_search(unknowns.size(), cap, try_candidate, rec.tries);
      if (!win) continue;
      rec.exponents = *win;
      LocalEquation eq;
      eq.kind = EncodingKind::shortcut;
      eq.knot = k;
      for (std::size_t q = 0; q < unknowns.size(); ++q)
        eq.terms.push_back({unknowns[q], rec.exponents[q],
                            unknowns[q] == s ? Gf2Rational::one() : Gf2Rational::power_of_d(1)});
      auto global = build(rec.exponents);
      commit(e, std::move(eq), std::move(global), std::move(rec));
      return true;
    }
    return false;
  }

  /// M_t, its inverse, d_t and the delay bounds for every sink.
  void build_decoders() {
    code_.decoders.clear();
    for (std::size_t t = 0; t < net_.sinks.size(); ++t) {
      SinkDecoder d;
      for (std::size_t j = 0; j < code_.h; ++j) {
        const auto& path = net_.paths[t][j];
        if (cursor_[t][j] + 1 != path.size())
          throw CodingError("sink " + net_.sinks[t].name + " has an unencoded flow edge");
        d.edges.push_back(path.back());
        d.lower_bound = std::max(d.lower_bound, static_cast<int>(path.size()));
      }
      d.m = sink_matrix(t);
      auto inv = inverse(d.m);
      if (!inv) throw CodingError("M_t for sink " + net_.sinks[t].name + " is singular");
      d.inverse = *inv;
      bool poly = true;
      int top = 0;
      for (const auto& row : d.m)
        for (const auto& x : row) {
          if (!x.is_polynomial()) poly = false;
          if (!x.is_zero()) top = std::max(top, x.num().degree());
        }
      if (poly) d.upper_bound = top;
      code_.decoders.push_back(std::move(d));
    }
    apply_precode();
  }

  /// lcm of all sink-view denominators with their D factors removed.
  void precode() {
    Gf2Poly l = Gf2Poly::one();
    for (const auto& d : code_.decoders)
      for (const auto& row : d.m)
        for (const auto& x : row) {
          Gf2Poly den = x.den().shifted_down(x.den().ord());
          l = lcm(l, den);
        }
    code_.precode = l;
    apply_precode();
  }

  NetworkCode run() {
    initialize();
    for (const auto& step : code_.plan) {
      if (step.kind == PlanStep::Kind::knot) {
        encode_knot(step.index);
        continue;
      }
      const EdgeIndex e = step.index;
      if (code_.locals[e]) continue;  // source edge
      if (!(opt_.shortcut && encode_post_knot_edge(e))) encode_acyclic_edge(e);
    }
    build_decoders();
    precode();
    return code_;
  }

  RationalMatrix sink_matrix(std::size_t t) const {
    auto m = zero_matrix(code_.h, code_.h);
    for (std::size_t j = 0; j < code_.h; ++j) {
      const auto& g = code_.globals[net_.paths[t][j][cursor_[t][j]]];
      for (std::size_t i = 0; i < code_.h; ++i) m[i][j] = g[i];
    }
    return m;
  }

 private:
  static std::vector<Gf2Rational> unit(std::size_t h, std::size_t i, const Gf2Rational& c) {
    std::vector<Gf2Rational> g(h);
    g[i] = c;
    return g;
  }

  int cap_for(std::size_t sinks) const {
    if (opt_.exponent_cap) return std::max(1, *opt_.exponent_cap);
    return std::max<int>(1, static_cast<int>(sinks));
  }

  std::vector<Gf2Rational> combine(const std::vector<EdgeIndex>& preds, const std::vector<int>& x,
                                   const Gf2Rational& link) const {
    std::vector<Gf2Rational> g(code_.h);
    for (std::size_t k = 0; k < preds.size(); ++k) {
      const Gf2Rational c = link.times_power_of_d(x[k]);
      for (std::size_t i = 0; i < code_.h; ++i) g[i] += c * code_.globals[preds[k]][i];
    }
    return g;
  }

  void require_ready(const std::vector<EdgeIndex>& preds, EdgeIndex e) const {
    for (EdgeIndex p : preds)
      if (code_.globals[p].empty())
        throw CodingError("edge " + net_.edges[e].id + " visited before predecessor " + net_.edges[p].id);
  }

  std::vector<std::size_t> sinks_crossing(const KnotComponent& knot) const {
    std::set<std::size_t> s;
    for (EdgeIndex e : knot.edges)
      for (std::size_t t : st_.sinks_using[e]) s.insert(t);
    return {s.begin(), s.end()};
  }

  std::string knot_label(const KnotComponent& knot) const {
    std::string s = "{";
    for (std::size_t i = 0; i < knot.edges.size(); ++i) s += (i ? "," : "") + net_.edges[knot.edges[i]].id;
    return s + "}";
  }

  [[noreturn]] void search_failed(const std::string& what, std::size_t sinks, int cap) const {
    throw CodingError("no delay assignment with exponents below " + std::to_string(cap) + " keeps full rank for " +
                      what + " (" + std::to_string(sinks) +
                      " sinks affected); the bounded-search conjecture does not hold here");
  }

  /// Columns after replacing the given edges' globals, for the given sinks.
  bool full_rank_with(const std::vector<std::pair<EdgeIndex, const std::vector<Gf2Rational>*>>& updates,
                      const std::vector<std::size_t>& sinks) {
    auto lookup = [&](EdgeIndex e) -> const std::vector<Gf2Rational>* {
      for (const auto& [u, g] : updates)
        if (u == e) return g;
      return code_.globals[e].empty() ? nullptr : &code_.globals[e];
    };
    for (std::size_t t : sinks) {
      auto m = zero_matrix(code_.h, code_.h);
      for (std::size_t j = 0; j < code_.h; ++j) {
        const auto& path = net_.paths[t][j];
        std::size_t c = cursor_[t][j];
        while (c + 1 < path.size() && lookup(path[c + 1])) ++c;
        const auto* g = lookup(path[c]);
        for (std::size_t i = 0; i < code_.h; ++i) m[i][j] = (*g)[i];
      }
      ++code_.stats.rank_checks;
      if (rank_over_f2d(m) < code_.h) return false;
    }
    return true;
  }

  void advance_columns() {
    for (std::size_t t = 0; t < net_.sinks.size(); ++t)
      for (std::size_t j = 0; j < code_.h; ++j) {
        const auto& path = net_.paths[t][j];
        while (cursor_[t][j] + 1 < path.size() && !code_.globals[path[cursor_[t][j] + 1]].empty()) ++cursor_[t][j];
      }
  }

  void commit(EdgeIndex e, LocalEquation eq, std::vector<Gf2Rational> global, SearchRecord rec) {
    code_.locals[e] = std::move(eq);
    code_.globals[e] = std::move(global);
    advance_columns();
    code_.stats.searched_edges += 1;
    record(std::move(rec), 1);
    audit();
  }

  void record(SearchRecord rec, std::size_t edges) {
    bool delayed = false;
    for (int x : rec.exponents) {
      code_.stats.max_exponent = std::max(code_.stats.max_exponent, x);
      if (x >= rec.cap) code_.stats.cap_respected = false;
      if (x > 0) delayed = true;
    }
    if (delayed) code_.stats.delayed_edges += edges;
    code_.searches.push_back(std::move(rec));
  }

  void audit() {
    if (!opt_.audit_rank) return;
    for (std::size_t t = 0; t < net_.sinks.size(); ++t) {
      ++code_.stats.audit_checks;
      if (rank_over_f2d(sink_matrix(t)) != code_.h) ++code_.stats.audit_violations;
    }
  }

  const TransferTable& transfer_table_for(std::size_t k) {
    if (!transfers_ready_[k]) {
      code_.transfers[k] = transfer_table(net_, code_.knots[k], st_, opt_.mason);
      transfers_ready_[k] = true;
    }
    return code_.transfers[k];
  }

  void apply_precode() {
    const Gf2Rational p(code_.precode);
    for (auto& d : code_.decoders) {
      d.decode = d.inverse;
      int delay = 0;
      for (auto& row : d.decode)
        for (auto& x : row) {
          x = x / p;
          delay = std::max(delay, causal_split(x).advance);
        }
      d.delay = delay;
    }
  }

  const FlowNetwork& net_;
  const FlowStructure& st_;
  EncoderOptions opt_;
  NetworkCode code_;
  std::vector<std::size_t> knot_of_;
  std::vector<bool> transfers_ready_;
  std::vector<std::vector<std::size_t>> cursor_;
};

inline NetworkCode run(const FlowNetwork& net, const FlowStructure& st, EncoderOptions options = {}) {
  return Encoder(net, st, std::move(options)).run();
}

}  // namespace netcode
