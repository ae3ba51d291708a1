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
 * @file report.hpp
 * @brief Text and JSON renderings of a compiled network code.
 *
 * make_report flattens a NetworkCode into strings once; render_text and
 * to_json both work from that flat form, so a JSON dump read back with
 * report_from_json renders to the same bytes.  The JSON schema is
 * documented in README.md.
 */

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "netcode/encoder.hpp"
#include "netcode/flow_graph.hpp"
#include "netcode/gf2.hpp"
#include "netcode/rational_matrix.hpp"

namespace netcode {

using StringMatrix = std::vector<std::vector<std::string>>;

struct EdgeReport {
  std::string id;
  std::string kind;  // source, acyclic, knot, shortcut
  std::string local;
  std::string global;
  std::vector<std::string> coefficients;  // per source, sigma_i(x) basis
  std::vector<int> exponents;             // artificial delays chosen, term order
};

struct TauReport {
  std::string from, to, value;
};

struct DeltaReport {
  std::string via;
  std::string expansion;  // integer term counts, e.g. 1+4D^3+3D^6
  std::string value;      // reduced over F2
};

struct KnotReport {
  std::string kind;
  std::vector<std::string> edges;
  std::vector<std::string> predecessors;
  std::vector<int> exponents;  // one per predecessor
  std::vector<DeltaReport> deltas;
  std::vector<TauReport> tau;
};

struct SinkReport {
  std::string name;
  std::vector<std::string> edges;
  StringMatrix m;
  int inverse_shift = 0;  // M_t^-1 = D^-shift * inverse
  StringMatrix inverse;
  std::vector<std::string> decode;
  int delay = 0;
  int lower_bound = 0;
  std::optional<int> upper_bound;
  bool polynomial_view = true;  // precode * M_t has no denominators
};

struct Report {
  std::string network;
  std::vector<std::string> symbols;
  std::string precode;
  bool shortcut = true;
  std::vector<EdgeReport> edges;
  std::vector<std::string> unused;
  std::vector<KnotReport> knots;
  std::vector<SinkReport> sinks;
  std::size_t searched_edges = 0;
  std::size_t delayed_edges = 0;
  int max_exponent = 0;
};

namespace detail {

inline std::string power_prefix(const Gf2Rational& c) {
  if (c.is_one()) return "";
  if (c.is_polynomial() && c.num().is_monomial()) {
    const int k = c.num().degree();
    return k == 1 ? "D*" : "D^" + std::to_string(k) + "*";
  }
  return "(" + c.to_string() + ")*";
}

inline std::string shifted(const std::string& stream, int shift) {
  if (shift == 0) return stream + "(x)";
  if (shift > 0) return stream + "(x-" + std::to_string(shift) + ")";
  return stream + "(x+" + std::to_string(-shift) + ")";
}

inline std::string join(const std::vector<std::string>& parts, const std::string& sep, const std::string& empty) {
  if (parts.empty()) return empty;
  std::string s = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) s += sep + parts[i];
  return s;
}

/// Terms of c applied to a stream: D^k becomes a k-step delay, the
/// remaining proper fraction stays symbolic in brackets.
inline std::vector<std::string> filter_terms(const Gf2Rational& c, const std::string& stream) {
  std::vector<std::string> out;
  if (c.is_zero()) return out;
  const int adv = std::max(0, -c.ord());
  const Gf2Rational causal = c.times_power_of_d(adv);
  if (causal.is_polynomial()) {
    for (int k : causal.num().exponents()) out.push_back(shifted(stream, k - adv));
    return out;
  }
  const auto split = split_proper(causal);
  for (int k : split.poly.exponents()) out.push_back(shifted(stream, k - adv));
  out.push_back("[" + split.rest.to_string() + "]" + shifted(stream, -adv));
  return out;
}

inline std::string local_text(const FlowNetwork& net, const LocalEquation& eq) {
  if (eq.kind == EncodingKind::source) return "D*" + net.sources[eq.source].symbol + "(x)";
  std::vector<std::string> parts;
  for (const auto& t : eq.terms) parts.push_back(power_prefix(t.coefficient()) + "v_" + net.edges[t.edge].id + "(x)");
  std::string s = join(parts, " + ", "0");
  if (!eq.removals.empty()) {
    std::vector<std::string> rem;
    for (const auto& t : eq.removals) rem.push_back(power_prefix(t.coefficient()) + "v_" + net.edges[t.edge].id + "(x)");
    s += " - [removal: " + join(rem, " + ", "0") + "]";
  }
  return s;
}

inline StringMatrix strings(const RationalMatrix& m) {
  StringMatrix out;
  for (const auto& row : m) {
    out.emplace_back();
    for (const auto& x : row) out.back().push_back(x.to_string());
  }
  return out;
}

inline std::string matrix_text(const StringMatrix& m) {
  std::vector<std::string> rows;
  for (const auto& r : m) rows.push_back("[" + join(r, ", ", "") + "]");
  return "[" + join(rows, ", ", "") + "]";
}

}  // namespace detail

inline Report make_report(const FlowNetwork& net, const NetworkCode& code, bool shortcut = true) {
  Report r;
  r.network = net.name;
  for (const auto& s : net.sources) r.symbols.push_back(s.symbol);
  r.precode = code.precode.to_string();
  r.shortcut = shortcut;

  std::vector<std::vector<int>> exps(net.edges.size());
  for (const auto& s : code.searches)
    if (s.step.kind == PlanStep::Kind::edge) exps[s.step.index] = s.exponents;

  for (const auto& step : code.plan) {
    std::vector<EdgeIndex> edges;
    if (step.kind == PlanStep::Kind::edge)
      edges.push_back(step.index);
    else
      edges = code.knots[step.index].edges;
    for (EdgeIndex e : edges) {
      if (!code.locals[e]) continue;
      EdgeReport er;
      er.id = net.edges[e].id;
      er.kind = to_string(code.locals[e]->kind);
      er.local = detail::local_text(net, *code.locals[e]);
      std::vector<std::string> terms;
      for (std::size_t i = 0; i < code.h; ++i) {
        er.coefficients.push_back(code.globals[e][i].to_string());
        for (auto& t : detail::filter_terms(code.globals[e][i], net.sources[i].symbol)) terms.push_back(t);
      }
      er.global = detail::join(terms, " + ", "0");
      er.exponents = exps[e];
      r.edges.push_back(std::move(er));
    }
  }
  for (EdgeIndex e = 0; e < net.edges.size(); ++e)
    if (!code.locals[e]) r.unused.push_back(net.edges[e].id);

  for (std::size_t k = 0; k < code.knots.size(); ++k) {
    const auto& knot = code.knots[k];
    const auto& table = code.transfers[k];
    KnotReport kr;
    kr.kind = to_string(knot.kind);
    for (EdgeIndex e : knot.edges) kr.edges.push_back(net.edges[e].id);
    for (EdgeIndex p : knot.predecessors) kr.predecessors.push_back(net.edges[p].id);
    for (const auto& s : code.searches)
      if (s.step.kind == PlanStep::Kind::knot && s.step.index == k) kr.exponents = s.exponents;
    for (std::size_t q = 0; q < table.predecessors.size(); ++q) {
      const auto& d = table.instances[q].delta;
      kr.deltas.push_back({net.edges[table.predecessors[q]].id, d.integer_form(), d.value.to_string()});
      for (std::size_t v = 0; v < table.edges.size(); ++v)
        kr.tau.push_back({net.edges[table.predecessors[q]].id, net.edges[table.edges[v]].id, table.tau[q][v].to_string()});
    }
    r.knots.push_back(std::move(kr));
  }

  for (std::size_t t = 0; t < code.decoders.size(); ++t) {
    const auto& d = code.decoders[t];
    SinkReport sr;
    sr.name = net.sinks[t].name;
    for (EdgeIndex e : d.edges) sr.edges.push_back(net.edges[e].id);
    sr.m = detail::strings(d.m);
    const auto f = factor_d_power(d.inverse);
    sr.inverse_shift = f.shift;
    sr.inverse = detail::strings(f.scaled);
    for (std::size_t i = 0; i < code.h; ++i) {
      std::vector<std::string> terms;
      for (std::size_t j = 0; j < code.h; ++j) {
        const std::string r_name = "r_" + sr.name + "_" + std::to_string(j + 1);
        for (auto& s : detail::filter_terms(d.inverse[j][i], r_name)) terms.push_back(s);
      }
      sr.decode.push_back(net.sources[i].symbol + "(x) = " + detail::join(terms, " + ", "0"));
    }
    sr.delay = d.delay;
    sr.lower_bound = d.lower_bound;
    sr.upper_bound = d.upper_bound;
    for (const auto& row : code.sink_view(t))
      for (const auto& x : row)
        if (!x.is_polynomial()) sr.polynomial_view = false;
    r.sinks.push_back(std::move(sr));
  }
  r.searched_edges = code.stats.searched_edges;
  r.delayed_edges = code.stats.delayed_edges;
  r.max_exponent = code.stats.max_exponent;
  return r;
}

inline std::string render_text(const Report& r) {
  std::ostringstream os;
  os << "network " << r.network << ": h = " << r.symbols.size() << ", sources " << detail::join(r.symbols, " ", "-")
     << "\n";
  os << "shortcut: " << (r.shortcut ? "on" : "off") << "\n";
  os << "precode: " << r.precode << "\n";
  os << "\nlocal encoding\n";
  for (const auto& e : r.edges) {
    os << "v_" << e.id << "(x) = " << e.local;
    if (e.kind == "shortcut") os << "  [shortcut]";
    os << "\n";
  }
  os << "\nglobal encoding\n";
  for (const auto& e : r.edges) os << "v_" << e.id << "(x) = " << e.global << "\n";
  if (!r.unused.empty()) os << "\nunused edges: " << detail::join(r.unused, " ", "") << "\n";
  for (const auto& k : r.knots) {
    os << "\n" << k.kind << " {" << detail::join(k.edges, ",", "") << "} entered via "
       << detail::join(k.predecessors, " ", "") << "\n";
    std::vector<std::string> ex;
    for (std::size_t q = 0; q < k.exponents.size(); ++q)
      ex.push_back("i(" + k.predecessors[q] + ")=" + std::to_string(k.exponents[q]));
    os << "exponents: " << detail::join(ex, " ", "-") << "\n";
    for (const auto& d : k.deltas) os << "Delta(" << d.via << ") = " << d.expansion << " = " << d.value << "\n";
    for (const auto& t : k.tau) os << "tau(" << t.from << "," << t.to << ") = " << t.value << "\n";
  }
  for (const auto& s : r.sinks) {
    os << "\nsink " << s.name << ": receives " << detail::join(s.edges, " ", "") << "\n";
    os << "M_" << s.name << " = " << detail::matrix_text(s.m) << "\n";
    os << "M_" << s.name << "^-1 = ";
    if (s.inverse_shift != 0) os << "1/D" << (s.inverse_shift == 1 ? "" : "^" + std::to_string(s.inverse_shift)) << " ";
    os << detail::matrix_text(s.inverse) << "\n";
    for (const auto& line : s.decode) os << line << "\n";
    os << "d_" << s.name << " = " << s.delay << " (bounds " << s.lower_bound << ".."
       << (s.upper_bound ? std::to_string(*s.upper_bound) : "?") << ")\n";
    os << "sink view polynomial after precode: " << (s.polynomial_view ? "yes" : "no") << "\n";
  }
  os << "\nsearch: " << r.searched_edges << " edges encoded, " << r.delayed_edges
     << " with artificial delay, largest exponent " << r.max_exponent << "\n";
  return os.str();
}

using Json = nlohmann::ordered_json;

inline Json to_json(const Report& r) {
  Json j;
  j["network"] = r.network;
  j["symbols"] = r.symbols;
  j["precode"] = r.precode;
  j["shortcut"] = r.shortcut;
  j["edges"] = Json::array();
  for (const auto& e : r.edges)
    j["edges"].push_back({{"id", e.id},
                          {"kind", e.kind},
                          {"local", e.local},
                          {"global", e.global},
                          {"coefficients", e.coefficients},
                          {"exponents", e.exponents}});
  j["unused"] = r.unused;
  j["knots"] = Json::array();
  for (const auto& k : r.knots) {
    Json kj{{"kind", k.kind}, {"edges", k.edges}, {"predecessors", k.predecessors}, {"exponents", k.exponents}};
    kj["deltas"] = Json::array();
    for (const auto& d : k.deltas) kj["deltas"].push_back({{"via", d.via}, {"expansion", d.expansion}, {"value", d.value}});
    kj["tau"] = Json::array();
    for (const auto& t : k.tau) kj["tau"].push_back({{"from", t.from}, {"to", t.to}, {"value", t.value}});
    j["knots"].push_back(std::move(kj));
  }
  j["sinks"] = Json::array();
  for (const auto& s : r.sinks) {
    Json sj{{"name", s.name}, {"edges", s.edges}, {"m", s.m}, {"inverse_shift", s.inverse_shift},
            {"inverse", s.inverse}, {"decode", s.decode}, {"delay", s.delay}, {"lower_bound", s.lower_bound}};
    sj["upper_bound"] = s.upper_bound ? Json(*s.upper_bound) : Json(nullptr);
    sj["polynomial_view"] = s.polynomial_view;
    j["sinks"].push_back(std::move(sj));
  }
  j["stats"] = {{"searched_edges", r.searched_edges}, {"delayed_edges", r.delayed_edges}, {"max_exponent", r.max_exponent}};
  return j;
}

inline std::string render_json(const Report& r) { return to_json(r).dump(2) + "\n"; }

inline Report report_from_json(const Json& j) {
  try {
    Report r;
    r.network = j.at("network").get<std::string>();
    r.symbols = j.at("symbols").get<std::vector<std::string>>();
    r.precode = j.at("precode").get<std::string>();
    r.shortcut = j.at("shortcut").get<bool>();
    for (const auto& e : j.at("edges"))
      r.edges.push_back({e.at("id"), e.at("kind"), e.at("local"), e.at("global"),
                         e.at("coefficients").get<std::vector<std::string>>(), e.at("exponents").get<std::vector<int>>()});
    r.unused = j.at("unused").get<std::vector<std::string>>();
    for (const auto& kj : j.at("knots")) {
      KnotReport k;
      k.kind = kj.at("kind");
      k.edges = kj.at("edges").get<std::vector<std::string>>();
      k.predecessors = kj.at("predecessors").get<std::vector<std::string>>();
      k.exponents = kj.at("exponents").get<std::vector<int>>();
      for (const auto& d : kj.at("deltas")) k.deltas.push_back({d.at("via"), d.at("expansion"), d.at("value")});
      for (const auto& t : kj.at("tau")) k.tau.push_back({t.at("from"), t.at("to"), t.at("value")});
      r.knots.push_back(std::move(k));
    }
    for (const auto& sj : j.at("sinks")) {
      SinkReport s;
      s.name = sj.at("name");
      s.edges = sj.at("edges").get<std::vector<std::string>>();
      s.m = sj.at("m").get<StringMatrix>();
      s.inverse_shift = sj.at("inverse_shift");
      s.inverse = sj.at("inverse").get<StringMatrix>();
      s.decode = sj.at("decode").get<std::vector<std::string>>();
      s.delay = sj.at("delay");
      s.lower_bound = sj.at("lower_bound");
      if (!sj.at("upper_bound").is_null()) s.upper_bound = sj.at("upper_bound").get<int>();
      s.polynomial_view = sj.at("polynomial_view");
      r.sinks.push_back(std::move(s));
    }
    const auto& st = j.at("stats");
    r.searched_edges = st.at("searched_edges");
    r.delayed_edges = st.at("delayed_edges");
    r.max_exponent = st.at("max_exponent");
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed report: ") + e.what());
  }
}

inline Report report_from_json(const std::string& text) {
  try {
    return report_from_json(Json::parse(text));
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("malformed report: ") + e.what());
  }
}

}  // namespace netcode
