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
 * @file simulator.hpp
 * @brief Bit-level, clocked simulation of a compiled network code.
 *
 * Two independent simulators drive the same source streams through a
 * NetworkCode.  simulate_filtered applies each edge's global coefficients
 * to the sources directly.  simulate_structural runs the local equations
 * node by node, one link delay per hop, with removal filters inside knots.
 * Both realize rational coefficients as finite feedback registers, so no
 * stream history is kept beyond the register state.
 *
 * decode_at_sinks applies M_t^-1 (divided by the precode when the sources
 * were precoded) and checks that generation x comes out at x + d_t.
 */

#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "netcode/encoder.hpp"
#include "netcode/errors.hpp"
#include "netcode/flow_graph.hpp"
#include "netcode/gf2.hpp"

namespace netcode {

using BitStream = std::vector<std::uint8_t>;

/// Realizes a causal rational filter num/den (den(0) = 1) in transposed
/// direct form II.  Each clock: y = output(u), then advance(u, y).
class FeedbackRegister {
 public:
  FeedbackRegister() = default;

  explicit FeedbackRegister(const Gf2Rational& r) {
    if (!r.is_causal()) throw CodingError("non-causal filter " + r.to_string());
    if (r.is_zero()) return;
    const int n = std::max(r.num().degree(), r.den().degree());
    b_.assign(static_cast<std::size_t>(n) + 1, 0);
    a_.assign(static_cast<std::size_t>(n) + 1, 0);
    for (int k = 0; k <= r.num().degree(); ++k) b_[k] = r.num().coeff(k);
    for (int k = 1; k <= r.den().degree(); ++k) a_[k] = r.den().coeff(k);
    feedback_ = !r.den().is_one();
    state_.assign(static_cast<std::size_t>(n), 0);
  }

  /// Output depends on the current input only when this is true.
  bool direct() const { return !b_.empty() && b_[0]; }
  bool feedback() const { return feedback_; }
  std::size_t state_bits() const { return state_.size(); }

  std::uint8_t output(std::uint8_t u) const {
    if (b_.empty()) return 0;
    std::uint8_t y = b_[0] & u;
    if (!state_.empty()) y ^= state_[0];
    return y;
  }

  void advance(std::uint8_t u, std::uint8_t y) {
    const std::size_t n = state_.size();
    for (std::size_t k = 0; k < n; ++k) {
      std::uint8_t next = k + 1 < n ? state_[k + 1] : 0;
      state_[k] = next ^ (b_[k + 1] & u) ^ (a_[k + 1] & y);
    }
  }

  std::uint8_t step(std::uint8_t u) {
    const std::uint8_t y = output(u);
    advance(u, y);
    return y;
  }

  void reset() { std::fill(state_.begin(), state_.end(), 0); }

 private:
  std::vector<std::uint8_t> b_, a_, state_;
  bool feedback_ = false;
};

inline BitStream apply_filter(const Gf2Rational& r, const BitStream& in) {
  FeedbackRegister reg(r);
  BitStream out(in.size());
  for (std::size_t x = 0; x < in.size(); ++x) out[x] = reg.step(in[x]);
  return out;
}

/// sigma_i(x) for x = 0..horizon; zero before time 0.
struct SourceSchedule {
  std::size_t horizon = 0;
  std::vector<BitStream> streams;

  static SourceSchedule zeros(std::size_t h, std::size_t horizon) {
    return {horizon, std::vector<BitStream>(h, BitStream(horizon + 1, 0))};
  }

  static SourceSchedule random(std::size_t h, std::size_t horizon, std::uint64_t seed = 1) {
    std::mt19937_64 rng(seed);
    auto s = zeros(h, horizon);
    for (auto& stream : s.streams)
      for (auto& b : stream) b = static_cast<std::uint8_t>(rng() & 1);
    return s;
  }

  static SourceSchedule impulse(std::size_t h, std::size_t horizon, std::size_t source, std::size_t time = 0) {
    auto s = zeros(h, horizon);
    s.streams.at(source).at(time) = 1;
    return s;
  }

  /// One generation per line: h characters '0'/'1' (spaces ignored, '#'
  /// starts a comment).  Missing generations are zero.
  static SourceSchedule parse(std::istream& in, std::size_t h, std::size_t horizon) {
    auto s = zeros(h, horizon);
    std::string line;
    std::size_t x = 0, lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (auto c = line.find('#'); c != std::string::npos) line.erase(c);
      std::string bits;
      for (char c : line) {
        if (c == '0' || c == '1') {
          bits += c;
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
          throw InputError("schedule:" + std::to_string(lineno) + ": unexpected character '" + c + "'");
        }
      }
      if (bits.empty()) continue;
      if (bits.size() != h)
        throw InputError("schedule:" + std::to_string(lineno) + ": expected " + std::to_string(h) + " bits, got " +
                         std::to_string(bits.size()));
      if (x <= horizon)
        for (std::size_t i = 0; i < h; ++i) s.streams[i][x] = bits[i] == '1';
      ++x;
    }
    return s;
  }

  static SourceSchedule load(const std::string& path, std::size_t h, std::size_t horizon) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open schedule " + path);
    return parse(in, h, horizon);
  }

  /// Delays every stream by s, dropping what falls past the horizon.
  SourceSchedule shifted(std::size_t s) const {
    auto out = zeros(streams.size(), horizon);
    for (std::size_t i = 0; i < streams.size(); ++i)
      for (std::size_t x = s; x <= horizon; ++x) out.streams[i][x] = streams[i][x - s];
    return out;
  }
};

struct MemoryReport {
  std::size_t registers = 0;
  std::size_t feedback_registers = 0;
  std::size_t state_bits = 0;

  void add(const FeedbackRegister& r) {
    ++registers;
    if (r.feedback()) ++feedback_registers;
    state_bits += r.state_bits();
  }
};

struct SimTrace {
  std::size_t horizon = 0;
  std::vector<BitStream> edges;  // empty for edges off every flow
  MemoryReport memory;
};

struct Divergence {
  EdgeIndex edge = kNone;
  std::size_t time = 0;
};

namespace detail {

inline void check_horizon(const NetworkCode& code, std::size_t horizon) {
  int need = 0;
  for (const auto& d : code.decoders) need = std::max(need, d.delay);
  if (horizon < static_cast<std::size_t>(need))
    throw InputError("horizon " + std::to_string(horizon) + " is below the largest decoding delay " +
                     std::to_string(need));
}

inline void check_schedule(const NetworkCode& code, const SourceSchedule& s) {
  if (s.streams.size() != code.h) throw InputError("schedule has the wrong number of sources");
  for (const auto& st : s.streams)
    if (st.size() != s.horizon + 1) throw InputError("schedule streams have inconsistent lengths");
}

inline std::vector<BitStream> emitted(const NetworkCode& code, const SourceSchedule& s, bool precode) {
  if (!precode || code.precode.is_one()) return s.streams;
  std::vector<BitStream> out;
  for (const auto& st : s.streams) out.push_back(apply_filter(Gf2Rational(code.precode), st));
  return out;
}

}  // namespace detail

/// Every edge as sum_i F_{e,i} sigma_i, with precode * sigma_i in place of
/// sigma_i when precode is set.
inline SimTrace simulate_filtered(const NetworkCode& code, const SourceSchedule& schedule, bool precode = true) {
  detail::check_schedule(code, schedule);
  detail::check_horizon(code, schedule.horizon);
  const auto sources = detail::emitted(code, schedule, precode);
  SimTrace trace;
  trace.horizon = schedule.horizon;
  trace.edges.resize(code.globals.size());
  for (std::size_t e = 0; e < code.globals.size(); ++e) {
    if (code.globals[e].empty()) continue;
    BitStream v(schedule.horizon + 1, 0);
    for (std::size_t i = 0; i < code.h; ++i) {
      const auto& c = code.globals[e][i];
      if (c.is_zero()) continue;
      FeedbackRegister reg(c);
      trace.memory.add(reg);
      for (std::size_t x = 0; x <= schedule.horizon; ++x) v[x] ^= reg.step(sources[i][x]);
    }
    trace.edges[e] = std::move(v);
  }
  return trace;
}

/// Runs the local equations clock by clock.  Within one clock, edges are
/// evaluated in plan order, so an undelayed read (a shortcut edge reading
/// its in-cycle partner) sees the value of the same clock.
inline SimTrace simulate_structural(const NetworkCode& code, const SourceSchedule& schedule, bool precode = true) {
  detail::check_schedule(code, schedule);
  detail::check_horizon(code, schedule.horizon);
  const auto sources = detail::emitted(code, schedule, precode);
  const std::size_t m = code.locals.size();

  struct Tap {
    EdgeIndex target, input;
    FeedbackRegister reg;
    std::uint8_t out = 0;
  };
  std::vector<Tap> taps;
  std::vector<std::vector<std::size_t>> taps_of(m);
  std::vector<FeedbackRegister> source_delay(m);
  for (EdgeIndex e = 0; e < m; ++e) {
    if (!code.locals[e]) continue;
    const auto& eq = *code.locals[e];
    if (eq.kind == EncodingKind::source) {
      source_delay[e] = FeedbackRegister(Gf2Rational::power_of_d(1));
      continue;
    }
    for (const auto* list : {&eq.terms, &eq.removals})
      for (const auto& t : *list) {
        const Gf2Rational c = t.coefficient();
        if (c.is_zero()) continue;
        taps_of[e].push_back(taps.size());
        taps.push_back({e, t.edge, FeedbackRegister(c)});
      }
  }

  // Evaluation order within a clock.
  std::vector<EdgeIndex> order;
  for (const auto& step : code.plan) {
    if (step.kind == PlanStep::Kind::edge) {
      order.push_back(step.index);
    } else {
      for (EdgeIndex e : code.knots.at(step.index).edges) order.push_back(e);
    }
  }

  SimTrace trace;
  trace.horizon = schedule.horizon;
  trace.edges.assign(m, {});
  for (EdgeIndex e = 0; e < m; ++e)
    if (code.locals[e]) trace.edges[e].assign(schedule.horizon + 1, 0);
  for (const auto& t : taps) trace.memory.add(t.reg);
  for (const auto& r : source_delay)
    if (r.state_bits()) trace.memory.add(r);

  std::vector<bool> done(m);
  for (std::size_t x = 0; x <= schedule.horizon; ++x) {
    std::fill(done.begin(), done.end(), false);
    for (EdgeIndex e : order) {
      if (!code.locals[e]) continue;
      const auto& eq = *code.locals[e];
      std::uint8_t v = 0;
      if (eq.kind == EncodingKind::source) {
        v = source_delay[e].step(sources[eq.source][x]);
      } else {
        for (std::size_t k : taps_of[e]) {
          auto& t = taps[k];
          std::uint8_t u = 0;
          if (t.reg.direct()) {
            if (!done[t.input])
              throw CodingError("undelayed read of edge " + std::to_string(t.input) + " before it is computed");
            u = trace.edges[t.input][x];
          }
          t.out = t.reg.output(u);
          v ^= t.out;
        }
      }
      trace.edges[e][x] = v;
      done[e] = true;
    }
    for (auto& t : taps) t.reg.advance(trace.edges[t.input][x], t.out);
  }
  return trace;
}

inline std::optional<Divergence> first_divergence(const SimTrace& a, const SimTrace& b) {
  const std::size_t m = std::max(a.edges.size(), b.edges.size());
  for (std::size_t x = 0; x <= std::max(a.horizon, b.horizon); ++x)
    for (EdgeIndex e = 0; e < m; ++e) {
      const auto bit = [&](const SimTrace& t) -> int {
        if (e >= t.edges.size() || x >= t.edges[e].size()) return 0;
        return t.edges[e][x];
      };
      if (bit(a) != bit(b)) return Divergence{e, x};
    }
  return std::nullopt;
}

struct SinkResult {
  std::string sink;
  std::vector<int> symbol_delays;  // per source: generation x out at x + delay
  int delay = 0;                   // d_t
  std::optional<int> realized;     // measured alignment of the output
  bool ok = false;
  std::optional<std::size_t> first_bad_generation;
  std::vector<BitStream> decoded;  // decoded[i][x] = estimate of sigma_i(x - symbol_delays[i])
  MemoryReport memory;
};

namespace detail {

/// Smallest s with out[x] == src[x - s] for all x in range, if any.
inline std::optional<int> alignment(const BitStream& out, const BitStream& src, int max_shift) {
  for (int s = 0; s <= max_shift; ++s) {
    bool ok = true;
    for (std::size_t x = 0; x < out.size() && ok; ++x) {
      const std::uint8_t want = x >= static_cast<std::size_t>(s) ? src[x - s] : 0;
      ok = out[x] == want;
    }
    if (ok) return s;
  }
  return std::nullopt;
}

}  // namespace detail

/// Decodes every sink from the trace.  Symbol i at sink t is recovered
/// with delay max_j of the advance in entry (j, i) of the decoder.  The
/// realized delay is measured by aligning each output stream with its
/// source and must equal d_t for a nonzero schedule.
inline std::vector<SinkResult> decode_at_sinks(const NetworkCode& code, const FlowNetwork& net,
                                               const SimTrace& trace, const SourceSchedule& schedule,
                                               bool precode = true) {
  detail::check_horizon(code, trace.horizon);
  std::vector<SinkResult> out;
  for (std::size_t t = 0; t < code.decoders.size(); ++t) {
    const auto& d = code.decoders[t];
    const RationalMatrix& dec = precode ? d.decode : d.inverse;
    SinkResult r;
    r.sink = net.sinks[t].name;
    r.delay = d.delay;
    r.ok = true;
    int realized = 0;
    bool measurable = true;
    for (std::size_t i = 0; i < code.h; ++i) {
      int adv = 0;
      for (std::size_t j = 0; j < code.h; ++j) adv = std::max(adv, causal_split(dec[j][i]).advance);
      r.symbol_delays.push_back(adv);
      BitStream y(trace.horizon + 1, 0);
      for (std::size_t j = 0; j < code.h; ++j) {
        const Gf2Rational f = dec[j][i].times_power_of_d(adv);
        if (f.is_zero()) continue;
        FeedbackRegister reg(f);
        r.memory.add(reg);
        const auto& rx = trace.edges.at(d.edges[j]);
        for (std::size_t x = 0; x <= trace.horizon; ++x) y[x] ^= reg.step(rx[x]);
      }
      for (std::size_t x = static_cast<std::size_t>(adv); x <= trace.horizon; ++x)
        if (y[x] != schedule.streams[i][x - adv]) {
          r.ok = false;
          const std::size_t g = x - adv;
          if (!r.first_bad_generation || g < *r.first_bad_generation) r.first_bad_generation = g;
          break;
        }
      auto s = detail::alignment(y, schedule.streams[i], static_cast<int>(trace.horizon) / 2);
      bool nonzero = std::find(schedule.streams[i].begin(), schedule.streams[i].end(), 1) != schedule.streams[i].end();
      if (s && nonzero)
        realized = std::max(realized, *s);
      else
        measurable = false;
      r.decoded.push_back(std::move(y));
    }
    if (measurable) {
      r.realized = realized;
      if (realized != r.delay) r.ok = false;
    }
    out.push_back(std::move(r));
  }
  return out;
}

/// Registers with feedback taps needed to realize the code as seen from
/// sink t (precode * M_t).  Zero means the sink sees a polynomial code.
inline std::size_t sink_view_feedback_registers(const NetworkCode& code, std::size_t t) {
  std::size_t n = 0;
  for (const auto& row : code.sink_view(t))
    for (const auto& x : row)
      if (!x.is_zero() && FeedbackRegister(x).feedback()) ++n;
  return n;
}

/// "time,edge,bit" rows for every edge on a flow.
inline std::string trace_csv(const SimTrace& trace, const FlowNetwork& net) {
  std::ostringstream os;
  os << "time,edge,bit\n";
  for (std::size_t x = 0; x <= trace.horizon; ++x)
    for (EdgeIndex e = 0; e < trace.edges.size(); ++e)
      if (!trace.edges[e].empty()) os << x << ',' << net.edges[e].id << ',' << int(trace.edges[e][x]) << '\n';
  return os.str();
}

}  // namespace netcode
