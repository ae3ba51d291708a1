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

// Reference computations over networks and matrices that read only the raw
// FlowNetwork (edges and flow paths) or plain matrices.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "netcode/flow_graph.hpp"
#include "netcode/gf2.hpp"
#include "support/oracles.hpp"

namespace oracle {

/// Coefficients 0..horizon of the transfer from predecessor p to knot
/// edge e, by counting walks mod 2.  A walk is injected on every knot edge
/// that directly follows p on some flow, with gain D, and each arc taken
/// along consecutive flow edges inside the knot adds another D.  Arcs out
/// of edges that end where p ends are dropped.
inline Bits walk_parity(const netcode::FlowNetwork& net, const std::vector<netcode::EdgeIndex>& knot,
                        netcode::EdgeIndex p, netcode::EdgeIndex e, int horizon) {
  std::set<netcode::EdgeIndex> in(knot.begin(), knot.end());
  std::set<std::pair<netcode::EdgeIndex, netcode::EdgeIndex>> arcs;
  std::set<netcode::EdgeIndex> entries;
  for (const auto& per_sink : net.paths)
    for (const auto& path : per_sink)
      for (std::size_t k = 0; k + 1 < path.size(); ++k) {
        const auto a = path[k], b = path[k + 1];
        if (a == p && in.count(b)) entries.insert(b);
        if (in.count(a) && in.count(b) && net.edges[a].to != net.edges[p].to) arcs.insert({a, b});
      }
  const std::size_t m = net.edges.size();
  Bits cur(m, 0), out(static_cast<std::size_t>(horizon) + 1, 0);
  for (auto x : entries) cur[x] = 1;
  for (int n = 1; n <= horizon; ++n) {
    out[n] = cur[e];
    Bits next(m, 0);
    for (const auto& [a, b] : arcs) next[b] ^= cur[a];
    cur = std::move(next);
  }
  return out;
}

/// Determinant by cofactor expansion along the first row.
inline netcode::Gf2Rational laplace_det(const std::vector<std::vector<netcode::Gf2Rational>>& m) {
  const std::size_t n = m.size();
  if (n == 0) return netcode::Gf2Rational::one();
  if (n == 1) return m[0][0];
  netcode::Gf2Rational d;
  for (std::size_t j = 0; j < n; ++j) {
    if (m[0][j].is_zero()) continue;
    std::vector<std::vector<netcode::Gf2Rational>> minor;
    for (std::size_t i = 1; i < n; ++i) {
      minor.emplace_back();
      for (std::size_t k = 0; k < n; ++k)
        if (k != j) minor.back().push_back(m[i][k]);
    }
    d += m[0][j] * laplace_det(minor);
  }
  return d;
}

/// Largest k with a nonzero k x k minor.
inline std::size_t minor_rank(const std::vector<std::vector<netcode::Gf2Rational>>& m) {
  const std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
  std::size_t best = 0;
  for (std::uint32_t rmask = 1; rmask < (1u << rows); ++rmask)
    for (std::uint32_t cmask = 1; cmask < (1u << cols); ++cmask) {
      const auto k = static_cast<std::size_t>(std::popcount(rmask));
      if (k != static_cast<std::size_t>(std::popcount(cmask)) || k <= best) continue;
      std::vector<std::vector<netcode::Gf2Rational>> sub;
      for (std::size_t i = 0; i < rows; ++i) {
        if (!(rmask >> i & 1)) continue;
        sub.emplace_back();
        for (std::size_t j = 0; j < cols; ++j)
          if (cmask >> j & 1) sub.back().push_back(m[i][j]);
      }
      if (!laplace_det(sub).is_zero()) best = k;
    }
  return best;
}

/// Flow precedence closure: reach[a][b] when b can be reached from a along
/// consecutive flow edges.  Knot members are the edges on a cycle of it.
inline std::vector<std::vector<bool>> precedence_reach(const netcode::FlowNetwork& net) {
  const std::size_t m = net.edges.size();
  std::vector<std::vector<bool>> r(m, std::vector<bool>(m, false));
  for (const auto& per_sink : net.paths)
    for (const auto& path : per_sink)
      for (std::size_t k = 0; k + 1 < path.size(); ++k) r[path[k]][path[k + 1]] = true;
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t i = 0; i < m; ++i)
      if (r[i][k])
        for (std::size_t j = 0; j < m; ++j)
          if (r[k][j]) r[i][j] = true;
  return r;
}

}  // namespace oracle
