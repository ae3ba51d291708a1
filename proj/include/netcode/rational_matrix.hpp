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
 * @file rational_matrix.hpp
 * @brief Dense matrices over F2(D): rank, determinant, inverse.
 *
 * Rank and determinant clear denominators row by row and run fraction-free
 * (Bareiss) elimination in F2[D], so intermediate degrees stay bounded by
 * the minors.  Inversion is plain Gauss-Jordan over reduced rationals.
 */

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "netcode/errors.hpp"
#include "netcode/gf2.hpp"

namespace netcode {

using RationalMatrix = std::vector<std::vector<Gf2Rational>>;
using PolyMatrix = std::vector<std::vector<Gf2Poly>>;

inline RationalMatrix zero_matrix(std::size_t rows, std::size_t cols) {
  return RationalMatrix(rows, std::vector<Gf2Rational>(cols));
}

inline RationalMatrix identity_matrix(std::size_t n) {
  auto m = zero_matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) m[i][i] = Gf2Rational::one();
  return m;
}

inline RationalMatrix multiply(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.empty()) return {};
  const std::size_t inner = a.front().size();
  if (b.size() != inner) throw std::invalid_argument("multiply: shape mismatch");
  const std::size_t cols = b.empty() ? 0 : b.front().size();
  auto c = zero_matrix(a.size(), cols);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < inner; ++k) {
      if (a[i][k].is_zero()) continue;
      for (std::size_t j = 0; j < cols; ++j)
        if (!b[k][j].is_zero()) c[i][j] += a[i][k] * b[k][j];
    }
  return c;
}

/// Multiplies each row by the lcm of its denominators.  Returns the
/// polynomial matrix and the product of the multipliers.
struct ClearedMatrix {
  PolyMatrix rows;
  Gf2Poly multiplier = Gf2Poly::one();
};

inline ClearedMatrix clear_denominators(const RationalMatrix& m) {
  ClearedMatrix out;
  for (const auto& row : m) {
    Gf2Poly l = Gf2Poly::one();
    for (const auto& x : row) l = lcm(l, x.den());
    std::vector<Gf2Poly> prow;
    prow.reserve(row.size());
    for (const auto& x : row) prow.push_back(x.num() * divmod(l, x.den()).quotient);
    out.rows.push_back(std::move(prow));
    out.multiplier *= l;
  }
  return out;
}

namespace detail {

/// In-place Bareiss elimination with column skipping.  Returns the rank;
/// for square full-rank input, a[n-1][n-1] is the determinant up to the
/// row swaps, which do not matter in characteristic 2.
inline std::size_t bareiss(PolyMatrix& a) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows == 0 ? 0 : a.front().size();
  Gf2Poly prev = Gf2Poly::one();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t pivot = rows;
    for (std::size_t i = r; i < rows; ++i)
      if (!a[i][c].is_zero()) {
        pivot = i;
        break;
      }
    if (pivot == rows) continue;
    std::swap(a[r], a[pivot]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        Gf2Poly v = a[r][c] * a[i][j] + a[i][c] * a[r][j];
        auto qr = divmod(v, prev);
        if (!qr.remainder.is_zero()) throw CodingError("inexact Bareiss division");
        a[i][j] = std::move(qr.quotient);
      }
      a[i][c] = Gf2Poly();
    }
    prev = a[r][c];
    ++r;
  }
  return r;
}

}  // namespace detail

inline std::size_t rank_over_f2d(const RationalMatrix& m) {
  auto cleared = clear_denominators(m);
  return detail::bareiss(cleared.rows);
}

inline Gf2Rational det(const RationalMatrix& m) {
  const std::size_t n = m.size();
  for (const auto& row : m)
    if (row.size() != n) throw std::invalid_argument("det: matrix is not square");
  if (n == 0) return Gf2Rational::one();
  auto cleared = clear_denominators(m);
  if (detail::bareiss(cleared.rows) < n) return {};
  return rat_reduce(cleared.rows[n - 1][n - 1], cleared.multiplier);
}

/// Gauss-Jordan inverse; nullopt when singular.
inline std::optional<RationalMatrix> inverse(const RationalMatrix& m) {
  const std::size_t n = m.size();
  for (const auto& row : m)
    if (row.size() != n) throw std::invalid_argument("inverse: matrix is not square");
  RationalMatrix a = m;
  RationalMatrix inv = identity_matrix(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = n;
    for (std::size_t i = c; i < n; ++i)
      if (!a[i][c].is_zero()) {
        pivot = i;
        break;
      }
    if (pivot == n) return std::nullopt;
    std::swap(a[c], a[pivot]);
    std::swap(inv[c], inv[pivot]);
    const Gf2Rational scale = a[c][c].inverse();
    for (std::size_t j = 0; j < n; ++j) {
      a[c][j] = a[c][j] * scale;
      inv[c][j] = inv[c][j] * scale;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || a[i][c].is_zero()) continue;
      const Gf2Rational f = a[i][c];
      for (std::size_t j = 0; j < n; ++j) {
        if (!a[c][j].is_zero()) a[i][j] += f * a[c][j];
        if (!inv[c][j].is_zero()) inv[i][j] += f * inv[c][j];
      }
    }
  }
  return inv;
}

/// m = D^{-shift} * scaled, with shift chosen so the smallest order among
/// the nonzero entries of scaled is 0.
struct DFactored {
  int shift = 0;
  RationalMatrix scaled;
};

inline DFactored factor_d_power(const RationalMatrix& m) {
  DFactored out{0, m};
  bool any = false;
  int lowest = 0;
  for (const auto& row : m)
    for (const auto& x : row)
      if (!x.is_zero()) {
        lowest = any ? std::min(lowest, x.ord()) : x.ord();
        any = true;
      }
  if (!any) return out;
  out.shift = -lowest;
  for (auto& row : out.scaled)
    for (auto& x : row) x = x.times_power_of_d(out.shift);
  return out;
}

inline std::string to_string(const RationalMatrix& m) {
  std::string s = "[";
  for (std::size_t i = 0; i < m.size(); ++i) {
    s += i ? ", [" : "[";
    for (std::size_t j = 0; j < m[i].size(); ++j) {
      if (j) s += ", ";
      s += m[i][j].to_string();
    }
    s += "]";
  }
  return s + "]";
}

}  // namespace netcode
