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

// Independent reference computations used only by the tests.  They work on
// plain bit vectors and integer counters so they share no code paths with
// the library under test.

#include <cstdint>
#include <ostream>
#include <random>
#include <utility>
#include <vector>

#include "netcode/gf2.hpp"

namespace oracle {

using Bits = std::vector<std::uint8_t>;

inline Bits trimmed(Bits b) {
  while (!b.empty() && b.back() == 0) b.pop_back();
  return b;
}

inline Bits to_bits(const netcode::Gf2Poly& p) {
  Bits b;
  if (p.is_zero()) return b;
  b.resize(static_cast<std::size_t>(p.degree()) + 1);
  for (int k = 0; k <= p.degree(); ++k) b[k] = p.coeff(k);
  return b;
}

inline Bits schoolbook_mul(const Bits& a, const Bits& b) {
  if (a.empty() || b.empty()) return {};
  Bits c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] ^= a[i] & b[j];
  return trimmed(c);
}

/// Schoolbook long division from the top degree down.
inline std::pair<Bits, Bits> long_division(Bits a, const Bits& b) {
  a = trimmed(a);
  const Bits bt = trimmed(b);
  const int db = static_cast<int>(bt.size()) - 1;
  Bits q;
  for (int k = static_cast<int>(a.size()) - 1; k >= db; --k) {
    if (!a[k]) continue;
    const int shift = k - db;
    if (static_cast<int>(q.size()) <= shift) q.resize(shift + 1, 0);
    q[shift] = 1;
    for (int j = 0; j <= db; ++j) a[shift + j] ^= bt[j];
  }
  return {trimmed(q), trimmed(a)};
}

inline netcode::Gf2Poly random_poly(std::mt19937_64& rng, int max_degree) {
  std::uniform_int_distribution<int> deg(-1, max_degree);
  int d = deg(rng);
  if (d < 0) return {};
  std::vector<int> exps{d};
  for (int k = 0; k < d; ++k)
    if (rng() & 1) exps.push_back(k);
  return netcode::Gf2Poly::from_exponents(exps);
}

inline netcode::Gf2Rational random_rational(std::mt19937_64& rng, int max_degree) {
  netcode::Gf2Poly den;
  while (den.is_zero()) den = random_poly(rng, max_degree);
  return netcode::rat_reduce(random_poly(rng, max_degree), den);
}

/// Random rational with a denominator having constant term 1.
inline netcode::Gf2Rational random_causal(std::mt19937_64& rng, int max_degree) {
  netcode::Gf2Poly den = random_poly(rng, max_degree);
  if (!den.coeff(0)) den += netcode::Gf2Poly::one();
  return netcode::rat_reduce(random_poly(rng, max_degree), den);
}

/// Coefficients 0..horizon of num/den via the geometric series
/// 1/(1+q) = 1 + q + q^2 + ..., truncated.  Requires den(0) = 1.
inline Bits power_series(const netcode::Gf2Rational& r, int horizon) {
  const std::size_t n = static_cast<std::size_t>(horizon) + 1;
  auto truncate = [n](Bits b) {
    b.resize(n, 0);
    return b;
  };
  Bits q = truncate(to_bits(r.den()));
  q[0] = 0;
  Bits inv(n, 0), power(n, 0);
  power[0] = 1;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) inv[i] ^= power[i];
    power = truncate(schoolbook_mul(power, q));
  }
  return truncate(schoolbook_mul(truncate(to_bits(r.num())), inv));
}

}  // namespace oracle

namespace netcode {

inline void PrintTo(const Gf2Poly& p, std::ostream* os) { *os << p.to_string(); }
inline void PrintTo(const Gf2Rational& r, std::ostream* os) { *os << r.to_string(); }

}  // namespace netcode
