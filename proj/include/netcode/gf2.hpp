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
 * @file gf2.hpp
 * @brief Polynomials and rational functions in the delay operator D over F2.
 *
 * A Gf2Poly is a packed bit vector where bit k is the coefficient of D^k.
 * Every value is kept canonical: no trailing zero words, and zero is the
 * empty vector.  Gf2Rational keeps numerator and denominator coprime after
 * every operation, so equality is structural.
 *
 * Text form is a sum of monomials in ascending powers, "1+D+D^3", and a
 * rational renders as "num/(den)" with the numerator parenthesised when it
 * has more than one term.
 */

#include <algorithm>
#include <atomic>
#include <bit>
#include <cctype>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "netcode/errors.hpp"

namespace netcode {

inline constexpr int kDefaultDegreeCap = 4096;

/// Largest degree any polynomial operation may produce.  Exceeding it raises
/// ResourceError.  Shared by all threads; changing it mid-computation is not
/// supported.
inline std::atomic<int>& degree_cap() {
  static std::atomic<int> cap{kDefaultDegreeCap};
  return cap;
}

class Gf2Poly {
 public:
  /// degree() of the zero polynomial.
  static constexpr int kZeroDegree = std::numeric_limits<int>::min();

  Gf2Poly() = default;

  static Gf2Poly one() { return monomial(0); }

  static Gf2Poly monomial(int k) {
    check_degree(k);
    Gf2Poly p;
    p.words_.assign(static_cast<std::size_t>(k / 64 + 1), 0);
    p.words_.back() = std::uint64_t{1} << (k % 64);
    return p;
  }

  /// Sum of D^k over the given exponents; repeated exponents cancel.
  static Gf2Poly from_exponents(std::span<const int> exps) {
    Gf2Poly p;
    for (int k : exps) p.flip(k);
    p.trim();
    return p;
  }
  static Gf2Poly from_exponents(std::initializer_list<int> exps) {
    return from_exponents(std::span<const int>(exps.begin(), exps.size()));
  }

  /// bits[k] is the coefficient of D^k.
  static Gf2Poly from_bits(std::span<const std::uint8_t> bits) {
    Gf2Poly p;
    for (std::size_t k = 0; k < bits.size(); ++k)
      if (bits[k] & 1) p.flip(static_cast<int>(k));
    p.trim();
    return p;
  }

  bool is_zero() const { return words_.empty(); }
  bool is_one() const { return words_.size() == 1 && words_[0] == 1; }

  int degree() const {
    if (words_.empty()) return kZeroDegree;
    return static_cast<int>(64 * (words_.size() - 1)) + 63 -
           std::countl_zero(words_.back());
  }

  bool coeff(int k) const {
    if (k < 0) return false;
    auto w = static_cast<std::size_t>(k / 64);
    return w < words_.size() && ((words_[w] >> (k % 64)) & 1U);
  }

  /// Multiplicity of the root D = 0 (number of trailing zero coefficients).
  /// Zero has no finite order; 0 is returned for it.
  int ord() const {
    for (std::size_t w = 0; w < words_.size(); ++w)
      if (words_[w] != 0)
        return static_cast<int>(64 * w) + std::countr_zero(words_[w]);
    return 0;
  }

  bool is_monomial() const { return weight() == 1; }

  std::size_t weight() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  /// Exponents with coefficient 1, ascending.
  std::vector<int> exponents() const {
    std::vector<int> out;
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits != 0) {
        out.push_back(static_cast<int>(64 * w) + std::countr_zero(bits));
        bits &= bits - 1;
      }
    }
    return out;
  }

  /// Multiply by D^k, k >= 0.
  Gf2Poly shifted_up(int k) const {
    if (is_zero() || k == 0) return *this;
    check_degree(degree() + k);
    Gf2Poly out;
    out.words_.assign(static_cast<std::size_t>((degree() + k) / 64 + 1), 0);
    xor_shifted(out.words_, words_, k);
    out.trim();
    return out;
  }

  /// Exact division by D^k; requires ord() >= k.
  Gf2Poly shifted_down(int k) const {
    if (is_zero() || k == 0) return *this;
    Gf2Poly out;
    for (int e : exponents())
      if (e >= k) out.flip(e - k);
    out.trim();
    return out;
  }

  Gf2Poly& operator+=(const Gf2Poly& rhs) {
    if (rhs.words_.size() > words_.size()) words_.resize(rhs.words_.size(), 0);
    for (std::size_t i = 0; i < rhs.words_.size(); ++i) words_[i] ^= rhs.words_[i];
    trim();
    return *this;
  }
  Gf2Poly& operator-=(const Gf2Poly& rhs) { return *this += rhs; }

  friend Gf2Poly operator+(Gf2Poly a, const Gf2Poly& b) { return a += b; }
  friend Gf2Poly operator-(Gf2Poly a, const Gf2Poly& b) { return a += b; }

  /// Carry-less product.
  friend Gf2Poly operator*(const Gf2Poly& a, const Gf2Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    const Gf2Poly& small = a.weight() <= b.weight() ? a : b;
    const Gf2Poly& big = &small == &a ? b : a;
    check_degree(a.degree() + b.degree());
    Gf2Poly out;
    out.words_.assign(static_cast<std::size_t>((a.degree() + b.degree()) / 64 + 1), 0);
    for (int e : small.exponents()) xor_shifted(out.words_, big.words_, e);
    out.trim();
    return out;
  }
  Gf2Poly& operator*=(const Gf2Poly& rhs) { return *this = *this * rhs; }

  friend bool operator==(const Gf2Poly&, const Gf2Poly&) = default;

  /// Total order (by degree, then coefficients) for use as a map key.
  friend bool operator<(const Gf2Poly& a, const Gf2Poly& b) {
    if (a.words_.size() != b.words_.size()) return a.words_.size() < b.words_.size();
    for (std::size_t i = a.words_.size(); i-- > 0;)
      if (a.words_[i] != b.words_[i]) return a.words_[i] < b.words_[i];
    return false;
  }

  std::string to_string() const {
    if (is_zero()) return "0";
    std::string s;
    for (int e : exponents()) {
      if (!s.empty()) s += '+';
      if (e == 0)
        s += '1';
      else if (e == 1)
        s += 'D';
      else
        s += "D^" + std::to_string(e);
    }
    return s;
  }

  /// Accepts the rendering grammar: '+'-separated terms, each "0", "1",
  /// "D" or "D^k".  Whitespace is ignored.  Throws InputError.
  static Gf2Poly parse(std::string_view text);

 private:
  static void check_degree(int d) {
    if (d > degree_cap().load(std::memory_order_relaxed))
      throw ResourceError("polynomial degree " + std::to_string(d) +
                          " exceeds the configured cap of " +
                          std::to_string(degree_cap().load()));
  }

  void flip(int k) {
    check_degree(k);
    auto w = static_cast<std::size_t>(k / 64);
    if (w >= words_.size()) words_.resize(w + 1, 0);
    words_[w] ^= std::uint64_t{1} << (k % 64);
  }

  void trim() {
    while (!words_.empty() && words_.back() == 0) words_.pop_back();
  }

  static void xor_shifted(std::vector<std::uint64_t>& dst,
                          const std::vector<std::uint64_t>& src, int shift) {
    const auto word_shift = static_cast<std::size_t>(shift / 64);
    const int bit_shift = shift % 64;
    for (std::size_t i = 0; i < src.size(); ++i) {
      dst[i + word_shift] ^= src[i] << bit_shift;
      if (bit_shift != 0 && i + word_shift + 1 < dst.size())
        dst[i + word_shift + 1] ^= src[i] >> (64 - bit_shift);
    }
  }

  std::vector<std::uint64_t> words_;
};

inline Gf2Poly Gf2Poly::parse(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw InputError("empty polynomial");
  Gf2Poly p;
  std::size_t pos = 0;
  while (true) {
    std::size_t end = s.find('+', pos);
    std::string_view term(s.data() + pos, (end == std::string::npos ? s.size() : end) - pos);
    if (term == "0") {
    } else if (term == "1") {
      p.flip(0);
    } else if (term == "D") {
      p.flip(1);
    } else if (term.size() > 2 && term.substr(0, 2) == "D^" &&
               std::all_of(term.begin() + 2, term.end(),
                           [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      if (term.size() > 12) throw InputError("exponent too large in '" + std::string(text) + "'");
      p.flip(std::stoi(std::string(term.substr(2))));
    } else {
      throw InputError("malformed polynomial term '" + std::string(term) + "' in '" +
                       std::string(text) + "'");
    }
    if (end == std::string::npos) break;
    pos = end + 1;
  }
  p.trim();
  return p;
}

struct PolyDivision {
  Gf2Poly quotient;
  Gf2Poly remainder;
};

/// a = q*b + r with degree(r) < degree(b).
inline PolyDivision divmod(const Gf2Poly& a, const Gf2Poly& b) {
  if (b.is_zero()) throw DivisionByZero("polynomial division by zero");
  PolyDivision out{{}, a};
  const int db = b.degree();
  std::vector<int> qexps;
  while (!out.remainder.is_zero() && out.remainder.degree() >= db) {
    int s = out.remainder.degree() - db;
    qexps.push_back(s);
    out.remainder += b.shifted_up(s);
  }
  out.quotient = Gf2Poly::from_exponents(qexps);
  return out;
}

/// Euclid.  Over F2 every nonzero polynomial is monic, so the result is
/// unique.
inline Gf2Poly gcd(Gf2Poly a, Gf2Poly b) {
  if (a.is_zero() && b.is_zero()) throw DivisionByZero("gcd(0, 0) is undefined");
  while (!b.is_zero()) {
    Gf2Poly r = divmod(a, b).remainder;
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

inline Gf2Poly lcm(const Gf2Poly& a, const Gf2Poly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  return divmod(a, gcd(a, b)).quotient * b;
}

class Gf2Rational {
 public:
  Gf2Rational() : den_(Gf2Poly::one()) {}
  Gf2Rational(Gf2Poly p) : num_(std::move(p)), den_(Gf2Poly::one()) {}  // NOLINT

  /// Reduced n/d.  Throws DivisionByZero on d = 0.
  static Gf2Rational reduce(Gf2Poly n, Gf2Poly d) {
    if (d.is_zero()) throw DivisionByZero("rational with zero denominator");
    Gf2Rational r;
    if (n.is_zero()) return r;
    Gf2Poly g = gcd(n, d);
    if (!g.is_one()) {
      n = divmod(n, g).quotient;
      d = divmod(d, g).quotient;
    }
    r.num_ = std::move(n);
    r.den_ = std::move(d);
    return r;
  }

  static Gf2Rational one() { return Gf2Rational(Gf2Poly::one()); }

  /// D^k for any integer k; negative powers become 1/D^-k.
  static Gf2Rational power_of_d(int k) {
    if (k >= 0) return Gf2Rational(Gf2Poly::monomial(k));
    Gf2Rational r;
    r.num_ = Gf2Poly::one();
    r.den_ = Gf2Poly::monomial(-k);
    return r;
  }

  const Gf2Poly& num() const { return num_; }
  const Gf2Poly& den() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }
  bool is_polynomial() const { return den_.is_one(); }

  /// Realizable as a filter without time advance: denominator has a
  /// nonzero constant term.
  bool is_causal() const { return den_.coeff(0); }

  /// ord_D of the value: ord(num) - ord(den).  Zero yields 0.
  int ord() const { return is_zero() ? 0 : num_.ord() - den_.ord(); }

  Gf2Rational inverse() const {
    if (is_zero()) throw DivisionByZero("inverse of zero");
    Gf2Rational r;
    r.num_ = den_;
    r.den_ = num_;
    return r;
  }

  /// Multiply by D^k without a gcd pass (k may be negative).
  Gf2Rational times_power_of_d(int k) const {
    if (is_zero() || k == 0) return *this;
    Gf2Rational r = *this;
    if (k > 0) {
      int cancel = std::min(k, r.den_.ord());
      r.den_ = r.den_.shifted_down(cancel);
      r.num_ = r.num_.shifted_up(k - cancel);
    } else {
      int cancel = std::min(-k, r.num_.ord());
      r.num_ = r.num_.shifted_down(cancel);
      r.den_ = r.den_.shifted_up(-k - cancel);
    }
    return r;
  }

  friend Gf2Rational operator+(const Gf2Rational& a, const Gf2Rational& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.den_ == b.den_) return reduce(a.num_ + b.num_, a.den_);
    return reduce(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Gf2Rational operator-(const Gf2Rational& a, const Gf2Rational& b) { return a + b; }

  friend Gf2Rational operator*(const Gf2Rational& a, const Gf2Rational& b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (a.is_polynomial() && b.is_polynomial()) return Gf2Rational(a.num_ * b.num_);
    // Cross-cancel first so intermediate degrees stay small.
    Gf2Poly g1 = gcd(a.num_, b.den_);
    Gf2Poly g2 = gcd(b.num_, a.den_);
    Gf2Rational r;
    r.num_ = divmod(a.num_, g1).quotient * divmod(b.num_, g2).quotient;
    r.den_ = divmod(a.den_, g2).quotient * divmod(b.den_, g1).quotient;
    return r;
  }

  friend Gf2Rational operator/(const Gf2Rational& a, const Gf2Rational& b) {
    if (b.is_zero()) throw DivisionByZero("rational division by zero");
    return a * b.inverse();
  }

  Gf2Rational& operator+=(const Gf2Rational& rhs) { return *this = *this + rhs; }
  Gf2Rational& operator*=(const Gf2Rational& rhs) { return *this = *this * rhs; }

  friend bool operator==(const Gf2Rational&, const Gf2Rational&) = default;

  std::string to_string() const {
    if (den_.is_one()) return num_.to_string();
    std::string n = num_.to_string();
    if (num_.weight() > 1) n = "(" + n + ")";
    return n + "/(" + den_.to_string() + ")";
  }

  /// Accepts a polynomial, "num/(den)" or "(num)/(den)".
  static Gf2Rational parse(std::string_view text) {
    std::string s;
    for (char c : text)
      if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    auto strip = [&](std::string_view v) -> std::string_view {
      if (v.size() >= 2 && v.front() == '(' && v.back() == ')') return v.substr(1, v.size() - 2);
      return v;
    };
    auto slash = s.find('/');
    if (slash == std::string::npos) return Gf2Rational(Gf2Poly::parse(strip(s)));
    std::string_view sv(s);
    Gf2Poly n = Gf2Poly::parse(strip(sv.substr(0, slash)));
    Gf2Poly d = Gf2Poly::parse(strip(sv.substr(slash + 1)));
    if (d.is_zero()) throw InputError("zero denominator in '" + std::string(text) + "'");
    return reduce(std::move(n), std::move(d));
  }

 private:
  Gf2Poly num_;
  Gf2Poly den_;
};

inline Gf2Rational rat_reduce(Gf2Poly n, Gf2Poly d) {
  return Gf2Rational::reduce(std::move(n), std::move(d));
}

/// Polynomial part plus proper fraction: value = poly + rest, with
/// degree(rest.num) < degree(rest.den) whenever rest is nonzero.
struct RationalSplit {
  Gf2Poly poly;
  Gf2Rational rest;
};

inline RationalSplit split_proper(const Gf2Rational& r) {
  if (r.is_polynomial()) return {r.num(), {}};
  auto qr = divmod(r.num(), r.den());
  return {qr.quotient, Gf2Rational::reduce(qr.remainder, r.den())};
}

/// Expansion c_0..c_horizon of a causal rational as a power series in D.
struct CausalSeries {
  Gf2Rational source;
  int horizon = 0;
  std::vector<std::uint8_t> bits;
};

/// Long division of num by den truncated at D^horizon.  Requires a
/// denominator with constant term 1.
inline CausalSeries series_expand(const Gf2Rational& r, int horizon) {
  if (horizon < 0) throw InputError("negative series horizon");
  if (!r.is_causal())
    throw InputError("series_expand: non-causal denominator " + r.den().to_string());
  CausalSeries s{r, horizon, std::vector<std::uint8_t>(static_cast<std::size_t>(horizon) + 1, 0)};
  std::vector<int> taps = r.den().exponents();  // taps[0] == 0
  for (int k = 0; k <= horizon; ++k) {
    std::uint8_t c = r.num().coeff(k) ? 1 : 0;
    for (std::size_t j = 1; j < taps.size() && taps[j] <= k; ++j)
      c ^= s.bits[static_cast<std::size_t>(k - taps[j])];
    s.bits[static_cast<std::size_t>(k)] = c;
  }
  return s;
}

struct CausalSplit {
  int advance = 0;
  Gf2Rational causal;
};

/// r = D^-advance * causal where causal has a denominator with constant
/// term 1.  advance = max(0, ord(den) - ord(num)).
inline CausalSplit causal_split(const Gf2Rational& r) {
  if (r.is_zero()) return {0, {}};
  int advance = std::max(0, r.den().ord() - r.num().ord());
  return {advance, r.times_power_of_d(advance)};
}

}  // namespace netcode
