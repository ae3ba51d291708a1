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

#include <gtest/gtest.h>

#include <random>

#include "netcode/gf2.hpp"
#include "support/oracles.hpp"

using netcode::Gf2Poly;
using netcode::Gf2Rational;
using P = Gf2Poly;

namespace {

P poly(const char* s) { return P::parse(s); }
Gf2Rational rat(const char* s) { return Gf2Rational::parse(s); }

}  // namespace

TEST(Gf2Poly, AddCancelsInCharacteristicTwo) {
  EXPECT_TRUE((poly("1+D") + poly("1+D")).is_zero());
  EXPECT_EQ(poly("1+D^3") + poly("D"), poly("1+D+D^3"));
}

TEST(Gf2Poly, AddIdentityOnRandomPolys) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 100; ++i) {
    P p = oracle::random_poly(rng, 64);
    EXPECT_EQ(P() + p, p);
  }
}

TEST(Gf2Poly, Multiply) {
  EXPECT_EQ(poly("1+D") * poly("1+D"), poly("1+D^2"));
  EXPECT_EQ(poly("D^2") * poly("1+D^3"), poly("D^2+D^5"));
  EXPECT_EQ(poly("1+D+D^2") * poly("1+D"), poly("1+D^3"));
}

TEST(Gf2Poly, MultiplyMatchesSchoolbookOracle) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 300; ++i) {
    P a = oracle::random_poly(rng, 150), b = oracle::random_poly(rng, 150);
    EXPECT_EQ(oracle::to_bits(a * b), oracle::schoolbook_mul(oracle::to_bits(a), oracle::to_bits(b)));
  }
}

TEST(Gf2Poly, DivMod) {
  auto qr = netcode::divmod(poly("D^4"), poly("1+D^3"));
  EXPECT_EQ(qr.quotient, poly("D"));
  EXPECT_EQ(qr.remainder, poly("D"));
  qr = netcode::divmod(poly("1"), poly("1+D^3"));
  EXPECT_TRUE(qr.quotient.is_zero());
  EXPECT_EQ(qr.remainder, poly("1"));
  EXPECT_THROW(netcode::divmod(poly("D"), P()), netcode::DivisionByZero);
}

TEST(Gf2Poly, DivModMatchesLongDivisionOracle) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 300; ++i) {
    P a = oracle::random_poly(rng, 100), b = oracle::random_poly(rng, 40);
    if (b.is_zero()) continue;
    auto [q, r] = netcode::divmod(a, b);
    auto [oq, orr] = oracle::long_division(oracle::to_bits(a), oracle::to_bits(b));
    EXPECT_EQ(oracle::to_bits(q), oq);
    EXPECT_EQ(oracle::to_bits(r), orr);
    EXPECT_EQ(q * b + r, a);
    EXPECT_LT(r.degree(), b.degree());
  }
}

TEST(Gf2Poly, DivideBySelf) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 50; ++i) {
    P p = oracle::random_poly(rng, 30);
    if (p.is_zero()) continue;
    auto qr = netcode::divmod(p, p);
    EXPECT_TRUE(qr.quotient.is_one());
    EXPECT_TRUE(qr.remainder.is_zero());
  }
}

TEST(Gf2Poly, Gcd) {
  EXPECT_EQ(netcode::gcd(poly("1+D^3"), poly("D^2")), poly("1"));
  EXPECT_EQ(netcode::gcd(P(), poly("1+D")), poly("1+D"));
  EXPECT_THROW(netcode::gcd(P(), P()), std::exception);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    P p = oracle::random_poly(rng, 12), q = oracle::random_poly(rng, 12), w = oracle::random_poly(rng, 8);
    if (w.is_zero() || (p.is_zero() && q.is_zero())) continue;
    P g = netcode::gcd(p * w, q * w);
    EXPECT_TRUE(netcode::divmod(g, w).remainder.is_zero());
  }
}

TEST(Gf2Poly, ParseAndRender) {
  EXPECT_EQ(poly("D^5+1+D^2").to_string(), "1+D^2+D^5");
  EXPECT_EQ(poly("D").to_string(), "D");
  EXPECT_EQ(P().to_string(), "0");
  EXPECT_THROW(poly("1+X"), netcode::InputError);
}

TEST(Gf2Poly, DegreeCapRaisesResourceError) {
  auto& cap = netcode::degree_cap();
  const int saved = cap.load();
  cap = 64;
  EXPECT_THROW(P::monomial(40) * P::monomial(40), netcode::ResourceError);
  cap = saved;
}

TEST(Gf2Rational, Reduce) {
  EXPECT_EQ(netcode::rat_reduce(poly("D+D^4"), poly("1+D^3")), Gf2Rational(poly("D")));
  auto z = netcode::rat_reduce(P(), poly("1+D+D^7"));
  EXPECT_TRUE(z.is_zero());
  EXPECT_TRUE(z.den().is_one());
  EXPECT_THROW(netcode::rat_reduce(poly("1"), P()), netcode::DivisionByZero);
}

TEST(Gf2Rational, ReduceFiveThreeCycleTransfer) {
  // Two forward paths: D^3 with cofactor 1+3D^3+D^6 and D^9 with cofactor 1,
  // over the determinant 1+4D^3+3D^6, all reduced mod 2.
  P num = poly("D^3") * poly("1+D^3+D^6") + poly("D^9");
  EXPECT_EQ(netcode::rat_reduce(num, poly("1+D^6")), rat("D^3/(1+D^3)"));
}

TEST(Gf2Rational, ReduceIsIdempotent) {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 200; ++i) {
    auto r = oracle::random_rational(rng, 12);
    EXPECT_EQ(netcode::rat_reduce(r.num(), r.den()), r);
  }
}

TEST(Gf2Rational, Arithmetic) {
  EXPECT_TRUE((rat("D^2/(1+D^3)") + rat("D^2/(1+D^3)")).is_zero());
  EXPECT_EQ(Gf2Rational(poly("D")) * rat("D^2/(1+D^3)"), rat("D^3/(1+D^3)"));
  EXPECT_THROW(rat("D") / Gf2Rational(), netcode::DivisionByZero);
  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    auto a = oracle::random_rational(rng, 10);
    if (a.is_zero()) continue;
    EXPECT_TRUE((a * a.inverse()).is_one());
  }
}

TEST(Gf2Rational, FieldAxioms) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 1000; ++i) {
    auto a = oracle::random_rational(rng, 16), b = oracle::random_rational(rng, 16),
         c = oracle::random_rational(rng, 16);
    EXPECT_EQ((a + b) + c, a + (b + c));
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ(a + b, b + a);
    EXPECT_EQ(a * b, b * a);
    if (!b.is_zero()) {
      EXPECT_EQ((a / b) * b, a);
    }
  }
}

TEST(Gf2Rational, ParseAndRender) {
  EXPECT_EQ(rat("D^3/(1+D^3)").to_string(), "D^3/(1+D^3)");
  EXPECT_EQ(rat("(1+D^2)/(1+D+D^3)").to_string(), "(1+D^2)/(1+D+D^3)");
  EXPECT_EQ(rat("(D+D^2)/(1+D^3)").to_string(), "D/(1+D+D^2)");
  EXPECT_EQ(rat("D^2").to_string(), "D^2");
  EXPECT_EQ(rat("1/(D^4)").to_string(), "1/(D^4)");
}

TEST(Series, ExpandMatchesLongDivision) {
  auto s = netcode::series_expand(rat("D/(1+D^3)"), 9);
  EXPECT_EQ(s.bits, (std::vector<std::uint8_t>{0, 1, 0, 0, 1, 0, 0, 1, 0, 0}));
  std::mt19937_64 rng(9);
  for (int i = 0; i < 200; ++i) {
    auto r = oracle::random_causal(rng, 12);
    EXPECT_EQ(netcode::series_expand(r, 80).bits, oracle::power_series(r, 80));
  }
}

TEST(Series, PolynomialIsItsOwnSequence) {
  auto s = netcode::series_expand(rat("1+D^2+D^5"), 7);
  EXPECT_EQ(s.bits, (std::vector<std::uint8_t>{1, 0, 1, 0, 0, 1, 0, 0}));
}

TEST(Series, Linearity) {
  auto a = netcode::series_expand(rat("D^2/(1+D^3)"), 40).bits;
  auto b = netcode::series_expand(rat("1/(1+D^3)"), 40).bits;
  for (int k = 0; k <= 40; ++k) EXPECT_EQ(a[k], k >= 2 ? b[k - 2] : 0) << k;
}

TEST(Series, PrefixStable) {
  std::mt19937_64 rng(10);
  for (int i = 0; i < 50; ++i) {
    auto r = oracle::random_causal(rng, 10);
    auto short_bits = netcode::series_expand(r, 30).bits;
    auto long_bits = netcode::series_expand(r, 90).bits;
    EXPECT_TRUE(std::equal(short_bits.begin(), short_bits.end(), long_bits.begin()));
  }
}

TEST(Series, ProductIsConvolution) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    P a = oracle::random_poly(rng, 40), b = oracle::random_poly(rng, 40);
    auto sa = netcode::series_expand(Gf2Rational(a), 128).bits;
    auto sb = netcode::series_expand(Gf2Rational(b), 128).bits;
    auto sab = netcode::series_expand(Gf2Rational(a * b), 128).bits;
    for (int k = 0; k <= 128; ++k) {
      std::uint8_t acc = 0;
      for (int j = 0; j <= k; ++j) acc ^= sa[j] & sb[k - j];
      ASSERT_EQ(sab[k], acc);
    }
  }
}

TEST(Series, RejectsNonCausal) { EXPECT_THROW(netcode::series_expand(rat("1/(D)"), 5), netcode::InputError); }

TEST(CausalSplit, Examples) {
  auto s = netcode::causal_split(rat("1/(D^4)"));
  EXPECT_EQ(s.advance, 4);
  EXPECT_TRUE(s.causal.is_one());
  s = netcode::causal_split(rat("D^3"));
  EXPECT_EQ(s.advance, 0);
  EXPECT_EQ(s.causal, rat("D^3"));
  s = netcode::causal_split(netcode::rat_reduce(poly("D"), poly("D^4") * poly("1+D^3")));
  EXPECT_EQ(s.advance, 3);
  EXPECT_EQ(s.causal, rat("1/(1+D^3)"));
  s = netcode::causal_split(Gf2Rational());
  EXPECT_EQ(s.advance, 0);
  EXPECT_TRUE(s.causal.is_zero());
}

TEST(CausalSplit, RoundTrip) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 300; ++i) {
    auto r = oracle::random_rational(rng, 10);
    auto s = netcode::causal_split(r);
    EXPECT_EQ(r.times_power_of_d(s.advance), s.causal);
    if (!r.is_zero()) {
      EXPECT_TRUE(s.causal.is_causal());
    }
  }
}

TEST(SplitProper, PolynomialPlusProperFraction) {
  auto r = rat("D^2") + rat("D^5/(1+D^6)");
  auto split = netcode::split_proper(r);
  EXPECT_EQ(split.poly, poly("D^2"));
  EXPECT_EQ(split.rest, rat("D^5/(1+D^6)"));
}
