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

#include "netcode/report.hpp"
#include "support/fixtures.hpp"

using namespace netcode;

namespace {

Report report_for(int k, bool shortcut = true) {
  EncoderOptions o;
  o.shortcut = shortcut;
  auto c = fixture::compile_example(k, o);
  return make_report(c.net, c.code, shortcut);
}

}  // namespace

TEST(Report, GoldenText) {
  EXPECT_EQ(render_text(report_for(1)), fixture::read_file(fixture::path("tests/golden/ex1.txt")));
}

TEST(Report, Deterministic) {
  for (int k = 1; k <= 5; ++k) {
    EXPECT_EQ(render_text(report_for(k)), render_text(report_for(k)));
    EXPECT_EQ(render_json(report_for(k)), render_json(report_for(k)));
  }
}

TEST(Report, JsonRoundTrip) {
  for (int k = 1; k <= 5; ++k)
    for (bool shortcut : {true, false}) {
      const auto r = report_for(k, shortcut);
      const auto json = render_json(r);
      const auto back = report_from_json(json);
      EXPECT_EQ(render_json(back), json) << "example " << k;
      EXPECT_EQ(render_text(back), render_text(r)) << "example " << k;
    }
}

TEST(Report, MalformedJsonIsAnInputError) {
  EXPECT_THROW(report_from_json(std::string("{")), InputError);
  EXPECT_THROW(report_from_json(std::string("{\"network\": 3}")), InputError);
}

TEST(Report, KnotBlock) {
  const auto text = render_text(report_for(4));
  EXPECT_NE(text.find("knot {e13,e14,e15,e16,e17} entered via e2 e5 e8 e11\n"), std::string::npos);
  EXPECT_NE(text.find("tau(e2,e13) = D^3/(1+D^3)\n"), std::string::npos);
  EXPECT_NE(text.find("Delta(e2) = 1+D^3 = 1+D^3\n"), std::string::npos);
  EXPECT_NE(text.find("precode: 1+D^3\n"), std::string::npos);
  EXPECT_NE(text.find("v_e18(x) = v_e16(x)  [shortcut]\n"), std::string::npos);
}

TEST(Report, DecoderWithRationalTerm) {
  const auto text = render_text(report_for(4));
  EXPECT_NE(text.find("b(x) = r_t2_1(x+2) + r_t2_2(x+4) + [D/(1+D^3)]r_t2_4(x)\n"), std::string::npos);
  EXPECT_NE(text.find("M_t2 = [[D, D^3, D^6/(1+D^3), 0], [0, D^4, 0, 0], [0, 0, D^4, 0], [0, D^6/(1+D^3), D^3, D]]"),
            std::string::npos);
}

TEST(Report, ShortcutOffRendersDelayedReads) {
  const auto text = render_text(report_for(3, false));
  EXPECT_NE(text.find("shortcut: off\n"), std::string::npos);
  EXPECT_NE(text.find("v_e13(x) = a(x-4) + b(x-3) + c(x-5)\n"), std::string::npos);
}
