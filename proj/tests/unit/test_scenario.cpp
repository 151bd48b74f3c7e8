// SPDX-License-Identifier: Apache-2.0
//
// cogwpt: cognitive multi-antenna wireless power transfer beamforming
// Copyright (C) 2026 The cogwpt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "cogwpt/rng.hpp"
#include "cogwpt/scenario.hpp"

namespace cogwpt {
namespace {

Scenario table_one(std::uint64_t seed, int n = kReferenceSubcarriers, int m = kReferenceAntennas) {
  return generate_scenario(reference_geometry(), reference_budgets(), n, m, seed);
}

TEST(Rng, SplitmixReferenceValue) {
  // First output of the reference splitmix64 stream seeded with 0.
  EXPECT_EQ(CounterRng::splitmix64(0), 0xE220A8397B1DCDAFULL);
}

TEST(Rng, UniformInOpenInterval) {
  const CounterRng rng(3);
  double mean = 0.0;
  for (std::uint32_t k = 0; k < 10000; ++k) {
    const double u = rng.uniform(1, k);
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
    mean += u;
  }
  EXPECT_NEAR(mean / 10000, 0.5, 0.01);
}

TEST(Scenario, ReferenceParameters) {
  const auto s = table_one(0);
  EXPECT_EQ(s.n_subcarriers, 64);
  EXPECT_EQ(s.n_antennas, 4);
  EXPECT_EQ(s.sigma2, 1e-9);
  EXPECT_EQ(s.p_sum, 3.2);
  EXPECT_EQ(s.q_sum, 6.4);
  EXPECT_EQ(s.q_peak, 0.1);
  EXPECT_EQ(s.gamma, 1.28e-6);
  const auto g = reference_geometry();
  EXPECT_NEAR(g.path_loss(g.s_et, g.s_er), 1e-3 / 125.0, 1e-18);
}

TEST(Scenario, Deterministic) {
  EXPECT_EQ(table_one(5), table_one(5));
  EXPECT_FALSE(table_one(5) == table_one(6));
}

TEST(Scenario, AntennaPrefixAndGeometryRescale) {
  const auto s2 = table_one(1, 8, 2);
  const auto s4 = table_one(1, 8, 4);
  for (std::size_t i = 0; i < s2.size(); ++i) {
    EXPECT_EQ(s2.g[i], s4.g[i].head(2));
    EXPECT_EQ(s2.f[i], s4.f[i].head(2));
    EXPECT_EQ(s2.h[i], s4.h[i]);
  }
  auto geo = reference_geometry();
  geo.s_et.x = 3.0;
  const auto moved = generate_scenario(geo, reference_budgets(), 8, 2, 1);
  const double ratio = std::sqrt(geo.path_loss(geo.s_et, geo.s_er) /
                                 reference_geometry().path_loss(reference_geometry().s_et, geo.s_er));
  for (std::size_t i = 0; i < s2.size(); ++i) {
    EXPECT_NEAR(std::abs(moved.g[i](0)), ratio * std::abs(s2.g[i](0)), 1e-12 * std::abs(s2.g[i](0)));
  }
}

TEST(Scenario, FadingMatchesPathLoss) {
  const auto s = table_one(2, 4096, 1);
  const auto geo = reference_geometry();
  double g2 = 0.0, h = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    g2 += s.g[i].squaredNorm();
    h += s.h[i];
  }
  EXPECT_NEAR(g2 / 4096 / geo.path_loss(geo.s_et, geo.s_er), 1.0, 0.06);
  EXPECT_NEAR(h / 4096 / geo.path_loss(geo.p_it, geo.p_ir), 1.0, 0.06);
}

TEST(Scenario, JsonRoundTrip) {
  const auto s = table_one(3, 8, 3);
  EXPECT_EQ(scenario_from_json(scenario_to_json(s)), s);
  const auto text = scenario_to_json(s).dump();
  EXPECT_EQ(scenario_from_json(nlohmann::json::parse(text)), s);
}

TEST(Scenario, ParseErrorsNameTheField) {
  auto j = scenario_to_json(table_one(0, 2, 2));
  auto missing = j;
  missing.erase("phi");
  try {
    scenario_from_json(missing);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("'phi'"), std::string::npos) << e.what();
  }
  auto wrong = j;
  wrong["g"][1][0] = "x";
  try {
    scenario_from_json(wrong);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("g[1][0]"), std::string::npos) << e.what();
  }
  auto bad = j;
  bad["h"][0] = -1.0;
  EXPECT_THROW(scenario_from_json(bad), ValidationError);
}

TEST(Scenario, RejectsBadGeometry) {
  auto geo = reference_geometry();
  geo.s_er = geo.s_et;
  EXPECT_THROW(generate_scenario(geo, reference_budgets(), 4, 2, 0), ValidationError);
  EXPECT_THROW(generate_scenario(reference_geometry(), reference_budgets(), 0, 2, 0), ValidationError);
}

}  // namespace
}  // namespace cogwpt
