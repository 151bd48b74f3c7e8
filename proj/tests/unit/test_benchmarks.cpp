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
#include <vector>

#include "cogwpt/benchmarks.hpp"
#include "cogwpt/oracle.hpp"

namespace cogwpt {
namespace {

Scenario table_one(std::uint64_t seed, int n = kReferenceSubcarriers, int m = kReferenceAntennas) {
  return generate_scenario(reference_geometry(), reference_budgets(), n, m, seed);
}

TEST(Greedy, FillsByDescendingGain) {
  const std::vector<double> gains{3.0, 2.0, 1.0};
  EXPECT_EQ(greedy_allocation(gains, 1.0, 2.0), (std::vector<double>{1.0, 1.0, 0.0}));
  EXPECT_EQ(greedy_allocation(gains, 1.0, 1.5), (std::vector<double>{1.0, 0.5, 0.0}));
  const std::vector<double> with_zero{0.0, 2.0};
  EXPECT_EQ(greedy_allocation(with_zero, 1.0, 5.0), (std::vector<double>{0.0, 1.0}));
}

TEST(ZfDirection, OrthogonalAndParallelChannels) {
  CVector g(2), f(2);
  g << Complex(0.0, 2.0), 0.0;
  f << 0.0, 1.0;
  const auto u = zf_direction(g, f);
  EXPECT_NEAR(std::abs(u(0)), 1.0, 1e-15);
  EXPECT_EQ(std::abs(u(1)), 0.0);
  EXPECT_EQ(zf_direction(f * Complex(0.0, 3.0), f).squaredNorm(), 0.0);
}

TEST(Zf, NullsInterferenceAndUsesBudget) {
  const auto s = table_one(0);
  const auto z = zf_solve(s);
  double q = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_LE(z.interference[i], 1e-30);
    q += z.transmit_power[i];
  }
  EXPECT_NEAR(q, std::min(s.q_sum, s.q_peak * s.n_subcarriers), 1e-12);
  EXPECT_TRUE(z.residuals.within(s));
  EXPECT_THROW(zf_solve(table_one(0, 8, 1)), ValidationError);
}

TEST(Zf, IndependentOfThreshold) {
  auto s = table_one(4);
  const double base = zf_solve(s).breakdown.total;
  for (double gamma : {0.0, 1e-7, 1e-5, 1.0}) {
    s.gamma = gamma;
    EXPECT_EQ(zf_solve(s).breakdown.total, base);
  }
}

// One antenna: MRT covers every feasible design, so it must match a dense
// grid over (Q_1, Q_2).
TEST(Mrt, MatchesGridOnSingleAntenna) {
  auto b = reference_budgets();
  b.q_sum = 0.15;
  b.gamma = 2e-7;
  const auto s = generate_scenario(reference_geometry(), b, 2, 1, 17);
  const auto gains = mrt_gains(s);
  const int res = 1000;
  double best = 0.0;
  for (int i = 0; i < res; ++i) {
    for (int j = 0; j < res; ++j) {
      const std::vector<double> q{s.q_peak * i / (res - 1), s.q_peak * j / (res - 1)};
      if (q[0] + q[1] > s.q_sum) continue;
      if (gains.interference[0] * q[0] + gains.interference[1] * q[1] > s.gamma) continue;
      best = std::max(best, received_power(s, mrt_beamformers(s, q)).first.total);
    }
  }
  const double got = mrt_solve(s).breakdown.total;
  EXPECT_GE(got, best * (1 - 1e-9));
  EXPECT_LE(got, best * (1 + 1e-3));
}

TEST(Mrt, SubproblemCandidates) {
  const P3DualPoint d{0.0, 0.0, 0.0};
  const auto [q0, v0] = mrt_subproblem(1.0, 0.0, 1.0, 1.0, 0.1, 1.0, d, 0.5);
  EXPECT_DOUBLE_EQ(q0, 0.0);
  EXPECT_DOUBLE_EQ(v0, 0.4);
  const auto [q1, v1] = mrt_subproblem(1.0, 2.0, 1.0, 1.0, 0.1, 1.0, d, 0.5);
  EXPECT_DOUBLE_EQ(q1, 1.0);
  EXPECT_DOUBLE_EQ(v1, 2.0);
  // theta above phi makes the primary term a cost, so the kink wins.
  const auto [qk, vk] = mrt_subproblem(1.0, 0.5, 1.0, 1.0, 0.1, 1.0, P3DualPoint{0.0, 1.0, 2.0}, 0.5);
  EXPECT_NEAR(qk, 0.4, 1e-15);
  EXPECT_NEAR(vk, -0.2, 1e-15);
}

TEST(Conventional, LooseThresholdSendsFullPeakPower) {
  auto s = table_one(2, 8, 3);
  s.gamma = 1e3;
  s.q_sum = s.q_peak * s.n_subcarriers;
  const auto c = conventional_solve(s);
  double expect = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) expect += s.q_peak * s.g[i].squaredNorm();
  EXPECT_NEAR(c.breakdown.direct, expect, 1e-6 * expect);
}

TEST(Conventional, RespectsBudgets) {
  const auto s = table_one(3);
  const auto c = conventional_solve(s);
  EXPECT_TRUE(c.residuals.within(s));
}

TEST(Oracle, P2AtLowestLevelIsFeasible) {
  auto b = reference_budgets();
  const auto s = generate_scenario(reference_geometry(), b, 2, 2, 5);
  EXPECT_TRUE(brute_force_p2(s, lambda_min(s), 50));
  EXPECT_FALSE(brute_force_p2(s, 100.0 * lambda_min(s) + 10.0, 50));
  const double l = 1.1 * lambda_min(s);
  EXPECT_GT(brute_force_p2_slack(s, l, 50), brute_force_p2_slack(s, l, 500));
  EXPECT_EQ(brute_force_p2_slack(s, 0.0, 50), 0.0);
}

TEST(Oracle, P1ReturnsFeasibleDesign) {
  auto b = reference_budgets();
  b.q_sum = 0.12;
  b.gamma = 1e-6;
  const auto s = generate_scenario(reference_geometry(), b, 2, 2, 9);
  const auto r = brute_force_p1(s, 20);
  EXPECT_GT(r.evaluated, 0);
  const auto [bd, resp] = received_power(s, r.omegas);
  EXPECT_DOUBLE_EQ(bd.total, r.total);
  EXPECT_TRUE(residuals_of(s, r.omegas, resp).within(s));
  EXPECT_THROW(brute_force_p1(table_one(0, 3, 2), 10), ValidationError);
}

}  // namespace
}  // namespace cogwpt
