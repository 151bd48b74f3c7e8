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

#include <algorithm>
#include <random>
#include <vector>

#include "cogwpt/lambda_range.hpp"

namespace cogwpt {
namespace {

Scenario two_sc(double gamma = 1.0, double q_sum = 1.0) {
  Scenario s;
  s.n_subcarriers = 2;
  s.n_antennas = 1;
  s.h = {1.0, 0.5};
  s.phi = {1.0, 1.0};
  s.g = {CVector::Constant(1, Complex(1.0, 0.0)), CVector::Constant(1, Complex(1.0, 0.0))};
  s.f = {CVector::Constant(1, Complex(1.0, 0.0)), CVector::Constant(1, Complex(0.0, 1.0))};
  s.sigma2 = 0.1;
  s.p_sum = 1.0;
  s.q_sum = q_sum;
  s.q_peak = 0.5;
  s.gamma = gamma;
  s.validate();
  return s;
}

Scenario table_one(std::uint64_t seed) {
  return generate_scenario(reference_geometry(), reference_budgets(), kReferenceSubcarriers,
                           kReferenceAntennas, seed);
}

// Per-SC term of the partial Lagrangian, evaluated directly.
double lagrangian_term(double a, double h, double sigma2, const P2DualPoint& d, double lambda, double q) {
  return -d.eta * a * q - d.mu * q - d.theta * std::max(0.0, lambda - (a * q + sigma2) / h);
}

TEST(LambdaMin, ClosedForms) {
  EXPECT_NEAR(lambda_min(two_sc()), 0.65, 1e-15);
  auto s = two_sc();
  s.n_subcarriers = 1;
  s.h.resize(1);
  s.phi.resize(1);
  s.g.resize(1);
  s.f.resize(1);
  EXPECT_NEAR(lambda_min(s), 1.0 + 0.1, 1e-15);
}

TEST(LambdaMin, AboveActiveFloors) {
  const auto s = table_one(0);
  const double lmin = lambda_min(s);
  double lowest_floor = 1e300;
  for (std::size_t i = 0; i < s.size(); ++i) lowest_floor = std::min(lowest_floor, s.sigma2 / s.h[i]);
  EXPECT_GT(lmin, lowest_floor);
}

TEST(P2Subproblem, ZeroDualsBelowThreshold) {
  const auto r = p2_subproblem(1.0, 1.0, 0.5, 1.0, P2DualPoint{}, 0.25);
  EXPECT_EQ(r.q, 0.0);
  EXPECT_EQ(r.value, 0.0);
}

TEST(P2Subproblem, SaturatesWhenSlopeIsPositive) {
  // t = (h lambda - sigma2) / a = 3 > q_peak = 1; slope -0.1 - 0.1 + 1 > 0.
  const P2DualPoint d{0.1, 0.1, 1.0};
  const auto r = p2_subproblem(1.0, 1.0, 1.0, 1.0, d, 4.0);
  EXPECT_EQ(r.q, 1.0);
  EXPECT_NEAR(r.value, lagrangian_term(1.0, 1.0, 1.0, d, 4.0, 1.0), 1e-15);
}

TEST(P2Subproblem, TieInMiddleCasePicksThreshold) {
  // t = 0.5; coef = -1 - 0 + 0 < 0; psi1 = psi2 = 0 when theta = 0, eta*a*t = 0.5 -> not a tie.
  // Build a tie: theta (lambda - sigma2/h) = (eta a + mu) t with coef <= 0.
  const double a = 2.0, h = 1.0, sigma2 = 0.0, lambda = 1.0;  // t = 0.5
  const P2DualPoint d{1.0, 0.0, 1.0};                         // coef = -2 + 2 = 0
  const auto r = p2_subproblem(a, h, sigma2, 1.0, d, lambda);
  EXPECT_EQ(r.q, 0.5);
  EXPECT_NEAR(r.value, -1.0, 1e-15);
}

TEST(P2Subproblem, MatchesDenseGrid) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int grid = 20000;
  for (int trial = 0; trial < 200; ++trial) {
    const double a = 0.1 + 2.0 * u(gen), h = 0.1 + u(gen), sigma2 = 0.05 * u(gen), q_peak = 0.2 + u(gen);
    const P2DualPoint d{2.0 * u(gen), 2.0 * u(gen), 6.0 * u(gen) - 3.0};
    const double lambda = sigma2 / h + (a * q_peak / h) * (1.6 * u(gen) - 0.3);
    double best = -1e300;
    for (int k = 0; k <= grid; ++k) {
      best = std::max(best, lagrangian_term(a, h, sigma2, d, lambda, q_peak * k / grid));
    }
    const double kink = (h * lambda - sigma2) / a;
    if (kink > 0.0 && kink < q_peak) best = std::max(best, lagrangian_term(a, h, sigma2, d, lambda, kink));
    const auto r = p2_subproblem(a, h, sigma2, q_peak, d, lambda);
    EXPECT_NEAR(r.value, best, 1e-12 * std::max(1.0, std::abs(best))) << "trial " << trial;
    EXPECT_NEAR(lagrangian_term(a, h, sigma2, d, lambda, r.q), r.value, 1e-12 * std::max(1.0, std::abs(best)));
  }
}

TEST(P2Feasible, NearLowerBoundIsFeasible) {
  const auto s = two_sc();
  const auto v = p2_feasible(s, lambda_min(s) + 1e-6);
  EXPECT_TRUE(v.feasible);
  EXPECT_LE(v.dual_value, 0.0);
  EXPECT_GE(v.lower_bound, -v.tolerance);
}

TEST(P2Feasible, BeyondCapacityIsInfeasible) {
  const auto s = two_sc();
  const auto v = p2_feasible(s, 10.0);
  EXPECT_FALSE(v.feasible);
  EXPECT_LT(v.dual_value, -v.tolerance);
  EXPECT_GE(v.certificate.eta, 0.0);
  EXPECT_GE(v.certificate.mu, 0.0);
}

TEST(P2Feasible, RejectsLevelBelowMinimum) {
  const auto s = two_sc();
  EXPECT_THROW(p2_feasible(s, 0.5), ValidationError);
}

TEST(LambdaMax, CollapsesWithoutBudget) {
  EXPECT_EQ(lambda_max(two_sc(0.0)), lambda_min(two_sc(0.0)));
  EXPECT_EQ(lambda_max(two_sc(1.0, 0.0)), lambda_min(two_sc(1.0, 0.0)));
}

TEST(LambdaMax, TwoSubcarrierAnalytic) {
  // a = [1, 1], h = [1, 0.5], sigma2 = 0.1, q_peak = 0.5, budgets loose.
  // Full alignment at q_peak gives floors 0.6 and 1.2, level (1 + 1.8) / 2 = 1.4,
  // which is feasible, so lambda_max sits at the bracket end.
  const auto s = two_sc(10.0, 10.0);
  EXPECT_NEAR(lambda_max(s), 1.4, 1e-12);
  // With gamma = 0.2 the interference budget binds: floors (I_1 + 0.1) and 2 (I_2 + 0.1)
  // with I_1 + I_2 = 0.2 and both active; the level is maximized by loading SC 2:
  // lambda = (1 + 0.1 + 2 * 0.3) / 2 = 0.85.
  // The dual test accepts levels within its relative tolerance of the boundary.
  EXPECT_NEAR(lambda_max(two_sc(0.2, 10.0), 1e-10), 0.85, 2e-5);
}

TEST(LambdaMax, TableOneSingleTransition) {
  const auto s = table_one(0);
  const auto range = lambda_range(s);
  EXPECT_GT(range.lambda_max, range.lambda_min);
  const double hi = 2.0 * range.lambda_max - range.lambda_min;
  int flips = 0;
  bool prev = true;
  for (int k = 1; k <= 100; ++k) {
    const double lambda = range.lambda_min + (hi - range.lambda_min) * k / 100.0;
    const bool now = p2_feasible(s, lambda).feasible;
    if (now != prev) ++flips;
    prev = now;
  }
  EXPECT_EQ(flips, 1);
}

}  // namespace
}  // namespace cogwpt
