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

#include <random>
#include <vector>

#include "cogwpt/scenario.hpp"
#include "cogwpt/waterfill.hpp"

namespace cogwpt {
namespace {

TEST(Waterfill, SingleSubcarrierTakesEverything) {
  const std::vector<double> interference{0.0}, h{2.0};
  const auto r = waterfill(interference, h, 0.5, 3.0);
  EXPECT_DOUBLE_EQ(r.lambda, 3.25);
  EXPECT_DOUBLE_EQ(r.p[0], 3.0);
}

TEST(Waterfill, TwoSubcarrierClosedForm) {
  const std::vector<double> interference{0.0, 0.0}, h{1.0, 0.5};
  const auto r = waterfill(interference, h, 0.1, 1.0);
  EXPECT_NEAR(r.lambda, 0.65, 1e-15);
  EXPECT_NEAR(r.p[0], 0.55, 1e-15);
  EXPECT_NEAR(r.p[1], 0.45, 1e-15);
}

TEST(Waterfill, DeepFadeStaysDry) {
  // Floors 0.1 and 10; the budget of 1 never reaches the second.
  const std::vector<double> interference{0.0, 0.0}, h{1.0, 0.01};
  const auto r = waterfill(interference, h, 0.1, 1.0);
  EXPECT_NEAR(r.lambda, 1.1, 1e-15);
  EXPECT_EQ(r.p[1], 0.0);
}

TEST(Waterfill, InterferenceRaisesLevel) {
  const std::vector<double> h{1.0, 0.5};
  const std::vector<double> quiet{0.0, 0.0}, loud{0.2, 0.0};
  const double a = waterfill(quiet, h, 0.1, 1.0).lambda;
  const double b = waterfill(loud, h, 0.1, 1.0).lambda;
  EXPECT_NEAR(b - a, 0.1, 1e-14);
}

TEST(Waterfill, RandomProfilesAreSelfConsistent) {
  std::mt19937_64 gen(7);
  std::exponential_distribution<double> expo(1.0);
  std::uniform_real_distribution<double> scale(-12.0, -6.0);
  const std::size_t n = 64;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> h(n), interference(n);
    const double sigma2 = 1e-9;
    for (std::size_t i = 0; i < n; ++i) {
      h[i] = 1e-3 * expo(gen);
      interference[i] = trial % 3 == 0 ? 0.0 : std::pow(10.0, scale(gen)) * expo(gen);
    }
    const double p_sum = 3.2;
    const auto r = waterfill(interference, h, sigma2, p_sum);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_EQ(r.p[i], positive_part(r.lambda - (interference[i] + sigma2) / h[i]));
      sum += r.p[i];
    }
    EXPECT_NEAR(sum, p_sum, 1e-9 * p_sum);
  }
}

TEST(Waterfill, RejectsBadInput) {
  const std::vector<double> h{1.0}, neg{-1.0}, two{0.0, 0.0};
  EXPECT_THROW(waterfill(neg, h, 0.1, 1.0), ValidationError);
  EXPECT_THROW(waterfill(two, h, 0.1, 1.0), ValidationError);
  EXPECT_THROW(waterfill(std::vector<double>{0.0}, h, 0.1, 0.0), ValidationError);
}

Scenario tiny_scenario() {
  Scenario s;
  s.n_subcarriers = 2;
  s.n_antennas = 1;
  s.h = {1.0, 0.5};
  s.phi = {2.0, 4.0};
  s.g = {CVector::Constant(1, Complex(1.0, 0.0)), CVector::Constant(1, Complex(0.0, 2.0))};
  s.f = {CVector::Constant(1, Complex(1.0, 0.0)), CVector::Constant(1, Complex(1.0, 0.0))};
  s.sigma2 = 0.1;
  s.p_sum = 1.0;
  s.q_sum = 1.0;
  s.q_peak = 1.0;
  s.gamma = 1.0;
  s.validate();
  return s;
}

TEST(ReceivedPower, ReactiveOnlyWithSilentTransmitter) {
  const auto s = tiny_scenario();
  const auto [b, r] = received_power(s, zero_beamformers(s));
  EXPECT_NEAR(b.direct, 0.0, 0.0);
  EXPECT_NEAR(b.reactive, 0.55 * 2.0 + 0.45 * 4.0, 1e-14);
  EXPECT_DOUBLE_EQ(b.total, b.direct + b.reactive);
}

TEST(ReceivedPower, PrimaryRateAtZeroInterference) {
  const auto s = tiny_scenario();
  // SNR_i = h_i P_i / sigma2 = 5.5 and 2.25.
  EXPECT_NEAR(primary_sum_rate(s, zero_beamformers(s)), std::log2(6.5) + std::log2(3.25), 1e-13);
}

TEST(ReceivedPower, DirectTermAndReaction) {
  const auto s = tiny_scenario();
  Beamformers w = zero_beamformers(s);
  w[0](0) = Complex(0.0, std::sqrt(0.2));
  const auto [b, r] = received_power(s, w);
  EXPECT_NEAR(b.direct, 0.2, 1e-15);
  EXPECT_NEAR(r.lambda, 0.75, 1e-15);  // floors 0.3 and 0.2
  EXPECT_NEAR(b.reactive, 0.45 * 2.0 + 0.55 * 4.0, 1e-14);
}

}  // namespace
}  // namespace cogwpt
