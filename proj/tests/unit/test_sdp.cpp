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

#include <chrono>
#include <random>

#include "cogwpt/sdp.hpp"

namespace cogwpt {
namespace {

CMatrix diag2(double a, double b) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

CVector random_vector(std::mt19937_64& gen, Eigen::Index n) {
  std::normal_distribution<double> nd(0.0, 1.0);
  CVector v(n);
  for (Eigen::Index k = 0; k < n; ++k) v(k) = Complex(nd(gen), nd(gen));
  return v;
}

TEST(Sdp, DiagonalObjective) {
  SdpInstance inst{diag2(1.0, -1.0), {{CMatrix::Identity(2, 2), Sense::le, 1.0}}, 0.0};
  const auto r = solve_sdp(inst);
  ASSERT_EQ(r.status, SdpStatus::optimal);
  EXPECT_NEAR(r.value, 1.0, 1e-9);
  EXPECT_NEAR(std::abs(r.w(0, 0)), 1.0, 1e-8);
  EXPECT_NEAR(std::abs(r.w(1, 1)), 0.0, 1e-8);
  EXPECT_LE(r.rel_gap, 1e-8);
}

TEST(Sdp, NegativeObjectiveStaysAtZero) {
  SdpInstance inst{diag2(-1.0, -3.0), {{CMatrix::Identity(2, 2), Sense::le, 0.1}}, 0.5};
  const auto r = solve_sdp(inst);
  ASSERT_EQ(r.status, SdpStatus::optimal);
  EXPECT_NEAR(r.value, 0.5, 1e-9);
  EXPECT_LE(r.w.norm(), 1e-9);
}

TEST(Sdp, DetectsInfeasibility) {
  // tr(W) <= 1 together with W_00 >= 2.
  SdpInstance inst{diag2(1.0, 0.0),
                   {{CMatrix::Identity(2, 2), Sense::le, 1.0}, {diag2(1.0, 0.0), Sense::ge, 2.0}}, 0.0};
  EXPECT_EQ(solve_sdp(inst).status, SdpStatus::infeasible);
}

TEST(Sdp, DetectsUnboundedness) {
  // Only W_11 is capped; W_00 grows without limit.
  SdpInstance inst{diag2(1.0, 0.0), {{diag2(0.0, 1.0), Sense::le, 1.0}}, 0.0};
  EXPECT_EQ(solve_sdp(inst).status, SdpStatus::unbounded);
}

TEST(Sdp, RejectsNonHermitian) {
  CMatrix c = CMatrix::Zero(2, 2);
  c(0, 1) = 1.0;
  EXPECT_THROW(solve_sdp(SdpInstance{c, {}, 0.0}), ValidationError);
}

// Rank-one maximization by brute force over w = (r cos a, r sin a e^{j p}).
double rank_one_grid(const SdpInstance& inst, double radius_max, int res) {
  double best = -1e300;
  for (int i = 0; i <= res; ++i) {
    const double rad = radius_max * i / res;
    for (int j = 0; j <= res; ++j) {
      const double ang = 0.5 * M_PI * j / res;
      for (int k = 0; k < res; ++k) {
        const double ph = 2.0 * M_PI * k / res;
        CVector w(2);
        w << rad * std::cos(ang), rad * std::sin(ang) * std::polar(1.0, ph);
        const CMatrix ww = w * w.adjoint();
        bool ok = true;
        for (const auto& con : inst.constraints) {
          const double v = hdot(con.a, ww);
          if (con.sense == Sense::le ? v > con.bound : v < con.bound) ok = false;
        }
        if (ok) best = std::max(best, hdot(inst.c, ww) + inst.offset);
      }
    }
  }
  return best;
}

TEST(Sdp, MatchesRankOneGridOnBeamformingShape) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 6; ++trial) {
    const CVector g = random_vector(gen, 2), f = random_vector(gen, 2);
    const double eta = u(gen), mu = 0.5 * u(gen), q = 1.0;
    const double t = (trial % 2 == 0 ? 0.3 : 1.5) * u(gen) * f.squaredNorm() * q;
    const CMatrix c = g * g.adjoint() - eta * f * f.adjoint() - mu * CMatrix::Identity(2, 2);
    SdpInstance inst{c,
                     {{f * f.adjoint(), trial % 2 == 0 ? Sense::ge : Sense::le, t},
                      {CMatrix::Identity(2, 2), Sense::le, q}},
                     0.0};
    const auto r = solve_sdp(inst);
    ASSERT_EQ(r.status, SdpStatus::optimal) << trial;
    const double grid = rank_one_grid(inst, std::sqrt(q), 100);
    EXPECT_LE(grid, r.value + 1e-8) << trial;
    EXPECT_NEAR(r.value, grid, 2e-2 * std::max(1.0, std::abs(r.value))) << trial;
    const auto one = extract_rank_one(r.w, inst);
    const CMatrix ww = one.omega * one.omega.adjoint();
    EXPECT_NEAR(hdot(inst.c, ww), r.value, 1e-6 * std::max(1.0, std::abs(r.value))) << trial;
    EXPECT_LE(one.ratio, 1e-6);
  }
}

TEST(Sdp, SolutionIsPsdAndFeasible) {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 20; ++trial) {
    const CVector g = random_vector(gen, 4), f = random_vector(gen, 4);
    const CMatrix c = g * g.adjoint() - 0.3 * f * f.adjoint() - 0.1 * CMatrix::Identity(4, 4);
    SdpInstance inst{c, {{f * f.adjoint(), Sense::ge, 0.5}, {CMatrix::Identity(4, 4), Sense::le, 1.0}}, 0.0};
    const auto r = solve_sdp(inst);
    // tr(F W) >= 0.5 is reachable under tr(W) <= 1 iff ||f||^2 >= 0.5.
    if (f.squaredNorm() < 0.5) {
      EXPECT_EQ(r.status, SdpStatus::infeasible);
      continue;
    }
    ASSERT_EQ(r.status, SdpStatus::optimal);
    const double lo = Eigen::SelfAdjointEigenSolver<CMatrix>(r.w).eigenvalues()(0);
    EXPECT_GE(lo, -1e-9 * r.w.norm());
    EXPECT_GE(hdot(f * f.adjoint(), r.w), 0.5 * (1.0 - 1e-8));
    EXPECT_LE(r.w.trace().real(), 1.0 + 1e-8);
    EXPECT_LE(r.rel_gap, 1e-8);
  }
}

TEST(RankOne, AlreadyRankOne) {
  CVector w(2);
  w << Complex(0.0, 2.0), Complex(1.0, 0.0);
  SdpInstance inst{CMatrix::Identity(2, 2), {{CMatrix::Identity(2, 2), Sense::le, 10.0}}, 0.0};
  const auto r = extract_rank_one(w * w.adjoint(), inst);
  EXPECT_EQ(r.reductions, 0);
  // Gauge: largest entry real positive.
  EXPECT_NEAR(r.omega(0).real(), 2.0, 1e-12);
  EXPECT_NEAR(r.omega(0).imag(), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(r.omega(1)), 1.0, 1e-12);
}

TEST(RankOne, TwoAtomPurification) {
  // Atoms with equal objective, interference and power; their average has rank two.
  CVector w1(3), w2(3);
  w1 << 1.0, 0.0, 0.0;
  w2 << 0.0, 1.0, 0.0;
  CMatrix c = CMatrix::Zero(3, 3), f = CMatrix::Zero(3, 3);
  c(0, 0) = 2.0;
  c(1, 1) = 2.0;
  c(2, 2) = -1.0;
  f(0, 0) = 1.0;
  f(1, 1) = 1.0;
  f(0, 1) = Complex(0.0, 0.3);
  f(1, 0) = Complex(0.0, -0.3);
  SdpInstance inst{c, {{f, Sense::ge, 1.0}, {CMatrix::Identity(3, 3), Sense::le, 1.0}}, 0.0};
  const CMatrix w = 0.5 * (w1 * w1.adjoint() + w2 * w2.adjoint());
  const auto r = extract_rank_one(w, inst);
  EXPECT_EQ(r.reductions, 1);
  EXPECT_NEAR(r.raw_ratio, 1.0, 1e-12);
  EXPECT_LE(r.ratio, 1e-12);
  const CMatrix ww = r.omega * r.omega.adjoint();
  EXPECT_NEAR(hdot(c, ww), hdot(c, w), 1e-12);
  EXPECT_NEAR(hdot(f, ww), hdot(f, w), 1e-12);
  EXPECT_NEAR(ww.trace().real(), 1.0, 1e-12);
}

}  // namespace
}  // namespace cogwpt
