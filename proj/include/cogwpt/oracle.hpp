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

#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "cogwpt/common.hpp"
#include "cogwpt/scenario.hpp"
#include "cogwpt/waterfill.hpp"

// Brute-force references for small instances. Only the reaction model
// (waterfill, received_power) and plain arithmetic are used here, never the
// solvers, so agreement with them is evidence rather than a tautology.

namespace cogwpt {

struct BruteForceResult {
  double total = 0.0;
  Beamformers omegas;
  long long evaluated = 0;  // grid points that passed the budget checks
};

namespace detail {

/// Unit vectors ghat and uhat spanning span{g, f}, uhat orthogonal to ghat
/// (zero when g is parallel to f or M = 1).
inline std::pair<CVector, CVector> oracle_frame(const CVector& g, const CVector& f) {
  const CVector ghat = g / g.norm();
  CVector u = f - ghat.dot(f) * ghat;
  const double n = u.norm();
  if (g.size() < 2 || !(n > 1e-12 * f.norm())) return {ghat, CVector::Zero(g.size())};
  return {ghat, u / n};
}

}  // namespace detail

/// Exhaustive search for the full problem on N <= 2, M <= 3.
///
/// Each SC's beam is w = alpha ghat + beta e^{j psi} uhat with alpha, beta on a
/// `resolution`-point grid over [0, sqrt(q_peak)] and psi on `resolution`
/// phases. For N = 2, SC 2 is searched over `resolution` interference levels
/// instead; for each level the beam spending all remaining power with the
/// largest direct gain is written down in closed form
/// (amplitude sqrt(I / ||f||^2) along f, the rest along g's residual).
/// Every evaluated design is feasible, so the result lower-bounds the optimum.
inline BruteForceResult brute_force_p1(const Scenario& s, int resolution) {
  s.validate();
  if (s.n_subcarriers > 2 || s.n_antennas > 3) throw ValidationError("brute_force_p1: needs N <= 2 and M <= 3");
  if (resolution < 2) throw ValidationError("brute_force_p1: resolution must be at least 2");
  const int res = resolution;
  const double amp = std::sqrt(s.q_peak);

  // SC 1 designs on the (alpha, beta, psi) grid.
  const auto [ghat, uhat] = detail::oracle_frame(s.g[0], s.f[0]);
  const bool has_u = uhat.squaredNorm() > 0.0;
  std::vector<CVector> first;
  for (int i = 0; i < res; ++i) {
    const double alpha = amp * i / (res - 1);
    for (int j = 0; j < (has_u ? res : 1); ++j) {
      const double beta = amp * j / (res - 1);
      if (alpha * alpha + beta * beta > s.q_peak * (1.0 + 1e-12)) continue;
      for (int k = 0; k < (has_u && beta > 0.0 ? res : 1); ++k) {
        const double psi = 2.0 * M_PI * k / res;
        first.push_back(alpha * ghat + beta * std::polar(1.0, psi) * uhat);
      }
    }
  }

  BruteForceResult best;
  best.total = -1.0;
  auto consider = [&](const Beamformers& w) {
    double q = 0.0, inter = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double n2 = w[i].squaredNorm();
      if (n2 > s.q_peak * (1.0 + 1e-12)) return;
      q += n2;
      inter += std::norm(s.f[i].dot(w[i]));
    }
    if (q > s.q_sum * (1.0 + 1e-12) || inter > s.gamma) return;
    ++best.evaluated;
    const double total = received_power(s, w).first.total;
    if (total > best.total) {
      best.total = total;
      best.omegas = w;
    }
  };

  if (s.n_subcarriers == 1) {
    for (const auto& w : first) consider(Beamformers{w});
  } else {
    const CVector& g2 = s.g[1];
    const CVector& f2v = s.f[1];
    const double f2 = f2v.squaredNorm();
    const CVector e1 = f2v / std::sqrt(f2);
    const Complex a = e1.dot(g2);
    CVector r = g2 - a * e1;
    const double rn = r.norm();
    const bool has_r = s.n_antennas > 1 && rn > 1e-12 * g2.norm();
    const CVector e2 = has_r ? CVector(r / rn) : CVector::Zero(s.n_antennas);
    const Complex ph = std::abs(a) > 0.0 ? a / std::abs(a) : Complex(1.0, 0.0);
    for (const auto& w1 : first) {
      const double q1 = w1.squaredNorm();
      const double i1 = std::norm(s.f[0].dot(w1));
      const double room = std::min(s.q_peak, s.q_sum - q1);
      if (room < 0.0 || i1 > s.gamma) continue;
      const double i_max = std::min(s.gamma - i1, room * f2);
      for (int k = 0; k < res; ++k) {
        const double i2 = i_max * k / (res - 1);
        const double p = std::sqrt(i2 / f2);
        const double q = has_r ? std::sqrt(std::max(room - p * p, 0.0)) : 0.0;
        consider(Beamformers{w1, CVector(p * ph * e1 + q * e2)});
      }
    }
  }
  if (best.total < 0.0) throw SolverError("brute_force_p1: no feasible grid point");
  return best;
}

/// Equality slack of brute_force_p2 at level `lambda`: rounding every Q_i down
/// to the grid moves P_i by at most min(spacing ||f_i||^2 / h_i, (lambda - sigma2 / h_i)^+),
/// so a feasible point always has a grid neighbour within the sum of these.
inline double brute_force_p2_slack(const Scenario& s, double lambda, int resolution) {
  if (resolution < 2) throw ValidationError("brute_force_p2: resolution must be at least 2");
  const double spacing = s.q_peak / (resolution - 1);
  double slack = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    slack += std::min(spacing * s.f[i].squaredNorm() / s.h[i], positive_part(lambda - s.sigma2 / s.h[i]));
  }
  return slack;
}

/// Grid test of the aligned-beam feasibility problem at level `lambda`:
/// Q on a `resolution`-point grid over [0, q_peak]^N, budgets checked exactly
/// and the water-filling equality up to brute_force_p2_slack.
inline bool brute_force_p2(const Scenario& s, double lambda, int resolution) {
  s.validate();
  if (s.n_subcarriers > 2) throw ValidationError("brute_force_p2: needs N <= 2");
  const double slack = brute_force_p2_slack(s, lambda, resolution);
  const std::size_t n = s.size();
  const double spacing = s.q_peak / (resolution - 1);
  std::vector<double> a(n);
  for (std::size_t i = 0; i < n; ++i) a[i] = s.f[i].squaredNorm();
  const int r2 = n == 2 ? resolution : 1;
  for (int i = 0; i < resolution; ++i) {
    for (int j = 0; j < r2; ++j) {
      const double q[2] = {spacing * i, spacing * j};
      double inter = 0.0, power = 0.0, primary = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        inter += a[k] * q[k];
        power += q[k];
        primary += positive_part(lambda - (a[k] * q[k] + s.sigma2) / s.h[k]);
      }
      if (inter <= s.gamma && power <= s.q_sum && std::abs(primary - s.p_sum) <= slack) return true;
    }
  }
  return false;
}

}  // namespace cogwpt
