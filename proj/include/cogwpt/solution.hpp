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
#include <string>
#include <vector>

#include "cogwpt/common.hpp"
#include "cogwpt/scenario.hpp"
#include "cogwpt/waterfill.hpp"

namespace cogwpt {

/// Constraint levels minus their bounds; nonpositive means satisfied.
struct Residuals {
  double primary = 0.0;       // sum_i P_i - p_sum (water-filling equality)
  double sum_power = 0.0;     // sum_i ||w_i||^2 - q_sum
  double peak_power = 0.0;    // max_i ||w_i||^2 - q_peak
  double interference = 0.0;  // sum_i |f_i^H w_i|^2 - gamma

  /// True when every residual is within the relative slack of the documented
  /// invariants.
  bool within(const Scenario& s, double rel = 1e-6) const {
    return std::abs(primary) <= rel * s.p_sum && sum_power <= rel * s.q_sum && peak_power <= rel * s.q_peak &&
           interference <= rel * std::max(s.gamma, s.sigma2);
  }
};

/// A beamforming design evaluated under the primary's true reaction.
struct BeamformingSolution {
  Beamformers omegas;
  double lambda = 0.0;       // water level induced by the design's interference
  double grid_lambda = 0.0;  // search level that produced the design (proposed, MRT)
  PowerBreakdown breakdown;
  Residuals residuals;
  std::vector<double> primary_power;  // P_i
  std::vector<double> interference;   // |f_i^H w_i|^2
  std::vector<double> transmit_power; // ||w_i||^2
  double sum_rate = 0.0;              // primary sum rate, bps/Hz
  int iterations = 0;                 // ellipsoid iterations summed over the search
  int failed_grid_points = 0;
};

inline Residuals residuals_of(const Scenario& s, const Beamformers& omegas, const WaterfillResponse& response) {
  Residuals r;
  double p = 0.0, q = 0.0, peak = 0.0, inter = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    p += response.p[i];
    const double n2 = omegas[i].squaredNorm();
    q += n2;
    peak = std::max(peak, n2);
    inter += abs2_inner(s.f[i], omegas[i]);
  }
  r.primary = p - s.p_sum;
  r.sum_power = q - s.q_sum;
  r.peak_power = peak - s.q_peak;
  r.interference = inter - s.gamma;
  return r;
}

/// Evaluate a design: reaction, breakdown, residuals and the primary's rate.
inline BeamformingSolution make_solution(const Scenario& s, Beamformers omegas, double grid_lambda = 0.0) {
  BeamformingSolution sol;
  auto [breakdown, response] = received_power(s, omegas);
  sol.breakdown = breakdown;
  sol.lambda = response.lambda;
  sol.grid_lambda = grid_lambda;
  sol.residuals = residuals_of(s, omegas, response);
  sol.interference = interference_profile(s, omegas);
  sol.transmit_power.resize(s.size());
  sol.sum_rate = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    sol.transmit_power[i] = omegas[i].squaredNorm();
    sol.sum_rate += std::log2(1.0 + s.h[i] * response.p[i] / (sol.interference[i] + s.sigma2));
  }
  sol.primary_power = std::move(response.p);
  sol.omegas = std::move(omegas);
  return sol;
}

/// Scale every vector into the per-SC and sum power budgets.
inline void enforce_power_budgets(const Scenario& s, Beamformers& omegas) {
  double total = 0.0;
  for (auto& w : omegas) {
    const double n2 = w.squaredNorm();
    if (n2 > s.q_peak) w *= std::sqrt(s.q_peak / n2);
    total += w.squaredNorm();
  }
  if (total > s.q_sum) {
    const double scale = std::sqrt(s.q_sum / total);
    for (auto& w : omegas) w *= scale;
  }
}

/// Move each vector a fraction rho of the way into the null space of f_i,
/// keeping its norm.
inline Beamformers steer_from_receiver(const Scenario& s, const Beamformers& omegas, double rho) {
  Beamformers out(omegas.size());
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    const double norm = omegas[i].norm();
    const CVector fhat = s.f[i] / s.f[i].norm();
    CVector v = omegas[i] - rho * fhat.dot(omegas[i]) * fhat;
    const double vn = v.norm();
    out[i] = vn > 1e-300 * (1.0 + norm) ? CVector(v * (norm / vn)) : CVector::Zero(omegas[i].size());
    if (rho == 1.0) {
      // Exact null: remove any rounding residue along f.
      out[i] -= fhat.dot(out[i]) * fhat;
    }
  }
  return out;
}

inline double total_interference(const Scenario& s, const Beamformers& omegas) {
  double t = 0.0;
  for (std::size_t i = 0; i < omegas.size(); ++i) t += abs2_inner(s.f[i], omegas[i]);
  return t;
}

/// Make a design feasible for the budgets.
///
/// An interference excess is removed by the smallest uniform fraction rho of
/// null-space steering (norms kept), found by bisection; then per-SC and sum
/// power budgets are met by scaling down, which cannot raise interference.
inline Beamformers repair_beamformers(const Scenario& s, Beamformers omegas) {
  if (total_interference(s, omegas) > s.gamma) {
    // With c_i = |fhat_i^H w_i|^2 / ||w_i||^2, steering by rho leaves
    // I_i(rho) = ||w_i||^2 ||f_i||^2 (1 - rho)^2 c_i / ((1 - rho)^2 c_i + 1 - c_i).
    std::vector<double> weight(omegas.size()), c(omegas.size());
    for (std::size_t i = 0; i < omegas.size(); ++i) {
      const double n2 = omegas[i].squaredNorm();
      const double f2 = s.f[i].squaredNorm();
      weight[i] = n2 * f2;
      c[i] = n2 > 0.0 ? std::min(1.0, std::norm(s.f[i].dot(omegas[i])) / (f2 * n2)) : 0.0;
    }
    auto interference_at = [&](double rho) {
      const double r2 = (1.0 - rho) * (1.0 - rho);
      double t = 0.0;
      for (std::size_t i = 0; i < c.size(); ++i) {
        const double den = r2 * c[i] + 1.0 - c[i];
        if (den > 0.0) t += weight[i] * r2 * c[i] / den;
      }
      return t;
    };
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (interference_at(mid) > s.gamma ? lo : hi) = mid;
    }
    omegas = steer_from_receiver(s, omegas, hi);
    if (total_interference(s, omegas) > s.gamma) omegas = steer_from_receiver(s, omegas, 1.0);
  }
  enforce_power_budgets(s, omegas);
  return omegas;
}

/// Uniform scaling into the interference budget, then the power budgets.
inline Beamformers scale_into_budgets(const Scenario& s, Beamformers omegas) {
  const double inter = total_interference(s, omegas);
  if (inter > s.gamma) {
    const double scale = std::sqrt(s.gamma / inter);
    for (auto& w : omegas) w *= scale;
  }
  enforce_power_budgets(s, omegas);
  return omegas;
}

/// Track the best feasible design seen during a dual search.
class BestDesign {
 public:
  /// Offer a design already known to be feasible; returns true when it improves.
  bool offer(double score, const Beamformers& omegas, double lambda) {
    if (!(score > score_)) return false;
    score_ = score;
    omegas_ = omegas;
    lambda_ = lambda;
    has_ = true;
    return true;
  }
  bool has() const { return has_; }
  double score() const { return score_; }
  const Beamformers& omegas() const { return omegas_; }
  double lambda() const { return lambda_; }

 private:
  bool has_ = false;
  double score_ = -1.0;
  Beamformers omegas_;
  double lambda_ = 0.0;
};

/// Offer a raw candidate after repair. Over the interference budget both
/// repairs are scored, since steering cannot help where f_i spans the space
/// (M = 1) and scaling wastes power where it can.
inline void offer_repaired(BestDesign& best, const Scenario& s, const Beamformers& candidate, double lambda) {
  const auto steered = repair_beamformers(s, candidate);
  best.offer(received_power(s, steered).first.total, steered, lambda);
  if (total_interference(s, candidate) > s.gamma) {
    const auto scaled = scale_into_budgets(s, candidate);
    best.offer(received_power(s, scaled).first.total, scaled, lambda);
  }
}

}  // namespace cogwpt
