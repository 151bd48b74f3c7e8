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
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "cogwpt/common.hpp"
#include "cogwpt/ellipsoid.hpp"
#include "cogwpt/scenario.hpp"
#include "cogwpt/waterfill.hpp"

namespace cogwpt {

/// Interval of water levels reachable by some admissible beamforming design.
struct LambdaRange {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};

/// Multipliers of the aligned-beam feasibility problem: interference budget
/// (eta), sum power (mu) and the water-filling equality (theta).
struct P2DualPoint {
  double eta = 0.0;
  double mu = 0.0;
  double theta = 0.0;
};

/// Water level with the S-ET silent.
inline double lambda_min(const Scenario& s) {
  const std::vector<double> zero(s.size(), 0.0);
  return waterfill(zero, s.h, s.sigma2, s.p_sum).lambda;
}

/// ||f_i||^2 on every SC: interference per watt under beam alignment with f_i.
inline std::vector<double> aligned_gains(const Scenario& s) {
  std::vector<double> a(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) a[i] = s.f[i].squaredNorm();
  return a;
}

struct P2SubproblemResult {
  double q = 0.0;      // maximizing transmit power on the SC
  double value = 0.0;  // maximal per-SC Lagrangian term
};

/// Exact maximizer over Q in [0, q_peak] of
///   -eta a Q - mu Q - theta (lambda - (a Q + sigma2) / h)^+
/// by the three-case analysis on t = (h lambda - sigma2) / a.
inline P2SubproblemResult p2_subproblem(double gain, double h, double sigma2, double q_peak,
                                        const P2DualPoint& d, double lambda) {
  const double a = gain;
  const double cost = -(d.eta * a + d.mu);  // slope once the SC is switched off
  if (!(a > 0.0)) {
    // No interference leverage: the reactive term is constant.
    const double rest = -d.theta * positive_part(lambda - sigma2 / h);
    if (cost > 0.0) return {q_peak, cost * q_peak + rest};
    return {0.0, rest};
  }
  const double t = (h * lambda - sigma2) / a;
  const double coef = cost + d.theta * a / h;  // slope while the SC stays on
  const double on_const = -d.theta * (lambda - sigma2 / h);

  if (t < 0.0) return {0.0, 0.0};  // case (i)
  if (t > q_peak) {                // case (ii)
    if (coef > 0.0) return {q_peak, coef * q_peak + on_const};
    return {0.0, on_const};
  }
  // case (iii): cost <= 0 on the dual domain, so [t, q_peak] peaks at t.
  const double psi2 = cost * t;
  if (coef > 0.0) return {t, psi2};
  const double psi1 = on_const;
  if (psi1 <= psi2) return {t, psi2};
  return {0.0, psi1};
}

inline P2SubproblemResult p2_subproblem(const Scenario& s, std::size_t sc, const P2DualPoint& d, double lambda) {
  return p2_subproblem(s.f[sc].squaredNorm(), s.h[sc], s.sigma2, s.q_peak, d, lambda);
}

struct P2Options {
  double rel_tolerance = 1e-6;
  double radius = 1.0;  // in normalized multiplier units
  int max_iter = 4000;
};

struct P2Verdict {
  bool feasible = false;
  P2DualPoint certificate;  // dual point with D < -tolerance when infeasible
  double dual_value = 0.0;
  double lower_bound = 0.0;
  double tolerance = 0.0;
  int iterations = 0;
};

/// The feasibility test neither certified infeasibility nor converged.
class InconclusiveError : public SolverError {
 public:
  using SolverError::SolverError;
};

namespace detail {

struct P2Scales {
  double interference;
  double power;
  double primary;
};

inline P2Scales p2_scales(const Scenario& s, std::span<const double> gains) {
  double sum_gain = 0.0;
  for (double a : gains) sum_gain += a;
  const double n = static_cast<double>(s.size());
  P2Scales sc{sum_gain * s.q_peak, n * s.q_peak, s.p_sum};
  if (!(sc.interference > 0.0)) sc.interference = 1.0;
  if (!(sc.power > 0.0)) sc.power = 1.0;
  return sc;
}

}  // namespace detail

/// Dual feasibility test for a water level reachable by interference
/// `gains[i] * Q_i` under the budgets of `s`.
///
/// The dual function is positively homogeneous, so the search runs over a ball
/// of radius `radius` in multipliers normalized by the constraint scales
/// (sum_i gains_i q_peak, N q_peak, p_sum). Infeasible as soon as an iterate
/// has D < -tol; feasible once the ellipsoid certifies D >= -tol on the ball,
/// with tol = rel_tolerance * (gamma / s_I + q_sum / s_Q + 1).
inline P2Verdict p2_feasible_with_gains(const Scenario& s, std::span<const double> gains, double lambda,
                                        const P2Options& options = {}) {
  if (gains.size() != s.size()) throw ValidationError("p2_feasible: gains dimension mismatch");
  const auto scales = detail::p2_scales(s, gains);
  const double tol = options.rel_tolerance * (s.gamma / scales.interference + s.q_sum / scales.power + 1.0);

  P2Verdict verdict;
  verdict.tolerance = tol;
  const double lmin = lambda_min(s);
  if (lambda <= lmin) {
    verdict.feasible = lambda >= lmin * (1.0 - 1e-12);
    if (!verdict.feasible) throw ValidationError("p2_feasible: lambda below lambda_min");
    return verdict;
  }

  auto to_dual = [&](const RVector& x) {
    return P2DualPoint{x(0) / scales.interference, x(1) / scales.power, x(2) / scales.primary};
  };
  auto oracle = [&](const RVector& x) {
    const P2DualPoint d = to_dual(x);
    double value = d.eta * s.gamma + d.mu * s.q_sum + d.theta * s.p_sum;
    double interference = 0.0, power = 0.0, primary = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const auto r = p2_subproblem(gains[i], s.h[i], s.sigma2, s.q_peak, d, lambda);
      value += r.value;
      interference += gains[i] * r.q;
      power += r.q;
      primary += positive_part(lambda - (gains[i] * r.q + s.sigma2) / s.h[i]);
    }
    OracleResult o;
    o.value = value;
    o.subgradient.resize(3);
    o.subgradient << (s.gamma - interference) / scales.interference, (s.q_sum - power) / scales.power,
        (s.p_sum - primary) / scales.primary;
    return o;
  };
  static constexpr std::array<SignConstraint, 3> signs{SignConstraint::nonnegative, SignConstraint::nonnegative,
                                                       SignConstraint::free};
  EllipsoidOptions eo;
  eo.tolerance = tol;
  eo.max_iter = options.max_iter;
  const auto res = ellipsoid_minimize(oracle, EllipsoidState::ball(RVector::Zero(3), options.radius), signs,
                                      [tol](double v, const EllipsoidState&) { return v < -tol; }, eo);
  verdict.iterations = res.iterations;
  verdict.dual_value = res.best_value;
  verdict.lower_bound = res.lower_bound;
  verdict.certificate = to_dual(res.best_point);
  if (res.best_value < -tol) {
    verdict.feasible = false;
    return verdict;
  }
  if (res.reason == StopReason::converged) {
    verdict.feasible = true;
    return verdict;
  }
  throw InconclusiveError("p2_feasible: no verdict after " + std::to_string(res.iterations) +
                          " iterations (best dual value " + std::to_string(res.best_value) + ", lower bound " +
                          std::to_string(res.lower_bound) + ")");
}

inline P2Verdict p2_feasible(const Scenario& s, double lambda, const P2Options& options = {}) {
  const auto gains = aligned_gains(s);
  return p2_feasible_with_gains(s, gains, lambda, options);
}

/// Largest feasible water level by bisection on the dual feasibility test.
/// The upper bracket is the water level with every SC taking q_peak * gains_i
/// of interference. A nonpositive `bisect_tol` means 1e-6 of the bracket.
inline double lambda_max_with_gains(const Scenario& s, std::span<const double> gains, double bisect_tol = 0.0,
                                    const P2Options& options = {}) {
  const double lo0 = lambda_min(s);
  double sum_gain = 0.0;
  for (double a : gains) sum_gain += a;
  if (s.gamma == 0.0 || s.q_sum == 0.0 || s.q_peak == 0.0 || sum_gain == 0.0) return lo0;

  std::vector<double> flood(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) flood[i] = s.q_peak * gains[i];
  double hi = waterfill(flood, s.h, s.sigma2, s.p_sum).lambda;
  double lo = lo0;
  if (!(hi > lo)) return lo;
  if (p2_feasible_with_gains(s, gains, hi, options).feasible) return hi;
  const double tol = bisect_tol > 0.0 ? bisect_tol : 1e-6 * (hi - lo);
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (p2_feasible_with_gains(s, gains, mid, options).feasible) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

inline double lambda_max(const Scenario& s, double bisect_tol = 0.0, const P2Options& options = {}) {
  const auto gains = aligned_gains(s);
  return lambda_max_with_gains(s, gains, bisect_tol, options);
}

inline LambdaRange lambda_range(const Scenario& s, double bisect_tol = 0.0) {
  return {lambda_min(s), lambda_max(s, bisect_tol)};
}

}  // namespace cogwpt
