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
#include <numeric>
#include <optional>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>

#include "cogwpt/beamopt.hpp"
#include "cogwpt/common.hpp"
#include "cogwpt/ellipsoid.hpp"
#include "cogwpt/lambda_range.hpp"
#include "cogwpt/parallel.hpp"
#include "cogwpt/scenario.hpp"
#include "cogwpt/solution.hpp"

namespace cogwpt {

// ---------------------------------------------------------------------------
// Zero forcing

/// Power allocation maximizing sum_i gain_i Q_i over the box [0, q_peak] and
/// sum_i Q_i <= q_sum: fill by descending gain. SCs with zero gain get nothing.
inline std::vector<double> greedy_allocation(std::span<const double> gains, double q_peak, double q_sum) {
  std::vector<std::size_t> order(gains.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return gains[a] > gains[b]; });
  std::vector<double> q(gains.size(), 0.0);
  double left = q_sum;
  for (std::size_t i : order) {
    if (!(gains[i] > 0.0) || !(left > 0.0)) break;
    q[i] = std::min(q_peak, left);
    left -= q[i];
  }
  return q;
}

/// Unit vector along the projection of g onto the orthogonal complement of f,
/// or zero when g is parallel to f.
inline CVector zf_direction(const CVector& g, const CVector& f) {
  const CVector fhat = f / f.norm();
  CVector u = g - fhat.dot(g) * fhat;
  const double n = u.norm();
  if (!(n > 1e-12 * g.norm())) return CVector::Zero(g.size());
  u /= n;
  u -= fhat.dot(u) * fhat;  // remove rounding residue along f
  return u;
}

/// Zero-forcing benchmark: null the cross link on every SC and allocate power
/// to the gains |g_i^H u_i|^2 by the exact greedy LP solution.
inline BeamformingSolution zf_solve(const Scenario& s) {
  s.validate();
  if (s.n_antennas < 2) throw ValidationError("zf_solve: zero forcing needs at least 2 antennas");
  std::vector<CVector> dirs(s.size());
  std::vector<double> gains(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    dirs[i] = zf_direction(s.g[i], s.f[i]);
    gains[i] = std::norm(s.g[i].dot(dirs[i]));
  }
  const auto q = greedy_allocation(gains, s.q_peak, s.q_sum);
  Beamformers omegas(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) omegas[i] = std::sqrt(q[i]) * dirs[i];
  return make_solution(s, std::move(omegas));
}

// ---------------------------------------------------------------------------
// MRT with optimized powers

/// Interference and direct gains per watt of the MRT beam g_i / ||g_i||.
struct MrtGains {
  std::vector<double> interference;  // c_i = |f_i^H g_i|^2 / ||g_i||^2
  std::vector<double> direct;        // d_i = ||g_i||^2
};

inline MrtGains mrt_gains(const Scenario& s) {
  MrtGains m;
  m.interference.resize(s.size());
  m.direct.resize(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double g2 = s.g[i].squaredNorm();
    m.direct[i] = g2;
    m.interference[i] = g2 > 0.0 ? std::norm(s.f[i].dot(s.g[i])) / g2 : 0.0;
  }
  return m;
}

inline Beamformers mrt_beamformers(const Scenario& s, std::span<const double> q) {
  Beamformers out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double g = s.g[i].norm();
    out[i] = g > 0.0 ? CVector(s.g[i] * (std::sqrt(q[i]) / g)) : CVector::Zero(s.n_antennas);
  }
  return out;
}

/// Per-SC maximizer over Q in [0, q_peak] of
///   d Q - eta c Q - mu Q + (phi - theta)(lambda - (c Q + sigma2) / h)^+,
/// a piecewise-linear function whose maximum is at 0, q_peak or the kink.
inline std::pair<double, double> mrt_subproblem(double c, double d, double h, double phi, double sigma2,
                                                double q_peak, const P3DualPoint& duals, double lambda) {
  auto value = [&](double q) {
    return (d - duals.eta1 * c - duals.mu1) * q +
           (phi - duals.theta1) * positive_part(lambda - (c * q + sigma2) / h);
  };
  std::array<double, 3> cands{0.0, q_peak, 0.0};
  int count = 2;
  if (c > 0.0) {
    const double kink = (h * lambda - sigma2) / c;
    if (kink > 0.0 && kink < q_peak) cands[count++] = kink;
  }
  double best_q = 0.0, best = value(0.0);
  for (int k = 1; k < count; ++k) {
    const double v = value(cands[k]);
    if (v > best) {
      best = v;
      best_q = cands[k];
    }
  }
  return {best_q, best};
}

struct MrtLevelResult {
  std::vector<double> q;
  double objective = 0.0;
  int iterations = 0;
};

namespace detail {

inline Beamformers repair_mrt(const Scenario& s, const MrtGains& gains, std::vector<double> q) {
  double inter = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) inter += gains.interference[i] * q[i];
  if (inter > s.gamma) {
    const double scale = s.gamma / inter;
    for (double& v : q) v *= scale;
  }
  auto omegas = mrt_beamformers(s, q);
  enforce_power_budgets(s, omegas);
  return omegas;
}

inline MrtLevelResult mrt_level(const Scenario& s, const MrtGains& gains, double lambda,
                                const BeamoptOptions& options) {
  double direct_scale = 0.0, inter_scale = 0.0, phi_max = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    direct_scale += gains.direct[i] * s.q_peak;
    inter_scale += gains.interference[i] * s.q_peak;
    phi_max = std::max(phi_max, s.phi[i]);
  }
  double v = direct_scale + s.p_sum * phi_max;
  if (!(v > 0.0)) v = 1.0;
  if (!(inter_scale > 0.0)) inter_scale = 1.0;
  const double power_scale = static_cast<double>(s.size()) * s.q_peak;
  auto to_dual = [&](const RVector& x) {
    return P3DualPoint{x(0) * v / inter_scale, x(1) * v / power_scale, x(2) * v / s.p_sum};
  };
  BestDesign best;
  std::vector<double> q(s.size());
  auto oracle = [&](const RVector& x) {
    const auto d = to_dual(x);
    double value = d.eta1 * s.gamma + d.mu1 * s.q_sum + d.theta1 * s.p_sum;
    double inter = 0.0, power = 0.0, primary = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const auto [qi, vi] = mrt_subproblem(gains.interference[i], gains.direct[i], s.h[i], s.phi[i], s.sigma2,
                                           s.q_peak, d, lambda);
      q[i] = qi;
      value += vi;
      inter += gains.interference[i] * qi;
      power += qi;
      primary += positive_part(lambda - (gains.interference[i] * qi + s.sigma2) / s.h[i]);
    }
    const auto fixed = repair_mrt(s, gains, q);
    best.offer(received_power(s, fixed).first.total, fixed, lambda);
    OracleResult o;
    o.value = value / v;
    o.subgradient.resize(3);
    o.subgradient << (s.gamma - inter) / inter_scale, (s.q_sum - power) / power_scale, (s.p_sum - primary) / s.p_sum;
    return o;
  };
  static constexpr std::array<SignConstraint, 3> signs{SignConstraint::nonnegative, SignConstraint::nonnegative,
                                                       SignConstraint::free};
  EllipsoidOptions eo;
  eo.tolerance = options.tolerance;
  eo.max_iter = options.max_iter;
  const auto er = ellipsoid_minimize(oracle, EllipsoidState::ball(RVector::Zero(3), options.radius), signs, eo);
  if (er.reason != StopReason::converged) {
    std::ostringstream msg;
    msg << "mrt_solve: dual search did not converge at lambda " << lambda;
    throw SolverError(msg.str());
  }
  MrtLevelResult r;
  r.iterations = er.iterations;
  r.objective = best.score();
  r.q.resize(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) r.q[i] = best.omegas()[i].squaredNorm();
  return r;
}

}  // namespace detail

/// MRT benchmark: beams fixed to g_i / ||g_i||, powers optimized against the
/// primary's reaction with the same level search and dual machinery as the
/// proposed design.
inline BeamformingSolution mrt_solve(const Scenario& s, const BeamoptOptions& options = {}) {
  s.validate();
  if (s.q_sum == 0.0 || s.q_peak == 0.0) return make_solution(s, zero_beamformers(s));
  const auto gains = mrt_gains(s);
  const LambdaRange range{lambda_min(s), lambda_max_with_gains(s, gains.interference)};
  const auto levels = lambda_grid(range, options.grid_points);
  std::vector<std::optional<MrtLevelResult>> results(levels.size());
  parallel_for(levels.size(), options.jobs, [&](std::size_t k) {
    try {
      results[k] = detail::mrt_level(s, gains, levels[k], options);
    } catch (const SolverError&) {
    }
  });
  std::size_t best = levels.size();
  int iterations = 0, failed = 0;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    if (!results[k]) {
      ++failed;
      continue;
    }
    iterations += results[k]->iterations;
    if (best == levels.size() || results[k]->objective > results[best]->objective) best = k;
  }
  if (best == levels.size()) throw SolverError("mrt_solve: every grid point failed");
  auto sol = make_solution(s, mrt_beamformers(s, results[best]->q), levels[best]);
  sol.iterations = iterations;
  sol.failed_grid_points = failed;
  return sol;
}

// ---------------------------------------------------------------------------
// Conventional design, blind to the primary's reaction

/// Maximizes the direct power sum_i |g_i^H w_i|^2 under the interference and
/// power budgets by a dual search over (eta, mu). Each SC takes q_peak along
/// the top eigenvector of G_i - eta F_i - mu I when its eigenvalue is positive.
/// The result is then scored under the true reaction.
inline BeamformingSolution conventional_solve(const Scenario& s, const BeamoptOptions& options = {}) {
  s.validate();
  if (s.q_sum == 0.0 || s.q_peak == 0.0) return make_solution(s, zero_beamformers(s));
  double g2 = 0.0, f2 = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    g2 += s.g[i].squaredNorm();
    f2 += s.f[i].squaredNorm();
  }
  double v = g2 * s.q_peak;
  if (!(v > 0.0)) v = 1.0;
  const double inter_scale = f2 * s.q_peak;
  const double power_scale = static_cast<double>(s.size()) * s.q_peak;
  std::vector<CMatrix> gg(s.size()), ff(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    gg[i] = s.g[i] * s.g[i].adjoint();
    ff[i] = s.f[i] * s.f[i].adjoint();
  }
  const auto m = s.n_antennas;
  BestDesign best;
  Beamformers candidate(s.size());
  auto oracle = [&](const RVector& x) {
    const double eta = x(0) * v / inter_scale, mu = x(1) * v / power_scale;
    double value = eta * s.gamma + mu * s.q_sum;
    double inter = 0.0, power = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const CMatrix k = gg[i] - eta * ff[i] - mu * CMatrix::Identity(m, m);
      Eigen::SelfAdjointEigenSolver<CMatrix> es(k);
      const double top = es.eigenvalues()(m - 1);
      if (top > 0.0) {
        candidate[i] = std::sqrt(s.q_peak) * es.eigenvectors().col(m - 1);
        value += s.q_peak * top;
      } else {
        candidate[i] = CVector::Zero(m);
      }
      inter += abs2_inner(s.f[i], candidate[i]);
      power += candidate[i].squaredNorm();
    }
    auto offer_direct = [&](const Beamformers& fixed) {
      double direct = 0.0;
      for (std::size_t i = 0; i < s.size(); ++i) direct += abs2_inner(s.g[i], fixed[i]);
      best.offer(direct, fixed, 0.0);
    };
    offer_direct(repair_beamformers(s, candidate));
    if (inter > s.gamma) offer_direct(scale_into_budgets(s, candidate));
    OracleResult o;
    o.value = value / v;
    o.subgradient.resize(2);
    o.subgradient << (s.gamma - inter) / inter_scale, (s.q_sum - power) / power_scale;
    return o;
  };
  static constexpr std::array<SignConstraint, 2> signs{SignConstraint::nonnegative, SignConstraint::nonnegative};
  EllipsoidOptions eo;
  eo.tolerance = options.tolerance;
  eo.max_iter = options.max_iter;
  const auto er = ellipsoid_minimize(oracle, EllipsoidState::ball(RVector::Zero(2), options.radius), signs, eo);
  if (er.reason != StopReason::converged) throw SolverError("conventional_solve: dual search did not converge");
  auto sol = make_solution(s, best.omegas());
  sol.iterations = er.iterations;
  return sol;
}

}  // namespace cogwpt
