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
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cogwpt/common.hpp"
#include "cogwpt/ellipsoid.hpp"
#include "cogwpt/lambda_range.hpp"
#include "cogwpt/parallel.hpp"
#include "cogwpt/scenario.hpp"
#include "cogwpt/sdp.hpp"
#include "cogwpt/solution.hpp"
#include "cogwpt/span_qcqp.hpp"
#include "cogwpt/waterfill.hpp"

namespace cogwpt {

/// Multipliers of the fixed-level problem: interference budget (eta1), sum
/// power (mu1) and the water-filling equality (theta1).
struct P3DualPoint {
  double eta1 = 0.0;
  double mu1 = 0.0;
  double theta1 = 0.0;
};

/// How the per-SC branch problems are solved. Both give the same optimum:
/// `sdr` lifts to an SDP and extracts a rank-one factor, `closed_form` solves
/// the two-dimensional problem in span{f_i, g_i} exactly.
enum class SubproblemMethod { closed_form, sdr };

inline const char* to_string(SubproblemMethod m) { return m == SubproblemMethod::sdr ? "sdr" : "closed_form"; }

inline SubproblemMethod parse_subproblem_method(const std::string& name) {
  if (name == "sdr") return SubproblemMethod::sdr;
  if (name == "closed_form" || name == "closed-form") return SubproblemMethod::closed_form;
  throw ValidationError("unknown subproblem method '" + name + "' (expected sdr or closed_form)");
}

/// Diagnostics accumulated over every SDP solved on the `sdr` path.
struct SdrStats {
  long long sdp_solves = 0;
  long long extractions = 0;
  long long fallbacks = 0;  // SDPs that failed and were answered in closed form
  double max_rel_gap = 0.0;
  double max_raw_ratio = 0.0;
  double max_ratio = 0.0;  // lambda_2 / lambda_1 after purification
  int max_iterations = 0;

  void merge(const SdrStats& o) {
    sdp_solves += o.sdp_solves;
    extractions += o.extractions;
    fallbacks += o.fallbacks;
    max_rel_gap = std::max(max_rel_gap, o.max_rel_gap);
    max_raw_ratio = std::max(max_raw_ratio, o.max_raw_ratio);
    max_ratio = std::max(max_ratio, o.max_ratio);
    max_iterations = std::max(max_iterations, o.max_iterations);
  }
};

struct P4Result {
  CVector omega;
  double value = 0.0;     // per-SC Lagrangian value at the maximizer
  bool primary_on = false;  // branch with P_i >= 0 active was chosen
  double interference = 0.0;
  double power = 0.0;
  double primary = 0.0;  // P_i = (lambda - (I_i + sigma2) / h_i)^+
};

namespace detail {

struct BranchOutcome {
  bool feasible = false;
  CVector omega;
  double value = -std::numeric_limits<double>::infinity();
};

inline BranchOutcome solve_branch(const CVector& g, const CVector& f, const SpanBasis& basis, const SpanQcqp& prob,
                                  double offset, double q_peak, SubproblemMethod method, SdrStats* stats) {
  BranchOutcome out;
  auto closed_form = [&] {
    const auto r = solve_span_qcqp(basis, prob);
    out.feasible = r.feasible;
    if (r.feasible) out.omega = span_beam(basis, r.p, r.q);
    out.value = r.value + offset;
  };
  if (method == SubproblemMethod::closed_form) {
    closed_form();
    return out;
  }
  const auto m = g.size();
  const CMatrix ff = f * f.adjoint();
  SdpInstance inst;
  inst.c = g * g.adjoint() + prob.coef_f * ff - prob.mu * CMatrix::Identity(m, m);
  if (prob.lo > 0.0) inst.constraints.push_back({ff, Sense::ge, prob.lo});
  if (std::isfinite(prob.hi)) inst.constraints.push_back({ff, Sense::le, prob.hi});
  inst.constraints.push_back({CMatrix::Identity(m, m), Sense::le, q_peak});
  inst.offset = offset;
  SdrStats local;
  try {
    const auto r = solve_sdp(inst);
    ++local.sdp_solves;
    local.max_iterations = r.iterations;
    if (r.status == SdpStatus::optimal) {
      local.max_rel_gap = r.rel_gap;
      const auto one = extract_rank_one(r.w, inst);
      ++local.extractions;
      local.max_raw_ratio = one.raw_ratio;
      local.max_ratio = one.ratio;
      out.feasible = true;
      out.omega = one.omega;
      out.value = r.value;
    } else {
      ++local.fallbacks;
      closed_form();
    }
  } catch (const SolverError&) {
    ++local.fallbacks;
    closed_form();
  }
  if (stats) stats->merge(local);
  return out;
}

}  // namespace detail

/// Per-SC maximizer of the partial Lagrangian at fixed water level.
///
/// Branch A (primary silent, I_i >= t_i with t_i = h_i lambda - sigma2):
///   max |g^H w|^2 - eta1 |f^H w|^2 - mu1 ||w||^2.
/// Branch B (primary on, I_i <= t_i):
///   max |g^H w|^2 + (-eta1 + (theta1 - phi_i) / h_i) |f^H w|^2 - mu1 ||w||^2
///       + (phi_i - theta1)(lambda - sigma2 / h_i).
/// Both keep ||w||^2 <= q_peak. A is infeasible when q_peak ||f_i||^2 < t_i,
/// B when t_i < 0. The larger value wins; ties go to B.
///
/// `basis` may carry the precomputed span frame of SC i.
inline P4Result p4_solve(const Scenario& s, std::size_t i, const P3DualPoint& d, double lambda,
                         SubproblemMethod method = SubproblemMethod::closed_form, SdrStats* stats = nullptr,
                         const SpanBasis* basis = nullptr) {
  if (d.eta1 < 0.0 || d.mu1 < 0.0) throw ValidationError("p4_solve: eta1 and mu1 must be nonnegative");
  std::optional<SpanBasis> own;
  if (!basis) basis = &own.emplace(make_span_basis(s.g[i], s.f[i]));
  const CVector& g = s.g[i];
  const CVector& f = s.f[i];
  const double h = s.h[i], phi = s.phi[i];
  const double t = h * lambda - s.sigma2;
  const double f2 = f.squaredNorm();

  detail::BranchOutcome a, b;
  if (s.q_peak * f2 >= t) {
    SpanQcqp pa{-d.eta1, d.mu1, std::max(t, 0.0), std::numeric_limits<double>::infinity(), s.q_peak};
    a = detail::solve_branch(g, f, *basis, pa, 0.0, s.q_peak, method, stats);
  }
  if (t >= 0.0) {
    SpanQcqp pb{-d.eta1 + (d.theta1 - phi) / h, d.mu1, 0.0, t, s.q_peak};
    b = detail::solve_branch(g, f, *basis, pb, (phi - d.theta1) * (lambda - s.sigma2 / h), s.q_peak, method,
                               stats);
  }
  if (!a.feasible && !b.feasible) {
    throw SolverError("p4_solve: both branches infeasible on SC " + std::to_string(i));
  }
  const bool use_b = b.feasible && (!a.feasible || b.value >= a.value);
  P4Result r;
  r.primary_on = use_b;
  r.omega = use_b ? b.omega : a.omega;
  r.value = use_b ? b.value : a.value;
  r.interference = std::norm(f.dot(r.omega));
  r.power = r.omega.squaredNorm();
  r.primary = positive_part(lambda - (r.interference + s.sigma2) / h);
  return r;
}

struct BeamoptOptions {
  SubproblemMethod method = SubproblemMethod::closed_form;
  int grid_points = 50;
  double tolerance = 1e-7;  // on the dual value gap, relative to the objective scale
  double radius = 100.0;    // initial ball, normalized multiplier units
  int max_iter = 5000;
  int jobs = 1;             // worker threads across lambda grid points
};

struct P3Result {
  Beamformers omegas;       // best feasible design found along the dual search
  double objective = 0.0;   // its total received power under the true reaction
  double dual_value = 0.0;  // smallest dual value visited, W
  double lower_bound = 0.0; // ellipsoid lower bound on the dual optimum, W
  P3DualPoint duals;
  int iterations = 0;
  int oracle_calls = 0;
  StopReason reason = StopReason::converged;
  SdrStats stats;
};

namespace detail {

/// Normalization of the dual search: multipliers are measured against the
/// objective scale over the constraint scales, so the optimum sits in a ball
/// of moderate radius whatever the link budgets.
struct DualScales {
  double objective = 1.0;
  double interference = 1.0;
  double power = 1.0;
  double primary = 1.0;
};

inline DualScales p3_scales(const Scenario& s) {
  DualScales sc;
  double g2 = 0.0, f2 = 0.0, phi_max = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    g2 += s.g[i].squaredNorm();
    f2 += s.f[i].squaredNorm();
    phi_max = std::max(phi_max, s.phi[i]);
  }
  sc.objective = g2 * s.q_peak + s.p_sum * phi_max;
  sc.interference = f2 * s.q_peak;
  sc.power = static_cast<double>(s.size()) * s.q_peak;
  sc.primary = s.p_sum;
  if (!(sc.objective > 0.0)) sc.objective = 1.0;
  if (!(sc.interference > 0.0)) sc.interference = 1.0;
  if (!(sc.power > 0.0)) sc.power = 1.0;
  return sc;
}

}  // namespace detail

/// Fixed-level problem by dual decomposition with an ellipsoid search over
/// (eta1, mu1, theta1).
///
/// Every oracle call yields per-SC maximizers; each such design is repaired to
/// the budgets and scored by its true received power, and the best one is
/// returned. Throws SolverError if the search does not converge.
inline P3Result p3_solve(const Scenario& s, double lambda, const BeamoptOptions& options = {}) {
  s.validate();
  P3Result res;
  if (s.q_sum == 0.0 || s.q_peak == 0.0) {
    res.omegas = zero_beamformers(s);
    res.objective = received_power(s, res.omegas).first.total;
    res.dual_value = res.lower_bound = res.objective;
    return res;
  }
  const auto sc = detail::p3_scales(s);
  auto to_dual = [&](const RVector& x) {
    return P3DualPoint{x(0) * sc.objective / sc.interference, x(1) * sc.objective / sc.power,
                       x(2) * sc.objective / sc.primary};
  };

  BestDesign best;
  Beamformers candidate(s.size());
  SdrStats stats;
  std::vector<SpanBasis> bases(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) bases[i] = make_span_basis(s.g[i], s.f[i]);
  auto oracle = [&](const RVector& x) {
    const P3DualPoint d = to_dual(x);
    double value = d.eta1 * s.gamma + d.mu1 * s.q_sum + d.theta1 * s.p_sum;
    double inter = 0.0, power = 0.0, primary = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const auto r = p4_solve(s, i, d, lambda, options.method, &stats, &bases[i]);
      value += r.value;
      inter += r.interference;
      power += r.power;
      primary += r.primary;
      candidate[i] = r.omega;
    }
    offer_repaired(best, s, candidate, lambda);

    OracleResult o;
    o.value = value / sc.objective;
    o.subgradient.resize(3);
    o.subgradient << (s.gamma - inter) / sc.interference, (s.q_sum - power) / sc.power,
        (s.p_sum - primary) / sc.primary;
    return o;
  };
  static constexpr std::array<SignConstraint, 3> signs{SignConstraint::nonnegative, SignConstraint::nonnegative,
                                                       SignConstraint::free};
  EllipsoidOptions eo;
  eo.tolerance = options.tolerance;
  eo.max_iter = options.max_iter;
  const auto er = ellipsoid_minimize(oracle, EllipsoidState::ball(RVector::Zero(3), options.radius), signs, eo);
  res.iterations = er.iterations;
  res.oracle_calls = er.oracle_calls;
  res.reason = er.reason;
  res.dual_value = er.best_value * sc.objective;
  res.lower_bound = er.lower_bound * sc.objective;
  res.duals = to_dual(er.best_point);
  res.stats = stats;
  if (er.reason != StopReason::converged) {
    std::ostringstream msg;
    msg << "p3_solve: dual search did not converge at lambda " << lambda << " (gap " << er.gap() * sc.objective
        << " W after " << er.iterations << " iterations)";
    throw SolverError(msg.str());
  }
  res.omegas = best.omegas();
  res.objective = best.score();
  return res;
}

/// Outcome of one level of the one-dimensional search.
struct GridPoint {
  double lambda = 0.0;
  bool ok = false;
  double objective = 0.0;
  double dual_value = 0.0;
  int iterations = 0;
  std::string error;
};

struct P1Report {
  BeamformingSolution solution;
  LambdaRange range;
  std::vector<GridPoint> grid;
  SdrStats stats;
};

/// Uniform grid of `points` levels over the range (one level if it is degenerate).
inline std::vector<double> lambda_grid(const LambdaRange& range, int points) {
  if (points < 2) throw ValidationError("lambda grid needs at least 2 points");
  if (!(range.lambda_max > range.lambda_min)) return {range.lambda_min};
  std::vector<double> out(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) {
    out[static_cast<std::size_t>(k)] =
        k == points - 1 ? range.lambda_max
                        : range.lambda_min + (range.lambda_max - range.lambda_min) * k / (points - 1);
  }
  return out;
}

/// Full problem: fixed-level solves over a uniform water-level grid, keeping
/// the design with the largest true received power.
inline P1Report p1_solve_report(const Scenario& s, const BeamoptOptions& options = {}) {
  s.validate();
  P1Report rep;
  rep.range = lambda_range(s);
  const auto levels = lambda_grid(rep.range, options.grid_points);
  std::vector<std::optional<P3Result>> results(levels.size());
  rep.grid.resize(levels.size());
  parallel_for(levels.size(), options.jobs, [&](std::size_t k) {
    rep.grid[k].lambda = levels[k];
    try {
      results[k] = p3_solve(s, levels[k], options);
      rep.grid[k].ok = true;
      rep.grid[k].objective = results[k]->objective;
      rep.grid[k].dual_value = results[k]->dual_value;
      rep.grid[k].iterations = results[k]->iterations;
    } catch (const SolverError& e) {
      rep.grid[k].error = e.what();
    }
  });
  std::size_t best = levels.size();
  int iterations = 0, failed = 0;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    iterations += rep.grid[k].iterations;
    if (!results[k]) {
      ++failed;
      continue;
    }
    rep.stats.merge(results[k]->stats);
    if (best == levels.size() || results[k]->objective > results[best]->objective) best = k;
  }
  if (best == levels.size()) {
    throw SolverError("p1_solve: every grid point failed; first error: " + rep.grid.front().error);
  }
  rep.solution = make_solution(s, results[best]->omegas, levels[best]);
  rep.solution.iterations = iterations;
  rep.solution.failed_grid_points = failed;
  return rep;
}

inline BeamformingSolution p1_solve(const Scenario& s, const BeamoptOptions& options = {}) {
  return p1_solve_report(s, options).solution;
}

}  // namespace cogwpt
