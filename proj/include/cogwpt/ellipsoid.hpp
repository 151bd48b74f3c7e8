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
#include <concepts>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "cogwpt/common.hpp"

namespace cogwpt {

/// Ellipsoid {y : (y - c)^T P^{-1} (y - c) <= 1}.
struct EllipsoidState {
  RVector center;
  RMatrix shape;  // P, symmetric positive definite

  int dimension() const { return static_cast<int>(center.size()); }

  static EllipsoidState ball(const RVector& center, double radius) {
    if (center.size() < 1) throw ValidationError("ellipsoid: dimension must be at least 1");
    if (!(radius > 0.0)) throw ValidationError("ellipsoid: radius must be positive");
    const auto n = center.size();
    return {center, RMatrix::Identity(n, n) * radius * radius};
  }

  /// log of the volume up to the constant of the unit ball.
  double log_volume() const { return 0.5 * std::log(shape.determinant()); }
};

/// Sign restriction of one dual coordinate.
enum class SignConstraint { free, nonnegative };

struct OracleResult {
  double value = 0.0;
  RVector subgradient;
};

enum class StopReason {
  predicate,  // caller's stop predicate fired
  converged,  // value-gap bound fell below tolerance
  max_iter,
};

inline const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::predicate: return "predicate";
    case StopReason::converged: return "converged";
    case StopReason::max_iter: return "max_iter";
  }
  return "?";
}

struct EllipsoidOptions {
  double tolerance = 1e-7;  // on best_value - lower_bound
  int max_iter = 5000;
};

struct EllipsoidResult {
  RVector best_point;
  double best_value = std::numeric_limits<double>::infinity();
  double lower_bound = -std::numeric_limits<double>::infinity();
  StopReason reason = StopReason::max_iter;
  int iterations = 0;
  int oracle_calls = 0;
  EllipsoidState final_state;

  double gap() const { return best_value - lower_bound; }
};

/// Raised when the shape matrix stops being positive definite.
class EllipsoidError : public SolverError {
 public:
  EllipsoidError(const std::string& what, int iteration)
      : SolverError(what + " (iteration " + std::to_string(iteration) + ")"), iteration_(iteration) {}
  int iteration() const { return iteration_; }

 private:
  int iteration_;
};

namespace detail {

// Keeps {y : a^T (y - c) + depth <= 0} with depth >= 0. Returns false when the
// kept part of the ellipsoid is empty or a single point (alpha >= 1).
inline bool ellipsoid_cut(EllipsoidState& e, const RVector& a, double depth, int iter) {
  const double n = static_cast<double>(e.dimension());
  const double scale = a.cwiseAbs().maxCoeff();
  if (!(scale > 0.0) || !std::isfinite(scale)) throw EllipsoidError("ellipsoid: invalid cut normal", iter);
  const RVector an = a / scale;
  const RVector pa = e.shape * an;
  const double quad = an.dot(pa);
  if (!(quad > 0.0) || !std::isfinite(quad)) {
    throw EllipsoidError("ellipsoid: shape matrix lost positive definiteness", iter);
  }
  const double norm_a = std::sqrt(quad);
  const double alpha = depth / (scale * norm_a);
  if (alpha >= 1.0) return false;
  const RVector b = pa / norm_a;
  if (e.dimension() == 1) {
    e.center -= 0.5 * (1.0 + alpha) * b;
    e.shape *= 0.25 * (1.0 - alpha) * (1.0 - alpha);
  } else {
    e.center -= (1.0 + n * alpha) / (n + 1.0) * b;
    const double shrink = n * n * (1.0 - alpha * alpha) / (n * n - 1.0);
    const double rank1 = 2.0 * (1.0 + n * alpha) / ((n + 1.0) * (1.0 + alpha));
    e.shape = shrink * (e.shape - rank1 * b * b.transpose());
    e.shape = 0.5 * (e.shape + e.shape.transpose()).eval();
  }
  for (Eigen::Index k = 0; k < e.shape.rows(); ++k) {
    if (!(e.shape(k, k) > 0.0) || !std::isfinite(e.shape(k, k))) {
      throw EllipsoidError("ellipsoid: shape matrix lost positive definiteness", iter);
    }
  }
  return true;
}

}  // namespace detail

/// Minimize a convex, possibly non-differentiable function with the ellipsoid
/// method.
///
/// `oracle(x)` returns the value and one subgradient at x; it is only called at
/// points satisfying `signs`. Sign restrictions are enforced with deep cuts on
/// the violated coordinate, never by projection. Objective cuts are deep cuts
/// at the best value seen so far. `stop(value, state)` is checked after every
/// oracle call.
///
/// Invariant: min over the initial ellipsoid >= lower_bound, provided a
/// minimizer lies inside it.
template <class Oracle, class Stop>
  requires std::predicate<Stop&, double, const EllipsoidState&>
EllipsoidResult ellipsoid_minimize(Oracle&& oracle, EllipsoidState init,
                                   std::span<const SignConstraint> signs, Stop&& stop,
                                   const EllipsoidOptions& options = {}) {
  const int n = init.dimension();
  if (n < 1) throw ValidationError("ellipsoid: dimension must be at least 1");
  if (init.shape.rows() != n || init.shape.cols() != n) throw ValidationError("ellipsoid: shape dimension mismatch");
  if (!signs.empty() && static_cast<int>(signs.size()) != n) throw ValidationError("ellipsoid: sign constraint count");

  EllipsoidResult res;
  res.best_point = init.center;
  EllipsoidState e = std::move(init);

  for (int iter = 0; iter < options.max_iter; ++iter) {
    res.iterations = iter + 1;

    // Feasibility cut on the most violated sign restriction.
    int violated = -1;
    double worst = 0.0;
    for (int k = 0; k < static_cast<int>(signs.size()); ++k) {
      if (signs[k] == SignConstraint::nonnegative && e.center(k) < worst) {
        worst = e.center(k);
        violated = k;
      }
    }
    if (violated >= 0) {
      RVector a = RVector::Zero(n);
      a(violated) = -1.0;
      if (!detail::ellipsoid_cut(e, a, -worst, iter)) {
        // No feasible point left: the best point found so far stands.
        res.reason = StopReason::converged;
        break;
      }
      continue;
    }

    OracleResult o = oracle(static_cast<const RVector&>(e.center));
    ++res.oracle_calls;
    if (o.subgradient.size() != n) throw ValidationError("ellipsoid: oracle subgradient dimension");
    if (o.value < res.best_value) {
      res.best_value = o.value;
      res.best_point = e.center;
    }
    if (stop(o.value, static_cast<const EllipsoidState&>(e))) {
      res.reason = StopReason::predicate;
      break;
    }

    const double gnorm = o.subgradient.cwiseAbs().maxCoeff();
    if (!(gnorm > 0.0)) {
      res.lower_bound = std::max(res.lower_bound, o.value);
      res.reason = StopReason::converged;
      break;
    }
    const RVector gs = o.subgradient / gnorm;
    const double spread = gnorm * std::sqrt(gs.dot(e.shape * gs));
    res.lower_bound = std::max(res.lower_bound, std::min(res.best_value, o.value - spread));
    if (res.best_value - res.lower_bound <= options.tolerance) {
      res.reason = StopReason::converged;
      break;
    }
    if (!detail::ellipsoid_cut(e, o.subgradient, o.value - res.best_value, iter)) {
      res.lower_bound = std::max(res.lower_bound, res.best_value);
      res.reason = StopReason::converged;
      break;
    }
  }
  res.final_state = std::move(e);
  return res;
}

/// Overload without an early-stop predicate.
template <class Oracle>
EllipsoidResult ellipsoid_minimize(Oracle&& oracle, EllipsoidState init,
                                   std::span<const SignConstraint> signs,
                                   const EllipsoidOptions& options = {}) {
  return ellipsoid_minimize(std::forward<Oracle>(oracle), std::move(init), signs,
                            [](double, const EllipsoidState&) { return false; }, options);
}

}  // namespace cogwpt
