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

#include "cogwpt/common.hpp"

namespace cogwpt {

/// maximize |g^H w|^2 + coef_f |f^H w|^2 - mu ||w||^2
/// subject to lo <= |f^H w|^2 <= hi and ||w||^2 <= q, with mu >= 0.
struct SpanQcqp {
  double coef_f = 0.0;
  double mu = 0.0;
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  double q = 0.0;
};

struct SpanQcqpResult {
  bool feasible = false;
  CVector omega;
  double value = -std::numeric_limits<double>::infinity();
};

/// Orthonormal frame of span{f, g} used by the closed-form solver: e1 = f / ||f||,
/// e2 the unit residual of g against e1 (absent when g is parallel to f or M = 1).
struct SpanBasis {
  CVector e1, e2;
  double f2 = 0.0;     // ||f||^2
  double abs_a = 0.0;  // |e1^H g|
  double b = 0.0;      // e2^H g, real and nonnegative
  Complex phase{1.0, 0.0};
  bool has_e2 = false;
};

inline SpanBasis make_span_basis(const CVector& g, const CVector& f) {
  SpanBasis sb;
  sb.f2 = f.squaredNorm();
  if (!(sb.f2 > 0.0)) throw ValidationError("span_qcqp: f must be nonzero");
  sb.e1 = f / std::sqrt(sb.f2);
  const Complex a = sb.e1.dot(g);
  const CVector resid = g - a * sb.e1;
  const double b_raw = resid.norm();
  sb.abs_a = std::abs(a);
  sb.phase = sb.abs_a > 0.0 ? a / sb.abs_a : Complex(1.0, 0.0);
  // A residual at rounding level is treated as zero so e2 is never noise.
  sb.has_e2 = f.size() > 1 && b_raw > 1e-12 * std::max(g.norm(), 1e-300);
  sb.b = sb.has_e2 ? b_raw : 0.0;
  sb.e2 = sb.has_e2 ? CVector(resid / b_raw) : CVector::Zero(f.size());
  return sb;
}

/// Optimal amplitudes along e1 and e2; the beam is p * phase * e1 + q * e2.
struct SpanPoint {
  bool feasible = false;
  double p = 0.0;
  double q = 0.0;
  double value = -std::numeric_limits<double>::infinity();
};

/// Exact solution restricted to span{f, g}, which loses nothing: a component
/// orthogonal to both channels only spends power.
///
/// With a = e1^H g and b = e2^H g, the beam p (a / |a|) e1 + q e2 aligns both
/// terms of g^H w, leaving the quadratic form [p q] K [p q]^T over p, q >= 0,
///   K = [[|a|^2 + coef_f ||f||^2 - mu, |a| b], [|a| b, b^2 - mu]].
/// The maximum sits at a KKT point of the region
/// {lo <= ||f||^2 p^2 <= hi, p^2 + q^2 <= q_max}: an edge p = const (two end
/// points or the vertex in q), or an eigenvector of K on the circle.
inline SpanPoint solve_span_qcqp(const SpanBasis& sb, const SpanQcqp& prob) {
  SpanPoint out;
  if (prob.mu < 0.0) throw ValidationError("span_qcqp: mu must be nonnegative");
  const double q_max = std::max(prob.q, 0.0);
  const double p_lo2 = std::max(prob.lo, 0.0) / sb.f2;
  const double p_hi2 = std::min(prob.hi / sb.f2, q_max);
  if (prob.hi < 0.0 || p_lo2 > q_max || p_lo2 > p_hi2) return out;
  out.feasible = true;

  const double k11 = sb.abs_a * sb.abs_a + prob.coef_f * sb.f2 - prob.mu;
  const double k12 = sb.abs_a * sb.b;
  const double k22 = sb.b * sb.b - prob.mu;
  auto consider = [&](double p, double q) {
    if (!sb.has_e2) q = 0.0;
    const double v = k11 * p * p + 2.0 * k12 * p * q + k22 * q * q;
    if (v > out.value) {
      out.value = v;
      out.p = p;
      out.q = q;
    }
  };

  for (double p : {std::sqrt(p_lo2), std::sqrt(p_hi2)}) {
    const double q_room = std::sqrt(std::max(q_max - p * p, 0.0));
    consider(p, 0.0);
    consider(p, q_room);
    if (k22 < 0.0) {
      const double vertex = -k12 * p / k22;
      if (vertex > 0.0 && vertex < q_room) consider(p, vertex);
    }
  }
  if (sb.has_e2) {
    // Stationary points on the circle p^2 + q^2 = q_max.
    const double tr = 0.5 * (k11 + k22);
    const double disc = std::hypot(0.5 * (k11 - k22), k12);
    for (double ev : {tr + disc, tr - disc}) {
      double u1 = k12, u2 = ev - k11;
      if (std::abs(u1) + std::abs(u2) == 0.0) {
        u1 = ev - k22;
        u2 = k12;
      }
      const double nrm = std::hypot(u1, u2);
      if (!(nrm > 0.0)) continue;
      u1 /= nrm;
      u2 /= nrm;
      if (u1 < 0.0 || (u1 == 0.0 && u2 < 0.0)) {
        u1 = -u1;
        u2 = -u2;
      }
      if (u2 < 0.0) continue;
      const double p = std::sqrt(q_max) * u1, q = std::sqrt(q_max) * u2;
      if (p * p >= p_lo2 && p * p <= p_hi2) consider(p, q);
    }
  }
  return out;
}

inline CVector span_beam(const SpanBasis& sb, double p, double q) {
  CVector w = (p * sb.phase) * sb.e1;
  if (sb.has_e2 && q != 0.0) w += q * sb.e2;
  return w;
}

inline SpanQcqpResult solve_span_qcqp(const CVector& g, const CVector& f, const SpanQcqp& prob) {
  const auto sb = make_span_basis(g, f);
  const auto pt = solve_span_qcqp(sb, prob);
  SpanQcqpResult out;
  out.feasible = pt.feasible;
  if (!pt.feasible) return out;
  out.omega = span_beam(sb, pt.p, pt.q);
  // Report the value of the vector actually returned.
  out.value = std::norm(g.dot(out.omega)) + prob.coef_f * std::norm(f.dot(out.omega)) -
              prob.mu * out.omega.squaredNorm();
  return out;
}

}  // namespace cogwpt
