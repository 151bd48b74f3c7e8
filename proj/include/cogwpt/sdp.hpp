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
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "cogwpt/common.hpp"

namespace cogwpt {

enum class Sense { le, ge };

/// tr(A W) <= bound or tr(A W) >= bound, A Hermitian.
struct SdpConstraint {
  CMatrix a;
  Sense sense = Sense::le;
  double bound = 0.0;
};

/// maximize tr(C W) + offset subject to the constraints and W PSD.
struct SdpInstance {
  CMatrix c;
  std::vector<SdpConstraint> constraints;
  double offset = 0.0;

  Eigen::Index dimension() const { return c.rows(); }
};

enum class SdpStatus { optimal, infeasible, unbounded };

inline const char* to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::optimal: return "optimal";
    case SdpStatus::infeasible: return "infeasible";
    case SdpStatus::unbounded: return "unbounded";
  }
  return "?";
}

struct SdpOptions {
  double tolerance = 1e-10;  // target on gap and infeasibilities, normalized units
  double accept = 1e-8;      // still accepted as optimal when progress stalls
  int max_iter = 100;
};

struct SdpResult {
  SdpStatus status = SdpStatus::optimal;
  CMatrix w;                // primal solution (zero unless optimal)
  RVector multipliers;      // one nonnegative multiplier per constraint
  double value = 0.0;       // tr(C W) + offset
  double dual_value = 0.0;  // dual bound + offset
  double rel_gap = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  int iterations = 0;
};

/// Inner product Re tr(A^H B); equals Re tr(A B) when A is Hermitian.
template <class A, class B>
inline double hdot(const A& a, const B& b) {
  return (a.conjugate().cwiseProduct(b)).sum().real();
}

inline void validate(const SdpInstance& inst) {
  const auto n = inst.dimension();
  if (n < 1 || inst.c.cols() != n) throw ValidationError("sdp: objective must be square and nonempty");
  auto hermitian = [](const CMatrix& m) {
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * scale;
  };
  if (!hermitian(inst.c)) throw ValidationError("sdp: objective is not Hermitian");
  for (std::size_t k = 0; k < inst.constraints.size(); ++k) {
    const auto& con = inst.constraints[k];
    if (con.a.rows() != n || con.a.cols() != n) {
      throw ValidationError("sdp: constraint " + std::to_string(k) + " has wrong dimension");
    }
    if (!hermitian(con.a)) throw ValidationError("sdp: constraint " + std::to_string(k) + " is not Hermitian");
    if (!std::isfinite(con.bound)) throw ValidationError("sdp: constraint " + std::to_string(k) + " bound");
  }
}

namespace detail {

/// Largest step t in (0, inf] keeping X + t dX positive definite.
template <class Mat>
inline double max_psd_step(const Mat& x, const Mat& dx) {
  Eigen::LLT<Mat> llt(x);
  if (llt.info() != Eigen::Success) return 0.0;
  const Mat l_inv = llt.matrixL().solve(Mat::Identity(x.rows(), x.cols()));
  Mat m = l_inv * dx * l_inv.adjoint();
  m = 0.5 * (m + m.adjoint()).eval();
  const double lo = Eigen::SelfAdjointEigenSolver<Mat>(m, Eigen::EigenvaluesOnly).eigenvalues()(0);
  return lo < 0.0 ? -1.0 / lo : std::numeric_limits<double>::infinity();
}

template <class Vec>
inline double max_positive_step(const Vec& x, const Vec& dx) {
  double t = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    if (dx(k) < 0.0) t = std::min(t, -x(k) / dx(k));
  }
  return t;
}

template <class Mat>
inline double min_eigenvalue(const Mat& m) {
  const Mat h = 0.5 * (m + m.adjoint());
  return Eigen::SelfAdjointEigenSolver<Mat>(h, Eigen::EigenvaluesOnly).eigenvalues()(0);
}

}  // namespace detail

namespace detail {

template <class Mat, class Vec, class RMat>
SdpResult solve_sdp_impl(const SdpInstance& inst, const SdpOptions& options) {
  const auto n = inst.dimension();
  const auto m = static_cast<Eigen::Index>(inst.constraints.size());

  // Normalization.
  std::vector<Mat> a(static_cast<std::size_t>(m));
  Vec b(m), row_scale(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    const auto& con = inst.constraints[static_cast<std::size_t>(k)];
    const double sign = con.sense == Sense::ge ? -1.0 : 1.0;
    double norm = con.a.norm();
    if (!(norm > 0.0)) norm = 1.0;
    row_scale(k) = sign / norm;
    a[static_cast<std::size_t>(k)] = con.a * row_scale(k);
    b(k) = con.bound * row_scale(k);
  }
  double w_scale = m > 0 ? b.cwiseAbs().maxCoeff() : 1.0;
  if (!(w_scale > 0.0)) w_scale = 1.0;
  b /= w_scale;
  double c_scale = inst.c.norm();
  if (!(c_scale > 0.0)) c_scale = 1.0;
  const Mat c = inst.c / c_scale;

  auto a_op = [&](const Mat& w) {
    Vec out(m);
    for (Eigen::Index k = 0; k < m; ++k) out(k) = hdot(a[static_cast<std::size_t>(k)], w);
    return out;
  };
  auto a_adj = [&](const Vec& y) {
    Mat out = Mat::Zero(n, n);
    for (Eigen::Index k = 0; k < m; ++k) out += y(k) * a[static_cast<std::size_t>(k)];
    return out;
  };
  auto herm = [](const Mat& x) -> Mat { return 0.5 * (x + x.adjoint()); };

  const double start = std::max(10.0, std::sqrt(static_cast<double>(n)));
  Mat w = start * Mat::Identity(n, n);
  Mat z = start * Mat::Identity(n, n);
  Vec y = Vec::Constant(m, start);
  Vec s = Vec::Constant(m, start);
  const double b_norm = b.norm();
  const double dof = static_cast<double>(n + m);

  SdpResult res;
  auto finish_optimal = [&](double gap, double pinf, double dinf) {
    res.status = SdpStatus::optimal;
    res.w = CMatrix(herm(w) * w_scale);
    res.multipliers = RVector(m);
    for (Eigen::Index k = 0; k < m; ++k) res.multipliers(k) = y(k) * c_scale * std::abs(row_scale(k));
    res.value = hdot(inst.c, res.w) + inst.offset;
    res.dual_value = c_scale * w_scale * b.dot(y) + inst.offset;
    res.rel_gap = gap;
    res.primal_infeasibility = pinf;
    res.dual_infeasibility = dinf;
    return res;
  };
  double best_score = std::numeric_limits<double>::infinity();

  for (int iter = 1; iter <= options.max_iter; ++iter) {
    res.iterations = iter;
    const Vec rp = b - a_op(w) - s;
    const Mat rd = c + z - a_adj(y);
    const double pobj = hdot(c, w);
    const double dobj = b.dot(y);
    const double compl_gap = hdot(w, z) + y.dot(s);
    const double mu = compl_gap / dof;
    const double denom = std::max({1.0, std::abs(pobj), std::abs(dobj)});
    const double gap = std::max(std::abs(pobj - dobj), compl_gap) / denom;
    const double pinf = rp.norm() / (1.0 + b_norm);
    const double dinf = rd.norm() / 2.0;
    if (gap <= options.tolerance && pinf <= options.tolerance && dinf <= options.tolerance) {
      return finish_optimal(gap, pinf, dinf);
    }
    best_score = std::min(best_score, std::max({gap, pinf, dinf}));

    // Farkas certificates.
    if (m > 0 && dobj < 0.0) {
      const Vec yc = y / -dobj;
      if (min_eigenvalue(a_adj(yc)) >= -1e-8 && pinf > options.tolerance) {
        res.status = SdpStatus::infeasible;
        return res;
      }
    }
    if (pobj > 0.0) {
      const Mat wc = w / pobj;
      const Vec aw = a_op(wc);
      if ((m == 0 || aw.maxCoeff() <= 1e-8) && dinf > options.tolerance) {
        res.status = SdpStatus::unbounded;
        return res;
      }
    }

    Eigen::LLT<Mat> z_llt(z);
    if (z_llt.info() != Eigen::Success) break;
    const Mat z_inv = z_llt.solve(Mat::Identity(n, n));
    std::vector<Mat> w_a_zi(static_cast<std::size_t>(m));
    RMat schur(m, m);
    for (Eigen::Index l = 0; l < m; ++l) w_a_zi[static_cast<std::size_t>(l)] = w * a[static_cast<std::size_t>(l)] * z_inv;
    for (Eigen::Index k = 0; k < m; ++k) {
      for (Eigen::Index l = 0; l < m; ++l) {
        schur(k, l) = hdot(a[static_cast<std::size_t>(k)], w_a_zi[static_cast<std::size_t>(l)]);
      }
      schur(k, k) += s(k) / y(k);
    }
    schur = 0.5 * (schur + schur.transpose()).eval();
    Eigen::LDLT<RMat> schur_ldlt(schur);
    const Mat w_rd_zi = w * rd * z_inv;

    struct Direction {
      Mat dw, dz;
      Vec dy, ds;
    };
    auto direction = [&](const Mat& target, const Vec& lp_target) {
      Direction d;
      Vec rhs(m);
      const Mat kk = target + w_rd_zi;
      for (Eigen::Index k = 0; k < m; ++k) {
        rhs(k) = hdot(a[static_cast<std::size_t>(k)], kk) + lp_target(k) / y(k) - rp(k);
      }
      d.dy = m > 0 ? Vec(schur_ldlt.solve(rhs)) : Vec(0);
      d.dz = a_adj(d.dy) - rd;
      d.dw = herm(target - w * d.dz * z_inv);
      d.ds = (lp_target - s.cwiseProduct(d.dy)).cwiseQuotient(y);
      return d;
    };
    auto steps = [&](const Direction& d) {
      const double tp = std::min(max_psd_step(w, d.dw), max_positive_step(s, d.ds));
      const double td = std::min(max_psd_step(z, d.dz), max_positive_step(y, d.dy));
      return std::pair<double, double>{tp, td};
    };

    // Predictor.
    const Direction aff = direction(-w, -y.cwiseProduct(s));
    const auto [tpa, tda] = steps(aff);
    const double ap = std::min(1.0, tpa), ad = std::min(1.0, tda);
    const double mu_aff = (hdot(w + ap * aff.dw, z + ad * aff.dz) + (y + ad * aff.dy).dot(s + ap * aff.ds)) / dof;
    const double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0);

    // Corrector.
    const Mat target = sigma * mu * z_inv - w - herm(aff.dw * aff.dz * z_inv);
    const Vec lp_target =
        Vec::Constant(m, sigma * mu) - y.cwiseProduct(s) - aff.dy.cwiseProduct(aff.ds);
    const Direction d = direction(target, lp_target);
    const auto [tp, td] = steps(d);
    const double gamma = 0.98;
    const double step_p = std::min(1.0, gamma * tp);
    const double step_d = std::min(1.0, gamma * td);
    if (!(step_p > 1e-14) && !(step_d > 1e-14)) break;
    w = herm(w + step_p * d.dw);
    s += step_p * d.ds;
    z = herm(z + step_d * d.dz);
    y += step_d * d.dy;
  }

  // Stalled or out of iterations: accept at the looser threshold only.
  const Vec rp = b - a_op(w) - s;
  const Mat rd = c + z - a_adj(y);
  const double pobj = hdot(c, w), dobj = b.dot(y);
  const double compl_gap = hdot(w, z) + y.dot(s);
  const double gap = std::max(std::abs(pobj - dobj), compl_gap) / std::max({1.0, std::abs(pobj), std::abs(dobj)});
  const double pinf = rp.norm() / (1.0 + b_norm);
  const double dinf = rd.norm() / 2.0;
  if (gap <= options.accept && pinf <= options.accept && dinf <= options.accept) {
    return finish_optimal(gap, pinf, dinf);
  }
  std::ostringstream msg;
  msg << "sdp: no convergence after " << res.iterations << " iterations (rel gap " << gap
      << ", primal infeasibility " << pinf << ", dual infeasibility " << dinf << ")";
  throw SolverError(msg.str());
}

}  // namespace detail

/// Dense primal-dual interior-point method, complex Hermitian throughout.
///
/// After flipping >= rows the problem is max <C, W> s.t. <A_k, W> + s_k = b_k,
/// s >= 0, W PSD, with dual min b^T y s.t. sum_k y_k A_k - Z = C, y >= 0, Z PSD.
/// Rows, objective and W are rescaled to unit size, the iteration starts from
/// an infeasible interior point and takes HKM search directions with a
/// Mehrotra predictor-corrector. Infeasibility and unboundedness are reported
/// when the iterates yield a Farkas certificate.
inline SdpResult solve_sdp(const SdpInstance& inst, const SdpOptions& options = {}) {
  validate(inst);
  return detail::solve_sdp_impl<CMatrix, RVector, RMatrix>(inst, options);
}

/// Rank-one factor of an SDP solution and the spectrum diagnostics around it.
struct RankOneResult {
  CVector omega;
  double raw_ratio = 0.0;  // lambda_2 / lambda_1 of the solver output
  double ratio = 0.0;      // lambda_2 / lambda_1 after purification
  int reductions = 0;
};

/// Scale the vector so that its largest-magnitude entry is real and positive.
inline CVector fix_phase(CVector v) {
  if (v.size() == 0) return v;
  Eigen::Index k = 0;
  v.cwiseAbs().maxCoeff(&k);
  const double mag = std::abs(v(k));
  if (mag > 0.0) v *= std::conj(v(k)) / mag;
  v(k) = Complex(v(k).real(), 0.0);
  return v;
}

namespace detail {

inline double second_ratio(const RVector& evals_desc) {
  if (evals_desc.size() < 2 || !(evals_desc(0) > 0.0)) return 0.0;
  return std::max(0.0, evals_desc(1)) / evals_desc(0);
}

/// Eigenvalues in descending order with matching eigenvector columns.
inline std::pair<RVector, CMatrix> eig_desc(const CMatrix& w) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (w + w.adjoint()));
  return {es.eigenvalues().reverse(), es.eigenvectors().rowwise().reverse()};
}

}  // namespace detail

/// Rank-one vector w with w w^H achieving the value and constraint levels of W.
///
/// Purification: while W = U U^H has numerical rank r >= 2, pick a nonzero
/// Hermitian r x r direction D with tr(U^H A U D) = 0 for the objective and
/// every constraint (it exists because r^2 exceeds their number), and move to
/// U (I - D / lambda_max(D)) U^H, which drops the rank by at least one.
inline RankOneResult extract_rank_one(const CMatrix& w, const SdpInstance& inst, double rank_tol = 1e-9) {
  const auto n = inst.dimension();
  if (w.rows() != n || w.cols() != n) throw ValidationError("extract_rank_one: dimension mismatch");
  RankOneResult out;
  auto [evals, evecs] = detail::eig_desc(w);
  out.raw_ratio = detail::second_ratio(evals);
  if (!(evals(0) > 0.0)) {
    out.omega = CVector::Zero(n);
    return out;
  }

  std::vector<const CMatrix*> ops{&inst.c};
  for (const auto& con : inst.constraints) ops.push_back(&con.a);
  CMatrix current = w;
  for (int step = 0; step < n; ++step) {
    Eigen::Index r = 0;
    while (r < n && evals(r) > rank_tol * evals(0)) ++r;
    if (r <= 1) break;
    if (static_cast<std::size_t>(r * r) <= ops.size()) {
      std::ostringstream msg;
      msg << "extract_rank_one: no reduction direction; spectrum " << evals.transpose();
      throw SolverError(msg.str());
    }
    const CMatrix u = evecs.leftCols(r) * evals.head(r).cwiseSqrt().asDiagonal();
    // Real coordinates of a Hermitian r x r matrix: diagonal, then (re, im) pairs.
    RMatrix sys(static_cast<Eigen::Index>(ops.size()), r * r);
    for (std::size_t k = 0; k < ops.size(); ++k) {
      const CMatrix bk = u.adjoint() * (*ops[k]) * u;
      Eigen::Index col = 0;
      for (Eigen::Index j = 0; j < r; ++j) sys(static_cast<Eigen::Index>(k), col++) = bk(j, j).real();
      for (Eigen::Index j = 0; j < r; ++j) {
        for (Eigen::Index l = j + 1; l < r; ++l) {
          // tr(B D) picks up 2 Re(B_lj D_jl) from the pair.
          sys(static_cast<Eigen::Index>(k), col++) = 2.0 * bk(l, j).real();
          sys(static_cast<Eigen::Index>(k), col++) = -2.0 * bk(l, j).imag();
        }
      }
    }
    // Row scaling so that no single operator dominates the null-space choice.
    for (Eigen::Index k = 0; k < sys.rows(); ++k) {
      const double rn = sys.row(k).norm();
      if (rn > 0.0) sys.row(k) /= rn;
    }
    Eigen::JacobiSVD<RMatrix> svd(sys, Eigen::ComputeFullV);
    const RVector x = svd.matrixV().col(r * r - 1);
    CMatrix dmat = CMatrix::Zero(r, r);
    Eigen::Index col = 0;
    for (Eigen::Index j = 0; j < r; ++j) dmat(j, j) = x(col++);
    for (Eigen::Index j = 0; j < r; ++j) {
      for (Eigen::Index l = j + 1; l < r; ++l) {
        const Complex v(x(col), x(col + 1));
        col += 2;
        dmat(j, l) = v;
        dmat(l, j) = std::conj(v);
      }
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> des(dmat, Eigen::EigenvaluesOnly);
    double top = des.eigenvalues()(r - 1);
    if (-des.eigenvalues()(0) > top) {
      dmat = -dmat;
      top = -des.eigenvalues()(0);
    }
    const CMatrix shrink = CMatrix::Identity(r, r) - dmat / top;
    current = u * shrink * u.adjoint();
    current = 0.5 * (current + current.adjoint()).eval();
    std::tie(evals, evecs) = detail::eig_desc(current);
    ++out.reductions;
    if (!(evals(0) > 0.0)) {
      std::ostringstream msg;
      msg << "extract_rank_one: purification collapsed; spectrum " << evals.transpose();
      throw SolverError(msg.str());
    }
  }
  out.ratio = detail::second_ratio(evals);
  out.omega = fix_phase(std::sqrt(evals(0)) * evecs.col(0));
  return out;
}

}  // namespace cogwpt
