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

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace cogwpt {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

/// Per-subcarrier beamforming vectors, one complex vector of length M per SC.
using Beamformers = std::vector<CVector>;

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates a documented invariant (bad dimensions, negative budget, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Malformed scenario or config file. The message names the offending field.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// An iterative solver failed to produce a trustworthy answer.
class SolverError : public Error {
 public:
  using Error::Error;
};

inline double positive_part(double x) { return x > 0.0 ? x : 0.0; }

inline double sqr(double x) { return x * x; }

/// |a^H b|^2 for complex vectors.
inline double abs2_inner(const CVector& a, const CVector& b) { return std::norm(a.dot(b)); }

}  // namespace cogwpt
