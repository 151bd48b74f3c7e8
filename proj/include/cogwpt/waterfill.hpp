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
#include <span>
#include <utility>
#include <vector>

#include "cogwpt/common.hpp"
#include "cogwpt/scenario.hpp"

namespace cogwpt {

/// Primary transmitter's reaction: water level and per-SC powers.
struct WaterfillResponse {
  double lambda = 0.0;
  std::vector<double> p;
};

/// Power received at the S-ER, split by source.
struct PowerBreakdown {
  double direct = 0.0;    // sum_i |g_i^H w_i|^2, from the S-ET
  double reactive = 0.0;  // sum_i P_i phi_i, from the P-IT
  double total = 0.0;
};

/// Water-filling under per-SC interference: P_i = (lambda - (I_i + sigma2) / h_i)^+
/// with sum_i P_i = p_sum.
///
/// The level is bracketed in [min_i n_i, min_i n_i + p_sum] (n_i the noise
/// floor of SC i), bisected, then snapped to the closed form
/// (p_sum + sum_A n_i) / |A| of the active set A found by the bisection.
inline WaterfillResponse waterfill(std::span<const double> interference, std::span<const double> h,
                                   double sigma2, double p_sum) {
  const std::size_t n = h.size();
  if (interference.size() != n || n == 0) throw ValidationError("waterfill: dimension mismatch");
  if (!(p_sum > 0.0)) throw ValidationError("waterfill: p_sum must be positive");

  std::vector<double> floor(n);
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    if (!(interference[i] >= 0.0)) throw ValidationError("waterfill: interference must be nonnegative");
    floor[i] = (interference[i] + sigma2) / h[i];
    lo = std::min(lo, floor[i]);
  }
  if (!std::isfinite(lo)) throw ValidationError("waterfill: every subcarrier is flooded");

  auto poured = [&](double level) {
    double total = 0.0;
    for (double fl : floor) total += positive_part(level - fl);
    return total;
  };

  double hi = lo + p_sum;
  const double tol = 1e-12 * (hi - lo);
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (poured(mid) < p_sum ? lo : hi) = mid;
  }
  double level = 0.5 * (lo + hi);

  // Snap to the exact level of the identified active set when it is consistent.
  double active_sum = 0.0;
  std::size_t active = 0;
  for (double fl : floor) {
    if (fl < level) {
      active_sum += fl;
      ++active;
    }
  }
  if (active > 0) {
    const double exact = (p_sum + active_sum) / static_cast<double>(active);
    bool consistent = true;
    for (double fl : floor) {
      if ((fl < level) != (fl < exact)) {
        consistent = false;
        break;
      }
    }
    if (consistent) level = exact;
  }

  WaterfillResponse r;
  r.lambda = level;
  r.p.resize(n);
  for (std::size_t i = 0; i < n; ++i) r.p[i] = positive_part(level - floor[i]);
  return r;
}

/// Interference |f_i^H w_i|^2 caused at the P-IR on every SC.
inline std::vector<double> interference_profile(const Scenario& s, const Beamformers& omegas) {
  std::vector<double> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = abs2_inner(s.f[i], omegas[i]);
  return out;
}

inline void check_beamformers(const Scenario& s, const Beamformers& omegas) {
  if (omegas.size() != s.size()) throw ValidationError("beamformers: expected one vector per subcarrier");
  for (const auto& w : omegas) {
    if (w.size() != s.n_antennas) throw ValidationError("beamformers: expected n_antennas entries per vector");
  }
}

/// Received RF power at the S-ER together with the primary's reaction.
inline std::pair<PowerBreakdown, WaterfillResponse> received_power(const Scenario& s,
                                                                   const Beamformers& omegas) {
  check_beamformers(s, omegas);
  const auto interference = interference_profile(s, omegas);
  auto response = waterfill(interference, s.h, s.sigma2, s.p_sum);
  PowerBreakdown b;
  for (std::size_t i = 0; i < s.size(); ++i) {
    b.direct += abs2_inner(s.g[i], omegas[i]);
    b.reactive += response.p[i] * s.phi[i];
  }
  b.total = b.direct + b.reactive;
  return {b, std::move(response)};
}

/// Primary sum rate (bps/Hz, summed over SCs) at the water-filling response.
inline double primary_sum_rate(const Scenario& s, const Beamformers& omegas) {
  check_beamformers(s, omegas);
  const auto interference = interference_profile(s, omegas);
  const auto response = waterfill(interference, s.h, s.sigma2, s.p_sum);
  double rate = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    rate += std::log2(1.0 + s.h[i] * response.p[i] / (interference[i] + s.sigma2));
  }
  return rate;
}

inline Beamformers zero_beamformers(const Scenario& s) {
  return Beamformers(s.size(), CVector::Zero(s.n_antennas));
}

}  // namespace cogwpt
