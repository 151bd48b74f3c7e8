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

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cogwpt/common.hpp"
#include "cogwpt/rng.hpp"

namespace cogwpt {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// Node placement and the path-loss law chi * (d / d0)^(-kappa).
struct Geometry {
  Point s_et;  // secondary energy transmitter (M antennas)
  Point s_er;  // secondary energy receiver
  Point p_it;  // primary information transmitter
  Point p_ir;  // primary information receiver
  double chi = 1e-3;  // linear gain at the reference distance
  double d0 = 1.0;
  double kappa = 3.0;

  double path_loss(const Point& a, const Point& b) const {
    return chi * std::pow(distance(a, b) / d0, -kappa);
  }

  void validate() const {
    const std::array<std::pair<const char*, Point>, 4> nodes{{
        {"s_et", s_et}, {"s_er", s_er}, {"p_it", p_it}, {"p_ir", p_ir}}};
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      for (std::size_t j = i + 1; j < nodes.size(); ++j) {
        if (!(distance(nodes[i].second, nodes[j].second) > 0.0)) {
          throw ValidationError(std::string("geometry: nodes ") + nodes[i].first + " and " +
                                nodes[j].first + " coincide");
        }
      }
    }
    if (!(chi > 0.0)) throw ValidationError("geometry: chi must be positive");
    if (!(d0 > 0.0)) throw ValidationError("geometry: d0 must be positive");
    if (!(kappa >= 0.0)) throw ValidationError("geometry: kappa must be nonnegative");
  }
};

/// Power and interference budgets of one problem instance (all in watts).
struct Budgets {
  double sigma2 = 1e-9;
  double p_sum = 3.2;
  double q_sum = 6.4;
  double q_peak = 0.1;
  double gamma = 1.28e-6;
};

/// Reference deployment: S-ET (0,0), S-ER (0,5), P-IT (0,2.5), P-IR (5,0),
/// chi = -30 dB, d0 = 1 m, kappa = 3.
inline Geometry reference_geometry() {
  Geometry g;
  g.s_et = {0.0, 0.0};
  g.s_er = {0.0, 5.0};
  g.p_it = {0.0, 2.5};
  g.p_ir = {5.0, 0.0};
  g.chi = 1e-3;
  g.d0 = 1.0;
  g.kappa = 3.0;
  return g;
}

inline Budgets reference_budgets() { return Budgets{}; }

inline constexpr int kReferenceSubcarriers = 64;
inline constexpr int kReferenceAntennas = 4;

/// One problem instance: channels plus budgets.
struct Scenario {
  int n_subcarriers = 0;
  int n_antennas = 0;
  std::vector<double> h;    // P-IT -> P-IR power gain per SC
  std::vector<double> phi;  // P-IT -> S-ER power gain per SC
  std::vector<CVector> g;   // S-ET -> S-ER channel per SC
  std::vector<CVector> f;   // S-ET -> P-IR channel per SC
  double sigma2 = 0.0;
  double p_sum = 0.0;
  double q_sum = 0.0;
  double q_peak = 0.0;
  double gamma = 0.0;

  std::size_t size() const { return static_cast<std::size_t>(n_subcarriers); }

  Budgets budgets() const { return {sigma2, p_sum, q_sum, q_peak, gamma}; }

  void set_budgets(const Budgets& b) {
    sigma2 = b.sigma2;
    p_sum = b.p_sum;
    q_sum = b.q_sum;
    q_peak = b.q_peak;
    gamma = b.gamma;
  }

  void validate() const {
    if (n_subcarriers <= 0) throw ValidationError("scenario: n_subcarriers must be positive");
    if (n_antennas <= 0) throw ValidationError("scenario: n_antennas must be positive");
    const auto n = size();
    if (h.size() != n || phi.size() != n || g.size() != n || f.size() != n) {
      throw ValidationError("scenario: channel arrays must have n_subcarriers entries");
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!(h[i] > 0.0) || !std::isfinite(h[i])) {
        throw ValidationError("scenario: h[" + std::to_string(i) + "] must be positive");
      }
      if (!(phi[i] > 0.0) || !std::isfinite(phi[i])) {
        throw ValidationError("scenario: phi[" + std::to_string(i) + "] must be positive");
      }
      if (g[i].size() != n_antennas || f[i].size() != n_antennas) {
        throw ValidationError("scenario: g/f[" + std::to_string(i) + "] must have n_antennas entries");
      }
      if (!(f[i].squaredNorm() > 0.0)) {
        throw ValidationError("scenario: f[" + std::to_string(i) + "] must be nonzero");
      }
      if (!g[i].allFinite() || !f[i].allFinite()) {
        throw ValidationError("scenario: non-finite channel entry on SC " + std::to_string(i));
      }
    }
    if (!(sigma2 > 0.0)) throw ValidationError("scenario: sigma2 must be positive");
    if (!(p_sum > 0.0)) throw ValidationError("scenario: p_sum must be positive");
    if (!(q_sum >= 0.0)) throw ValidationError("scenario: q_sum must be nonnegative");
    if (!(q_peak >= 0.0)) throw ValidationError("scenario: q_peak must be nonnegative");
    if (!(gamma >= 0.0)) throw ValidationError("scenario: gamma must be nonnegative");
  }

  bool operator==(const Scenario& o) const {
    return n_subcarriers == o.n_subcarriers && n_antennas == o.n_antennas && h == o.h &&
           phi == o.phi && g == o.g && f == o.f && sigma2 == o.sigma2 && p_sum == o.p_sum &&
           q_sum == o.q_sum && q_peak == o.q_peak && gamma == o.gamma;
  }
};

// Stream ids of the counter-based generator, one per link.
namespace streams {
inline constexpr std::uint32_t kSetSer = 1;  // g
inline constexpr std::uint32_t kSetPir = 2;  // f
inline constexpr std::uint32_t kPitPir = 3;  // h
inline constexpr std::uint32_t kPitSer = 4;  // phi
}  // namespace streams

/// Draw a Rayleigh-fading instance over `geometry`.
///
/// Vector entries are CN(0, L) with L the link path loss; scalar gains are
/// |CN(0, L)|^2. Entry (sc, antenna) always uses counter sc * 1024 + antenna of
/// its link stream, so the channel for M antennas is a prefix of the channel
/// for M' > M antennas, and moving a node only rescales the same fading draws.
inline Scenario generate_scenario(const Geometry& geometry, const Budgets& budgets, int n_subcarriers,
                                  int n_antennas, std::uint64_t seed) {
  geometry.validate();
  if (n_subcarriers <= 0) throw ValidationError("generate_scenario: n_subcarriers must be positive");
  if (n_antennas <= 0 || n_antennas > 1024) {
    throw ValidationError("generate_scenario: n_antennas must be in [1, 1024]");
  }
  const CounterRng rng(seed);
  const double lg = geometry.path_loss(geometry.s_et, geometry.s_er);
  const double lf = geometry.path_loss(geometry.s_et, geometry.p_ir);
  const double lh = geometry.path_loss(geometry.p_it, geometry.p_ir);
  const double lphi = geometry.path_loss(geometry.p_it, geometry.s_er);

  Scenario s;
  s.n_subcarriers = n_subcarriers;
  s.n_antennas = n_antennas;
  s.set_budgets(budgets);
  s.h.resize(s.size());
  s.phi.resize(s.size());
  s.g.assign(s.size(), CVector(n_antennas));
  s.f.assign(s.size(), CVector(n_antennas));
  for (int i = 0; i < n_subcarriers; ++i) {
    const auto base = static_cast<std::uint32_t>(i) * 1024U;
    s.h[i] = lh * std::norm(rng.unit_cscg(streams::kPitPir, base));
    s.phi[i] = lphi * std::norm(rng.unit_cscg(streams::kPitSer, base));
    for (int m = 0; m < n_antennas; ++m) {
      const auto k = base + static_cast<std::uint32_t>(m);
      s.g[i](m) = std::sqrt(lg) * rng.unit_cscg(streams::kSetSer, k);
      s.f[i](m) = std::sqrt(lf) * rng.unit_cscg(streams::kSetPir, k);
    }
  }
  s.validate();
  return s;
}

// ---------------------------------------------------------------------------
// Scenario files: JSON, complex numbers as [re, im] pairs.

inline constexpr const char* kScenarioFormat = "cogwpt.scenario";
inline constexpr int kScenarioVersion = 1;

namespace detail {

inline const nlohmann::json& require(const nlohmann::json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  return j.at(key);
}

inline double as_number(const nlohmann::json& j, const std::string& field) {
  if (!j.is_number()) throw ParseError("field '" + field + "': expected a number");
  return j.get<double>();
}

inline int as_int(const nlohmann::json& j, const std::string& field) {
  if (!j.is_number_integer()) throw ParseError("field '" + field + "': expected an integer");
  return j.get<int>();
}

inline std::vector<double> as_real_array(const nlohmann::json& j, const std::string& field) {
  if (!j.is_array()) throw ParseError("field '" + field + "': expected an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_number(j[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

inline nlohmann::json complex_to_json(const CVector& v) {
  auto arr = nlohmann::json::array();
  for (Eigen::Index m = 0; m < v.size(); ++m) arr.push_back({v(m).real(), v(m).imag()});
  return arr;
}

inline CVector complex_from_json(const nlohmann::json& j, const std::string& field) {
  if (!j.is_array()) throw ParseError("field '" + field + "': expected an array of [re, im] pairs");
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t m = 0; m < j.size(); ++m) {
    const auto& e = j[m];
    const auto name = field + "[" + std::to_string(m) + "]";
    if (!e.is_array() || e.size() != 2) throw ParseError("field '" + name + "': expected [re, im]");
    v(static_cast<Eigen::Index>(m)) = {as_number(e[0], name), as_number(e[1], name)};
  }
  return v;
}

inline std::vector<CVector> complex_rows(const nlohmann::json& j, const std::string& field) {
  if (!j.is_array()) throw ParseError("field '" + field + "': expected an array");
  std::vector<CVector> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(complex_from_json(j[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace detail

inline nlohmann::json scenario_to_json(const Scenario& s) {
  nlohmann::json j;
  j["format"] = kScenarioFormat;
  j["version"] = kScenarioVersion;
  j["n_subcarriers"] = s.n_subcarriers;
  j["n_antennas"] = s.n_antennas;
  j["sigma2"] = s.sigma2;
  j["p_sum"] = s.p_sum;
  j["q_sum"] = s.q_sum;
  j["q_peak"] = s.q_peak;
  j["gamma"] = s.gamma;
  j["h"] = s.h;
  j["phi"] = s.phi;
  auto g = nlohmann::json::array();
  auto f = nlohmann::json::array();
  for (std::size_t i = 0; i < s.size(); ++i) {
    g.push_back(detail::complex_to_json(s.g[i]));
    f.push_back(detail::complex_to_json(s.f[i]));
  }
  j["g"] = std::move(g);
  j["f"] = std::move(f);
  return j;
}

/// Parse and validate. Errors name the offending field.
inline Scenario scenario_from_json(const nlohmann::json& j) {
  using detail::require;
  if (!j.is_object()) throw ParseError("scenario: expected a JSON object");
  if (j.contains("format") && j.at("format") != kScenarioFormat) {
    throw ParseError("field 'format': expected \"" + std::string(kScenarioFormat) + "\"");
  }
  if (j.contains("version") && detail::as_int(j.at("version"), "version") != kScenarioVersion) {
    throw ParseError("field 'version': unsupported scenario version");
  }
  Scenario s;
  s.n_subcarriers = detail::as_int(require(j, "n_subcarriers"), "n_subcarriers");
  s.n_antennas = detail::as_int(require(j, "n_antennas"), "n_antennas");
  s.sigma2 = detail::as_number(require(j, "sigma2"), "sigma2");
  s.p_sum = detail::as_number(require(j, "p_sum"), "p_sum");
  s.q_sum = detail::as_number(require(j, "q_sum"), "q_sum");
  s.q_peak = detail::as_number(require(j, "q_peak"), "q_peak");
  s.gamma = detail::as_number(require(j, "gamma"), "gamma");
  s.h = detail::as_real_array(require(j, "h"), "h");
  s.phi = detail::as_real_array(require(j, "phi"), "phi");
  s.g = detail::complex_rows(require(j, "g"), "g");
  s.f = detail::complex_rows(require(j, "f"), "f");
  s.validate();
  return s;
}

inline void save_scenario(const Scenario& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << scenario_to_json(s).dump(1) << '\n';
  if (!out) throw Error("failed writing '" + path + "'");
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("'" + path + "': " + e.what());
  }
  return scenario_from_json(j);
}

}  // namespace cogwpt
