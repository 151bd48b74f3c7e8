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
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "cogwpt/beamopt.hpp"
#include "cogwpt/benchmarks.hpp"
#include "cogwpt/parallel.hpp"
#include "cogwpt/scenario.hpp"
#include "cogwpt/solution.hpp"

namespace cogwpt {

// ---------------------------------------------------------------------------
// Experiment configs

/// Everything needed to materialize scenarios and run the solvers.
struct ExperimentConfig {
  Geometry geometry = reference_geometry();
  Budgets budgets = reference_budgets();
  int n_subcarriers = kReferenceSubcarriers;
  int n_antennas = kReferenceAntennas;
  BeamoptOptions solver;
};

namespace detail {

inline nlohmann::json point_to_json(const Point& p) { return nlohmann::json::array({p.x, p.y}); }

inline Point point_from_json(const nlohmann::json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2) throw ParseError("field '" + field + "': expected [x, y]");
  return {as_number(j[0], field), as_number(j[1], field)};
}

// Visit the keys of a section; unknown keys are rejected so typos in
// overrides do not pass silently.
template <class Fn>
void for_each_field(const nlohmann::json& j, const std::string& section, Fn&& fn) {
  if (!j.is_object()) throw ParseError("field '" + section + "': expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string field = section.empty() ? it.key() : section + "." + it.key();
    if (!fn(it.key(), it.value(), field)) throw ParseError("unknown field '" + field + "'");
  }
}

}  // namespace detail

inline nlohmann::json config_to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["geometry"] = {{"s_et", detail::point_to_json(c.geometry.s_et)},
                   {"s_er", detail::point_to_json(c.geometry.s_er)},
                   {"p_it", detail::point_to_json(c.geometry.p_it)},
                   {"p_ir", detail::point_to_json(c.geometry.p_ir)},
                   {"chi", c.geometry.chi},
                   {"d0", c.geometry.d0},
                   {"kappa", c.geometry.kappa}};
  j["budgets"] = {{"sigma2", c.budgets.sigma2}, {"p_sum", c.budgets.p_sum}, {"q_sum", c.budgets.q_sum},
                  {"q_peak", c.budgets.q_peak}, {"gamma", c.budgets.gamma}};
  j["n_subcarriers"] = c.n_subcarriers;
  j["n_antennas"] = c.n_antennas;
  j["solver"] = {{"lambda_grid", c.solver.grid_points},
                 {"method", to_string(c.solver.method)},
                 {"tolerance", c.solver.tolerance},
                 {"jobs", c.solver.jobs}};
  return j;
}

/// Parse a config. "geometry" and "budgets" are required sections; fields
/// left out inside them keep their reference values.
inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  using detail::as_int;
  using detail::as_number;
  if (!j.is_object()) throw ParseError("config: expected a JSON object");
  ExperimentConfig c;
  detail::require(j, "geometry");
  detail::require(j, "budgets");
  detail::for_each_field(j, "", [&](const std::string& key, const nlohmann::json& v, const std::string& field) {
    if (key == "geometry") {
      detail::for_each_field(v, field, [&](const std::string& k, const nlohmann::json& x, const std::string& f) {
        if (k == "s_et") c.geometry.s_et = detail::point_from_json(x, f);
        else if (k == "s_er") c.geometry.s_er = detail::point_from_json(x, f);
        else if (k == "p_it") c.geometry.p_it = detail::point_from_json(x, f);
        else if (k == "p_ir") c.geometry.p_ir = detail::point_from_json(x, f);
        else if (k == "chi") c.geometry.chi = as_number(x, f);
        else if (k == "d0") c.geometry.d0 = as_number(x, f);
        else if (k == "kappa") c.geometry.kappa = as_number(x, f);
        else return false;
        return true;
      });
    } else if (key == "budgets") {
      detail::for_each_field(v, field, [&](const std::string& k, const nlohmann::json& x, const std::string& f) {
        if (k == "sigma2") c.budgets.sigma2 = as_number(x, f);
        else if (k == "p_sum") c.budgets.p_sum = as_number(x, f);
        else if (k == "q_sum") c.budgets.q_sum = as_number(x, f);
        else if (k == "q_peak") c.budgets.q_peak = as_number(x, f);
        else if (k == "gamma") c.budgets.gamma = as_number(x, f);
        else return false;
        return true;
      });
    } else if (key == "solver") {
      detail::for_each_field(v, field, [&](const std::string& k, const nlohmann::json& x, const std::string& f) {
        if (k == "lambda_grid") c.solver.grid_points = as_int(x, f);
        else if (k == "tolerance") c.solver.tolerance = as_number(x, f);
        else if (k == "jobs") c.solver.jobs = as_int(x, f);
        else if (k == "method") {
          if (!x.is_string()) throw ParseError("field '" + f + "': expected a string");
          try {
            c.solver.method = parse_subproblem_method(x.get<std::string>());
          } catch (const ValidationError& e) {
            throw ParseError("field '" + f + "': " + e.what());
          }
        } else return false;
        return true;
      });
    } else if (key == "n_subcarriers") {
      c.n_subcarriers = as_int(v, field);
    } else if (key == "n_antennas") {
      c.n_antennas = as_int(v, field);
    } else {
      return false;
    }
    return true;
  });

  auto check = [](bool ok, const char* field, const char* what) {
    if (!ok) throw ParseError(std::string("field '") + field + "': " + what);
  };
  check(c.n_subcarriers > 0, "n_subcarriers", "must be positive");
  check(c.n_antennas > 0 && c.n_antennas <= 1024, "n_antennas", "must be in [1, 1024]");
  check(c.budgets.sigma2 > 0.0, "budgets.sigma2", "must be positive");
  check(c.budgets.p_sum > 0.0, "budgets.p_sum", "must be positive");
  check(c.budgets.q_sum >= 0.0, "budgets.q_sum", "must be nonnegative");
  check(c.budgets.q_peak >= 0.0, "budgets.q_peak", "must be nonnegative");
  check(c.budgets.gamma >= 0.0, "budgets.gamma", "must be nonnegative");
  check(c.solver.grid_points >= 2, "solver.lambda_grid", "must be at least 2");
  check(c.solver.tolerance > 0.0, "solver.tolerance", "must be positive");
  check(c.solver.jobs >= 0, "solver.jobs", "must be nonnegative");
  try {
    c.geometry.validate();
  } catch (const ValidationError& e) {
    throw ParseError(e.what());
  }
  return c;
}

/// Apply one "dotted.key=value" override. The value is read as JSON when it
/// parses (numbers, arrays, booleans) and as a plain string otherwise.
inline void apply_override(nlohmann::json& j, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ParseError("override '" + assignment + "': expected key=value");
  }
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  nlohmann::json value = nlohmann::json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  nlohmann::json* node = &j;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty()) throw ParseError("override '" + assignment + "': empty key segment");
    if (!node->is_object()) throw ParseError("override '" + assignment + "': '" + key + "' is not inside an object");
    if (dot == std::string::npos) {
      (*node)[key] = std::move(value);
      return;
    }
    node = &(*node)[key];
    if (node->is_null()) *node = nlohmann::json::object();
    start = dot + 1;
  }
}

/// Read a config file (or the reference config when `path` is empty) and
/// apply the overrides in order.
inline ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {}) {
  nlohmann::json j;
  if (path.empty()) {
    j = config_to_json(ExperimentConfig{});
  } else {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "' for reading");
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError("'" + path + "': " + e.what());
    }
  }
  for (const auto& o : overrides) apply_override(j, o);
  return config_from_json(j);
}

inline Scenario make_scenario(const ExperimentConfig& c, std::uint64_t seed) {
  return generate_scenario(c.geometry, c.budgets, c.n_subcarriers, c.n_antennas, seed);
}

// ---------------------------------------------------------------------------
// Schemes

enum class Scheme { proposed, zf, mrt, conventional };

inline const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::proposed: return "proposed";
    case Scheme::zf: return "zf";
    case Scheme::mrt: return "mrt";
    case Scheme::conventional: return "conventional";
  }
  return "?";
}

inline Scheme parse_scheme(const std::string& name) {
  if (name == "proposed") return Scheme::proposed;
  if (name == "zf") return Scheme::zf;
  if (name == "mrt") return Scheme::mrt;
  if (name == "conventional") return Scheme::conventional;
  throw ValidationError("unknown scheme '" + name + "' (expected proposed, zf, mrt or conventional)");
}

inline std::vector<Scheme> all_schemes() {
  return {Scheme::proposed, Scheme::zf, Scheme::mrt, Scheme::conventional};
}

/// Outcome of one scheme on one scenario.
struct SchemeRun {
  std::string status = "ok";  // ok | infeasible | failed
  std::string message;
  BeamformingSolution solution;
  std::optional<P1Report> report;  // proposed only
  double wall_ms = 0.0;
};

/// Run a scheme. ZF needs M >= 2; below that the run is marked infeasible.
/// Solver failures are reported in the run instead of thrown.
inline SchemeRun run_scheme(const Scenario& s, Scheme scheme, const BeamoptOptions& options) {
  SchemeRun run;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    switch (scheme) {
      case Scheme::proposed:
        run.report = p1_solve_report(s, options);
        run.solution = run.report->solution;
        break;
      case Scheme::zf:
        if (s.n_antennas < 2) {
          run.status = "infeasible";
          run.message = "zf needs at least 2 antennas";
        } else {
          run.solution = zf_solve(s);
        }
        break;
      case Scheme::mrt: run.solution = mrt_solve(s, options); break;
      case Scheme::conventional: run.solution = conventional_solve(s, options); break;
    }
  } catch (const SolverError& e) {
    run.status = "failed";
    run.message = e.what();
  }
  run.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return run;
}

/// JSON record of a single solve.
inline nlohmann::json result_record(const Scenario& s, Scheme scheme, const SchemeRun& run) {
  nlohmann::json j;
  j["format"] = "cogwpt.result";
  j["version"] = 1;
  j["scheme"] = to_string(scheme);
  j["status"] = run.status;
  if (!run.message.empty()) j["message"] = run.message;
  j["scenario"] = {{"n_subcarriers", s.n_subcarriers}, {"n_antennas", s.n_antennas}, {"sigma2", s.sigma2},
                   {"p_sum", s.p_sum},   {"q_sum", s.q_sum},   {"q_peak", s.q_peak},
                   {"gamma", s.gamma}};
  j["wall_ms"] = run.wall_ms;
  if (run.status != "ok") return j;

  const auto& sol = run.solution;
  j["total_W"] = sol.breakdown.total;
  j["direct_W"] = sol.breakdown.direct;
  j["reactive_W"] = sol.breakdown.reactive;
  j["lambda"] = sol.lambda;
  j["sum_rate_bpshz"] = sol.sum_rate;
  j["per_subcarrier"] = {{"primary_power_W", sol.primary_power},
                         {"interference_W", sol.interference},
                         {"transmit_power_W", sol.transmit_power}};
  j["residuals"] = {{"primary", sol.residuals.primary},
                    {"sum_power", sol.residuals.sum_power},
                    {"peak_power", sol.residuals.peak_power},
                    {"interference", sol.residuals.interference}};
  nlohmann::json diag;
  diag["iterations"] = sol.iterations;
  if (scheme == Scheme::proposed || scheme == Scheme::mrt) {
    diag["grid_lambda"] = sol.grid_lambda;
    diag["failed_grid_points"] = sol.failed_grid_points;
  }
  if (run.report) {
    const auto& rep = *run.report;
    diag["lambda_min"] = rep.range.lambda_min;
    diag["lambda_max"] = rep.range.lambda_max;
    auto grid = nlohmann::json::array();
    for (const auto& p : rep.grid) {
      nlohmann::json g = {{"lambda", p.lambda}, {"ok", p.ok}};
      if (p.ok) {
        g["objective_W"] = p.objective;
        g["dual_value_W"] = p.dual_value;
        g["gap_W"] = p.dual_value - p.objective;
        g["iterations"] = p.iterations;
      } else {
        g["error"] = p.error;
      }
      grid.push_back(std::move(g));
    }
    diag["grid"] = std::move(grid);
    if (rep.stats.sdp_solves > 0) {
      diag["sdr"] = {{"sdp_solves", rep.stats.sdp_solves},     {"extractions", rep.stats.extractions},
                     {"fallbacks", rep.stats.fallbacks},       {"max_rel_gap", rep.stats.max_rel_gap},
                     {"max_raw_ratio", rep.stats.max_raw_ratio}, {"max_ratio", rep.stats.max_ratio},
                     {"max_iterations", rep.stats.max_iterations}};
    }
  }
  j["diagnostics"] = std::move(diag);
  return j;
}

// ---------------------------------------------------------------------------
// Sweeps

enum class SweepAxis { q_sum, gamma, etx_x, antennas };

inline const char* to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::q_sum: return "q_sum";
    case SweepAxis::gamma: return "gamma";
    case SweepAxis::etx_x: return "etx_x";
    case SweepAxis::antennas: return "antennas";
  }
  return "?";
}

inline SweepAxis parse_axis(const std::string& name) {
  if (name == "q_sum") return SweepAxis::q_sum;
  if (name == "gamma") return SweepAxis::gamma;
  if (name == "etx_x") return SweepAxis::etx_x;
  if (name == "antennas") return SweepAxis::antennas;
  throw ValidationError("unknown axis '" + name + "' (expected q_sum, gamma, etx_x or antennas)");
}

/// Axes that only touch budgets reuse one channel realization per seed.
inline bool axis_keeps_channels(SweepAxis a) { return a == SweepAxis::q_sum || a == SweepAxis::gamma; }

struct SweepSpec {
  SweepAxis axis = SweepAxis::q_sum;
  std::vector<double> values;
  std::vector<std::uint64_t> seeds{0};
  std::vector<Scheme> schemes = all_schemes();
  int jobs = 1;  // cells run in parallel; each solve is single-threaded
};

struct SweepRow {
  std::string axis;
  double axis_value = 0.0;
  std::uint64_t seed = 0;
  std::string scheme;
  double total_W = std::numeric_limits<double>::quiet_NaN();
  double direct_W = std::numeric_limits<double>::quiet_NaN();
  double reactive_W = std::numeric_limits<double>::quiet_NaN();
  double lambda = std::numeric_limits<double>::quiet_NaN();
  double sum_rate_bpshz = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
  double wall_ms = 0.0;
  std::string status;
};

/// Sort key: axis, axis value, seed, then scheme in canonical order.
inline bool row_before(const SweepRow& a, const SweepRow& b) {
  auto rank = [](const std::string& s) {
    try {
      return static_cast<int>(parse_scheme(s));
    } catch (const ValidationError&) {
      return 100;
    }
  };
  return std::make_tuple(a.axis, a.axis_value, a.seed, rank(a.scheme), a.scheme) <
         std::make_tuple(b.axis, b.axis_value, b.seed, rank(b.scheme), b.scheme);
}

namespace detail {

inline void set_axis(SweepAxis axis, double v, ExperimentConfig& c) {
  switch (axis) {
    case SweepAxis::q_sum:
      if (!(v >= 0.0)) throw ValidationError("q_sum sweep values must be nonnegative");
      c.budgets.q_sum = v;
      break;
    case SweepAxis::gamma:
      if (!(v >= 0.0)) throw ValidationError("gamma sweep values must be nonnegative");
      c.budgets.gamma = v;
      break;
    case SweepAxis::etx_x:
      c.geometry.s_et.x = v;
      break;
    case SweepAxis::antennas:
      if (!(v >= 1.0) || v != std::floor(v) || v > 1024.0) {
        throw ValidationError("antennas sweep values must be integers in [1, 1024]");
      }
      c.n_antennas = static_cast<int>(v);
      break;
  }
}

}  // namespace detail

/// Run every (value, seed, scheme) cell. With `fixed` set the channels come
/// from that scenario (budget axes only) and the seed list only labels rows.
inline std::vector<SweepRow> run_sweep(const ExperimentConfig& config, const SweepSpec& spec,
                                       const Scenario* fixed = nullptr) {
  if (spec.values.empty()) throw ValidationError("sweep: no axis values");
  if (spec.seeds.empty()) throw ValidationError("sweep: no seeds");
  if (spec.schemes.empty()) throw ValidationError("sweep: no schemes");
  if (fixed && !axis_keeps_channels(spec.axis)) {
    throw ValidationError(std::string("sweep: axis ") + to_string(spec.axis) +
                          " changes the channels and needs a config, not a scenario file");
  }

  // Materialize the scenarios up front; this is cheap next to the solves.
  std::vector<Scenario> base;  // per seed, budget axes only
  if (axis_keeps_channels(spec.axis)) {
    for (auto seed : spec.seeds) base.push_back(fixed ? *fixed : make_scenario(config, seed));
  }
  const std::size_t nv = spec.values.size(), ns = spec.seeds.size();
  std::vector<Scenario> scenarios(nv * ns);
  for (std::size_t v = 0; v < nv; ++v) {
    for (std::size_t k = 0; k < ns; ++k) {
      auto c = config;
      detail::set_axis(spec.axis, spec.values[v], c);
      if (axis_keeps_channels(spec.axis)) {
        scenarios[v * ns + k] = base[k];
        scenarios[v * ns + k].set_budgets(c.budgets);
        scenarios[v * ns + k].validate();
      } else {
        scenarios[v * ns + k] = make_scenario(c, spec.seeds[k]);
      }
    }
  }

  auto options = config.solver;
  options.jobs = 1;
  const std::size_t nc = spec.schemes.size();
  std::vector<SweepRow> rows(nv * ns * nc);
  parallel_for(rows.size(), spec.jobs, [&](std::size_t idx) {
    const std::size_t cell = idx / nc;
    const Scheme scheme = spec.schemes[idx % nc];
    const auto run = run_scheme(scenarios[cell], scheme, options);
    auto& row = rows[idx];
    row.axis = to_string(spec.axis);
    row.axis_value = spec.values[cell / ns];
    row.seed = spec.seeds[cell % ns];
    row.scheme = to_string(scheme);
    row.status = run.status;
    row.wall_ms = run.wall_ms;
    if (run.status == "ok") {
      row.total_W = run.solution.breakdown.total;
      row.direct_W = run.solution.breakdown.direct;
      row.reactive_W = run.solution.breakdown.reactive;
      row.lambda = run.solution.lambda;
      row.sum_rate_bpshz = run.solution.sum_rate;
      row.iterations = run.solution.iterations;
    }
  });
  std::stable_sort(rows.begin(), rows.end(), row_before);
  return rows;
}

// ---------------------------------------------------------------------------
// CSV

inline constexpr const char* kSweepCsvVersion = "# cogwpt sweep v1";
inline constexpr const char* kSweepCsvHeader =
    "axis,axis_value,seed,scheme,total_W,direct_W,reactive_W,lambda,sum_rate_bpshz,iterations,wall_ms,status";

/// Shortest text that reads back to the same double.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s, const std::string& where) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double x = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ParseError(where + ": bad number '" + s + "'");
  }
  return x;
}

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kSweepCsvVersion << '\n' << kSweepCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.axis << ',' << format_double(r.axis_value) << ',' << r.seed << ',' << r.scheme << ','
        << format_double(r.total_W) << ',' << format_double(r.direct_W) << ',' << format_double(r.reactive_W)
        << ',' << format_double(r.lambda) << ',' << format_double(r.sum_rate_bpshz) << ',' << r.iterations
        << ',' << format_double(r.wall_ms) << ',' << r.status << '\n';
  }
}

inline std::vector<SweepRow> read_sweep_csv(std::istream& in, const std::string& name = "csv") {
  std::vector<SweepRow> rows;
  std::string line;
  int lineno = 0;
  bool version = false, header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = name + ":" + std::to_string(lineno);
    if (line[0] == '#') {
      if (line == kSweepCsvVersion) version = true;
      continue;
    }
    if (!header) {
      if (!version) throw ParseError(where + ": missing version line '" + kSweepCsvVersion + "'");
      if (line != kSweepCsvHeader) throw ParseError(where + ": unexpected header");
      header = true;
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 12) throw ParseError(where + ": expected 12 columns, got " + std::to_string(cells.size()));
    SweepRow r;
    r.axis = cells[0];
    r.axis_value = parse_double(cells[1], where);
    r.seed = static_cast<std::uint64_t>(parse_double(cells[2], where));
    r.scheme = cells[3];
    r.total_W = parse_double(cells[4], where);
    r.direct_W = parse_double(cells[5], where);
    r.reactive_W = parse_double(cells[6], where);
    r.lambda = parse_double(cells[7], where);
    r.sum_rate_bpshz = parse_double(cells[8], where);
    r.iterations = static_cast<int>(parse_double(cells[9], where));
    r.wall_ms = parse_double(cells[10], where);
    r.status = cells[11];
    rows.push_back(std::move(r));
  }
  if (!header) throw ParseError(name + ": no header line");
  return rows;
}

// ---------------------------------------------------------------------------
// Aggregation

struct SummaryRow {
  std::string axis;
  double axis_value = 0.0;
  std::string scheme;
  int count = 0;   // rows with status ok
  int failed = 0;  // rows with any other status
  double total_mean = 0.0;
  double total_std = 0.0;  // sample standard deviation, 0 for one row
  double direct_mean = 0.0;
  double reactive_mean = 0.0;
};

inline std::vector<SummaryRow> summarize(const std::vector<SweepRow>& rows) {
  struct Acc {
    SummaryRow out;
    std::vector<double> totals;
    double direct = 0.0, reactive = 0.0;
  };
  std::map<std::tuple<std::string, double, int, std::string>, Acc> groups;
  for (const auto& r : rows) {
    int rank = 100;
    try {
      rank = static_cast<int>(parse_scheme(r.scheme));
    } catch (const ValidationError&) {
    }
    auto& a = groups[{r.axis, r.axis_value, rank, r.scheme}];
    a.out.axis = r.axis;
    a.out.axis_value = r.axis_value;
    a.out.scheme = r.scheme;
    if (r.status != "ok") {
      ++a.out.failed;
      continue;
    }
    a.totals.push_back(r.total_W);
    a.direct += r.direct_W;
    a.reactive += r.reactive_W;
  }
  std::vector<SummaryRow> out;
  for (auto& [key, a] : groups) {
    auto s = a.out;
    s.count = static_cast<int>(a.totals.size());
    if (s.count > 0) {
      double sum = 0.0;
      for (double t : a.totals) sum += t;
      s.total_mean = sum / s.count;
      s.direct_mean = a.direct / s.count;
      s.reactive_mean = a.reactive / s.count;
      if (s.count > 1) {
        double ss = 0.0;
        for (double t : a.totals) ss += sqr(t - s.total_mean);
        s.total_std = std::sqrt(ss / (s.count - 1));
      }
    } else {
      s.total_mean = s.direct_mean = s.reactive_mean = std::numeric_limits<double>::quiet_NaN();
    }
    out.push_back(std::move(s));
  }
  return out;
}

/// Read every *.csv under `dir` (sorted by name).
inline std::vector<SweepRow> read_results_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw Error("results directory '" + dir + "' does not exist");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw Error("results directory '" + dir + "' contains no .csv files");
  std::vector<SweepRow> rows;
  for (const auto& p : files) {
    std::ifstream in(p);
    if (!in) throw Error("cannot open '" + p.string() + "'");
    auto part = read_sweep_csv(in, p.filename().string());
    rows.insert(rows.end(), part.begin(), part.end());
  }
  if (rows.empty()) throw Error("results directory '" + dir + "' has no result rows");
  return rows;
}

inline void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& summary) {
  out << "# cogwpt summary v1\n"
      << "axis,axis_value,scheme,n,total_mean_W,total_std_W,direct_mean_W,reactive_mean_W,failed\n";
  for (const auto& s : summary) {
    out << s.axis << ',' << format_double(s.axis_value) << ',' << s.scheme << ',' << s.count << ','
        << format_double(s.total_mean) << ',' << format_double(s.total_std) << ','
        << format_double(s.direct_mean) << ',' << format_double(s.reactive_mean) << ',' << s.failed << '\n';
  }
}

/// One two-column file per (axis, scheme): axis value and mean total power.
/// Returns the paths written.
inline std::vector<std::string> write_plot_files(const std::string& dir, const std::vector<SummaryRow>& summary) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::map<std::string, std::vector<const SummaryRow*>> series;
  for (const auto& s : summary) series[s.axis + "_" + s.scheme].push_back(&s);
  std::vector<std::string> paths;
  for (const auto& [name, points] : series) {
    const auto path = (fs::path(dir) / (name + ".dat")).string();
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << "# " << points.front()->axis << " total_mean_W (" << points.front()->scheme << ")\n";
    for (const auto* p : points) {
      if (p->count > 0) out << format_double(p->axis_value) << ' ' << format_double(p->total_mean) << '\n';
    }
    paths.push_back(path);
  }
  return paths;
}

/// Default directory for outputs: $COGWPT_OUT_DIR, else the working directory.
inline std::string default_out_dir() {
  const char* env = std::getenv("COGWPT_OUT_DIR");
  return env && *env ? std::string(env) : std::string(".");
}

}  // namespace cogwpt
