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
// cogwpt command-line front end: gen | solve | sweep | compare.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cogwpt/experiment.hpp"

namespace fs = std::filesystem;
using namespace cogwpt;

namespace {

// Seeds as "3", "0:20" (half-open range) or a comma list of either.
std::vector<std::uint64_t> parse_seeds(const std::vector<std::string>& items) {
  std::vector<std::uint64_t> out;
  for (const auto& item : items) {
    const auto colon = item.find(':');
    try {
      if (colon == std::string::npos) {
        out.push_back(std::stoull(item));
      } else {
        const auto lo = std::stoull(item.substr(0, colon));
        const auto hi = std::stoull(item.substr(colon + 1));
        if (hi <= lo) throw ValidationError("empty seed range '" + item + "'");
        for (auto s = lo; s < hi; ++s) out.push_back(s);
      }
    } catch (const std::logic_error&) {
      throw ValidationError("bad seed '" + item + "'");
    }
  }
  return out;
}

std::string out_path(const std::string& given, const std::string& fallback_name) {
  if (!given.empty()) return given;
  return (fs::path(default_out_dir()) / fallback_name).string();
}

void ensure_parent(const std::string& path) {
  const auto parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
}

std::ofstream open_out(const std::string& path) {
  ensure_parent(path);
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  return out;
}

void fail(const std::string& type, const std::string& message) {
  nlohmann::json err = {{"error", type}, {"message", message}};
  std::cerr << err.dump() << '\n';
}

struct Args {
  std::string config;
  std::vector<std::string> sets;
  std::string scenario;
  std::uint64_t seed = 0;
  std::vector<std::string> seeds{"0"};
  std::string scheme = "proposed";
  std::vector<std::string> schemes{"proposed", "zf", "mrt", "conventional"};
  std::string axis;
  std::vector<double> values;
  int lambda_grid = 0;
  std::string method;
  int jobs = -1;
  std::string out;
  std::string results;
};

// Command-line solver flags override the config's solver section.
BeamoptOptions solver_options(const Args& a, BeamoptOptions base) {
  if (a.lambda_grid != 0) {
    if (a.lambda_grid < 2) throw ValidationError("--lambda-grid must be at least 2");
    base.grid_points = a.lambda_grid;
  }
  if (!a.method.empty()) base.method = parse_subproblem_method(a.method);
  if (a.jobs >= 0) base.jobs = a.jobs;
  return base;
}

int cmd_gen(const Args& a) {
  const auto config = load_config(a.config, a.sets);
  const auto s = make_scenario(config, a.seed);
  const auto path = out_path(a.out, "scenario_seed" + std::to_string(a.seed) + ".json");
  ensure_parent(path);
  save_scenario(s, path);
  std::cout << path << '\n';
  return 0;
}

int cmd_solve(const Args& a) {
  const auto s = load_scenario(a.scenario);
  const auto scheme = parse_scheme(a.scheme);
  const auto options = solver_options(a, BeamoptOptions{});
  const auto run = run_scheme(s, scheme, options);
  const auto record = result_record(s, scheme, run).dump(1);
  if (a.out == "-") {
    std::cout << record << '\n';
  } else {
    const auto path = out_path(a.out, std::string("result_") + to_string(scheme) + ".json");
    auto out = open_out(path);
    out << record << '\n';
    std::cout << path << '\n';
  }
  if (run.status == "failed") {
    fail("SolverError", run.message);
    return 3;
  }
  return 0;
}

int cmd_sweep(const Args& a) {
  auto config = load_config(a.config, a.sets);
  config.solver = solver_options(a, config.solver);
  SweepSpec spec;
  spec.axis = parse_axis(a.axis);
  spec.values = a.values;
  spec.seeds = parse_seeds(a.seeds);
  spec.schemes.clear();
  for (const auto& name : a.schemes) spec.schemes.push_back(parse_scheme(name));
  spec.jobs = config.solver.jobs;

  std::optional<Scenario> fixed;
  if (!a.scenario.empty()) fixed = load_scenario(a.scenario);
  const auto rows = run_sweep(config, spec, fixed ? &*fixed : nullptr);
  const auto path = out_path(a.out, std::string("sweep_") + to_string(spec.axis) + ".csv");
  auto out = open_out(path);
  write_sweep_csv(out, rows);
  std::cout << path << '\n';
  return 0;
}

int cmd_compare(const Args& a) {
  const auto rows = read_results_dir(a.results);
  const auto summary = summarize(rows);
  const auto dir = out_path(a.out, "summary");
  fs::create_directories(dir);
  {
    std::ofstream out(fs::path(dir) / "summary.csv");
    if (!out) throw Error("cannot write summary.csv in '" + dir + "'");
    write_summary_csv(out, summary);
  }
  write_plot_files(dir, summary);

  std::cout << "axis       value         scheme        n   total_W (mean +/- std)\n";
  for (const auto& s : summary) {
    std::printf("%-10s %-13.6g %-13s %-3d %.6e +/- %.2e%s\n", s.axis.c_str(), s.axis_value, s.scheme.c_str(),
                s.count, s.total_mean, s.total_std, s.failed ? "  (some cells not ok)" : "");
  }
  std::cout << "written to " << dir << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cogwpt: cognitive wireless power transfer beamforming experiments"};
  app.require_subcommand(1);
  Args a;

  auto* gen = app.add_subcommand("gen", "Generate a scenario from a config");
  gen->add_option("--config", a.config, "Config JSON (reference parameters when omitted)");
  gen->add_option("--set", a.sets, "Override, e.g. budgets.q_sum=0.4 (repeatable)");
  gen->add_option("--seed", a.seed, "Channel seed");
  gen->add_option("--out", a.out, "Output scenario path");

  auto* solve = app.add_subcommand("solve", "Run one scheme on a scenario");
  solve->add_option("--scenario", a.scenario, "Scenario JSON")->required();
  solve->add_option("--scheme", a.scheme, "proposed | zf | mrt | conventional");
  solve->add_option("--lambda-grid", a.lambda_grid, "Water-level grid points");
  solve->add_option("--method", a.method, "closed_form | sdr");
  solve->add_option("--jobs", a.jobs, "Worker threads (0 = all cores)");
  solve->add_option("--out", a.out, "Result JSON path ('-' for stdout)");

  auto* sweep = app.add_subcommand("sweep", "Sweep one parameter over seeds and schemes");
  sweep->add_option("--config", a.config, "Config JSON (reference parameters when omitted)");
  sweep->add_option("--set", a.sets, "Override, e.g. n_subcarriers=16 (repeatable)");
  sweep->add_option("--scenario", a.scenario, "Fixed scenario (q_sum and gamma axes only)");
  sweep->add_option("--axis", a.axis, "q_sum | gamma | etx_x | antennas")->required();
  sweep->add_option("--values", a.values, "Axis values")->required()->delimiter(',');
  sweep->add_option("--seeds", a.seeds, "Seeds, e.g. 0:20 or 1,2,5")->delimiter(',');
  sweep->add_option("--schemes", a.schemes, "Schemes to run")->delimiter(',');
  sweep->add_option("--lambda-grid", a.lambda_grid, "Water-level grid points");
  sweep->add_option("--method", a.method, "closed_form | sdr");
  sweep->add_option("--jobs", a.jobs, "Worker threads (0 = all cores)");
  sweep->add_option("--out", a.out, "Output CSV path");

  auto* compare = app.add_subcommand("compare", "Aggregate sweep CSVs into a summary and plot data");
  compare->add_option("--results", a.results, "Directory of sweep CSVs")->required();
  compare->add_option("--out", a.out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    fail("UsageError", e.what());
    return 2;
  }

  try {
    if (*gen) return cmd_gen(a);
    if (*solve) return cmd_solve(a);
    if (*sweep) return cmd_sweep(a);
    if (*compare) return cmd_compare(a);
  } catch (const ParseError& e) {
    fail("ParseError", e.what());
  } catch (const ValidationError& e) {
    fail("ValidationError", e.what());
  } catch (const SolverError& e) {
    fail("SolverError", e.what());
  } catch (const std::exception& e) {
    fail("Error", e.what());
  }
  return 1;
}
