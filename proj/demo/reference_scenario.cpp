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
// Reference scenario, seed 0: the four designs side by side.

#include <cstdio>

#include "cogwpt/experiment.hpp"

int main() {
  using namespace cogwpt;
  const auto s = generate_scenario(reference_geometry(), reference_budgets(), kReferenceSubcarriers,
                                   kReferenceAntennas, 0);
  const auto range = lambda_range(s);
  std::printf("N = %d, M = %d, water level range [%.5f, %.5f]\n\n", s.n_subcarriers, s.n_antennas, range.lambda_min,
              range.lambda_max);
  std::printf("%-13s %12s %12s %12s %9s %10s\n", "scheme", "total uW", "direct uW", "reactive uW", "I / Gamma",
              "time ms");
  for (auto scheme : all_schemes()) {
    const auto run = run_scheme(s, scheme, BeamoptOptions{});
    if (run.status != "ok") {
      std::printf("%-13s %s: %s\n", to_string(scheme), run.status.c_str(), run.message.c_str());
      continue;
    }
    const auto& b = run.solution.breakdown;
    double inter = 0.0;
    for (double i : run.solution.interference) inter += i;
    std::printf("%-13s %12.3f %12.3f %12.3f %9.3f %10.1f\n", to_string(scheme), b.total * 1e6, b.direct * 1e6,
                b.reactive * 1e6, inter / s.gamma, run.wall_ms);
  }
}
