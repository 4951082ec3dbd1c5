// Copyright 2026 the pptem project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pptem/experiments.hpp"
#include "pptem/model.hpp"

namespace pptem {

/// Fully resolved invocation of the experiment driver. Produced by
/// parse_config from a key/value config file and/or command-line overrides;
/// defaults follow the benchmark protocol (T and the initial state from the
/// model catalog, reference step 2^-14, test steps 2^-12..2^-8, 1e5 paths).
struct RunConfig {
  std::string command;  // simulate | converge | positivity | diagnose | list-models
  std::string model;
  std::map<std::string, double> params;  // model parameter overrides

  std::vector<SchemeKind> schemes;  // empty = command default (positivity: all three)
  double T = 0.0;  // 0 = catalog default
  double ref_delta = 0.0;
  std::vector<double> test_deltas;  // converge
  std::vector<double> deltas;       // positivity
  double delta = 0.0;               // simulate; 0 = 2^-8
  long paths = 100000;
  std::uint64_t master_seed = 12345;
  int threads = 0;
  std::string out_dir = ".";
  bool strict = false;
  bool emit_timestamp = true;
  PositivityCounting counting = PositivityCounting::per_value;

  // policy overrides; 0 = derive from the model
  double policy_h0 = 0.0;
  double policy_gamma = 0.0;
  double policy_k0_hat = 1.0;
  double policy_k_bar = 0.5;

  // diagnose
  double p_bar = 0.0;  // 0 = 2*max(alpha, beta+1) + 2
  double q_bar = 0.0;  // 0 = same as p_bar
  double mono_p = 4.0;
  double region_lo = 1e-3;
  double region_hi = 1e3;
  long samples = 10000;
};

/// Parses a flat `key = value` config file (optionally with [subcommand]
/// sections; only the section matching the active command applies) and then
/// applies command-line overrides on top. Unknown keys, malformed numbers and
/// constraint violations are rejected with the offending line or key named.
/// Step sizes accept both decimals and `2^-k` notation.
RunConfig parse_config(const std::optional<std::string>& config_file,
                       const std::vector<std::pair<std::string, std::string>>& overrides,
                       const std::string& command);

/// Exit codes of run(): 0 success, 2 configuration error (thrown as
/// std::invalid_argument before any output is written), 3 numerical
/// divergence in strict single-path mode.
struct RunResult {
  int exit_code = 0;
  std::vector<std::string> files_written;
};

/// Dispatches a resolved config to the experiment drivers and writes CSV /
/// plot-data files with a metadata header into cfg.out_dir.
RunResult run(const RunConfig& cfg);

}  // namespace pptem
