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

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pptem/config.hpp"
#include "pptem/version.hpp"

namespace {

struct Options {
  std::optional<std::string> config_file;
  std::vector<std::pair<std::string, std::string>> overrides;
};

void add_common_flags(CLI::App* cmd, Options& opts) {
  cmd->add_option_function<std::string>(
         "--config", [&opts](const std::string& v) { opts.config_file = v; },
         "key = value config file; flags override file values")
      ->expected(1);
  const auto forward = [&opts, cmd](const std::string& key) {
    return [&opts, key](const std::string& v) { opts.overrides.emplace_back(key, v); };
  };
  cmd->add_option_function<std::string>("--model", forward("model"), "catalog model name");
  cmd->add_option_function<std::string>("--scheme", forward("scheme"), "em | tem | pptem");
  cmd->add_option_function<std::string>("--schemes", forward("schemes"),
                                        "comma-separated scheme list");
  cmd->add_option_function<std::string>("--T", forward("T"), "horizon (default: model catalog)");
  cmd->add_option_function<std::string>("--ref-delta", forward("ref_delta"),
                                        "reference step size, e.g. 2^-14");
  cmd->add_option_function<std::string>("--test-deltas", forward("test_deltas"),
                                        "comma-separated test step sizes");
  cmd->add_option_function<std::string>("--deltas", forward("deltas"),
                                        "comma-separated step sizes (positivity)");
  cmd->add_option_function<std::string>("--delta", forward("delta"), "step size (simulate)");
  cmd->add_option_function<std::string>("--paths", forward("paths"), "Monte Carlo path count");
  cmd->add_option_function<std::string>("--seed", forward("seed"), "master seed");
  cmd->add_option_function<std::string>("--threads", forward("threads"),
                                        "worker threads (0 = hardware)");
  cmd->add_option_function<std::string>("--out", forward("out_dir"),
                                        "output directory (default $PPTEM_OUT_DIR or .)");
  cmd->add_option_function<std::string>("--counting", forward("counting"),
                                        "positivity counting: path | value");
  cmd->add_option_function<std::string>(
         "--param", [&opts](const std::string& v) {
           const auto eq = v.find('=');
           if (eq == std::string::npos) throw CLI::ValidationError("--param expects name=value");
           opts.overrides.emplace_back("param." + v.substr(0, eq), v.substr(eq + 1));
         },
         "model parameter override, name=value (repeatable)")
      ->take_all();
  cmd->add_option_function<std::string>("--policy-h0", forward("policy.h0"),
                                        "truncation policy H0 override");
  cmd->add_option_function<std::string>("--policy-gamma", forward("policy.gamma"),
                                        "truncation policy gamma override");
  cmd->add_option_function<std::string>("--policy-k0hat", forward("policy.k0_hat"),
                                        "truncation policy K0 override (>= 1)");
  cmd->add_option_function<std::string>("--policy-kbar", forward("policy.k_bar"),
                                        "truncation policy k-bar override, in (0, 1/2]");
  cmd->add_flag_function(
      "--strict", [&opts](std::int64_t) { opts.overrides.emplace_back("strict", "1"); },
      "exit nonzero when a simulated path diverges");
  cmd->add_flag_function(
      "--no-timestamp", [&opts](std::int64_t) { opts.overrides.emplace_back("emit_timestamp", "0"); },
      "omit the timestamp comment (byte-stable output)");
  cmd->add_option_function<std::string>("--pbar", forward("pbar"), "moment exponent p-bar");
  cmd->add_option_function<std::string>("--qbar", forward("qbar"), "inverse-moment exponent q-bar");
  cmd->add_option_function<std::string>("--mono-p", forward("mono_p"),
                                        "monotonicity exponent p (> 2)");
  cmd->add_option_function<std::string>("--region-lo", forward("region_lo"),
                                        "diagnose region lower edge");
  cmd->add_option_function<std::string>("--region-hi", forward("region_hi"),
                                        "diagnose region upper edge");
  cmd->add_option_function<std::string>("--samples", forward("samples"),
                                        "diagnose sample count");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"positivity-preserving truncated Euler-Maruyama toolkit"};
  app.set_version_flag("--version", PPTEM_VERSION);
  app.require_subcommand(1);

  Options opts;
  const char* commands[] = {"simulate", "converge", "positivity", "diagnose", "list-models"};
  const char* blurbs[] = {
      "integrate one path and write the trajectory",
      "terminal mean-square error vs step size, coupled to a fine reference",
      "percentage of nonpositive iterates per scheme and step size",
      "numerical hypothesis checks (growth, dissipativity, monotonicity)",
      "list the model catalog"};
  for (int i = 0; i < 5; ++i) add_common_flags(app.add_subcommand(commands[i], blurbs[i]), opts);

  CLI11_PARSE(app, argc, argv);

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const pptem::RunConfig cfg = pptem::parse_config(opts.config_file, opts.overrides, command);
    return pptem::run(cfg).exit_code;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "pptem: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "pptem: %s\n", e.what());
    return 1;
  }
}
