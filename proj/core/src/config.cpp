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

#include "pptem/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "pptem/assumptions.hpp"
#include "pptem/csv.hpp"
#include "pptem/models.hpp"
#include "pptem/version.hpp"

namespace pptem {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_number(const std::string& key, const std::string& value) {
  // Step sizes are commonly written as powers of two.
  if (value.rfind("2^", 0) == 0) {
    char* end = nullptr;
    const long e = std::strtol(value.c_str() + 2, &end, 10);
    if (end == value.c_str() + 2 || *end != '\0')
      throw std::invalid_argument("config key '" + key + "': malformed exponent '" + value + "'");
    return std::ldexp(1.0, static_cast<int>(e));
  }
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0')
    throw std::invalid_argument("config key '" + key + "': malformed number '" + value + "'");
  return v;
}

std::vector<double> parse_number_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    std::istringstream ws(item);
    std::string tok;
    while (ws >> tok) out.push_back(parse_number(key, tok));
  }
  if (out.empty()) throw std::invalid_argument("config key '" + key + "': empty list");
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true" || value == "yes") return true;
  if (value == "0" || value == "false" || value == "no") return false;
  throw std::invalid_argument("config key '" + key + "': expected a boolean, got '" + value + "'");
}

void apply_key(RunConfig& cfg, const std::string& key, const std::string& value,
               const std::string& where) {
  try {
    if (key == "command") {
      cfg.command = value;
    } else if (key == "model") {
      cfg.model = value;
    } else if (key == "scheme") {
      cfg.schemes = {scheme_from_string(value)};
    } else if (key == "schemes") {
      cfg.schemes.clear();
      std::istringstream in(value);
      std::string item;
      while (std::getline(in, item, ',')) {
        std::istringstream ws(item);
        std::string tok;
        while (ws >> tok) cfg.schemes.push_back(scheme_from_string(tok));
      }
      if (cfg.schemes.empty()) throw std::invalid_argument("schemes: empty list");
    } else if (key == "T") {
      cfg.T = parse_number(key, value);
    } else if (key == "ref_delta") {
      cfg.ref_delta = parse_number(key, value);
    } else if (key == "test_deltas") {
      cfg.test_deltas = parse_number_list(key, value);
    } else if (key == "deltas") {
      cfg.deltas = parse_number_list(key, value);
    } else if (key == "delta") {
      cfg.delta = parse_number(key, value);
    } else if (key == "paths") {
      cfg.paths = static_cast<long>(parse_number(key, value));
    } else if (key == "seed") {
      cfg.master_seed = static_cast<std::uint64_t>(parse_number(key, value));
    } else if (key == "threads") {
      cfg.threads = static_cast<int>(parse_number(key, value));
    } else if (key == "out_dir") {
      cfg.out_dir = value;
    } else if (key == "strict") {
      cfg.strict = parse_bool(key, value);
    } else if (key == "emit_timestamp") {
      cfg.emit_timestamp = parse_bool(key, value);
    } else if (key == "counting") {
      if (value == "path")
        cfg.counting = PositivityCounting::per_path;
      else if (value == "value")
        cfg.counting = PositivityCounting::per_value;
      else
        throw std::invalid_argument("counting: expected 'path' or 'value'");
    } else if (key.rfind("param.", 0) == 0) {
      cfg.params[key.substr(6)] = parse_number(key, value);
    } else if (key == "policy.h0") {
      cfg.policy_h0 = parse_number(key, value);
    } else if (key == "policy.gamma") {
      cfg.policy_gamma = parse_number(key, value);
    } else if (key == "policy.k0_hat") {
      cfg.policy_k0_hat = parse_number(key, value);
    } else if (key == "policy.k_bar") {
      cfg.policy_k_bar = parse_number(key, value);
    } else if (key == "pbar") {
      cfg.p_bar = parse_number(key, value);
    } else if (key == "qbar") {
      cfg.q_bar = parse_number(key, value);
    } else if (key == "mono_p") {
      cfg.mono_p = parse_number(key, value);
    } else if (key == "region_lo") {
      cfg.region_lo = parse_number(key, value);
    } else if (key == "region_hi") {
      cfg.region_hi = parse_number(key, value);
    } else if (key == "samples") {
      cfg.samples = static_cast<long>(parse_number(key, value));
    } else {
      throw std::invalid_argument("unknown key '" + key + "'");
    }
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(where + ": " + e.what());
  }
}

void check_integral_multiple(double T, double delta, const std::string& what) {
  const double ratio = T / delta;
  if (!(delta > 0.0) || std::fabs(ratio - std::round(ratio)) > 1e-9 || ratio < 1.0)
    throw std::invalid_argument(what + ": step size " + format_double(delta) +
                                " does not divide T = " + format_double(T));
}

}  // namespace

RunConfig parse_config(const std::optional<std::string>& config_file,
                       const std::vector<std::pair<std::string, std::string>>& overrides,
                       const std::string& command) {
  RunConfig cfg;
  cfg.command = command;
  if (const char* dir = std::getenv("PPTEM_OUT_DIR")) cfg.out_dir = dir;

  if (config_file) {
    std::ifstream in(*config_file);
    if (!in) throw std::invalid_argument("cannot open config file '" + *config_file + "'");
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const std::string stripped = trim(line.substr(0, line.find('#')));
      if (stripped.empty()) continue;
      const std::string where = *config_file + ":" + std::to_string(line_no);
      if (stripped.front() == '[') {
        if (stripped.back() != ']') throw std::invalid_argument(where + ": malformed section header");
        section = trim(stripped.substr(1, stripped.size() - 2));
        static const char* known[] = {"simulate", "converge", "positivity", "diagnose",
                                      "list-models"};
        bool ok = false;
        for (const char* k : known) ok = ok || section == k;
        if (!ok) throw std::invalid_argument(where + ": unknown section '" + section + "'");
        continue;
      }
      const auto eq = stripped.find('=');
      if (eq == std::string::npos) throw std::invalid_argument(where + ": expected 'key = value'");
      const std::string key = trim(stripped.substr(0, eq));
      const std::string value = trim(stripped.substr(eq + 1));
      if (!section.empty() && section != cfg.command) continue;  // other subcommand's section
      apply_key(cfg, key, value, where);
    }
  }
  for (const auto& [key, value] : overrides) apply_key(cfg, key, value, "option --" + key);
  if (!command.empty()) cfg.command = command;

  static const char* commands[] = {"simulate", "converge", "positivity", "diagnose", "list-models"};
  bool known_command = false;
  for (const char* c : commands) known_command = known_command || cfg.command == c;
  if (!known_command)
    throw std::invalid_argument("unknown command '" + cfg.command +
                                "' (expected simulate, converge, positivity, diagnose or list-models)");

  if (cfg.command == "list-models") return cfg;
  if (cfg.model.empty()) throw std::invalid_argument("no model named; use --model or the config file");

  if (cfg.schemes.empty()) {
    cfg.schemes = cfg.command == "positivity"
                      ? std::vector<SchemeKind>{SchemeKind::em, SchemeKind::tem_norm,
                                                SchemeKind::pptem}
                      : std::vector<SchemeKind>{SchemeKind::pptem};
  }

  // Resolve catalog defaults; rejects unknown models and parameters.
  const ResolvedModel resolved = make_model(cfg.model, cfg.params);
  if (cfg.T <= 0.0) cfg.T = resolved.T;

  if (cfg.ref_delta <= 0.0) cfg.ref_delta = std::ldexp(1.0, -14);
  if (cfg.test_deltas.empty())
    cfg.test_deltas = {std::ldexp(1.0, -8), std::ldexp(1.0, -9), std::ldexp(1.0, -10),
                       std::ldexp(1.0, -11), std::ldexp(1.0, -12)};
  std::sort(cfg.test_deltas.begin(), cfg.test_deltas.end(), std::greater<>());
  if (cfg.deltas.empty())
    cfg.deltas = {std::ldexp(1.0, -2), std::ldexp(1.0, -3), std::ldexp(1.0, -4),
                  std::ldexp(1.0, -5)};
  if (cfg.delta <= 0.0) cfg.delta = std::ldexp(1.0, -8);
  if (cfg.paths < 1) throw std::invalid_argument("paths must be at least 1");

  if (cfg.command == "converge") {
    check_integral_multiple(cfg.T, cfg.ref_delta, "converge");
    for (double delta : cfg.test_deltas) {
      const double ratio = delta / cfg.ref_delta;
      const long f = std::lround(ratio);
      if (f < 2 || std::fabs(ratio - static_cast<double>(f)) > 1e-9 || (f & (f - 1)) != 0)
        throw std::invalid_argument(
            "converge: test step " + format_double(delta) +
            " is not a power-of-two multiple of ref_delta = " + format_double(cfg.ref_delta));
    }
  } else if (cfg.command == "positivity") {
    for (double delta : cfg.deltas) check_integral_multiple(cfg.T, delta, "positivity");
  } else if (cfg.command == "simulate") {
    check_integral_multiple(cfg.T, cfg.delta, "simulate");
  }
  return cfg;
}

namespace {

TruncationPolicy resolve_policy(const RunConfig& cfg, const ModelSpec& spec) {
  TruncationPolicy base = TruncationPolicy::for_model(spec);
  const double h0 = cfg.policy_h0 > 0.0 ? cfg.policy_h0 : base.h0;
  const double gamma = cfg.policy_gamma > 0.0 ? cfg.policy_gamma : base.gamma;
  return TruncationPolicy::make(h0, gamma, cfg.policy_k0_hat, cfg.policy_k_bar);
}

// The positivity-preserving scheme integrates the CEV model in transformed
// coordinates; comparator schemes run the original equation.
ResolvedModel resolve_for_scheme(const RunConfig& cfg, SchemeKind scheme) {
  if (cfg.model == "cev" && scheme == SchemeKind::pptem)
    return make_model("cev_lamperti", cfg.params);
  return make_model(cfg.model, cfg.params);
}

std::string metadata_header(const RunConfig& cfg, const ModelSpec& spec,
                            const TruncationPolicy& policy) {
  std::ostringstream out;
  out << "# tool: pptem " << PPTEM_VERSION << "\n";
  if (cfg.emit_timestamp) {
    const std::time_t now = std::time(nullptr);
    char buf[64];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    out << "# generated: " << buf << "\n";
  }
  out << "# command: " << cfg.command << "\n";
  out << "# model: " << cfg.model << "\n";
  out << "# model_resolved: " << spec.name << "\n";
  out << "# T: " << format_double(cfg.T) << "\n";
  out << "# paths: " << cfg.paths << "\n";
  out << "# master_seed: " << cfg.master_seed << "\n";
  out << "# counting: "
      << (cfg.counting == PositivityCounting::per_path ? "path" : "value") << "\n";
  out << "# policy: h0=" << format_double(policy.h0) << " gamma=" << format_double(policy.gamma)
      << " k0_hat=" << format_double(policy.k0_hat) << " k_bar=" << format_double(policy.k_bar)
      << " u_hat=" << format_double(policy.u_hat) << "\n";
  return out.str();
}

void write_file(const std::string& path, const std::string& content,
                std::vector<std::string>& written) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
  written.push_back(path);
}

int run_converge(const RunConfig& cfg, RunResult& result) {
  for (SchemeKind scheme : cfg.schemes) {
    const ResolvedModel model = resolve_for_scheme(cfg, scheme);
    const TruncationPolicy policy = resolve_policy(cfg, model.spec);

    ConvergenceConfig study;
    study.model = model.spec;
    study.x0 = model.x0;
    study.scheme = scheme;
    study.T = cfg.T;
    study.ref_delta = cfg.ref_delta;
    study.test_deltas = cfg.test_deltas;
    study.paths = cfg.paths;
    study.master_seed = cfg.master_seed;
    study.policy = policy;
    study.threads = cfg.threads;
    const ErrorTable table = run_convergence_study(study);

    std::ostringstream csv;
    csv << metadata_header(cfg, model.spec, policy);
    csv << "# scheme: " << to_string(scheme) << "\n";
    csv << "# ref_delta: " << format_double(cfg.ref_delta) << "\n";
    if (table.ref_diverged_count > 0)
      csv << "# ref_diverged_count: " << table.ref_diverged_count << "\n";
    csv << "delta,rms_error,diverged_count\n";
    for (const auto& row : table.rows)
      csv << format_double(row.delta) << "," << format_double(row.rms_error) << ","
          << row.diverged_count << "\n";
    csv << "fitted_order," << format_double(table.fitted_order) << ","
        << format_double(table.fit_intercept) << "\n";

    const std::string base = cfg.out_dir + "/" + cfg.model + "_" + to_string(scheme);
    write_file(base + "_convergence.csv", csv.str(), result.files_written);

    std::ostringstream plot;
    plot << "# log2(delta)  log2(rms_error); reference line of slope 1/2 below\n";
    for (const auto& row : table.rows) {
      if (std::isfinite(row.rms_error) && row.rms_error > 0.0)
        plot << format_double(std::log2(row.delta)) << " " << format_double(std::log2(row.rms_error))
             << "\n";
    }
    plot << "\n";
    const auto& rows = table.rows;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& anchor = rows.back();
      if (std::isfinite(anchor.rms_error) && anchor.rms_error > 0.0) {
        const double x = std::log2(rows[i].delta);
        const double y = std::log2(anchor.rms_error) + 0.5 * (x - std::log2(anchor.delta));
        plot << format_double(x) << " " << format_double(y) << "\n";
      }
    }
    write_file(base + "_convergence_plot.dat", plot.str(), result.files_written);
  }
  return 0;
}

int run_positivity(const RunConfig& cfg, RunResult& result) {
  std::ostringstream csv;
  bool header_done = false;
  for (SchemeKind scheme : cfg.schemes) {
    const ResolvedModel model = resolve_for_scheme(cfg, scheme);
    const TruncationPolicy policy = resolve_policy(cfg, model.spec);
    if (!header_done) {
      csv << metadata_header(cfg, model.spec, policy);
      csv << "scheme,delta,percent_nonpositive,percent_nonpositive_preclamp,diverged_paths,paths\n";
      header_done = true;
    }
    PositivityOptions options;
    options.counting = cfg.counting;
    options.threads = cfg.threads;
    for (double delta : cfg.deltas) {
      const PositivityRow row = positivity_stats(model.spec, scheme, delta, cfg.T, cfg.paths,
                                                 cfg.master_seed, policy, model.x0, options);
      csv << to_string(scheme) << "," << format_double(delta) << "," << format_double(row.percent)
          << "," << format_double(row.percent_pre_clamp) << "," << row.diverged_paths << ","
          << row.paths << "\n";
    }
  }
  const std::string path = cfg.out_dir + "/" + cfg.model + "_positivity.csv";
  write_file(path, csv.str(), result.files_written);
  return 0;
}

int run_simulate(const RunConfig& cfg, RunResult& result) {
  const SchemeKind scheme = cfg.schemes.front();
  const ResolvedModel model = resolve_for_scheme(cfg, scheme);
  const TruncationPolicy policy = resolve_policy(cfg, model.spec);
  const long n_steps = std::lround(cfg.T / cfg.delta);
  const IncrementGrid grid =
      generate_increments(cfg.master_seed, 0, n_steps, model.spec.m, cfg.delta);
  const ClampInterval iv = clamp_interval(cfg.delta, policy);
  const Trajectory trajectory =
      simulate_path(model.spec, scheme, cfg.delta, n_steps, grid, model.x0, iv);

  std::ostringstream csv;
  csv << metadata_header(cfg, model.spec, policy);
  csv << "# scheme: " << to_string(scheme) << "\n";
  csv << "# delta: " << format_double(cfg.delta) << "\n";
  csv << "# diverged: " << (trajectory.diverged ? 1 : 0) << "\n";
  if (trajectory.first_nonpositive_step)
    csv << "# first_nonpositive_step: " << *trajectory.first_nonpositive_step << "\n";
  csv << "t";
  for (int i = 1; i <= model.spec.d; ++i) csv << ",x" << i;
  for (int i = 1; i <= model.spec.d; ++i) csv << ",raw_x" << i;
  csv << "\n";
  for (std::size_t k = 0; k < trajectory.times.size(); ++k) {
    csv << format_double(trajectory.times[k]);
    for (double v : trajectory.post_clamp[k]) csv << "," << format_double(v);
    for (double v : trajectory.pre_clamp[k]) csv << "," << format_double(v);
    csv << "\n";
  }
  const std::string path =
      cfg.out_dir + "/" + cfg.model + "_" + to_string(scheme) + "_path.csv";
  write_file(path, csv.str(), result.files_written);
  return cfg.strict && trajectory.diverged ? 3 : 0;
}

int run_diagnose(const RunConfig& cfg, RunResult& result) {
  const ResolvedModel model = make_model(cfg.model, cfg.params);
  const TruncationPolicy policy = resolve_policy(cfg, model.spec);
  const double gamma = std::max(model.spec.alpha, model.spec.beta + 1.0);
  const double p_bar = cfg.p_bar > 0.0 ? cfg.p_bar : 2.0 * gamma + 2.0;
  const double q_bar = cfg.q_bar > 0.0 ? cfg.q_bar : p_bar;

  Region region = Region::cube(model.spec.d, cfg.region_lo, cfg.region_hi);
  SamplingOptions options;
  options.n_samples = cfg.samples;
  options.seed = cfg.master_seed;

  const AssumptionReport lip = check_lipschitz_growth(model.spec, region, options);
  const AssumptionReport diss = check_dissipativity(model.spec, p_bar, q_bar, region, options);
  const AssumptionReport mono = check_monotonicity(model.spec, cfg.mono_p, region, options);

  std::ostringstream text;
  text << "model " << cfg.model << ": hypothesis checks over [" << format_double(cfg.region_lo)
       << ", " << format_double(cfg.region_hi) << "]^" << model.spec.d << ", " << cfg.samples
       << " samples\n";
  const auto describe = [&text](const AssumptionReport& r) {
    text << "  " << r.assumption << ": " << (r.pass ? "pass" : "FAIL")
         << " (worst margin " << format_double(r.worst_margin) << ")";
    for (const auto& [k, v] : r.constants) text << " " << k << "=" << format_double(v);
    text << "\n";
    for (const auto& note : r.notes) text << "    " << note << "\n";
  };
  describe(lip);
  describe(diss);
  describe(mono);
  // Rate-theorem arithmetic preconditions, surfaced as information.
  if (p_bar < 2.0 * (model.spec.alpha + 1.0))
    text << "  note: p_bar < 2(alpha+1); moment bounds may not cover the drift growth\n";
  if (q_bar < 2.0 * model.spec.beta)
    text << "  note: q_bar < 2 beta; inverse-moment bounds may not cover the singular term\n";
  if (gamma > p_bar + q_bar) text << "  note: max(alpha, beta+1) exceeds p_bar + q_bar\n";
  std::fputs(text.str().c_str(), stdout);

  std::ostringstream csv;
  csv << metadata_header(cfg, model.spec, policy);
  csv << "# p_bar: " << format_double(p_bar) << "\n";
  csv << "# q_bar: " << format_double(q_bar) << "\n";
  csv << "# mono_p: " << format_double(cfg.mono_p) << "\n";
  csv << "assumption,pass,worst_margin,constants\n";
  const auto row = [&csv](const AssumptionReport& r) {
    csv << r.assumption << "," << (r.pass ? 1 : 0) << "," << format_double(r.worst_margin) << ",";
    bool first = true;
    for (const auto& [k, v] : r.constants) {
      if (!first) csv << ";";
      csv << k << "=" << format_double(v);
      first = false;
    }
    csv << "\n";
  };
  row(lip);
  row(diss);
  row(mono);
  const std::string path = cfg.out_dir + "/" + cfg.model + "_assumptions.csv";
  write_file(path, csv.str(), result.files_written);
  return 0;
}

int run_list_models() {
  for (const auto& entry : model_catalog()) {
    std::ostringstream line;
    line << entry.name << ": " << entry.summary << "\n  defaults:";
    for (const auto& [k, v] : entry.defaults) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%g", v);
      line << " " << k << "=" << buf;
    }
    line << "\n";
    std::fputs(line.str().c_str(), stdout);
  }
  return 0;
}

}  // namespace

RunResult run(const RunConfig& cfg) {
  RunResult result;
  if (cfg.command != "list-models") std::filesystem::create_directories(cfg.out_dir);
  if (cfg.command == "list-models") {
    result.exit_code = run_list_models();
  } else if (cfg.command == "converge") {
    result.exit_code = run_converge(cfg, result);
  } else if (cfg.command == "positivity") {
    result.exit_code = run_positivity(cfg, result);
  } else if (cfg.command == "simulate") {
    result.exit_code = run_simulate(cfg, result);
  } else if (cfg.command == "diagnose") {
    result.exit_code = run_diagnose(cfg, result);
  } else {
    throw std::invalid_argument("unknown command '" + cfg.command + "'");
  }
  return result;
}

}  // namespace pptem
