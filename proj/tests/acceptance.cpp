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

// End-to-end acceptance suite. Each criterion prints exactly one pass/fail
// line; the process exits nonzero if any fail. Expected wall time is a few
// minutes on a laptop.

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pptem/config.hpp"
#include "pptem/csv.hpp"
#include "pptem/experiments.hpp"
#include "pptem/models.hpp"
#include "pptem/noise.hpp"
#include "pptem/schemes.hpp"

using namespace pptem;

namespace {

constexpr std::uint64_t kSeed = 12345;

int g_failures = 0;

void report(int number, const std::string& label, bool pass, const std::string& detail) {
  std::printf("criterion %d (%s): %s  [%s]\n", number, label.c_str(), pass ? "PASS" : "FAIL",
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

// 1. Every catalog model, step sizes 2^-2 .. 2^-9, 1000 paths each: no
//    post-clamp component may ever be nonpositive. Exact, zero violations.
void criterion_positivity() {
  long violations = 0;
  long states_checked = 0;
  for (const auto& entry : model_catalog()) {
    const ResolvedModel m = entry.build({});
    const TruncationPolicy policy = TruncationPolicy::for_model(m.spec);
    for (int k = 2; k <= 9; ++k) {
      const double delta = std::ldexp(1.0, -k);
      const long n_steps = std::lround(m.T / delta);
      const ClampInterval iv = clamp_interval(delta, policy);
      for (long path = 0; path < 1000; ++path) {
        const IncrementGrid grid = generate_increments(kSeed, static_cast<std::uint64_t>(path),
                                                       n_steps, m.spec.m, delta);
        const PathSummary s = run_path(m.spec, SchemeKind::pptem, delta, n_steps, grid, m.x0, iv);
        violations += s.nonpositive_post_values;
        states_checked += s.steps_recorded;
        if (s.diverged) ++violations;
      }
    }
  }
  report(1, "positivity of the clamped scheme on every catalog model", violations == 0,
         fmt("%ld nonpositive post-clamp components in %ld recorded states", violations,
             states_checked));
}

PositivityRow table_cell(const char* model, SchemeKind scheme, int k, long paths) {
  const ResolvedModel m = make_model(model);
  const TruncationPolicy policy = TruncationPolicy::for_model(m.spec);
  PositivityOptions options;
  options.counting = PositivityCounting::per_value;
  return positivity_stats(m.spec, scheme, std::ldexp(1.0, -k), m.T, paths, kSeed, policy, m.x0,
                          options);
}

// 2. Euler-Maruyama on the CEV diffusion at delta = 1/4: the reference
//    nonpositivity percentage is 12.09; accept [9, 15].
void criterion_em_cev() {
  const PositivityRow row = table_cell("cev", SchemeKind::em, 2, 10000);
  const bool pass = row.percent_pre_clamp >= 9.0 && row.percent_pre_clamp <= 15.0;
  report(2, "comparator nonpositivity, CEV / em", pass,
         fmt("%.3f%% in [9, 15] (reference value 12.09)", row.percent_pre_clamp));
}

// 3. Norm-truncated comparator on CEV at 1/4 (reference 6.19, accept [4, 9]);
//    interest-rate model at 2^-6: em (reference 8.93, accept [6, 12]) and
//    tem (reference 27.85, accept [21, 35]).
void criterion_tem_cells() {
  const PositivityRow cev_tem = table_cell("cev", SchemeKind::tem_norm, 2, 10000);
  const PositivityRow as_em = table_cell("ait_sahalia", SchemeKind::em, 6, 10000);
  const PositivityRow as_tem = table_cell("ait_sahalia", SchemeKind::tem_norm, 6, 10000);
  const bool pass = cev_tem.percent_pre_clamp >= 4.0 && cev_tem.percent_pre_clamp <= 9.0 &&
                    as_em.percent_pre_clamp >= 6.0 && as_em.percent_pre_clamp <= 12.0 &&
                    as_tem.percent_pre_clamp >= 21.0 && as_tem.percent_pre_clamp <= 35.0;
  report(3, "comparator nonpositivity, CEV / tem and interest-rate / em, tem", pass,
         fmt("cev tem %.3f%% in [4, 9]; as em %.3f%% in [6, 12]; as tem %.3f%% in [21, 35]",
             cev_tem.percent_pre_clamp, as_em.percent_pre_clamp, as_tem.percent_pre_clamp));
}

ErrorTable ladder(const char* model, SchemeKind scheme, long paths) {
  const ResolvedModel m = make_model(model);
  ConvergenceConfig cfg;
  cfg.model = m.spec;
  cfg.x0 = m.x0;
  cfg.scheme = scheme;
  cfg.T = m.T;
  cfg.ref_delta = std::ldexp(1.0, -14);
  cfg.test_deltas = {std::ldexp(1.0, -8), std::ldexp(1.0, -9), std::ldexp(1.0, -10),
                     std::ldexp(1.0, -11), std::ldexp(1.0, -12)};
  cfg.paths = paths;
  cfg.master_seed = kSeed;
  cfg.policy = TruncationPolicy::for_model(m.spec);
  return run_convergence_study(cfg);
}

// 4. Strong order of the clamped scheme on the five stable benchmark
//    systems: fitted slope in [0.35, 0.75] with 2000 coupled paths against a
//    2^-14 reference of the same scheme.
void criterion_orders() {
  bool pass = true;
  std::ostringstream detail;
  for (const char* model :
       {"ginzburg_landau", "cev_lamperti", "ait_sahalia", "sirs", "hiv_aids"}) {
    const ErrorTable t = ladder(model, SchemeKind::pptem, 2000);
    const bool ok = std::isfinite(t.fitted_order) && t.fitted_order >= 0.35 &&
                    t.fitted_order <= 0.75;
    pass = pass && ok;
    detail << model << "=" << fmt("%.3f", t.fitted_order) << (ok ? " " : "! ");
  }
  report(4, "strong-order slopes in [0.35, 0.75]", pass, detail.str());
}

// 5. The competitive three-species system at desk scale: the clamped scheme
//    reproduces the reference error ladder; both comparators blow up at the
//    three coarsest steps and match the reference error once stable.
void criterion_lv_table() {
  const ErrorTable pp = ladder("lotka_volterra_3d", SchemeKind::pptem, 10000);
  const ErrorTable em = ladder("lotka_volterra_3d", SchemeKind::em, 10000);
  const ErrorTable tem = ladder("lotka_volterra_3d", SchemeKind::tem_norm, 10000);

  const bool pp_level = pp.rows[0].rms_error >= 0.30 && pp.rows[0].rms_error <= 0.65;
  const bool pp_slope = pp.fitted_order >= 0.60 && pp.fitted_order <= 0.90;
  bool comparators_nan = true;
  for (int i = 0; i < 3; ++i) {
    comparators_nan = comparators_nan && std::isnan(em.rows[i].rms_error) &&
                      em.rows[i].diverged_count > 0 && std::isnan(tem.rows[i].rms_error) &&
                      tem.rows[i].diverged_count > 0;
  }
  const double em11 = em.rows[3].rms_error;
  const bool em_level = std::isfinite(em11) && em11 >= 0.0914 / 2.0 && em11 <= 0.0914 * 2.0;

  report(5, "reference error table of the competitive system",
         pp_level && pp_slope && comparators_nan && em_level,
         fmt("pptem rms(2^-8)=%.4f in [0.30, 0.65] (reference 0.4538), slope=%.3f in "
             "[0.60, 0.90]; comparators NaN at 2^-8..2^-10 %s; em rms(2^-11)=%.4f vs 0.0914",
             pp.rows[0].rms_error, pp.fitted_order, comparators_nan ? "yes" : "NO", em11));
}

// 6. The componentwise clamp is nonexpansive, idempotent and range-bounded:
//    100000 random pairs across dimensions 1, 2, 3, 5 and ten intervals.
void criterion_nonexpansive() {
  long violations = 0;
  long pairs = 0;
  std::uint64_t draw = 0;
  const auto uniform = [&draw](std::uint64_t stream) {
    const auto out = philox4x32({static_cast<std::uint32_t>(draw), static_cast<std::uint32_t>(draw >> 32),
                                 static_cast<std::uint32_t>(stream), 0xacce97u},
                                {0xdeedu, 0u});
    ++draw;
    return uniform_from_bits((static_cast<std::uint64_t>(out[0]) << 32) | out[1]);
  };
  for (int d : {1, 2, 3, 5}) {
    for (int ivk = 0; ivk < 10; ++ivk) {
      const double upper = 1.0 + 30.0 * uniform(0);
      const ClampInterval iv{1.0 / upper, upper};
      for (int rep = 0; rep < 2500; ++rep) {
        StateVector x(d), y(d);
        for (int c = 0; c < d; ++c) {
          x[c] = -80.0 + 160.0 * uniform(1);
          y[c] = -80.0 + 160.0 * uniform(1);
        }
        const StateVector px = pi_delta(x, iv);
        const StateVector py = pi_delta(y, iv);
        ++pairs;
        if (euclidean_distance(px, py) > euclidean_distance(x, y) * (1.0 + 1e-12)) ++violations;
        for (int c = 0; c < d; ++c) {
          if (std::fabs(px[c] - py[c]) > std::fabs(x[c] - y[c])) ++violations;
          if (px[c] < iv.lower || px[c] > iv.upper) ++violations;
        }
        const StateVector pxx = pi_delta(px, iv);
        if (pxx != px) ++violations;
      }
    }
  }
  report(6, "clamp nonexpansiveness, idempotence and range", violations == 0,
         fmt("%ld violations over %ld pairs", violations, pairs));
}

// 7. Known-order oracle: Euler steps on dx = -x dt + 0.5 dB have strong
//    order one, and the exact terminal value is a weighted sum of the stored
//    increments. Validates coupling, coarsening and the regression together.
void criterion_known_order() {
  ModelSpec ou;
  ou.d = 1;
  ou.m = 1;
  ou.drift = [](double, std::span<const double> x, std::span<double> out) { out[0] = -x[0]; };
  ou.diffusion = [](double, std::span<const double>, std::span<double> out) { out[0] = 0.5; };
  ou.name = "ou_toy";

  const double T = 1.0;
  const double fine_delta = std::ldexp(1.0, -14);
  const long n_fine = 1L << 14;
  const std::vector<long> factors{64, 128, 256, 512, 1024};  // steps 2^-8 .. 2^-4
  const long paths = 2000;
  const ClampInterval wide{1e-30, 1e30};

  std::vector<double> sq(factors.size(), 0.0);
  for (long path = 0; path < paths; ++path) {
    const IncrementGrid fine =
        generate_increments(kSeed, static_cast<std::uint64_t>(path), n_fine, 1, fine_delta);
    // Exact solution from the stored increments:
    //   x(T) = e^-T x0 + 0.5 * sum_j e^-(T - t_j) dB_j  (Ito sum on the fine grid).
    double integral = 0.0;
    for (long j = 0; j < n_fine; ++j)
      integral += std::exp(-(T - static_cast<double>(j) * fine_delta)) * fine(j, 0);
    const double exact = std::exp(-T) * 1.0 + 0.5 * integral;

    for (std::size_t i = 0; i < factors.size(); ++i) {
      const IncrementGrid coarse = coarsen(fine, factors[i]);
      const PathSummary s = run_path(ou, SchemeKind::em, coarse.delta, coarse.n_steps, coarse,
                                     StateVector{1.0}, wide);
      const double diff = s.terminal[0] - exact;
      sq[i] += diff * diff;
    }
  }
  std::vector<double> errors, deltas;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    errors.push_back(std::sqrt(sq[i] / static_cast<double>(paths)));
    deltas.push_back(fine_delta * static_cast<double>(factors[i]));
  }
  const double slope = fit_order(errors, deltas).first;
  report(7, "closed-form oracle recovers first order for additive-noise Euler",
         std::fabs(slope - 1.0) <= 0.1, fmt("fitted order %.3f within 1.0 +/- 0.1", slope));
}

// 8. Increment scaling of pure Brownian motion: the p-th root-mean increment
//    over half-step offsets scales like delta^(p/2).
void criterion_increment_scaling() {
  ModelSpec brownian;
  brownian.d = 1;
  brownian.m = 1;
  brownian.drift = [](double, std::span<const double>, std::span<double> out) { out[0] = 0.0; };
  brownian.diffusion = [](double, std::span<const double>, std::span<double> out) { out[0] = 1.0; };
  brownian.name = "brownian";
  const TruncationPolicy policy = TruncationPolicy::make(10.0, 1.5);
  const std::vector<double> deltas{std::ldexp(1.0, -5), std::ldexp(1.0, -6), std::ldexp(1.0, -7),
                                   std::ldexp(1.0, -8), std::ldexp(1.0, -9)};
  const ScalingReport r2 = increment_scaling_diagnostic(brownian, 2.0, deltas, 1.0, 400, kSeed,
                                                        policy, {10.0}, std::ldexp(1.0, -13));
  const ScalingReport r4 = increment_scaling_diagnostic(brownian, 4.0, deltas, 1.0, 400, kSeed,
                                                        policy, {10.0}, std::ldexp(1.0, -13));
  const bool pass = std::fabs(r2.fitted_slope - 1.0) <= 0.1 && std::fabs(r4.fitted_slope - 2.0) <= 0.2;
  report(8, "increment moment scaling on Brownian motion", pass,
         fmt("p=2 slope %.3f (target 1.0 +/- 0.1), p=4 slope %.3f (target 2.0 +/- 0.2)",
             r2.fitted_slope, r4.fitted_slope));
}

std::string body_of_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream body;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') continue;
    body << line << "\n";
  }
  return body.str();
}

// 9. Reruns of a study with 1, 2 and 8 workers emit byte-identical CSV bodies.
void criterion_determinism() {
  bool pass = true;
  std::string detail;
  for (const char* command : {"converge", "positivity"}) {
    std::string bodies[3];
    int i = 0;
    for (const char* threads : {"1", "2", "8"}) {
      const std::string out_dir =
          (std::filesystem::temp_directory_path() / (std::string("pptem_accept_") + command + threads))
              .string();
      std::vector<std::pair<std::string, std::string>> overrides{
          {"model", "ginzburg_landau"}, {"paths", "500"},    {"threads", threads},
          {"ref_delta", "2^-10"},       {"test_deltas", "2^-6 2^-7 2^-8"},
          {"deltas", "2^-3 2^-4"},      {"schemes", "em,tem,pptem"},
          {"out_dir", out_dir}};
      const RunConfig cfg = parse_config(std::nullopt, overrides, command);
      const RunResult result = run(cfg);
      std::string all;
      for (const auto& file : result.files_written) all += body_of_file(file);
      bodies[i++] = all;
    }
    const bool ok = !bodies[0].empty() && bodies[0] == bodies[1] && bodies[0] == bodies[2];
    pass = pass && ok;
    detail += std::string(command) + (ok ? " ok; " : " MISMATCH; ");
  }
  report(9, "byte-identical outputs across 1/2/8 workers", pass, detail);
}

}  // namespace

int main() {
  criterion_positivity();
  criterion_em_cev();
  criterion_tem_cells();
  criterion_orders();
  criterion_lv_table();
  criterion_nonexpansive();
  criterion_known_order();
  criterion_increment_scaling();
  criterion_determinism();
  std::printf("%d of 9 criteria passed\n", 9 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
