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

#include "pptem/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "pptem/noise.hpp"

namespace pptem {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Runs fn(path) for every path index. Work is pulled in blocks through an
// atomic counter; results must be written to per-path slots so the outcome
// does not depend on the worker count or the scheduling order.
void parallel_paths(long n_paths, int threads, const std::function<void(long)>& fn) {
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  if (threads == 1 || n_paths < 2) {
    for (long p = 0; p < n_paths; ++p) fn(p);
    return;
  }
  std::atomic<long> next{0};
  constexpr long kBlock = 8;
  auto worker = [&] {
    for (;;) {
      const long begin = next.fetch_add(kBlock);
      if (begin >= n_paths) return;
      const long end = std::min(begin + kBlock, n_paths);
      for (long p = begin; p < end; ++p) fn(p);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

long steps_for(double T, double delta, const char* what) {
  const double ratio = T / delta;
  const long n = std::lround(ratio);
  if (n < 1 || std::fabs(ratio - static_cast<double>(n)) > 1e-9)
    throw std::invalid_argument(std::string(what) + ": T must be an integer multiple of the step size");
  return n;
}

}  // namespace

double rms_error(const std::vector<StateVector>& numeric, const std::vector<StateVector>& reference) {
  if (numeric.size() != reference.size() || numeric.empty())
    throw std::invalid_argument("rms_error: lists must be nonempty and of equal length");
  double sum = 0.0;
  for (std::size_t i = 0; i < numeric.size(); ++i) {
    const double d = euclidean_distance(numeric[i], reference[i]);
    sum += d * d;  // NaN propagates, matching the table convention
  }
  return std::sqrt(sum / static_cast<double>(numeric.size()));
}

std::pair<double, double> fit_order(std::span<const double> errors, std::span<const double> deltas) {
  if (errors.size() != deltas.size() || errors.size() < 2)
    throw std::invalid_argument("fit_order: need matching lists with at least two entries");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  long n = 0;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!(errors[i] > 0.0) || !std::isfinite(errors[i])) continue;
    if (!(deltas[i] > 0.0)) throw std::invalid_argument("fit_order: step sizes must be positive");
    const double x = std::log2(deltas[i]);
    const double y = std::log2(errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) return {kNaN, kNaN};
  const double denom = static_cast<double>(n) * sxx - sx * sx;
  const double slope = (static_cast<double>(n) * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / static_cast<double>(n);
  return {slope, intercept};
}

ErrorTable run_convergence_study(const ConvergenceConfig& cfg) {
  if (cfg.paths < 1) throw std::invalid_argument("convergence study: need at least one path");
  if (!(cfg.ref_delta > 0.0 && cfg.ref_delta < 1.0))
    throw std::invalid_argument("convergence study: ref_delta must lie in (0,1)");
  if (cfg.test_deltas.empty())
    throw std::invalid_argument("convergence study: no test step sizes given");
  if (!in_positive_cone(cfg.x0))
    throw std::invalid_argument("convergence study: x0 must be strictly positive");

  const long n_ref = steps_for(cfg.T, cfg.ref_delta, "convergence study");
  std::vector<long> factors;
  for (double delta : cfg.test_deltas) {
    const double ratio = delta / cfg.ref_delta;
    const long f = std::lround(ratio);
    if (f < 2 || std::fabs(ratio - static_cast<double>(f)) > 1e-9 || (f & (f - 1)) != 0)
      throw std::invalid_argument(
          "convergence study: each test step must be a power-of-two multiple of ref_delta");
    factors.push_back(f);
  }

  const std::size_t n_deltas = cfg.test_deltas.size();
  const ClampInterval iv_ref = clamp_interval(cfg.ref_delta, cfg.policy);
  std::vector<ClampInterval> ivs;
  for (double delta : cfg.test_deltas) ivs.push_back(clamp_interval(delta, cfg.policy));

  // Per-path slots; reduced sequentially afterwards so the table is
  // bitwise-reproducible for any worker count.
  std::vector<double> sq_dist(static_cast<std::size_t>(cfg.paths) * n_deltas, 0.0);
  std::vector<unsigned char> test_diverged(sq_dist.size(), 0);
  std::vector<unsigned char> ref_diverged(static_cast<std::size_t>(cfg.paths), 0);

  parallel_paths(cfg.paths, cfg.threads, [&](long p) {
    const IncrementGrid fine = generate_increments(cfg.master_seed, static_cast<std::uint64_t>(p),
                                                   n_ref, cfg.model.m, cfg.ref_delta);
    const PathSummary ref =
        run_path(cfg.model, cfg.scheme, cfg.ref_delta, n_ref, fine, cfg.x0, iv_ref);
    ref_diverged[static_cast<std::size_t>(p)] = ref.diverged ? 1 : 0;
    for (std::size_t j = 0; j < n_deltas; ++j) {
      const IncrementGrid coarse = coarsen(fine, factors[j]);
      const PathSummary test = run_path(cfg.model, cfg.scheme, cfg.test_deltas[j],
                                        n_ref / factors[j], coarse, cfg.x0, ivs[j]);
      const std::size_t slot = static_cast<std::size_t>(p) * n_deltas + j;
      test_diverged[slot] = test.diverged ? 1 : 0;
      if (test.diverged || ref.diverged) {
        sq_dist[slot] = kNaN;
      } else {
        const double d = euclidean_distance(test.terminal, ref.terminal);
        sq_dist[slot] = d * d;
      }
    }
  });

  ErrorTable table;
  for (long p = 0; p < cfg.paths; ++p)
    table.ref_diverged_count += ref_diverged[static_cast<std::size_t>(p)];
  std::vector<double> errors(n_deltas, 0.0);
  for (std::size_t j = 0; j < n_deltas; ++j) {
    double sum = 0.0;
    long diverged = 0;
    for (long p = 0; p < cfg.paths; ++p) {
      const std::size_t slot = static_cast<std::size_t>(p) * n_deltas + j;
      sum += sq_dist[slot];
      diverged += test_diverged[slot];
    }
    ErrorTable::Row row;
    row.delta = cfg.test_deltas[j];
    row.rms_error = std::sqrt(sum / static_cast<double>(cfg.paths));
    row.diverged_count = diverged;
    errors[j] = row.rms_error;
    table.rows.push_back(row);
  }
  if (errors.size() >= 2) {
    const auto [slope, intercept] = fit_order(errors, cfg.test_deltas);
    table.fitted_order = slope;
    table.fit_intercept = intercept;
  } else {
    table.fitted_order = kNaN;
    table.fit_intercept = kNaN;
  }
  for (double e : errors) {
    if (!(e > 0.0) || !std::isfinite(e)) table.excluded_rows++;
  }
  return table;
}

PositivityRow positivity_stats(const ModelSpec& model, SchemeKind scheme, double delta, double T,
                               long paths, std::uint64_t master_seed,
                               const TruncationPolicy& policy, StateVector x0,
                               const PositivityOptions& options) {
  if (paths < 1) throw std::invalid_argument("positivity stats: need at least one path");
  const long n_steps = steps_for(T, delta, "positivity stats");
  const ClampInterval iv = clamp_interval(delta, policy);

  struct Slot {
    long nonpositive = 0;
    long nonpositive_post = 0;
    unsigned char any = 0;
    unsigned char any_post = 0;
    unsigned char diverged = 0;
  };
  std::vector<Slot> slots(static_cast<std::size_t>(paths));

  parallel_paths(paths, options.threads, [&](long p) {
    const IncrementGrid grid =
        generate_increments(master_seed, static_cast<std::uint64_t>(p), n_steps, model.m, delta);
    const PathSummary s = run_path(model, scheme, delta, n_steps, grid, x0, iv);
    Slot& slot = slots[static_cast<std::size_t>(p)];
    slot.nonpositive = s.nonpositive_values;
    slot.nonpositive_post = s.nonpositive_post_values;
    slot.any = s.nonpositive_values > 0 ? 1 : 0;
    slot.any_post = s.nonpositive_post_values > 0 ? 1 : 0;
    slot.diverged = s.diverged ? 1 : 0;
  });

  long values = 0, values_post = 0, paths_hit = 0, paths_hit_post = 0, diverged = 0;
  for (const Slot& slot : slots) {
    values += slot.nonpositive;
    values_post += slot.nonpositive_post;
    paths_hit += slot.any;
    paths_hit_post += slot.any_post;
    diverged += slot.diverged;
  }

  PositivityRow row;
  row.scheme = scheme;
  row.delta = delta;
  row.paths = paths;
  row.diverged_paths = diverged;
  const double denom_paths = static_cast<double>(paths);
  const double denom_values = static_cast<double>(paths) * static_cast<double>(n_steps);
  if (options.counting == PositivityCounting::per_path) {
    row.percent_pre_clamp = 100.0 * static_cast<double>(paths_hit) / denom_paths;
    row.percent = 100.0 * static_cast<double>(paths_hit_post) / denom_paths;
  } else {
    row.percent_pre_clamp = 100.0 * static_cast<double>(values) / denom_values;
    row.percent = 100.0 * static_cast<double>(values_post) / denom_values;
  }
  return row;
}

MomentReport moment_diagnostic(const ModelSpec& model, SchemeKind scheme,
                               std::span<const double> deltas, double T, long paths,
                               std::uint64_t master_seed, const TruncationPolicy& policy,
                               StateVector x0, const MomentDiagnosticConfig& cfg, int threads) {
  if (!(cfg.p_bar > 1.0)) throw std::invalid_argument("moment diagnostic: p_bar must exceed 1");
  if (!(cfg.q_bar > 0.0)) throw std::invalid_argument("moment diagnostic: q_bar must be positive");
  if (cfg.sample_times < 2) throw std::invalid_argument("moment diagnostic: need >= 2 sample times");

  MomentReport report;
  for (double delta : deltas) {
    const long n_steps = steps_for(T, delta, "moment diagnostic");
    const ClampInterval iv = clamp_interval(delta, policy);

    // Sample at the grid times nearest to an even split of [0, T].
    std::vector<long> sample_steps;
    for (int i = 0; i < cfg.sample_times; ++i) {
      const double t = T * static_cast<double>(i) / static_cast<double>(cfg.sample_times - 1);
      long k = std::lround(t / delta);
      if (k > n_steps) k = n_steps;
      if (sample_steps.empty() || sample_steps.back() != k) sample_steps.push_back(k);
    }
    const std::size_t n_times = sample_steps.size();

    struct Accumulator : PathObserver {
      std::span<const long> steps;
      double p_bar = 0.0, q_bar = 0.0;
      std::vector<double>* sums_p = nullptr;
      std::vector<double>* sums_q = nullptr;
      std::size_t cursor = 0;
      void on_step(long k, double, std::span<const double>, std::span<const double> post) override {
        while (cursor < steps.size() && steps[cursor] == k) {
          const double n = euclidean_norm(post);
          (*sums_p)[cursor] += std::pow(n, p_bar);
          (*sums_q)[cursor] += std::pow(n, -q_bar);
          ++cursor;
        }
      }
    };

    std::vector<std::vector<double>> path_p(static_cast<std::size_t>(paths)),
        path_q(static_cast<std::size_t>(paths));
    std::vector<unsigned char> diverged(static_cast<std::size_t>(paths), 0);

    parallel_paths(paths, threads, [&](long p) {
      std::vector<double> sums_p(n_times, 0.0), sums_q(n_times, 0.0);
      Accumulator acc;
      acc.steps = sample_steps;
      acc.p_bar = cfg.p_bar;
      acc.q_bar = cfg.q_bar;
      acc.sums_p = &sums_p;
      acc.sums_q = &sums_q;
      // Time zero is sampled from the initial state directly.
      if (!sample_steps.empty() && sample_steps.front() == 0) {
        const double n = euclidean_norm(x0);
        sums_p[0] += std::pow(n, cfg.p_bar);
        sums_q[0] += std::pow(n, -cfg.q_bar);
        acc.cursor = 1;
      }
      const IncrementGrid grid =
          generate_increments(master_seed, static_cast<std::uint64_t>(p), n_steps, model.m, delta);
      const PathSummary s = run_path(model, scheme, delta, n_steps, grid, x0, iv, &acc);
      diverged[static_cast<std::size_t>(p)] = s.diverged ? 1 : 0;
      path_p[static_cast<std::size_t>(p)] = std::move(sums_p);
      path_q[static_cast<std::size_t>(p)] = std::move(sums_q);
    });

    MomentRow row;
    row.delta = delta;
    std::vector<double> total_p(n_times, 0.0), total_q(n_times, 0.0);
    for (long p = 0; p < paths; ++p) {
      row.diverged_paths += diverged[static_cast<std::size_t>(p)];
      for (std::size_t i = 0; i < n_times; ++i) {
        total_p[i] += path_p[static_cast<std::size_t>(p)][i];
        total_q[i] += path_q[static_cast<std::size_t>(p)][i];
      }
    }
    if (row.diverged_paths > 0) {
      row.sup_p_moment = kNaN;
      row.sup_q_moment = kNaN;
    } else {
      for (std::size_t i = 0; i < n_times; ++i) {
        row.sup_p_moment = std::max(row.sup_p_moment, total_p[i] / static_cast<double>(paths));
        row.sup_q_moment = std::max(row.sup_q_moment, total_q[i] / static_cast<double>(paths));
      }
    }
    report.rows.push_back(row);
  }

  double p_min = std::numeric_limits<double>::infinity(), p_max = 0.0;
  double q_min = std::numeric_limits<double>::infinity(), q_max = 0.0;
  bool any_bad = false;
  for (const MomentRow& row : report.rows) {
    if (!std::isfinite(row.sup_p_moment) || !std::isfinite(row.sup_q_moment)) {
      any_bad = true;
      continue;
    }
    p_min = std::min(p_min, row.sup_p_moment);
    p_max = std::max(p_max, row.sup_p_moment);
    q_min = std::min(q_min, row.sup_q_moment);
    q_max = std::max(q_max, row.sup_q_moment);
  }
  report.p_ratio = p_min > 0.0 ? p_max / p_min : kNaN;
  report.q_ratio = q_min > 0.0 ? q_max / q_min : kNaN;
  report.stable = !any_bad && std::isfinite(report.p_ratio) && std::isfinite(report.q_ratio) &&
                  report.p_ratio <= cfg.stability_factor && report.q_ratio <= cfg.stability_factor;
  return report;
}

ScalingReport increment_scaling_diagnostic(const ModelSpec& model, double p,
                                           std::span<const double> deltas, double T, long paths,
                                           std::uint64_t master_seed,
                                           const TruncationPolicy& policy, StateVector x0,
                                           double fine_delta, int threads) {
  if (!(p >= 2.0)) throw std::invalid_argument("increment scaling: p must be >= 2");
  const long n_fine = steps_for(T, fine_delta, "increment scaling");
  for (double delta : deltas) {
    const long f = std::lround(delta / fine_delta);
    if (f < 2 || (f & 1) != 0 || std::fabs(delta / fine_delta - static_cast<double>(f)) > 1e-9)
      throw std::invalid_argument(
          "increment scaling: step sizes must be even multiples of the fine step");
  }
  const ClampInterval iv = clamp_interval(fine_delta, policy);

  struct Recorder : PathObserver {
    std::vector<double> states;  // (n_fine+1) x d
    int d = 0;
    void on_step(long, double, std::span<const double>, std::span<const double> post) override {
      states.insert(states.end(), post.begin(), post.end());
    }
  };

  // sums[path][j] accumulates |X(t_k + delta_j/2) - X(t_k)|^p over k.
  const std::size_t n_deltas = deltas.size();
  std::vector<std::vector<double>> sums(static_cast<std::size_t>(paths),
                                        std::vector<double>(n_deltas, 0.0));
  std::vector<std::vector<long>> counts(static_cast<std::size_t>(paths),
                                        std::vector<long>(n_deltas, 0));

  parallel_paths(paths, threads, [&](long path) {
    Recorder rec;
    rec.d = model.d;
    rec.states.reserve(static_cast<std::size_t>(n_fine + 1) * model.d);
    rec.states.insert(rec.states.end(), x0.begin(), x0.end());
    const IncrementGrid grid = generate_increments(master_seed, static_cast<std::uint64_t>(path),
                                                   n_fine, model.m, fine_delta);
    run_path(model, SchemeKind::pptem, fine_delta, n_fine, grid, x0, iv, &rec);
    const auto state_at = [&](long k) {
      return std::span<const double>(rec.states.data() + static_cast<std::size_t>(k) * model.d,
                                     static_cast<std::size_t>(model.d));
    };
    for (std::size_t j = 0; j < n_deltas; ++j) {
      const long f = std::lround(deltas[j] / fine_delta);
      for (long k = 0; k + f <= n_fine; k += f) {
        const double dist = euclidean_distance(state_at(k + f / 2), state_at(k));
        sums[static_cast<std::size_t>(path)][j] += std::pow(dist, p);
        counts[static_cast<std::size_t>(path)][j]++;
      }
    }
  });

  ScalingReport report;
  report.target = 0.5 * p;
  std::vector<double> means(n_deltas, 0.0);
  for (std::size_t j = 0; j < n_deltas; ++j) {
    double total = 0.0;
    long count = 0;
    for (long path = 0; path < paths; ++path) {
      total += sums[static_cast<std::size_t>(path)][j];
      count += counts[static_cast<std::size_t>(path)][j];
    }
    means[j] = total / static_cast<double>(count);
    report.rows.push_back({deltas[j], means[j]});
  }
  report.fitted_slope = fit_order(means, deltas).first;
  return report;
}

}  // namespace pptem
