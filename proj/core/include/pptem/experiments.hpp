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
#include <span>
#include <utility>
#include <vector>

#include "pptem/model.hpp"
#include "pptem/schemes.hpp"
#include "pptem/truncation.hpp"

namespace pptem {

// ---- terminal mean-square error vs step size --------------------------------

struct ConvergenceConfig {
  ModelSpec model;
  StateVector x0;
  SchemeKind scheme = SchemeKind::pptem;
  double T = 1.0;
  double ref_delta = 0.0;               // finest grid; reference runs here
  std::vector<double> test_deltas;      // descending, power-of-two multiples of ref_delta
  long paths = 100000;
  std::uint64_t master_seed = 12345;
  TruncationPolicy policy;
  int threads = 0;                      // 0 = hardware concurrency
};

struct ErrorTable {
  struct Row {
    double delta = 0.0;
    double rms_error = 0.0;   // NaN when any path in the cell diverged
    long diverged_count = 0;  // test-run divergences
  };
  std::vector<Row> rows;            // sorted by delta descending
  long ref_diverged_count = 0;      // reference-run divergences (also NaN the cells)
  double fitted_order = 0.0;        // log-log slope over the usable rows
  double fit_intercept = 0.0;
  long excluded_rows = 0;           // NaN / nonpositive rows dropped from the fit
};

/// Root-mean-square Euclidean distance over paired terminal states. A NaN in
/// any pair makes the result NaN.
double rms_error(const std::vector<StateVector>& numeric, const std::vector<StateVector>& reference);

/// Least-squares fit of log2(error) against log2(delta); the slope is the
/// empirical strong order. NaN and nonpositive errors are excluded (their
/// count is reported via ErrorTable); fewer than two usable points yield NaN.
std::pair<double, double> fit_order(std::span<const double> errors, std::span<const double> deltas);

/// For every path: generates increments once on the finest grid, runs the
/// reference there, then block-sums the same increments for each coarser step
/// size and runs the scheme again, so all runs of a path share one Brownian
/// path. Terminal distances are accumulated in path order, which makes the
/// result bitwise independent of the worker count.
ErrorTable run_convergence_study(const ConvergenceConfig& cfg);

// ---- positivity percentages --------------------------------------------------

enum class PositivityCounting {
  per_path,   // a path counts once if any monitored iterate is nonpositive
  per_value,  // nonpositive monitored iterates / (paths * steps)
};

struct PositivityRow {
  SchemeKind scheme = SchemeKind::em;
  double delta = 0.0;
  double percent = 0.0;            // monitored sequence; post-clamp for pptem
  double percent_pre_clamp = 0.0;  // raw iterates; differs from percent only for pptem
  long diverged_paths = 0;
  long paths = 0;
};

struct PositivityOptions {
  PositivityCounting counting = PositivityCounting::per_value;
  int threads = 0;
};

PositivityRow positivity_stats(const ModelSpec& model, SchemeKind scheme, double delta, double T,
                               long paths, std::uint64_t master_seed,
                               const TruncationPolicy& policy, StateVector x0,
                               const PositivityOptions& options = {});

// ---- moment stability diagnostic ----------------------------------------------

struct MomentDiagnosticConfig {
  double p_bar = 4.0;        // > 1
  double q_bar = 1.0;        // > 0
  int sample_times = 17;     // equally spaced in [0, T], endpoints included
  double stability_factor = 2.0;
};

struct MomentRow {
  double delta = 0.0;
  double sup_p_moment = 0.0;  // sup over sample times of mean |X(t)|^p_bar
  double sup_q_moment = 0.0;  // sup over sample times of mean |X(t)|^-q_bar
  long diverged_paths = 0;
};

struct MomentReport {
  std::vector<MomentRow> rows;
  double p_ratio = 0.0;  // max/min of sup_p_moment across step sizes
  double q_ratio = 0.0;
  bool stable = false;   // both ratios finite and <= stability_factor
};

/// Estimates sup_t E|X(t)|^p and E|X(t)|^-q per step size and reports whether
/// the estimates stay bounded as the step size decreases. Instability is a
/// finding, not an error.
MomentReport moment_diagnostic(const ModelSpec& model, SchemeKind scheme,
                               std::span<const double> deltas, double T, long paths,
                               std::uint64_t master_seed, const TruncationPolicy& policy,
                               StateVector x0, const MomentDiagnosticConfig& cfg, int threads = 0);

// ---- increment scaling diagnostic ----------------------------------------------

struct ScalingRow {
  double delta = 0.0;
  double mean_increment_power = 0.0;  // mean |X(t_k + delta/2) - X(t_k)|^p
};

struct ScalingReport {
  std::vector<ScalingRow> rows;
  double fitted_slope = 0.0;  // log-log slope across step sizes
  double target = 0.0;        // p / 2
};

/// Uses a fine positivity-preserving path as a stand-in for the exact
/// solution and measures E|X(t) - X(t_k)|^p for t half a step past t_k, per
/// candidate step size; the fitted slope should approach p/2.
ScalingReport increment_scaling_diagnostic(const ModelSpec& model, double p,
                                           std::span<const double> deltas, double T, long paths,
                                           std::uint64_t master_seed,
                                           const TruncationPolicy& policy, StateVector x0,
                                           double fine_delta, int threads = 0);

}  // namespace pptem
