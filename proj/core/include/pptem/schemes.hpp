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

#include <optional>
#include <span>
#include <vector>

#include "pptem/model.hpp"
#include "pptem/noise.hpp"
#include "pptem/state.hpp"
#include "pptem/truncation.hpp"

namespace pptem {

/// Full record of one simulated path. pre_clamp holds the raw iterates
/// (which may leave the positive cone), post_clamp the clamped states the
/// scheme actually advances. For em/tem_norm the two sequences coincide.
/// first_nonpositive_step refers to the monitored sequence: the raw iterate
/// for pptem (post-clamp states are positive by construction) and the scheme
/// iterate for em/tem_norm.
struct Trajectory {
  std::vector<double> times;
  std::vector<StateVector> pre_clamp;
  std::vector<StateVector> post_clamp;
  bool diverged = false;
  std::optional<long> first_nonpositive_step;
};

/// One positivity-preserving step: raw = x + f(x) dt + g(x) dB evaluated at
/// the (strictly positive) current state, then next = clamp of raw.
struct PptemStep {
  StateVector raw;   // pre-clamp iterate
  StateVector next;  // clamped state, strictly positive
  bool diverged = false;
};
PptemStep pptem_step(std::span<const double> x, double t, double delta, std::span<const double> db,
                     const ModelSpec& model, const ClampInterval& iv);

/// Plain explicit Euler-Maruyama step. For models whose coefficients are
/// undefined off the positive cone, a nonpositive component in x flags the
/// step as diverged rather than evaluating f, g there; otherwise the
/// coefficients are evaluated as written and any NaN/inf they produce
/// propagates into the iterate.
struct ExplicitStep {
  StateVector next;
  bool diverged = false;
};
ExplicitStep em_step(std::span<const double> x, double t, double delta, std::span<const double> db,
                     const ModelSpec& model);

/// Norm-truncated EM comparator: coefficients are evaluated at the point
/// rescaled into the ball |y| <= bound. Rescaling keeps signs, so a
/// nonpositive component survives truncation and triggers the same domain
/// handling as em_step.
ExplicitStep tem_step(std::span<const double> x, double t, double delta, std::span<const double> db,
                      const ModelSpec& model, double bound);

/// The scheme as a one-step map on raw iterates:
///   psi(x) = clamp(x) + f(clamp(x)) dt + g(clamp(x)) dB.
/// Unlike pptem_step, the input may be any real vector; the clamp is applied
/// first. Chaining psi over the raw iterates and clamping reproduces the
/// pptem recursion exactly.
StateVector one_step_psi(std::span<const double> x, double t, double delta,
                         std::span<const double> db, const ModelSpec& model,
                         const ClampInterval& iv);

/// Per-path bookkeeping shared by all drivers. A "monitored" iterate is the
/// raw pre-clamp value for pptem and the scheme iterate for em/tem_norm;
/// x0 itself is not monitored. Iterates stop being recorded at the first
/// NaN/inf (or domain exit for absorbing models), which also sets diverged.
struct PathSummary {
  bool diverged = false;
  long steps_recorded = 0;            // monitored iterates actually produced
  std::optional<long> first_nonpositive_step;
  long nonpositive_values = 0;        // monitored iterates with a component <= 0
  long nonpositive_post_values = 0;   // same count on post-clamp states
  StateVector terminal;               // last recorded post state (x0 if none)
};

/// Observer hook for drivers that need more than the summary; called once
/// per recorded step with the pre- and post-clamp states.
class PathObserver {
 public:
  virtual ~PathObserver() = default;
  virtual void on_step(long k, double t, std::span<const double> pre,
                       std::span<const double> post) = 0;
};

/// Advances n_steps of the chosen scheme from x0, consuming rows
/// 0..n_steps-1 of the increment grid. x0 must be strictly positive and the
/// grid must match the model dimension and step size.
PathSummary run_path(const ModelSpec& model, SchemeKind scheme, double delta, long n_steps,
                     const IncrementGrid& increments, std::span<const double> x0,
                     const ClampInterval& iv, PathObserver* observer = nullptr);

/// run_path with full state recording.
Trajectory simulate_path(const ModelSpec& model, SchemeKind scheme, double delta, long n_steps,
                         const IncrementGrid& increments, std::span<const double> x0,
                         const ClampInterval& iv);

}  // namespace pptem
