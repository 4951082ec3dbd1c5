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

#include "pptem/schemes.hpp"

#include <cmath>
#include <stdexcept>

namespace pptem {

namespace {

inline bool any_nonpositive(std::span<const double> x) {
  for (double v : x) {
    if (v <= 0.0) return true;
  }
  return false;
}

inline void norm_truncate_into(std::span<const double> x, double bound, std::span<double> out) {
  double s = 0.0;
  for (double v : x) s += v * v;
  const double n = std::sqrt(s);
  if (n > bound && n > 0.0) {
    const double scale = bound / n;
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] * scale;
  } else {
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i];
  }
}

// x + f(y) dt + g(y) dB, with f, g evaluated at the base point y.
inline void explicit_increment(const ModelSpec& model, double t, double delta,
                               std::span<const double> x, std::span<const double> base,
                               std::span<const double> db, std::span<double> fx,
                               std::span<double> gx, std::span<double> out) {
  model.drift(t, base, fx);
  model.diffusion(t, base, gx);
  const int d = model.d;
  const int m = model.m;
  for (int i = 0; i < d; ++i) {
    double noise = 0.0;
    const double* row = gx.data() + static_cast<std::size_t>(i) * m;
    for (int j = 0; j < m; ++j) noise += row[j] * db[j];
    out[i] = x[i] + fx[i] * delta + noise;
  }
}

}  // namespace

PptemStep pptem_step(std::span<const double> x, double t, double delta, std::span<const double> db,
                     const ModelSpec& model, const ClampInterval& iv) {
  if (static_cast<int>(x.size()) != model.d || static_cast<int>(db.size()) != model.m)
    throw std::invalid_argument("pptem_step: dimension mismatch");
  PptemStep step;
  step.raw.resize(x.size());
  StateVector fx(model.d), gx(static_cast<std::size_t>(model.d) * model.m);
  explicit_increment(model, t, delta, x, x, db, fx, gx, step.raw);
  if (!all_finite(step.raw)) {
    // Unreachable when the current state is clamped (coefficients are bounded
    // on the clamp box), but guarded so a divergence is reported, not UB.
    step.diverged = true;
    step.next = step.raw;
    return step;
  }
  step.next = pi_delta(step.raw, iv);
  return step;
}

ExplicitStep em_step(std::span<const double> x, double t, double delta, std::span<const double> db,
                     const ModelSpec& model) {
  if (static_cast<int>(x.size()) != model.d || static_cast<int>(db.size()) != model.m)
    throw std::invalid_argument("em_step: dimension mismatch");
  ExplicitStep step;
  if (model.absorb_nonpositive && any_nonpositive(x)) {
    step.diverged = true;
    return step;
  }
  step.next.resize(x.size());
  StateVector fx(model.d), gx(static_cast<std::size_t>(model.d) * model.m);
  explicit_increment(model, t, delta, x, x, db, fx, gx, step.next);
  if (!all_finite(step.next)) step.diverged = true;
  return step;
}

ExplicitStep tem_step(std::span<const double> x, double t, double delta, std::span<const double> db,
                      const ModelSpec& model, double bound) {
  if (static_cast<int>(x.size()) != model.d || static_cast<int>(db.size()) != model.m)
    throw std::invalid_argument("tem_step: dimension mismatch");
  ExplicitStep step;
  const StateVector base = norm_truncate(x, bound);
  if (model.absorb_nonpositive && any_nonpositive(base)) {
    step.diverged = true;
    return step;
  }
  step.next.resize(x.size());
  StateVector fx(model.d), gx(static_cast<std::size_t>(model.d) * model.m);
  explicit_increment(model, t, delta, x, base, db, fx, gx, step.next);
  if (!all_finite(step.next)) step.diverged = true;
  return step;
}

StateVector one_step_psi(std::span<const double> x, double t, double delta,
                         std::span<const double> db, const ModelSpec& model,
                         const ClampInterval& iv) {
  if (static_cast<int>(x.size()) != model.d || static_cast<int>(db.size()) != model.m)
    throw std::invalid_argument("one_step_psi: dimension mismatch");
  const StateVector base = pi_delta(x, iv);
  StateVector out(x.size());
  StateVector fx(model.d), gx(static_cast<std::size_t>(model.d) * model.m);
  explicit_increment(model, t, delta, base, base, db, fx, gx, out);
  return out;
}

PathSummary run_path(const ModelSpec& model, SchemeKind scheme, double delta, long n_steps,
                     const IncrementGrid& increments, std::span<const double> x0,
                     const ClampInterval& iv, PathObserver* observer) {
  if (static_cast<int>(x0.size()) != model.d)
    throw std::invalid_argument("run_path: x0 does not match the model dimension");
  if (increments.m != model.m)
    throw std::invalid_argument("run_path: increment grid does not match the Brownian dimension");
  if (increments.n_steps < n_steps)
    throw std::invalid_argument("run_path: increment grid shorter than n_steps");
  if (n_steps > 0 && std::fabs(increments.delta - delta) > 1e-12 * delta)
    throw std::invalid_argument("run_path: increment grid step size mismatch");

  PathSummary summary;
  summary.terminal.assign(x0.begin(), x0.end());

  const int d = model.d;
  const int m = model.m;
  StateVector x(x0.begin(), x0.end());
  StateVector raw(d), fx(d), gx(static_cast<std::size_t>(d) * m), base(d);

  for (long k = 0; k < n_steps; ++k) {
    const double t = static_cast<double>(k) * delta;
    const std::span<const double> db = increments.row(k);

    switch (scheme) {
      case SchemeKind::pptem: {
        explicit_increment(model, t, delta, x, x, db, fx, gx, raw);
        if (!all_finite(raw)) {
          summary.diverged = true;
          return summary;
        }
        if (any_nonpositive(raw)) {
          summary.nonpositive_values++;
          if (!summary.first_nonpositive_step) summary.first_nonpositive_step = k + 1;
        }
        pi_delta(raw, iv, x);
        break;
      }
      case SchemeKind::em:
      case SchemeKind::tem_norm: {
        std::span<const double> eval = x;
        if (scheme == SchemeKind::tem_norm) {
          norm_truncate_into(x, iv.upper, base);
          eval = base;
        }
        if (model.absorb_nonpositive && any_nonpositive(eval)) {
          summary.diverged = true;
          return summary;
        }
        explicit_increment(model, t, delta, x, eval, db, fx, gx, raw);
        if (!all_finite(raw)) {
          summary.diverged = true;
          return summary;
        }
        if (any_nonpositive(raw)) {
          summary.nonpositive_values++;
          if (!summary.first_nonpositive_step) summary.first_nonpositive_step = k + 1;
        }
        x = raw;
        break;
      }
    }

    summary.steps_recorded = k + 1;
    if (any_nonpositive(x)) summary.nonpositive_post_values++;
    if (observer) observer->on_step(k + 1, t + delta, raw, x);
    summary.terminal = x;
  }
  return summary;
}

namespace {

class RecordingObserver final : public PathObserver {
 public:
  explicit RecordingObserver(Trajectory& out) : out_(out) {}
  void on_step(long k, double t, std::span<const double> pre, std::span<const double> post) override {
    out_.times.push_back(t);
    out_.pre_clamp.emplace_back(pre.begin(), pre.end());
    out_.post_clamp.emplace_back(post.begin(), post.end());
    (void)k;
  }

 private:
  Trajectory& out_;
};

}  // namespace

Trajectory simulate_path(const ModelSpec& model, SchemeKind scheme, double delta, long n_steps,
                         const IncrementGrid& increments, std::span<const double> x0,
                         const ClampInterval& iv) {
  Trajectory trajectory;
  trajectory.times.push_back(0.0);
  trajectory.pre_clamp.emplace_back(x0.begin(), x0.end());
  trajectory.post_clamp.emplace_back(x0.begin(), x0.end());
  RecordingObserver observer(trajectory);
  const PathSummary summary = run_path(model, scheme, delta, n_steps, increments, x0, iv, &observer);
  trajectory.diverged = summary.diverged;
  trajectory.first_nonpositive_step = summary.first_nonpositive_step;
  return trajectory;
}

}  // namespace pptem
