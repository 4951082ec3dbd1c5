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

#include "pptem/assumptions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "pptem/noise.hpp"

namespace pptem {

namespace {

// Deterministic uniform stream for sampling studies, independent of the
// simulation streams (separate key space via the stream id).
double uniform_draw(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed),
                                            static_cast<std::uint32_t>(seed >> 32)};
  const std::array<std::uint32_t, 4> counter = {
      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
      static_cast<std::uint32_t>(stream), 0x5eedu};
  const auto out = philox4x32(counter, key);
  return uniform_from_bits((static_cast<std::uint64_t>(out[0]) << 32) | out[1]);
}

StateVector sample_state(const Region& region, std::uint64_t seed, std::uint64_t stream,
                         long index) {
  const std::size_t d = region.lo.size();
  StateVector x(d);
  for (std::size_t c = 0; c < d; ++c) {
    const double u = uniform_draw(seed, stream, static_cast<std::uint64_t>(index) * d + c);
    x[c] = std::exp(std::log(region.lo[c]) + u * (std::log(region.hi[c]) - std::log(region.lo[c])));
  }
  return x;
}

std::vector<double> evaluation_times(const ModelSpec&, const SamplingOptions& options) {
  // Rates in this catalog have period 2; covering [0, 2] covers a full cycle.
  // Autonomous coefficients simply ignore the argument.
  std::vector<double> times;
  const int n = std::max(1, options.time_grid);
  for (int i = 0; i < n; ++i)
    times.push_back(2.0 * static_cast<double>(i) / static_cast<double>(std::max(1, n - 1)));
  return times;
}

double frobenius_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace

Region Region::cube(int d, double lo, double hi) {
  if (!(lo > 0.0 && hi > lo)) throw std::invalid_argument("region: need 0 < lo < hi");
  Region r;
  r.lo.assign(static_cast<std::size_t>(d), lo);
  r.hi.assign(static_cast<std::size_t>(d), hi);
  return r;
}

AssumptionReport check_lipschitz_growth(const ModelSpec& model, const Region& region,
                                        const SamplingOptions& options) {
  if (options.n_samples < 1000)
    throw std::invalid_argument("lipschitz check: need at least 1000 sample pairs");
  const int d = model.d;
  const int m = model.m;
  const auto times = evaluation_times(model, options);

  AssumptionReport report;
  report.assumption = "lipschitz-growth";
  double worst_ratio = 0.0;

  StateVector fx(d), fy(d), gx(static_cast<std::size_t>(d) * m), gy(gx.size());
  for (long s = 0; s < options.n_samples; ++s) {
    const StateVector x = sample_state(region, options.seed, 0, s);
    const StateVector y = sample_state(region, options.seed, 1, s);
    const double dist = euclidean_distance(x, y);
    if (dist == 0.0) continue;  // degenerate pair
    const double nx = euclidean_norm(x), ny = euclidean_norm(y);
    const double envelope = (1.0 + std::pow(nx, model.alpha) + std::pow(ny, model.alpha) +
                             std::pow(nx, -model.beta) + std::pow(ny, -model.beta)) *
                            dist;
    for (double t : times) {
      model.drift(t, x, fx);
      model.drift(t, y, fy);
      model.diffusion(t, x, gx);
      model.diffusion(t, y, gy);
      const double num =
          std::max(euclidean_distance(fx, fy), frobenius_distance(gx, gy));
      const double ratio = num / envelope;
      if (ratio > worst_ratio) {
        worst_ratio = ratio;
        report.witness_x = x;
        report.witness_y = y;
      }
    }
  }

  report.constants["empirical_K1"] = worst_ratio;
  report.constants["declared_K1"] = model.lipschitz_scale;
  report.worst_margin = model.lipschitz_scale - worst_ratio;
  report.pass = report.worst_margin >= -options.tolerance;
  return report;
}

AssumptionReport check_dissipativity(const ModelSpec& model, double p_bar, double q_bar,
                                     const Region& region, const SamplingOptions& options) {
  if (!(p_bar > 1.0)) throw std::invalid_argument("dissipativity check: p_bar must exceed 1");
  if (!(q_bar > 0.0)) throw std::invalid_argument("dissipativity check: q_bar must be positive");
  const int d = model.d;
  const int m = model.m;
  const long n = options.n_samples;
  const auto times = evaluation_times(model, options);

  AssumptionReport report;
  report.assumption = "dissipativity";
  report.pass = true;
  report.worst_margin = std::numeric_limits<double>::infinity();

  // Evaluate both regime quantities for every sample over the time grid.
  std::vector<StateVector> samples;
  samples.reserve(static_cast<std::size_t>(n));
  for (long s = 0; s < n; ++s) samples.push_back(sample_state(region, options.seed, 2, s));

  StateVector fx(d), gx(static_cast<std::size_t>(d) * m);
  std::vector<double> small_margin(static_cast<std::size_t>(n));
  std::vector<double> large_ratio(static_cast<std::size_t>(n));

  for (int i = 0; i < d; ++i) {
    for (long s = 0; s < n; ++s) {
      const StateVector& x = samples[static_cast<std::size_t>(s)];
      double margin = std::numeric_limits<double>::infinity();
      double ratio = -std::numeric_limits<double>::infinity();
      for (double t : times) {
        model.drift(t, x, fx);
        model.diffusion(t, x, gx);
        double row = 0.0;
        for (int j = 0; j < m; ++j) {
          const double g = gx[static_cast<std::size_t>(i) * m + j];
          row += g * g;
        }
        const double xf = x[static_cast<std::size_t>(i)] * fx[static_cast<std::size_t>(i)];
        margin = std::min(margin, xf - 0.5 * (q_bar + 1.0) * row);
        const double xi2 = x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
        ratio = std::max(ratio, (xf + 0.5 * (p_bar - 1.0) * row) / (1.0 + xi2));
      }
      small_margin[static_cast<std::size_t>(s)] = margin;
      large_ratio[static_cast<std::size_t>(s)] = ratio;
    }

    std::vector<long> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](long a, long b) {
      return samples[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)] <
             samples[static_cast<std::size_t>(b)][static_cast<std::size_t>(i)];
    });

    // Largest prefix of the sorted samples on which the small-state
    // inequality holds; the threshold sits at its upper edge. Keep at least
    // a tenth of the samples in the large regime so K_i means something.
    long feasible = 0;
    double prefix_min = std::numeric_limits<double>::infinity();
    while (feasible < n) {
      const double v = small_margin[static_cast<std::size_t>(order[static_cast<std::size_t>(feasible)])];
      if (v < -options.tolerance) break;
      prefix_min = std::min(prefix_min, v);
      ++feasible;
    }
    const std::string suffix = "_" + std::to_string(i + 1);
    if (feasible == 0) {
      report.pass = false;
      const StateVector& w = samples[static_cast<std::size_t>(order[0])];
      const double v = small_margin[static_cast<std::size_t>(order[0])];
      if (v < report.worst_margin) {
        report.worst_margin = v;
        report.witness_x = w;
      }
      report.notes.push_back("component " + std::to_string(i + 1) +
                             ": small-state inequality fails near the region floor");
      continue;
    }
    const long cap = std::max<long>(1, n - n / 10);
    const long split = std::min(feasible, cap);
    double k2 = 0.0;
    for (long s = split; s < n; ++s)
      k2 = std::max(k2, large_ratio[static_cast<std::size_t>(order[static_cast<std::size_t>(s)])]);
    report.constants["xbar" + suffix] =
        samples[static_cast<std::size_t>(order[static_cast<std::size_t>(split - 1)])]
               [static_cast<std::size_t>(i)];
    report.constants["K2" + suffix] = k2;
    report.worst_margin = std::min(report.worst_margin, prefix_min);
  }
  return report;
}

AssumptionReport check_monotonicity(const ModelSpec& model, double p, const Region& region,
                                    const SamplingOptions& options, double k3_budget) {
  if (!(p > 2.0)) throw std::invalid_argument("monotonicity check: p must exceed 2");
  const int d = model.d;
  const int m = model.m;
  const auto times = evaluation_times(model, options);

  AssumptionReport report;
  report.assumption = "monotonicity";
  double worst = -std::numeric_limits<double>::infinity();

  StateVector fx(d), fy(d), gx(static_cast<std::size_t>(d) * m), gy(gx.size());
  for (long s = 0; s < options.n_samples; ++s) {
    const StateVector x = sample_state(region, options.seed, 3, s);
    const StateVector y = sample_state(region, options.seed, 4, s);
    double dist2 = 0.0;
    for (int i = 0; i < d; ++i) {
      const double dd = x[static_cast<std::size_t>(i)] - y[static_cast<std::size_t>(i)];
      dist2 += dd * dd;
    }
    if (dist2 == 0.0) continue;
    for (double t : times) {
      model.drift(t, x, fx);
      model.drift(t, y, fy);
      model.diffusion(t, x, gx);
      model.diffusion(t, y, gy);
      double inner = 0.0;
      for (int i = 0; i < d; ++i)
        inner += (x[static_cast<std::size_t>(i)] - y[static_cast<std::size_t>(i)]) *
                 (fx[static_cast<std::size_t>(i)] - fy[static_cast<std::size_t>(i)]);
      const double gdist = frobenius_distance(gx, gy);
      const double ratio = (inner + 0.5 * (p - 1.0) * gdist * gdist) / dist2;
      if (ratio > worst) {
        worst = ratio;
        report.witness_x = x;
        report.witness_y = y;
      }
    }
  }

  report.constants["empirical_K3"] = worst;
  report.worst_margin = k3_budget - worst;
  report.pass = std::isfinite(worst) && report.worst_margin >= -options.tolerance;
  return report;
}

}  // namespace pptem
