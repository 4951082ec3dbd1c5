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

#include "pptem/truncation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace pptem {

namespace {
constexpr double kRelTol = 1e-12;
}

TruncationPolicy TruncationPolicy::make(double h0, double gamma, double k0_hat, double k_bar,
                                        std::optional<double> u_hat) {
  if (!(h0 > 0.0)) throw std::invalid_argument("truncation policy: h0 must be positive");
  if (!(gamma > 0.0)) throw std::invalid_argument("truncation policy: gamma must be positive");
  if (!(k0_hat >= 1.0)) throw std::invalid_argument("truncation policy: k0_hat must be >= 1");
  if (!(k_bar > 0.0 && k_bar <= 0.5))
    throw std::invalid_argument("truncation policy: k_bar must lie in (0, 1/2]");
  TruncationPolicy p;
  p.h0 = h0;
  p.gamma = gamma;
  p.k0_hat = k0_hat;
  p.k_bar = k_bar;
  p.u_hat = u_hat ? *u_hat : 2.0 * h0 * std::pow(k0_hat, gamma);
  return p;
}

TruncationPolicy TruncationPolicy::for_model(const ModelSpec& model) {
  const double gamma = std::max(model.alpha, model.beta + 1.0);
  // |f(1,...,1)| at t = 0; the growth-bound scale must dominate it.
  StateVector ones(static_cast<std::size_t>(model.d), 1.0);
  StateVector f1(static_cast<std::size_t>(model.d), 0.0);
  model.drift(0.0, ones, f1);
  const double f1_norm = euclidean_norm(f1);
  const double growth = 21.0 * std::pow(static_cast<double>(model.d), 0.5 * (model.alpha + 1.0)) *
                        model.lipschitz_scale;
  return make(std::max(growth, f1_norm), gamma, model.clamp_scale, model.clamp_rate);
}

double phi(double r, const TruncationPolicy& policy) {
  if (!(r > 1.0)) throw std::invalid_argument("phi: argument must be > 1");
  return 2.0 * policy.h0 * std::pow(r, policy.gamma);
}

double phi_inv(double y, const TruncationPolicy& policy) {
  if (!(y > 2.0 * policy.h0)) throw std::invalid_argument("phi_inv: argument must be > phi(1)");
  return std::pow(y / (2.0 * policy.h0), 1.0 / policy.gamma);
}

double h_bound(double delta, const TruncationPolicy& policy) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("h_bound: delta must be in (0,1)");
  return 2.0 * policy.h0 * std::pow(policy.k0_hat, policy.gamma) * std::pow(delta, -policy.k_bar);
}

ClampInterval clamp_interval(double delta, const TruncationPolicy& policy) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("clamp_interval: delta must be in (0,1)");
  ClampInterval iv;
  iv.upper = policy.k0_hat * std::pow(delta, -policy.k_bar / policy.gamma);
  iv.lower = 1.0 / iv.upper;
  return iv;
}

void pi_delta(std::span<const double> x, const ClampInterval& iv, std::span<double> out) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    double v = x[i];
    if (v < iv.lower) v = iv.lower;
    if (v > iv.upper) v = iv.upper;
    out[i] = v;  // NaN fails both comparisons and passes through
  }
}

StateVector pi_delta(std::span<const double> x, const ClampInterval& iv) {
  StateVector out(x.size());
  pi_delta(x, iv, out);
  return out;
}

StateVector norm_truncate(std::span<const double> x, double bound) {
  StateVector out(x.begin(), x.end());
  const double n = euclidean_norm(x);
  if (n > bound && n > 0.0) {
    const double scale = bound / n;
    for (double& v : out) v *= scale;
  }
  return out;
}

PolicyReport validate_policy(const TruncationPolicy& policy, std::span<const double> deltas) {
  std::vector<double> sorted(deltas.begin(), deltas.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());

  PolicyReport report;
  report.pass = true;
  const double phi_one = 2.0 * policy.h0;
  const double phi_k0 = 2.0 * policy.h0 * std::pow(policy.k0_hat, policy.gamma);
  double prev_h = std::numeric_limits<double>::infinity();
  bool first = true;
  for (double delta : sorted) {
    PolicyCheckRow row;
    row.delta = delta;
    row.h_value = h_bound(delta, policy);
    row.scaling_lhs = phi_k0 * std::pow(delta, 0.5 - policy.k_bar);
    row.scaling_mid = std::sqrt(delta) * row.h_value;
    row.above_phi_one = row.h_value > phi_one;
    row.scaling_ok = row.scaling_lhs <= row.scaling_mid * (1.0 + kRelTol) &&
                     row.scaling_mid <= policy.u_hat * (1.0 + kRelTol);
    row.decreasing = first || row.h_value > prev_h;
    first = false;
    prev_h = row.h_value;
    report.pass = report.pass && row.above_phi_one && row.scaling_ok && row.decreasing;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace pptem
