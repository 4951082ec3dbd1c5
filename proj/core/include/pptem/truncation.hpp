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
#include "pptem/state.hpp"

namespace pptem {

/// Constants behind the coefficient bound phi(R) = 2*H0*R^gamma and the
/// step-size-dependent clamp bound L(delta) = k0_hat * delta^(-k_bar/gamma).
/// The implied bound function h(delta) = phi(L(delta)) then satisfies
///   phi(k0_hat) * delta^(1/2 - k_bar) <= sqrt(delta) * h(delta) <= u_hat
/// with u_hat = 2*H0*k0_hat^gamma whenever k_bar <= 1/2.
struct TruncationPolicy {
  double h0 = 1.0;      // growth-bound scale, >= max(21 d^((a+1)/2) K1, |f(1)|)
  double gamma = 1.5;   // max(alpha, beta + 1)
  double k0_hat = 1.0;  // >= 1
  double k_bar = 0.5;   // in (0, 1/2]
  double u_hat = 2.0;   // scaling ceiling, 2*h0*k0_hat^gamma by default

  /// Validates the constants; throws std::invalid_argument on violation.
  static TruncationPolicy make(double h0, double gamma, double k0_hat = 1.0, double k_bar = 0.5,
                               std::optional<double> u_hat = std::nullopt);

  /// Default policy for a model: gamma from the declared exponents, h0 from
  /// the declared K1 and a numerical evaluation of |f(1,...,1)|.
  static TruncationPolicy for_model(const ModelSpec& model);
};

/// Componentwise clamp range [lower, upper] with lower = 1/upper.
struct ClampInterval {
  double lower = 0.0;
  double upper = 0.0;
};

/// phi(R) = 2*H0*R^gamma, strictly increasing. Defined for R > 1.
double phi(double r, const TruncationPolicy& policy);

/// Inverse of phi: (y / (2*H0))^(1/gamma). Defined for y > phi(1) = 2*H0.
double phi_inv(double y, const TruncationPolicy& policy);

/// The bound function implied by the clamp choice:
/// h(delta) = phi(L(delta)) = 2*H0*k0_hat^gamma * delta^(-k_bar).
double h_bound(double delta, const TruncationPolicy& policy);

/// Clamp interval for a step size in (0,1): upper = k0_hat*delta^(-k_bar/gamma),
/// lower = 1/upper. upper is strictly decreasing in delta and diverges as
/// delta -> 0, so the clamp vanishes in the limit.
ClampInterval clamp_interval(double delta, const TruncationPolicy& policy);

/// Componentwise truncation into [iv.lower, iv.upper]. Accepts any real
/// input (negative components are mapped to the lower edge, which is the
/// positivity mechanism); the image always lies in the positive cone.
/// NaN components propagate unchanged.
void pi_delta(std::span<const double> x, const ClampInterval& iv, std::span<double> out);
StateVector pi_delta(std::span<const double> x, const ClampInterval& iv);

/// Classic Euclidean-norm truncation: x itself if |x| <= bound, otherwise
/// (bound/|x|) x. Rescaling preserves signs, so unlike the componentwise
/// clamp it cannot restore positivity. The zero vector is returned unchanged.
StateVector norm_truncate(std::span<const double> x, double bound);

struct PolicyCheckRow {
  double delta = 0.0;
  double h_value = 0.0;          // h(delta)
  double scaling_lhs = 0.0;      // phi(k0_hat) * delta^(1/2 - k_bar)
  double scaling_mid = 0.0;      // sqrt(delta) * h(delta)
  bool above_phi_one = false;    // h(delta) > phi(1)
  bool scaling_ok = false;       // lhs <= mid <= u_hat
  bool decreasing = false;       // h strictly decreasing vs previous delta
};

struct PolicyReport {
  std::vector<PolicyCheckRow> rows;
  bool pass = false;
};

/// Checks, for each step size, that h stays above phi(1), that the scaling
/// constraint holds, and that h is strictly decreasing across the sorted
/// step sizes. Failures are report entries, not errors.
PolicyReport validate_policy(const TruncationPolicy& policy, std::span<const double> deltas);

}  // namespace pptem
