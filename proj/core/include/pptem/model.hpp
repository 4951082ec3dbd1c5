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

#include <functional>
#include <span>
#include <string>
#include <string_view>

#include "pptem/state.hpp"

namespace pptem {

/// Drift f : R^d_+ -> R^d. The time argument serves non-autonomous systems;
/// autonomous models ignore it. Evaluators must be pure: the same input
/// yields the bitwise-same output on every call and every thread.
using DriftFn = std::function<void(double t, std::span<const double> x, std::span<double> out)>;

/// Diffusion g : R^d_+ -> R^{d x m}, written row-major into `out`.
using DiffusionFn = std::function<void(double t, std::span<const double> x, std::span<double> out)>;

/// An SDE dX = f(X)dt + g(X)dB with strictly positive solutions, plus the
/// declared growth/singularity exponents used to size the truncation bounds.
struct ModelSpec {
  int d = 1;
  int m = 1;
  DriftFn drift;
  DiffusionFn diffusion;

  /// Polynomial growth exponent of the coefficients (> 0).
  double alpha = 1.0;
  /// Singular exponent near the boundary of the positive cone (> 0). Models
  /// without singular terms declare a nominal value; alpha and beta only feed
  /// the clamp rate gamma = max(alpha, beta + 1).
  double beta = 0.5;
  /// Scale constant K1 of the local Lipschitz bound
  ///   |f(x)-f(y)| v |g(x)-g(y)| <= K1 (1+|x|^a+|y|^a+|x|^-b+|y|^-b) |x-y|.
  double lipschitz_scale = 1.0;

  /// Set when the coefficients are undefined somewhere outside the positive
  /// cone (a pole or a fractional power). Explicit schemes that would have to
  /// evaluate f, g at such a point flag the path as diverged instead.
  bool absorb_nonpositive = false;

  /// Default truncation-policy constants for this model. clamp_scale is the
  /// K0 prefactor of the clamp bound and clamp_rate its widening exponent
  /// k-bar in (0, 1/2]; both are admissible choices within the scheme's
  /// constraints and are tuned so the clamp sits outside the bulk of the
  /// invariant distribution at the benchmark step sizes.
  double clamp_scale = 1.0;
  double clamp_rate = 0.5;

  std::string name;
};

enum class SchemeKind { em, tem_norm, pptem };

const char* to_string(SchemeKind k);
SchemeKind scheme_from_string(std::string_view s);

}  // namespace pptem
