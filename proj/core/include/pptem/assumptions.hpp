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
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "pptem/model.hpp"
#include "pptem/state.hpp"

namespace pptem {

/// Componentwise positive box; checker samples are log-uniform inside it.
struct Region {
  StateVector lo;
  StateVector hi;
  static Region cube(int d, double lo = 1e-3, double hi = 1e3);
};

/// Result of a numerical hypothesis check. These are sampling studies: they
/// report empirical constants and the worst witness found, never an analytic
/// certificate. pass means worst_margin >= -tolerance.
struct AssumptionReport {
  std::string assumption;
  bool pass = false;
  double worst_margin = 0.0;
  StateVector witness_x;
  StateVector witness_y;                       // second point, when the check is pairwise
  std::map<std::string, double> constants;     // empirical K1 / (x̄_i, K2_i) / K3 ...
  std::vector<std::string> notes;
};

struct SamplingOptions {
  long n_samples = 10000;
  std::uint64_t seed = 2026;
  double tolerance = 1e-9;
  int time_grid = 17;      // evaluation times in [0, 2] for non-autonomous models
};

/// Local Lipschitz / growth check: samples pairs (x, y) and compares the
/// ratio (|f(x)-f(y)| v |g(x)-g(y)|) / ((1+|x|^a+|y|^a+|x|^-b+|y|^-b)|x-y|)
/// against the declared scale constant. The sample supremum is reported as
/// the empirical K1.
AssumptionReport check_lipschitz_growth(const ModelSpec& model, const Region& region,
                                        const SamplingOptions& options = {});

/// Componentwise dissipativity split: for each component i, searches for a
/// threshold x̄_i such that  x_i f_i(x) - (q+1)/2 |g_i(x)|^2 >= 0  below it
/// and  x_i f_i(x) + (p-1)/2 |g_i(x)|^2 <= K_i (1 + x_i^2)  above it. Reports
/// the split with the smallest feasible K_i, or failure with a witness when
/// the small-state inequality already fails near the region floor.
AssumptionReport check_dissipativity(const ModelSpec& model, double p_bar, double q_bar,
                                     const Region& region, const SamplingOptions& options = {});

/// One-sided monotonicity check: the sample supremum of
///   (<x-y, f(x)-f(y)> + (p-1)/2 |g(x)-g(y)|^2) / |x-y|^2
/// is the empirical K3; pass compares it to k3_budget (default: any finite
/// value passes).
AssumptionReport check_monotonicity(const ModelSpec& model, double p, const Region& region,
                                    const SamplingOptions& options = {},
                                    double k3_budget = std::numeric_limits<double>::infinity());

}  // namespace pptem
