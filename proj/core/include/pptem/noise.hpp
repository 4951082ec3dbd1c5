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

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace pptem {

/// Brownian increments on a uniform grid: n_steps rows of m independent
/// Normal(0, delta) draws. The matrix is a pure function of
/// (master_seed, path_index, step, component); no generator state is shared
/// between paths, which is what makes parallel runs reproducible.
struct IncrementGrid {
  std::uint64_t master_seed = 0;
  std::uint64_t path_index = 0;
  long n_steps = 0;
  int m = 1;
  double delta = 0.0;
  std::vector<double> values;  // n_steps x m, row-major

  double operator()(long step, int component) const {
    return values[static_cast<std::size_t>(step) * m + component];
  }
  std::span<const double> row(long step) const {
    return {values.data() + static_cast<std::size_t>(step) * m, static_cast<std::size_t>(m)};
  }
};

/// Counter-based generator core: one block of the Philox-4x32 function with
/// the canonical ten rounds. Stateless, so any (counter, key) cell of the
/// stream can be computed directly.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Uniform in the open interval (0, 1) from 64 random bits (53-bit mantissa,
/// offset by half an ulp so 0 and 1 are unreachable).
double uniform_from_bits(std::uint64_t bits);

/// Inverse of the standard normal CDF (Wichura's PPND16 rational
/// approximation, accurate to ~1e-16 over (0,1)). This is the documented
/// deterministic uniform-to-normal transform: draw k of a stream is always
/// inverse_normal_cdf applied to uniform k.
double inverse_normal_cdf(double p);

/// Standard normal draw `draw_index` of the stream keyed by
/// (master_seed, path_index). Stable across releases: Philox-4x32-10 with
/// key = (lo32(seed), hi32(seed)) and counter = (lo32(i), hi32(i),
/// lo32(path), hi32(path)), first two output words forming the uniform.
double normal_draw(std::uint64_t master_seed, std::uint64_t path_index, std::uint64_t draw_index);

/// Fills the grid entry (k, j) with sqrt(delta) * normal_draw(seed, path, k*m+j).
/// Identical arguments give bitwise-identical matrices regardless of call
/// order, thread, or how many other paths were generated.
IncrementGrid generate_increments(std::uint64_t master_seed, std::uint64_t path_index, long n_steps,
                                  int m, double delta);

/// Block-sums a fine grid into a coarse one: coarse step k is the sum of fine
/// steps [k*factor, (k+1)*factor). The coarse and fine grids then reconstruct
/// the same Brownian path at every shared time, which is what couples runs at
/// different step sizes in an error study. Requires factor >= 2 and
/// fine.n_steps divisible by factor.
IncrementGrid coarsen(const IncrementGrid& fine, long factor);

}  // namespace pptem
