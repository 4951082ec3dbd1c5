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

#include "pptem/noise.hpp"

#include <cmath>
#include <stdexcept>

namespace pptem {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void philox_round(std::array<std::uint32_t, 4>& ctr, const std::array<std::uint32_t, 2>& key) {
  const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * ctr[0];
  const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * ctr[2];
  const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
  const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
  ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kPhiloxW0;
      key[1] += kPhiloxW1;
    }
    philox_round(counter, key);
  }
  return counter;
}

double uniform_from_bits(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

double inverse_normal_cdf(double p) {
  // Wichura's PPND16 rational approximation.
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("inverse_normal_cdf: p must be in (0,1)");
  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                 6.7265770927008700853e4) * r +
                4.5921953931549871457e4) * r +
               1.3731693765509461125e4) * r +
              1.9715909503065514427e3) * r +
             1.3314166789178437745e2) * r +
            3.3871328727963666080e0) /
           (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                 3.9307895800092710610e4) * r +
                2.1213794301586595867e4) * r +
               5.3941960214247511077e3) * r +
              6.8718700749205790830e2) * r +
             4.2313330701600911252e1) * r +
            1.0);
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    value = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r +
                 1.27045825245236838258e0) * r +
                3.64784832476320460504e0) * r +
               5.76949722146069140550e0) * r +
              4.63033784615654529590e0) * r +
             1.42343711074968357734e0) /
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r +
                 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r +
               1.67638483018380384940e0) * r +
              2.05319162663775882187e0) * r +
             1.0);
  } else {
    r -= 5.0;
    value = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r +
                 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r +
               1.78482653991729133580e0) * r +
              5.46378491116411436990e0) * r +
             6.65790464350110377720e0) /
            (((((((1.42151175831644588870e-15 * r + 1.84631831751005468180e-6) * r +
                  7.86869131145613259100e-4) * r +
                 1.48753612908506148525e-2) * r +
                1.36929880922735805310e-1) * r +
               5.99832206555887937690e-1) * r +
              1.0));
  }
  return q < 0.0 ? -value : value;
}

double normal_draw(std::uint64_t master_seed, std::uint64_t path_index, std::uint64_t draw_index) {
  const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(master_seed),
                                            static_cast<std::uint32_t>(master_seed >> 32)};
  const std::array<std::uint32_t, 4> counter = {
      static_cast<std::uint32_t>(draw_index), static_cast<std::uint32_t>(draw_index >> 32),
      static_cast<std::uint32_t>(path_index), static_cast<std::uint32_t>(path_index >> 32)};
  const auto out = philox4x32(counter, key);
  const std::uint64_t bits = (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
  return inverse_normal_cdf(uniform_from_bits(bits));
}

IncrementGrid generate_increments(std::uint64_t master_seed, std::uint64_t path_index, long n_steps,
                                  int m, double delta) {
  if (n_steps < 1) throw std::invalid_argument("generate_increments: n_steps must be >= 1");
  if (m < 1) throw std::invalid_argument("generate_increments: m must be >= 1");
  if (!(delta > 0.0)) throw std::invalid_argument("generate_increments: delta must be positive");
  IncrementGrid grid;
  grid.master_seed = master_seed;
  grid.path_index = path_index;
  grid.n_steps = n_steps;
  grid.m = m;
  grid.delta = delta;
  grid.values.resize(static_cast<std::size_t>(n_steps) * m);
  const double scale = std::sqrt(delta);
  for (std::size_t i = 0; i < grid.values.size(); ++i) {
    grid.values[i] = scale * normal_draw(master_seed, path_index, i);
  }
  return grid;
}

IncrementGrid coarsen(const IncrementGrid& fine, long factor) {
  if (factor < 2) throw std::invalid_argument("coarsen: factor must be >= 2");
  if (fine.n_steps % factor != 0)
    throw std::invalid_argument("coarsen: n_steps must be divisible by factor");
  IncrementGrid coarse;
  coarse.master_seed = fine.master_seed;
  coarse.path_index = fine.path_index;
  coarse.n_steps = fine.n_steps / factor;
  coarse.m = fine.m;
  coarse.delta = fine.delta * static_cast<double>(factor);
  coarse.values.assign(static_cast<std::size_t>(coarse.n_steps) * coarse.m, 0.0);
  for (long k = 0; k < coarse.n_steps; ++k) {
    double* out = coarse.values.data() + static_cast<std::size_t>(k) * coarse.m;
    for (long i = k * factor; i < (k + 1) * factor; ++i) {
      const double* in = fine.values.data() + static_cast<std::size_t>(i) * fine.m;
      for (int j = 0; j < fine.m; ++j) out[j] += in[j];
    }
  }
  return coarse;
}

}  // namespace pptem
