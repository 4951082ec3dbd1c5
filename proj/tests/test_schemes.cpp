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

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "doctest.h"
#include "pptem/models.hpp"
#include "pptem/noise.hpp"
#include "pptem/schemes.hpp"

using namespace pptem;

namespace {

ModelSpec toy(DriftFn f, DiffusionFn g, bool absorb = false) {
  ModelSpec m;
  m.d = 1;
  m.m = 1;
  m.drift = std::move(f);
  m.diffusion = std::move(g);
  m.name = "toy";
  m.absorb_nonpositive = absorb;
  return m;
}

const DriftFn kZeroF = [](double, std::span<const double>, std::span<double> out) { out[0] = 0.0; };
const DiffusionFn kZeroG = [](double, std::span<const double>, std::span<double> out) {
  out[0] = 0.0;
};
const DiffusionFn kUnitG = [](double, std::span<const double>, std::span<double> out) {
  out[0] = 1.0;
};

}  // namespace

TEST_CASE("pptem step: deterministic Ginzburg-Landau update") {
  const ModelSpec gl = ginzburg_landau(1.0, 5.0);  // drift(1) = 12.5
  const ClampInterval iv{0.25, 4.0};
  const StateVector x{1.0};
  const StateVector db{0.0};
  const PptemStep step = pptem_step(x, 0.0, std::ldexp(1.0, -8), db, gl, iv);
  CHECK(step.raw[0] == 1.048828125);  // 1 + 12.5/256, exact in binary
  CHECK(step.next[0] == 1.048828125);
  CHECK_FALSE(step.diverged);
}

TEST_CASE("pptem step: frozen dynamics leave interior states alone") {
  const ModelSpec frozen = toy(kZeroF, kZeroG);
  const ClampInterval iv{0.5, 2.0};
  const PptemStep step = pptem_step(StateVector{1.3}, 0.0, 0.1, StateVector{0.7}, frozen, iv);
  CHECK(step.raw[0] == 1.3);
  CHECK(step.next[0] == 1.3);
}

TEST_CASE("pptem step: the clamp rescues a negative excursion") {
  const ModelSpec brownian = toy(kZeroF, kUnitG);
  const ClampInterval iv{0.5, 2.0};
  const PptemStep step = pptem_step(StateVector{1.0}, 0.0, 1.0 / 16.0, StateVector{-2.0},
                                    brownian, iv);
  CHECK(step.raw[0] == -1.0);
  CHECK(step.next[0] == 0.5);
}

TEST_CASE("em step reduces to explicit Euler without noise") {
  const ModelSpec decay =
      toy([](double, std::span<const double> x, std::span<double> out) { out[0] = -x[0]; }, kZeroG);
  const ExplicitStep step = em_step(StateVector{1.0}, 0.0, 0.5, StateVector{0.0}, decay);
  CHECK(step.next[0] == 0.5);
  CHECK_FALSE(step.diverged);
}

TEST_CASE("em on the CEV diffusion dies after a sign change") {
  const ModelSpec model = cev(4.0, 0.5, 1.0, 0.55);
  const double delta = 0.25;
  // Find an increment that pushes the state negative (one exists because the
  // diffusion coefficient does not vanish at x = 0.01).
  StateVector x{0.01};
  double crossing = 0.0;
  for (double db = 0.0; db >= -10.0; db -= 0.01) {
    const ExplicitStep step = em_step(x, 0.0, delta, StateVector{db}, model);
    if (step.next[0] < 0.0) {
      crossing = db;
      break;
    }
  }
  REQUIRE(crossing < 0.0);
  const ExplicitStep negative = em_step(x, 0.0, delta, StateVector{crossing}, model);
  REQUIRE(negative.next[0] < 0.0);
  CHECK_FALSE(negative.diverged);  // the nonpositive value itself is still recorded
  // The next step evaluates x^0.55 at a negative point: NaN, hence divergence.
  const ExplicitStep dead = em_step(negative.next, delta, delta, StateVector{0.0}, model);
  CHECK(dead.diverged);
}

TEST_CASE("tem step matches em inside the truncation ball") {
  const ModelSpec gl = ginzburg_landau(1.0, 5.0);
  const StateVector x{0.8};
  const StateVector db{0.03};
  const ExplicitStep a = em_step(x, 0.0, 0.01, db, gl);
  const ExplicitStep b = tem_step(x, 0.0, 0.01, db, gl, 10.0);
  CHECK(std::memcmp(a.next.data(), b.next.data(), sizeof(double)) == 0);
}

TEST_CASE("tem step evaluates coefficients at the rescaled point") {
  const ModelSpec linear =
      toy([](double, std::span<const double> x, std::span<double> out) { out[0] = x[0]; },
          [](double, std::span<const double> x, std::span<double> out) { out[0] = 2.0 * x[0]; });
  const double bound = 1.5;
  const StateVector x{3.0};  // |x| = 2 * bound, so the base point is x/2
  const ExplicitStep step = tem_step(x, 0.0, 0.25, StateVector{0.5}, linear, bound);
  CHECK(step.next[0] == doctest::Approx(3.0 + 1.5 * 0.25 + 3.0 * 0.5).epsilon(1e-15));
}

TEST_CASE("one-step map clamps before evaluating") {
  const ModelSpec gl = ginzburg_landau(1.0, 5.0);
  const ClampInterval iv{0.25, 4.0};

  // Interior positive input: identical to the em update.
  const StateVector x{1.1};
  const StateVector db{-0.02};
  const StateVector psi = one_step_psi(x, 0.0, 0.01, db, gl, iv);
  const ExplicitStep em = em_step(x, 0.0, 0.01, db, gl);
  CHECK(std::memcmp(psi.data(), em.next.data(), sizeof(double)) == 0);

  // Degenerate step: psi reduces to the clamp itself.
  const StateVector squashed = one_step_psi(StateVector{-3.0}, 0.0, 0.0, StateVector{0.0}, gl, iv);
  CHECK(squashed[0] == 0.25);
}

TEST_CASE("chaining the one-step map reproduces the scheme recursion") {
  const ModelSpec gl = ginzburg_landau(1.0, 5.0);
  const double delta = std::ldexp(1.0, -6);
  const long n = 64;
  const IncrementGrid grid = generate_increments(321, 0, n, 1, delta);
  const ClampInterval iv{0.25, 4.0};
  const Trajectory traj = simulate_path(gl, SchemeKind::pptem, delta, n, grid, StateVector{1.0}, iv);
  REQUIRE_FALSE(traj.diverged);

  StateVector z{1.0};
  for (long k = 0; k < n; ++k) {
    z = one_step_psi(z, static_cast<double>(k) * delta, delta, grid.row(k), gl, iv);
    CHECK(std::memcmp(z.data(), traj.pre_clamp[k + 1].data(), sizeof(double)) == 0);
    const StateVector clamped = pi_delta(z, iv);
    CHECK(std::memcmp(clamped.data(), traj.post_clamp[k + 1].data(), sizeof(double)) == 0);
  }
}

TEST_CASE("simulate_path with zero steps returns just the initial state") {
  const ModelSpec gl = ginzburg_landau(1.0, 5.0);
  IncrementGrid empty;
  empty.m = 1;
  const Trajectory traj =
      simulate_path(gl, SchemeKind::pptem, 0.1, 0, empty, StateVector{1.0}, ClampInterval{0.5, 2.0});
  CHECK(traj.times == std::vector<double>{0.0});
  CHECK(traj.post_clamp.size() == 1);
  CHECK_FALSE(traj.diverged);
  CHECK_FALSE(traj.first_nonpositive_step.has_value());
}

TEST_CASE("pptem keeps every state strictly positive") {
  const ModelSpec gl = ginzburg_landau(1.0, 5.0);
  const auto policy = TruncationPolicy::for_model(gl);
  const double delta = std::ldexp(1.0, -8);
  const long n = 256;
  const ClampInterval iv = clamp_interval(delta, policy);
  for (std::uint64_t path = 0; path < 64; ++path) {
    const IncrementGrid grid = generate_increments(777, path, n, 1, delta);
    const Trajectory traj = simulate_path(gl, SchemeKind::pptem, delta, n, grid, StateVector{1.0}, iv);
    REQUIRE_FALSE(traj.diverged);
    for (const StateVector& x : traj.post_clamp) CHECK(x[0] > 0.0);
  }
}

TEST_CASE("em on the Lotka-Volterra system fails on most coarse paths") {
  const ModelSpec lv = lotka_volterra_3d();
  const auto policy = TruncationPolicy::for_model(lv);
  const double delta = std::ldexp(1.0, -8);
  const long n = 256;
  const ClampInterval iv = clamp_interval(delta, policy);
  const StateVector x0{0.5, 2.0, 1.0};
  long diverged = 0;
  const long paths = 400;
  for (long p = 0; p < paths; ++p) {
    const IncrementGrid grid = generate_increments(2026, static_cast<std::uint64_t>(p), n, 1, delta);
    const PathSummary s = run_path(lv, SchemeKind::em, delta, n, grid, x0, iv);
    diverged += s.diverged ? 1 : 0;
  }
  CHECK(diverged > paths / 2);
}

TEST_CASE("pptem and em agree bitwise while the clamp stays inactive") {
  const ModelSpec hiv = hiv_aids();
  const double delta = std::ldexp(1.0, -6);
  const long n = 64;
  const ClampInterval wide{1e-30, 1e30};
  for (std::uint64_t path = 0; path < 16; ++path) {
    const IncrementGrid grid = generate_increments(99, path, n, 1, delta);
    const StateVector x0{2.0, 1.0, 1.0};
    const PathSummary a = run_path(hiv, SchemeKind::pptem, delta, n, grid, x0, wide);
    const PathSummary b = run_path(hiv, SchemeKind::em, delta, n, grid, x0, wide);
    REQUIRE_FALSE(a.diverged);
    REQUIRE_FALSE(b.diverged);
    CHECK(std::memcmp(a.terminal.data(), b.terminal.data(), 3 * sizeof(double)) == 0);
  }
}

TEST_CASE("sirs conserves its population identity step by step") {
  const ResolvedModel sirs_model = make_model("sirs");
  const double delta = std::ldexp(1.0, -6);
  const long n = 64;
  const IncrementGrid grid = generate_increments(4, 0, n, 1, delta);
  const Trajectory traj = simulate_path(sirs_model.spec, SchemeKind::em, delta, n, grid,
                                        sirs_model.x0, ClampInterval{1e-30, 1e30});
  REQUIRE_FALSE(traj.diverged);
  const double pi_const = 3.14159265358979323846;
  for (long k = 0; k < n; ++k) {
    const auto& a = traj.post_clamp[static_cast<std::size_t>(k)];
    const auto& b = traj.post_clamp[static_cast<std::size_t>(k + 1)];
    const double total_a = a[0] + a[1] + a[2];
    const double total_b = b[0] + b[1] + b[2];
    const double mu_t = 1.0 + 0.3 * std::cos(pi_const * static_cast<double>(k) * delta);
    CHECK(std::fabs(total_b - (total_a + mu_t * (1.0 - total_a) * delta)) <= 1e-12);
  }
}

TEST_CASE("hiv conserves its population identity step by step") {
  const ResolvedModel hiv_model = make_model("hiv_aids");
  const double delta = std::ldexp(1.0, -6);
  const long n = 64;
  const IncrementGrid grid = generate_increments(5, 0, n, 1, delta);
  const Trajectory traj = simulate_path(hiv_model.spec, SchemeKind::em, delta, n, grid,
                                        hiv_model.x0, ClampInterval{1e-30, 1e30});
  REQUIRE_FALSE(traj.diverged);
  for (long k = 0; k < n; ++k) {
    const auto& a = traj.post_clamp[static_cast<std::size_t>(k)];
    const auto& b = traj.post_clamp[static_cast<std::size_t>(k + 1)];
    const double expected =
        a[0] + a[1] + a[2] + (1.0 - 0.5 * (a[0] + a[1]) - (0.5 + 0.4) * a[2]) * delta;
    CHECK(std::fabs(b[0] + b[1] + b[2] - expected) <= 1e-12);
  }
}

TEST_CASE("one-step map contracts up to a step-proportional factor") {
  // Empirical version of the stability inequality:
  //   |pi(x)-pi(y) + (f_D(x)-f_D(y)) dt|^2 + dt |g_D(x)-g_D(y)|^2
  //     <= (1 + C dt) |x-y|^2.
  // The smallest admissible C over the sampled pairs is reported, not pinned.
  const ModelSpec gl = ginzburg_landau(1.0, 5.0);
  const auto policy = TruncationPolicy::for_model(gl);
  double c_required = 0.0;
  for (int k = 6; k <= 12; k += 2) {
    const double delta = std::ldexp(1.0, -k);
    const ClampInterval iv = clamp_interval(delta, policy);
    for (int rep = 0; rep < 4000; ++rep) {
      const double x = 1e-3 + 8.0 * std::fabs(normal_draw(1, 0, static_cast<std::uint64_t>(rep)));
      const double y = x + 0.5 * normal_draw(1, 1, static_cast<std::uint64_t>(rep));
      if (y <= 0.0 || x == y) continue;
      const StateVector px = pi_delta(StateVector{x}, iv);
      const StateVector py = pi_delta(StateVector{y}, iv);
      StateVector fx(1), fy(1), gx(1), gy(1);
      gl.drift(0.0, px, fx);
      gl.drift(0.0, py, fy);
      gl.diffusion(0.0, px, gx);
      gl.diffusion(0.0, py, gy);
      const double lhs_mean = px[0] - py[0] + (fx[0] - fy[0]) * delta;
      const double lhs = lhs_mean * lhs_mean + delta * (gx[0] - gy[0]) * (gx[0] - gy[0]);
      const double rhs0 = (x - y) * (x - y);
      c_required = std::max(c_required, (lhs / rhs0 - 1.0) / delta);
    }
  }
  MESSAGE("smallest admissible stability constant over sampled pairs: ", c_required);
  CHECK(std::isfinite(c_required));
  CHECK(c_required >= 0.0);
}

TEST_CASE("run_path rejects mismatched inputs") {
  const ModelSpec gl = ginzburg_landau(1.0, 5.0);
  const IncrementGrid grid = generate_increments(1, 0, 8, 1, 0.125);
  const ClampInterval iv{0.5, 2.0};
  CHECK_THROWS_AS(run_path(gl, SchemeKind::em, 0.125, 8, grid, StateVector{1.0, 2.0}, iv),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_path(gl, SchemeKind::em, 0.25, 8, grid, StateVector{1.0}, iv),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_path(gl, SchemeKind::em, 0.125, 9, grid, StateVector{1.0}, iv),
                  std::invalid_argument);
}
