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

#include <benchmark/benchmark.h>

#include <cmath>

#include "pptem/experiments.hpp"
#include "pptem/models.hpp"
#include "pptem/noise.hpp"
#include "pptem/schemes.hpp"

namespace {

using namespace pptem;

void BM_NormalDraw(benchmark::State& state) {
  std::uint64_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(normal_draw(42, 7, i++));
  }
}
BENCHMARK(BM_NormalDraw);

void BM_GenerateIncrements(benchmark::State& state) {
  const long n = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(generate_increments(42, 7, n, 1, 1.0 / static_cast<double>(n)));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_GenerateIncrements)->Arg(1 << 10)->Arg(1 << 14);

void BM_Coarsen(benchmark::State& state) {
  const IncrementGrid fine = generate_increments(42, 7, 1 << 14, 1, std::ldexp(1.0, -14));
  for (auto _ : state) {
    benchmark::DoNotOptimize(coarsen(fine, 64));
  }
}
BENCHMARK(BM_Coarsen);

void BM_PiDelta(benchmark::State& state) {
  const ClampInterval iv{0.25, 4.0};
  StateVector x{0.1, 1.0, 5.0};
  StateVector out(3);
  for (auto _ : state) {
    pi_delta(x, iv, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_PiDelta);

void BM_PathGinzburgLandau(benchmark::State& state) {
  const ModelSpec gl = ginzburg_landau(1.0, 5.0);
  const auto policy = TruncationPolicy::for_model(gl);
  const double delta = std::ldexp(1.0, -10);
  const long n = 1 << 10;
  const ClampInterval iv = clamp_interval(delta, policy);
  const IncrementGrid grid = generate_increments(42, 0, n, 1, delta);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_path(gl, SchemeKind::pptem, delta, n, grid, StateVector{1.0}, iv));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_PathGinzburgLandau);

void BM_PathLotkaVolterra(benchmark::State& state) {
  const ModelSpec lv = lotka_volterra_3d();
  const auto policy = TruncationPolicy::for_model(lv);
  const double delta = std::ldexp(1.0, -10);
  const long n = 1 << 10;
  const ClampInterval iv = clamp_interval(delta, policy);
  const IncrementGrid grid = generate_increments(42, 0, n, 1, delta);
  const StateVector x0{0.5, 2.0, 1.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_path(lv, SchemeKind::pptem, delta, n, grid, x0, iv));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_PathLotkaVolterra);

void BM_ConvergenceStudyGL(benchmark::State& state) {
  ConvergenceConfig cfg;
  cfg.model = ginzburg_landau(1.0, 5.0);
  cfg.x0 = {1.0};
  cfg.scheme = SchemeKind::pptem;
  cfg.T = 1.0;
  cfg.ref_delta = std::ldexp(1.0, -10);
  cfg.test_deltas = {std::ldexp(1.0, -6), std::ldexp(1.0, -7), std::ldexp(1.0, -8)};
  cfg.paths = 64;
  cfg.master_seed = 42;
  cfg.policy = TruncationPolicy::for_model(cfg.model);
  cfg.threads = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_convergence_study(cfg));
  }
}
BENCHMARK(BM_ConvergenceStudyGL)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
