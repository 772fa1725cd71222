// Copyright 2026 The Strategiq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "strategiq/gaussian_model.h"
#include "strategiq/linear_equilibrium.h"
#include "strategiq/metrics.h"
#include "strategiq/optimizer.h"
#include "strategiq/quantizer.h"

namespace strategiq {
namespace {

void BM_PartialMoments(benchmark::State& state) {
  const SourceSpec s = make_source(1, 1, 0.3);
  double a = -0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(partial_moments(s, 0.7, a, 1.25));
    a += 1e-9;
  }
}
BENCHMARK(BM_PartialMoments);

void BM_SolveLinear(benchmark::State& state) {
  const SourceSpec s = make_source(1, 1.5, 0.4);
  for (auto _ : state) benchmark::DoNotOptimize(solve_linear(s, 2.0));
}
BENCHMARK(BM_SolveLinear);

// range(0) = M, range(1) = theta nodes.
void BM_Evaluate(benchmark::State& state) {
  const SourceSpec s = make_source(1, 1, 0);
  const ThetaGrid g = make_theta_grid(s, static_cast<int>(state.range(1)),
                                      GridScheme::kGaussHermite);
  const Quantizer q = random_start(s, g, static_cast<int>(state.range(0)), 1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(q, s, g, 1.0));
}
BENCHMARK(BM_Evaluate)->Args({2, 17})->Args({8, 17})->Args({8, 65});

void BM_Gradient(benchmark::State& state) {
  const SourceSpec s = make_source(1, 1, 0);
  const ThetaGrid g = make_theta_grid(s, static_cast<int>(state.range(1)),
                                      GridScheme::kGaussHermite);
  const Quantizer q = random_start(s, g, static_cast<int>(state.range(0)), 1, 1);
  for (auto _ : state) benchmark::DoNotOptimize(gradient(q, s, g, 1.0));
}
BENCHMARK(BM_Gradient)->Args({2, 17})->Args({8, 17})->Args({8, 65});

void BM_Design(benchmark::State& state) {
  const SourceSpec s = make_source(1, 1, 0);
  const ThetaGrid g = make_theta_grid(s, 17, GridScheme::kGaussHermite);
  OptimOptions opts;
  opts.max_iters = 500;
  const int levels = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(design(s, g, levels, 2.0, opts));
}
BENCHMARK(BM_Design)->Arg(2)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_LloydMax(benchmark::State& state) {
  const SourceSpec s = make_source(1, 1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(lloyd_max(s, 8));
}
BENCHMARK(BM_LloydMax)->Unit(benchmark::kMicrosecond);

}  // namespace
}  // namespace strategiq

BENCHMARK_MAIN();
