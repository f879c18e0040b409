// Copyright 2026 The gaussmoser Authors
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

#include <vector>

#include "gaussmoser/asymptotics.hpp"
#include "gaussmoser/gauss_kernel.hpp"
#include "gaussmoser/moser.hpp"
#include "gaussmoser/norm_engine.hpp"
#include "gaussmoser/optimizer.hpp"
#include "gaussmoser/rearrangement.hpp"

using namespace gaussmoser;

static void BM_GaussTailInverse(benchmark::State& state) {
  double s = 1e-3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gauss_tail_inv(s));
    s = s * 0.999 + 1e-6;
  }
}
BENCHMARK(BM_GaussTailInverse);

static void BM_SolveLambda(benchmark::State& state) {
  const double beta = state.range(0) / 2.0;
  const auto B = build_constraint_young(beta, 2.0, YoungExp::default_knee(beta));
  const double t = static_cast<double>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(solve_lambda(B, t).log_lambda);
}
BENCHMARK(BM_SolveLambda)->Args({2, 10})->Args({2, 25})->Args({4, 20})->Unit(benchmark::kMicrosecond);

static void BM_InvIsoNorm(benchmark::State& state) {
  const auto B = build_constraint_young(1.0, 2.0, YoungExp::default_knee(1.0));
  for (auto _ : state) benchmark::DoNotOptimize(inv_iso_orlicz_norm(B, 10.0).value);
}
BENCHMARK(BM_InvIsoNorm)->Unit(benchmark::kMillisecond);

static void BM_HolderBound(benchmark::State& state) {
  const MoserProblem p(static_cast<double>(state.range(0)), 2.0);
  BoundOptions opts;
  opts.estimate_error = false;
  for (auto _ : state) benchmark::DoNotOptimize(holder_bound(p, opts).value);
}
BENCHMARK(BM_HolderBound)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond)->Iterations(3);

static void BM_Psi(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(psi(-0.75, 1.0, 20.0));
}
BENCHMARK(BM_Psi)->Unit(benchmark::kMicrosecond);

static void BM_Symmetrize(benchmark::State& state) {
  const auto f = random_bump_field(1, static_cast<int>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(symmetrize(f).values().data());
}
BENCHMARK(BM_Symmetrize)->Arg(65)->Arg(129)->Unit(benchmark::kMillisecond);

static void BM_ObjectiveGradient(benchmark::State& state) {
  MaximizerConfig c;
  c.problem = MoserProblem(2.0, 1.5);
  const std::vector<double> w(c.grid().size() - 1, -1.0);
  std::vector<double> grad;
  for (auto _ : state) benchmark::DoNotOptimize(objective_of_w(c, w, &grad));
}
BENCHMARK(BM_ObjectiveGradient)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
