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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "gaussmoser/optimizer.hpp"

using namespace gaussmoser;

namespace {

MaximizerConfig small(Normalization norm = Normalization::median) {
  MaximizerConfig c;
  c.problem = MoserProblem(2.0, 1.5, WeightSpec::constant(1.0), norm);
  c.half_width = 4.0;
  c.nodes = 65;
  c.restarts = 2;
  c.max_iterations = 1500;
  c.threads = 1;
  return c;
}

std::vector<double> random_w(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(-1.0, 0.5);
  std::vector<double> w(n);
  for (auto& x : w) x = d(rng);
  return w;
}

}  // namespace

TEST(MaximizerConfig, Validation) {
  auto c = small();
  EXPECT_NO_THROW(c.validate());
  c.nodes = 64;
  EXPECT_THROW(c.validate(), DomainError);
  c = small();
  c.half_width = 9.0;
  EXPECT_THROW(c.validate(), DomainError);
  c = small();
  c.restarts = 0;
  EXPECT_THROW(c.validate(), DomainError);
  const auto g = small().grid();
  ASSERT_EQ(g.size(), 65u);
  EXPECT_EQ(g[32], 0.0);
  EXPECT_DOUBLE_EQ(g.front(), -4.0);
}

TEST(Gradient, MatchesFiniteDifferences) {
  for (auto norm : {Normalization::median, Normalization::mean}) {
    const auto c = small(norm);
    const auto w = random_w(c.grid().size() - 1, 5);
    const auto rep = gradient_check(c, w);
    EXPECT_LT(rep.max_relative_error, 1e-5) << to_string(norm);
    EXPECT_EQ(rep.coordinates.size(), rep.analytic.size());
  }
}

TEST(Profile, NormalisedAndMonotone) {
  for (auto norm : {Normalization::median, Normalization::mean}) {
    const auto c = small(norm);
    const auto p = profile_of_w(c, random_w(64, 9));
    EXPECT_NO_THROW(p.validate());
    EXPECT_NEAR(normalization_value(c.problem, p), 0.0, 1e-12);
  }
  EXPECT_THROW(profile_of_w(small(), std::vector<double>(10, 0.0)), DomainError);
}

TEST(Trials, FeasibleSeeds) {
  const auto c = small();
  const auto trials = sharpness_trials(c);
  ASSERT_EQ(static_cast<int>(trials.size()), c.trials);
  for (const auto& t : trials) {
    EXPECT_LE(t.constraint, c.problem.M * (1 + 1e-9));
    EXPECT_GE(t.J, 1.0);
    EXPECT_EQ(t.w.size(), 64u);
  }
}

TEST(Maximize, FeasibleAndImproving) {
  const auto c = small();
  const auto r = maximize(c);
  EXPECT_GE(r.J, r.best_trial);
  EXPECT_GE(r.J, 1.0);
  EXPECT_LE(r.constraint, c.problem.M + 1e-6);
  EXPECT_GE(r.constraint, c.problem.M - 1e-3);
  EXPECT_LE(r.normalization_residual, c.tol_normalization);
  EXPECT_NO_THROW(r.profile.validate());
  EXPECT_NEAR(objective(c.problem, r.profile).value, r.J, 1e-9 * r.J);
  EXPECT_NEAR(constraint_modular(c.problem, r.profile), r.constraint, 1e-9);
  ASSERT_FALSE(r.history.empty());
  for (std::size_t i = 1; i < r.history.size(); ++i) EXPECT_GE(r.history[i], r.history[i - 1]);
  EXPECT_EQ(r.restart_objectives.size(), 2u);
  EXPECT_EQ(r.restart_objectives[r.best_restart], r.J);
  EXPECT_GE(r.restart_dispersion, 0.0);
  EXPECT_GE(r.tail_bound, 0.0);
  // Below the Holder envelope.
  EXPECT_LT(r.J, holder_bound(c.problem).value);
}

TEST(Maximize, DeterministicAcrossThreadCounts) {
  auto c = small(Normalization::mean);
  c.max_iterations = 300;
  const auto a = maximize(c);
  c.threads = 2;
  const auto b = maximize(c);
  EXPECT_EQ(a.J, b.J);
  EXPECT_EQ(a.g, b.g);
  EXPECT_EQ(a.restart_objectives, b.restart_objectives);
}
