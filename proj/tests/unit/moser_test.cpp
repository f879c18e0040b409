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

#include <cmath>
#include <numbers>
#include <vector>

#include "gaussmoser/moser.hpp"

using namespace gaussmoser;

namespace {

Profile1D linear_profile(double slope, int n = 401, double T = 8.0) {
  Profile1D p;
  for (int i = 0; i < n; ++i) {
    const double t = -T + 2 * T * i / (n - 1);
    p.nodes.push_back(t);
    p.values.push_back(slope * t);
  }
  return p;
}

}  // namespace

TEST(Constants, KappaAndExponent) {
  EXPECT_NEAR(kappa_beta(2.0), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(kappa_beta(1.0), 1.0 / std::sqrt(2.0) + std::sqrt(2.0), 1e-15);
  EXPECT_DOUBLE_EQ(moser_exponent(2.0), 1.0);
  EXPECT_DOUBLE_EQ(moser_exponent(1.0), 2.0 / 3.0);
}

TEST(Problem, ValidatesInputs) {
  EXPECT_THROW(MoserProblem(0.0, 2.0).validate(), DomainError);
  EXPECT_THROW(MoserProblem(1.0, 1.0).validate(), DomainError);
  EXPECT_NO_THROW(MoserProblem(1.0, 1.5).validate());
  EXPECT_THROW(parse_normalization("mode"), DomainError);
  EXPECT_EQ(parse_normalization("mean"), Normalization::mean);
  EXPECT_EQ(to_string(Normalization::median), "median");
}

TEST(Problem, LogIntegrandDerivative) {
  const MoserProblem p(1.5, 2.0, WeightSpec::power_log(0.5, 1.0));
  for (double u : {0.3, 1.0, 4.0}) {
    const double h = 1e-6;
    EXPECT_NEAR(p.log_integrand_deriv(u), (p.log_integrand(u + h) - p.log_integrand(u - h)) / (2 * h), 1e-6);
  }
}

TEST(Weights, SumToOne) {
  std::vector<double> nodes;
  for (int i = 0; i < 65; ++i) nodes.push_back(-6.0 + 12.0 * i / 64);
  double s = 0.0;
  for (double w : profile_node_weights(nodes)) s += w;
  EXPECT_NEAR(s, 1.0, 1e-14);
  double c = profile_tail_mass(nodes);
  for (double m : profile_cell_masses(nodes)) c += m;
  EXPECT_NEAR(c, 1.0, 1e-14);
}

TEST(Functionals, LinearProfile) {
  const MoserProblem p(1.0, 3.0);
  const auto lin = linear_profile(1.0);
  EXPECT_NEAR(constraint_modular(p, lin), std::exp(1.0), 1e-12);
  EXPECT_NEAR(normalization_value(p, lin), 0.0, 1e-15);
  const MoserProblem pm(1.0, 3.0, WeightSpec::constant(1.0), Normalization::mean);
  EXPECT_NEAR(normalization_value(pm, lin), 0.0, 1e-13);
  // The zero profile has J = phi(0).
  const auto zero = linear_profile(0.0);
  EXPECT_NEAR(objective(p, zero).value, 1.0, 1e-14);
  const MoserProblem scaled(1.0, 3.0, WeightSpec::constant(2.5));
  EXPECT_NEAR(objective(scaled, zero).value, 2.5, 1e-14);
}

TEST(Functionals, ObjectiveMatchesQuadrature) {
  const MoserProblem p(2.0, 2.0);
  const auto lin = linear_profile(0.5, 4001);
  // beta = 2: J = E exp(kappa |t| / 2) = 2 e^{a^2/2} (1 - Phi(a)) with a = kappa / 2.
  const double a = 0.5 * std::sqrt(2.0);
  const double exact = 2.0 * std::exp(0.5 * a * a) * gauss_tail(-a);
  EXPECT_NEAR(objective(p, lin).value, exact, 1e-5);
}

TEST(HolderBound, FiniteAndStable) {
  const MoserProblem p(1.0, 2.0);
  const auto b = holder_bound(p);
  EXPECT_TRUE(std::isfinite(b.value));
  EXPECT_NEAR(b.value, 316.763, 0.01);
  EXPECT_LT(b.error, 1e-3 * b.value);
  EXPECT_NEAR(std::exp(b.log_value), b.value, 1e-9 * b.value);
  // A feasible profile stays below the bound.
  const double slope = 0.99 * std::log(2.0);
  const auto lin = linear_profile(slope);
  ASSERT_LE(constraint_modular(p, lin), 2.0);
  EXPECT_LT(objective(p, lin).value, b.value);
}

TEST(HolderBound, DivergentWeightThrows) {
  const MoserProblem p(1.0, 2.0, WeightSpec::power(0.5));
  EXPECT_THROW(holder_bound(p), DivergenceError);
}

TEST(Conditions, Verdicts) {
  EXPECT_EQ(improvement_condition(1.0, WeightSpec::constant(1.0)).verdict, Verdict::improvable);
  EXPECT_EQ(improvement_condition(2.0, WeightSpec::power(3.0)).verdict, Verdict::improvable);
  const auto sharp = improvement_condition(1.0, WeightSpec::power(0.5), 0.5);
  EXPECT_EQ(sharp.verdict, Verdict::sharp_divergent);
  EXPECT_NEAR(sharp.power, -5.0 / 6.0, 1e-15);
  EXPECT_EQ(to_string(Verdict::sharp_divergent), "sharp-divergent");
}

TEST(Sharpness, ProfileShape) {
  const MoserProblem p(1.0, 2.0, WeightSpec::power(0.5));
  const auto prof = sharpness_profile(p);
  EXPECT_NEAR(prof.tau0(), 2.23, 1e-12);
  EXPECT_LE(prof.achieved_modular(), 2.0);
  EXPECT_EQ(prof.primitive(prof.tau0()), 0.0);
  EXPECT_EQ(prof.primitive(1.0), 0.0);
  const double h = 1e-5;
  for (double x : {3.0, 5.0, 12.0})
    EXPECT_NEAR((prof.primitive(x + h) - prof.primitive(x - h)) / (2 * h), prof.f(x), 1e-6 * prof.f(x));
  const double x = 40.0;
  EXPECT_NEAR(prof.f_defect(x), prof.f(x) - x * x / 2, 1e-9 * x * x);
  const double lead = leading_coefficient(1.0) * std::pow(x, 3.0);
  EXPECT_NEAR(prof.primitive_excess(x), prof.primitive(x) - lead, 1e-9 * lead);
  const auto grid = prof.on_grid(std::vector<double>{-3.0, 0.0, 3.0});
  EXPECT_NEAR(grid.values[0], -grid.values[2], 1e-15);
}

TEST(Sharpness, Feasibility) {
  const MoserProblem p(1.0, 2.0, WeightSpec::power(0.5));
  const auto prof = sharpness_profile(p);
  const auto f = sharpness_feasibility(p, prof);
  EXPECT_LE(f.constraint, 2.0);
  EXPECT_NEAR(f.constraint, prof.achieved_modular(), 1e-5);
  EXPECT_NEAR(f.tail, 2.0 / (kSqrt2Pi * std::log(30.0)), 1e-15);
  EXPECT_NEAR(f.median, 0.0, 1e-8);
  EXPECT_NEAR(f.mean, 0.0, 1e-8);
}

TEST(Sharpness, IncrementOracles) {
  const MoserProblem div(1.0, 2.0, WeightSpec::power(0.5));
  const auto pd = sharpness_profile(div);
  EXPECT_NEAR(sharpness_increment(div, pd, 10, 100), 0.896995499, 1e-7);
  EXPECT_NEAR(sharpness_increment(div, pd, 100, 1000), 0.2269352034, 1e-8);
  const MoserProblem conv(1.0, 2.0);
  const auto pc = sharpness_profile(conv);
  EXPECT_NEAR(sharpness_increment(conv, pc, 10, 100), 0.02917780903, 1e-9);
  EXPECT_NEAR(sharpness_increment(conv, pc, 100, 1000), 0.0001918021492, 1e-11);
  EXPECT_NEAR(sharpness_partial_integral(div, pd, 100) - sharpness_partial_integral(div, pd, 10),
              sharpness_increment(div, pd, 10, 100), 1e-7);
}

TEST(Sharpness, DivergenceDiagnostics) {
  const MoserProblem p(1.0, 2.0, WeightSpec::power(0.5));
  const auto prof = sharpness_profile(p);
  const double x1 = divergence_start(p, prof);
  EXPECT_GT(x1, prof.tau0());
  const double lb = comparison_lower_bound(p, x1, 1e4);
  EXPECT_GT(lb, 0.0);
  EXPECT_LT(lb, sharpness_partial_integral(p, prof, 1e4));
  EXPECT_GT(comparison_lower_bound(p, x1, 1e8), lb);
}
