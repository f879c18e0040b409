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

#include "gaussmoser/gauss_kernel.hpp"

using namespace gaussmoser;

namespace {

// mpmath at 30 digits.
constexpr double kPhi1 = 0.15865525393145705;
constexpr double kPhiMinus3 = 0.99865010196836991;
constexpr double kPhi5 = 2.8665157187919391e-7;
constexpr double kPhi10 = 7.6198530241605261e-24;
constexpr double kPhi30 = 4.9067139271481871e-198;
constexpr double kInvTail1e10 = 6.3613409024040562;
constexpr double kIso03 = 0.34769261420007376;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(GaussTail, MatchesHighPrecisionValues) {
  EXPECT_NEAR(gauss_tail(0.0), 0.5, 1e-16);
  EXPECT_LT(rel(gauss_tail(1.0), kPhi1), 1e-14);
  EXPECT_LT(rel(gauss_tail(-3.0), kPhiMinus3), 1e-14);
  EXPECT_LT(rel(gauss_tail(5.0), kPhi5), 1e-13);
  EXPECT_LT(rel(gauss_tail(10.0), kPhi10), 1e-13);
  EXPECT_LT(rel(gauss_tail(30.0), kPhi30), 1e-12);
}

TEST(GaussTail, LogTailFarOut) {
  EXPECT_NEAR(log_gauss_tail(30.0), std::log(kPhi30), 1e-11);
  // Mills ratio: log Phi(t) ~ -t^2/2 - log(t sqrt(2 pi)) - 1/t^2.
  const double t = 1e4;
  const double approx = -0.5 * t * t - std::log(t * kSqrt2Pi) - 1.0 / (t * t);
  EXPECT_NEAR(log_gauss_tail(t), approx, 1e-9);
}

TEST(GaussTail, InverseRoundTrip) {
  EXPECT_LT(rel(gauss_tail_inv(1e-10), kInvTail1e10), 1e-13);
  for (double s : {1e-300, 1e-20, 0.01, 0.3, 0.5, 0.7, 0.999999}) {
    const double t = gauss_tail_inv(s);
    EXPECT_LT(rel(gauss_tail(t), s), 1e-12) << s;
  }
  EXPECT_NEAR(gauss_tail_inv_log(std::log(kPhi30)), 30.0, 1e-10);
  EXPECT_NEAR(gauss_tail_inv_log(-1e6), std::sqrt(2e6), 1e-2);
}

TEST(GaussTail, RejectsOutOfRange) {
  EXPECT_THROW(gauss_tail_inv(0.0), DomainError);
  EXPECT_THROW(gauss_tail_inv(1.0), DomainError);
  EXPECT_THROW(gauss_tail_inv(-0.1), DomainError);
  EXPECT_THROW(gauss_tail(std::nan("")), DomainError);
}

TEST(GaussTail, Symmetry) {
  for (int i = 0; i < 100; ++i) {
    const double t = -8.0 + 16.0 * i / 99.0;
    EXPECT_NEAR(gauss_tail(t) + gauss_tail(-t), 1.0, 1e-12) << t;
  }
}

TEST(IsoProfile, ValuesAndSymmetry) {
  EXPECT_LT(rel(iso_profile(0.3), kIso03), 1e-13);
  EXPECT_EQ(iso_profile(0.0), 0.0);
  EXPECT_EQ(iso_profile(1.0), 0.0);
  EXPECT_NEAR(iso_profile(0.5), 1.0 / kSqrt2Pi, 1e-16);
  for (int i = 1; i < 100; ++i) {
    const double s = i / 100.0;
    EXPECT_NEAR(iso_profile(s), iso_profile(1.0 - s), 1e-12) << s;
  }
}

TEST(IsoProfile, DerivativeIdentity) {
  // -Phi'(t) = I(Phi(t)).
  for (double t = -6.0; t <= 6.0; t += 0.25) {
    // Differences on the small tail, which carries full relative precision.
    const double a = std::abs(t);
    const double h = 1e-5;
    const double fd = (gauss_tail(a - h) - gauss_tail(a + h)) / (2 * h);
    EXPECT_LT(rel(fd, iso_profile(gauss_tail(t))), 1e-6) << t;
  }
}

TEST(ExpHalfSquare, RefusesOverflow) {
  EXPECT_NEAR(exp_half_square(2.0), std::exp(2.0), 1e-12);
  EXPECT_THROW(exp_half_square(kLinearExpCeiling + 1.0), DomainError);
}

TEST(GaussGrid, MassesAndPolynomialMoments) {
  const auto full = GaussGrid::full_line();
  EXPECT_EQ(full.domain(), Domain::full_line);
  EXPECT_NEAR(full.measure_of_domain(Measure::gaussian), 1.0, 1e-13);
  auto m2 = integrate([](double x) { return x * x; }, full, Measure::gaussian);
  EXPECT_NEAR(m2.value, 1.0, 1e-12);
  auto m4 = integrate([](double x) { return x * x * x * x; }, full, Measure::gaussian);
  EXPECT_NEAR(m4.value, 3.0, 1e-11);
  const auto half = GaussGrid::half_line();
  EXPECT_NEAR(half.measure_of_domain(Measure::gaussian), 0.5, 1e-13);
  const auto iv = GaussGrid::interval(0.0, 2.0, 4, 8);
  EXPECT_NEAR(integrate([](double x) { return x; }, iv).value, 2.0, 1e-14);
}

TEST(GaussGrid, LogIntegrateMatchesLinear) {
  const auto g = GaussGrid::full_line();
  // E[e^x] = e^{1/2}, up to the truncated tail Phi(7).
  auto lin = integrate([](double x) { return std::exp(x); }, g, Measure::gaussian);
  auto lg = log_integrate([](double x) { return x; }, g, Measure::gaussian);
  EXPECT_NEAR(lin.value, std::exp(0.5), 1e-11);
  EXPECT_NEAR(lg.value, 0.5, 1e-11);
  // Moment generating function far beyond double range.
  const auto wide = GaussGrid::interval(0.0, 1500.0, 200, 16);
  auto big = log_integrate([](double x) { return 1000.0 * x; }, wide, Measure::gaussian);
  EXPECT_NEAR(big.value, 5e5, 1e-6);
}

TEST(GaussGrid, NonFiniteIntegrandReportsNode) {
  const auto g = GaussGrid::interval(-1.0, 1.0, 2, 4);
  try {
    integrate([](double x) { return x > 0.5 ? std::nan("") : 1.0; }, g);
    FAIL() << "expected EvaluationError";
  } catch (const EvaluationError& e) {
    EXPECT_GT(e.node(), 0.5);
  }
}
