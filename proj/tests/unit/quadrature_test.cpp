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

#include "gaussmoser/quadrature.hpp"

namespace gq = gaussmoser::quad;

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
  for (int order : {1, 2, 5, 16, 32, 64}) {
    const auto& rule = gq::gauss_legendre(order);
    ASSERT_EQ(static_cast<int>(rule.nodes.size()), order);
    for (int k = 0; k <= 2 * order - 1; ++k) {
      double s = 0.0;
      for (int i = 0; i < order; ++i) s += rule.weights[i] * std::pow(rule.nodes[i], k);
      const double exact = (k % 2 == 1) ? 0.0 : 2.0 / (k + 1);
      EXPECT_NEAR(s, exact, 1e-13) << "order " << order << " degree " << k;
    }
  }
}

TEST(GaussLegendre, RejectsBadOrder) {
  EXPECT_ANY_THROW(gq::gauss_legendre(0));
  EXPECT_ANY_THROW(gq::gauss_legendre(gq::kMaxOrder + 1));
}

TEST(NodeSet, PanelsSumToLength) {
  gq::NodeSet set;
  const auto edges = gq::geometric_edges(0.0, 10.0, 12, 1.5);
  ASSERT_EQ(edges.size(), 13u);
  EXPECT_DOUBLE_EQ(edges.front(), 0.0);
  EXPECT_DOUBLE_EQ(edges.back(), 10.0);
  set.append_panels(edges, 8);
  EXPECT_NEAR(set.weight_sum(), 10.0, 1e-12);
  for (std::size_t i = 1; i < set.nodes.size(); ++i) EXPECT_LT(set.nodes[i - 1], set.nodes[i]);
}

TEST(NodeSet, GradedEdgesCoverInterval) {
  const auto e = gq::graded_edges(1.0, 50.0, 0.1, 1.3);
  EXPECT_DOUBLE_EQ(e.front(), 1.0);
  EXPECT_DOUBLE_EQ(e.back(), 50.0);
  for (std::size_t i = 1; i < e.size(); ++i) EXPECT_GT(e[i], e[i - 1]);
}

TEST(Adaptive, HandlesEndpointSingularity) {
  auto r = gq::adaptive([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-12, 1e-300, 80);
  EXPECT_NEAR(r.value, 2.0, 1e-9);
  auto g = gq::adaptive([](double x) { return std::exp(-x * x); }, -10.0, 10.0);
  EXPECT_NEAR(g.value, std::sqrt(std::numbers::pi), 1e-13);
}

TEST(LogSum, MatchesDirectSum) {
  gq::LogSum acc;
  double direct = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double l = std::sin(i) * 20.0;
    acc.add(l);
    direct += std::exp(l);
  }
  EXPECT_NEAR(acc.log_value(), std::log(direct), 1e-12);
  gq::LogSum big;
  big.add(1000.0);
  big.add(1000.0);
  EXPECT_NEAR(big.log_value(), 1000.0 + std::log(2.0), 1e-12);
  EXPECT_TRUE(gq::LogSum{}.empty());
  EXPECT_NEAR(gq::log_add(-800.0, -800.0), -800.0 + std::log(2.0), 1e-12);
}
