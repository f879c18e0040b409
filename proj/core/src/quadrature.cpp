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

#include "gaussmoser/quadrature.hpp"

#include <numbers>
#include <stdexcept>

namespace gaussmoser::quad {
namespace {

Rule build_rule(int n) {
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = n == 1 ? x : p1;
      const double pnm1 = n == 1 ? 1.0 : p0;
      dp = n * (x * pn - pnm1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  return r;
}

}  // namespace

const Rule& gauss_legendre(int order) {
  static const std::vector<Rule> rules = [] {
    std::vector<Rule> v;
    v.reserve(kMaxOrder + 1);
    v.emplace_back();
    for (int n = 1; n <= kMaxOrder; ++n) v.push_back(build_rule(n));
    return v;
  }();
  if (order < 1 || order > kMaxOrder)
    throw std::out_of_range("gauss_legendre: unsupported order");
  return rules[order];
}

void NodeSet::append_panel(double a, double b, int order) {
  const Rule& rule = gauss_legendre(order);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    nodes.push_back(mid + half * rule.nodes[i]);
    weights.push_back(half * rule.weights[i]);
  }
}

void NodeSet::append_panels(std::span<const double> edges, int order) {
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    if (edges[i + 1] > edges[i]) append_panel(edges[i], edges[i + 1], order);
}

double NodeSet::weight_sum() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

std::vector<double> uniform_edges(double a, double b, int panels) {
  std::vector<double> e(panels + 1);
  for (int i = 0; i <= panels; ++i) e[i] = a + (b - a) * i / panels;
  e.back() = b;
  return e;
}

std::vector<double> geometric_edges(double a, double b, int panels,
                                    double ratio) {
  if (ratio == 1.0) return uniform_edges(a, b, panels);
  std::vector<double> e(panels + 1);
  // widths w, w r, w r^2, ... summing to b - a
  const double total = (std::pow(ratio, panels) - 1.0) / (ratio - 1.0);
  const double w0 = (b - a) / total;
  e[0] = a;
  double w = w0;
  for (int i = 1; i <= panels; ++i) {
    e[i] = e[i - 1] + w;
    w *= ratio;
  }
  e.back() = b;
  return e;
}

std::vector<double> graded_edges(double a, double b, double first_width,
                                 double ratio) {
  std::vector<double> e{a};
  double w = first_width;
  while (e.back() + w < b) {
    e.push_back(e.back() + w);
    w *= ratio;
  }
  // Merge a sliver last panel into its predecessor.
  if (e.size() > 1 && b - e.back() < 0.25 * w / ratio) e.pop_back();
  e.push_back(b);
  return e;
}

}  // namespace gaussmoser::quad
