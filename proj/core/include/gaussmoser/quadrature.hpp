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

#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace gaussmoser::quad {

// Gauss-Legendre rule on [-1, 1].
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline constexpr int kMaxOrder = 64;

// Cached rule of the given order (1..kMaxOrder).
const Rule& gauss_legendre(int order);

// Nodes and weights of a composite rule, in increasing node order.
struct NodeSet {
  std::vector<double> nodes;
  std::vector<double> weights;

  void append_panel(double a, double b, int order);
  void append_panels(std::span<const double> edges, int order);
  double weight_sum() const;
};

std::vector<double> uniform_edges(double a, double b, int panels);

// Edges with widths growing geometrically away from `a` (ratio > 1) or
// shrinking toward `b` (ratio < 1).
std::vector<double> geometric_edges(double a, double b, int panels,
                                    double ratio);

// Edges whose width grows by `ratio` starting from `first_width` at `a`;
// the panel count follows from the interval length.
std::vector<double> graded_edges(double a, double b, double first_width,
                                 double ratio);

struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

// Adaptive bisection with a 16-point rule against its two halves.
template <class F>
Estimate adaptive(const F& f, double a, double b, double rel_tol = 1e-12,
                  double abs_tol = 1e-300, int max_depth = 60);

// Streaming log-sum-exp accumulator.
class LogSum {
 public:
  void add(double log_term) {
    if (log_term == -std::numeric_limits<double>::infinity()) return;
    if (log_term <= max_) {
      sum_ += std::exp(log_term - max_);
    } else {
      sum_ = sum_ * std::exp(max_ - log_term) + 1.0;
      max_ = log_term;
    }
  }
  void merge(const LogSum& other) {
    if (other.sum_ == 0.0) return;
    add(other.max_ + std::log(other.sum_));
  }
  double log_value() const {
    return sum_ == 0.0 ? -std::numeric_limits<double>::infinity()
                       : max_ + std::log(sum_);
  }
  bool empty() const { return sum_ == 0.0; }

 private:
  double max_ = -std::numeric_limits<double>::infinity();
  double sum_ = 0.0;
};

// log(exp(a) + exp(b)).
inline double log_add(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == -std::numeric_limits<double>::infinity()) return a;
  return a + std::log1p(std::exp(b - a));
}

// ---------------------------------------------------------------------------

template <class F>
Estimate adaptive(const F& f, double a, double b, double rel_tol,
                  double abs_tol, int max_depth) {
  const Rule& rule = gauss_legendre(16);
  auto panel = [&](double lo, double hi) {
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
      s += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return s * half;
  };
  struct Item {
    double lo, hi, whole;
    int depth;
  };
  std::vector<Item> stack{{a, b, panel(a, b), 0}};
  Estimate out;
  while (!stack.empty()) {
    Item it = stack.back();
    stack.pop_back();
    const double mid = 0.5 * (it.lo + it.hi);
    const double left = panel(it.lo, mid);
    const double right = panel(mid, it.hi);
    const double refined = left + right;
    const double diff = std::abs(refined - it.whole);
    const double width_share = (it.hi - it.lo) / (b - a);
    if (diff <= std::max(abs_tol * width_share, rel_tol * std::abs(refined)) ||
        it.depth >= max_depth || mid == it.lo || mid == it.hi) {
      out.value += refined;
      out.error += diff;
    } else {
      stack.push_back({mid, it.hi, right, it.depth + 1});
      stack.push_back({it.lo, mid, left, it.depth + 1});
    }
  }
  return out;
}

}  // namespace gaussmoser::quad
