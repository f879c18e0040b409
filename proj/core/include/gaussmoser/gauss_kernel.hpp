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
#include <numbers>
#include <string>
#include <vector>

#include "gaussmoser/errors.hpp"
#include "gaussmoser/quadrature.hpp"

namespace gaussmoser {

inline constexpr double kSqrt2Pi = 2.5066282746310002;
inline const double kLogSqrt2Pi = std::log(kSqrt2Pi);

// Largest tau for which exp(tau^2 / 2) is representable as a double.
// Integrands carrying that factor beyond this point must be formed in
// log domain.
inline constexpr double kLinearExpCeiling = 37.6;

// Standard normal density.
inline double gauss_density(double t) {
  return std::exp(-0.5 * t * t) / kSqrt2Pi;
}
inline double log_gauss_density(double t) { return -0.5 * t * t - kLogSqrt2Pi; }

// Upper tail Phi(t) = gamma_1([t, inf)).
double gauss_tail(double t);

// log Phi(t), accurate far into the upper tail (no underflow).
double log_gauss_tail(double t);

// Phi^{-1}(s) for s in (0, 1).
double gauss_tail_inv(double s);

// Inverse given log s; usable for s below the smallest double.
double gauss_tail_inv_log(double log_s);

// Isoperimetric profile I(s) = density(Phi^{-1}(s)), I(0) = I(1) = 0.
double iso_profile(double s);

// exp(tau^2 / 2), refusing arguments beyond kLinearExpCeiling.
double exp_half_square(double tau);

enum class Domain { full_line, half_line, interval };
enum class Measure { gaussian, lebesgue };

std::string to_string(Domain d);

// Composite Gauss-Legendre grid. Weights are Lebesgue weights; the
// Gaussian measure multiplies them by the density at the node.
class GaussGrid {
 public:
  // [-T, T] with the discarded two-sided Gaussian tail below 1e-14.
  static GaussGrid full_line(int panels = 32, int order = 16);
  // [0, T], same truncation.
  static GaussGrid half_line(int panels = 32, int order = 16);
  static GaussGrid interval(double a, double b, int panels = 32,
                            int order = 16);
  static GaussGrid from_edges(Domain domain, std::vector<double> edges,
                              int order = 16);

  // Same domain, every panel split in two.
  GaussGrid refined() const;

  const std::vector<double>& nodes() const { return set_.nodes; }
  const std::vector<double>& weights() const { return set_.weights; }
  const std::vector<double>& edges() const { return edges_; }
  Domain domain() const { return domain_; }
  int order() const { return order_; }
  double lower() const { return edges_.front(); }
  double upper() const { return edges_.back(); }
  // Truncation bound T of an unbounded domain (0 for intervals).
  double truncation() const;
  // Measure of the (truncated) domain under `m`.
  double measure_of_domain(Measure m) const;

 private:
  GaussGrid(Domain d, std::vector<double> edges, int order);

  Domain domain_;
  std::vector<double> edges_;
  int order_;
  quad::NodeSet set_;
};

inline constexpr double kFullLineTruncation = 8.0;

// Weighted sum of f over the grid; the error is the change under panel
// doubling.
template <class F>
quad::Estimate integrate(const F& f, const GaussGrid& grid,
                         Measure measure = Measure::lebesgue);

// log of the integral of exp(log_f), accumulated with a running max shift.
template <class F>
quad::Estimate log_integrate(const F& log_f, const GaussGrid& grid,
                             Measure measure = Measure::lebesgue);

// ---------------------------------------------------------------------------

namespace detail {

template <class F>
double weighted_sum(const F& f, const GaussGrid& grid, Measure measure) {
  const auto& x = grid.nodes();
  const auto& w = grid.weights();
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double v = f(x[i]);
    if (!std::isfinite(v)) throw EvaluationError("non-finite integrand", x[i]);
    s += w[i] * (measure == Measure::gaussian ? v * gauss_density(x[i]) : v);
  }
  return s;
}

template <class F>
double weighted_log_sum(const F& log_f, const GaussGrid& grid,
                        Measure measure) {
  const auto& x = grid.nodes();
  const auto& w = grid.weights();
  quad::LogSum acc;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lv = log_f(x[i]);
    if (std::isnan(lv) || lv == std::numeric_limits<double>::infinity())
      throw EvaluationError("non-finite log-integrand", x[i]);
    double term = std::log(w[i]) + lv;
    if (measure == Measure::gaussian) term += log_gauss_density(x[i]);
    acc.add(term);
  }
  return acc.log_value();
}

}  // namespace detail

template <class F>
quad::Estimate integrate(const F& f, const GaussGrid& grid, Measure measure) {
  const double coarse = detail::weighted_sum(f, grid, measure);
  const double fine = detail::weighted_sum(f, grid.refined(), measure);
  return {coarse, std::abs(fine - coarse)};
}

template <class F>
quad::Estimate log_integrate(const F& log_f, const GaussGrid& grid,
                             Measure measure) {
  const double coarse = detail::weighted_log_sum(log_f, grid, measure);
  const double fine = detail::weighted_log_sum(log_f, grid.refined(), measure);
  const double err = std::isfinite(coarse) && std::isfinite(fine)
                         ? std::abs(fine - coarse)
                         : 0.0;
  return {coarse, err};
}

}  // namespace gaussmoser
