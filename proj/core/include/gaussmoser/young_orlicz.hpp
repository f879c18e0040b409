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
#include <concepts>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gaussmoser/errors.hpp"
#include "gaussmoser/gauss_kernel.hpp"
#include "gaussmoser/quadrature.hpp"

namespace gaussmoser {

// Anything with value(t) and log_value(t) on [0, inf) can drive a modular.
template <class Y>
concept YoungLike = requires(const Y& y, double t) {
  { y.value(t) } -> std::convertible_to<double>;
  { y.log_value(t) } -> std::convertible_to<double>;
};

// Tangency point t* of the line from (0, 1) to the graph of exp(t^beta);
// zero when beta >= 1.
double envelope_tangency(double beta);

// Exp^beta: the convex envelope of exp(t^beta).
class ExpEnvelope {
 public:
  explicit ExpEnvelope(double beta);

  double beta() const { return beta_; }
  double tangency() const { return tangency_; }
  // Slope of the linear piece on [0, t*].
  double tangent_slope() const { return slope_; }

  double value(double t) const;
  double log_value(double t) const;
  double deriv(double t) const;
  // Inverse on [1, inf).
  double inverse(double y) const;

 private:
  double beta_;
  double tangency_;
  double slope_;
};

double env_exp(double beta, double t);

// B(t) = r t on [0, t0), N exp(t^beta) on [t0, inf), with ramp slope
// r = N Exp^beta(t0) / t0.
class YoungExp {
 public:
  YoungExp(double beta, double N, double t0);

  // Smallest envelope-exact convex knee plus a 0.5 margin.
  static double default_knee(double beta);

  double beta() const { return beta_; }
  double scale() const { return N_; }
  double knee() const { return t0_; }
  double ramp_slope() const { return ramp_; }
  // b(t0+); equals ramp_slope() when b is continuous at the knee.
  double jump_top() const { return jump_top_; }
  double envelope_tangency() const { return tangency_; }

  double value(double t) const;
  double log_value(double t) const;
  // b, left-continuous.
  double deriv(double t) const;
  double log_deriv(double t) const;
  // b^{-1}, the left-continuous generalized inverse.
  double deriv_inv(double tau) const;
  // b^{-1}(exp(log_tau)), for arguments far beyond the double range.
  double deriv_inv_log(double log_tau) const;
  // B^{-1}.
  double inv(double y) const;
  double inv_log(double log_y) const;
  // Conjugate B~(tau) by quadrature of b^{-1} over [0, tau].
  double conj(double tau) const;
  // tau b^{-1}(tau) - B(b^{-1}(tau)), the equality case of Young's inequality.
  double conj_closed(double tau) const;
  // log B~(exp(log_tau)).
  double log_conj_at_log(double log_tau) const;

  bool operator==(const YoungExp&) const = default;

 private:
  double beta_;
  double N_;
  double t0_;
  double tangency_;
  double ramp_;
  double jump_top_;
  double log_N_beta_;
};

YoungExp build_constraint_young(double beta, double M, double t0);

// The Young conjugate of a YoungExp, evaluated in closed form.
class ConjugateYoung {
 public:
  explicit ConjugateYoung(YoungExp base) : base_(base) {}

  const YoungExp& base() const { return base_; }
  double value(double tau) const { return base_.conj_closed(tau); }
  double log_value(double tau) const;
  // Right-continuous inverse of B~.
  double inv(double y) const;

 private:
  YoungExp base_;
};

struct ModularValue {
  double value = 0.0;  // +inf when beyond the double range
  double log_value = -std::numeric_limits<double>::infinity();
  bool overflow = false;
};

// Sum of weights[i] * Y(|values[i]|).
template <YoungLike Y>
ModularValue modular(const Y& young, std::span<const double> values,
                     std::span<const double> weights);

// Same, sampling f on a grid against the chosen measure.
template <YoungLike Y, class F>
ModularValue modular(const Y& young, const F& f, const GaussGrid& grid,
                     Measure measure);

struct NormResult {
  double norm = 0.0;
  bool bracketed = true;
  int evaluations = 0;
};

template <YoungLike Y>
NormResult luxemburg_norm(const Y& young, std::span<const double> values,
                          std::span<const double> weights);

// inf over k > 0 of (1 + modular(k f)) / k, by golden section on log k.
template <YoungLike Y>
NormResult orlicz_norm_amemiya(const Y& young, std::span<const double> values,
                               std::span<const double> weights);

// phi(t) = scale * t^a * log(e + t)^b.
struct WeightSpec {
  enum class Family { constant, power, power_log };

  Family family = Family::constant;
  double exponent = 0.0;
  double log_exponent = 0.0;
  double scale = 1.0;

  static WeightSpec constant(double scale);
  static WeightSpec power(double a);
  static WeightSpec power_log(double a, double b);
  // "const:c", "pow:a", "powlog:a,b".
  static WeightSpec parse(std::string_view text);

  std::string to_string() const;
  // Throws DomainError unless phi is nonnegative and nondecreasing.
  void validate() const;

  double value(double t) const;
  double log_value(double t) const;
  // d/dt log phi(t).
  double log_deriv(double t) const;
};

// ---------------------------------------------------------------------------

template <YoungLike Y>
ModularValue modular(const Y& young, std::span<const double> values,
                     std::span<const double> weights) {
  if (values.size() != weights.size())
    throw DomainError("modular: values and weights differ in length");
  quad::LogSum acc;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]))
      throw EvaluationError("modular: non-finite field value", static_cast<double>(i));
    if (weights[i] <= 0.0) continue;
    acc.add(std::log(weights[i]) + young.log_value(std::abs(values[i])));
  }
  ModularValue out;
  out.log_value = acc.log_value();
  out.overflow = out.log_value > 709.0;
  out.value = out.overflow ? std::numeric_limits<double>::infinity()
                           : std::exp(out.log_value);
  return out;
}

template <YoungLike Y, class F>
ModularValue modular(const Y& young, const F& f, const GaussGrid& grid,
                     Measure measure) {
  std::vector<double> values(grid.nodes().size());
  std::vector<double> weights(grid.weights());
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = f(grid.nodes()[i]);
    if (measure == Measure::gaussian) weights[i] *= gauss_density(grid.nodes()[i]);
  }
  return modular(young, std::span<const double>(values),
                 std::span<const double>(weights));
}

namespace detail {

// log modular of values / lambda.
template <YoungLike Y>
double log_modular_scaled(const Y& young, std::span<const double> values,
                          std::span<const double> weights, double log_scale) {
  quad::LogSum acc;
  const double scale = std::exp(log_scale);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (weights[i] <= 0.0 || values[i] == 0.0) continue;
    acc.add(std::log(weights[i]) + young.log_value(std::abs(values[i]) * scale));
  }
  return acc.log_value();
}

inline bool all_zero(std::span<const double> values) {
  for (double v : values)
    if (v != 0.0) return false;
  return true;
}

}  // namespace detail

template <YoungLike Y>
NormResult luxemburg_norm(const Y& young, std::span<const double> values,
                          std::span<const double> weights) {
  if (values.size() != weights.size())
    throw DomainError("luxemburg_norm: values and weights differ in length");
  NormResult out;
  if (detail::all_zero(values)) return out;
  double vmax = 0.0;
  for (double v : values) vmax = std::max(vmax, std::abs(v));
  // Work in mu = log(1 / lambda); the modular increases with mu.
  auto over = [&](double mu) {
    ++out.evaluations;
    return detail::log_modular_scaled(young, values, weights, mu) > 0.0;
  };
  double lo = -std::log(vmax);  // candidate lambda = max |f|
  double hi = lo;
  double step = 1.0;
  if (over(lo)) {
    // Need larger lambda (smaller mu).
    while (over(lo)) {
      hi = lo;
      lo -= step;
      step *= 2.0;
      if (step > 1e6) throw ConvergenceError("luxemburg_norm: cannot bracket from above");
    }
  } else {
    while (!over(hi)) {
      lo = hi;
      hi += step;
      step *= 2.0;
      if (step > 4096.0) {
        out.bracketed = false;
        out.norm = 0.0;
        return out;
      }
    }
  }
  // Invariant: modular(mu = lo) <= 1 < modular(mu = hi).
  for (int i = 0; i < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++i) {
    const double mid = 0.5 * (lo + hi);
    if (over(mid)) hi = mid; else lo = mid;
  }
  out.norm = std::exp(-lo);
  return out;
}

template <YoungLike Y>
NormResult orlicz_norm_amemiya(const Y& young, std::span<const double> values,
                               std::span<const double> weights) {
  if (values.size() != weights.size())
    throw DomainError("orlicz_norm_amemiya: values and weights differ in length");
  NormResult out;
  if (detail::all_zero(values)) return out;
  // log of (1 + modular(e^u f)) / e^u
  auto objective = [&](double u) {
    ++out.evaluations;
    return quad::log_add(0.0, detail::log_modular_scaled(young, values, weights, u)) - u;
  };
  double vmax = 0.0;
  for (double v : values) vmax = std::max(vmax, std::abs(v));
  // Bracket a minimum: walk downhill in unit steps of log k.
  double a = -std::log(vmax) - 1.0;
  double b = a + 1.0;
  double fa = objective(a);
  double fb = objective(b);
  double step = 1.0;
  if (fb > fa) {
    std::swap(a, b);
    std::swap(fa, fb);
    step = -1.0;
  }
  double c = b + step;
  double fc = objective(c);
  int guard = 0;
  while (fc < fb) {
    a = b;
    fa = fb;
    b = c;
    fb = fc;
    step *= 1.6;
    c = b + step;
    fc = objective(c);
    if (++guard > 200)
      throw ConvergenceError("orlicz_norm_amemiya: minimum not bracketed near log k = " +
                             std::to_string(b));
  }
  double lo = std::min(a, c);
  double hi = std::max(a, c);
  constexpr double inv_phi = 0.6180339887498949;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = objective(x1);
  double f2 = objective(x2);
  int iter = 0;
  while (hi - lo > 1e-10) {
    if (++iter > 500)
      throw ConvergenceError("orlicz_norm_amemiya: golden section stalled in [" +
                             std::to_string(lo) + ", " + std::to_string(hi) + "]");
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = objective(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = objective(x2);
    }
  }
  out.norm = std::exp(std::min(f1, f2));
  return out;
}

}  // namespace gaussmoser
