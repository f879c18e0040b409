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

#include "gaussmoser/norm_engine.hpp"

#include <algorithm>
#include <mutex>

namespace gaussmoser {
namespace {

// Points where lambda e^{tau^2/2} crosses the ramp slope and the jump top,
// clipped to [0, t].
struct Breaks {
  double ramp = 0.0;
  double jump = 0.0;
};

double crossing(double log_level, double log_lambda, double t) {
  if (log_level <= log_lambda) return 0.0;
  return std::min(t, std::sqrt(2.0 * (log_level - log_lambda)));
}

Breaks breaks_for(const YoungExp& y, double t, double log_lambda) {
  return {crossing(std::log(y.ramp_slope()), log_lambda, t),
          crossing(std::log(y.jump_top()), log_lambda, t)};
}

// Gaussian mass of [a, b] times sqrt(2 pi), for 0 <= a <= b.
double gauss_strip(double a, double b) {
  if (!(b > a)) return 0.0;
  const double la = log_gauss_tail(a);
  const double lb = log_gauss_tail(b);
  return kSqrt2Pi * std::exp(la) * -std::expm1(lb - la);
}

// Nodes over the exponential branch [a, t]; uniform in log(tau - a + c).
quad::NodeSet branch_nodes(double a, double t, const NormEngineOptions& opts) {
  quad::NodeSet set;
  if (!(t > a)) return set;
  constexpr double c = 0.5;
  const double v0 = std::log(c);
  const double v1 = std::log(t - a + c);
  std::vector<double> edges(opts.panels + 1);
  for (int i = 0; i <= opts.panels; ++i)
    edges[i] = a + std::exp(v0 + (v1 - v0) * i / opts.panels) - c;
  edges.front() = a;
  edges.back() = t;
  set.append_panels(edges, opts.order);
  return set;
}

void check_t(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("t must be positive and finite");
}

double log_modular(const YoungExp& y, double t, double log_lambda,
                   const NormEngineOptions& opts) {
  const Breaks br = breaks_for(y, t, log_lambda);
  double out = -std::numeric_limits<double>::infinity();
  const double plateau = y.value(y.knee()) * gauss_strip(br.ramp, br.jump);
  if (plateau > 0.0) out = std::log(plateau);
  const auto set = branch_nodes(br.jump, t, opts);
  double sum = 0.0;
  for (std::size_t i = 0; i < set.nodes.size(); ++i) {
    const double tau = set.nodes[i];
    const double s = y.deriv_inv_log(log_lambda + 0.5 * tau * tau);
    sum += set.weights[i] * std::pow(s, 1.0 - y.beta());
  }
  if (sum > 0.0) out = quad::log_add(out, log_lambda + std::log(sum / y.beta()));
  return out;
}

double c_beta(double beta) {
  if (beta == 2.0) return 2.0 * std::sqrt(std::numbers::pi);
  return std::pow(2.0, 1.0 / beta - 0.5) * std::sqrt(std::numbers::pi) * (2.0 - beta);
}

}  // namespace

double lambda_modular(const YoungExp& young, double t, double log_lambda,
                      const NormEngineOptions& opts) {
  check_t(t);
  return std::exp(log_modular(young, t, log_lambda, opts));
}

LambdaSolution solve_lambda(const YoungExp& young, double t, const NormEngineOptions& opts) {
  check_t(t);
  constexpr double kLow = -2000.0;
  constexpr double kHigh = 50.0;
  LambdaSolution out;
  out.t = t;
  auto f = [&](double u) {
    ++out.evaluations;
    return log_modular(young, t, u, opts) - kLogSqrt2Pi;
  };
  // Seed from the large-t asymptotics; harmless when t is small.
  double guess = 0.0;
  const double beta = young.beta();
  if (t > 3.0) {
    guess = beta < 2.0 ? std::log(c_beta(beta)) + (1.0 - 2.0 / beta) * std::log(t)
                       : std::log(c_beta(beta) / std::log(t));
  }
  guess = std::clamp(guess, kLow, kHigh);
  double lo = guess, hi = guess;
  double flo = f(lo), fhi = flo;
  double step = 1.0;
  if (flo > 0.0) {
    while (flo > 0.0) {
      hi = lo;
      fhi = flo;
      if (lo == kLow)
        throw ConvergenceError("solve_lambda: no bracket above exp(-2000) for t = " +
                               std::to_string(t));
      lo = std::max(kLow, lo - step);
      step *= 2.0;
      flo = f(lo);
    }
  } else {
    while (fhi <= 0.0) {
      lo = hi;
      flo = fhi;
      if (hi == kHigh)
        throw ConvergenceError("solve_lambda: no bracket below exp(50) for t = " +
                               std::to_string(t));
      hi = std::min(kHigh, hi + step);
      step *= 2.0;
      fhi = f(hi);
    }
  }
  // Illinois regula falsi on f(u) = log G(u) - log sqrt(2 pi); falls back to
  // bisection while f(lo) is -inf.
  int side = 0;
  double u = 0.5 * (lo + hi);
  for (int iter = 0; iter < 300; ++iter) {
    if (std::isfinite(flo)) {
      u = hi - fhi * (hi - lo) / (fhi - flo);
      if (!(u > lo && u < hi)) u = 0.5 * (lo + hi);
    } else {
      u = 0.5 * (lo + hi);
    }
    const double fu = f(u);
    if (std::abs(fu) <= opts.tol || hi - lo <= 1e-15 * std::max(1.0, std::abs(u))) break;
    if (fu > 0.0) {
      hi = u;
      fhi = fu;
      if (side == 1) flo *= 0.5;
      side = 1;
    } else {
      lo = u;
      flo = fu;
      if (side == -1) fhi *= 0.5;
      side = -1;
    }
    if (iter == 299)
      throw ConvergenceError("solve_lambda: tolerance not reached, bracket [" +
                             std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  out.log_lambda = u;
  if (u < 0.0) out.sigma = std::sqrt(-2.0 * u);
  out.residual = std::abs(std::exp(log_modular(young, t, u, opts)) - kSqrt2Pi);
  return out;
}

double norm_integral(const YoungExp& young, double t, double log_lambda,
                     const NormEngineOptions& opts) {
  check_t(t);
  const Breaks br = breaks_for(young, t, log_lambda);
  double total = young.knee() * (br.jump - br.ramp);
  const auto set = branch_nodes(br.jump, t, opts);
  for (std::size_t i = 0; i < set.nodes.size(); ++i) {
    const double tau = set.nodes[i];
    total += set.weights[i] * young.deriv_inv_log(log_lambda + 0.5 * tau * tau);
  }
  return total;
}

NormValue inv_iso_orlicz_norm(const YoungExp& young, double t, const NormEngineOptions& opts) {
  NormValue out;
  out.lambda = solve_lambda(young, t, opts);
  out.value = norm_integral(young, t, out.lambda.log_lambda, opts);
  const auto fine_opts = opts.doubled();
  const auto fine = solve_lambda(young, t, fine_opts);
  out.error = std::abs(norm_integral(young, t, fine.log_lambda, fine_opts) - out.value);
  return out;
}

InvIsoSamples inv_iso_samples(double t, int panels, int order) {
  check_t(t);
  if (panels < 1) throw DomainError("inv_iso_samples: panels must be positive");
  const double a = gauss_tail(t);
  const auto edges = quad::geometric_edges(a, 0.5, panels, std::pow(0.5 / a, 1.0 / panels));
  quad::NodeSet set;
  set.append_panels(edges, order);
  InvIsoSamples out;
  out.weights = set.weights;
  out.values.reserve(set.nodes.size());
  for (double s : set.nodes) out.values.push_back(1.0 / iso_profile(s));
  return out;
}

double leading_coefficient(double beta) {
  return std::pow(2.0, -1.0 / beta) * beta / (2.0 + beta);
}

FcalValue f_cal(const YoungExp& young, double t, const NormEngineOptions& opts) {
  FcalValue out;
  out.lambda = solve_lambda(young, t, opts);
  const double u = out.lambda.log_lambda;
  const double beta = young.beta();
  const double p = 2.0 / beta + 1.0;
  const double mu = leading_coefficient(beta);
  const double log_nb = std::log(young.scale() * beta);
  const Breaks br = breaks_for(young, t, u);

  out.norm = young.knee() * (br.jump - br.ramp);
  // int_0^jump [b^{-1} - (tau^2/2)^{1/beta}]
  double excess = young.knee() * (br.jump - br.ramp) - mu * std::pow(br.jump, p);
  const auto set = branch_nodes(br.jump, t, opts);
  for (std::size_t i = 0; i < set.nodes.size(); ++i) {
    const double tau = set.nodes[i];
    const double y = 0.5 * tau * tau;
    const double s = young.deriv_inv_log(u + y);
    out.norm += set.weights[i] * s;
    // s^beta - y, read off the defining equation of s.
    const double delta = u - log_nb - (beta - 1.0) * std::log(s);
    double diff;
    if (y > 2.0 * std::abs(delta))
      diff = std::pow(y, 1.0 / beta) * std::expm1(std::log1p(delta / y) / beta);
    else
      diff = s - std::pow(y, 1.0 / beta);
    excess += set.weights[i] * diff;
  }
  out.constant_term = 0.5 * kSqrt2Pi * young.inv(1.0);
  out.excess = excess + out.constant_term;
  out.value = out.norm + out.constant_term;
  return out;
}

double power_exponent_defect(double beta, double t, double excess) {
  const double q = 2.0 * beta / (2.0 + beta);
  const double lead = leading_coefficient(beta) * std::pow(t, 2.0 / beta + 1.0);
  return 0.5 * t * t * std::expm1(q * std::log1p(excess / lead));
}

ConjugateBracket conjugate_bracket(const YoungExp& young, const LambdaSolution& sol,
                                   const NormEngineOptions& opts) {
  const double t = sol.t;
  const double u = sol.log_lambda;
  const double lambda = std::exp(u);
  const Breaks br = breaks_for(young, t, u);
  ConjugateBracket out;
  out.lhs = lambda * norm_integral(young, t, u, opts);
  double conj = young.knee() * (lambda * (br.jump - br.ramp) -
                                young.ramp_slope() * gauss_strip(br.ramp, br.jump));
  const auto set = branch_nodes(br.jump, t, opts);
  for (std::size_t i = 0; i < set.nodes.size(); ++i) {
    const double y = 0.5 * set.nodes[i] * set.nodes[i];
    conj += set.weights[i] * std::exp(young.log_conj_at_log(u + y) - y);
  }
  out.conjugate_integral = conj;
  out.rhs = kSqrt2Pi + conj;
  return out;
}

LambdaSolution LambdaCache::get_or_solve(const YoungExp& young, double t,
                                         const NormEngineOptions& opts) {
  const Key key{young.beta(), young.scale(), young.knee(), t, opts.panels, opts.order, opts.tol};
  {
    std::shared_lock lock(mutex_);
    const auto it = table_.find(key);
    if (it != table_.end()) return it->second;
  }
  const LambdaSolution sol = solve_lambda(young, t, opts);
  std::unique_lock lock(mutex_);
  table_.emplace(key, sol);
  return sol;
}

std::size_t LambdaCache::size() const {
  std::shared_lock lock(mutex_);
  return table_.size();
}

void LambdaCache::clear() {
  std::unique_lock lock(mutex_);
  table_.clear();
}

}  // namespace gaussmoser
