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

#include "gaussmoser/young_orlicz.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace gaussmoser {
namespace {

void check_beta(double beta) {
  if (!(beta > 0.0 && beta <= 2.0)) throw DomainError("beta must lie in (0, 2]");
}

void check_nonneg(double t, const char* what) {
  if (!(t >= 0.0)) throw DomainError(std::string(what) + ": negative or NaN argument");
}

double parse_double(std::string_view s) {
  double v = 0.0;
  // from_chars for double is available in libstdc++ 11.
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw DomainError("weight spec: cannot parse number '" + std::string(s) + "'");
  return v;
}

}  // namespace

double envelope_tangency(double beta) {
  check_beta(beta);
  if (beta >= 1.0) return 0.0;
  // With x = t^beta the tangency condition 1 + m t = exp(t^beta),
  // m = beta t^(beta-1) exp(t^beta), reads beta x - 1 + exp(-x) = 0.
  // The nontrivial root lies beyond the minimum at x = -log(beta).
  auto q = [beta](double x) { return beta * x - 1.0 + std::exp(-x); };
  double lo = -std::log(beta);
  double hi = 2.0 / beta;
  while (q(hi) <= 0.0) hi *= 2.0;
  while (hi - lo > 1e-12 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (q(mid) < 0.0) lo = mid; else hi = mid;
  }
  return std::pow(0.5 * (lo + hi), 1.0 / beta);
}

ExpEnvelope::ExpEnvelope(double beta) : beta_(beta), tangency_(envelope_tangency(beta)) {
  slope_ = tangency_ > 0.0
               ? beta_ * std::pow(tangency_, beta_ - 1.0) * std::exp(std::pow(tangency_, beta_))
               : 0.0;
}

double ExpEnvelope::value(double t) const {
  check_nonneg(t, "env_exp");
  if (t < tangency_) return 1.0 + slope_ * t;
  return std::exp(std::pow(t, beta_));
}

double ExpEnvelope::log_value(double t) const {
  check_nonneg(t, "env_exp");
  if (t < tangency_) return std::log1p(slope_ * t);
  return std::pow(t, beta_);
}

double ExpEnvelope::deriv(double t) const {
  check_nonneg(t, "env_exp");
  if (t <= tangency_ && tangency_ > 0.0) return slope_;
  if (t == 0.0) return beta_ == 1.0 ? 1.0 : 0.0;
  return beta_ * std::pow(t, beta_ - 1.0) * std::exp(std::pow(t, beta_));
}

double ExpEnvelope::inverse(double y) const {
  if (!(y >= 1.0)) throw DomainError("ExpEnvelope::inverse: argument below 1");
  if (tangency_ > 0.0 && y < 1.0 + slope_ * tangency_) return (y - 1.0) / slope_;
  return std::pow(std::log(y), 1.0 / beta_);
}

double env_exp(double beta, double t) { return ExpEnvelope(beta).value(t); }

YoungExp::YoungExp(double beta, double N, double t0)
    : beta_(beta), N_(N), t0_(t0), tangency_(gaussmoser::envelope_tangency(beta)) {
  if (!(N > 0.0) || !std::isfinite(N)) throw DomainError("YoungExp: scale N must be positive");
  if (!(t0 > 0.0) || !std::isfinite(t0)) throw DomainError("YoungExp: knee t0 must be positive");
  if (t0 < tangency_)
    throw DomainError("invalid knee: t0 below the envelope tangency point");
  if (beta * std::pow(t0, beta) < 1.0 - 1e-12)
    throw DomainError("invalid knee: ramp not convex (need beta t0^beta >= 1)");
  ramp_ = N * std::exp(std::pow(t0, beta)) / t0;
  jump_top_ = std::max(ramp_, N * beta * std::pow(t0, beta - 1.0) * std::exp(std::pow(t0, beta)));
  log_N_beta_ = std::log(N * beta);
}

double YoungExp::default_knee(double beta) {
  check_beta(beta);
  const double convex_knee = std::pow(beta, -1.0 / beta);
  return std::max({gaussmoser::envelope_tangency(beta), 1.0, convex_knee}) + 0.5;
}

double YoungExp::value(double t) const {
  check_nonneg(t, "young_eval");
  if (t < t0_) return ramp_ * t;
  return N_ * std::exp(std::pow(t, beta_));
}

double YoungExp::log_value(double t) const {
  check_nonneg(t, "young_eval");
  if (t == 0.0) return -std::numeric_limits<double>::infinity();
  if (t < t0_) return std::log(ramp_ * t);
  return std::log(N_) + std::pow(t, beta_);
}

double YoungExp::deriv(double t) const {
  check_nonneg(t, "young_deriv");
  if (t <= t0_) return ramp_;
  return std::exp(log_deriv(t));
}

double YoungExp::log_deriv(double t) const {
  check_nonneg(t, "young_deriv");
  if (t <= t0_) return std::log(ramp_);
  return log_N_beta_ + (beta_ - 1.0) * std::log(t) + std::pow(t, beta_);
}

double YoungExp::deriv_inv(double tau) const {
  check_nonneg(tau, "young_deriv_inv");
  if (tau <= ramp_) return 0.0;
  if (tau <= jump_top_) return t0_;
  return deriv_inv_log(std::log(tau));
}

double YoungExp::deriv_inv_log(double log_tau) const {
  if (std::isnan(log_tau)) throw DomainError("young_deriv_inv: NaN argument");
  if (log_tau <= std::log(ramp_)) return 0.0;
  if (log_tau <= std::log(jump_top_)) return t0_;
  // With z = s^beta the equation log(N beta) + (beta - 1) log s + s^beta = log_tau
  // reads z + c log z = R, c = 1 - 1/beta. Its left side increases for
  // z > -c, which the convex-knee condition z >= t0^beta >= 1/beta ensures.
  const double c = 1.0 - 1.0 / beta_;
  const double R = log_tau - log_N_beta_;
  const double z_min = std::pow(t0_, beta_);
  auto g = [&](double z) { return z + c * std::log(z) - R; };
  double lo = z_min;
  double hi = std::max(z_min, R) + std::abs(c) * std::log(std::max(R, 1.0) + 1.0) + 1.0;
  while (g(hi) < 0.0) hi *= 2.0;
  double z = R > 1.0 ? R - c * std::log(R) : 0.5 * (lo + hi);
  z = std::clamp(z, lo, hi);
  for (int iter = 0; iter < 100; ++iter) {
    const double v = g(z);
    if (v > 0.0) hi = z; else lo = z;
    double next = z - v / (1.0 + c / z);
    if (!(next >= lo && next <= hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - z) <= 4e-16 * z || hi - lo <= 4e-16 * hi) {
      z = next;
      break;
    }
    z = next;
  }
  return std::max(t0_, std::pow(z, 1.0 / beta_));
}

double YoungExp::inv(double y) const {
  check_nonneg(y, "young_inv");
  if (y <= ramp_ * t0_) return y / ramp_;
  return std::pow(std::log(y / N_), 1.0 / beta_);
}

double YoungExp::inv_log(double log_y) const {
  if (log_y <= std::log(ramp_ * t0_)) return std::exp(log_y) / ramp_;
  return std::pow(log_y - std::log(N_), 1.0 / beta_);
}

double YoungExp::conj(double tau) const {
  check_nonneg(tau, "young_conj");
  if (tau <= ramp_) return 0.0;
  double total = t0_ * (std::min(tau, jump_top_) - ramp_);
  if (tau > jump_top_) {
    // b^{-1} grows like log^(1/beta); panels geometric in the argument.
    auto f = [this](double s) { return deriv_inv(s); };
    const auto edges = quad::geometric_edges(jump_top_, tau, 24, 1.35);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
      total += quad::adaptive(f, edges[i], edges[i + 1], 1e-13).value;
  }
  return total;
}

double YoungExp::conj_closed(double tau) const {
  check_nonneg(tau, "young_conj");
  if (tau <= ramp_) return 0.0;
  if (tau <= jump_top_) return t0_ * (tau - ramp_);
  return std::exp(log_conj_at_log(std::log(tau)));
}

double YoungExp::log_conj_at_log(double log_tau) const {
  if (log_tau <= std::log(ramp_)) return -std::numeric_limits<double>::infinity();
  if (log_tau <= std::log(jump_top_)) return std::log(t0_ * (std::exp(log_tau) - ramp_));
  // On the exponential branch N e^{s^beta} = tau s^{1-beta} / beta, so
  // B~(tau) = tau s (1 - s^{-beta} / beta).
  const double s = deriv_inv_log(log_tau);
  return log_tau + std::log(s) + std::log1p(-std::pow(s, -beta_) / beta_);
}

YoungExp build_constraint_young(double beta, double M, double t0) {
  check_beta(beta);
  if (!(M > 1.0)) throw DomainError("build_constraint_young: M must exceed 1");
  const ExpEnvelope env(beta);
  if (t0 < env.tangency()) throw DomainError("invalid knee: t0 below the envelope tangency point");
  return YoungExp(beta, 1.0 / (M + env.value(t0)), t0);
}

double ConjugateYoung::log_value(double tau) const {
  check_nonneg(tau, "conjugate");
  if (tau == 0.0) return -std::numeric_limits<double>::infinity();
  return base_.log_conj_at_log(std::log(tau));
}

double ConjugateYoung::inv(double y) const {
  check_nonneg(y, "conjugate inverse");
  const double r = base_.ramp_slope();
  if (y == 0.0) return r;
  const double top = base_.jump_top();
  const double at_top = base_.conj_closed(top);
  if (y <= at_top) return r + y / base_.knee();
  // B~ is increasing with derivative b^{-1} beyond the jump.
  double lo = top;
  double hi = 2.0 * top;
  while (base_.conj_closed(hi) < y) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (base_.conj_closed(mid) <= y) lo = mid; else hi = mid;
  }
  return lo;
}

WeightSpec WeightSpec::constant(double scale) {
  WeightSpec w;
  w.scale = scale;
  w.validate();
  return w;
}

WeightSpec WeightSpec::power(double a) {
  WeightSpec w;
  w.family = Family::power;
  w.exponent = a;
  w.validate();
  return w;
}

WeightSpec WeightSpec::power_log(double a, double b) {
  WeightSpec w;
  w.family = Family::power_log;
  w.exponent = a;
  w.log_exponent = b;
  w.validate();
  return w;
}

WeightSpec WeightSpec::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw DomainError("weight spec: expected family:params");
  const std::string_view family = text.substr(0, colon);
  const std::string_view params = text.substr(colon + 1);
  if (family == "const") return constant(parse_double(params));
  if (family == "pow") return power(parse_double(params));
  if (family == "powlog") {
    const auto comma = params.find(',');
    if (comma == std::string_view::npos) throw DomainError("weight spec: powlog needs a,b");
    return power_log(parse_double(params.substr(0, comma)), parse_double(params.substr(comma + 1)));
  }
  throw DomainError("weight spec: unknown family '" + std::string(family) + "'");
}

std::string WeightSpec::to_string() const {
  std::ostringstream os;
  os.precision(17);
  switch (family) {
    case Family::constant: os << "const:" << scale; break;
    case Family::power: os << "pow:" << exponent; break;
    case Family::power_log: os << "powlog:" << exponent << ',' << log_exponent; break;
  }
  return os.str();
}

void WeightSpec::validate() const {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw DomainError("weight spec: scale must be positive");
  if (!std::isfinite(exponent) || !std::isfinite(log_exponent))
    throw DomainError("weight spec: non-finite exponent");
  if (exponent < 0.0) throw DomainError("weight spec: negative power makes phi decreasing");
  if (log_exponent < 0.0) {
    // phi'/phi = a/t + b/((e+t) log(e+t)) must stay nonnegative.
    for (double lt = -12.0; lt <= 40.0; lt += 0.01) {
      const double t = std::exp(lt);
      if (log_deriv(t) < -1e-12) throw DomainError("weight spec: phi is not nondecreasing");
    }
  }
}

double WeightSpec::value(double t) const {
  if (family == Family::constant) return scale;
  return std::exp(log_value(t));
}

double WeightSpec::log_value(double t) const {
  check_nonneg(t, "weight");
  double out = std::log(scale);
  if (exponent != 0.0) {
    if (t == 0.0) return -std::numeric_limits<double>::infinity();
    out += exponent * std::log(t);
  }
  if (log_exponent != 0.0) out += log_exponent * std::log(std::log(std::numbers::e + t));
  return out;
}

double WeightSpec::log_deriv(double t) const {
  double d = 0.0;
  if (exponent != 0.0) d += exponent / t;
  if (log_exponent != 0.0) {
    const double u = std::numbers::e + t;
    d += log_exponent / (u * std::log(u));
  }
  return d;
}

}  // namespace gaussmoser
