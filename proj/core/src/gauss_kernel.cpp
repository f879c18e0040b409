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

#include "gaussmoser/gauss_kernel.hpp"

#include <algorithm>
#include <limits>

namespace gaussmoser {
namespace {

constexpr double kTailSwitch = 8.0;

// Mills ratio R(t) = Phi(t) / density(t) for t >= kTailSwitch, by the
// continued fraction R = 1/(t+ 1/(t+ 2/(t+ 3/(t+ ...)))) (modified Lentz).
double mills_ratio(double t) {
  constexpr double tiny = 1e-300;
  double f = t;
  double c = t;
  double d = 0.0;
  for (int k = 1; k < 500; ++k) {
    d = t + k * d;
    if (std::abs(d) < tiny) d = tiny;
    c = t + k / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return 1.0 / f;
}

void require_finite(double t, const char* what) {
  if (!std::isfinite(t)) throw DomainError(std::string(what) + ": non-finite argument");
}

}  // namespace

double gauss_tail(double t) {
  require_finite(t, "gauss_tail");
  if (t > kTailSwitch) return gauss_density(t) * mills_ratio(t);
  if (t < -kTailSwitch) return 1.0 - gauss_density(t) * mills_ratio(-t);
  return 0.5 * std::erfc(t / std::numbers::sqrt2);
}

double log_gauss_tail(double t) {
  require_finite(t, "log_gauss_tail");
  if (t > kTailSwitch) return log_gauss_density(t) + std::log(mills_ratio(t));
  if (t < -kTailSwitch) return std::log1p(-gauss_density(t) * mills_ratio(-t));
  return std::log(0.5 * std::erfc(t / std::numbers::sqrt2));
}

double gauss_tail_inv_log(double log_s) {
  if (!(log_s < 0.0) || std::isnan(log_s))
    throw DomainError("gauss_tail_inv: probability outside (0,1)");
  constexpr double log_half = -0.69314718055994531;
  if (log_s > log_half) {
    // s > 1/2: use symmetry, Phi^{-1}(s) = -Phi^{-1}(1 - s).
    const double s = std::exp(log_s);
    return -gauss_tail_inv(1.0 - s);
  }
  // Tail asymptotic seed: t^2 ~ L - log(L) - log(2 pi), L = -2 log s.
  const double L = -2.0 * log_s;
  double t = L > 2.5 ? std::sqrt(std::max(L - std::log(L) - 2.0 * kLogSqrt2Pi, 0.0))
                     : std::sqrt(std::max(L - 1.0, 0.0));
  // Bracket for the safeguard: log Phi is decreasing in t.
  double lo = 0.0;
  double hi = std::max(2.0 * t + 2.0, 40.0);
  while (log_gauss_tail(hi) > log_s) hi *= 2.0;
  for (int iter = 0; iter < 200; ++iter) {
    const double g = log_gauss_tail(t) - log_s;
    if (g > 0.0) lo = t; else hi = t;
    // d/dt log Phi(t) = -density(t) / Phi(t)
    const double slope = -std::exp(log_gauss_density(t) - log_gauss_tail(t));
    double next = t - g / slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - t) <= 1e-15 * std::max(1.0, t) || hi - lo < 1e-15) {
      return next;
    }
    t = next;
  }
  return t;
}

double gauss_tail_inv(double s) {
  if (!(s > 0.0 && s < 1.0)) throw DomainError("gauss_tail_inv: probability outside (0,1)");
  if (s == 0.5) return 0.0;
  if (s > 0.5) return -gauss_tail_inv_log(std::log(1.0 - s));
  return gauss_tail_inv_log(std::log(s));
}

double iso_profile(double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw DomainError("iso_profile: argument outside [0, 1]");
  if (s <= 0.0 || s >= 1.0) return 0.0;
  return gauss_density(gauss_tail_inv(s));
}

double exp_half_square(double tau) {
  if (std::abs(tau) > kLinearExpCeiling)
    throw DomainError("exp_half_square: argument beyond the linear-domain ceiling");
  return std::exp(0.5 * tau * tau);
}

std::string to_string(Domain d) {
  switch (d) {
    case Domain::full_line: return "full-line";
    case Domain::half_line: return "half-line";
    case Domain::interval: return "unit-interval";
  }
  return "unknown";
}

GaussGrid::GaussGrid(Domain d, std::vector<double> edges, int order)
    : domain_(d), edges_(std::move(edges)), order_(order) {
  if (edges_.size() < 2) throw DomainError("GaussGrid: need at least one panel");
  for (std::size_t i = 0; i + 1 < edges_.size(); ++i)
    if (!(edges_[i + 1] > edges_[i]))
      throw DomainError("GaussGrid: edges must be strictly increasing");
  set_.append_panels(edges_, order_);
}

GaussGrid GaussGrid::full_line(int panels, int order) {
  return GaussGrid(Domain::full_line,
                   quad::uniform_edges(-kFullLineTruncation, kFullLineTruncation, panels),
                   order);
}

GaussGrid GaussGrid::half_line(int panels, int order) {
  return GaussGrid(Domain::half_line, quad::uniform_edges(0.0, kFullLineTruncation, panels),
                   order);
}

GaussGrid GaussGrid::interval(double a, double b, int panels, int order) {
  if (!(b > a)) throw DomainError("GaussGrid::interval: empty interval");
  return GaussGrid(Domain::interval, quad::uniform_edges(a, b, panels), order);
}

GaussGrid GaussGrid::from_edges(Domain domain, std::vector<double> edges, int order) {
  return GaussGrid(domain, std::move(edges), order);
}

GaussGrid GaussGrid::refined() const {
  std::vector<double> e;
  e.reserve(2 * edges_.size());
  for (std::size_t i = 0; i + 1 < edges_.size(); ++i) {
    e.push_back(edges_[i]);
    e.push_back(0.5 * (edges_[i] + edges_[i + 1]));
  }
  e.push_back(edges_.back());
  return GaussGrid(domain_, std::move(e), order_);
}

double GaussGrid::truncation() const {
  return domain_ == Domain::interval ? 0.0 : upper();
}

double GaussGrid::measure_of_domain(Measure m) const {
  if (m == Measure::lebesgue) return upper() - lower();
  return gauss_tail(lower()) - gauss_tail(upper());
}

}  // namespace gaussmoser
