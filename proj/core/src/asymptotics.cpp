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

#include "gaussmoser/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "gaussmoser/errors.hpp"
#include "gaussmoser/norm_engine.hpp"
#include "gaussmoser/moser.hpp"
#include "gaussmoser/quadrature.hpp"

namespace gaussmoser {
namespace {

void check_psi_args(double sigma, double d, double t) {
  if (!std::isfinite(sigma) || !std::isfinite(d) || !std::isfinite(t))
    throw DomainError("psi/upsilon: non-finite argument");
  const bool ok = (sigma > -1.0 && d >= 1.0) || (sigma <= -1.0 && d > 1.0);
  if (!ok) throw DomainError("psi/upsilon: need sigma > -1 with d >= 1, or d > 1");
  if (!(t > d)) throw DomainError("psi/upsilon: need t > d");
}

// int_a^b g over panels geometric in (x - a + 1).
template <class G>
double integrate_span(const G& g, double a, double b) {
  double total = 0.0;
  double lo = a;
  double width = std::min(1.0, b - a);
  while (lo < b) {
    const double hi = std::min(b, lo + width);
    total += quad::adaptive(g, lo, hi, 1e-14, 0.0, 80).value;
    lo = hi;
    width *= 1.5;
  }
  return total;
}

// With d = 1, tau = 1 + w^k, k = 1/(sigma+1), turns (tau^2-1)^sigma dtau
// into k (2 + w^k)^sigma dw, smooth at w = 0.
template <class Extra>
double integrate_from_one(double sigma, double t, const Extra& extra) {
  const double k = 1.0 / (sigma + 1.0);
  const double w_end = std::pow(t - 1.0, sigma + 1.0);
  auto g = [&](double w) {
    if (w <= 0.0) return 0.0;
    const double wk = std::pow(w, k);
    return k * std::pow(2.0 + wk, sigma) * extra(w, wk, k);
  };
  // Near w = 0 the panels shrink geometrically so a log singularity in
  // `extra` is resolved.
  double total = 0.0;
  double lo = 0.0;
  double hi = std::min(w_end, 1e-12 * std::max(1.0, w_end));
  total += quad::adaptive(g, lo, hi, 1e-14, 0.0, 80).value;
  lo = hi;
  while (lo < w_end) {
    hi = std::min(w_end, std::max(lo * 4.0, lo + 1e-12));
    if (lo >= 1.0) hi = std::min(w_end, lo + std::max(1.0, lo));
    total += quad::adaptive(g, lo, hi, 1e-14, 0.0, 80).value;
    lo = hi;
  }
  return total;
}

double c_beta(double beta) {
  if (beta == 2.0) return 2.0 * std::sqrt(std::numbers::pi);
  return std::pow(2.0, 1.0 / beta - 0.5) * std::sqrt(std::numbers::pi) * (2.0 - beta);
}

bool near(double a, double b) { return std::abs(a - b) < 1e-12; }

std::string num(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

ExpansionTerm term(std::string label, std::function<double(double)> fn) {
  return {std::move(label), std::move(fn), false};
}

ExpansionTerm slot(std::string label, std::function<double(double)> shape) {
  return {std::move(label), std::move(shape), true};
}

YoungExp young_for(const AsymptoticParams& p) {
  const double knee = std::isnan(p.knee) ? YoungExp::default_knee(p.beta) : p.knee;
  if (std::isfinite(p.N)) return YoungExp(p.beta, p.N, knee);
  return build_constraint_young(p.beta, p.M, knee);
}

ExpansionSpec psi_spec(double sigma) {
  ExpansionSpec s;
  s.name = "psi";
  auto one = [](double) { return 1.0; };
  const double e = 2.0 * sigma + 1.0;
  auto lead = [e](double t) { return std::pow(t, e) / e; };
  const std::string lead_label = "t^" + num(e) + "/" + num(e);
  if (sigma < -0.5 && !near(sigma, -0.5)) {
    s.terms = {slot("c", one)};
  } else if (near(sigma, -0.5)) {
    s.terms = {term("log t", [](double t) { return std::log(t); }), slot("c", one)};
  } else if (sigma < 0.5 && !near(sigma, 0.5)) {
    s.terms = {term(lead_label, lead), slot("c", one)};
  } else if (near(sigma, 0.5)) {
    s.terms = {term(lead_label, lead), term("-(1/2) log t", [](double t) { return -0.5 * std::log(t); }),
               slot("c", one)};
  } else {
    const double c2 = -sigma / (2.0 * sigma - 1.0);
    auto second = [c2, sigma](double t) { return c2 * std::pow(t, 2.0 * sigma - 1.0); };
    s.terms = {term(lead_label, lead), term(num(c2) + " t^" + num(2.0 * sigma - 1.0), second)};
    if (sigma < 1.5 && !near(sigma, 1.5)) {
      s.terms.push_back(slot("c", one));
    } else if (near(sigma, 1.5)) {
      s.terms.push_back(term("(3/8) log t", [](double t) { return 0.375 * std::log(t); }));
      s.terms.push_back(slot("c", one));
    } else {
      const double c3 = 0.5 * sigma * (sigma - 1.0) / (2.0 * sigma - 3.0);
      s.terms.push_back(term(num(c3) + " t^" + num(2.0 * sigma - 3.0),
                             [c3, sigma](double t) { return c3 * std::pow(t, 2.0 * sigma - 3.0); }));
    }
  }
  return s;
}

ExpansionSpec upsilon_spec(double sigma) {
  ExpansionSpec s;
  s.name = "upsilon";
  if (sigma < -0.5 && !near(sigma, -0.5)) {
    s.terms = {slot("c", [](double) { return 1.0; })};
  } else if (near(sigma, -0.5)) {
    s.terms = {term("(log t)^2", [](double t) { return std::log(t) * std::log(t); })};
  } else {
    const double e = 2.0 * sigma + 1.0;
    s.terms = {term("(2/" + num(e) + ") t^" + num(e) + " log t",
                    [e](double t) { return 2.0 / e * std::pow(t, e) * std::log(t); }),
               term("-(2/" + num(e * e) + ") t^" + num(e),
                    [e](double t) { return -2.0 / (e * e) * std::pow(t, e); })};
  }
  return s;
}

ExpansionSpec binv_spec(double beta, double N) {
  ExpansionSpec s;
  s.name = "binv";
  const double ib = 1.0 / beta;
  s.terms.push_back(term("(log t)^(1/beta)", [ib](double t) { return std::pow(std::log(t), ib); }));
  const double c2 = (1.0 - beta) / (beta * beta);
  if (c2 != 0.0)
    s.terms.push_back(term("((1-beta)/beta^2) (log t)^(1/beta-1) log log t", [=](double t) {
      return c2 * std::pow(std::log(t), ib - 1.0) * std::log(std::log(t));
    }));
  const double c3 = -std::log(N * beta) / beta;
  if (c3 != 0.0)
    s.terms.push_back(term("-(log N beta / beta) (log t)^(1/beta-1)",
                           [=](double t) { return c3 * std::pow(std::log(t), ib - 1.0); }));
  return s;
}

ExpansionSpec lambda_spec(double beta) {
  ExpansionSpec s;
  s.name = "lambda";
  const double c = c_beta(beta);
  if (beta < 2.0)
    s.terms = {term("c_beta t^(1-2/beta)", [=](double t) { return c * std::pow(t, 1.0 - 2.0 / beta); })};
  else
    s.terms = {term("c_2 / log t", [=](double t) { return c / std::log(t); })};
  return s;
}

ExpansionSpec inorm_spec(double beta) {
  ExpansionSpec s;
  s.name = "inorm";
  const double mu = leading_coefficient(beta);
  const double k = std::pow(2.0, -1.0 / beta);
  const double p = 2.0 / beta + 1.0;
  s.terms.push_back(term("mu_beta t^(2/beta+1)", [=](double t) { return mu * std::pow(t, p); }));
  if (beta < 2.0) {
    s.terms.push_back(term("-2^(-1/beta) (2/(2-beta)) t^(2/beta-1) log t", [=](double t) {
      return -k * 2.0 / (2.0 - beta) * std::pow(t, p - 2.0) * std::log(t);
    }));
    s.terms.push_back(slot("c_{beta,N} 2^(-1/beta) t^(2/beta-1)",
                           [=](double t) { return k * std::pow(t, p - 2.0); }));
  } else {
    s.terms.push_back(term("-2^(-1/2) (1/2) (log t)^2",
                           [=](double t) { return -k * 0.5 * std::log(t) * std::log(t); }));
    s.terms.push_back(term("-2^(-1/2) log t log log t",
                           [=](double t) { return -k * std::log(t) * std::log(std::log(t)); }));
  }
  return s;
}

ExpansionSpec fb_power_spec(double beta) {
  ExpansionSpec s;
  s.name = "fb_power";
  s.terms.push_back(term("t^2/2", [](double t) { return 0.5 * t * t; }));
  if (beta < 2.0) {
    s.terms.push_back(
        term("-(2/(2-beta)) log t", [=](double t) { return -2.0 / (2.0 - beta) * std::log(t); }));
    s.terms.push_back(slot("c_{beta,N}", [](double) { return 1.0; }));
  } else {
    s.terms.push_back(term("-(1/2) (log t)^2", [](double t) { return -0.5 * std::log(t) * std::log(t); }));
    s.terms.push_back(
        term("-log t log log t", [](double t) { return -std::log(t) * std::log(std::log(t)); }));
  }
  return s;
}

}  // namespace

double psi(double sigma, double d, double t) {
  check_psi_args(sigma, d, t);
  if (d == 1.0)
    return integrate_from_one(sigma, t, [](double, double, double) { return 1.0; });
  return integrate_span([sigma](double x) { return std::pow(x * x - 1.0, sigma); }, d, t);
}

double upsilon(double sigma, double d, double t) {
  check_psi_args(sigma, d, t);
  if (d == 1.0)
    return integrate_from_one(sigma, t, [](double w, double wk, double k) {
      return k * std::log(w) + std::log(2.0 + wk);
    });
  return integrate_span(
      [sigma](double x) {
        const double y = x * x - 1.0;
        return std::pow(y, sigma) * std::log(y);
      },
      d, t);
}

double upsilon0_closed(double d, double t) {
  auto F = [](double x) { return x * std::log(x * x - 1.0) - 2.0 * x + std::log((x + 1.0) / (x - 1.0)); };
  return F(t) - F(d);
}

std::string to_string(OrderVerdict v) {
  switch (v) {
    case OrderVerdict::converging: return "converging-to-1";
    case OrderVerdict::inconclusive: return "inconclusive";
    case OrderVerdict::failing: return "failing";
  }
  return "inconclusive";
}

AsymptoticsReport validate_expansion(const std::function<double(double)>& fn,
                                     const ExpansionSpec& spec, std::span<const double> t_grid) {
  if (spec.terms.empty()) throw DomainError("validate_expansion: empty spec");
  if (t_grid.size() < 3) throw DomainError("validate_expansion: need at least three grid points");
  AsymptoticsReport rep;
  rep.name = spec.name;
  rep.t.assign(t_grid.begin(), t_grid.end());
  for (double t : rep.t) rep.values.push_back(fn(t));
  const std::size_t n = rep.t.size();
  std::vector<double> partial(n, 0.0);  // sum of the terms already matched
  for (std::size_t j = 0; j < spec.terms.size(); ++j) {
    const ExpansionTerm& term = spec.terms[j];
    OrderReport o;
    o.label = term.label;
    o.band = j == 0 ? kLeadingBand : j == 1 ? kSecondBand : 0.0;
    o.assessed = j < 2;
    bool vanishing = false;
    std::vector<double> shape(n);
    for (std::size_t i = 0; i < n; ++i) {
      shape[i] = term.fn(rep.t[i]);
      if (shape[i] == 0.0 || !std::isfinite(shape[i])) vanishing = true;
    }
    if (term.unknown_constant && !vanishing) {
      for (std::size_t i = 0; i < n; ++i) o.constant_trace.push_back((rep.values[i] - partial[i]) / shape[i]);
      const double c = 0.5 * (o.constant_trace[n - 1] + o.constant_trace[n - 2]);
      o.constant = c;
      if (c == 0.0) vanishing = true;
      for (double& s : shape) s *= c;
    }
    if (vanishing) {
      o.verdict = OrderVerdict::inconclusive;
      o.ratio.assign(n, std::numeric_limits<double>::quiet_NaN());
    } else {
      for (std::size_t i = 0; i < n; ++i) o.ratio.push_back((rep.values[i] - partial[i]) / shape[i]);
      if (o.assessed) {
        const double d0 = std::abs(o.ratio[n - 3] - 1.0);
        const double d1 = std::abs(o.ratio[n - 2] - 1.0);
        const double d2 = std::abs(o.ratio[n - 1] - 1.0);
        const double slack = 1e-12;
        if (d0 <= o.band && d1 <= o.band && d2 <= o.band && d1 <= d0 + slack && d2 <= d1 + slack)
          o.verdict = OrderVerdict::converging;
        else if (d2 > o.band)
          o.verdict = OrderVerdict::failing;
        else
          o.verdict = OrderVerdict::inconclusive;
      } else {
        o.verdict = OrderVerdict::inconclusive;
      }
    }
    for (std::size_t i = 0; i < n; ++i) partial[i] += shape[i];
    rep.orders.push_back(std::move(o));
  }
  return rep;
}

ExpansionSpec power_rule(const ExpansionSpec& spec, double sigma) {
  if (!(sigma > 0.0)) throw DomainError("power_rule: sigma must be positive");
  if (spec.terms.size() < 2) throw DomainError("power_rule: need at least two terms");
  const auto E1 = spec.terms[0].fn;
  const auto E2 = spec.terms[1].fn;
  ExpansionSpec out;
  out.name = spec.name + "^" + num(sigma);
  out.terms.push_back(term("(" + spec.terms[0].label + ")^" + num(sigma),
                           [=](double t) { return std::pow(E1(t), sigma); }));
  out.terms.push_back({num(sigma) + " E1^(sigma-1) (" + spec.terms[1].label + ")",
                       [=](double t) { return sigma * std::pow(E1(t), sigma - 1.0) * E2(t); },
                       spec.terms[1].unknown_constant});
  if (spec.terms.size() >= 3 && !spec.terms[1].unknown_constant && !spec.terms[2].unknown_constant) {
    const auto E3 = spec.terms[2].fn;
    out.terms.push_back({"second-order power term", [=](double t) {
                           const double e1 = E1(t), e2 = E2(t), e3 = E3(t);
                           return sigma * std::pow(e1, sigma - 1.0) * e2 *
                                  (e3 / e2 + 0.5 * (sigma - 1.0) * e2 / e1);
                         },
                         false});
  }
  return out;
}

std::vector<std::string> builtin_names() {
  return {"binv", "lambda", "inorm", "fb_power", "psi", "upsilon"};
}

BuiltinCase builtin_case(const std::string& name, const AsymptoticParams& p) {
  if (name == "psi") {
    return {psi_spec(p.sigma), [p](double t) { return psi(p.sigma, p.d, t); }};
  }
  if (name == "upsilon") {
    return {upsilon_spec(p.sigma), [p](double t) { return upsilon(p.sigma, p.d, t); }};
  }
  const YoungExp y = young_for(p);
  if (name == "binv") {
    return {binv_spec(p.beta, y.scale()), [y](double t) { return y.deriv_inv(t); }};
  }
  if (name == "lambda") {
    return {lambda_spec(p.beta), [y](double t) { return std::exp(solve_lambda(y, t).log_lambda); }};
  }
  if (name == "inorm") {
    return {inorm_spec(p.beta), [y](double t) { return inv_iso_orlicz_norm(y, t).value; }};
  }
  if (name == "fb_power") {
    const double beta = p.beta;
    return {fb_power_spec(beta), [y, beta](double t) {
              return 0.5 * t * t + power_exponent_defect(beta, t, f_cal(y, t).excess);
            }};
  }
  throw DomainError("unknown expansion '" + name + "'");
}

std::vector<ExpansionSpec> builtin_specs(const AsymptoticParams& params) {
  std::vector<ExpansionSpec> out;
  for (const auto& n : builtin_names()) out.push_back(builtin_case(n, params).spec);
  return out;
}

std::vector<double> default_asymptotic_grid() { return {8.0, 12.0, 16.0, 20.0, 24.0, 28.0}; }

}  // namespace gaussmoser
