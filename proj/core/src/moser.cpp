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

#include "gaussmoser/moser.hpp"

#include <algorithm>
#include <sstream>

#include "gaussmoser/parallel.hpp"

namespace gaussmoser {
namespace {

// gamma_1([a, b]) without cancellation in either tail.
double gauss_mass(double a, double b) {
  if (!(b > a)) return 0.0;
  if (a >= 0.0) return gauss_tail(a) - gauss_tail(b);
  if (b <= 0.0) return gauss_tail(-b) - gauss_tail(-a);
  return 1.0 - gauss_tail(b) - gauss_tail(-a);
}

// Edges uniform in log x with panel ratio at most `ratio`.
std::vector<double> log_edges(double a, double b, double ratio) {
  const int n = std::max(1, static_cast<int>(std::ceil(std::log(b / a) / std::log(ratio))));
  std::vector<double> e(n + 1);
  for (int i = 0; i <= n; ++i) e[i] = a * std::pow(b / a, static_cast<double>(i) / n);
  e.front() = a;
  e.back() = b;
  return e;
}

bool close_to(double x, double y) { return std::abs(x - y) <= 1e-12 * std::max(1.0, std::abs(y)); }

struct PanelEval {
  quad::LogSum sum;
  double first = 0.0;  // log integrand at the first and last node
  double last = 0.0;
  double peak = -std::numeric_limits<double>::infinity();
  double last_node = 0.0;
};

}  // namespace

std::string to_string(Normalization n) { return n == Normalization::median ? "median" : "mean"; }

Normalization parse_normalization(const std::string& s) {
  if (s == "median") return Normalization::median;
  if (s == "mean") return Normalization::mean;
  throw DomainError("normalization must be 'median' or 'mean'");
}

double kappa_beta(double beta) { return 1.0 / std::numbers::sqrt2 + std::numbers::sqrt2 / beta; }

double moser_exponent(double beta) { return 2.0 * beta / (2.0 + beta); }

MoserProblem::MoserProblem(double beta_, double M_, WeightSpec weight_, Normalization n)
    : beta(beta_), M(M_), normalization(n), weight(weight_) {
  validate();
}

void MoserProblem::validate() const {
  if (!(beta > 0.0 && beta <= 2.0)) throw DomainError("beta must lie in (0, 2]");
  if (!(M > 1.0) || !std::isfinite(M)) throw DomainError("M must exceed 1");
  weight.validate();
}

double MoserProblem::log_integrand(double u) const {
  const double a = std::abs(u);
  return std::pow(kappa() * a, q()) + weight.log_value(a);
}

double MoserProblem::log_integrand_deriv(double u) const {
  const double qq = q();
  return qq * std::pow(kappa(), qq) * std::pow(u, qq - 1.0) + weight.log_deriv(u);
}

std::vector<double> profile_cell_masses(std::span<const double> nodes) {
  std::vector<double> m(nodes.size() - 1);
  for (std::size_t j = 0; j + 1 < nodes.size(); ++j) m[j] = gauss_mass(nodes[j], nodes[j + 1]);
  return m;
}

double profile_tail_mass(std::span<const double> nodes) {
  return gauss_tail(-nodes.front()) + gauss_tail(nodes.back());
}

std::vector<double> profile_node_weights(std::span<const double> nodes) {
  if (nodes.size() < 2) throw DomainError("profile needs at least two nodes");
  const auto m = profile_cell_masses(nodes);
  std::vector<double> w(nodes.size(), 0.0);
  for (std::size_t j = 0; j < m.size(); ++j) {
    w[j] += 0.5 * m[j];
    w[j + 1] += 0.5 * m[j];
  }
  w.front() += gauss_tail(-nodes.front());
  w.back() += gauss_tail(nodes.back());
  return w;
}

ModularValue objective(const MoserProblem& problem, const Profile1D& p) {
  if (p.domain != ProfileDomain::t_domain) throw DomainError("objective: expects a t-domain profile");
  const auto w = profile_node_weights(p.nodes);
  quad::LogSum acc;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!std::isfinite(p.values[i])) throw EvaluationError("objective: non-finite profile", p.nodes[i]);
    acc.add(std::log(w[i]) + problem.log_integrand(p.values[i]));
  }
  ModularValue out;
  out.log_value = acc.log_value();
  out.overflow = out.log_value > 709.0;
  out.value = out.overflow ? std::numeric_limits<double>::infinity() : std::exp(out.log_value);
  return out;
}

double constraint_modular(const MoserProblem& problem, const Profile1D& p) {
  if (p.domain != ProfileDomain::t_domain)
    throw DomainError("constraint_modular: expects a t-domain profile");
  const ExpEnvelope env(problem.beta);
  const auto m = profile_cell_masses(p.nodes);
  const std::size_t n = p.nodes.size();
  auto slope = [&](std::size_t j) {
    return std::abs((p.values[j + 1] - p.values[j]) / (p.nodes[j + 1] - p.nodes[j]));
  };
  double total = 0.0;
  for (std::size_t j = 0; j < m.size(); ++j) total += m[j] * env.value(slope(j));
  total += gauss_tail(-p.nodes.front()) * env.value(slope(0));
  total += gauss_tail(p.nodes.back()) * env.value(slope(n - 2));
  return total;
}

double normalization_value(const MoserProblem& problem, const Profile1D& p) {
  if (problem.normalization == Normalization::median) return p.at(0.0);
  const auto w = profile_node_weights(p.nodes);
  double s = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) s += w[i] * p.values[i];
  return s;
}

double holder_log_integrand(const MoserProblem& problem, const YoungExp& young, double t,
                            const NormEngineOptions& opts) {
  const FcalValue fc = f_cal(young, t, opts);
  const double defect = power_exponent_defect(problem.beta, t, fc.excess);
  return 0.5 * std::log(2.0 / std::numbers::pi) + defect + problem.weight.log_value(fc.value);
}

BoundResult holder_bound(const MoserProblem& problem, const BoundOptions& opts) {
  problem.validate();
  const double knee = std::isnan(opts.knee) ? YoungExp::default_knee(problem.beta) : opts.knee;
  const YoungExp young = build_constraint_young(problem.beta, problem.M, knee);
  BoundResult out;
  out.knee = knee;
  out.scale = young.scale();

  const quad::Rule& rule = quad::gauss_legendre(opts.order);
  auto eval_panel = [&](double a, double b) {
    PanelEval pe;
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double t = mid + half * rule.nodes[i];
      const double L = holder_log_integrand(problem, young, t, opts.norm);
      if (std::isnan(L)) throw EvaluationError("holder_bound: NaN integrand", t);
      pe.sum.add(std::log(half * rule.weights[i]) + L);
      if (i == 0) pe.first = L;
      pe.last = L;
      pe.last_node = t;
      pe.peak = std::max(pe.peak, L);
    }
    return pe;
  };

  std::vector<double> edges = quad::uniform_edges(0.0, 1.0, opts.unit_panels);
  quad::LogSum total;
  double peak = -std::numeric_limits<double>::infinity();
  std::size_t next = 0;
  bool done = false;
  std::vector<PanelEval> evals;
  const unsigned batch = std::max(1u, opts.threads == 0 ? std::thread::hardware_concurrency() : opts.threads);
  while (!done) {
    while (edges.size() < next + batch + 1) edges.push_back(edges.back() * opts.panel_ratio);
    auto batch_evals = parallel_map(
        batch, [&](std::size_t k) { return eval_panel(edges[next + k], edges[next + k + 1]); },
        opts.threads);
    for (std::size_t k = 0; k < batch_evals.size(); ++k) {
      const PanelEval& pe = batch_evals[k];
      evals.push_back(pe);
      total.merge(pe.sum);
      peak = std::max(peak, pe.peak);
      const double b = edges[next + k + 1];
      ++out.panels;
      if (b > 1.0 && pe.last < pe.first && pe.peak < peak - opts.log_drop) {
        out.truncation = b;
        done = true;
        break;
      }
      if (b >= opts.t_max && evals.size() >= 2) {
        // Power-law fit of the log integrand over the last two panels.
        const PanelEval& prev = evals[evals.size() - 2];
        const double slope = (pe.last - prev.last) / std::log(pe.last_node / prev.last_node);
        out.tail_slope = slope;
        out.truncation = b;
        if (!(slope < -1.0 - 1e-3)) {
          std::ostringstream os;
          os << "holder_bound: integrand decays like t^" << slope << " at t = " << b
             << "; the bound diverges";
          throw DivergenceError(os.str());
        }
        const double log_tail = pe.last + std::log(pe.last_node / (-slope - 1.0));
        out.tail = std::exp(log_tail);
        total.add(log_tail);
        done = true;
        break;
      }
    }
    next += batch;
  }
  out.log_value = total.log_value();
  out.value = std::exp(out.log_value);
  if (opts.estimate_error) {
    BoundOptions fine = opts;
    fine.estimate_error = false;
    fine.unit_panels *= 2;
    fine.panel_ratio = std::sqrt(opts.panel_ratio);
    fine.norm = opts.norm.doubled();
    out.error = std::abs(holder_bound(problem, fine).value - out.value);
  }
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::improvable: return "improvable";
    case Verdict::sharp_divergent: return "sharp-divergent";
    case Verdict::undetermined: return "undetermined";
  }
  return "undetermined";
}

ConditionResult improvement_condition(double beta, const WeightSpec& weight, double epsilon) {
  if (!(beta > 0.0 && beta <= 2.0)) throw DomainError("beta must lie in (0, 2]");
  if (!std::isnan(epsilon) && !(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  weight.validate();
  const double a = weight.family == WeightSpec::Family::constant ? 0.0 : weight.exponent;
  const double b = weight.family == WeightSpec::Family::power_log ? weight.log_exponent : 0.0;
  ConditionResult r;
  std::ostringstream os;
  os.precision(12);
  if (beta == 2.0) {
    // exp(-(1/8) log^2 t) beats every power of t and of log t.
    r.verdict = Verdict::improvable;
    os << "int^inf exp(-(log t)^2/8) t^" << a << " log(e+t)^" << b << " dt < inf";
    r.detail = os.str();
    return r;
  }
  const double d = 4.0 - beta * beta;
  r.power = a - 4.0 / d;
  if (r.power < -1.0 && !close_to(r.power, -1.0)) {
    r.verdict = Verdict::improvable;
    os << "t-exponent " << r.power << " < -1";
  } else if (close_to(r.power, -1.0) && b < -1.0) {
    r.verdict = Verdict::improvable;
    os << "t-exponent -1 with log-exponent " << b << " < -1";
  } else if (!std::isnan(epsilon)) {
    const double pe = a - (4.0 + epsilon) / d;
    if ((pe > -1.0 && !close_to(pe, -1.0)) || (close_to(pe, -1.0) && b >= -1.0)) {
      r.verdict = Verdict::sharp_divergent;
      r.epsilon = epsilon;
      os << "with epsilon = " << epsilon << " the t-exponent is " << pe << " >= -1";
    } else {
      os << "t-exponent " << r.power << " >= -1 but epsilon = " << epsilon
         << " gives " << pe << " < -1";
    }
  } else {
    os << "t-exponent " << r.power << " >= -1; no epsilon given";
  }
  r.detail = os.str();
  return r;
}

SharpnessProfile::SharpnessProfile(double beta, double tau0, double knee, double achieved)
    : beta_(beta), tau0_(tau0), knee_(knee), modular_(achieved) {}

double SharpnessProfile::f(double tau) const {
  const double h = 0.5 * tau * tau - std::log(tau) - 2.0 * std::log(std::log(tau));
  return std::pow(h, 1.0 / beta_);
}

double SharpnessProfile::f_defect(double tau) const {
  const double y = 0.5 * tau * tau;
  const double delta = -std::log(tau) - 2.0 * std::log(std::log(tau));
  if (y > 2.0 * std::abs(delta)) return std::pow(y, 1.0 / beta_) * std::expm1(std::log1p(delta / y) / beta_);
  return f(tau) - std::pow(y, 1.0 / beta_);
}

double SharpnessProfile::primitive_excess(double x) const {
  if (x < tau0_) throw DomainError("primitive_excess: x below tau0");
  const double p = 2.0 / beta_ + 1.0;
  double total = -leading_coefficient(beta_) * std::pow(tau0_, p);
  if (x == tau0_) return total;
  auto g = [this](double t) { return f_defect(t); };
  const auto edges = log_edges(tau0_, x, 1.5);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double scale = 1e-15 * (1.0 + std::abs(f_defect(edges[i + 1])) * (edges[i + 1] - edges[i]));
    total += quad::adaptive(g, edges[i], edges[i + 1], 1e-13, scale).value;
  }
  return total;
}

double SharpnessProfile::primitive(double x) const {
  const double a = std::abs(x);
  if (a <= tau0_) return 0.0;
  double u;
  const double lead = leading_coefficient(beta_) * std::pow(a, 2.0 / beta_ + 1.0);
  const double ex = primitive_excess(a);
  if (ex > -0.5 * lead) {
    u = lead + ex;
  } else {
    auto g = [this](double t) { return f(t); };
    u = quad::adaptive(g, tau0_, a, 1e-13).value;
  }
  return x < 0.0 ? -u : u;
}

double SharpnessProfile::exponent_from_excess(double x, double excess) const {
  const double lead = leading_coefficient(beta_) * std::pow(x, 2.0 / beta_ + 1.0);
  const double q = moser_exponent(beta_);
  if (excess > -0.5 * lead) return 0.5 * x * x * std::expm1(q * std::log1p(excess / lead));
  const double u = primitive(x);
  return std::pow(kappa_beta(beta_) * u, q) - 0.5 * x * x;
}

double SharpnessProfile::exponent(double x) const {
  const double a = std::abs(x);
  if (a <= tau0_) return -0.5 * a * a;
  return exponent_from_excess(a, primitive_excess(a));
}

Profile1D SharpnessProfile::on_grid(std::span<const double> t_nodes) const {
  Profile1D p;
  p.domain = ProfileDomain::t_domain;
  p.nodes.assign(t_nodes.begin(), t_nodes.end());
  p.values.reserve(p.nodes.size());
  for (double t : p.nodes) p.values.push_back(primitive(t));
  return p;
}

SharpnessProfile sharpness_profile(const MoserProblem& problem, double knee) {
  problem.validate();
  const double beta = problem.beta;
  const double t0 = std::isnan(knee) ? YoungExp::default_knee(beta) : knee;
  const ExpEnvelope env(beta);
  if (t0 < env.tangency()) throw DomainError("invalid knee: t0 below the envelope tangency point");
  const double level = std::pow(t0, beta);  // log Exp^beta(t0)
  auto h = [](double tau) { return 0.5 * tau * tau - std::log(tau) - 2.0 * std::log(std::log(tau)); };
  auto hprime = [](double tau) { return tau - 1.0 / tau - 2.0 / (tau * std::log(tau)); };
  // h decreases then increases; locate its minimum.
  double lo = 1.0 + 1e-9, hi = 10.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (hprime(mid) < 0.0) lo = mid; else hi = mid;
  }
  const double tau_min = hi;
  const double h_min = h(tau_min);
  const double c = 2.0 / kSqrt2Pi;
  for (long k = 101;; ++k) {
    const double tau = k / 100.0;
    const bool ratio_ok = tau >= tau_min ? h(tau) >= level : h_min >= level;
    const bool modular_ok = 1.0 + c / std::log(tau) <= problem.M;
    if (ratio_ok && modular_ok) {
      const double achieved = (1.0 - 2.0 * gauss_tail(tau)) + c / std::log(tau);
      return SharpnessProfile(beta, tau, t0, achieved);
    }
    if (k > 10000000) throw ConvergenceError("sharpness_profile: no admissible tau0 below 1e5");
  }
}

SharpnessFeasibility sharpness_feasibility(const MoserProblem& problem, const SharpnessProfile& profile,
                                           double X, double h) {
  const double tau0 = profile.tau0();
  if (!(X > tau0) || !(h > 0.0)) throw DomainError("sharpness_feasibility: need X > tau0 and h > 0");
  const ExpEnvelope env(problem.beta);
  const auto rule = quad::gauss_legendre(8);
  const int n = static_cast<int>(std::ceil((X - tau0) / h));
  SharpnessFeasibility out;
  // Right half; the left half mirrors it.
  double grid_part = 0.0, u = 0.0;
  std::vector<double> moment(n);
  for (int i = 0; i < n; ++i) {
    const double a = tau0 + (X - tau0) * i / n;
    const double b = tau0 + (X - tau0) * (i + 1) / n;
    double inc = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k)
      inc += rule.weights[k] * profile.f(0.5 * (a + b) + 0.5 * (b - a) * rule.nodes[k]);
    inc *= 0.5 * (b - a);
    const double m = gauss_mass(a, b);
    grid_part += m * env.value(inc / (b - a));
    moment[i] = m * (u + 0.5 * inc);
    u += inc;
  }
  out.tail = 2.0 / (kSqrt2Pi * std::log(X));
  out.constraint = gauss_mass(-tau0, tau0) + 2.0 * grid_part + out.tail;
  out.median = profile.primitive(0.0);
  // Full line, left to right: cells on [-X, -tau0], then [tau0, X].
  double mean = 0.0;
  for (int i = n; i-- > 0;) mean -= moment[i];
  for (int i = 0; i < n; ++i) mean += moment[i];
  out.mean = mean;
  return out;
}

double sharpness_increment(const MoserProblem& problem, const SharpnessProfile& profile,
                           double a, double b) {
  if (!(b > a) || a < 0.0) throw DomainError("sharpness_increment: need 0 <= a < b");
  const double tau0 = profile.tau0();
  double total = 0.0;
  const double phi0 = problem.weight.value(0.0);
  if (a < tau0 && phi0 > 0.0) total += 2.0 * phi0 * gauss_mass(a, std::min(b, tau0));
  const double lo = std::max(a, tau0);
  if (b <= lo) return total;
  const quad::Rule& rule = quad::gauss_legendre(16);
  const auto e = log_edges(lo, b, 1.25);
  const int panels = static_cast<int>(e.size()) - 1;
  auto defect = [&](double t) { return profile.f_defect(t); };
  double excess = profile.primitive_excess(lo);
  const double lead_c = leading_coefficient(problem.beta);
  const double p = 2.0 / problem.beta + 1.0;
  quad::LogSum acc;
  for (int i = 0; i < panels; ++i) {
    const double pa = e[i], pb = e[i + 1];
    const double half = 0.5 * (pb - pa), mid = 0.5 * (pa + pb);
    double prev_x = pa;
    double ex = excess;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      const double x = mid + half * rule.nodes[k];
      ex += quad::adaptive(defect, prev_x, x, 1e-13, 1e-15 * (1.0 + std::abs(defect(x)) * (x - prev_x))).value;
      prev_x = x;
      const double u = lead_c * std::pow(x, p) + ex;
      const double L = profile.exponent_from_excess(x, ex) + problem.weight.log_value(u);
      acc.add(std::log(half * rule.weights[k]) + L);
    }
    excess = ex + quad::adaptive(defect, prev_x, pb, 1e-13, 1e-15 * (1.0 + std::abs(defect(pb)) * (pb - prev_x))).value;
  }
  total += 2.0 / kSqrt2Pi * std::exp(acc.log_value());
  return total;
}

double sharpness_partial_integral(const MoserProblem& problem, const SharpnessProfile& profile,
                                  double T) {
  if (!(T > 0.0)) throw DomainError("sharpness_partial_integral: T must be positive");
  return sharpness_increment(problem, profile, 0.0, T);
}

namespace {
double g_bound(double beta, double x) {
  const double l = std::log(x), ll = std::log(std::log(x));
  if (beta < 2.0) return (2.0 / (2.0 - beta)) * l + (8.0 / (2.0 - beta)) * ll;
  return 0.5 * l * l + 4.0 * l * ll;
}
}  // namespace

double divergence_start(const MoserProblem& problem, const SharpnessProfile& profile) {
  const double beta = problem.beta;
  const double p = 2.0 / beta + 1.0;
  const double mu = leading_coefficient(beta);
  auto defect = [&](double t) { return profile.f_defect(t); };
  double x = std::max(profile.tau0(), std::numbers::e) * 1.01;
  double excess = profile.primitive_excess(x);
  double first = NAN;
  int run = 0;
  for (int i = 0; i < 5000; ++i) {
    const double lead = mu * std::pow(x, p);
    const bool ok = lead + excess >= 1.1 * 0.5 * lead &&
                    profile.exponent_from_excess(x, excess) >= -g_bound(beta, x);
    if (ok) {
      if (run == 0) first = x;
      if (++run >= 10) return first;
    } else {
      run = 0;
    }
    const double nx = x * 1.01;
    excess += quad::adaptive(defect, x, nx, 1e-13, 1e-15 * (1.0 + std::abs(defect(nx)) * (nx - x))).value;
    x = nx;
  }
  throw ConvergenceError("divergence_start: lower bounds never activate below 1e21");
}

double comparison_lower_bound(const MoserProblem& problem, double tau1, double T) {
  if (!(T > tau1) || !(tau1 > 1.0)) throw DomainError("comparison_lower_bound: need 1 < tau1 < T");
  const double beta = problem.beta;
  const double p = 2.0 / beta + 1.0;
  const double half_mu = 0.5 * leading_coefficient(beta);
  auto integrand = [&](double t) {
    return std::exp(-g_bound(beta, t) + problem.weight.log_value(half_mu * std::pow(t, p)));
  };
  const auto e = log_edges(tau1, T, 1.5);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < e.size(); ++i) total += quad::adaptive(integrand, e[i], e[i + 1], 1e-12).value;
  return 2.0 / kSqrt2Pi * total;
}

}  // namespace gaussmoser
