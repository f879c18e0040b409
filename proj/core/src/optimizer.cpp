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

#include "gaussmoser/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "gaussmoser/parallel.hpp"

namespace gaussmoser {
namespace {

struct Grid {
  std::vector<double> nodes;
  std::vector<double> node_weights;
  std::vector<double> cell_mass;  // including the tails on the end cells
  double h = 0.0;
  std::size_t center = 0;
};

Grid make_grid(const MaximizerConfig& c) {
  Grid g;
  g.nodes = c.grid();
  g.node_weights = profile_node_weights(g.nodes);
  g.cell_mass = profile_cell_masses(g.nodes);
  g.cell_mass.front() += gauss_tail(-g.nodes.front());
  g.cell_mass.back() += gauss_tail(g.nodes.back());
  g.h = g.nodes[1] - g.nodes[0];
  g.center = g.nodes.size() / 2;
  return g;
}

// v_i = signed integral of g from 0 to t_i.
std::vector<double> primitive_values(const Grid& grid, const std::vector<double>& w) {
  const std::size_t n = grid.nodes.size();
  std::vector<double> v(n, 0.0);
  for (std::size_t i = grid.center + 1; i < n; ++i) v[i] = v[i - 1] + grid.h * std::exp(w[i - 1]);
  for (std::size_t i = grid.center; i-- > 0;) v[i] = v[i + 1] - grid.h * std::exp(w[i]);
  return v;
}

std::vector<double> profile_values(const MaximizerConfig& c, const Grid& grid,
                                   const std::vector<double>& w) {
  auto v = primitive_values(grid, w);
  if (c.problem.normalization == Normalization::mean) {
    double m = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) m += grid.node_weights[i] * v[i];
    for (double& x : v) x -= m;
  }
  return v;
}

// For a node vector a, G_c = d/dw_c sum_i a_i v_i.
std::vector<double> pull_back(const Grid& grid, const std::vector<double>& w,
                              const std::vector<double>& a) {
  const std::size_t n = a.size();
  std::vector<double> suffix(n + 1, 0.0), prefix(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] + a[i];
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + a[i];
  std::vector<double> out(n - 1);
  for (std::size_t c = 0; c + 1 < n; ++c) {
    const double gc = grid.h * std::exp(w[c]);
    out[c] = c >= grid.center ? gc * suffix[c + 1] : -gc * prefix[c + 1];
  }
  return out;
}

double objective_impl(const MaximizerConfig& c, const Grid& grid, const std::vector<double>& w,
                      std::vector<double>* grad) {
  const auto u = profile_values(c, grid, w);
  const std::size_t n = u.size();
  quad::LogSum acc;
  std::vector<double> a(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double lf = std::log(grid.node_weights[i]) + c.problem.log_integrand(u[i]);
    acc.add(lf);
    // At u = 0 the integrand has a kink; the zero subgradient matches
    // central differences.
    if (grad && std::abs(u[i]) > 1e-12) {
      const double s = u[i] > 0.0 ? 1.0 : -1.0;
      a[i] = std::exp(lf) * c.problem.log_integrand_deriv(std::abs(u[i])) * s;
    }
  }
  if (grad) {
    *grad = pull_back(grid, w, a);
    if (c.problem.normalization == Normalization::mean) {
      const double total = std::accumulate(a.begin(), a.end(), 0.0);
      const auto mw = pull_back(grid, w, grid.node_weights);
      for (std::size_t k = 0; k < grad->size(); ++k) (*grad)[k] -= mw[k] * total;
    }
    for (double x : *grad) {
      if (!std::isfinite(x)) {
        std::ostringstream os;
        os << "non-finite gradient; w =";
        for (double y : w) os << ' ' << y;
        throw EvaluationError(os.str(), 0.0);
      }
    }
  }
  return std::exp(acc.log_value());
}

double constraint_of(const MaximizerConfig& c, const Grid& grid, const std::vector<double>& w,
                     double log_theta, std::vector<double>* grad = nullptr) {
  const ExpEnvelope env(c.problem.beta);
  double total = 0.0;
  if (grad) grad->assign(w.size(), 0.0);
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double g = std::exp(w[k] + log_theta);
    total += grid.cell_mass[k] * env.value(g);
    if (grad) (*grad)[k] = grid.cell_mass[k] * env.deriv(g) * g;
  }
  return total;
}

// Shift w by log theta, theta in (0, 1], so the constraint is min(M, current).
double project(const MaximizerConfig& c, const Grid& grid, std::vector<double>& w) {
  const double M = c.problem.M;
  if (constraint_of(c, grid, w, 0.0) <= M) return 1.0;
  double lo = -1.0, hi = 0.0;
  while (constraint_of(c, grid, w, lo) > M) {
    hi = lo;
    lo *= 2.0;
    if (lo < -1e4) throw ConvergenceError("project: constraint not reachable by rescaling");
  }
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (constraint_of(c, grid, w, mid) > M) hi = mid; else lo = mid;
  }
  for (double& x : w) x += lo;
  return std::exp(lo);
}

struct RunResult {
  std::vector<double> w;
  std::vector<double> history;
  double J = 0.0;
  int iterations = 0;
  bool converged = false;
};

RunResult ascend(const MaximizerConfig& c, const Grid& grid, std::vector<double> w) {
  project(c, grid, w);
  RunResult r;
  std::vector<double> grad, cgrad;
  double J = objective_impl(c, grid, w, &grad);
  std::vector<double> history{J};
  double step = c.initial_step;
  const std::size_t m = w.size();
  std::vector<double> prev_s, prev_grad, prev_d;
  for (int it = 0; it < c.max_iterations; ++it) {
    r.iterations = it + 1;
    const double C = constraint_of(c, grid, w, 0.0, &cgrad);
    const bool active = C >= c.problem.M * (1.0 - 1e-9);
    // Steepest ascent in the L2(gamma) metric on g = e^w, tangent to the
    // constraint when it is active.
    std::vector<double> P(m), s(m);
    double cc = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      P[k] = 1.0 / (grid.cell_mass[k] * std::exp(2.0 * w[k]));
      s[k] = P[k] * grad[k];
      cc += cgrad[k] * cgrad[k] * P[k];
    }
    auto tangent = [&](std::vector<double>& v) {
      if (!active || !(cc > 0.0)) return;
      double num = 0.0;
      for (std::size_t k = 0; k < m; ++k) num += cgrad[k] * v[k];
      for (std::size_t k = 0; k < m; ++k) v[k] -= num / cc * cgrad[k] * P[k];
    };
    tangent(s);
    // Polak-Ribiere with restart.
    std::vector<double> d = s;
    if (!prev_d.empty()) {
      double num = 0.0, den = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        num += grad[k] * (s[k] - prev_s[k]);
        den += prev_grad[k] * prev_s[k];
      }
      const double b = den > 0.0 ? std::max(0.0, num / den) : 0.0;
      for (std::size_t k = 0; k < m; ++k) d[k] += b * prev_d[k];
      tangent(d);
      double slope = 0.0;
      for (std::size_t k = 0; k < m; ++k) slope += grad[k] * d[k];
      if (!(slope > 0.0)) d = s;
    }
    double dmax = 0.0;
    for (double x : d) dmax = std::max(dmax, std::abs(x));
    if (!(dmax > 0.0)) break;
    prev_s = s;
    prev_grad = grad;
    prev_d = d;
    bool accepted = false;
    while (step >= c.min_step) {
      std::vector<double> trial(m);
      for (std::size_t k = 0; k < m; ++k) trial[k] = w[k] + step * d[k] / dmax;
      project(c, grid, trial);
      std::vector<double> tgrad;
      const double Jt = objective_impl(c, grid, trial, &tgrad);
      if (Jt > J) {
        w = std::move(trial);
        grad = std::move(tgrad);
        J = Jt;
        accepted = true;
        step = std::min(c.max_step, step * c.step_grow);
        break;
      }
      step *= c.step_shrink;
    }
    if (!accepted) break;
    history.push_back(J);
    if (history.size() > 10 && J - history[history.size() - 11] < c.tol_objective * J) {
      r.converged = true;
      break;
    }
  }
  if (!r.converged && history.size() > 10 &&
      history.back() - history[history.size() - 11] < c.tol_objective * history.back())
    r.converged = true;
  r.w = std::move(w);
  r.J = J;
  r.history = std::move(history);
  return r;
}

}  // namespace

void MaximizerConfig::validate() const {
  problem.validate();
  if (!(half_width > 0.0 && half_width <= 8.0)) throw DomainError("grid half-width must lie in (0, 8]");
  if (nodes < 65 || nodes % 2 == 0) throw DomainError("node count must be odd and at least 65");
  if (max_iterations < 1 || restarts < 1 || trials < 1) throw DomainError("iteration counts must be positive");
  if (!(initial_step > 0.0 && max_step >= initial_step && step_grow >= 1.0 && step_shrink > 0.0 &&
        step_shrink < 1.0))
    throw DomainError("invalid step schedule");
  if (!(tol_objective > 0.0 && tol_constraint > 0.0 && tol_normalization > 0.0))
    throw DomainError("tolerances must be positive");
}

std::vector<double> MaximizerConfig::grid() const {
  std::vector<double> t(nodes);
  for (int i = 0; i < nodes; ++i) t[i] = -half_width + 2.0 * half_width * i / (nodes - 1);
  t[nodes / 2] = 0.0;
  return t;
}

Profile1D profile_of_w(const MaximizerConfig& config, const std::vector<double>& w) {
  const Grid grid = make_grid(config);
  if (w.size() + 1 != grid.nodes.size()) throw DomainError("w must have one entry per cell");
  Profile1D p;
  p.domain = ProfileDomain::t_domain;
  p.nodes = grid.nodes;
  p.values = profile_values(config, grid, w);
  return p;
}

double objective_of_w(const MaximizerConfig& config, const std::vector<double>& w,
                      std::vector<double>* grad) {
  const Grid grid = make_grid(config);
  if (w.size() + 1 != grid.nodes.size()) throw DomainError("w must have one entry per cell");
  return objective_impl(config, grid, w, grad);
}

std::vector<SharpnessTrial> sharpness_trials(const MaximizerConfig& config) {
  config.validate();
  const Grid grid = make_grid(config);
  const SharpnessProfile prof = sharpness_profile(config.problem);
  const double T = config.half_width;
  const double tau0 = std::min(prof.tau0(), T);
  std::vector<SharpnessTrial> out;
  for (int k = 1; k <= config.trials; ++k) {
    SharpnessTrial tr;
    tr.truncation = tau0 + (T - tau0) * k / config.trials;
    std::vector<double> w(grid.nodes.size() - 1);
    for (std::size_t c = 0; c < w.size(); ++c) {
      const double a = std::abs(grid.nodes[c]), b = std::abs(grid.nodes[c + 1]);
      const double lo = std::min(std::min(a, b), tr.truncation);
      const double hi = std::min(std::max(a, b), tr.truncation);
      const double slope = (prof.primitive(hi) - prof.primitive(lo)) / grid.h;
      w[c] = slope > 0.0 ? std::max(config.w_floor, std::log(slope)) : config.w_floor;
    }
    tr.theta = project(config, grid, w);
    tr.constraint = constraint_of(config, grid, w, 0.0);
    tr.J = objective_impl(config, grid, w, nullptr);
    tr.w = std::move(w);
    out.push_back(std::move(tr));
  }
  return out;
}

GradientReport gradient_check(const MaximizerConfig& config, const std::vector<double>& w,
                              int samples, double h) {
  const Grid grid = make_grid(config);
  if (w.size() + 1 != grid.nodes.size()) throw DomainError("w must have one entry per cell");
  std::vector<double> grad;
  objective_impl(config, grid, w, &grad);
  double gmax = 0.0;
  for (double x : grad) gmax = std::max(gmax, std::abs(x));
  std::mt19937_64 rng(config.seed);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(w.size()) - 1);
  GradientReport rep;
  for (int s = 0; s < samples; ++s) {
    const int k = pick(rng);
    auto wp = w, wm = w;
    wp[k] += h;
    wm[k] -= h;
    const double fd = (objective_impl(config, grid, wp, nullptr) - objective_impl(config, grid, wm, nullptr)) /
                      (2.0 * h);
    const double denom = std::max({std::abs(grad[k]), std::abs(fd), 1e-3 * gmax});
    const double err = denom > 0.0 ? std::abs(fd - grad[k]) / denom : 0.0;
    rep.coordinates.push_back(k);
    rep.analytic.push_back(grad[k]);
    rep.numeric.push_back(fd);
    rep.max_relative_error = std::max(rep.max_relative_error, err);
  }
  return rep;
}

MaximizerResult maximize(const MaximizerConfig& config) {
  config.validate();
  const Grid grid = make_grid(config);
  const auto trials = sharpness_trials(config);
  std::size_t best_trial = 0;
  for (std::size_t k = 1; k < trials.size(); ++k)
    if (trials[k].J > trials[best_trial].J) best_trial = k;
  const std::vector<double>& seed_w = trials[best_trial].w;

  auto run = [&](std::size_t r) {
    std::vector<double> w = seed_w;
    if (r > 0) {
      std::mt19937_64 rng(config.seed + 0x9E3779B97F4A7C15ULL * r);
      std::normal_distribution<double> noise(0.0, config.perturbation);
      for (double& x : w) x = std::max(config.w_floor, x + noise(rng));
    }
    return ascend(config, grid, std::move(w));
  };
  const auto runs = parallel_map(static_cast<std::size_t>(config.restarts), run, config.threads);

  MaximizerResult res;
  res.best_trial = trials[best_trial].J;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    res.restart_objectives.push_back(runs[r].J);
    res.restart_converged.push_back(runs[r].converged);
    if (runs[r].J > runs[res.best_restart].J) res.best_restart = static_cast<int>(r);
  }
  const RunResult& best = runs[res.best_restart];
  res.J = best.J;
  res.iterations = best.iterations;
  res.history = best.history;
  res.converged = std::any_of(runs.begin(), runs.end(), [](const RunResult& r) { return r.converged; });
  auto sorted = res.restart_objectives;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  const double median = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  res.restart_dispersion = (res.J - median) / res.J;

  res.profile = profile_of_w(config, best.w);
  for (double x : best.w) res.g.push_back(std::exp(x));
  res.constraint = constraint_of(config, grid, best.w, 0.0);
  res.normalization_residual = std::abs(normalization_value(config.problem, res.profile));
  const double uT = std::max(std::abs(res.profile.values.front()), std::abs(res.profile.values.back()));
  res.tail_bound = 2.0 * std::exp(config.problem.log_integrand(uT)) * gauss_tail(config.half_width);
  return res;
}

}  // namespace gaussmoser
