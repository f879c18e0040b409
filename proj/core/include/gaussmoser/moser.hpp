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

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "gaussmoser/norm_engine.hpp"
#include "gaussmoser/rearrangement.hpp"
#include "gaussmoser/young_orlicz.hpp"

namespace gaussmoser {

enum class Normalization { median, mean };

std::string to_string(Normalization n);
Normalization parse_normalization(const std::string& s);

// kappa_beta = 1/sqrt(2) + sqrt(2)/beta.
double kappa_beta(double beta);
// q = 2 beta / (2 + beta).
double moser_exponent(double beta);

struct MoserProblem {
  double beta = 1.0;
  double M = 2.0;
  Normalization normalization = Normalization::median;
  WeightSpec weight;

  MoserProblem() = default;
  MoserProblem(double beta, double M, WeightSpec weight = WeightSpec::constant(1.0),
               Normalization normalization = Normalization::median);

  double kappa() const { return kappa_beta(beta); }
  double q() const { return moser_exponent(beta); }
  // log of exp((kappa |u|)^q) phi(|u|).
  double log_integrand(double u) const;
  // d/du of the above, for u > 0.
  double log_integrand_deriv(double u) const;
  void validate() const;
};

// Node weights of a t-domain profile against gamma_1: trapezoid on the
// exact Gaussian mass of each cell, with the two tails assigned to the end
// nodes (constant extension). They sum to 1.
std::vector<double> profile_node_weights(std::span<const double> nodes);

// Gaussian masses of the cells between consecutive nodes.
std::vector<double> profile_cell_masses(std::span<const double> nodes);

// Gaussian mass below the first node and above the last.
double profile_tail_mass(std::span<const double> nodes);

// int exp((kappa |u|)^q) phi(|u|) dgamma_1, accumulated in log domain.
ModularValue objective(const MoserProblem& problem, const Profile1D& p);

// int Exp^beta(|u'|) dgamma_1 with cell slopes; the tails carry the slopes
// of the end cells.
double constraint_modular(const MoserProblem& problem, const Profile1D& p);

// Median (value at t = 0) or gamma_1-mean of the profile, per the problem.
double normalization_value(const MoserProblem& problem, const Profile1D& p);

struct BoundOptions {
  // Knee of the constraint Young function; NaN selects the default.
  double knee = std::numeric_limits<double>::quiet_NaN();
  NormEngineOptions norm;
  int order = 16;
  int unit_panels = 4;      // panels on [0, 1]
  double panel_ratio = 2.0; // geometric panels beyond t = 1
  double log_drop = 40.0;
  double t_max = 1e15;
  bool estimate_error = true;
  unsigned threads = 0;
};

struct BoundResult {
  double value = 0.0;
  double log_value = 0.0;
  double error = 0.0;
  // Upper end of the quadrature; beyond it an analytic power tail is added
  // when the log-drop criterion was not met before t_max.
  double truncation = 0.0;
  double tail = 0.0;
  double tail_slope = 0.0;
  int panels = 0;
  double knee = 0.0;
  double scale = 0.0;
};

// sqrt(2/pi) int_0^inf exp([kappa F_B(t)]^q - t^2/2) phi(F_B(t)) dt with B
// from build_constraint_young. Throws DivergenceError when the integrand
// does not decay faster than 1/t at t_max.
BoundResult holder_bound(const MoserProblem& problem, const BoundOptions& opts = {});

// log of the bound integrand at t, for diagnostics.
double holder_log_integrand(const MoserProblem& problem, const YoungExp& young, double t,
                            const NormEngineOptions& opts = {});

enum class Verdict { improvable, sharp_divergent, undetermined };
std::string to_string(Verdict v);

struct ConditionResult {
  Verdict verdict = Verdict::undetermined;
  double epsilon = 0.0;
  // Exponent of t in t^{-4/(4-beta^2)} phi(t), or NaN for beta = 2.
  double power = std::numeric_limits<double>::quiet_NaN();
  std::string detail;
};

// Comparison test of the integral conditions on the weight family. With
// epsilon NaN only the improvability test is run.
ConditionResult improvement_condition(double beta, const WeightSpec& weight,
                                      double epsilon = std::numeric_limits<double>::quiet_NaN());

// The odd profile u(x) = sgn(x) int_{tau0}^{|x|} f, f(tau) =
// (tau^2/2 - log tau - 2 log log tau)^{1/beta}.
class SharpnessProfile {
 public:
  SharpnessProfile(double beta, double tau0, double knee, double achieved_modular);

  double beta() const { return beta_; }
  double tau0() const { return tau0_; }
  double knee() const { return knee_; }
  double achieved_modular() const { return modular_; }

  double f(double tau) const;
  // f(tau) - (tau^2/2)^{1/beta}, without cancellation.
  double f_defect(double tau) const;
  // u(x) for x >= 0.
  double primitive(double x) const;
  // u(x) - mu_beta x^{2/beta+1} for x >= tau0.
  double primitive_excess(double x) const;
  // (kappa u(x))^q - x^2/2 for x >= 0.
  double exponent(double x) const;
  // Same, given the excess at x (x > tau0).
  double exponent_from_excess(double x, double excess) const;

  // The profile on given t nodes (odd extension).
  Profile1D on_grid(std::span<const double> t_nodes) const;

 private:
  double beta_;
  double tau0_;
  double knee_;
  double modular_;
};

// Smallest tau0 on the 0.01 grid with e^{tau^2/2}/(tau log^2 tau) >=
// Exp^beta(t0) for tau > tau0 and 1 + (2/sqrt(2 pi)) / log(tau0) <= M.
SharpnessProfile sharpness_profile(const MoserProblem& problem,
                                   double knee = std::numeric_limits<double>::quiet_NaN());

struct SharpnessFeasibility {
  double constraint = 0.0;  // grid part plus tail
  double tail = 0.0;        // (2/sqrt(2 pi)) / log X, the exact mass beyond X
  double median = 0.0;
  double mean = 0.0;
};

// Constraint modular of the sharpness profile from cell slopes on a grid of
// spacing h over [tau0, X] (u' = 0 below tau0), plus the tail beyond X;
// median and gamma_1-mean on the same symmetric grid.
SharpnessFeasibility sharpness_feasibility(const MoserProblem& problem, const SharpnessProfile& profile,
                                           double X = 30.0, double h = 1e-3);

// int_{-T}^{T} exp((kappa |u|)^q) phi(|u|) dgamma_1 for the sharpness profile.
double sharpness_partial_integral(const MoserProblem& problem, const SharpnessProfile& profile,
                                  double T);

// Same integral restricted to a <= |x| <= b.
double sharpness_increment(const MoserProblem& problem, const SharpnessProfile& profile,
                           double a, double b);

// First x on a 1% geometric grid beyond tau0 (and e) where
// u(x) >= 1.1 (mu/2) x^{2/beta+1} and exponent(x) >= -0.9 g(x).
double divergence_start(const MoserProblem& problem, const SharpnessProfile& profile);

// (2/sqrt(2 pi)) int_{tau1}^{T} e^{-g(t)} phi((mu/2) t^{2/beta+1}) dt.
double comparison_lower_bound(const MoserProblem& problem, double tau1, double T);

}  // namespace gaussmoser
