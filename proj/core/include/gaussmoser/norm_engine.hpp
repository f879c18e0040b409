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
#include <map>
#include <optional>
#include <shared_mutex>
#include <tuple>

#include "gaussmoser/young_orlicz.hpp"

namespace gaussmoser {

struct NormEngineOptions {
  // Panels of the tau-grid over the exponential branch; the plateau and
  // ramp pieces are integrated in closed form.
  int panels = 64;
  int order = 16;
  // Relative tolerance on the modular condition.
  double tol = 1e-12;

  NormEngineOptions doubled() const {
    NormEngineOptions o = *this;
    o.panels *= 2;
    return o;
  }
};

// The scale lambda_t solving
//   int_0^t B(b^{-1}(lambda e^{tau^2/2})) e^{-tau^2/2} dtau = sqrt(2 pi).
struct LambdaSolution {
  double t = 0.0;
  double log_lambda = 0.0;
  // sqrt(2 log(1/lambda)); NaN while lambda >= 1.
  double sigma = std::numeric_limits<double>::quiet_NaN();
  double residual = 0.0;
  int evaluations = 0;

  double lambda() const { return std::exp(log_lambda); }
};

// Left side of the lambda condition for a trial log lambda.
double lambda_modular(const YoungExp& young, double t, double log_lambda,
                      const NormEngineOptions& opts = {});

LambdaSolution solve_lambda(const YoungExp& young, double t,
                            const NormEngineOptions& opts = {});

// int_0^t b^{-1}(lambda_t e^{tau^2/2}) dtau for a given lambda.
double norm_integral(const YoungExp& young, double t, double log_lambda,
                     const NormEngineOptions& opts = {});

struct NormValue {
  double value = 0.0;
  // Change under panel doubling.
  double error = 0.0;
  LambdaSolution lambda;
};

// Orlicz norm of 1/I over (Phi(t), 1/2) in L^{B~}, by the dual formula.
NormValue inv_iso_orlicz_norm(const YoungExp& young, double t,
                              const NormEngineOptions& opts = {});

// mu_beta = 2^{-1/beta} beta / (2 + beta), so that
// mu_beta t^{2/beta + 1} = int_0^t (tau^2 / 2)^{1/beta} dtau.
// 1/I(s) sampled on (Phi(t), 1/2) with Lebesgue weights; GL panels
// uniform in log s. Feeds the Amemiya and Luxemburg norms as a check on
// the closed formula.
struct InvIsoSamples {
  std::vector<double> values;
  std::vector<double> weights;
};
InvIsoSamples inv_iso_samples(double t, int panels = 400, int order = 16);

double leading_coefficient(double beta);

struct FcalValue {
  double value = 0.0;
  // value - mu_beta t^{2/beta+1}, computed without cancellation.
  double excess = 0.0;
  double norm = 0.0;
  double constant_term = 0.0;
  LambdaSolution lambda;
};

// F_B(t) = |||1/I||| + (sqrt(2 pi) / 2) B^{-1}(1).
FcalValue f_cal(const YoungExp& young, double t,
                const NormEngineOptions& opts = {});

// [kappa F_B(t)]^q - t^2/2 given the excess, valid when
// (kappa mu_beta)^q = 1/2, i.e. kappa = kappa_beta and q = 2 beta/(2+beta).
double power_exponent_defect(double beta, double t, double excess);

// Both sides of
//   lambda int_0^t b^{-1} = sqrt(2 pi) + int_0^t B~(lambda e^{tau^2/2}) e^{-tau^2/2}.
struct ConjugateBracket {
  double lhs = 0.0;
  double rhs = 0.0;
  double conjugate_integral = 0.0;
};

ConjugateBracket conjugate_bracket(const YoungExp& young,
                                   const LambdaSolution& sol,
                                   const NormEngineOptions& opts = {});

// Memo of lambda solutions keyed by (beta, N, t0, t, panels). Readers share
// the lock; inserts take it exclusively.
class LambdaCache {
 public:
  LambdaSolution get_or_solve(const YoungExp& young, double t,
                              const NormEngineOptions& opts = {});
  std::size_t size() const;
  void clear();

 private:
  using Key = std::tuple<double, double, double, double, int, int, double>;
  mutable std::shared_mutex mutex_;
  std::map<Key, LambdaSolution> table_;
};

}  // namespace gaussmoser
