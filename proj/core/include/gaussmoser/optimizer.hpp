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

#include <cstdint>
#include <vector>

#include "gaussmoser/moser.hpp"
#include "gaussmoser/rearrangement.hpp"

namespace gaussmoser {

struct MaximizerConfig {
  MoserProblem problem;
  double half_width = 6.0;  // grid on [-T, T]
  int nodes = 129;          // odd, so t = 0 is a node
  int max_iterations = 60000;
  double initial_step = 0.5;
  double max_step = 4.0;
  double step_grow = 2.0;
  double step_shrink = 0.5;
  double min_step = 1e-12;
  int restarts = 8;
  std::uint64_t seed = 1;
  double perturbation = 0.3;  // std of the restart noise on w
  int trials = 10;            // truncated sharpness profiles
  double w_floor = -12.0;     // clamp for seeds
  double tol_objective = 1e-10;
  double tol_constraint = 1e-6;
  double tol_normalization = 1e-6;
  unsigned threads = 0;

  void validate() const;
  std::vector<double> grid() const;
};

struct MaximizerResult {
  Profile1D profile;
  std::vector<double> g;  // cell slopes
  double J = 0.0;
  double constraint = 0.0;
  double normalization_residual = 0.0;
  int iterations = 0;
  bool converged = false;
  // (best - median) / best over restarts.
  double restart_dispersion = 0.0;
  std::vector<double> restart_objectives;
  std::vector<bool> restart_converged;
  int best_restart = 0;
  // Accepted objective values of the best restart.
  std::vector<double> history;
  double best_trial = 0.0;
  // Bound on the objective mass beyond the grid: 2 exp((kappa u(T))^q) phi Phi(T).
  double tail_bound = 0.0;
};

struct SharpnessTrial {
  double truncation = 0.0;
  double J = 0.0;
  double constraint = 0.0;
  double theta = 1.0;
  std::vector<double> w;
};

// The sharpness profile truncated at `trials` points between tau0 and T,
// each rescaled to the constraint, on the config grid.
std::vector<SharpnessTrial> sharpness_trials(const MaximizerConfig& config);

struct GradientReport {
  double max_relative_error = 0.0;
  std::vector<int> coordinates;
  std::vector<double> analytic;
  std::vector<double> numeric;
};

// Analytic gradient of J in w against central differences (step h) at
// `samples` random cells. Errors are relative to max(|a|, |n|, 1e-3 |grad|_inf).
GradientReport gradient_check(const MaximizerConfig& config, const std::vector<double>& w,
                              int samples = 20, double h = 1e-5);

// J(w) and its gradient; the profile is built per the normalization.
double objective_of_w(const MaximizerConfig& config, const std::vector<double>& w,
                      std::vector<double>* grad = nullptr);

// Profile from log-slopes on the config grid.
Profile1D profile_of_w(const MaximizerConfig& config, const std::vector<double>& w);

MaximizerResult maximize(const MaximizerConfig& config);

}  // namespace gaussmoser
