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

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace gaussmoser {

// Psi_sigma(t) = int_d^t (tau^2 - 1)^sigma dtau. Requires sigma > -1 and
// d >= 1, or sigma <= -1 and d > 1; and t > d.
double psi(double sigma, double d, double t);

// Upsilon_sigma(t) = int_d^t (tau^2 - 1)^sigma log(tau^2 - 1) dtau, same
// hypotheses.
double upsilon(double sigma, double d, double t);

// Antiderivative check for sigma = 0:
// tau log(tau^2-1) - 2 tau + log((tau+1)/(tau-1)) between d and t.
double upsilon0_closed(double d, double t);

struct ExpansionTerm {
  std::string label;
  // For an unknown-constant slot this is the shape multiplying the constant.
  std::function<double(double)> fn;
  bool unknown_constant = false;
};

struct ExpansionSpec {
  std::string name;
  std::vector<ExpansionTerm> terms;
};

enum class OrderVerdict { converging, inconclusive, failing };
std::string to_string(OrderVerdict v);

struct OrderReport {
  std::string label;
  // (F - sum_{i<j} E_i) / E_j on the grid; for an unknown slot the
  // denominator is the shape times the estimated constant.
  std::vector<double> ratio;
  double band = 0.0;
  // False for orders beyond the second: reported, not judged.
  bool assessed = true;
  OrderVerdict verdict = OrderVerdict::inconclusive;
  std::optional<double> constant;
  // (F - sum_{i<j} E_i) / shape_j on the grid, for unknown slots.
  std::vector<double> constant_trace;
};

struct AsymptoticsReport {
  std::string name;
  std::vector<double> t;
  std::vector<double> values;
  std::vector<OrderReport> orders;
};

inline constexpr double kLeadingBand = 0.15;
inline constexpr double kSecondBand = 0.35;

AsymptoticsReport validate_expansion(const std::function<double(double)>& fn,
                                     const ExpansionSpec& spec,
                                     std::span<const double> t_grid);

// Terms of F^sigma from a spec of F, by the first-order power rule (two
// terms) or its second-order form (three terms).
ExpansionSpec power_rule(const ExpansionSpec& spec, double sigma);

struct AsymptoticParams {
  double beta = 1.0;
  double M = 2.0;
  // When finite, B = YoungExp(beta, N, knee) instead of the constraint recipe.
  double N = std::numeric_limits<double>::quiet_NaN();
  double knee = std::numeric_limits<double>::quiet_NaN();
  double sigma = -0.5;
  double d = 1.0;
};

struct BuiltinCase {
  ExpansionSpec spec;
  std::function<double(double)> fn;
};

// Catalogue names: binv, lambda, inorm, fb_power, psi, upsilon.
std::vector<std::string> builtin_names();
BuiltinCase builtin_case(const std::string& name, const AsymptoticParams& params);
std::vector<ExpansionSpec> builtin_specs(const AsymptoticParams& params);

// {8, 12, ..., 28}
std::vector<double> default_asymptotic_grid();

}  // namespace gaussmoser
