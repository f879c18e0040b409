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

#include "commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>

#include "gaussmoser/asymptotics.hpp"
#include "gaussmoser/errors.hpp"
#include "gaussmoser/gauss_kernel.hpp"
#include "gaussmoser/moser.hpp"
#include "gaussmoser/norm_engine.hpp"
#include "gaussmoser/optimizer.hpp"
#include "gaussmoser/rearrangement.hpp"
#include "gaussmoser/young_orlicz.hpp"

namespace gaussmoser::cli {
namespace {

using json = nlohmann::ordered_json;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Non-finite numbers become null.
json num(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

json num_array(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

struct Document {
  json params = json::object();
  json result = json::object();
  json error_estimate = nullptr;
  json warnings = json::array();
  std::vector<std::string> csv_header;
  std::vector<std::vector<double>> csv_rows;
};

// Options shared by the subcommands that build a Young function.
struct YoungArgs {
  double beta = 1.0;
  double M = 2.0;
  double N = kNaN;
  double t0 = kNaN;

  void add(CLI::App* app) {
    app->add_option("--beta", beta, "Exponent beta in (0, 2]")->capture_default_str();
    app->add_option("--M", M, "Constraint level M > 1")->capture_default_str();
    app->add_option("--N", N, "Scale N; overrides the M recipe");
    app->add_option("--t0", t0, "Knee of B; default per beta");
  }
  double knee() const { return std::isnan(t0) ? YoungExp::default_knee(beta) : t0; }
  YoungExp build() const {
    if (!(beta > 0.0 && beta <= 2.0)) throw DomainError("beta must lie in (0, 2]");
    if (std::isfinite(N)) return YoungExp(beta, N, knee());
    return build_constraint_young(beta, M, knee());
  }
  void echo(json& p) const {
    p["beta"] = beta;
    if (std::isfinite(N)) p["N"] = N; else p["M"] = M;
    p["t0"] = knee();
  }
};

struct EngineArgs {
  NormEngineOptions opts;
  void add(CLI::App* app) {
    app->add_option("--panels", opts.panels, "Panels over the exponential branch")->capture_default_str();
    app->add_option("--order", opts.order, "Gauss-Legendre order per panel")->capture_default_str();
    app->add_option("--tol", opts.tol, "Tolerance on the modular condition")->capture_default_str();
  }
  void echo(json& p) const {
    p["panels"] = opts.panels;
    p["order"] = opts.order;
    p["tol"] = opts.tol;
  }
};

MoserProblem make_problem(double beta, double M, const std::string& phi, const std::string& norm) {
  return MoserProblem(beta, M, WeightSpec::parse(phi), parse_normalization(norm));
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &pos);
    } catch (const std::exception&) {
      throw DomainError("cannot parse number '" + item + "'");
    }
    if (pos != item.size()) throw DomainError("cannot parse number '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw DomainError("empty list");
  return out;
}

SampledField load_field(const std::string& input, std::uint64_t seed, int n, int dim, int bumps) {
  if (input.empty()) return random_bump_field(seed, n, dim, bumps);
  std::ifstream in(input);
  if (!in) throw DomainError("cannot open field file '" + input + "'");
  return SampledField::read_csv(in);
}

void echo_field(json& p, const std::string& input, std::uint64_t seed, int n, int dim, int bumps) {
  if (!input.empty()) {
    p["input"] = input;
    return;
  }
  p["seed"] = seed;
  p["n"] = n;
  p["dim"] = dim;
  p["bumps"] = bumps;
}

// argv without the program name, with the key=value lines of --config
// inserted as --key=value right after the subcommand, so explicit flags
// that follow take precedence.
std::vector<std::string> expand_config(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open config file '" + path + "'");
  std::vector<std::string> extra;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string x) {
    const auto b = x.find_first_not_of(" \t\r");
    const auto e = x.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : x.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw DomainError(path + ":" + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw DomainError(path + ":" + std::to_string(lineno) + ": empty key");
    extra.push_back("--" + key + "=" + value);
  }
  auto pos = std::find_if(args.begin(), args.end(), [](const std::string& a) {
    const auto& names = subcommand_names();
    return std::find(names.begin(), names.end(), a) != names.end();
  });
  if (pos == args.end()) throw DomainError("--config needs a subcommand");
  args.insert(pos + 1, extra.begin(), extra.end());
  return args;
}

struct Command {
  CLI::App* app = nullptr;
  std::function<void(Document&)> body;
  bool csv_capable = false;
};

}  // namespace

const std::vector<std::string>& subcommand_names() {
  static const std::vector<std::string> names{"phi",       "iso",      "young",   "lambda",   "norm",
                                              "fb",        "bound",    "condition", "sharpness",
                                              "maximize",  "asympt",   "rearrange", "polya-szego"};
  return names;
}

const std::vector<OperationEntry>& operation_registry() {
  static const std::vector<OperationEntry> ops{
      {"gauss_tail", "phi"},
      {"gauss_tail_inv", "phi"},
      {"integrate", "phi"},
      {"log_integrate", "phi"},
      {"iso_profile", "iso"},
      {"env_exp", "young"},
      {"build_constraint_young", "young"},
      {"young_eval", "young"},
      {"young_deriv", "young"},
      {"young_deriv_inv", "young"},
      {"young_inv", "young"},
      {"young_conj", "young"},
      {"solve_lambda", "lambda"},
      {"inv_iso_orlicz_norm", "norm"},
      {"modular", "norm"},
      {"luxemburg_norm", "norm"},
      {"orlicz_norm_amemiya", "norm"},
      {"f_cal", "fb"},
      {"holder_bound", "bound"},
      {"improvement_condition", "condition"},
      {"sharpness_profile", "sharpness"},
      {"sharpness_partial_integral", "sharpness"},
      {"objective", "maximize"},
      {"constraint_modular", "maximize"},
      {"maximize", "maximize"},
      {"gradient_check", "maximize"},
      {"psi", "asympt"},
      {"upsilon", "asympt"},
      {"validate_expansion", "asympt"},
      {"builtin_specs", "asympt"},
      {"signed_decreasing_rearrangement", "rearrange"},
      {"ehrhard_symmetral", "rearrange"},
      {"median", "rearrange"},
      {"mean_value", "rearrange"},
      {"dirichlet_modular", "polya-szego"},
      {"rearranged_dirichlet_modular", "polya-szego"},
      {"polya_szego_check", "polya-szego"},
  };
  return ops;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gaussian Moser-type inequalities: norms, bounds, expansions and maximizers"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  std::string config_path;
  app.add_option("--config", config_path, "Flat key=value file; flags override it");
  std::string format = "json";
  std::string output;
  bool no_timing = false;
  app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--output", output, "Write to this path instead of stdout");
  app.add_flag("--no-timing", no_timing, "Emit elapsed_ms as null for reproducible output");

  std::vector<Command> commands;
  auto add = [&](const std::string& name, const std::string& help) -> Command& {
    commands.push_back({app.add_subcommand(name, help), {}, false});
    return commands.back();
  };

  // phi
  {
    auto& c = add("phi", "Gaussian tail Phi(t) = gamma_1((t, inf)), its inverse and moments");
    auto* t = c.app->add_option("--t", "Point t")->type_name("REAL");
    auto* s = c.app->add_option("--s", "Probability s; returns Phi^{-1}(s)")->type_name("REAL");
    auto* k = c.app->add_option("--moment", "k: integral of |x|^k dgamma_1")->type_name("REAL");
    auto* a = c.app->add_option("--log-mgf", "a: log of the integral of e^{a x} dgamma_1")->type_name("REAL");
    c.app->require_option(1, 4);
    c.body = [=](Document& d) {
      if (t->count()) {
        const double v = t->as<double>();
        d.params["t"] = v;
        d.result["value"] = gauss_tail(v);
        d.result["log_value"] = num(log_gauss_tail(v));
      }
      if (s->count()) {
        const double v = s->as<double>();
        d.params["s"] = v;
        d.result["inverse"] = num(gauss_tail_inv(v));
      }
      if (k->count()) {
        const double v = k->as<double>();
        if (!(v >= 0.0)) throw DomainError("moment order must be nonnegative");
        d.params["moment"] = v;
        const auto e = integrate([v](double x) { return std::pow(std::abs(x), v); },
                                 GaussGrid::full_line(), Measure::gaussian);
        d.result["moment"] = e.value;
        d.error_estimate = e.error;
      }
      if (a->count()) {
        const double v = a->as<double>();
        d.params["log_mgf"] = v;
        const auto e = log_integrate([v](double x) { return v * x; }, GaussGrid::full_line(), Measure::gaussian);
        d.result["log_mgf"] = e.value;
        d.error_estimate = e.error;
      }
    };
  }

  // iso
  {
    auto& c = add("iso", "Gaussian isoperimetric profile I(s) = phi(Phi^{-1}(s))");
    auto* s = c.app->add_option("--s", "Probability s in [0, 1]")->required()->type_name("REAL");
    c.body = [=](Document& d) {
      const double v = s->as<double>();
      d.params["s"] = v;
      d.result["value"] = iso_profile(v);
      if (v > 0.0 && v < 1.0) d.result["symmetric_value"] = iso_profile(1.0 - v);
    };
  }

  // young
  {
    auto& c = add("young", "Evaluate the Young function B, b, b^{-1}, B^{-1}, the conjugate and Exp^beta");
    auto ya = std::make_shared<YoungArgs>();
    ya->add(c.app);
    auto* t = c.app->add_option("--t", "Argument")->required()->type_name("REAL");
    c.body = [=](Document& d) {
      const auto y = ya->build();
      const double v = t->as<double>();
      ya->echo(d.params);
      d.params["t"] = v;
      if (v < 0.0) throw DomainError("t must be nonnegative");
      d.result["scale_N"] = y.scale();
      d.result["ramp_slope"] = y.ramp_slope();
      d.result["jump_top"] = y.jump_top();
      d.result["B"] = num(y.value(v));
      d.result["b"] = num(y.deriv(v));
      d.result["b_inv"] = num(y.deriv_inv(v));
      d.result["B_inv"] = num(y.inv(v));
      d.result["conjugate"] = num(y.conj_closed(v));
      d.result["env_exp"] = num(env_exp(ya->beta, v));
    };
  }

  // lambda
  {
    auto& c = add("lambda", "Solve the scale lambda_t of the dual-norm formula");
    auto ya = std::make_shared<YoungArgs>();
    auto ea = std::make_shared<EngineArgs>();
    ya->add(c.app);
    ea->add(c.app);
    auto* t = c.app->add_option("--t", "Level t > 0")->required()->type_name("REAL");
    c.body = [=](Document& d) {
      const auto y = ya->build();
      const double v = t->as<double>();
      ya->echo(d.params);
      ea->echo(d.params);
      d.params["t"] = v;
      const auto sol = solve_lambda(y, v, ea->opts);
      const auto fine = solve_lambda(y, v, ea->opts.doubled());
      const auto br = conjugate_bracket(y, sol, ea->opts);
      d.result["log_lambda"] = sol.log_lambda;
      d.result["lambda"] = sol.lambda();
      d.result["sigma"] = num(sol.sigma);
      d.result["residual"] = sol.residual;
      d.result["evaluations"] = sol.evaluations;
      d.result["young_equality_gap"] = br.lhs - br.rhs;
      d.error_estimate = std::abs(fine.log_lambda - sol.log_lambda);
    };
  }

  // norm
  {
    auto& c = add("norm", "Orlicz norm of 1/I on (Phi(t), 1/2) in L^{conjugate of B}");
    auto ya = std::make_shared<YoungArgs>();
    auto ea = std::make_shared<EngineArgs>();
    ya->add(c.app);
    ea->add(c.app);
    auto* t = c.app->add_option("--t", "Level t > 0")->required()->type_name("REAL");
    auto method = std::make_shared<std::string>("formula");
    c.app->add_option("--method", *method, "formula, amemiya or luxemburg")
        ->check(CLI::IsMember({"formula", "amemiya", "luxemburg"}))
        ->capture_default_str();
    auto s_panels = std::make_shared<int>(400);
    c.app->add_option("--s-panels", *s_panels, "Panels in s for amemiya/luxemburg")->capture_default_str();
    c.body = [=](Document& d) {
      const auto y = ya->build();
      const double v = t->as<double>();
      ya->echo(d.params);
      d.params["t"] = v;
      d.params["method"] = *method;
      if (*method == "formula") {
        ea->echo(d.params);
        const auto nv = inv_iso_orlicz_norm(y, v, ea->opts);
        d.result["value"] = nv.value;
        d.result["log_lambda"] = nv.lambda.log_lambda;
        d.error_estimate = nv.error;
        return;
      }
      d.params["s_panels"] = *s_panels;
      const ConjugateYoung conj(y);
      const auto coarse = inv_iso_samples(v, *s_panels);
      const auto fine = inv_iso_samples(v, 2 * *s_panels);
      const auto norm_of = [&](const InvIsoSamples& smp) {
        return *method == "amemiya" ? orlicz_norm_amemiya(conj, smp.values, smp.weights)
                                    : luxemburg_norm(conj, smp.values, smp.weights);
      };
      const auto r = norm_of(coarse);
      d.result["value"] = r.norm;
      d.result["evaluations"] = r.evaluations;
      d.result["modular_at_unit_scale"] = num(modular(conj, coarse.values, coarse.weights).value);
      d.error_estimate = std::abs(norm_of(fine).norm - r.norm);
      if (!r.bracketed) d.warnings.push_back("norm search hit its bracket limit");
    };
  }

  // fb
  {
    auto& c = add("fb", "F_B(t) = 1/2 sqrt(2 pi) B^{-1}(1) + norm of 1/I, with its expansion defect");
    auto ya = std::make_shared<YoungArgs>();
    auto ea = std::make_shared<EngineArgs>();
    ya->add(c.app);
    ea->add(c.app);
    auto* t = c.app->add_option("--t", "Level t > 0")->required()->type_name("REAL");
    c.body = [=](Document& d) {
      const auto y = ya->build();
      const double v = t->as<double>();
      ya->echo(d.params);
      ea->echo(d.params);
      d.params["t"] = v;
      const auto f = f_cal(y, v, ea->opts);
      const auto ff = f_cal(y, v, ea->opts.doubled());
      const double lead = leading_coefficient(ya->beta) * std::pow(v, 2.0 / ya->beta + 1.0);
      const double defect = power_exponent_defect(ya->beta, v, f.excess);
      d.result["value"] = f.value;
      d.result["norm"] = f.norm;
      d.result["constant_term"] = f.constant_term;
      d.result["leading_ratio"] = f.value / lead;
      d.result["excess_over_leading"] = f.excess;
      // [kappa F]^q - t^2/2
      d.result["power_defect"] = defect;
      if (ya->beta < 2.0) d.result["power_defect_plus_log"] = defect + 2.0 / (2.0 - ya->beta) * std::log(v);
      d.result["log_lambda"] = f.lambda.log_lambda;
      d.error_estimate = std::abs(ff.value - f.value);
    };
  }

  // bound
  {
    auto& c = add("bound", "Hoelder-type upper bound for the weighted exponential integral");
    auto beta = std::make_shared<double>(1.0);
    auto M = std::make_shared<double>(2.0);
    auto phi = std::make_shared<std::string>("const:1");
    auto opts = std::make_shared<BoundOptions>();
    c.app->add_option("--beta", *beta, "Exponent beta in (0, 2]")->capture_default_str();
    c.app->add_option("--M", *M, "Constraint level M > 1")->capture_default_str();
    c.app->add_option("--phi", *phi, "Weight: const:c, pow:a or powlog:a,b")->capture_default_str();
    c.app->add_option("--t0", opts->knee, "Knee of B; default per beta");
    c.app->add_option("--order", opts->order, "Gauss-Legendre order per panel")->capture_default_str();
    c.app->add_option("--unit-panels", opts->unit_panels, "Panels on [0, 1]")->capture_default_str();
    c.app->add_option("--panel-ratio", opts->panel_ratio, "Geometric panel ratio beyond 1")->capture_default_str();
    c.app->add_option("--threads", opts->threads, "Worker threads; 0 = hardware")->capture_default_str();
    c.body = [=](Document& d) {
      const MoserProblem p(*beta, *M, WeightSpec::parse(*phi));
      d.params["beta"] = *beta;
      d.params["M"] = *M;
      d.params["phi"] = p.weight.to_string();
      d.params["t0"] = std::isnan(opts->knee) ? YoungExp::default_knee(*beta) : opts->knee;
      d.params["order"] = opts->order;
      d.params["unit_panels"] = opts->unit_panels;
      d.params["panel_ratio"] = opts->panel_ratio;
      const auto r = holder_bound(p, *opts);
      d.result["value"] = num(r.value);
      d.result["log_value"] = r.log_value;
      d.result["truncation"] = r.truncation;
      d.result["tail"] = r.tail;
      d.result["tail_slope"] = r.tail_slope;
      d.result["panels"] = r.panels;
      d.result["scale_N"] = r.scale;
      d.error_estimate = r.error;
      if (r.tail > 0.0) d.warnings.push_back("analytic power tail added beyond the truncation point");
    };
  }

  // condition
  {
    auto& c = add("condition", "Integral conditions on the weight: improvable or sharp-divergent");
    auto beta = std::make_shared<double>(1.0);
    auto phi = std::make_shared<std::string>("const:1");
    auto* eps = c.app->add_option("--eps", "Epsilon for the sharpness test")->type_name("REAL");
    c.app->add_option("--beta", *beta, "Exponent beta in (0, 2]")->capture_default_str();
    c.app->add_option("--phi", *phi, "Weight: const:c, pow:a or powlog:a,b")->capture_default_str();
    c.body = [=](Document& d) {
      const auto w = WeightSpec::parse(*phi);
      d.params["beta"] = *beta;
      d.params["phi"] = w.to_string();
      const double e = eps->count() ? eps->as<double>() : kNaN;
      d.params["eps"] = num(e);
      const auto r = improvement_condition(*beta, w, e);
      d.result["verdict"] = to_string(r.verdict);
      d.result["epsilon"] = num(r.epsilon);
      d.result["power"] = num(r.power);
      d.result["detail"] = r.detail;
    };
  }

  // sharpness
  {
    auto& c = add("sharpness", "Sharpness profile: feasibility and decade increments of the partial integral");
    auto beta = std::make_shared<double>(1.0);
    auto M = std::make_shared<double>(2.0);
    auto phi = std::make_shared<std::string>("const:1");
    auto decades = std::make_shared<int>(4);
    c.app->add_option("--beta", *beta, "Exponent beta in (0, 2]")->capture_default_str();
    c.app->add_option("--M", *M, "Constraint level M > 1")->capture_default_str();
    c.app->add_option("--phi", *phi, "Weight: const:c, pow:a or powlog:a,b")->capture_default_str();
    c.app->add_option("--decades", *decades, "Last decade exponent k of T = 10^k")->capture_default_str();
    c.body = [=](Document& d) {
      const MoserProblem p(*beta, *M, WeightSpec::parse(*phi));
      if (*decades < 1 || *decades > 12) throw DomainError("decades must lie in [1, 12]");
      d.params["beta"] = *beta;
      d.params["M"] = *M;
      d.params["phi"] = p.weight.to_string();
      d.params["decades"] = *decades;
      const auto prof = sharpness_profile(p);
      const auto feas = sharpness_feasibility(p, prof);
      d.result["tau0"] = prof.tau0();
      d.result["achieved_modular"] = prof.achieved_modular();
      d.result["constraint_modular"] = feas.constraint;
      d.result["median"] = feas.median;
      d.result["mean"] = feas.mean;
      std::vector<double> T{10.0}, partial{sharpness_partial_integral(p, prof, 10.0)}, inc;
      for (int k = 1; k < *decades; ++k) {
        const double a = std::pow(10.0, k), b = std::pow(10.0, k + 1);
        inc.push_back(sharpness_increment(p, prof, a, b));
        T.push_back(b);
        partial.push_back(partial.back() + inc.back());
      }
      d.result["T"] = num_array(T);
      d.result["partial_integral"] = num_array(partial);
      d.result["increments"] = num_array(inc);
      const double tau1 = divergence_start(p, prof);
      d.result["divergence_start"] = num(tau1);
      if (std::isfinite(tau1) && T.back() > tau1)
        d.result["comparison_lower_bound"] = num(comparison_lower_bound(p, tau1, T.back()));
    };
  }

  // maximize
  {
    auto& c = add("maximize", "Maximize the weighted exponential integral over monotone 1D profiles");
    c.csv_capable = true;
    auto cfg = std::make_shared<MaximizerConfig>();
    auto beta = std::make_shared<double>(2.0);
    auto M = std::make_shared<double>(1.5);
    auto phi = std::make_shared<std::string>("const:1");
    auto norm = std::make_shared<std::string>("median");
    auto check = std::make_shared<bool>(false);
    c.app->add_option("--beta", *beta, "Exponent beta in (0, 2]")->capture_default_str();
    c.app->add_option("--M", *M, "Constraint level M > 1")->capture_default_str();
    c.app->add_option("--phi", *phi, "Weight: const:c, pow:a or powlog:a,b")->capture_default_str();
    c.app->add_option("--normalization", *norm, "median or mean")->capture_default_str();
    c.app->add_option("--T", cfg->half_width, "Grid half-width")->capture_default_str();
    c.app->add_option("--nodes", cfg->nodes, "Odd node count >= 65")->capture_default_str();
    c.app->add_option("--max-iter", cfg->max_iterations, "Iterations per restart")->capture_default_str();
    c.app->add_option("--restarts", cfg->restarts, "Restart count")->capture_default_str();
    c.app->add_option("--seed", cfg->seed, "Seed of the restart perturbations")->capture_default_str();
    c.app->add_option("--threads", cfg->threads, "Worker threads; 0 = hardware")->capture_default_str();
    c.app->add_flag("--gradient-check", *check, "Report the finite-difference gradient check");
    c.body = [=](Document& d) {
      MaximizerConfig conf = *cfg;
      conf.problem = make_problem(*beta, *M, *phi, *norm);
      d.params["beta"] = *beta;
      d.params["M"] = *M;
      d.params["phi"] = conf.problem.weight.to_string();
      d.params["normalization"] = to_string(conf.problem.normalization);
      d.params["T"] = conf.half_width;
      d.params["nodes"] = conf.nodes;
      d.params["max_iter"] = conf.max_iterations;
      d.params["restarts"] = conf.restarts;
      d.params["seed"] = conf.seed;
      const auto r = maximize(conf);
      d.result["J"] = r.J;
      d.result["objective_check"] = objective(conf.problem, r.profile).value;
      d.result["constraint"] = r.constraint;
      d.result["constraint_modular"] = constraint_modular(conf.problem, r.profile);
      d.result["normalization_residual"] = r.normalization_residual;
      d.result["iterations"] = r.iterations;
      d.result["converged"] = r.converged;
      d.result["restart_dispersion"] = r.restart_dispersion;
      d.result["restart_objectives"] = num_array(r.restart_objectives);
      d.result["best_sharpness_trial"] = r.best_trial;
      d.result["tail_bound"] = r.tail_bound;
      d.error_estimate = r.tail_bound;
      if (*check) {
        std::vector<double> w;
        for (double g : r.g) w.push_back(std::log(g));
        d.result["gradient_check_max_relative_error"] = gradient_check(conf, w).max_relative_error;
      }
      if (!r.converged) d.warnings.push_back("no restart met the convergence criterion");
      d.csv_header = {"t", "u", "g"};
      for (std::size_t i = 0; i < r.profile.nodes.size(); ++i) {
        const double g = i < r.g.size() ? r.g[i] : r.g.back();
        d.csv_rows.push_back({r.profile.nodes[i], r.profile.values[i], g});
      }
    };
  }

  // asympt
  {
    auto& c = add("asympt", "Evaluate Psi/Upsilon or validate a built-in expansion on a t grid");
    c.csv_capable = true;
    auto pa = std::make_shared<AsymptoticParams>();
    auto name = std::make_shared<std::string>("lambda");
    auto grid = std::make_shared<std::string>("8,12,16,20,24,28");
    auto* power = c.app->add_option("--power", "Validate F^sigma through the power rule")->type_name("REAL");
    auto* eval_t = c.app->add_option("--eval-t", "Evaluate psi or upsilon at this t only")->type_name("REAL");
    c.app->add_option("--name", *name, "binv, lambda, inorm, fb_power, psi or upsilon")
        ->check(CLI::IsMember(builtin_names()))
        ->capture_default_str();
    c.app->add_option("--beta", pa->beta, "Exponent beta in (0, 2]")->capture_default_str();
    c.app->add_option("--M", pa->M, "Constraint level M > 1")->capture_default_str();
    c.app->add_option("--N", pa->N, "Scale N; overrides the M recipe");
    c.app->add_option("--t0", pa->knee, "Knee of B; default per beta");
    c.app->add_option("--sigma", pa->sigma, "Exponent sigma of Psi/Upsilon")->capture_default_str();
    c.app->add_option("--d", pa->d, "Lower limit d of Psi/Upsilon")->capture_default_str();
    c.app->add_option("--grid", *grid, "Comma-separated t values")->capture_default_str();
    c.body = [=](Document& d) {
      d.params["name"] = *name;
      if (eval_t->count()) {
        if (*name != "psi" && *name != "upsilon") throw DomainError("--eval-t applies to psi and upsilon");
        const double t = eval_t->as<double>();
        d.params["sigma"] = pa->sigma;
        d.params["d"] = pa->d;
        d.params["t"] = t;
        d.result["value"] = *name == "psi" ? psi(pa->sigma, pa->d, t) : upsilon(pa->sigma, pa->d, t);
        return;
      }
      if (*name == "psi" || *name == "upsilon") {
        d.params["sigma"] = pa->sigma;
        d.params["d"] = pa->d;
      } else {
        d.params["beta"] = pa->beta;
        if (std::isfinite(pa->N)) d.params["N"] = pa->N; else d.params["M"] = pa->M;
        d.params["t0"] = std::isnan(pa->knee) ? YoungExp::default_knee(pa->beta) : pa->knee;
      }
      const auto t = parse_list(*grid);
      d.params["grid"] = num_array(t);
      auto bc = builtin_case(*name, *pa);
      if (power->count()) {
        const double sg = power->as<double>();
        d.params["power"] = sg;
        bc.spec = power_rule(bc.spec, sg);
        bc.fn = [f = bc.fn, sg](double x) { return std::pow(f(x), sg); };
      }
      const auto rep = validate_expansion(bc.fn, bc.spec, t);
      d.result["values"] = num_array(rep.values);
      json orders = json::array();
      d.csv_header = {"t"};
      for (std::size_t j = 0; j < rep.orders.size(); ++j) {
        const auto& o = rep.orders[j];
        json oj;
        oj["term"] = o.label;
        oj["ratio"] = num_array(o.ratio);
        oj["band"] = o.assessed ? json(o.band) : json(nullptr);
        oj["verdict"] = to_string(o.verdict);
        if (o.constant) {
          oj["constant"] = num(*o.constant);
          oj["constant_trace"] = num_array(o.constant_trace);
        }
        orders.push_back(oj);
        d.csv_header.push_back("remainder_ratio_order_" + std::to_string(j));
      }
      d.result["orders"] = orders;
      for (std::size_t i = 0; i < t.size(); ++i) {
        std::vector<double> row{t[i]};
        for (const auto& o : rep.orders) row.push_back(o.ratio[i]);
        d.csv_rows.push_back(row);
      }
    };
  }

  // rearrange
  {
    auto& c = add("rearrange", "Signed decreasing rearrangement and Ehrhard symmetral of a field");
    c.csv_capable = true;
    auto input = std::make_shared<std::string>();
    auto seed = std::make_shared<std::uint64_t>(1);
    auto n = std::make_shared<int>(129);
    auto dim = std::make_shared<int>(2);
    auto bumps = std::make_shared<int>(4);
    auto s_nodes = std::make_shared<int>(257);
    c.app->add_option("--input", *input, "CSV field (coordinates..., value); default: random bumps");
    c.app->add_option("--seed", *seed, "Seed of the random field")->capture_default_str();
    c.app->add_option("--n", *n, "Nodes per axis of the random field")->capture_default_str();
    c.app->add_option("--dim", *dim, "Dimension of the random field")->capture_default_str();
    c.app->add_option("--bumps", *bumps, "Bumps in the random field")->capture_default_str();
    c.app->add_option("--s-nodes", *s_nodes, "Nodes of the s grid")->capture_default_str();
    c.body = [=](Document& d) {
      const auto field = load_field(*input, *seed, *n, *dim, *bumps);
      echo_field(d.params, *input, *seed, *n, *dim, *bumps);
      d.params["s_nodes"] = *s_nodes;
      if (*s_nodes < 3) throw DomainError("s-nodes must be at least 3");
      std::vector<double> s(*s_nodes);
      for (int i = 0; i < *s_nodes; ++i) s[i] = (i + 0.5) / *s_nodes;
      const auto ustar = signed_decreasing_rearrangement(field, s);
      const auto sym = ehrhard_symmetral(ustar);
      d.result["median"] = median(field);
      d.result["mean"] = mean_value(field);
      d.result["symmetral_at_zero"] = sym.at(0.0);
      d.csv_header = {"s", "t", "u"};
      for (std::size_t i = 0; i < ustar.nodes.size(); ++i)
        d.csv_rows.push_back({ustar.nodes[i], gauss_tail_inv(ustar.nodes[i]), ustar.values[i]});
      d.result["s"] = num_array(ustar.nodes);
      d.result["u"] = num_array(ustar.values);
    };
  }

  // polya-szego
  {
    auto& c = add("polya-szego", "Compare the Dirichlet modular of a field and of its symmetral");
    auto input = std::make_shared<std::string>();
    auto seed = std::make_shared<std::uint64_t>(1);
    auto n = std::make_shared<int>(129);
    auto dim = std::make_shared<int>(2);
    auto bumps = std::make_shared<int>(4);
    auto beta = std::make_shared<double>(1.0);
    auto tol = std::make_shared<double>(1e-6);
    c.app->add_option("--input", *input, "CSV field (coordinates..., value); default: random bumps");
    c.app->add_option("--seed", *seed, "Seed of the random field")->capture_default_str();
    c.app->add_option("--n", *n, "Nodes per axis of the random field")->capture_default_str();
    c.app->add_option("--dim", *dim, "Dimension of the random field")->capture_default_str();
    c.app->add_option("--bumps", *bumps, "Bumps in the random field")->capture_default_str();
    c.app->add_option("--beta", *beta, "Young function Exp^beta")->capture_default_str();
    c.app->add_option("--tol", *tol, "Allowed excess of the symmetral")->capture_default_str();
    c.body = [=](Document& d) {
      const auto field = load_field(*input, *seed, *n, *dim, *bumps);
      echo_field(d.params, *input, *seed, *n, *dim, *bumps);
      d.params["beta"] = *beta;
      d.params["tol"] = *tol;
      const ExpEnvelope env(*beta);
      const auto r = polya_szego_check(env, field, *tol);
      d.result["symmetral_modular"] = r.lhs;
      d.result["field_modular"] = r.rhs;
      d.result["margin"] = r.margin;
      d.result["s_domain_symmetral_modular"] = r.s_domain_lhs;
      d.result["pass"] = r.pass;
    };
  }

  std::vector<std::string> args;
  try {
    args = expand_config(argc, argv);
  } catch (const DomainError& e) {
    err << "argument error: " << e.what() << '\n';
    return kArgumentError;
  }
  try {
    // CLI11 parses a reversed vector.
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kArgumentError;
  }

  const Command* selected = nullptr;
  for (const auto& c : commands)
    if (c.app->parsed()) selected = &c;
  if (format == "csv" && !selected->csv_capable) {
    err << "error: --format csv applies to asympt, maximize and rearrange only\n";
    return kArgumentError;
  }

  Document doc;
  const auto start = std::chrono::steady_clock::now();
  try {
    selected->body(doc);
  } catch (const DivergenceError& e) {
    err << "divergence: " << e.what() << '\n';
    return kDivergence;
  } catch (const ConvergenceError& e) {
    err << "non-convergence: " << e.what() << '\n';
    return kNonConvergence;
  } catch (const EvaluationError& e) {
    err << "evaluation failure: " << e.what() << '\n';
    return kNonConvergence;
  } catch (const DomainError& e) {
    err << "argument error: " << e.what() << '\n';
    return kArgumentError;
  } catch (const std::invalid_argument& e) {
    err << "argument error: " << e.what() << '\n';
    return kArgumentError;
  } catch (const CLI::Error& e) {
    err << "argument error: " << e.what() << '\n';
    return kArgumentError;
  }
  const double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  std::ofstream file;
  if (!output.empty()) {
    file.open(output);
    if (!file) {
      err << "error: cannot open '" << output << "' for writing\n";
      return kArgumentError;
    }
  }
  std::ostream& sink = output.empty() ? out : file;
  if (format == "csv") {
    for (std::size_t j = 0; j < doc.csv_header.size(); ++j) sink << (j ? "," : "") << doc.csv_header[j];
    sink << '\n' << std::setprecision(17);
    for (const auto& row : doc.csv_rows) {
      for (std::size_t j = 0; j < row.size(); ++j) sink << (j ? "," : "") << row[j];
      sink << '\n';
    }
    return kOk;
  }
  json j;
  j["cmd"] = selected->app->get_name();
  j["params"] = doc.params;
  j["result"] = doc.result;
  j["error_estimate"] = doc.error_estimate;
  j["warnings"] = doc.warnings;
  j["elapsed_ms"] = no_timing ? json(nullptr) : json(ms);
  sink << j.dump(2) << '\n';
  return kOk;
}

}  // namespace gaussmoser::cli
