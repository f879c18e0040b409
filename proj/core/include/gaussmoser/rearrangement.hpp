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
#include <cstdint>
#include <functional>
#include <istream>
#include <span>
#include <vector>

#include "gaussmoser/gauss_kernel.hpp"
#include "gaussmoser/young_orlicz.hpp"

namespace gaussmoser {

inline constexpr int kMaxFieldDim = 3;
inline constexpr int kMaxAxisNodes = 257;

// Gaussian mass of the Voronoi cell of each node; the end cells reach to
// +-infinity, so the masses sum to 1.
std::vector<double> gaussian_cell_masses(std::span<const double> axis);

// For each node, the midpoint of the upper-tail mass interval
// [Phi(upper edge), Phi(lower edge)] of its cell. Decreasing along the axis.
std::vector<double> cell_mass_midpoints(std::span<const double> axis);

// Values on a tensor grid, last axis fastest, with product Gaussian weights.
class SampledField {
 public:
  SampledField(std::vector<std::vector<double>> axes, std::vector<double> values);

  static SampledField from_function(
      std::vector<std::vector<double>> axes,
      const std::function<double(std::span<const double>)>& f);
  // Columns: x_1, ..., x_n, value. Rows may come in any order but must
  // cover the full tensor grid.
  static SampledField read_csv(std::istream& in);

  int dim() const { return static_cast<int>(axes_.size()); }
  const std::vector<std::vector<double>>& axes() const { return axes_; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t size() const { return values_.size(); }
  std::size_t stride(int axis) const { return strides_[axis]; }
  // Index along `axis` of flat index `i`.
  std::size_t coordinate_index(std::size_t i, int axis) const {
    return (i / strides_[axis]) % axes_[axis].size();
  }

 private:
  std::vector<std::vector<double>> axes_;
  std::vector<double> values_;
  std::vector<double> weights_;
  std::vector<std::size_t> strides_;
};

enum class ProfileDomain { s_domain, t_domain };

// A monotone one-variable profile: u° on (0,1) (nonincreasing in s) or a
// function of the first coordinate on the line (nondecreasing in t).
struct Profile1D {
  ProfileDomain domain = ProfileDomain::t_domain;
  std::vector<double> nodes;
  std::vector<double> values;

  // Linear interpolation, constant beyond the end nodes.
  double at(double x) const;
  // Throws DomainError on non-increasing nodes or broken monotonicity
  // beyond `slack`.
  void validate(double slack = 0.0) const;
};

// Weighted quantile u°(s): descending values, ties merged, each value
// placed at the midpoint of the mass interval it occupies, linear in s
// between those points.
Profile1D signed_decreasing_rearrangement(const SampledField& field,
                                          std::span<const double> s_grid);

// u°(Phi(t)) on the nodes t = Phi^{-1}(s) of the profile.
Profile1D ehrhard_symmetral(const Profile1D& p);

// The symmetral sampled on the field's own grid: the value at a node with
// first-axis index i is u° at the i-th cell mass midpoint.
SampledField symmetrize(const SampledField& field);

double median(const SampledField& field);
double mean_value(const SampledField& field);

// Gaussian mass of {u > level} on the grid.
double superlevel_mass(const SampledField& field, double level);

// |grad u| at every node: central differences, one-sided at the ends.
std::vector<double> gradient_norm(const SampledField& field);

// Sum of `bumps` Gaussian bumps with seeded random centres in [-2, 2]^dim,
// widths in [0.4, 1.5] and amplitudes in [-2, 2], on an n^dim grid over
// [-half_width, half_width]^dim.
SampledField random_bump_field(std::uint64_t seed, int n = 129, int dim = 2, int bumps = 4,
                               double half_width = 4.0);

inline constexpr double kNegligibleWeight = 1e-12;

template <YoungLike Y>
double dirichlet_modular(const Y& young, const SampledField& field) {
  const auto g = gradient_norm(field);
  double total = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double w = field.weights()[i];
    if (w < kNegligibleWeight) continue;
    total += w * young.value(g[i]);
  }
  return total;
}

// int_0^1 A(-u°'(s) I(s)) ds with u°' by finite differences on the
// profile's nodes; the end pieces (0, s_0) and (s_last, 1) use the
// one-sided slopes.
template <YoungLike Y>
double rearranged_dirichlet_modular(const Y& young, const Profile1D& p);

struct PolyaSzegoReport {
  double lhs = 0.0;  // modular of the symmetral
  double rhs = 0.0;  // modular of the field
  double margin = 0.0;  // rhs - lhs
  double s_domain_lhs = 0.0;
  bool pass = false;
};

template <YoungLike Y>
PolyaSzegoReport polya_szego_check(const Y& young, const SampledField& field,
                                   double tol = 1e-6);

// ---------------------------------------------------------------------------

namespace detail {
// Derivative magnitudes -u°'(s) at the profile nodes and the node masses
// (Voronoi cells in s, end cells reaching 0 and 1).
void s_domain_slopes(const Profile1D& p, std::vector<double>& slope,
                     std::vector<double>& mass);
}  // namespace detail

template <YoungLike Y>
double rearranged_dirichlet_modular(const Y& young, const Profile1D& p) {
  if (p.domain != ProfileDomain::s_domain)
    throw DomainError("rearranged_dirichlet_modular: expects an s-domain profile");
  std::vector<double> slope, mass;
  detail::s_domain_slopes(p, slope, mass);
  double total = 0.0;
  for (std::size_t i = 0; i < slope.size(); ++i)
    total += mass[i] * young.value(slope[i] * iso_profile(p.nodes[i]));
  return total;
}

template <YoungLike Y>
PolyaSzegoReport polya_szego_check(const Y& young, const SampledField& field,
                                   double tol) {
  PolyaSzegoReport r;
  r.rhs = dirichlet_modular(young, field);
  r.lhs = dirichlet_modular(young, symmetrize(field));
  r.margin = r.rhs - r.lhs;
  const auto mids = cell_mass_midpoints(field.axes()[0]);
  r.s_domain_lhs = rearranged_dirichlet_modular(
      young, signed_decreasing_rearrangement(field, mids));
  r.pass = r.margin >= -tol;
  return r;
}

}  // namespace gaussmoser
