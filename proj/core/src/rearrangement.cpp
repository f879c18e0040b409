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

#include "gaussmoser/rearrangement.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

namespace gaussmoser {
namespace {

void check_axis(std::span<const double> axis) {
  if (axis.size() < 2) throw DomainError("field axis needs at least two nodes");
  if (axis.size() > static_cast<std::size_t>(kMaxAxisNodes))
    throw DomainError("field axis exceeds " + std::to_string(kMaxAxisNodes) + " nodes");
  for (std::size_t i = 0; i + 1 < axis.size(); ++i)
    if (!(axis[i + 1] > axis[i])) throw DomainError("field axis must be strictly increasing");
}

// Upper-tail mass at the Voronoi edges, edge[0] = 1 (at -inf) down to
// edge[n] = 0 (at +inf).
std::vector<double> edge_tails(std::span<const double> axis) {
  std::vector<double> e(axis.size() + 1);
  e.front() = 1.0;
  e.back() = 0.0;
  for (std::size_t i = 1; i < axis.size(); ++i) e[i] = gauss_tail(0.5 * (axis[i - 1] + axis[i]));
  return e;
}

}  // namespace

std::vector<double> gaussian_cell_masses(std::span<const double> axis) {
  check_axis(axis);
  const auto e = edge_tails(axis);
  std::vector<double> m(axis.size());
  for (std::size_t i = 0; i < axis.size(); ++i) {
    // Difference of the smaller tails on each side keeps precision.
    const double lo = 0.5 * (i == 0 ? -INFINITY : axis[i - 1] + axis[i]);
    const double hi = 0.5 * (i + 1 == axis.size() ? INFINITY : axis[i] + axis[i + 1]);
    if (lo >= 0.0)
      m[i] = e[i] - e[i + 1];
    else if (hi <= 0.0)
      m[i] = (i + 1 == axis.size() ? 1.0 : gauss_tail(-hi)) - (i == 0 ? 0.0 : gauss_tail(-lo));
    else
      m[i] = 1.0 - (i == 0 ? 0.0 : gauss_tail(-lo)) - e[i + 1];
  }
  return m;
}

std::vector<double> cell_mass_midpoints(std::span<const double> axis) {
  check_axis(axis);
  const auto e = edge_tails(axis);
  std::vector<double> mid(axis.size());
  for (std::size_t i = 0; i < axis.size(); ++i) mid[i] = 0.5 * (e[i] + e[i + 1]);
  return mid;
}

SampledField::SampledField(std::vector<std::vector<double>> axes, std::vector<double> values)
    : axes_(std::move(axes)), values_(std::move(values)) {
  if (axes_.empty() || axes_.size() > static_cast<std::size_t>(kMaxFieldDim))
    throw DomainError("field dimension must be 1, 2 or 3");
  std::size_t n = 1;
  strides_.assign(axes_.size(), 1);
  for (int k = dim() - 1; k >= 0; --k) {
    check_axis(axes_[k]);
    strides_[k] = n;
    n *= axes_[k].size();
  }
  if (values_.size() != n) throw DomainError("field values do not match the tensor grid");
  for (double v : values_)
    if (!std::isfinite(v)) throw DomainError("field values must be finite");
  std::vector<std::vector<double>> masses;
  for (const auto& a : axes_) masses.push_back(gaussian_cell_masses(a));
  weights_.assign(n, 1.0);
  for (std::size_t i = 0; i < n; ++i)
    for (int k = 0; k < dim(); ++k) weights_[i] *= masses[k][coordinate_index(i, k)];
}

SampledField SampledField::from_function(
    std::vector<std::vector<double>> axes,
    const std::function<double(std::span<const double>)>& f) {
  std::size_t n = 1;
  for (const auto& a : axes) n *= a.size();
  std::vector<double> values(n);
  std::vector<double> x(axes.size());
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t rem = i;
    for (int k = static_cast<int>(axes.size()) - 1; k >= 0; --k) {
      x[k] = axes[k][rem % axes[k].size()];
      rem /= axes[k].size();
    }
    values[i] = f(x);
  }
  return SampledField(std::move(axes), std::move(values));
}

SampledField SampledField::read_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (rows.empty()) continue;  // header
      throw DomainError("field csv: non-numeric row '" + line + "'");
    }
    if (width == 0) width = row.size();
    if (row.size() != width || width < 2) throw DomainError("field csv: ragged row '" + line + "'");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DomainError("field csv: no data rows");
  const std::size_t n = width - 1;
  std::vector<std::vector<double>> axes(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (const auto& r : rows) axes[k].push_back(r[k]);
    std::sort(axes[k].begin(), axes[k].end());
    axes[k].erase(std::unique(axes[k].begin(), axes[k].end()), axes[k].end());
  }
  std::size_t total = 1;
  for (const auto& a : axes) total *= a.size();
  if (total != rows.size()) throw DomainError("field csv: rows do not form a full tensor grid");
  std::vector<double> values(total, NAN);
  for (const auto& r : rows) {
    std::size_t idx = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const auto pos = std::lower_bound(axes[k].begin(), axes[k].end(), r[k]) - axes[k].begin();
      idx = idx * axes[k].size() + static_cast<std::size_t>(pos);
    }
    values[idx] = r[n];
  }
  for (double v : values)
    if (std::isnan(v)) throw DomainError("field csv: duplicate grid point");
  return SampledField(std::move(axes), std::move(values));
}

double Profile1D::at(double x) const {
  if (nodes.empty()) throw DomainError("empty profile");
  if (x <= nodes.front()) return values.front();
  if (x >= nodes.back()) return values.back();
  const auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
  const std::size_t j = static_cast<std::size_t>(it - nodes.begin());
  const double w = (x - nodes[j - 1]) / (nodes[j] - nodes[j - 1]);
  return values[j - 1] + w * (values[j] - values[j - 1]);
}

void Profile1D::validate(double slack) const {
  if (nodes.size() != values.size() || nodes.empty())
    throw DomainError("profile nodes and values differ in length");
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    if (!(nodes[i + 1] > nodes[i])) throw DomainError("profile nodes must increase strictly");
    const double step = values[i + 1] - values[i];
    if (domain == ProfileDomain::s_domain ? step > slack : step < -slack)
      throw DomainError("profile is not monotone");
  }
}

Profile1D signed_decreasing_rearrangement(const SampledField& field,
                                          std::span<const double> s_grid) {
  if (s_grid.empty()) throw DomainError("rearrangement: empty s grid");
  // Distinct values in decreasing order with their total mass.
  std::map<double, double, std::greater<>> mass_of;
  for (std::size_t i = 0; i < field.size(); ++i) mass_of[field.values()[i]] += field.weights()[i];
  std::vector<double> knot_s, knot_v;
  double above = 0.0;
  for (const auto& [v, m] : mass_of) {
    knot_s.push_back(above + 0.5 * m);
    knot_v.push_back(v);
    above += m;
  }
  Profile1D p;
  p.domain = ProfileDomain::s_domain;
  p.nodes.assign(s_grid.begin(), s_grid.end());
  std::sort(p.nodes.begin(), p.nodes.end());
  p.values.resize(p.nodes.size());
  for (std::size_t i = 0; i < p.nodes.size(); ++i) {
    const double s = p.nodes[i];
    if (!(s > 0.0 && s < 1.0)) throw DomainError("rearrangement: s outside (0,1)");
    if (s <= knot_s.front()) {
      p.values[i] = knot_v.front();
    } else if (s >= knot_s.back()) {
      p.values[i] = knot_v.back();
    } else {
      const auto it = std::upper_bound(knot_s.begin(), knot_s.end(), s);
      const std::size_t j = static_cast<std::size_t>(it - knot_s.begin());
      const double w = (s - knot_s[j - 1]) / (knot_s[j] - knot_s[j - 1]);
      p.values[i] = knot_v[j - 1] + w * (knot_v[j] - knot_v[j - 1]);
    }
  }
  return p;
}

Profile1D ehrhard_symmetral(const Profile1D& p) {
  if (p.domain != ProfileDomain::s_domain)
    throw DomainError("ehrhard_symmetral: expects an s-domain profile");
  Profile1D out;
  out.domain = ProfileDomain::t_domain;
  for (std::size_t i = p.nodes.size(); i-- > 0;) {
    out.nodes.push_back(gauss_tail_inv(p.nodes[i]));
    out.values.push_back(p.values[i]);
  }
  return out;
}

SampledField symmetrize(const SampledField& field) {
  const auto mids = cell_mass_midpoints(field.axes()[0]);
  const Profile1D p = signed_decreasing_rearrangement(field, mids);
  std::vector<double> values(field.size());
  for (std::size_t i = 0; i < field.size(); ++i)
    values[i] = p.at(mids[field.coordinate_index(i, 0)]);
  return SampledField(field.axes(), std::move(values));
}

double median(const SampledField& field) {
  const double half = 0.5;
  return signed_decreasing_rearrangement(field, std::span<const double>(&half, 1)).values[0];
}

double mean_value(const SampledField& field) {
  double s = 0.0;
  for (std::size_t i = 0; i < field.size(); ++i) s += field.weights()[i] * field.values()[i];
  return s;
}

double superlevel_mass(const SampledField& field, double level) {
  double s = 0.0;
  for (std::size_t i = 0; i < field.size(); ++i)
    if (field.values()[i] > level) s += field.weights()[i];
  return s;
}

std::vector<double> gradient_norm(const SampledField& field) {
  std::vector<double> sq(field.size(), 0.0);
  const auto& v = field.values();
  for (int k = 0; k < field.dim(); ++k) {
    const auto& a = field.axes()[k];
    const std::size_t st = field.stride(k);
    const std::size_t n = a.size();
    for (std::size_t i = 0; i < field.size(); ++i) {
      const std::size_t j = field.coordinate_index(i, k);
      double d;
      if (j == 0)
        d = (v[i + st] - v[i]) / (a[1] - a[0]);
      else if (j + 1 == n)
        d = (v[i] - v[i - st]) / (a[n - 1] - a[n - 2]);
      else
        d = (v[i + st] - v[i - st]) / (a[j + 1] - a[j - 1]);
      sq[i] += d * d;
    }
  }
  for (double& x : sq) x = std::sqrt(x);
  return sq;
}

namespace detail {

void s_domain_slopes(const Profile1D& p, std::vector<double>& slope, std::vector<double>& mass) {
  const auto& s = p.nodes;
  const auto& u = p.values;
  const std::size_t n = s.size();
  if (n < 2) throw DomainError("profile needs at least two nodes");
  slope.assign(n, 0.0);
  mass.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i + 1 == n ? n - 1 : i + 1;
    slope[i] = std::abs((u[hi] - u[lo]) / (s[hi] - s[lo]));
    const double left = i == 0 ? 0.0 : 0.5 * (s[i - 1] + s[i]);
    const double right = i + 1 == n ? 1.0 : 0.5 * (s[i] + s[i + 1]);
    mass[i] = right - left;
  }
}

}  // namespace detail
SampledField random_bump_field(std::uint64_t seed, int n, int dim, int bumps, double half_width) {
  if (dim < 1 || dim > kMaxFieldDim) throw DomainError("random_bump_field: dimension out of range");
  if (n < 3 || n > kMaxAxisNodes) throw DomainError("random_bump_field: node count out of range");
  if (bumps < 1 || !(half_width > 0.0)) throw DomainError("random_bump_field: invalid parameters");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> centre(-2.0, 2.0), width(0.4, 1.5), amp(-2.0, 2.0);
  struct Bump {
    std::vector<double> c;
    double w, a;
  };
  std::vector<Bump> mix(bumps);
  for (auto& b : mix) {
    for (int k = 0; k < dim; ++k) b.c.push_back(centre(rng));
    b.w = width(rng);
    b.a = amp(rng);
  }
  std::vector<double> axis(n);
  for (int i = 0; i < n; ++i) axis[i] = -half_width + 2.0 * half_width * i / (n - 1);
  if (n % 2) axis[n / 2] = 0.0;
  return SampledField::from_function(std::vector<std::vector<double>>(dim, axis),
                                     [&](std::span<const double> x) {
                                       double v = 0.0;
                                       for (const auto& b : mix) {
                                         double r2 = 0.0;
                                         for (int k = 0; k < dim; ++k) r2 += (x[k] - b.c[k]) * (x[k] - b.c[k]);
                                         v += b.a * std::exp(-0.5 * r2 / (b.w * b.w));
                                       }
                                       return v;
                                     });
}

}  // namespace gaussmoser
