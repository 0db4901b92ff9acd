/*
   Copyright 2026 The idcf Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "idcf/bounds.hpp"
#include "idcf/cf_core.hpp"
#include "idcf/error.hpp"
#include "idcf/rng.hpp"

namespace idcf {

enum class Family { gaussian, sympoisson, laplace, uniform, rademacher, binomsym, triangular };

enum class Divisibility { infinitely_divisible, m_divisible, not_id };

inline const char* to_string(Divisibility d) {
  switch (d) {
    case Divisibility::infinitely_divisible: return "INFINITELY_DIVISIBLE";
    case Divisibility::m_divisible: return "M_DIVISIBLE";
    case Divisibility::not_id: return "NOT_ID";
  }
  return "?";
}

/// A symmetric reference law with a closed-form CF.
///
/// `scale` is sigma (gaussian), lambda (sympoisson: N1 - N2 with independent
/// Poisson(lambda) parts), b (laplace), A (uniform, triangular on [-A, A]) or
/// a (rademacher and binomsym, the latter a sum of m independent +-a signs).
struct RefDist {
  Family family = Family::gaussian;
  std::string name;
  double scale = 1.0;
  int m = 1;
  Divisibility divisibility = Divisibility::infinitely_divisible;
  int divisibility_m = 0;  // m of M_DIVISIBLE(m); 0 otherwise
  double sigma2 = 1.0;
  std::optional<double> support_radius;

  /// Real CF value (all registry laws are symmetric).
  [[nodiscard]] double cf(double t) const {
    switch (family) {
      case Family::gaussian: return std::exp(-scale * scale * t * t / 2.0);
      case Family::sympoisson: {
        const double s = std::sin(t / 2.0);
        return std::exp(-4.0 * scale * s * s);
      }
      case Family::laplace: return 1.0 / (1.0 + scale * scale * t * t);
      case Family::uniform: {
        const double u = scale * t;
        return u == 0.0 ? 1.0 : std::sin(u) / u;
      }
      case Family::rademacher: return std::cos(scale * t);
      case Family::binomsym: return detail::power_cf(std::cos(scale * t), m);
      case Family::triangular: {
        const double u = scale * t / 2.0;
        if (u == 0.0) return 1.0;
        const double q = std::sin(u) / u;
        return q * q;
      }
    }
    return 0.0;
  }
  double operator()(double t) const { return cf(t); }

  /// log cf(t); closed form for the infinitely divisible laws.
  [[nodiscard]] double log_value(double t) const {
    switch (family) {
      case Family::gaussian: return -scale * scale * t * t / 2.0;
      case Family::sympoisson: {
        const double s = std::sin(t / 2.0);
        return -4.0 * scale * s * s;
      }
      case Family::laplace: return -std::log1p(scale * scale * t * t);
      default: {
        const double v = cf(t);
        if (!(v > 0.0)) throw undefined_iterate("log of a non-positive CF value");
        return std::log(v);
      }
    }
  }

  /// Population absolute moment E|X|^r, r > 0.
  [[nodiscard]] double abs_moment(double r) const;

  [[nodiscard]] bool symmetric() const { return true; }
};

namespace detail {

inline std::vector<double> poisson_pmf(double lambda, double cutoff = 1e-20) {
  std::vector<double> p;
  double v = std::exp(-lambda);
  double cum = 0.0;
  for (int k = 0; k < 100000; ++k) {
    if (k > 0) v *= lambda / k;
    p.push_back(v);
    cum += v;
    if (k > lambda && 1.0 - cum < cutoff && v < cutoff) break;
  }
  return p;
}

}  // namespace detail

inline double RefDist::abs_moment(double r) const {
  detail::require(std::isfinite(r) && r > 0.0, "abs_moment: r must be positive");
  switch (family) {
    case Family::gaussian:
      return std::pow(2.0, r / 2.0) * std::pow(scale, r) *
             std::tgamma((1.0 + r) / 2.0) / std::sqrt(std::numbers::pi);
    case Family::laplace: return std::pow(scale, r) * std::tgamma(r + 1.0);
    case Family::uniform: return std::pow(scale, r) / (r + 1.0);
    case Family::triangular: return 2.0 * std::pow(scale, r) / ((r + 1.0) * (r + 2.0));
    case Family::rademacher: return std::pow(scale, r);
    case Family::binomsym: {
      double total = 0.0, c = 1.0;
      for (int k = 0; k <= m; ++k) {
        if (k > 0) c = c * (m - k + 1) / k;
        total += c * detail::abs_pow(scale * (2.0 * k - m), r);
      }
      return total / std::ldexp(1.0, m);
    }
    case Family::sympoisson: {
      const auto p = detail::poisson_pmf(scale);
      double total = 0.0;
      for (std::size_t d = 1; d < p.size(); ++d) {
        double prob = 0.0;
        for (std::size_t j = 0; j + d < p.size(); ++j) prob += p[j + d] * p[j];
        total += 2.0 * prob * std::pow(static_cast<double>(d), r);
      }
      return total;
    }
  }
  return 0.0;
}

inline constexpr std::string_view kRegistryNames[] = {
    "gaussian", "sympoisson", "laplace", "uniform", "rademacher", "binomsym", "triangular"};

/// Registry entry by CLI name. `scale` and `m` default to 1 and 3.
inline RefDist make_dist(std::string_view name, std::optional<double> scale = {},
                         std::optional<int> m = {}) {
  RefDist d;
  d.name = std::string(name);
  d.scale = scale.value_or(1.0);
  detail::require(std::isfinite(d.scale) && d.scale > 0.0,
                  "distribution scale must be positive");
  const double s = d.scale;
  if (name == "gaussian") {
    d.family = Family::gaussian;
    d.sigma2 = s * s;
  } else if (name == "sympoisson") {
    d.family = Family::sympoisson;
    detail::require(s <= 30.0, "sympoisson: lambda must be <= 30");
    d.sigma2 = 2.0 * s;
  } else if (name == "laplace") {
    d.family = Family::laplace;
    d.sigma2 = 2.0 * s * s;
  } else if (name == "uniform") {
    d.family = Family::uniform;
    d.divisibility = Divisibility::not_id;
    d.sigma2 = s * s / 3.0;
    d.support_radius = s;
  } else if (name == "rademacher") {
    d.family = Family::rademacher;
    d.divisibility = Divisibility::not_id;
    d.sigma2 = s * s;
    d.support_radius = s;
  } else if (name == "binomsym") {
    d.family = Family::binomsym;
    d.m = m.value_or(3);
    detail::require(d.m >= 1 && d.m <= 64, "binomsym: m must lie in [1, 64]");
    d.divisibility = Divisibility::m_divisible;
    d.divisibility_m = d.m;
    d.sigma2 = d.m * s * s;
    d.support_radius = d.m * s;
  } else if (name == "triangular") {
    d.family = Family::triangular;
    d.divisibility = Divisibility::not_id;
    d.sigma2 = s * s / 6.0;
    d.support_radius = s;
  } else {
    throw invalid_argument("unknown distribution '" + std::string(name) + "'");
  }
  return d;
}

/// All registry laws at their default parameters.
inline std::vector<RefDist> registry() {
  std::vector<RefDist> out;
  for (auto name : kRegistryNames) out.push_back(make_dist(name));
  return out;
}

namespace detail {

inline int poisson_inversion(Stream& rng, double lambda) {
  const double u = rng.uniform();
  double p = std::exp(-lambda);
  double cum = p;
  int k = 0;
  while (u >= cum && k < 10000) {
    ++k;
    p *= lambda / k;
    cum += p;
    if (p == 0.0 && k > lambda) break;
  }
  return k;
}

}  // namespace detail

/// n i.i.d. draws; a pure function of (dist, n, seed).
inline Sample sample(const RefDist& dist, std::size_t n, std::uint64_t seed) {
  detail::require(n >= 1, "sample size must be >= 1");
  Stream rng(seed);
  std::vector<double> out(n);
  const double s = dist.scale;
  switch (dist.family) {
    case Family::gaussian:
      // Box-Muller, both outputs of each pair.
      for (std::size_t i = 0; i < n; i += 2) {
        const double u1 = rng.uniform_pos();
        const double u2 = rng.uniform();
        const double rad = std::sqrt(-2.0 * std::log(u1));
        const double ang = 2.0 * std::numbers::pi * u2;
        out[i] = s * rad * std::cos(ang);
        if (i + 1 < n) out[i + 1] = s * rad * std::sin(ang);
      }
      break;
    case Family::sympoisson:
      for (auto& x : out) {
        const int a = detail::poisson_inversion(rng, s);
        const int b = detail::poisson_inversion(rng, s);
        x = static_cast<double>(a - b);
      }
      break;
    case Family::laplace:
      for (auto& x : out) {
        // Open interval (-1/2, 1/2) keeps the logarithm finite.
        const double u = (static_cast<double>(rng.next() >> 11) + 0.5) * 0x1.0p-53 - 0.5;
        const double mag = -s * std::log1p(-2.0 * std::fabs(u));
        x = u < 0.0 ? -mag : mag;
      }
      break;
    case Family::uniform:
      for (auto& x : out) x = s * (2.0 * rng.uniform() - 1.0);
      break;
    case Family::rademacher:
      for (auto& x : out) x = (rng.next() >> 63) ? s : -s;
      break;
    case Family::binomsym:
      for (auto& x : out) {
        const std::uint64_t bits = rng.next();
        const std::uint64_t mask =
            dist.m == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << dist.m) - 1);
        const int ones = std::popcount(bits & mask);
        x = s * static_cast<double>(2 * ones - dist.m);
      }
      break;
    case Family::triangular:
      for (auto& x : out) x = s * (rng.uniform() - rng.uniform());
      break;
  }
  return Sample(std::move(out));
}

inline std::vector<double> cf_eval(const RefDist& dist, const TGrid& grid) {
  std::vector<double> out;
  out.reserve(grid.size());
  for (double t : grid.points()) out.push_back(dist.cf(t));
  return out;
}

}  // namespace idcf
