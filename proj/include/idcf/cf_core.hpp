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

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "idcf/error.hpp"
#include "idcf/rng.hpp"

namespace idcf {

/// A finite list of real observations.
class Sample {
 public:
  Sample() = default;

  explicit Sample(std::vector<double> values) : values_(std::move(values)) {
    for (std::size_t i = 0; i < values_.size(); ++i) {
      if (!std::isfinite(values_[i])) {
        throw invalid_argument("sample value at index " + std::to_string(i) +
                               " is not finite");
      }
    }
  }

  [[nodiscard]] std::size_t size() const { return values_.size(); }
  [[nodiscard]] bool empty() const { return values_.empty(); }
  [[nodiscard]] std::span<const double> values() const { return values_; }
  [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }

  [[nodiscard]] double mean() const {
    detail::require(!values_.empty(), "mean of an empty sample");
    return std::accumulate(values_.begin(), values_.end(), 0.0) /
           static_cast<double>(values_.size());
  }

  /// Unbiased sample variance (divisor n - 1).
  [[nodiscard]] double variance() const {
    detail::require(values_.size() >= 2, "variance needs n >= 2");
    const double m = mean();
    double ss = 0.0;
    for (double x : values_) ss += (x - m) * (x - m);
    return ss / static_cast<double>(values_.size() - 1);
  }

  [[nodiscard]] double min() const {
    detail::require(!values_.empty(), "min of an empty sample");
    return *std::min_element(values_.begin(), values_.end());
  }
  [[nodiscard]] double max() const {
    detail::require(!values_.empty(), "max of an empty sample");
    return *std::max_element(values_.begin(), values_.end());
  }

  bool operator==(const Sample&) const = default;

 private:
  std::vector<double> values_;
};

/// Strictly increasing evaluation points on the t-axis. Negative t is
/// covered by evenness of the symmetrized CF.
class TGrid {
 public:
  TGrid() = default;

  static TGrid from_points(std::vector<double> points) {
    detail::require(!points.empty(), "grid must not be empty");
    for (std::size_t i = 0; i < points.size(); ++i) {
      detail::require(std::isfinite(points[i]), "grid point is not finite");
      if (i > 0) {
        detail::require(points[i] > points[i - 1],
                        "grid points must be strictly increasing");
      }
    }
    TGrid g;
    g.points_ = std::move(points);
    return g;
  }

  [[nodiscard]] std::span<const double> points() const { return points_; }
  [[nodiscard]] std::size_t size() const { return points_.size(); }
  [[nodiscard]] double operator[](std::size_t i) const { return points_[i]; }
  [[nodiscard]] double t_max() const { return points_.back(); }

  /// Index of a point equal to t, or size() when t is not on the grid.
  [[nodiscard]] std::size_t find(double t) const {
    auto it = std::lower_bound(points_.begin(), points_.end(), t);
    if (it != points_.end() && *it == t) {
      return static_cast<std::size_t>(it - points_.begin());
    }
    return points_.size();
  }

  bool operator==(const TGrid&) const = default;

 private:
  std::vector<double> points_;
};

/// Uniform grid on [0, t_max] with `count` points, endpoints included.
inline TGrid make_grid(double t_max, std::size_t count) {
  detail::require(std::isfinite(t_max) && t_max > 0.0,
                  "t_max must be finite and positive");
  detail::require(count >= 2, "grid needs at least 2 points");
  std::vector<double> pts(count);
  const double denom = static_cast<double>(count - 1);
  for (std::size_t k = 0; k + 1 < count; ++k) {
    pts[k] = t_max * static_cast<double>(k) / denom;
  }
  pts[count - 1] = t_max;
  return TGrid::from_points(std::move(pts));
}

/// Dyadic grid t_k = t_max * k / 2^L, k = 0..2^L, with 2^L the smallest power
/// of two >= count - 1. For even k, t_k / 2 == t_{k/2} exactly.
inline TGrid make_dyadic_grid(double t_max, std::size_t count) {
  detail::require(count >= 2, "grid needs at least 2 points");
  std::size_t cells = 1;
  while (cells < count - 1) cells <<= 1;
  return make_grid(t_max, cells + 1);
}

struct EmpiricalCF {
  TGrid grid;
  std::size_t n = 0;
  std::vector<std::complex<double>> complex_values;
  /// Unbiased estimate of |f(t)|^2; not clamped.
  std::vector<double> sym_values;
  /// First-order U-statistic variance proxy of sym_values.
  std::vector<double> sym_variance;
};

/// (n |f|^2 - 1) / (n - 1): the U-statistic (1/(n(n-1))) sum_{i!=j}
/// cos(t (x_i - x_j)) written through the ECF.
inline std::vector<double> symmetrize_ecf(
    std::span<const std::complex<double>> complex_values, std::size_t n) {
  detail::require(n >= 2, "symmetrization needs n >= 2");
  const double nn = static_cast<double>(n);
  std::vector<double> out(complex_values.size());
  for (std::size_t k = 0; k < complex_values.size(); ++k) {
    const double re = complex_values[k].real();
    const double im = complex_values[k].imag();
    out[k] = (nn * (re * re + im * im) - 1.0) / (nn - 1.0);
  }
  return out;
}

inline EmpiricalCF ecf(const Sample& sample, const TGrid& grid) {
  detail::require(!sample.empty(), "ECF of an empty sample");
  detail::require(grid.size() > 0, "ECF on an empty grid");
  const std::size_t n = sample.size();
  const std::size_t kk = grid.size();
  std::vector<double> re(kk, 0.0), im(kk, 0.0);
  const auto xs = sample.values();
  const auto ts = grid.points();
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < kk; ++k) {
      const double arg = ts[k] * xs[j];
      re[k] += std::cos(arg);
      im[k] += std::sin(arg);
    }
  }
  EmpiricalCF out;
  out.grid = grid;
  out.n = n;
  out.complex_values.resize(kk);
  const double nn = static_cast<double>(n);
  for (std::size_t k = 0; k < kk; ++k) {
    out.complex_values[k] = {re[k] / nn, im[k] / nn};
  }
  if (n >= 2) {
    out.sym_values = symmetrize_ecf(out.complex_values, n);
    // Projection psi(x) = Re(e^{itx} conj f(t)); Var(U) ~ 4 Var(psi) / n.
    out.sym_variance.assign(kk, 0.0);
    for (std::size_t k = 0; k < kk; ++k) {
      const double fr = out.complex_values[k].real();
      const double fi = out.complex_values[k].imag();
      double s = 0.0, ss = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double arg = ts[k] * xs[j];
        const double psi = std::cos(arg) * fr + std::sin(arg) * fi;
        s += psi;
        ss += psi * psi;
      }
      const double mean = s / nn;
      const double var = std::max(0.0, (ss - nn * mean * mean) / (nn - 1.0));
      out.sym_variance[k] = 4.0 * var / nn;
    }
  }
  return out;
}

/// Absolute moments a_r = (1/n) sum |x - c|^r of the empirical distribution.
struct MomentSet {
  double sigma2 = 0.0;
  double a4 = 0.0;
  double a5 = 0.0;
  double a10 = 0.0;
  std::map<double, double> a_frac;

  bool operator==(const MomentSet&) const = default;
};

namespace detail {

/// |x|^r as exp(r log|x|), with 0^r = 0.
inline double abs_pow(double x, double r) {
  const double ax = std::fabs(x);
  if (ax == 0.0) return 0.0;
  return std::exp(r * std::log(ax));
}

inline double abs_moment(std::span<const double> xs, double center, double r) {
  double s = 0.0;
  for (double x : xs) s += abs_pow(x - center, r);
  return s / static_cast<double>(xs.size());
}

}  // namespace detail

inline MomentSet moments(const Sample& sample, std::span<const double> orders,
                         bool centered) {
  detail::require(!sample.empty(), "moments of an empty sample");
  for (double r : orders) {
    detail::require(std::isfinite(r) && r > 0.0,
                    "moment orders must be positive and finite");
  }
  const double c = centered ? sample.mean() : 0.0;
  const auto xs = sample.values();
  MomentSet m;
  m.sigma2 = detail::abs_moment(xs, c, 2.0);
  m.a4 = detail::abs_moment(xs, c, 4.0);
  m.a5 = detail::abs_moment(xs, c, 5.0);
  m.a10 = detail::abs_moment(xs, c, 10.0);
  for (double r : orders) m.a_frac[r] = detail::abs_moment(xs, c, r);
  return m;
}

/// Up to max_pairs differences x_i - x_j (i != j), drawn without replacement
/// from all n(n-1) ordered pairs. When max_pairs covers every pair, all of
/// them are returned in lexicographic (i, j) order; otherwise the selected
/// pairs are emitted in that same order.
inline Sample pairwise_difference_sample(const Sample& sample,
                                         std::size_t max_pairs, Stream rng) {
  detail::require(max_pairs >= 1, "max_pairs must be at least 1");
  const std::size_t n = sample.size();
  detail::require(n >= 2, "pairwise differences need n >= 2");
  const std::uint64_t total =
      static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n - 1);
  const auto xs = sample.values();
  auto pair_value = [&](std::uint64_t p) {
    const std::size_t i = static_cast<std::size_t>(p / (n - 1));
    std::size_t j = static_cast<std::size_t>(p % (n - 1));
    if (j >= i) ++j;
    return xs[i] - xs[j];
  };

  std::vector<double> out;
  if (max_pairs >= total) {
    out.reserve(static_cast<std::size_t>(total));
    for (std::uint64_t p = 0; p < total; ++p) out.push_back(pair_value(p));
    return Sample(std::move(out));
  }

  // Floyd's sampling of max_pairs distinct indices.
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(max_pairs * 2);
  for (std::uint64_t j = total - max_pairs; j < total; ++j) {
    const std::uint64_t t = rng.below(j + 1);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  std::vector<std::uint64_t> idx(chosen.begin(), chosen.end());
  std::sort(idx.begin(), idx.end());
  out.reserve(idx.size());
  for (std::uint64_t p : idx) out.push_back(pair_value(p));
  return Sample(std::move(out));
}

}  // namespace idcf
