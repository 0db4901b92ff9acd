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
#include <concepts>
#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "idcf/cf_core.hpp"
#include "idcf/error.hpp"
#include "idcf/quadrature.hpp"
#include "idcf/special.hpp"

namespace idcf {

enum class BoundKind {
  th1_lower,   // cos(sigma t) on |t| < 4.49 / A, compact support
  th1a_lower,  // cos(sigma t) on a moment-determined radius
  th2_lower,   // cos^m(sigma t / sqrt(m)), m-divisible with compact support
  th2a_lower,  // same curve, heuristic moment radius
  th3_lower,   // exp(-sigma^2 t^2 / 2), infinitely divisible
  th21_upper,  // cos(a_{1/gamma}^gamma t), compact support
};

inline const char* to_string(BoundKind k) {
  switch (k) {
    case BoundKind::th1_lower: return "th1";
    case BoundKind::th1a_lower: return "th1a";
    case BoundKind::th2_lower: return "th2";
    case BoundKind::th2a_lower: return "th2a";
    case BoundKind::th3_lower: return "th3";
    case BoundKind::th21_upper: return "th21";
  }
  return "?";
}

namespace detail {

/// base^m with the positive branch evaluated as exp(m log base).
inline double power_cf(double base, int m) {
  if (m == 1) return base;
  if (base > 0.0) return std::exp(static_cast<double>(m) * std::log(base));
  return std::pow(base, m);
}

}  // namespace detail

/// A bound on a characteristic function together with the symmetric
/// interval [-half_width, half_width] on which it is asserted.
struct BoundCurve {
  BoundKind kind = BoundKind::th3_lower;
  std::map<std::string, double> params;
  double half_width = std::numeric_limits<double>::infinity();
  bool closed = true;
  bool heuristic = false;
  std::vector<std::string> warnings;

  double scale = 1.0;  // argument multiplier of cos, or sigma^2 for th3
  int power = 1;

  [[nodiscard]] double value(double t) const {
    switch (kind) {
      case BoundKind::th3_lower:
        return std::exp(-scale * t * t / 2.0);
      case BoundKind::th2_lower:
      case BoundKind::th2a_lower:
        return detail::power_cf(std::cos(scale * t), power);
      default:
        return std::cos(scale * t);
    }
  }
  double operator()(double t) const { return value(t); }

  [[nodiscard]] bool is_upper() const { return kind == BoundKind::th21_upper; }

  [[nodiscard]] double t_lo() const { return -half_width; }
  [[nodiscard]] double t_hi() const { return half_width; }

  [[nodiscard]] bool in_validity(double t) const {
    const double a = std::fabs(t);
    return closed ? a <= half_width : a < half_width;
  }

  /// Positive when the inequality fails at t for CF value `cf`.
  [[nodiscard]] double deficit(double t, double cf) const {
    return is_upper() ? cf - value(t) : value(t) - cf;
  }
};

inline BoundCurve th1_lower(double sigma, double A, bool sharp = false) {
  detail::require(std::isfinite(sigma) && sigma > 0.0, "th1: sigma must be positive");
  detail::require(std::isfinite(A) && A > 0.0, "th1: A must be positive");
  detail::require(sigma <= A * (1.0 + 1e-12),
                  "th1: sigma exceeds the support radius A");
  BoundCurve c;
  c.kind = BoundKind::th1_lower;
  c.params = {{"sigma", sigma}, {"A", A}};
  c.scale = sigma;
  c.half_width = (sharp ? root_z0().value : kZ0Conservative) / A;
  c.closed = false;
  return c;
}

/// max(0, 5 (a4 - sigma^4) / sqrt(sigma^10 + 2 sigma^5 a5 + a10)).
inline double th1a_radius(const MomentSet& m) {
  detail::require(std::isfinite(m.sigma2) && std::isfinite(m.a4) &&
                      std::isfinite(m.a5) && std::isfinite(m.a10),
                  "th1a: moments must be finite");
  detail::require(m.sigma2 > 0.0, "th1a: sigma^2 must be positive");
  const double s = std::sqrt(m.sigma2);
  const double s4 = m.sigma2 * m.sigma2;
  const double s5 = s4 * s;
  const double num = 5.0 * (m.a4 - s4);
  const double den = std::sqrt(s5 * s5 + 2.0 * s5 * m.a5 + m.a10);
  return std::max(0.0, num / den);
}

inline BoundCurve th1a_lower(const MomentSet& m) {
  BoundCurve c;
  c.kind = BoundKind::th1a_lower;
  c.half_width = th1a_radius(m);
  c.closed = true;
  c.scale = std::sqrt(m.sigma2);
  c.params = {{"sigma", c.scale}, {"a4", m.a4}, {"a5", m.a5}, {"a10", m.a10}};
  if (m.a4 < m.sigma2 * m.sigma2) {
    c.warnings.push_back("th1a: a4 < sigma^4, radius clamped to 0");
  }
  return c;
}

/// Lower envelope (t^4/24)((a4 - sigma^4) - D t / 5) of g(t) - cos(sigma t),
/// D = sqrt(sigma^10 + 2 sigma^5 a5 + a10). Diagnostic only.
inline double th1a_envelope(const MomentSet& m, double t) {
  const double s = std::sqrt(m.sigma2);
  const double s4 = m.sigma2 * m.sigma2;
  const double s5 = s4 * s;
  const double d = std::sqrt(s5 * s5 + 2.0 * s5 * m.a5 + m.a10);
  const double at = std::fabs(t);
  return at * at * at * at / 24.0 * ((m.a4 - s4) - d * at / 5.0);
}

inline BoundCurve th2_lower(double sigma, double A, int m, bool sharp = false) {
  detail::require(m >= 1, "th2: m must be >= 1");
  detail::require(std::isfinite(sigma) && sigma > 0.0, "th2: sigma must be positive");
  detail::require(std::isfinite(A) && A > 0.0, "th2: A must be positive");
  const double sm = std::sqrt(static_cast<double>(m));
  const double z = sharp ? root_z0().value : kZ0Conservative;
  BoundCurve c;
  c.kind = BoundKind::th2_lower;
  c.params = {{"sigma", sigma}, {"A", A}, {"m", static_cast<double>(m)}};
  c.scale = sigma / sm;
  c.power = m;
  c.half_width = std::min(z * static_cast<double>(m) / A,
                          std::numbers::pi * sm / (2.0 * sigma));
  c.closed = true;
  return c;
}

/// Same curve as th2_lower with a heuristic radius
/// min(sqrt(m) * th1a_radius(a_k / m), pi sqrt(m) / (2 sigma)), where the
/// moments of the m-th root law are approximated by a_k / m.
inline BoundCurve th2a_lower(const MomentSet& moments, int m) {
  detail::require(m >= 1, "th2a: m must be >= 1");
  const double md = static_cast<double>(m);
  MomentSet root;
  root.sigma2 = moments.sigma2 / md;
  root.a4 = moments.a4 / md;
  root.a5 = moments.a5 / md;
  root.a10 = moments.a10 / md;
  const double rg = th1a_radius(root);
  const double sigma = std::sqrt(moments.sigma2);
  const double sm = std::sqrt(md);
  BoundCurve c;
  c.kind = BoundKind::th2a_lower;
  c.params = {{"sigma", sigma}, {"m", md}, {"root_radius", rg}};
  c.scale = sigma / sm;
  c.power = m;
  c.half_width = std::min(sm * rg, std::numbers::pi * sm / (2.0 * sigma));
  c.closed = true;
  c.heuristic = true;
  c.warnings.push_back("th2a: HEURISTIC validity radius (a_{k,m} ~ a_k/m)");
  if (root.a4 < root.sigma2 * root.sigma2) {
    c.warnings.push_back("th2a: scaled a4 < sigma^4, radius clamped to 0");
  }
  return c;
}

inline BoundCurve th3_lower(double sigma2) {
  detail::require(std::isfinite(sigma2), "th3: sigma^2 must be finite");
  detail::require(sigma2 >= 0.0, "th3: sigma^2 must be nonnegative");
  BoundCurve c;
  c.kind = BoundKind::th3_lower;
  c.params = {{"sigma2", sigma2}};
  c.scale = sigma2;
  return c;
}

inline BoundCurve th21_upper(double a_gamma, double gamma, double A) {
  detail::require(std::isfinite(gamma) && gamma > 1.0, "th21: gamma must exceed 1");
  detail::require(std::isfinite(a_gamma) && a_gamma > 0.0,
                  "th21: moment must be positive");
  detail::require(std::isfinite(A) && A > 0.0, "th21: A must be positive");
  detail::require(a_gamma <= std::pow(A, 1.0 / gamma) * (1.0 + 1e-12),
                  "th21: a_{1/gamma} exceeds A^{1/gamma}");
  BoundCurve c;
  c.kind = BoundKind::th21_upper;
  c.params = {{"a_gamma", a_gamma}, {"gamma", gamma}, {"A", A}};
  c.scale = std::pow(a_gamma, gamma);
  c.half_width = std::numbers::pi / (2.0 * std::pow(A, gamma));
  c.closed = false;
  return c;
}

/// f(t/2)^4 - f(t) with both inputs clamped to [-1, 1]; positive means the
/// quadrupling inequality fails.
inline double th4_deficit(double f_t, double f_half_t) {
  const double a = std::clamp(f_t, -1.0, 1.0);
  const double b = std::clamp(f_half_t, -1.0, 1.0);
  const double b2 = b * b;
  return b2 * b2 - a;
}

/// CF evaluators may expose an exact logarithm, used in place of log(f(t)).
template <class F>
concept HasLogCF = requires(const F& f, double t) {
  { f.log_value(t) } -> std::convertible_to<double>;
};

/// f(t / 2^k)^(4^k), evaluated as exp(4^k log f(t / 2^k)).
template <class F>
double iterate_th4(const F& f, double t, int k) {
  detail::require(k >= 0, "iterate_th4: k must be nonnegative");
  if (k == 0) return f(t);
  const double u = std::ldexp(t, -k);
  double log_base;
  if constexpr (HasLogCF<F>) {
    log_base = f.log_value(u);
  } else {
    const double base = f(u);
    if (!(base > 0.0)) {
      throw undefined_iterate("iterate_th4: f(t/2^k) <= 0");
    }
    log_base = std::log(base);
  }
  return std::exp(std::ldexp(log_base, 2 * k));
}

/// E|Y|^r for Y ~ N(0, sigma^2): 2^{r/2} sigma^r Gamma((1+r)/2) / sqrt(pi).
inline double gaussian_abs_moment(double sigma, double r) {
  detail::require(std::isfinite(r) && r > 0.0 && r < 2.0,
                  "gaussian_abs_moment: r must lie in (0, 2)");
  detail::require(std::isfinite(sigma) && sigma >= 0.0,
                  "gaussian_abs_moment: sigma must be nonnegative");
  if (sigma == 0.0) return 0.0;
  return std::pow(2.0, r / 2.0) * std::pow(sigma, r) * gamma_fn((1.0 + r) / 2.0) /
         std::sqrt(std::numbers::pi);
}

namespace detail {

/// Integral of (1 - cos u) / u^{1+r} over (0, inf): power series on (0, 1/2],
/// adaptive quadrature up to U = 128 pi, and an asymptotic expansion beyond.
inline double cr_integral(double r) {
  constexpr double delta = 0.5;
  double head = 0.0, fact = 1.0, sign = 1.0;
  for (int k = 1; k <= 30; ++k) {
    fact *= static_cast<double>((2 * k - 1) * (2 * k));
    const double e = 2.0 * k - r;
    const double term = std::pow(delta, e) / (fact * e);
    head += sign * term;
    sign = -sign;
    if (term < 1e-22) break;
  }

  constexpr int periods = 64;
  const double U = 2.0 * std::numbers::pi * periods;
  QuadOptions opt;
  opt.abs_tol = 1e-13;
  opt.initial_panels = 4 * periods;
  auto body = integrate(
      [r](double u) { return (1.0 - std::cos(u)) / std::pow(u, 1.0 + r); },
      delta, U, opt);
  if (!body.converged) throw numeric_failure("cr_constant: quadrature did not converge");

  // int_U^inf cos(u) u^{-s} du at U = 2 pi N, by repeated integration by parts.
  const double s = 1.0 + r;
  const double j = s * std::pow(U, -s - 1.0) -
                   s * (s + 1) * (s + 2) * std::pow(U, -s - 3.0) +
                   s * (s + 1) * (s + 2) * (s + 3) * (s + 4) * std::pow(U, -s - 5.0);
  const double tail = std::pow(U, -r) / r - j;
  return head + body.value + tail;
}

}  // namespace detail

/// Normalizer of E|Z|^r = C_r int_0^inf (1 - Re h(t)) / t^{r+1} dt.
inline double cr_constant(double r) {
  detail::require(std::isfinite(r) && r > 0.0 && r < 2.0,
                  "cr_constant: r must lie in (0, 2)");
  return 1.0 / detail::cr_integral(r);
}

struct FractionalMoment {
  double value = 0.0;
  /// Bound on the neglected oscillatory tail, 2 C_r t_max^{-r} / r.
  double tail_bound = 0.0;
  double quad_error = 0.0;
};

/// E|Z|^r recovered from a real, even CF h by the C_r identity truncated at
/// t_max. The constant part of the tail, int_{t_max}^inf t^{-1-r} dt, is
/// added exactly; the remaining int h(t) t^{-1-r} is reported through
/// tail_bound. Near 0, 1 - h(t) is fitted as c2 t^2 + c4 t^4.
template <class H>
FractionalMoment fractional_moment_via_cf(const H& h, double r, double t_max,
                                          double tol = 1e-9) {
  detail::require(std::isfinite(r) && r > 0.0 && r < 2.0,
                  "fractional_moment_via_cf: r must lie in (0, 2)");
  detail::require(std::isfinite(t_max) && t_max > 0.0,
                  "fractional_moment_via_cf: t_max must be positive");
  detail::require(tol > 0.0, "fractional_moment_via_cf: tol must be positive");
  const double cr = cr_constant(r);

  const double delta = std::min(1e-3, t_max / 16.0);
  const double a = 1.0 - h(delta);
  const double b = 1.0 - h(delta / 2.0);
  const double d2 = delta * delta;
  const double c4 = (a - 4.0 * b) / (0.75 * d2 * d2);
  const double c2 = (a - c4 * d2 * d2) / d2;
  const double head = c2 * std::pow(delta, 2.0 - r) / (2.0 - r) +
                      c4 * std::pow(delta, 4.0 - r) / (4.0 - r);

  QuadOptions opt;
  opt.abs_tol = tol / cr;
  opt.initial_panels = static_cast<std::size_t>(
      std::clamp(std::ceil(t_max), 8.0, 65536.0));
  opt.max_intervals = 1u << 21;
  auto body = integrate(
      [&h, r](double t) { return (1.0 - h(t)) / std::pow(t, 1.0 + r); },
      delta, t_max, opt);
  if (!body.converged) {
    throw numeric_failure("fractional_moment_via_cf: quadrature did not converge");
  }
  FractionalMoment out;
  out.value = cr * (head + body.value + std::pow(t_max, -r) / r);
  out.tail_bound = 2.0 * cr * std::pow(t_max, -r) / r;
  out.quad_error = cr * body.abs_error;
  return out;
}

}  // namespace idcf
