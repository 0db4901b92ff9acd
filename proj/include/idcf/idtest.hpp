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
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "idcf/bounds.hpp"
#include "idcf/cf_core.hpp"
#include "idcf/error.hpp"
#include "idcf/parallel.hpp"
#include "idcf/refdist.hpp"
#include "idcf/rng.hpp"

namespace idcf {

/// Deficit statistics. T3: Gaussian lower bound; T4: quadrupling
/// inequality; TMOM: fractional absolute moment against the Gaussian one;
/// T2: cos^m lower bound under an m-divisibility hypothesis.
enum class Statistic { t3, t4, tmom, t2 };

inline constexpr std::array<Statistic, 4> kAllStatistics = {
    Statistic::t3, Statistic::t4, Statistic::tmom, Statistic::t2};

inline const char* to_string(Statistic s) {
  switch (s) {
    case Statistic::t3: return "T3";
    case Statistic::t4: return "T4";
    case Statistic::tmom: return "TMOM";
    case Statistic::t2: return "T2";
  }
  return "?";
}

inline Statistic parse_statistic(std::string_view name) {
  std::string lower(name);
  for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (lower == "t3") return Statistic::t3;
  if (lower == "t4") return Statistic::t4;
  if (lower == "tmom") return Statistic::tmom;
  if (lower == "t2") return Statistic::t2;
  throw invalid_argument("unknown statistic '" + std::string(name) + "'");
}

enum class Decision { reject_id, no_evidence_against_id };

inline const char* to_string(Decision d) {
  return d == Decision::reject_id ? "REJECT_ID" : "NO_EVIDENCE_AGAINST_ID";
}

struct TestConfig {
  /// Grid upper end; 0 selects 8 / sigma_hat.
  double grid_max = 0.0;
  std::size_t grid_points = 256;
  std::vector<Statistic> statistics{Statistic::t3, Statistic::t4};
  double r_order = 1.0;
  int bootstrap_B = 199;
  double alpha = 0.05;
  std::uint64_t seed = 42;
  std::optional<int> m_hypothesis;
  /// Trust the data as symmetric about 0: use Re f and s^2 directly.
  bool symmetric = false;
  std::size_t max_pairs = 20000;
  /// Support radius for T2; defaults to the sample range (max |x| when
  /// symmetric).
  std::optional<double> support_radius;

  void validate() const {
    detail::require(bootstrap_B >= 99, "bootstrap_B must be >= 99");
    detail::require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
    detail::require(grid_max >= 0.0 && std::isfinite(grid_max),
                    "grid_max must be finite and >= 0 (0 = automatic)");
    detail::require(grid_points >= 2, "grid_points must be >= 2");
    detail::require(r_order > 0.0 && r_order < 2.0, "r must lie in (0, 2)");
    detail::require(max_pairs >= 1, "max_pairs must be >= 1");
    detail::require(!m_hypothesis || *m_hypothesis >= 1, "m must be >= 1");
    detail::require(!support_radius || *support_radius > 0.0,
                    "support radius must be positive");
    bool any_id_stat = false;
    for (auto s : statistics) {
      if (s == Statistic::t2) {
        detail::require(m_hypothesis.has_value(), "T2 requires an m hypothesis");
      } else {
        any_id_stat = true;
      }
    }
    detail::require(any_id_stat, "enable at least one of T3, T4, TMOM");
  }

  [[nodiscard]] bool enabled(Statistic s) const {
    if (s == Statistic::t2 && m_hypothesis) return true;
    return std::find(statistics.begin(), statistics.end(), s) != statistics.end();
  }

  bool operator==(const TestConfig&) const = default;
};

/// Per-gridpoint deficits of one sup-type statistic.
struct StatDeficits {
  double value = 0.0;     // max(0, max deficit)
  double argmax_t = 0.0;  // t of the largest deficit
  std::vector<double> t;
  std::vector<double> deficits;
};

namespace detail {

inline StatDeficits finish_deficits(std::vector<double> t, std::vector<double> d) {
  StatDeficits out;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] > best) {
      best = d[i];
      out.argmax_t = t[i];
    }
  }
  out.value = std::max(0.0, best);
  out.t = std::move(t);
  out.deficits = std::move(d);
  return out;
}

inline double clamp01_pow4(double h) {
  const double c = std::clamp(h, 0.0, 1.0);
  const double c2 = c * c;
  return c2 * c2;
}

inline void require_same_size(const TGrid& grid, std::span<const double> h) {
  require(grid.size() == h.size(), "CF values and grid differ in length");
}

}  // namespace detail

/// T3 = max_t (exp(-sigma2 t^2 / 2) - h(t))_+ over the grid.
inline StatDeficits stat_t3(const TGrid& grid, std::span<const double> h, double sigma2) {
  detail::require_same_size(grid, h);
  detail::require(std::isfinite(sigma2) && sigma2 >= 0.0, "T3: sigma^2 must be >= 0");
  std::vector<double> t(grid.points().begin(), grid.points().end());
  std::vector<double> d(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    d[k] = std::exp(-sigma2 * t[k] * t[k] / 2.0) - h[k];
  }
  return detail::finish_deficits(std::move(t), std::move(d));
}

inline StatDeficits stat_t3(const EmpiricalCF& ecf, double sigma2_sym) {
  return stat_t3(ecf.grid, ecf.sym_values, sigma2_sym);
}

/// Grid indices k with t_k / 2 also on the grid, paired with that index.
inline std::vector<std::pair<std::size_t, std::size_t>> dyadic_pairs(const TGrid& grid) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const std::size_t half = grid.find(grid[k] / 2.0);
    if (half < grid.size()) out.emplace_back(k, half);
  }
  bool has_positive = false;
  for (auto [k, half] : out) has_positive |= grid[k] != 0.0;
  detail::require(has_positive, "T4: grid has no dyadic pairs (t, t/2)");
  return out;
}

/// T4 = max_t (clamp(h(t/2), 0, 1)^4 - h(t))_+ over t with t/2 on the grid.
inline StatDeficits stat_t4(const TGrid& grid, std::span<const double> h) {
  detail::require_same_size(grid, h);
  const auto pairs = dyadic_pairs(grid);
  std::vector<double> t, d;
  t.reserve(pairs.size());
  d.reserve(pairs.size());
  for (auto [k, half] : pairs) {
    t.push_back(grid[k]);
    d.push_back(detail::clamp01_pow4(h[half]) - h[k]);
  }
  return detail::finish_deficits(std::move(t), std::move(d));
}

inline StatDeficits stat_t4(const EmpiricalCF& ecf) {
  return stat_t4(ecf.grid, ecf.sym_values);
}

/// T2 = max (cos^m(sigma t / sqrt m) - h(t))_+ over grid points inside
/// |t| <= min(4.49 m / A, pi sqrt(m) / (2 sigma)).
inline StatDeficits stat_t2(const TGrid& grid, std::span<const double> h, double sigma,
                            double A, int m) {
  detail::require_same_size(grid, h);
  const BoundCurve curve = th2_lower(sigma, A, m);
  std::vector<double> t, d;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!curve.in_validity(grid[k])) continue;
    t.push_back(grid[k]);
    d.push_back(curve.value(grid[k]) - h[k]);
  }
  return detail::finish_deficits(std::move(t), std::move(d));
}

struct TmomResult {
  double value = 0.0;    // (moment - bound)_+
  double deficit = 0.0;  // moment - bound
  double moment = 0.0;   // empirical E|D|^r
  double bound = 0.0;    // Gaussian E|Y|^r at the same second moment
  double sigma = 0.0;    // sqrt of the empirical E D^2
};

namespace detail {

inline TmomResult tmom_from_values(std::span<const double> d, double r) {
  TmomResult out;
  double m2 = 0.0, mr = 0.0;
  for (double v : d) {
    m2 += v * v;
    mr += abs_pow(v, r);
  }
  const double nd = static_cast<double>(d.size());
  out.sigma = std::sqrt(m2 / nd);
  out.moment = mr / nd;
  out.bound = gaussian_abs_moment(out.sigma, r);
  out.deficit = out.moment - out.bound;
  out.value = std::max(0.0, out.deficit);
  return out;
}

}  // namespace detail

/// TMOM on pairwise differences D = X_i - X_j, which are symmetric whatever
/// the law of X. With `symmetric`, the data are used directly.
inline TmomResult stat_tmom(const Sample& sample, double r, std::size_t max_pairs = 20000,
                            Stream rng = Stream(42), bool symmetric = false) {
  detail::require(std::isfinite(r) && r > 0.0 && r < 2.0, "TMOM: r must lie in (0, 2)");
  if (symmetric) {
    detail::require(!sample.empty(), "TMOM: empty sample");
    return detail::tmom_from_values(sample.values(), r);
  }
  const Sample diffs = pairwise_difference_sample(sample, max_pairs, rng);
  return detail::tmom_from_values(diffs.values(), r);
}

struct BootstrapResult {
  double observed = 0.0;
  double p_value = 1.0;
  double critical_value = 0.0;
  std::vector<double> boot_values;
};

struct StatisticResult {
  std::string name;
  double observed = 0.0;
  double p_value = 1.0;
  double adjusted_p_value = 1.0;
  /// Bootstrap quantile at `level`; observed > critical_value rejects.
  double critical_value = 0.0;
  double level = 0.0;
  double argmax_t = 0.0;
  std::vector<double> t;
  std::vector<double> deficits;
  std::map<std::string, double> extras;

  bool operator==(const StatisticResult&) const = default;
};

struct TestReport {
  int schema = 1;
  TestConfig config;
  std::size_t n = 0;
  /// Variance used by the bounds: 2 s^2, or s^2 with config.symmetric.
  double sigma2_hat = 0.0;
  double grid_max = 0.0;
  std::size_t grid_size = 0;
  std::vector<StatisticResult> statistics;
  Decision decision = Decision::no_evidence_against_id;
  std::string conclusion;
  /// Set only under an m hypothesis: T2 at unadjusted level alpha.
  std::optional<bool> reject_m_divisible;
  std::vector<std::string> warnings;

  [[nodiscard]] const StatisticResult* find(std::string_view name) const {
    for (const auto& s : statistics) {
      if (s.name == name) return &s;
    }
    return nullptr;
  }

  bool operator==(const TestReport&) const = default;
};

namespace detail {

/// Shared state of one test: grid, trig tables and the observed deficits.
/// evaluate() recomputes every enabled statistic on a multinomial
/// reweighting of the sample, so replicate b only depends on its stream.
class Engine {
 public:
  static constexpr std::size_t kTableLimit = std::size_t{1} << 24;

  Engine(const Sample& sample, const TestConfig& cfg) : sample_(sample), cfg_(cfg) {
    cfg_.validate();
    n_ = sample.size();
    require(n_ >= 2, "the test needs n >= 2");
    const double s2 = sample.variance();
    sigma2_hat_ = cfg_.symmetric ? s2 : 2.0 * s2;
    degenerate_ = !(s2 > 0.0);

    double t_max = cfg_.grid_max;
    if (t_max == 0.0) {
      if (degenerate_) {
        t_max = 8.0;
        warnings_.push_back("degenerate sample (zero variance): statistics set to 0");
      } else {
        t_max = 8.0 / std::sqrt(sigma2_hat_);
      }
    }
    grid_ = make_dyadic_grid(t_max, cfg_.grid_points);
    kk_ = grid_.size();
    pairs_ = dyadic_pairs(grid_);

    if (cfg_.enabled(Statistic::t2)) {
      const int m = *cfg_.m_hypothesis;
      double A;
      if (cfg_.support_radius) {
        A = *cfg_.support_radius;
      } else if (cfg_.symmetric) {
        A = std::max(std::fabs(sample.min()), std::fabs(sample.max()));
        warnings_.push_back("T2: support radius estimated by max |x|");
      } else {
        A = sample.max() - sample.min();
        warnings_.push_back("T2: support radius estimated by the sample range");
      }
      t2_A_ = A;
      if (!degenerate_) {
        const BoundCurve c = th2_lower(std::sqrt(sigma2_hat_), A, m);
        for (std::size_t k = 0; k < kk_; ++k) {
          if (c.in_validity(grid_[k])) t2_index_.push_back(k);
        }
        t2_half_width_ = c.half_width;
      }
    }

    if (n_ * kk_ <= kTableLimit) {
      cos_.resize(n_ * kk_);
      if (!cfg_.symmetric) sin_.resize(n_ * kk_);
      const auto xs = sample.values();
      for (std::size_t j = 0; j < n_; ++j) {
        for (std::size_t k = 0; k < kk_; ++k) {
          const double arg = grid_[k] * xs[j];
          cos_[j * kk_ + k] = std::cos(arg);
          if (!cfg_.symmetric) sin_[j * kk_ + k] = std::sin(arg);
        }
      }
    }
  }

  struct Eval {
    double sigma2 = 0.0;
    std::vector<double> h;
    std::array<std::vector<double>, 4> deficits;  // indexed by Statistic
    TmomResult tmom;
  };

  /// counts == empty means every observation once. With `plugin`, the
  /// deficits are the functional of the empirical law itself (V-statistic
  /// |f|^2, divisor n), which is the truth of the bootstrap world.
  [[nodiscard]] Eval evaluate(std::span<const std::uint32_t> counts, Stream pair_stream,
                              bool plugin = false) const {
    Eval e;
    const auto xs = sample_.values();
    const double nn = static_cast<double>(n_);
    auto w = [&](std::size_t j) {
      return counts.empty() ? 1.0 : static_cast<double>(counts[j]);
    };

    double sum = 0.0;
    for (std::size_t j = 0; j < n_; ++j) sum += w(j) * xs[j];
    const double mean = sum / nn;
    double ss = 0.0;
    for (std::size_t j = 0; j < n_; ++j) ss += w(j) * (xs[j] - mean) * (xs[j] - mean);
    const double var = ss / (plugin ? nn : nn - 1.0);
    e.sigma2 = cfg_.symmetric ? var : 2.0 * var;

    std::vector<double> re(kk_, 0.0), im(cfg_.symmetric ? 0 : kk_, 0.0);
    std::vector<double> cos_row, sin_row;
    for (std::size_t j = 0; j < n_; ++j) {
      const double wj = w(j);
      if (wj == 0.0) continue;
      const double* c;
      const double* s = nullptr;
      if (!cos_.empty()) {
        c = &cos_[j * kk_];
        if (!cfg_.symmetric) s = &sin_[j * kk_];
      } else {
        cos_row.resize(kk_);
        sin_row.resize(kk_);
        for (std::size_t k = 0; k < kk_; ++k) {
          const double arg = grid_[k] * xs[j];
          cos_row[k] = std::cos(arg);
          if (!cfg_.symmetric) sin_row[k] = std::sin(arg);
        }
        c = cos_row.data();
        s = sin_row.data();
      }
      for (std::size_t k = 0; k < kk_; ++k) re[k] += wj * c[k];
      if (!cfg_.symmetric) {
        for (std::size_t k = 0; k < kk_; ++k) im[k] += wj * s[k];
      }
    }
    e.h.resize(kk_);
    for (std::size_t k = 0; k < kk_; ++k) {
      const double fr = re[k] / nn;
      if (cfg_.symmetric) {
        e.h[k] = fr;
      } else {
        const double fi = im[k] / nn;
        const double mod2 = fr * fr + fi * fi;
        e.h[k] = plugin ? mod2 : (nn * mod2 - 1.0) / (nn - 1.0);
      }
    }

    if (cfg_.enabled(Statistic::t3)) {
      auto& d = e.deficits[static_cast<int>(Statistic::t3)];
      d.resize(kk_);
      for (std::size_t k = 0; k < kk_; ++k) {
        d[k] = std::exp(-e.sigma2 * grid_[k] * grid_[k] / 2.0) - e.h[k];
      }
    }
    if (cfg_.enabled(Statistic::t4)) {
      auto& d = e.deficits[static_cast<int>(Statistic::t4)];
      d.reserve(pairs_.size());
      for (auto [k, half] : pairs_) d.push_back(clamp01_pow4(e.h[half]) - e.h[k]);
    }
    if (cfg_.enabled(Statistic::t2) && !t2_index_.empty()) {
      auto& d = e.deficits[static_cast<int>(Statistic::t2)];
      const int m = *cfg_.m_hypothesis;
      const double scale = std::sqrt(e.sigma2) / std::sqrt(static_cast<double>(m));
      for (std::size_t k : t2_index_) {
        d.push_back(power_cf(std::cos(scale * grid_[k]), m) - e.h[k]);
      }
    }
    if (cfg_.enabled(Statistic::tmom)) {
      if (counts.empty()) {
        e.tmom = stat_tmom(sample_, cfg_.r_order, cfg_.max_pairs, pair_stream, cfg_.symmetric);
        if (plugin && !cfg_.symmetric) {
          // All n^2 pairs, the n diagonal ones being 0.
          const double shrink = (nn - 1.0) / nn;
          e.tmom.moment *= shrink;
          e.tmom.sigma *= std::sqrt(shrink);
          e.tmom.bound = gaussian_abs_moment(e.tmom.sigma, cfg_.r_order);
          e.tmom.deficit = e.tmom.moment - e.tmom.bound;
          e.tmom.value = std::max(0.0, e.tmom.deficit);
        }
      } else {
        std::vector<double> vals;
        vals.reserve(n_);
        for (std::size_t j = 0; j < n_; ++j) {
          for (std::uint32_t c = 0; c < counts[j]; ++c) vals.push_back(xs[j]);
        }
        e.tmom = stat_tmom(Sample(std::move(vals)), cfg_.r_order, cfg_.max_pairs,
                           pair_stream, cfg_.symmetric);
      }
    }
    return e;
  }

  /// Multinomial resampling counts for replicate b (1-based).
  [[nodiscard]] std::vector<std::uint32_t> resample_counts(std::size_t b) const {
    Stream rs = Stream(cfg_.seed).split(b).split(0);
    std::vector<std::uint32_t> counts(n_, 0);
    for (std::size_t i = 0; i < n_; ++i) ++counts[rs.below(n_)];
    return counts;
  }

  [[nodiscard]] Stream pair_stream(std::size_t b) const {
    return Stream(cfg_.seed).split(b).split(1);
  }

  /// Observed statistic values and, for each enabled statistic, B recentered
  /// bootstrap values.
  struct Run {
    Eval observed;
    std::array<double, 4> value{};
    std::array<std::vector<double>, 4> boot;
  };

  [[nodiscard]] Run run(unsigned threads) const {
    Run out;
    out.observed = evaluate({}, pair_stream(0));
    const auto& obs = out.observed;
    const Eval center = evaluate({}, pair_stream(0), true);
    for (auto s : kAllStatistics) {
      if (!cfg_.enabled(s)) continue;
      const int i = static_cast<int>(s);
      if (s == Statistic::tmom) {
        out.value[i] = obs.tmom.value;
      } else {
        double best = 0.0;
        for (double d : obs.deficits[i]) best = std::max(best, d);
        out.value[i] = best;
      }
      if (degenerate_) out.value[i] = 0.0;
      out.boot[i].assign(static_cast<std::size_t>(cfg_.bootstrap_B), 0.0);
    }
    if (degenerate_) return out;

    parallel_for(static_cast<std::size_t>(cfg_.bootstrap_B), threads, [&](std::size_t b) {
      const auto counts = resample_counts(b + 1);
      const Eval rep = evaluate(counts, pair_stream(b + 1));
      for (auto s : kAllStatistics) {
        if (!cfg_.enabled(s)) continue;
        const int i = static_cast<int>(s);
        double tb = 0.0;
        if (s == Statistic::tmom) {
          tb = std::max(0.0, rep.tmom.deficit - center.tmom.deficit);
        } else {
          const auto& dr = rep.deficits[i];
          const auto& d0 = center.deficits[i];
          for (std::size_t k = 0; k < dr.size(); ++k) tb = std::max(tb, dr[k] - d0[k]);
        }
        out.boot[i][b] = tb;
      }
    });
    return out;
  }

  [[nodiscard]] const TGrid& grid() const { return grid_; }
  [[nodiscard]] double sigma2_hat() const { return sigma2_hat_; }
  [[nodiscard]] bool degenerate() const { return degenerate_; }
  [[nodiscard]] const std::vector<std::string>& warnings() const { return warnings_; }
  [[nodiscard]] const std::vector<std::pair<std::size_t, std::size_t>>& t4_pairs() const {
    return pairs_;
  }
  [[nodiscard]] const std::vector<std::size_t>& t2_index() const { return t2_index_; }
  [[nodiscard]] double t2_support_radius() const { return t2_A_; }
  [[nodiscard]] double t2_half_width() const { return t2_half_width_; }

 private:
  const Sample& sample_;
  TestConfig cfg_;
  std::size_t n_ = 0;
  std::size_t kk_ = 0;
  double sigma2_hat_ = 0.0;
  bool degenerate_ = false;
  TGrid grid_;
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;
  std::vector<std::size_t> t2_index_;
  double t2_A_ = 0.0;
  double t2_half_width_ = 0.0;
  std::vector<double> cos_, sin_;
  std::vector<std::string> warnings_;
};

inline double bootstrap_p(double observed, std::span<const double> boot) {
  std::size_t exceed = 0;
  for (double v : boot) exceed += v >= observed ? 1 : 0;
  return static_cast<double>(1 + exceed) / static_cast<double>(boot.size() + 1);
}

/// Order statistic ceil((1 - level)(B + 1)) of the bootstrap values, capped at B.
inline double bootstrap_critical(std::vector<double> boot, double level) {
  if (boot.empty()) return 0.0;
  std::sort(boot.begin(), boot.end());
  const double pos = std::ceil((1.0 - level) * static_cast<double>(boot.size() + 1) - 1e-9);
  const std::size_t q =
      std::clamp<std::size_t>(static_cast<std::size_t>(pos), 1, boot.size());
  return boot[q - 1];
}

}  // namespace detail

/// Recentered nonparametric bootstrap p-value of one statistic:
/// T*_b = max_t (d*_b(t) - d(t))_+ (TMOM: (D*_b - D)_+) and
/// p = (1 + #{T*_b >= T}) / (B + 1), where d is the deficit of the empirical
/// law (plug-in |f_n|^2 and divisor-n variance): E*[h*] equals |f_n|^2, not
/// the unbiased h, so centering at h would shift T* down by O(1/n). Replicate b draws from stream b of the
/// master seed, so results match run_test and do not depend on `threads`.
inline BootstrapResult bootstrap_pvalue(const Sample& sample, Statistic stat,
                                        const TestConfig& config, unsigned threads = 1) {
  TestConfig cfg = config;
  if (stat == Statistic::t2) {
    detail::require(config.m_hypothesis.has_value(), "T2 requires an m hypothesis");
    // validate() insists on one ID statistic; T2 rides along with T3.
    cfg.statistics = {Statistic::t3};
  } else {
    cfg.statistics = {stat};
    cfg.m_hypothesis.reset();
  }
  detail::Engine engine(sample, cfg);
  auto run = engine.run(threads);
  const int i = static_cast<int>(stat);
  BootstrapResult out;
  out.observed = run.value[i];
  out.boot_values = std::move(run.boot[i]);
  out.p_value = detail::bootstrap_p(out.observed, out.boot_values);
  out.critical_value = detail::bootstrap_critical(out.boot_values, cfg.alpha);
  return out;
}

inline constexpr std::string_view kRejectWording =
    "Reject infinite divisibility: a necessary condition for infinite "
    "divisibility is violated at the stated level.";
inline constexpr std::string_view kNoEvidenceWording =
    "No evidence against infinite divisibility at the stated level. The "
    "conditions tested are necessary, not sufficient: this does not "
    "establish infinite divisibility.";

/// Runs every enabled statistic with its bootstrap p-value and combines the
/// infinite-divisibility statistics (T3, T4, TMOM) by Bonferroni. T2, when
/// an m hypothesis is set, is reported with its own decision.
inline TestReport run_test(const Sample& sample, const TestConfig& config,
                           unsigned threads = 1) {
  detail::Engine engine(sample, config);
  const auto run = engine.run(threads);

  TestReport rep;
  rep.config = config;
  rep.n = sample.size();
  rep.sigma2_hat = engine.sigma2_hat();
  rep.grid_max = engine.grid().t_max();
  rep.grid_size = engine.grid().size();
  rep.warnings = engine.warnings();

  std::size_t id_count = 0;
  for (auto s : {Statistic::t3, Statistic::t4, Statistic::tmom}) {
    id_count += config.enabled(s) ? 1 : 0;
  }
  const double k_adj = static_cast<double>(id_count);

  double min_adj = 1.0;
  for (auto s : kAllStatistics) {
    if (!config.enabled(s)) continue;
    const int i = static_cast<int>(s);
    StatisticResult r;
    r.name = to_string(s);
    r.observed = run.value[i];
    r.p_value = detail::bootstrap_p(r.observed, run.boot[i]);
    const bool is_id_stat = s != Statistic::t2;
    r.adjusted_p_value = is_id_stat ? std::min(1.0, r.p_value * k_adj) : r.p_value;
    r.level = is_id_stat ? config.alpha / k_adj : config.alpha;
    r.critical_value = detail::bootstrap_critical(run.boot[i], r.level);

    const auto& obs = run.observed;
    if (s == Statistic::tmom) {
      r.deficits = {obs.tmom.deficit};
      r.extras = {{"r", config.r_order},
                  {"moment", obs.tmom.moment},
                  {"gaussian_bound", obs.tmom.bound},
                  {"sigma", obs.tmom.sigma}};
    } else {
      const auto& g = engine.grid();
      r.deficits = obs.deficits[i];
      if (s == Statistic::t3) {
        r.t.assign(g.points().begin(), g.points().end());
      } else if (s == Statistic::t4) {
        for (auto [k, half] : engine.t4_pairs()) r.t.push_back(g[k]);
      } else {
        for (std::size_t k : engine.t2_index()) r.t.push_back(g[k]);
        r.extras = {{"m", static_cast<double>(*config.m_hypothesis)},
                    {"support_radius", engine.t2_support_radius()},
                    {"validity_half_width", engine.t2_half_width()}};
      }
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < r.deficits.size(); ++k) {
        if (r.deficits[k] > best) {
          best = r.deficits[k];
          r.argmax_t = r.t[k];
        }
      }
    }
    if (is_id_stat) {
      min_adj = std::min(min_adj, r.adjusted_p_value);
    } else {
      rep.reject_m_divisible = r.p_value < config.alpha;
    }
    rep.statistics.push_back(std::move(r));
  }

  rep.decision = min_adj < config.alpha ? Decision::reject_id : Decision::no_evidence_against_id;
  rep.conclusion = std::string(rep.decision == Decision::reject_id ? kRejectWording
                                                                   : kNoEvidenceWording);
  return rep;
}

struct PowerRow {
  std::string dist;
  std::size_t n = 0;
  std::string statistic;  // statistic name, or "combined" for the decision
  std::size_t reps = 0;
  std::size_t rejections = 0;
  double rate = 0.0;
  double se = 0.0;  // Monte Carlo standard error sqrt(rate (1 - rate) / reps)

  bool operator==(const PowerRow&) const = default;
};

/// Seeds of Monte Carlo repetition `rep` at sample size n: {data, test}.
inline std::pair<std::uint64_t, std::uint64_t> power_study_seeds(std::uint64_t master,
                                                                 std::size_t n,
                                                                 std::size_t rep) {
  const Stream s = Stream(master).split(n).split(rep);
  return {s.at(0), s.at(1)};
}

/// Rejection rates over `reps` seeded repetitions for each n. A statistic
/// counts as rejecting when its adjusted p-value is below alpha (T2: its own
/// p-value); "combined" is the test decision.
inline std::vector<PowerRow> power_study(const RefDist& dist, std::span<const std::size_t> n_list,
                                         const TestConfig& config, std::size_t reps,
                                         unsigned threads = 1) {
  config.validate();
  std::vector<PowerRow> rows;
  if (reps == 0) return rows;
  for (std::size_t n : n_list) {
    detail::require(n >= 2, "power_study: n must be >= 2");
    std::vector<TestReport> reports(reps);
    parallel_for(reps, threads, [&](std::size_t i) {
      const auto [data_seed, test_seed] = power_study_seeds(config.seed, n, i);
      TestConfig cfg = config;
      cfg.seed = test_seed;
      reports[i] = run_test(sample(dist, n, data_seed), cfg, 1);
    });
    std::vector<std::string> names;
    for (const auto& s : reports.front().statistics) names.push_back(s.name);
    names.push_back("combined");
    for (const auto& name : names) {
      PowerRow row;
      row.dist = dist.name;
      row.n = n;
      row.statistic = name;
      row.reps = reps;
      for (const auto& r : reports) {
        bool rej;
        if (name == "combined") {
          rej = r.decision == Decision::reject_id;
        } else {
          const auto* s = r.find(name);
          rej = s->adjusted_p_value < config.alpha;
        }
        row.rejections += rej ? 1 : 0;
      }
      row.rate = static_cast<double>(row.rejections) / static_cast<double>(reps);
      row.se = std::sqrt(row.rate * (1.0 - row.rate) / static_cast<double>(reps));
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

inline std::vector<PowerRow> power_study(std::string_view dist_name,
                                         std::span<const std::size_t> n_list,
                                         const TestConfig& config, std::size_t reps,
                                         unsigned threads = 1) {
  return power_study(make_dist(dist_name), n_list, config, reps, threads);
}

}  // namespace idcf
