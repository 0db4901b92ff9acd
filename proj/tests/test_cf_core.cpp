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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "idcf/cf_core.hpp"
#include "idcf/refdist.hpp"

namespace idcf {
namespace {

/// Brute-force U-statistic (1/(n(n-1))) sum_{i != j} cos(t (x_i - x_j)).
double pairwise_oracle(const std::vector<double>& x, double t) {
  const std::size_t n = x.size();
  long double s = 0.0L;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) s += std::cos(t * (x[i] - x[j]));
    }
  }
  return static_cast<double>(s / (static_cast<long double>(n) * (n - 1)));
}

TEST(Grid, UniformPartition) {
  const auto g = make_grid(1.0, 3);
  ASSERT_EQ(g.size(), 3u);
  EXPECT_EQ(g[0], 0.0);
  EXPECT_EQ(g[1], 0.5);
  EXPECT_EQ(g[2], 1.0);
  const auto e = make_grid(std::numbers::pi, 2);
  EXPECT_EQ(e[0], 0.0);
  EXPECT_EQ(e[1], std::numbers::pi);
}

TEST(Grid, SpacingOfFineGrid) {
  const auto g = make_grid(4.49, 450);
  ASSERT_EQ(g.size(), 450u);
  EXPECT_NEAR(g[1] - g[0], 0.01, 1e-4);
  EXPECT_EQ(g.t_max(), 4.49);
}

TEST(Grid, RejectsBadArguments) {
  EXPECT_THROW(make_grid(std::nan(""), 5), invalid_argument);
  EXPECT_THROW(make_grid(INFINITY, 5), invalid_argument);
  EXPECT_THROW(make_grid(1.0, 1), invalid_argument);
  EXPECT_THROW(make_grid(-1.0, 5), invalid_argument);
  EXPECT_THROW(TGrid::from_points({0.0, 0.0}), invalid_argument);
}

TEST(Grid, DyadicHalvesAreExactGridPoints) {
  const auto g = make_dyadic_grid(7.3, 256);
  EXPECT_EQ(g.size(), 257u);
  for (std::size_t k = 0; k < g.size(); k += 2) {
    EXPECT_EQ(g.find(g[k] / 2.0), k / 2) << "k=" << k;
  }
}

TEST(Ecf, PointMassAtZero) {
  const auto e = ecf(Sample({0.0, 0.0, 0.0}), make_grid(5.0, 11));
  for (const auto& z : e.complex_values) {
    EXPECT_EQ(z.real(), 1.0);
    EXPECT_EQ(z.imag(), 0.0);
  }
}

TEST(Ecf, TwoPointIsCosine) {
  const auto g = TGrid::from_points({0.0, std::numbers::pi});
  const auto e = ecf(Sample({-1.0, 1.0}), g);
  EXPECT_NEAR(e.complex_values[1].real(), -1.0, 1e-15);
  EXPECT_NEAR(e.complex_values[1].imag(), 0.0, 1e-15);
}

TEST(Ecf, UniformSampleNearAnalyticValue) {
  const auto x = sample(make_dist("uniform"), 10000, 3);
  const auto e = ecf(x, TGrid::from_points({0.0, 2.0}));
  const double se = 1.0 / std::sqrt(10000.0);
  EXPECT_NEAR(e.complex_values[1].real(), std::sin(2.0) / 2.0, 3.0 * se);
}

TEST(Ecf, ValueAtZeroIsExactlyOne) {
  const auto x = sample(make_dist("laplace"), 137, 11);
  const auto e = ecf(x, make_grid(3.0, 7));
  EXPECT_EQ(e.complex_values[0].real(), 1.0);
  EXPECT_EQ(e.complex_values[0].imag(), 0.0);
  EXPECT_EQ(e.sym_values[0], 1.0);
}

TEST(Ecf, ModulusAndSymmetrizedRange) {
  const auto x = sample(make_dist("gaussian", 3.0), 40, 5);
  const auto e = ecf(x, make_grid(10.0, 200));
  const double n = 40.0;
  for (std::size_t k = 0; k < e.grid.size(); ++k) {
    EXPECT_LE(std::abs(e.complex_values[k]), 1.0 + 1e-12);
    EXPECT_GE(e.sym_values[k], -1.0 / (n - 1.0) - 1e-12);
    EXPECT_LE(e.sym_values[k], 1.0 + 1e-12);
  }
}

TEST(Ecf, SymmetricSampleHasRealCf) {
  std::vector<double> v = {0.3, 1.7, 2.2, 5.0, 0.01};
  const std::size_t half = v.size();
  for (std::size_t i = 0; i < half; ++i) v.push_back(-v[i]);
  const auto e = ecf(Sample(v), make_grid(20.0, 101));
  for (const auto& z : e.complex_values) EXPECT_LE(std::fabs(z.imag()), 1e-12);
}

TEST(Ecf, RejectsEmptySample) {
  EXPECT_THROW(ecf(Sample(), make_grid(1.0, 2)), invalid_argument);
}

TEST(Symmetrize, SinglePairIsCosineOfDifference) {
  const double a = 0.7, b = -1.9;
  const auto g = make_grid(6.0, 13);
  const auto e = ecf(Sample({a, b}), g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    EXPECT_NEAR(e.sym_values[k], std::cos(g[k] * (a - b)), 1e-12);
  }
}

TEST(Symmetrize, ThreePointsAtPi) {
  const auto e = ecf(Sample({0.0, 1.0, 2.0}), TGrid::from_points({std::numbers::pi}));
  EXPECT_NEAR(e.sym_values[0], -1.0 / 3.0, 1e-12);
  EXPECT_NEAR(pairwise_oracle({0.0, 1.0, 2.0}, std::numbers::pi), -1.0 / 3.0, 1e-12);
}

TEST(Symmetrize, MatchesBruteForceOnRandomSamples) {
  std::mt19937_64 gen(2024);
  std::uniform_int_distribution<int> size(2, 30);
  std::normal_distribution<double> value(0.0, 2.0);
  std::uniform_real_distribution<double> tdist(-6.0, 6.0);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> x(static_cast<std::size_t>(size(gen)));
    for (auto& v : x) v = value(gen);
    std::vector<double> ts(20);
    for (auto& t : ts) t = tdist(gen);
    std::sort(ts.begin(), ts.end());
    const auto e = ecf(Sample(x), TGrid::from_points(ts));
    for (std::size_t k = 0; k < ts.size(); ++k) {
      EXPECT_NEAR(e.sym_values[k], pairwise_oracle(x, ts[k]), 1e-12);
    }
  }
}

TEST(Symmetrize, EvenInT) {
  const auto x = sample(make_dist("laplace"), 25, 9);
  const auto pos = ecf(x, TGrid::from_points({0.5, 1.25, 3.0}));
  const auto neg = ecf(x, TGrid::from_points({-3.0, -1.25, -0.5}));
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_NEAR(pos.sym_values[k], neg.sym_values[2 - k], 1e-14);
  }
}

TEST(Symmetrize, NeedsTwoObservations) {
  const std::vector<std::complex<double>> z = {{1.0, 0.0}};
  EXPECT_THROW(symmetrize_ecf(z, 1), invalid_argument);
}

TEST(Moments, TwoPointValues) {
  const std::vector<double> orders = {2.0, 0.5};
  const auto m = moments(Sample({-1.0, 1.0}), orders, false);
  EXPECT_DOUBLE_EQ(m.a_frac.at(2.0), 1.0);
  EXPECT_DOUBLE_EQ(m.a_frac.at(0.5), 1.0);
}

TEST(Moments, ZeroToAPowerIsZero) {
  const std::vector<double> orders = {0.3};
  const auto m = moments(Sample({0.0, 0.0, 2.0}), orders, false);
  EXPECT_NEAR(m.a_frac.at(0.3), std::pow(2.0, 0.3) / 3.0, 1e-15);
}

TEST(Moments, GaussianFourthMoment) {
  const auto x = sample(make_dist("gaussian"), 100000, 1);
  const std::vector<double> orders = {4.0};
  const auto m = moments(x, orders, true);
  EXPECT_NEAR(m.a_frac.at(4.0), 3.0, 0.15);
}

TEST(Moments, LyapunovOrdering) {
  for (const char* name : {"gaussian", "laplace", "uniform", "sympoisson"}) {
    const auto x = sample(make_dist(name), 500, 4);
    const std::vector<double> orders = {0.5, 1.0, 1.5, 2.0, 3.0};
    const auto m = moments(x, orders, true);
    double prev = 0.0;
    for (double r : orders) {
      const double norm = std::pow(m.a_frac.at(r), 1.0 / r);
      EXPECT_GE(norm, prev * (1.0 - 1e-9)) << name << " r=" << r;
      prev = norm;
    }
    EXPECT_GE(std::pow(m.a4, 0.25), prev * (1.0 - 1e-9));
    EXPECT_GE(std::pow(m.a5, 0.2), std::pow(m.a4, 0.25) * (1.0 - 1e-9));
    EXPECT_GE(std::pow(m.a10, 0.1), std::pow(m.a5, 0.2) * (1.0 - 1e-9));
  }
}

TEST(PairwiseDifferences, BothOrderedPairs) {
  const auto d = pairwise_difference_sample(Sample({0.0, 1.0}), 2, Stream(1));
  std::vector<double> v(d.values().begin(), d.values().end());
  std::sort(v.begin(), v.end());
  EXPECT_EQ(v, (std::vector<double>{-1.0, 1.0}));
}

TEST(PairwiseDifferences, ExhaustiveForThreePoints) {
  const auto d = pairwise_difference_sample(Sample({0.0, 1.0, 3.0}), 6, Stream(1));
  std::vector<double> v(d.values().begin(), d.values().end());
  std::sort(v.begin(), v.end());
  EXPECT_EQ(v, (std::vector<double>{-3.0, -2.0, -1.0, 1.0, 2.0, 3.0}));
}

TEST(PairwiseDifferences, SeededSubsetIsReproducible) {
  const auto x = sample(make_dist("gaussian"), 100, 8);
  const auto a = pairwise_difference_sample(x, 500, Stream(77));
  const auto b = pairwise_difference_sample(x, 500, Stream(77));
  const auto c = pairwise_difference_sample(x, 500, Stream(78));
  EXPECT_EQ(a.size(), 500u);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
}

TEST(PairwiseDifferences, RejectsZeroPairs) {
  EXPECT_THROW(pairwise_difference_sample(Sample({0.0, 1.0}), 0, Stream(1)), invalid_argument);
}

TEST(Sample, RejectsNonFiniteValues) {
  EXPECT_THROW(Sample({1.0, std::nan("")}), invalid_argument);
  EXPECT_THROW(Sample({INFINITY}), invalid_argument);
}

TEST(Rng, SplitStreamsAreIndependentOfOrder) {
  const Stream root(42);
  const auto a = root.split(3).at(10);
  Stream other(42);
  (void)other.next();
  EXPECT_EQ(other.split(3).at(10), a);
  EXPECT_NE(root.split(4).at(10), a);
}

TEST(Rng, UniformRanges) {
  Stream s(9);
  for (int i = 0; i < 10000; ++i) {
    const double u = s.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    const double p = s.uniform_pos();
    EXPECT_GT(p, 0.0);
    EXPECT_LE(p, 1.0);
    EXPECT_LT(s.below(7), 7u);
  }
}

}  // namespace
}  // namespace idcf
