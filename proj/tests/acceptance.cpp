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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "idcf.hpp"
#include "idcf/cli.hpp"

namespace {

using namespace idcf;
using Clock = std::chrono::steady_clock;
constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

unsigned worker_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

// 1. z0: residual, bound 4.49 < z0, bisection oracle, runtime.
Outcome root_fidelity() {
  double lo = kPi, hi = 1.5 * kPi;
  auto f = [](double z) { return std::sin(z) - z * std::cos(z); };
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    ((f(mid) > 0.0) == (f(lo) > 0.0) ? lo : hi) = mid;
  }
  const double oracle = 0.5 * (lo + hi);
  const int runs = 1000;
  RootResult z{};
  const auto start = Clock::now();
  for (int i = 0; i < runs; ++i) z = root_z0();
  const double per_call = seconds_since(start) / runs;
  const bool ok = std::fabs(z.residual) <= 1e-12 && z.value > 4.49 &&
                  std::fabs(z.value - oracle) <= 1e-10 && per_call < 1e-3;
  return {ok, fmt("z0=%.15f residual=%.1e |z0-bisection|=%.1e time=%.2es", z.value, z.residual,
                  std::fabs(z.value - oracle), per_call)};
}

// 2. Zero-noise sweeps of the Gaussian-envelope and halving inequalities.
Outcome analytic_sweeps() {
  const auto start = Clock::now();
  bool ok = true;
  std::string detail;
  for (const auto& d : registry()) {
    const auto c3 = th3_lower(d.sigma2);
    double w3 = -INFINITY, w4 = -INFINITY;
    for (int k = 0; k < 2000; ++k) {
      const double t = -10.0 + 20.0 * k / 1999.0;
      w3 = std::max(w3, c3.deficit(t, d.cf(t)));
      w4 = std::max(w4, th4_deficit(d.cf(t), d.cf(t / 2.0)));
    }
    if (d.divisibility == Divisibility::infinitely_divisible) {
      ok = ok && w3 <= 1e-12 && w4 <= 1e-12;
      detail += fmt("%s max(d3,d4)=%.1e ", d.name.c_str(), std::max(w3, w4));
    } else if (d.family == Family::uniform || d.family == Family::rademacher) {
      ok = ok && std::max(w3, w4) >= 0.1;
      detail += fmt("%s max(d3,d4)=%.3f ", d.name.c_str(), std::max(w3, w4));
    }
  }
  const auto u = make_dist("uniform");
  const double d_pi = th3_lower(u.sigma2).deficit(kPi, u.cf(kPi));
  const double err = std::fabs(d_pi - std::exp(-kPi * kPi / 6.0));
  const double secs = seconds_since(start);
  ok = ok && err <= 1e-9 && secs < 1.0;
  return {ok, detail + fmt("uniform d3(pi)=%.9f err=%.1e time=%.3fs", d_pi, err, secs)};
}

// 3. Compact-support sandwich and two-point equality cases.
Outcome compact_support() {
  const auto start = Clock::now();
  const auto u = make_dist("uniform");
  const auto lower = th1_lower(std::sqrt(u.sigma2), 1.0);
  const auto upper = th21_upper(u.abs_moment(0.5), 2.0, 1.0);
  double worst = -INFINITY;
  for (int k = 0; k < 1000; ++k) {
    const double tl = lower.t_hi() * k / 1000.0;  // open interval: k < 1000
    worst = std::max(worst, lower.deficit(tl, u.cf(tl)));
    const double tu = upper.t_hi() * k / 1000.0;
    worst = std::max(worst, upper.deficit(tu, u.cf(tu)));
  }
  double eq = 0.0;
  const double s = 0.7;
  const auto two = make_dist("rademacher", s);
  const auto c1 = th1_lower(s, s);
  const auto c21 = th21_upper(std::sqrt(s), 2.0, s);
  const int m = 5;
  const auto sum = make_dist("binomsym", s, m);
  const auto c2 = th2_lower(std::sqrt(sum.sigma2), *sum.support_radius, m);
  for (int k = 0; k < 1000; ++k) {
    double t = c1.t_hi() * k / 1000.0;
    eq = std::max(eq, std::fabs(c1.deficit(t, two.cf(t))));
    t = c21.t_hi() * k / 1000.0;
    eq = std::max(eq, std::fabs(c21.deficit(t, two.cf(t))));
    t = c2.t_hi() * k / 999.0;
    eq = std::max(eq, std::fabs(c2.deficit(t, sum.cf(t))));
  }
  const double secs = seconds_since(start);
  const bool ok = worst <= 1e-12 && eq <= 1e-14 && secs < 1.0;
  return {ok, fmt("uniform max violation=%.2e (upper a_1/2=%.6f) two-point |deficit|max=%.1e "
                  "time=%.3fs",
                  worst, u.abs_moment(0.5), eq, secs)};
}

// 4. cos^m(sigma t / sqrt m) nondecreasing in m.
Outcome th2_monotone() {
  const auto start = Clock::now();
  const double sigma = 1.3, A = 1.5;
  const double half = th2_lower(sigma, A, 1).t_hi();  // contained in every m's interval
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double t = half * k / 99.0;
    double prev = -INFINITY;
    for (int m = 1; m <= 64; ++m) {
      const auto c = th2_lower(sigma, A, m);
      if (!c.in_validity(t)) return {false, fmt("t=%.3f outside validity at m=%d", t, m)};
      const double v = c.value(t);
      worst = std::max(worst, prev - v);
      prev = v;
    }
  }
  const double secs = seconds_since(start);
  return {worst <= 1e-12 && secs < 1.0,
          fmt("largest decrease=%.1e over m=1..64, 100 points, time=%.3fs", worst, secs)};
}

// 5. Iterated halving inequality converges down to the Gaussian envelope.
Outcome iterated_th4() {
  const auto start = Clock::now();
  const auto p = make_dist("sympoisson", 1.0);
  bool ok = true;
  std::string detail;
  for (double t : {0.5, 1.0, 2.0}) {
    double prev = INFINITY;
    bool mono = true;
    double v = 0.0;
    for (int k = 0; k <= 12; ++k) {
      v = iterate_th4(p, t, k);
      mono = mono && v <= prev;
      prev = v;
    }
    const double err = std::fabs(v - std::exp(-p.sigma2 * t * t / 2.0));
    ok = ok && mono && err <= 1e-4;
    detail += fmt("t=%.1f err=%.1e monotone=%d ", t, err, mono ? 1 : 0);
  }
  const double secs = seconds_since(start);
  return {ok && secs < 1.0, detail + fmt("time=%.3fs", secs)};
}

// 6. C_r identity on two-point and Gaussian CFs.
Outcome fractional_moments() {
  const auto start = Clock::now();
  double worst_two = 0.0, worst_gauss = 0.0;
  for (double r : {0.25, 0.5, 1.0, 1.5, 1.75}) {
    for (double c : {0.5, 1.0, 2.0}) {
      const double T = 2.0 * kPi * 1000.0 / c;
      const auto fm = fractional_moment_via_cf([c](double t) { return std::cos(c * t); }, r, T);
      worst_two = std::max(worst_two, std::fabs(fm.value - std::pow(c, r)));
    }
    const auto g = fractional_moment_via_cf([](double t) { return std::exp(-t * t / 2.0); }, r,
                                            40.0);
    worst_gauss = std::max(worst_gauss, std::fabs(g.value - gaussian_abs_moment(1.0, r)));
  }
  const double secs = seconds_since(start);
  return {worst_two <= 1e-6 && worst_gauss <= 1e-6 && secs < 5.0,
          fmt("two-point err=%.1e gaussian err=%.1e time=%.3fs", worst_two, worst_gauss, secs)};
}

// 7. Size at n = 500 for the infinitely divisible laws.
Outcome test_size() {
  const auto start = Clock::now();
  TestConfig cfg;  // B = 199, alpha = 0.05, T3 + T4
  const std::vector<std::size_t> ns = {500};
  bool ok = true;
  std::string detail;
  for (const char* name : {"gaussian", "laplace", "sympoisson"}) {
    const auto rows = power_study(name, ns, cfg, 200, worker_threads());
    const double rate = rows.back().rate;  // combined decision
    ok = ok && rate >= 0.0 && rate <= 0.09;
    detail += fmt("%s=%.3f ", name, rate);
  }
  const double secs = seconds_since(start);
  return {ok && secs < 300.0, detail + fmt("time=%.1fs", secs)};
}

// 8. Power against Uniform and its growth in n.
Outcome test_power() {
  const auto start = Clock::now();
  TestConfig cfg;
  const std::vector<std::size_t> ns = {250, 500, 1000, 2000};
  const auto rows = power_study("uniform", ns, cfg, 100, worker_threads());
  std::vector<double> rates;
  for (const auto& r : rows) {
    if (r.statistic == "combined") rates.push_back(r.rate);
  }
  bool mono = true;
  for (std::size_t i = 1; i < rates.size(); ++i) mono = mono && rates[i] >= rates[i - 1] - 0.05;
  const double secs = seconds_since(start);
  const bool ok = rates.size() == 4 && rates.back() >= 0.90 && mono && secs < 300.0;
  return {ok, fmt("rates n=250:%.2f 500:%.2f 1000:%.2f 2000:%.2f time=%.1fs", rates[0], rates[1],
                  rates[2], rates[3], secs)};
}

std::string run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "idcf");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return std::to_string(code) + "\n" + out.str();
}

// 9. Byte-identical output for any thread count.
Outcome determinism() {
  const std::vector<std::vector<std::string>> commands = {
      {"test", "--dist", "laplace", "--n", "400", "--stats", "t3,t4,tmom", "--m", "2"},
      {"test", "--dist", "uniform", "--n", "500", "--format", "csv"},
      {"simulate", "--dist", "sympoisson", "--n", "100,200", "--reps", "8", "--B", "99"},
      {"simulate", "--dist", "gaussian", "--n", "150", "--reps", "4", "--format", "json"},
      {"bounds", "--dist", "uniform", "--th", "21"},
      {"moments", "--dist", "gaussian", "--n", "300", "--r", "0.5,1,1.5"},
      {"roots"},
  };
  int identical = 0;
  for (const auto& cmd : commands) {
    std::vector<std::string> outputs;
    for (const char* threads : {"1", "2", "4", "1"}) {
      auto args = cmd;
      if (cmd[0] != "roots") args.insert(args.end(), {"--threads", threads});
      outputs.push_back(run_cli(args));
    }
    bool same = true;
    for (const auto& o : outputs) same = same && o == outputs.front();
    identical += same ? 1 : 0;
  }
  return {identical == static_cast<int>(commands.size()),
          fmt("%d/%zu commands byte-identical across --threads 1,2,4 and reruns", identical,
              commands.size())};
}

// 10. Closed-form symmetrized ECF against the brute-force pair sum.
Outcome u_statistic_oracle() {
  const auto start = Clock::now();
  std::mt19937_64 gen(7);
  std::uniform_int_distribution<int> size(2, 30);
  std::normal_distribution<double> value(0.0, 1.5);
  std::uniform_real_distribution<double> tdist(0.0, 8.0);
  double worst = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> x(static_cast<std::size_t>(size(gen)));
    for (auto& v : x) v = value(gen);
    std::vector<double> ts(20);
    for (auto& t : ts) t = tdist(gen);
    std::sort(ts.begin(), ts.end());
    const auto e = ecf(Sample(x), TGrid::from_points(ts));
    const double n = static_cast<double>(x.size());
    for (std::size_t k = 0; k < ts.size(); ++k) {
      long double s = 0.0L;
      for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = 0; j < x.size(); ++j) {
          if (i != j) s += std::cos(ts[k] * (x[i] - x[j]));
        }
      }
      const double brute = static_cast<double>(s / (n * (n - 1.0)));
      worst = std::max(worst, std::fabs(e.sym_values[k] - brute));
    }
  }
  const double secs = seconds_since(start);
  return {worst <= 1e-12 && secs < 1.0, fmt("max |closed form - pair sum|=%.1e time=%.3fs", worst, secs)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"root fidelity", root_fidelity},
      {"analytic inequality sweeps", analytic_sweeps},
      {"compact-support bounds", compact_support},
      {"cos^m monotonicity in m", th2_monotone},
      {"iterated halving limit", iterated_th4},
      {"fractional-moment identity", fractional_moments},
      {"test size", test_size},
      {"test power", test_power},
      {"determinism", determinism},
      {"U-statistic oracle", u_statistic_oracle},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
