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

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "idcf/bounds.hpp"
#include "idcf/cf_core.hpp"
#include "idcf/csv.hpp"
#include "idcf/idtest.hpp"
#include "idcf/refdist.hpp"
#include "idcf/report.hpp"
#include "idcf/special.hpp"

namespace idcf::cli {

/// Process exit codes; stable for scripting.
enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kReject = 3 };

class usage_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string command;
  std::optional<std::string> input;
  std::size_t column = 1;
  std::optional<std::string> dist;
  std::optional<std::string> n;  // a list for simulate
  std::optional<double> scale;
  std::uint64_t seed = 42;
  std::string stats = "t3,t4";
  int B = 199;
  double alpha = 0.05;
  double grid_max = 0.0;
  std::size_t grid_points = 256;
  std::optional<int> m;
  std::string r = "1";
  bool symmetric = false;
  std::optional<double> support_radius;
  std::string th;
  double gamma = 2.0;
  bool sharp = false;
  unsigned threads = 1;
  std::size_t reps = 100;
  std::size_t max_pairs = 20000;
  std::optional<std::string> output;
  std::optional<std::string> format;
};

namespace detail {

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto t = idcf::detail::trim(item);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

inline std::vector<double> parse_doubles(const std::string& s, const char* flag) {
  std::vector<double> out;
  for (const auto& item : split_list(s)) {
    const auto v = idcf::detail::parse_number(item);
    if (!v) throw usage_error(std::string(flag) + ": not a number: '" + item + "'");
    out.push_back(*v);
  }
  if (out.empty()) throw usage_error(std::string(flag) + ": empty list");
  return out;
}

inline std::vector<std::size_t> parse_sizes(const std::string& s, const char* flag) {
  std::vector<std::size_t> out;
  for (double v : parse_doubles(s, flag)) {
    if (!(v >= 1.0) || v != std::floor(v)) {
      throw usage_error(std::string(flag) + ": expected positive integers");
    }
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

inline std::string format_of(const Options& o, const char* fallback) {
  const std::string f = o.format.value_or(fallback);
  if (f != "json" && f != "csv") throw usage_error("--format must be json or csv");
  return f;
}

/// Writes to --output or the given stream.
template <class Fn>
void emit(const Options& o, std::ostream& out, Fn&& write) {
  if (o.output && *o.output != "-") {
    std::ofstream f(*o.output, std::ios::binary);
    if (!f) throw data_error(0, "cannot open output file '" + *o.output + "'");
    write(f);
  } else {
    write(out);
  }
}

struct DataSource {
  Sample sample;
  std::string label;
};

inline void check_source_flags(const Options& o) {
  if (o.input && o.dist) throw usage_error("give either --input or --dist, not both");
  if (!o.input && !o.dist) throw usage_error("a data source is required: --input or --dist");
}

/// Sample from --input or from the registry (--dist with --n).
inline DataSource load_sample(const Options& o, std::size_t min_n) {
  check_source_flags(o);
  DataSource src;
  if (o.input) {
    std::ifstream f(*o.input);
    if (!f) throw data_error(0, "cannot read input file '" + *o.input + "'");
    src.sample = Sample(read_numeric_column(f, o.column));
    src.label = *o.input;
  } else {
    if (!o.n) throw usage_error("--dist needs --n");
    const auto ns = parse_sizes(*o.n, "--n");
    if (ns.size() != 1) throw usage_error("--n takes a single value here");
    const RefDist d = make_dist(*o.dist, o.scale, o.m);
    src.sample = sample(d, ns.front(), o.seed);
    src.label = d.name;
  }
  if (src.sample.size() < min_n) {
    throw data_error(0, "need at least " + std::to_string(min_n) + " observations, got " +
                            std::to_string(src.sample.size()));
  }
  return src;
}

inline TestConfig test_config(const Options& o) {
  TestConfig c;
  c.grid_max = o.grid_max;
  c.grid_points = o.grid_points;
  c.statistics.clear();
  for (const auto& s : split_list(o.stats)) c.statistics.push_back(parse_statistic(s));
  const auto rs = parse_doubles(o.r, "--r");
  if (rs.size() != 1) throw usage_error("--r takes a single order for this command");
  c.r_order = rs.front();
  c.bootstrap_B = o.B;
  c.alpha = o.alpha;
  c.seed = o.seed;
  c.m_hypothesis = o.m;
  c.symmetric = o.symmetric;
  c.max_pairs = o.max_pairs;
  c.support_radius = o.support_radius;
  c.validate();
  return c;
}

}  // namespace detail

inline int cmd_test(const Options& o, std::ostream& out) {
  const TestConfig cfg = detail::test_config(o);
  const auto src = detail::load_sample(o, 20);
  const TestReport rep = run_test(src.sample, cfg, o.threads);
  const auto fmt = detail::format_of(o, "json");
  detail::emit(o, out, [&](std::ostream& os) {
    if (fmt == "json") {
      os << report_to_json(rep);
    } else {
      write_report_csv(os, rep);
    }
  });
  return rep.decision == Decision::reject_id ? kReject : kOk;
}

namespace detail {

/// The CF under inspection: analytic for registry laws, empirical otherwise.
struct CfSource {
  std::optional<RefDist> dist;
  std::optional<Sample> data;
  bool symmetric = false;
  double sigma2 = 0.0;
  std::optional<double> support_radius;
  std::size_t max_pairs = 20000;
  std::uint64_t seed = 42;

  [[nodiscard]] std::vector<double> values(const TGrid& grid) const {
    if (dist) return cf_eval(*dist, grid);
    const EmpiricalCF e = ecf(*data, grid);
    if (!symmetric) return e.sym_values;
    std::vector<double> out;
    for (const auto& z : e.complex_values) out.push_back(z.real());
    return out;
  }

  /// Absolute moments of the law the CF describes (pairwise differences for
  /// symmetrized data).
  [[nodiscard]] MomentSet moment_set(std::span<const double> extra) const {
    if (dist) {
      MomentSet m;
      m.sigma2 = dist->sigma2;
      m.a4 = dist->abs_moment(4);
      m.a5 = dist->abs_moment(5);
      m.a10 = dist->abs_moment(10);
      for (double r : extra) m.a_frac[r] = dist->abs_moment(r);
      return m;
    }
    if (symmetric) return moments(*data, extra, false);
    return moments(pairwise_difference_sample(*data, max_pairs, Stream(seed)), extra, false);
  }
};

inline CfSource cf_source(const Options& o) {
  check_source_flags(o);
  CfSource s;
  s.symmetric = o.symmetric;
  s.max_pairs = o.max_pairs;
  s.seed = o.seed;
  if (o.dist) {
    s.dist = make_dist(*o.dist, o.scale, o.m);
    s.sigma2 = s.dist->sigma2;
    s.support_radius = s.dist->support_radius;
  } else {
    auto src = load_sample(o, 2);
    s.sigma2 = o.symmetric ? src.sample.variance() : 2.0 * src.sample.variance();
    s.data = std::move(src.sample);
  }
  if (o.support_radius) s.support_radius = o.support_radius;
  return s;
}

}  // namespace detail

inline int cmd_bounds(const Options& o, std::ostream& out) {
  static const std::vector<std::string> kSelectors = {"1", "1a", "2", "2a", "3", "4", "21"};
  if (std::find(kSelectors.begin(), kSelectors.end(), o.th) == kSelectors.end()) {
    throw usage_error("--th must be one of 1, 1a, 2, 2a, 3, 4, 21");
  }
  const auto src = detail::cf_source(o);
  const bool needs_A = o.th == "1" || o.th == "2" || o.th == "21";
  if (needs_A && !src.support_radius) {
    throw usage_error("bound " + o.th +
                      " needs a support radius: pass --support-radius or a compactly "
                      "supported --dist");
  }
  const double sigma = std::sqrt(src.sigma2);
  const double t_max = o.grid_max > 0.0 ? o.grid_max : (sigma > 0.0 ? 8.0 / sigma : 8.0);
  const TGrid grid = make_dyadic_grid(t_max, o.grid_points);
  const auto h = src.values(grid);
  int m = o.m.value_or(src.dist && src.dist->family == Family::binomsym ? src.dist->m : 1);

  std::optional<BoundCurve> curve;
  std::vector<double> half;
  try {
    if (o.th == "1") {
      curve = th1_lower(sigma, *src.support_radius, o.sharp);
    } else if (o.th == "1a") {
      curve = th1a_lower(src.moment_set({}));
    } else if (o.th == "2") {
      curve = th2_lower(sigma, *src.support_radius, m, o.sharp);
    } else if (o.th == "2a") {
      curve = th2a_lower(src.moment_set({}), m);
    } else if (o.th == "3") {
      curve = th3_lower(src.sigma2);
    } else if (o.th == "21") {
      const double order = 1.0 / o.gamma;
      const auto ms = src.moment_set(std::vector<double>{order});
      curve = th21_upper(ms.a_frac.at(order), o.gamma, *src.support_radius);
    } else {
      std::vector<double> halves;
      for (double t : grid.points()) halves.push_back(t / 2.0);
      half = src.values(TGrid::from_points(std::move(halves)));
    }
  } catch (const invalid_argument& e) {
    throw usage_error(e.what());
  }

  const auto fmt = detail::format_of(o, "csv");
  std::vector<std::array<double, 4>> rows;  // t, cf, bound, deficit
  std::vector<bool> valid;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double t = grid[k];
    if (curve) {
      rows.push_back({t, h[k], curve->value(t), curve->deficit(t, h[k])});
      valid.push_back(curve->in_validity(t));
    } else {
      const double b = std::clamp(half[k], -1.0, 1.0);
      rows.push_back({t, h[k], b * b * b * b, th4_deficit(h[k], half[k])});
      valid.push_back(true);
    }
  }
  detail::emit(o, out, [&](std::ostream& os) {
    if (fmt == "csv") {
      os << "t,ecf_or_cf,bound,deficit,in_validity\n";
      for (std::size_t k = 0; k < rows.size(); ++k) {
        os << format_double(rows[k][0]) << ',' << format_double(rows[k][1]) << ','
           << format_double(rows[k][2]) << ',' << format_double(rows[k][3]) << ','
           << (valid[k] ? 1 : 0) << '\n';
      }
      return;
    }
    nlohmann::json j;
    j["schema"] = 1;
    j["selector"] = o.th;
    if (curve) {
      j["kind"] = to_string(curve->kind);
      j["params"] = curve->params;
      j["validity"] = {curve->t_lo(), curve->t_hi()};
      j["heuristic"] = curve->heuristic;
      j["upper"] = curve->is_upper();
      j["warnings"] = curve->warnings;
    }
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t k = 0; k < rows.size(); ++k) {
      arr.push_back({{"t", rows[k][0]},
                     {"ecf_or_cf", rows[k][1]},
                     {"bound", rows[k][2]},
                     {"deficit", rows[k][3]},
                     {"in_validity", static_cast<bool>(valid[k])}});
    }
    j["rows"] = arr;
    os << j.dump(2) << '\n';
  });
  return kOk;
}

inline int cmd_moments(const Options& o, std::ostream& out) {
  const auto orders = detail::parse_doubles(o.r, "--r");
  for (double r : orders) {
    if (!(r > 0.0 && r < 2.0)) throw usage_error("--r orders must lie in (0, 2)");
  }
  const auto src = detail::load_sample(o, 20);
  const Sample& x = src.sample;
  const double sigma_hat = std::sqrt(o.symmetric ? x.variance() : 2.0 * x.variance());

  struct Row {
    double r, moment, bound, tmom, cr_check, cr_tail;
  };
  std::vector<Row> rows;
  // h is the CF of the pair-difference law (or of x itself when symmetric),
  // so the C_r identity reproduces its r-th absolute moment.
  const double nn = static_cast<double>(x.size());
  auto h = [&](double t) {
    double re = 0.0, im = 0.0;
    for (double v : x.values()) {
      re += std::cos(t * v);
      im += std::sin(t * v);
    }
    re /= nn;
    im /= nn;
    if (o.symmetric) return re;
    return (nn * (re * re + im * im) - 1.0) / (nn - 1.0);
  };
  const double t_max = sigma_hat > 0.0 ? 100.0 / sigma_hat : 100.0;
  for (double r : orders) {
    const auto t = stat_tmom(x, r, o.max_pairs, Stream(o.seed), o.symmetric);
    Row row{r, t.moment, t.bound, t.value, 0.0, 0.0};
    if (sigma_hat > 0.0) {
      const auto fm = fractional_moment_via_cf(h, r, t_max, 1e-6);
      row.cr_check = fm.value;
      row.cr_tail = fm.tail_bound;
    }
    rows.push_back(row);
  }
  const auto fmt = detail::format_of(o, "csv");
  detail::emit(o, out, [&](std::ostream& os) {
    if (fmt == "csv") {
      os << "r,moment,gaussian_bound,tmom,cr_check,cr_tail_bound\n";
      for (const auto& w : rows) {
        os << format_double(w.r) << ',' << format_double(w.moment) << ','
           << format_double(w.bound) << ',' << format_double(w.tmom) << ','
           << format_double(w.cr_check) << ',' << format_double(w.cr_tail) << '\n';
      }
      return;
    }
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& w : rows) {
      arr.push_back({{"r", w.r},
                     {"moment", w.moment},
                     {"gaussian_bound", w.bound},
                     {"tmom", w.tmom},
                     {"cr_check", w.cr_check},
                     {"cr_tail_bound", w.cr_tail}});
    }
    os << nlohmann::json{{"schema", 1}, {"n", x.size()}, {"sigma", sigma_hat}, {"rows", arr}}.dump(2)
       << '\n';
  });
  return kOk;
}

inline int cmd_simulate(const Options& o, std::ostream& out) {
  if (!o.dist) throw usage_error("simulate needs --dist");
  if (o.input) throw usage_error("simulate draws from the registry; --input is not accepted");
  const TestConfig cfg = detail::test_config(o);
  const auto ns = detail::parse_sizes(o.n.value_or("250,500,1000,2000"), "--n");
  const RefDist d = make_dist(*o.dist, o.scale, o.m);
  const auto rows = power_study(d, ns, cfg, o.reps, o.threads);
  const auto fmt = detail::format_of(o, "csv");
  detail::emit(o, out, [&](std::ostream& os) {
    if (fmt == "csv") {
      write_power_csv(os, rows);
    } else {
      os << power_to_json(rows).dump(2) << '\n';
    }
  });
  return kOk;
}

inline int cmd_roots(const Options& o, std::ostream& out) {
  const RootResult z = root_z0();
  const auto fmt = detail::format_of(o, "csv");
  detail::emit(o, out, [&](std::ostream& os) {
    std::ostringstream value, residual;
    value << std::setprecision(12) << z.value;
    residual << std::setprecision(3) << std::scientific << z.residual;
    if (fmt == "csv") {
      os << "z0,residual,iterations\n"
         << value.str() << ',' << residual.str() << ',' << z.iterations << '\n';
    } else {
      os << nlohmann::json{{"z0", z.value}, {"residual", z.residual}, {"iterations", z.iterations}}
                .dump(2)
         << '\n';
    }
  });
  return kOk;
}

namespace detail {

inline void add_common(CLI::App* sub, Options& o, bool data, bool test_flags) {
  if (data) {
    sub->add_option("--input", o.input, "CSV file with one numeric column per row");
    sub->add_option("--column", o.column, "1-based column to read from --input");
    sub->add_option("--dist", o.dist,
                    "registry law: gaussian, sympoisson, laplace, uniform, rademacher, "
                    "binomsym, triangular");
    sub->add_option("--n", o.n, "sample size (simulate: comma-separated list)");
    sub->add_option("--scale", o.scale, "registry law parameter (sigma, lambda, b, A or a)");
    sub->add_option("--symmetric", o.symmetric, "trust the data as symmetric about 0")
        ->expected(0, 1)
        ->default_str("false");
    sub->add_option("--max-pairs", o.max_pairs, "cap on pairwise differences");
  }
  sub->add_option("--seed", o.seed, "master seed (default 42)");
  sub->add_option("--threads", o.threads, "worker threads; never changes results");
  sub->add_option("--output", o.output, "output path (default stdout)");
  sub->add_option("--format", o.format, "json or csv");
  if (test_flags) {
    sub->add_option("--stats", o.stats, "comma-separated subset of t3,t4,tmom");
    sub->add_option("--B", o.B, "bootstrap replicates (>= 99)");
    sub->add_option("--alpha", o.alpha, "test level");
    sub->add_option("--grid-max", o.grid_max, "grid end (0: 8 / sigma_hat)");
    sub->add_option("--grid-points", o.grid_points, "grid resolution");
    sub->add_option("--m", o.m, "m-divisibility hypothesis (adds T2)");
    sub->add_option("--r", o.r, "order of the TMOM moment, in (0, 2)");
    sub->add_option("--support-radius", o.support_radius, "support radius A for T2");
  }
}

}  // namespace detail

/// Parses argv and runs one command. Returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Characteristic-function bounds and a bootstrap test of infinite divisibility",
               "idcf"};
  app.require_subcommand(1);

  auto* test = app.add_subcommand("test", "test a sample for infinite divisibility");
  detail::add_common(test, o, true, true);

  auto* bounds = app.add_subcommand("bounds", "tabulate a bound against the CF or ECF");
  detail::add_common(bounds, o, true, false);
  bounds->add_option("--th", o.th, "bound selector: 1, 1a, 2, 2a, 3, 4 or 21")->required();
  bounds->add_option("--m", o.m, "m for bounds 2 and 2a (and binomsym)");
  bounds->add_option("--support-radius", o.support_radius, "support radius A");
  bounds->add_option("--gamma", o.gamma, "gamma > 1 for bound 21");
  bounds->add_option("--grid-max", o.grid_max, "grid end (0: 8 / sigma)");
  bounds->add_option("--grid-points", o.grid_points, "grid resolution");
  bounds->add_flag("--sharp", o.sharp, "use the exact root z0 instead of 4.49");

  auto* moments_cmd = app.add_subcommand("moments", "fractional moments against the Gaussian bound");
  detail::add_common(moments_cmd, o, true, false);
  moments_cmd->add_option("--r", o.r, "comma-separated orders in (0, 2)");
  moments_cmd->add_option("--m", o.m, "binomsym m");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo rejection rates");
  detail::add_common(simulate, o, true, true);
  simulate->add_option("--reps", o.reps, "repetitions per sample size");

  auto* roots = app.add_subcommand("roots", "first positive root of sin z - z cos z");
  roots->add_option("--output", o.output, "output path (default stdout)");
  roots->add_option("--format", o.format, "json or csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*test) return cmd_test(o, out);
    if (*bounds) return cmd_bounds(o, out);
    if (*moments_cmd) return cmd_moments(o, out);
    if (*simulate) return cmd_simulate(o, out);
    if (*roots) return cmd_roots(o, out);
  } catch (const usage_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const data_error& e) {
    err << "error: " << e.what() << '\n';
    return kData;
  } catch (const invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kData;
  }
  return kUsage;
}

}  // namespace idcf::cli
