// Command line front end: spectra, coefficient tables, exact identity suites and the numerical checks.
#include "kohn/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace kohn;
using json = nlohmann::ordered_json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json exact_json(const ExactScalar& x) {
  return {{"rational", to_string(x.coefficient())}, {"pi_power", x.is_zero() ? 0 : x.pi_power()}};
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(10) << x;
  return os.str();
}

std::string csv_cell(const json& v) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  if (v.is_object() && v.contains("pi_power")) {
    const std::string r = v["rational"].get<std::string>();
    const int k = v["pi_power"].get<int>();
    return k == 0 ? r : r + "*pi^" + std::to_string(k);
  }
  if (v.is_number_float()) return fmt(v.get<double>());
  return v.dump();
}

/// Rows of one table, written as CSV or as a JSON array of objects.
class Table {
 public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}
  void add(std::vector<json> row) {
    if (row.size() != columns_.size()) throw std::logic_error("table row width");
    rows_.push_back(std::move(row));
  }
  void write(std::ostream& os, const std::string& format) const {
    if (format == "json") {
      json out = json::array();
      for (const auto& r : rows_) {
        json o = json::object();
        for (std::size_t c = 0; c < columns_.size(); ++c) o[columns_[c]] = r[c];
        out.push_back(o);
      }
      os << out.dump(2) << "\n";
      return;
    }
    for (std::size_t c = 0; c < columns_.size(); ++c) os << (c ? "," : "") << columns_[c];
    os << "\n";
    for (const auto& r : rows_) {
      for (std::size_t c = 0; c < r.size(); ++c) os << (c ? "," : "") << csv_cell(r[c]);
      os << "\n";
    }
  }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<json>> rows_;
};

struct Config {
  int n = 3;
  int j = 1;
  std::optional<int> n_opt, j_opt;
  int p = 0, q = 0;
  std::string kind = "Phi";
  std::string direction = "all";
  int pmax = 2, qmax = 2, imax = 4, cap = 20;
  int N = 8;
  double theta = 0;
  double delta = 6;
  std::optional<double> t;
  double r = 1, l = 2;
  int shells = 80;
  int points = 1;
  std::string multiplier = "indicator";
  std::size_t samples = 100000;
  std::optional<std::uint64_t> seed;
  std::string format = "csv";
  std::string suite = "all";
  bool rows = false;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw UsageError(what);
}

std::uint64_t seed_of(const Config& c) {
  require(c.seed.has_value(), "--seed is required for Monte Carlo commands");
  return *c.seed;
}

int run_spectrum(const Config& c) {
  require(c.n >= 2 && c.j >= 0 && c.j <= c.n - 1 && c.imax >= 1, "need n >= 2, 0 <= j <= n-1, imax >= 1");
  Table t({"index", "n", "j", "p", "q", "kind", "lambda_sq", "dim", "shell"});
  for (const auto& idx : indices_up_to(c.n, c.j, static_cast<long long>(c.imax) * c.imax)) {
    const long long lam = eigenvalue_sq(idx);
    int shell = 1;
    while (static_cast<long long>(shell) * shell < lam) ++shell;
    t.add({to_string(idx), idx.n, idx.j, idx.p, idx.q, to_string(idx.kind), lam, dimension(idx).str(), shell});
  }
  t.write(std::cout, c.format);
  return 0;
}

int run_coeffs(const Config& c) {
  const FormIndex src = make_index(c.n, c.j, c.p, c.q, parse_kind(c.kind));
  Table t({"direction", "source", "destination", "coefficient"});
  auto emit = [&](const std::string& name, const std::map<FormIndex, Rational>& entries) {
    for (const auto& [dst, v] : entries) t.add({name, to_string(src), to_string(dst), to_string(v)});
  };
  const bool all = c.direction == "all";
  require(all || c.direction == "Z" || c.direction == "ZBar" || c.direction == "eps",
          "--direction must be Z, ZBar, eps or all");
  if (all || c.direction == "Z") emit("Z", coeff_table(Direction::Z, src).entries);
  if (all || c.direction == "ZBar") emit("ZBar", coeff_table(Direction::ZBar, src).entries);
  if (all || c.direction == "eps") emit("eps", epsilon_row(src));
  t.write(std::cout, c.format);
  return 0;
}

int run_verify(const Config& c) {
  static const std::vector<std::string> names{"eigenvalues", "dimensions", "coefficients", "identities",
                                              "kernels", "plancherel", "all"};
  require(std::find(names.begin(), names.end(), c.suite) != names.end(), "unknown suite " + c.suite);
  VerifyOptions opt;
  if (c.n_opt) opt.n_min = opt.n_max = *c.n_opt;
  opt.j = c.j_opt;
  opt.pmax = c.pmax;
  opt.qmax = c.qmax;
  opt.seed = c.seed.value_or(1);
  opt.keep_rows = c.rows || c.suite == "coefficients";
  require(opt.n_min >= 2 && opt.pmax >= 0 && opt.qmax >= 0, "need n >= 2 and nonnegative caps");
  if (opt.j) require(*opt.j >= 0 && *opt.j <= opt.n_max - 1, "j out of range");

  RepEngine engine;
  std::vector<SuiteResult> results;
  auto want = [&](const std::string& s) { return c.suite == s || c.suite == "all"; };
  if (want("eigenvalues")) results.push_back(verify_eigenvalues(engine, opt));
  if (want("dimensions")) results.push_back(verify_dimensions(opt));
  if (want("coefficients")) results.push_back(verify_coefficients(engine, opt));
  if (want("identities")) results.push_back(verify_table_identities(opt.n_min, opt.n_max, c.cap, opt.keep_rows));
  if (want("kernels")) {
    // Pointwise identities at n = 3 unless a single n is requested.
    VerifyOptions k = opt;
    if (!c.n_opt) k.n_max = 3;
    results.push_back(verify_kernels(engine, k));
  }
  if (want("plancherel")) {
    VerifyOptions k = opt;
    if (!c.n_opt) k.n_max = 3;
    results.push_back(verify_plancherel(engine, k));
  }

  if (opt.keep_rows) {
    Table rows({"suite", "check", "lhs", "rhs", "status"});
    for (const auto& r : results)
      for (const auto& row : r.rows) rows.add({r.name, row.label, row.lhs, row.rhs, row.ok ? "pass" : "FAIL"});
    rows.write(std::cout, c.format);
  }
  Table summary({"suite", "checks", "failures", "status"});
  bool ok = true;
  for (const auto& r : results) {
    summary.add({r.name, r.checks, r.failures, r.passed() ? "pass" : "FAIL"});
    ok = ok && r.passed();
  }
  summary.write(std::cout, c.format);
  for (const auto& r : results)
    if (!r.passed()) {
      std::cout << "first counterexample in " << r.name << ": "
                << (r.first_failure.empty() ? "no checks ran" : r.first_failure) << "\n";
      break;
    }
  return ok ? 0 : 1;
}

int run_geometry(const Config& c) {
  require(c.n >= 2 && c.t > 0 && c.theta >= 0 && c.theta < 1 && c.samples > 0, "need n >= 2, t > 0, 0 <= theta < 1");
  const double t = *c.t;
  FloatPoint z = FloatPoint::Zero(c.n);
  z(0) = 1;
  const auto s = mc_ball_statistics(z, t, c.theta, c.samples, seed_of(c));
  SphereSampler sampler(c.n, seed_of(c) + 1);
  std::size_t failures = 0;
  for (std::size_t k = 0; k < c.samples; ++k) {
    const FloatPoint a = sampler(), b = sampler(), d = sampler();
    if (dist(a, d) > dist(a, b) + dist(b, d) + 1e-12) ++failures;
  }
  Table out({"n", "t", "theta", "samples", "ball_measure", "ball_measure_se", "ball_measure_quadrature",
             "ball_over_min_1_t2n", "doubling_ratio", "doubling_ratio_se", "weighted_integral",
             "weighted_integral_se", "weighted_integral_quadrature", "triangle_failures"});
  out.add({c.n, t, c.theta, c.samples, s.ball_measure.mean, s.ball_measure.std_error,
           ball_measure_quadrature(c.n, t), s.ball_measure.mean / std::min(1.0, std::pow(t, 2 * c.n)),
           s.doubling_ratio.mean, s.doubling_ratio.std_error, s.weighted_integral.mean,
           s.weighted_integral.std_error, weighted_ball_integral_quadrature(c.n, t, c.theta), failures});
  out.write(std::cout, c.format);
  return 0;
}

std::string point_string(const ExactPoint& z) {
  std::string s = "(";
  for (Eigen::Index m = 0; m < z.size(); ++m) s += (m ? ", " : "") + to_string(z(m));
  return s + ")";
}

int run_kernel(const Config& c) {
  const FormIndex idx = make_index(c.n, c.j, c.p, c.q, parse_kind(c.kind));
  RepEngine engine;
  const auto pts = rational_sphere_points(c.n, c.n + 2, c.seed.value_or(1));
  const ExactPoint& z = pts[static_cast<std::size_t>(c.n)];
  const ExactPoint& w = pts[static_cast<std::size_t>(c.n) + 1];
  const ExactKernel k = single_component(idx);
  const auto cols = kernel_columns(engine, k, w);
  const auto value = kernel_value(cols, z);
  json matrix = json::array();
  for (Eigen::Index a = 0; a < value.rows(); ++a) {
    json row = json::array();
    for (Eigen::Index b = 0; b < value.cols(); ++b) row.push_back(exact_json({value(a, b), -c.n}));
    matrix.push_back(row);
  }
  json out = {{"index", to_string(idx)},
              {"lambda_sq", eigenvalue_sq(idx)},
              {"dim", dimension(idx).str()},
              {"z", point_string(z)},
              {"w", point_string(w)},
              {"hs_norm_sq", exact_json(hs_integral(cols, cols))},
              {"weighted_norm_sq_theta1", exact_json(weighted_norm_sq_exact(engine, k, w, 1))},
              {"m_norm_sq", exact_json(m_norm_sq(k))},
              {"value", matrix}};
  if (c.format == "json") {
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  Table t({"index", "lambda_sq", "dim", "z", "w", "hs_norm_sq", "weighted_norm_sq_theta1", "m_norm_sq"});
  t.add({out["index"], out["lambda_sq"], out["dim"], out["z"], out["w"], out["hs_norm_sq"],
         out["weighted_norm_sq_theta1"], out["m_norm_sq"]});
  t.write(std::cout, c.format);
  return 0;
}

Multiplier named_multiplier(const std::string& name, int N) {
  Multiplier base = name == "indicator" ? indicator(0, 1, false, true)
                    : name == "ramp"    ? ramp()
                    : name == "bump"    ? bump(0, 1)
                                        : throw UsageError("--multiplier must be indicator, ramp or bump");
  return dilate(base, N);
}

int run_plancherel(const Config& c) {
  require(c.N >= 2 && c.theta >= 0 && c.theta <= 1, "need N >= 2 and 0 <= theta <= 1");
  require(c.j >= 0 && c.j <= c.n - 1, "j out of range");
  const auto r = plancherel_check(named_multiplier(c.multiplier, c.N), c.n, c.j, c.N, c.theta);
  Table t({"n", "j", "N", "theta", "multiplier", "components", "lhs", "lhs_change", "shell_max_sum", "ratio_shells",
           "n_norm_sq", "ratio_n_norm"});
  t.add({c.n, c.j, c.N, c.theta, c.multiplier, r.components, r.lhs, r.lhs_change, r.shell_max_sum, r.ratio_shells,
         r.n_norm_sq, r.ratio_n_norm});
  t.write(std::cout, c.format);
  return 0;
}

int run_sobolev(const Config& c) {
  const auto r = sobolev_check(c.n, c.j, c.r, c.l, c.shells);
  Table t({"n", "j", "r", "l", "shells", "partial", "tail_bound", "ratio"});
  t.add({c.n, c.j, c.r, c.l, r.shells, r.partial, r.tail_bound, r.ratio});
  t.write(std::cout, c.format);
  return 0;
}

int run_riesz(const Config& c) {
  require(c.delta >= 0 && c.points >= 1 && c.samples > 0, "need delta >= 0, points >= 1, samples > 0");
  std::vector<double> ts;
  if (c.t) {
    require(*c.t >= 1.0 / 128 && *c.t <= 1, "t must lie in [1/128, 1]");
    ts.push_back(*c.t);
  } else {
    for (int k = 0; k < 12; ++k) ts.push_back(std::exp(std::log(1.0 / 128) + k * std::log(128.0 / 5) / 11));
  }
  const std::uint64_t seed = seed_of(c);
  RepEngine engine;
  KernelBank bank(engine, c.n, c.j);
  SphereSampler base_points(c.n, seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<FloatPoint> ws;
  for (int k = 0; k < c.points; ++k) ws.push_back(base_points());
  Table out({"t", "point", "l1", "std_error", "samples"});
  for (std::size_t a = 0; a < ts.size(); ++a)
    for (std::size_t b = 0; b < ws.size(); ++b) {
      const auto e = bochner_riesz_l1(bank, c.delta, ts[a], ws[b], c.samples, seed + 1000 * a + b);
      out.add({ts[a], b, e.mean, e.std_error, e.samples});
    }
  out.write(std::cout, c.format);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral calculus of the Kohn Laplacian on the unit sphere"};
  app.require_subcommand(1);
  Config c;
  auto format = [&](CLI::App* s) { s->add_option("--format", c.format)->check(CLI::IsMember({"csv", "json"})); };
  auto nj = [&](CLI::App* s) {
    s->add_option("--n", c.n)->check(CLI::Range(2, 12));
    s->add_option("--j", c.j)->check(CLI::NonNegativeNumber);
  };

  auto* spectrum = app.add_subcommand("spectrum", "indices, eigenvalues, dimensions and shells");
  nj(spectrum);
  spectrum->add_option("--imax", c.imax);
  format(spectrum);

  auto* coeffs = app.add_subcommand("coeffs", "multiplication coefficient tables");
  nj(coeffs);
  coeffs->add_option("--p", c.p);
  coeffs->add_option("--q", c.q);
  coeffs->add_option("--kind", c.kind)->check(CLI::IsMember({"Phi", "Psi"}));
  coeffs->add_option("--direction", c.direction);
  format(coeffs);

  auto* verify = app.add_subcommand("verify", "exact identity suites");
  verify->add_option("suite", c.suite, "eigenvalues, dimensions, coefficients, identities, kernels, plancherel or all");
  verify->add_option("--n", c.n_opt)->check(CLI::Range(2, 8));
  verify->add_option("--j", c.j_opt)->check(CLI::NonNegativeNumber);
  verify->add_option("--pmax", c.pmax);
  verify->add_option("--qmax", c.qmax);
  verify->add_option("--cap", c.cap, "range of the closed-form identities");
  verify->add_option("--seed", c.seed);
  verify->add_flag("--rows", c.rows, "print every check");
  format(verify);

  auto* geometry = app.add_subcommand("geometry", "ball measures, doubling and weighted ball integrals");
  geometry->add_option("--n", c.n)->check(CLI::Range(2, 12));
  geometry->add_option("--t", c.t)->required();
  geometry->add_option("--theta", c.theta);
  geometry->add_option("--samples", c.samples);
  geometry->add_option("--seed", c.seed)->required();
  format(geometry);

  auto* kernel = app.add_subcommand("kernel", "reproducing kernel of one component");
  nj(kernel);
  kernel->add_option("--p", c.p);
  kernel->add_option("--q", c.q);
  kernel->add_option("--kind", c.kind)->check(CLI::IsMember({"Phi", "Psi"}));
  kernel->add_option("--seed", c.seed, "chooses the rational point pair");
  format(kernel);

  auto* plancherel = app.add_subcommand("plancherel", "weighted Plancherel ratios");
  nj(plancherel);
  plancherel->add_option("--N", c.N);
  plancherel->add_option("--theta", c.theta);
  plancherel->add_option("--multiplier", c.multiplier);
  format(plancherel);

  auto* sobolev = app.add_subcommand("sobolev", "Sobolev kernel sums");
  nj(sobolev);
  sobolev->add_option("--r", c.r);
  sobolev->add_option("--l", c.l);
  sobolev->add_option("--shells", c.shells);
  format(sobolev);

  auto* riesz = app.add_subcommand("riesz", "L1 norms of Bochner-Riesz kernels");
  nj(riesz);
  riesz->add_option("--delta", c.delta);
  riesz->add_option("--t", c.t, "a single t; default sweeps 12 values in [1/128, 1/5]");
  riesz->add_option("--points", c.points);
  riesz->add_option("--samples", c.samples);
  riesz->add_option("--seed", c.seed)->required();
  format(riesz);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (spectrum->parsed()) return run_spectrum(c);
    if (coeffs->parsed()) return run_coeffs(c);
    if (verify->parsed()) return run_verify(c);
    if (geometry->parsed()) return run_geometry(c);
    if (kernel->parsed()) return run_kernel(c);
    if (plancherel->parsed()) return run_plancherel(c);
    if (sobolev->parsed()) return run_sobolev(c);
    if (riesz->parsed()) return run_riesz(c);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
