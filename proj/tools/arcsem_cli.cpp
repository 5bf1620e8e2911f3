// arcsem_cli: expansions, PDE solves and timing runs on periodic piecewise
// grids. Results go to CSV files plus a meta.json describing the run.
//
//   arcsem_cli expand --func fig5 --grid uniform:3 --b 0 --out run/
//   arcsem_cli solve --problem heat --func heat_ic --grid ... --tspan 0:1:11
//   arcsem_cli bench --out run/

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "arcsem/catalog.hpp"
#include "arcsem/piecewise.hpp"
#include "arcsem/solvers.hpp"
#include "arcsem/space.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace arcsem;

namespace {

constexpr double kPi = std::numbers::pi;

struct RunConfig {
  std::string command;
  std::string grid = "uniform:3";
  std::string basis = "arc";
  int b = 0;
  int trunc = 0;
  std::string out = ".";
  std::string func;
  std::string trig;
  std::string problem = "screened_poisson";
  std::string velocity = "conv_velocity";
  double omega = 1.5;
  std::string tspan = "0:1:11";
  int section = 0;
  int samples = 201;
  int dmax = 2;
  double tol = 1e-12;
  std::uint64_t seed = 1;
  int min_exp = 12, max_exp = 16, blocks = 16, repeats = 5;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double x) {
  std::ostringstream s;
  s << std::setprecision(17) << x;
  return s.str();
}

class Csv {
 public:
  Csv(const fs::path& path, const std::vector<std::string>& header) : f_(path) {
    if (!f_) throw std::runtime_error("cannot write " + path.string());
    row(header);
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) f_ << (i ? "," : "") << cells[i];
    f_ << "\r\n";
  }

 private:
  std::ofstream f_;
};

// "a0=1,a2=0.5,b3=-1"
void parse_trig(const std::string& text, double& a0, Eigen::VectorXd& a, Eigen::VectorXd& b) {
  a0 = 0.0;
  std::vector<std::pair<int, double>> as, bs;
  int top = 0;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq < 2 || (item[0] != 'a' && item[0] != 'b'))
      throw UsageError("bad trig term '" + item + "' (expected aN=value or bN=value)");
    const int n = std::stoi(item.substr(1, eq - 1));
    const double v = std::stod(item.substr(eq + 1));
    if (n < 0 || (item[0] == 'b' && n == 0)) throw UsageError("bad trig index in '" + item + "'");
    if (item[0] == 'a' && n == 0) {
      a0 = v;
      continue;
    }
    (item[0] == 'a' ? as : bs).emplace_back(n, v);
    top = std::max(top, n);
  }
  a = Eigen::VectorXd::Zero(top);
  b = Eigen::VectorXd::Zero(top);
  for (auto [n, v] : as) a[n - 1] = v;
  for (auto [n, v] : bs) b[n - 1] = v;
}

Function trig_function(double a0, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return [=](double t) {
    double s = a0;
    for (int n = 1; n <= a.size(); ++n) s += a[n - 1] * std::cos(n * t) + b[n - 1] * std::sin(n * t);
    return s;
  };
}

// "t0:t1:count" or a comma list.
std::vector<double> parse_times(const std::string& text) {
  std::vector<double> t;
  if (text.find(':') != std::string::npos) {
    double t0, t1;
    int n;
    char c1, c2;
    std::istringstream ss(text);
    if (!(ss >> t0 >> c1 >> t1 >> c2 >> n) || c1 != ':' || c2 != ':' || n < 1)
      throw UsageError("bad --tspan '" + text + "' (expected t0:t1:count)");
    for (int k = 0; k < n; ++k) t.push_back(n == 1 ? t1 : t0 + (t1 - t0) * k / (n - 1));
    return t;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) t.push_back(std::stod(item));
  if (t.empty()) throw UsageError("empty --tspan");
  return t;
}

json config_json(const RunConfig& c) {
  return {{"command", c.command}, {"grid", c.grid},       {"basis", c.basis},
          {"b", c.b},             {"trunc", c.trunc},     {"func", c.func},
          {"trig", c.trig},       {"problem", c.problem}, {"velocity", c.velocity},
          {"omega", c.omega},     {"tspan", c.tspan},     {"section", c.section},
          {"samples", c.samples}, {"dmax", c.dmax},       {"tol", c.tol},
          {"seed", c.seed}};
}

void write_meta(const RunConfig& c, json extra) {
  json meta = {{"schema", "arcsem-run"}, {"version", 1}, {"config", config_json(c)}};
  meta.update(extra);
  std::ofstream f(fs::path(c.out) / "meta.json");
  f << std::setw(2) << meta << "\n";
}

// Polynomial degree of local slot k.
int slot_degree(BasisKind kind, int b, int k) {
  if (kind == BasisKind::arc) return b == 0 ? (k + 1) / 2 : (k == 0 ? 1 : (k + 2) / 2);
  return b == 0 ? k : k + 1;
}

struct Resolved {
  PiecewiseGrid grid;
  std::shared_ptr<const Space> space;
  Function f;
};

Resolved resolve(const RunConfig& c, bool need_func) {
  std::vector<std::string> errors;
  std::optional<PiecewiseGrid> grid;
  try {
    grid = PiecewiseGrid::parse(c.grid);
  } catch (const std::exception& e) {
    errors.push_back(std::string("--grid: ") + e.what());
  }
  BasisKind kind = BasisKind::arc;
  try {
    kind = parse_basis_kind(c.basis);
  } catch (const std::exception& e) {
    errors.push_back(std::string("--basis: ") + e.what());
  }
  if (c.b != 0 && c.b != -1) errors.push_back("--b must be 0 or -1");
  if (grid && c.trunc != 0 && (c.trunc < 0 || c.trunc % grid->elements() != 0))
    errors.push_back("--trunc must be a positive multiple of the element count");
  Function f;
  if (need_func) {
    if (!c.func.empty() && !c.trig.empty()) errors.push_back("give --func or --trig, not both");
    if (c.func.empty() && c.trig.empty()) errors.push_back("one of --func or --trig is required");
    if (!c.trig.empty()) {
      try {
        double a0;
        Eigen::VectorXd a, b;
        parse_trig(c.trig, a0, a, b);
        f = trig_function(a0, a, b);
      } catch (const std::exception& e) {
        errors.push_back(std::string("--trig: ") + e.what());
      }
    }
  }
  if (!errors.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw UsageError(msg);
  }
  if (need_func && !c.func.empty()) f = catalog_function(c.func);  // out_of_range -> exit 2
  auto space = Space::make(kind, *grid);
  return {*grid, space, f};
}

int cmd_expand(const RunConfig& c) {
  const Resolved r = resolve(c, true);
  const int m = r.grid.elements();
  Eigen::VectorXd c0;
  if (!c.trig.empty() && r.space->kind() == BasisKind::arc) {
    double a0;
    Eigen::VectorXd a, b;
    parse_trig(c.trig, a0, a, b);
    c0 = trig_exact_expand(PiecewiseBasis(r.grid, 0), a0, a, b);
  } else {
    c0 = r.space->expand0(r.f);
  }
  Eigen::VectorXd coeffs = c.b == 0 ? c0 : r.space->to_minus1(c0);
  if (c.trunc > 0) coeffs = resize_coeffs(coeffs, c.trunc);
  fs::create_directories(c.out);
  Csv cf(fs::path(c.out) / "coefficients.csv", {"block", "element", "value"});
  std::vector<double> decay;
  for (int i = 0; i < coeffs.size(); ++i) {
    const int k = i / m, e = i % m;
    cf.row({std::to_string(k), std::to_string(e), num(coeffs[i])});
    const int deg = slot_degree(r.space->kind(), c.b, k);
    if (deg >= static_cast<int>(decay.size())) decay.resize(deg + 1, 0.0);
    decay[deg] = std::max(decay[deg], std::abs(coeffs[i]));
  }
  Csv df(fs::path(c.out) / "decay.csv", {"degree", "max_abs_coeff"});
  for (std::size_t d = 0; d < decay.size(); ++d) df.row({std::to_string(d), num(decay[d])});

  json extra = {{"elements", m},
                {"length", coeffs.size()},
                {"significant", count_significant(coeffs, c.tol)},
                {"grid_breakpoints", r.grid.breakpoints()}};
  if (c.b == 0 && c.trig.empty()) {
    try {
      const ConvergenceTable t = convergence_study(r.space, r.f);
      extra["rho"] = t.rho;
      extra["fit_degrees"] = {t.fit_first, t.fit_last};
    } catch (const std::exception&) {
      extra["rho"] = nullptr;  // too few nonzero degrees to fit
    }
  }
  write_meta(c, extra);
  std::cout << "wrote " << coeffs.size() << " coefficients (" << extra["significant"]
            << " above " << c.tol << ") to " << c.out << "\n";
  return 0;
}

std::vector<double> sample_thetas(int n) {
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i) t[i] = -kPi + 2 * kPi * i / (n - 1);
  return t;
}

int cmd_solve(const RunConfig& c) {
  const Resolved r = resolve(c, true);
  const int m = r.grid.elements();
  const int trunc = c.trunc > 0 ? c.trunc : 15 * m;
  fs::create_directories(c.out);
  const auto thetas = sample_thetas(c.samples);
  json extra = {{"elements", m}, {"trunc", trunc}, {"grid_breakpoints", r.grid.breakpoints()}};

  if (c.problem == "screened_poisson") {
    const SolutionField u = solve_screened_poisson(r.space, r.f, c.omega, trunc, c.section);
    Csv sf(fs::path(c.out) / "solution.csv", {"theta", "u", "du", "d2u", "residual"});
    double res_max = 0.0;
    for (double t : thetas) {
      const double v = u.value(t), d1 = u.derivative(1, t), d2 = u.derivative(2, t);
      const double res = -d2 + c.omega * c.omega * v - r.f(t);
      res_max = std::max(res_max, std::abs(res));
      sf.row({num(t), num(v), num(d1), num(d2), num(res)});
    }
    Csv df(fs::path(c.out) / "drift.csv", {"t", "d", "value"});
    for (int d = 0; d <= c.dmax; ++d) df.row({"0", std::to_string(d), num(periodic_drift(u, d))});
    extra["residual_max"] = res_max;
    write_meta(c, extra);
    std::cout << "screened Poisson: max residual " << res_max << "\n";
    return 0;
  }

  EvolutionProblem p;
  p.kind = parse_evolution_kind(c.problem);
  p.initial = r.f;
  if (p.kind == EvolutionKind::convection_diffusion) p.velocity = catalog_function(c.velocity);
  p.trunc = trunc;
  p.section = c.section;
  p.times = parse_times(c.tspan);
  const EvolutionResult res = solve_evolution(r.space, p);
  const DriftReport drift = periodic_drift(res, c.dmax);

  const bool complex = p.kind == EvolutionKind::schrodinger;
  std::vector<std::string> head = {"t", "theta", "u"};
  if (complex) head.push_back("u_imag");
  Csv sf(fs::path(c.out) / "solution.csv", head);
  Csv nf(fs::path(c.out) / "norm.csv", {"t", "mass_norm2"});
  for (std::size_t k = 0; k < res.times.size(); ++k) {
    const SolutionField& u = res.fields[k];
    for (double t : thetas) {
      std::vector<std::string> row = {num(res.times[k]), num(t), num(u.value(t))};
      if (complex) row.push_back(num(u.derivative(0, t, true)));
      sf.row(row);
    }
    nf.row({num(res.times[k]), num(mass_norm2(u, res.mass))});
  }
  Csv df(fs::path(c.out) / "drift.csv", {"t", "d", "value"});
  json table = json::array();
  for (std::size_t k = 0; k < drift.times.size(); ++k) {
    for (int d = 0; d <= c.dmax; ++d)
      df.row({num(drift.times[k]), std::to_string(d), num(drift.drift[k][d])});
    table.push_back({{"t", drift.times[k]}, {"drift", drift.drift[k]}});
  }
  extra["drift"] = table;
  write_meta(c, extra);
  std::cout << c.problem << ": " << res.times.size() << " sample times written to " << c.out << "\n";
  return 0;
}

int cmd_bench(const RunConfig& c) {
  if (c.min_exp > c.max_exp || c.blocks < 1 || c.repeats < 1)
    throw UsageError("invalid bench ladder");
  std::vector<int> elements;
  for (int e = c.min_exp; e <= c.max_exp; ++e) {
    const int n = 1 << e;
    if (n % c.blocks) throw UsageError("2^exp must be divisible by --blocks");
    elements.push_back(n / c.blocks);
  }
  const auto pts = bench_screened_poisson(elements, c.blocks, c.repeats, c.seed);
  fs::create_directories(c.out);
  Csv bf(fs::path(c.out) / "bench.csv", {"N", "build_seconds", "solve_seconds"});
  std::vector<double> n, tb, ts;
  for (const auto& p : pts) {
    bf.row({std::to_string(p.n), num(p.build_seconds), num(p.solve_seconds)});
    n.push_back(p.n);
    tb.push_back(p.build_seconds);
    ts.push_back(p.solve_seconds);
  }
  const double sb = loglog_slope(n, tb), ss = loglog_slope(n, ts);
  write_meta(c, {{"build_slope", sb},
                 {"solve_slope", ss},
                 {"blocks", c.blocks},
                 {"repeats", c.repeats},
                 {"min_exp", c.min_exp},
                 {"max_exp", c.max_exp}});
  std::cout << "log-log slopes: build " << sb << ", solve " << ss << "\n";
  return 0;
}

void add_common(CLI::App* app, RunConfig& c) {
  app->add_option("--grid", c.grid, "breakpoint file, uniform:k or comma list");
  app->add_option("--basis", c.basis, "arc or legendre");
  app->add_option("--trunc", c.trunc, "truncation size (multiple of the element count)");
  app->add_option("--out", c.out, "output directory");
  app->add_option("--func", c.func, "catalog function name");
  app->add_option("--trig", c.trig, "trig coefficients, e.g. a0=1,a2=0.5,b3=-1");
  app->add_option("--seed", c.seed, "random seed");
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig c;
  CLI::App app{"Sparse spectral elements on periodic arc grids"};
  app.require_subcommand(1);

  auto* expand = app.add_subcommand("expand", "expand a function in a piecewise basis");
  add_common(expand, c);
  expand->add_option("--b", c.b, "basis parameter: 0 or -1");
  expand->add_option("--tol", c.tol, "threshold for counting significant coefficients");

  auto* solve = app.add_subcommand("solve", "solve a periodic PDE");
  add_common(solve, c);
  solve->add_option("--problem", c.problem,
                    "screened_poisson, heat, schrodinger or convection_diffusion");
  solve->add_option("--omega", c.omega, "screened Poisson frequency");
  solve->add_option("--velocity", c.velocity, "catalog function used as the convection velocity");
  solve->add_option("--tspan", c.tspan, "sample times: t0:t1:count or comma list");
  solve->add_option("--section", c.section, "section size for derivative reconstruction");
  solve->add_option("--samples", c.samples, "theta samples in solution.csv")
      ->check(CLI::Range(2, 1000000));
  solve->add_option("--dmax", c.dmax, "largest derivative in drift.csv")->check(CLI::Range(0, 3));

  auto* bench = app.add_subcommand("bench", "time build and solve of the screened Poisson system");
  bench->add_option("--out", c.out, "output directory");
  bench->add_option("--seed", c.seed, "random seed for the right-hand side");
  bench->add_option("--min-exp", c.min_exp, "smallest N = 2^exp");
  bench->add_option("--max-exp", c.max_exp, "largest N = 2^exp");
  bench->add_option("--blocks", c.blocks, "coefficients per element");
  bench->add_option("--repeats", c.repeats, "timed repeats after the warm-up");

  CLI11_PARSE(app, argc, argv);

  try {
    if (expand->parsed()) {
      c.command = "expand";
      return cmd_expand(c);
    }
    if (solve->parsed()) {
      c.command = "solve";
      return cmd_solve(c);
    }
    c.command = "bench";
    return cmd_bench(c);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\navailable functions:\n";
    for (const auto& f : function_catalog()) std::cerr << "  " << f.name << "  " << f.description << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
