// End-to-end acceptance checks. One PASS/FAIL line per criterion; the exit
// status is nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "arcsem/arcpoly.hpp"
#include "arcsem/catalog.hpp"
#include "arcsem/piecewise.hpp"
#include "arcsem/solvers.hpp"
#include "arcsem/space.hpp"
#include "arcsem/structmat.hpp"
#include "support.hpp"

using namespace arcsem;
using arcsem::testing::kPi;
using arcsem::testing::linspace;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

using Clock = std::chrono::steady_clock;

bool run(int id, const char* name, double budget_s, const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto t0 = Clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.pass = false;
    out.detail << " [exception: " << e.what() << "]";
  }
  const double dt = std::chrono::duration<double>(Clock::now() - t0).count();
  if (dt > budget_s) {
    out.pass = false;
    out.detail << " [runtime " << dt << " s over budget " << budget_s << " s]";
  }
  std::printf("CRITERION %d %s: %s (%.2f s)%s\n", id, name, out.pass ? "PASS" : "FAIL", dt,
              out.detail.str().c_str());
  std::fflush(stdout);
  return out.pass;
}

PiecewiseGrid grid_of(const std::vector<double>& bp) { return PiecewiseGrid(bp); }

// Grids with M elements, deliberately non-uniform.
PiecewiseGrid trig_grid(int m) {
  if (m == 2) return grid_of({-kPi, 0.0, kPi});
  if (m == 3) return grid_of({-kPi, -1.2, 1.5, kPi});
  return grid_of({-kPi, -2.0, -0.7, 0.3, 1.9, kPi});
}

void trig_exactness(Outcome& o) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.5, 1.5);
  const auto thetas = linspace(-kPi, kPi, 997);
  double worst = 0.0;
  for (int m : {2, 3, 5}) {
    const PiecewiseGrid grid = trig_grid(m);
    const PiecewiseBasis b0(grid, 0);
    for (int N : {1, 3, 7}) {
      const double a0 = u(rng);
      Eigen::VectorXd a(N), b(N);
      for (int n = 0; n < N; ++n) {
        a[n] = u(rng);
        b[n] = u(rng);
      }
      auto f = [&](double t) {
        double s = a0;
        for (int n = 1; n <= N; ++n) s += a[n - 1] * std::cos(n * t) + b[n - 1] * std::sin(n * t);
        return s;
      };
      const Eigen::VectorXd c = trig_exact_expand(b0, a0, a, b);
      const int want0 = m * (2 * N + 1);
      const int got0 = count_significant(c, 1e-11);
      o.require(c.size() == want0 && got0 == want0,
                "b=0 count M=" + std::to_string(m) + " N=" + std::to_string(N) + ": " +
                    std::to_string(got0) + " vs " + std::to_string(want0));
      // The numerical transform must agree and terminate at the same place.
      const Eigen::VectorXd cn = pw_transform(b0, f, 1e-15);
      o.require(count_significant(cn, 1e-11) == want0, "transform count");
      o.require((resize_coeffs(cn, want0) - c).cwiseAbs().maxCoeff() < 1e-11, "transform values");
      double err = 0.0;
      for (double t : thetas) err = std::max(err, std::abs(pw_eval(b0, c, t) - f(t)));
      worst = std::max(worst, err);
      o.require(err < 1e-11, "b=0 reconstruction error " + std::to_string(err));

      const Eigen::VectorXd cm = trig_exact_expand(PiecewiseBasis(grid, -1), a0, a, b);
      const int want1 = m * std::max(2 * N, 1);
      o.require(count_significant(cm, 1e-11) == want1 && cm.size() == want1,
                "b=-1 count " + std::to_string(count_significant(cm, 1e-11)) + " vs " +
                    std::to_string(want1));
      double err1 = 0.0;
      const PiecewiseBasis bm(grid, -1);
      for (double t : thetas) err1 = std::max(err1, std::abs(pw_eval(bm, cm, t) - f(t)));
      worst = std::max(worst, err1);
      o.require(err1 < 1e-11, "b=-1 reconstruction error");
    }
  }
  o.detail << " max reconstruction error " << worst;
}

void mass_closed_forms(Outcome& o) {
  using boost::math::quadrature::gauss_kronrod;
  double worst = 0.0;
  for (double h : {-0.5, 0.0, 0.2, 0.9}) {
    const ArcBasis basis(0, h);
    const double phi = basis.phi();
    auto sq = [&](int idx) {
      return [&basis, idx](double t) {
        double v[2];
        arc_basis_values(basis, t, 2, v);
        return v[idx] * v[idx];
      };
    };
    const double qp = gauss_kronrod<double, 61>::integrate(sq(0), -phi, phi, 15, 1e-14);
    const double qq = gauss_kronrod<double, 61>::integrate(sq(1), -phi, phi, 15, 1e-14);
    const double ep = std::abs(mass_p_closed(h) - qp) / qp;
    const double eq = std::abs(mass_q_closed(h) - qq) / qq;
    worst = std::max({worst, ep, eq});
    o.require(ep < 1e-12, "m_p at h=" + std::to_string(h));
    o.require(eq < 1e-12, "m_q at h=" + std::to_string(h));
  }
  o.detail << " max relative error " << worst;
}

void structured_factorisation(Outcome& o) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> dm(3, 8), dp(4, 64);
  std::vector<double> ns, ops;
  double worst_f = 0.0, worst_r = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int m = dm(rng), p = dp(rng);
    const CB3Arrowhead a = arcsem::testing::random_cb3_spd(m, p, rng);
    const ReverseCholeskyFactor f = reverse_cholesky(a);
    const Eigen::MatrixXd A = a.dense(), L = f.dense_L();
    const double ef = (L.transpose() * L - A).norm() / A.norm();
    Eigen::VectorXd rhs = Eigen::VectorXd::NullaryExpr(a.size(), [&]() {
      return std::uniform_real_distribution<double>(-1, 1)(rng);
    });
    const Eigen::VectorXd x = solve(f, rhs);
    const double er = (A * x - rhs).norm() / rhs.norm();
    worst_f = std::max(worst_f, ef);
    worst_r = std::max(worst_r, er);
    ns.push_back(m + p * m);
    ops.push_back(static_cast<double>(f.factor_ops));
  }
  const double r2 = arcsem::testing::line_r2(ns, ops);
  o.require(worst_f <= 1e-12, "factor error " + std::to_string(worst_f));
  o.require(worst_r <= 1e-11, "solve residual");
  o.require(r2 > 0.99, "ops vs N R^2 = " + std::to_string(r2));
  o.detail << " max |L^T L - A|/|A| " << worst_f << ", max residual " << worst_r
           << ", ops R^2 " << r2;
}

bool near_breakpoint(const PiecewiseGrid& g, double t, double gap) {
  for (double b : g.breakpoints())
    if (std::abs(t - b) < gap) return true;
  return false;
}

void screened_poisson(Outcome& o) {
  const double w = 1.5;
  const auto thetas = linspace(-kPi, kPi, 1201);
  const PiecewiseGrid g10 = PiecewiseGrid::uniform(10);
  for (BasisKind kind : {BasisKind::arc, BasisKind::legendre}) {
    const auto space = Space::make(kind, g10);
    const std::string tag = to_string(kind);
    const SolutionField smooth =
        solve_screened_poisson(space, [](double t) { return std::cos(t); }, w, 144);
    double es = 0.0;
    for (double t : thetas) es = std::max(es, std::abs(smooth.value(t) - std::cos(t) / (1 + w * w)));
    o.require(es < 1e-10, tag + " smooth error " + std::to_string(es));

    const SolutionField u = solve_screened_poisson(space, step_pi3, w, 144);
    double e0 = 0.0, e1 = 0.0, e2 = 0.0;
    for (double t : thetas) {
      e0 = std::max(e0, std::abs(u.value(t) - arcsem::testing::screened_step_exact(t, w, 0)));
      if (near_breakpoint(g10, t, 1e-3)) continue;
      e1 = std::max(e1, std::abs(u.derivative(1, t) - arcsem::testing::screened_step_exact(t, w, 1)));
      e2 = std::max(e2, std::abs(u.derivative(2, t) - arcsem::testing::screened_step_exact(t, w, 2)));
    }
    o.require(e0 < 1e-8, tag + " step u error " + std::to_string(e0));
    o.require(e1 < 1e-6 && e2 < 1e-6, tag + " step derivative errors");
    o.detail << " " << tag << ": smooth " << es << ", step u/u'/u'' " << e0 << "/" << e1 << "/"
             << e2 << ";";
  }
}

void heat_drift(Outcome& o) {
  const double eps = 0.005, q = kPi / 4;
  const PiecewiseGrid g = grid_of({-kPi, -q - eps, -q + eps, q - eps, q + eps, kPi});
  EvolutionProblem p;
  p.kind = EvolutionKind::heat;
  p.initial = [eps](double t) { return heat_initial(t, eps); };
  p.times = linspace(0.0, 1.0, 11);
  p.trunc = 55;
  const DriftReport arc = periodic_drift(solve_evolution(Space::make(BasisKind::arc, g), p), 2);
  p.trunc = 15;
  const DriftReport leg =
      periodic_drift(solve_evolution(Space::make(BasisKind::legendre, g), p), 2);
  const auto& a1 = arc.drift.back();
  const auto& l1 = leg.drift.back();
  for (int d = 0; d <= 2; ++d)
    o.require(a1[d] < 1e-9, "arc drift d=" + std::to_string(d) + " = " + std::to_string(a1[d]));
  o.require(l1[1] >= 1e3 * a1[1], "legendre/arc d=1 ratio");
  o.detail << " t=1 arc drift d0..2 " << a1[0] << " " << a1[1] << " " << a1[2]
           << "; legendre d1 " << l1[1];
}

void schrodinger_drift(Outcome& o) {
  const PiecewiseGrid g = grid_of({-kPi, -kPi / 3, kPi / 3, kPi});
  EvolutionProblem p;
  p.kind = EvolutionKind::schrodinger;
  p.initial = schrodinger_initial;
  p.times = linspace(0.0, 1.0, 11);
  p.trunc = 60;
  const EvolutionResult ra = solve_evolution(Space::make(BasisKind::arc, g), p);
  const DriftReport arc = periodic_drift(ra, 2);
  p.trunc = 93;
  const DriftReport leg =
      periodic_drift(solve_evolution(Space::make(BasisKind::legendre, g), p), 1);
  double worst = 0.0;
  for (const auto& row : arc.drift)
    for (double v : row) worst = std::max(worst, v);
  o.require(worst < 1e-8, "arc drift " + std::to_string(worst));
  bool mono = true;
  for (std::size_t k = 1; k < leg.drift.size(); ++k)
    if (!(leg.drift[k][1] > leg.drift[k - 1][1])) mono = false;
  o.require(mono, "legendre d=1 drift not increasing");
  const double n0 = mass_norm2(ra.fields.front(), ra.mass);
  double dn = 0.0;
  for (const auto& f : ra.fields) dn = std::max(dn, std::abs(mass_norm2(f, ra.mass) - n0) / n0);
  o.require(dn < 1e-9, "mass drift " + std::to_string(dn));
  o.detail << " arc max drift " << worst << ", legendre d1 drift " << leg.drift.front()[1]
           << " -> " << leg.drift.back()[1] << ", relative norm change " << dn;
}

void eigen_experiment_check(Outcome& o) {
  const PiecewiseGrid g = grid_of({-kPi, -kPi / 3, kPi / 3, kPi});
  const auto space = Space::make(BasisKind::arc, g);
  const EigenResult r = eigen_experiment(space, 12);
  const double want[4] = {0, 1, 1, 4};
  double ev = 0.0;
  for (int i = 0; i < 4; ++i) ev = std::max(ev, std::abs(r.values[i] - want[i]));
  o.require(ev < 1e-6, "eigenvalues");
  // Project the lambda = 1 eigenfunctions onto span{cos, sin} by least squares.
  const auto thetas = linspace(-kPi, kPi, 301);
  Eigen::MatrixXd basis(thetas.size(), 2);
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    basis(i, 0) = std::cos(thetas[i]);
    basis(i, 1) = std::sin(thetas[i]);
  }
  double res = 0.0;
  for (int j : {1, 2}) {
    Eigen::VectorXd v(thetas.size());
    for (std::size_t i = 0; i < thetas.size(); ++i)
      v[i] = space->eval_m1(r.vectors.col(j), thetas[i]);
    const Eigen::VectorXd c = basis.colPivHouseholderQr().solve(v);
    res = std::max(res, (basis * c - v).cwiseAbs().maxCoeff() / v.cwiseAbs().maxCoeff());
  }
  o.require(res < 1e-6, "eigenspace residual " + std::to_string(res));
  o.detail << " eigenvalues " << r.values[0] << " " << r.values[1] << " " << r.values[2] << " "
           << r.values[3] << ", span residual " << res;
}

void convergence_rates(Outcome& o) {
  const PiecewiseGrid g = grid_of({-kPi, 0.0, kPi});
  const ConvergenceTable a = convergence_study(Space::make(BasisKind::arc, g), fig5_function);
  const ConvergenceTable l = convergence_study(Space::make(BasisKind::legendre, g), fig5_function);
  o.require(a.rho >= 1.50 && a.rho <= 1.66, "arc rho");
  o.require(l.rho >= 1.22 && l.rho <= 1.36, "legendre rho");
  o.require(a.rho > l.rho, "ordering");
  o.detail << " rho arc " << a.rho << " (degrees " << a.fit_first << "-" << a.fit_last
           << "), legendre " << l.rho << " (degrees " << l.fit_first << "-" << l.fit_last << ")";
}

void convection_diffusion(Outcome& o) {
  const PiecewiseGrid g = grid_of({-kPi, -kPi / 4, kPi / 4, kPi});
  EvolutionProblem p;
  p.kind = EvolutionKind::convection_diffusion;
  p.initial = convection_initial;
  p.velocity = [](double t) { return -std::sin(t) / 1000.0; };
  p.times = {2.5};
  p.trunc = 177;
  const auto arc_space = Space::make(BasisKind::arc, g);
  const DriftReport arc = periodic_drift(solve_evolution(arc_space, p), 2);
  p.trunc = 216;
  const DriftReport leg =
      periodic_drift(solve_evolution(Space::make(BasisKind::legendre, g), p), 2);
  const double ea = arc.drift[0][2], el = leg.drift[0][2];
  o.require(ea < 1e-10, "arc E2 " + std::to_string(ea));
  o.require(ea < el, "arc E2 not below legendre E2");

  // v = 0 must reproduce the heat solver.
  EvolutionProblem z = p;
  z.trunc = 177;
  z.times = {0.5, 2.5};
  z.velocity = [](double) { return 0.0; };
  EvolutionProblem h = z;
  h.kind = EvolutionKind::heat;
  const EvolutionResult rz = solve_evolution(arc_space, z), rh = solve_evolution(arc_space, h);
  double diff = 0.0;
  for (std::size_t k = 0; k < rz.fields.size(); ++k)
    for (double t : linspace(-kPi, kPi, 401))
      diff = std::max(diff, std::abs(rz.fields[k].value(t) - rh.fields[k].value(t)));
  o.require(diff < 1e-11, "v=0 vs heat " + std::to_string(diff));
  o.detail << " t=2.5 E2 arc " << ea << ", legendre " << el << "; v=0 vs heat " << diff;
}

void complexity(Outcome& o) {
  // N = 2^12 .. 2^16 with 16 coefficients per element.
  std::vector<int> elements;
  for (int e = 12; e <= 16; ++e) elements.push_back((1 << e) / 16);
  const auto pts = bench_screened_poisson(elements, 16, 5, 1);
  std::vector<double> n, tb, ts;
  for (const auto& p : pts) {
    n.push_back(p.n);
    tb.push_back(p.build_seconds);
    ts.push_back(p.solve_seconds);
  }
  const double sb = loglog_slope(n, tb), ss = loglog_slope(n, ts);
  o.require(sb >= 0.8 && sb <= 1.3, "build slope " + std::to_string(sb));
  o.require(ss >= 0.8 && ss <= 1.3, "solve slope " + std::to_string(ss));
  o.detail << " slopes build " << sb << ", solve " << ss;
}

}  // namespace

int main() {
  bool ok = true;
  ok &= run(1, "trig exactness", 1.0, trig_exactness);
  ok &= run(2, "mass closed forms", 1.0, mass_closed_forms);
  ok &= run(3, "structured factorisation", 10.0, structured_factorisation);
  ok &= run(4, "screened Poisson", 5.0, screened_poisson);
  ok &= run(5, "heat drift", 30.0, heat_drift);
  ok &= run(6, "Schrodinger drift", 60.0, schrodinger_drift);
  ok &= run(7, "eigenfunctions", 1.0, eigen_experiment_check);
  ok &= run(8, "convergence rates", 10.0, convergence_rates);
  ok &= run(9, "convection-diffusion", 120.0, convection_diffusion);
  ok &= run(10, "complexity", 300.0, complexity);
  return ok ? 0 : 1;
}
