#include "arcsem/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

namespace arcsem {

namespace {

constexpr double kPi = std::numbers::pi;

void check_trunc(const Space& space, int trunc) {
  const int m = space.elements();
  if (trunc < m || trunc % m != 0)
    throw std::invalid_argument("truncation must be a positive multiple of the element count");
}

Eigen::MatrixXd dense(const SparseMatrix& s) { return Eigen::MatrixXd(s); }

}  // namespace

DerivativeReconstructor::DerivativeReconstructor(std::shared_ptr<const Space> space, int trunc,
                                                 int section)
    : space_(std::move(space)), trunc_(trunc) {
  check_trunc(*space_, trunc);
  const int m = space_->elements();
  section_ = section > 0 ? section : trunc + 2 * m;
  if (section_ % m != 0) throw std::invalid_argument("derivative section must be a multiple of M");
  d_full_ = space_->derivative(trunc + 2 * m, trunc);
}

Eigen::VectorXd DerivativeReconstructor::derivative_coeffs(const Eigen::VectorXd& u, int d) const {
  if (d < 1 || d > 3) throw std::invalid_argument("derivative order must be 1, 2 or 3");
  Eigen::VectorXd c = d_full_ * resize_coeffs(u, trunc_);
  for (int k = 1; k < d; ++k) {
    // R^{-1} on the section: element-wise left inverse of the connection.
    const Eigen::VectorXd x = space_->to_minus1(resize_coeffs(c, section_));
    c = space_->derivative(static_cast<int>(x.size()) + 2 * space_->elements(),
                           static_cast<int>(x.size())) * x;
  }
  return c;
}

double DerivativeReconstructor::value(const Eigen::VectorXd& u, int d, double theta) const {
  if (d == 0) return space_->eval_m1(resize_coeffs(u, trunc_), theta);
  return space_->eval0(derivative_coeffs(u, d), theta);
}

double SolutionField::derivative(int d, double theta, bool imaginary) const {
  const Eigen::VectorXd& c = imaginary ? imag : real;
  if (imaginary && !is_complex()) return 0.0;
  return recon->value(c, d, theta);
}

CB3Arrowhead screened_poisson_operator(const Space& space, double omega, int trunc) {
  check_trunc(space, trunc);
  if (!(omega > 0.0)) throw std::invalid_argument("screened Poisson: omega must be positive");
  SparseMatrix A = space.laplacian(trunc) + omega * omega * space.mass(trunc);
  A.makeCompressed();
  double scale = 0.0;
  for (int k = 0; k < A.nonZeros(); ++k) scale = std::max(scale, std::abs(A.valuePtr()[k]));
  return CB3Arrowhead::from_sparse(A, space.elements(), 2, 2, 1, 0, 1e-14 * scale);
}

SolutionField solve_screened_poisson(std::shared_ptr<const Space> space, const Function& f,
                                     double omega, int trunc, int section) {
  const ReverseCholeskyFactor fac = reverse_cholesky(screened_poisson_operator(*space, omega, trunc));
  const Eigen::VectorXd rhs = space->load(space->expand0(f), trunc);
  SolutionField u;
  u.space = space;
  u.recon = std::make_shared<DerivativeReconstructor>(space, trunc, section);
  u.real = solve(fac, rhs);
  return u;
}

Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& A) { return A.exp(); }

Eigen::VectorXd matrix_exponential(const Eigen::MatrixXd& A, double t, const Eigen::VectorXd& v) {
  if (A.rows() != A.cols() || A.cols() != v.size())
    throw std::invalid_argument("matrix_exponential: shape mismatch");
  const Eigen::MatrixXd E = (A * t).exp();
  if (!E.allFinite()) throw std::overflow_error("matrix_exponential: overflow");
  return E * v;
}

EvolutionKind parse_evolution_kind(const std::string& name) {
  if (name == "heat") return EvolutionKind::heat;
  if (name == "schrodinger") return EvolutionKind::schrodinger;
  if (name == "convection_diffusion" || name == "convdiff")
    return EvolutionKind::convection_diffusion;
  throw std::invalid_argument("unknown evolution problem '" + name + "'");
}

EvolutionResult solve_evolution(std::shared_ptr<const Space> space, const EvolutionProblem& p) {
  check_trunc(*space, p.trunc);
  if (!p.initial) throw std::invalid_argument("evolution: missing initial condition");
  const int n = p.trunc;
  EvolutionResult out;
  out.mass = dense(space->mass(n));
  Eigen::MatrixXd L = dense(space->laplacian(n));
  if (p.kind == EvolutionKind::convection_diffusion) {
    if (!p.velocity) throw std::invalid_argument("convection-diffusion: missing velocity");
    L += dense(space->advection(p.velocity, n));
  }
  const Eigen::LDLT<Eigen::MatrixXd> mfac(out.mass);
  const Eigen::MatrixXd G = mfac.solve(L);  // M^{-1} (-Laplacian [+ advection])
  const Eigen::VectorXd u0 = resize_coeffs(space->expand_m1(p.initial), n);
  auto recon = std::make_shared<DerivativeReconstructor>(space, n, p.section);

  Eigen::VectorXd v0 = u0;
  if (p.kind == EvolutionKind::schrodinger) {
    // u_t = i G u, split as [Re; Im].
    out.generator = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    out.generator.topRightCorner(n, n) = -G;
    out.generator.bottomLeftCorner(n, n) = G;
    v0 = Eigen::VectorXd::Zero(2 * n);
    v0.head(n) = u0;
  } else {
    out.generator = -G;
  }
  for (double t : p.times) {
    const Eigen::VectorXd v = matrix_exponential(out.generator, t, v0);
    SolutionField f;
    f.space = space;
    f.recon = recon;
    f.real = v.head(n);
    if (p.kind == EvolutionKind::schrodinger) f.imag = v.tail(n);
    out.times.push_back(t);
    out.fields.push_back(std::move(f));
  }
  return out;
}

double periodic_drift(const SolutionField& u, int d) {
  const double re = u.derivative(d, kPi) - u.derivative(d, -kPi);
  if (!u.is_complex()) return std::abs(re);
  const double im = u.derivative(d, kPi, true) - u.derivative(d, -kPi, true);
  return std::hypot(re, im);
}

DriftReport periodic_drift(const EvolutionResult& r, int d_max) {
  if (d_max < 0 || d_max > 3) throw std::invalid_argument("periodic_drift: d_max must be <= 3");
  DriftReport rep;
  rep.times = r.times;
  for (const auto& f : r.fields) {
    std::vector<double> row;
    for (int d = 0; d <= d_max; ++d) row.push_back(periodic_drift(f, d));
    rep.drift.push_back(std::move(row));
  }
  return rep;
}

double mass_norm2(const SolutionField& u, const Eigen::MatrixXd& mass) {
  double s = u.real.dot(mass * u.real);
  if (u.is_complex()) s += u.imag.dot(mass * u.imag);
  return s;
}

EigenResult eigen_experiment(std::shared_ptr<const Space> space, int trunc) {
  check_trunc(*space, trunc);
  const Eigen::MatrixXd L = dense(space->laplacian(trunc));
  const Eigen::MatrixXd M = dense(space->mass(trunc));
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(L, M);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigen_experiment: solver failed");
  return {es.eigenvalues(), es.eigenvectors()};
}

double fit_decay_rate(const std::vector<double>& values, int first, int last) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (int k = first; k <= last && k < static_cast<int>(values.size()); ++k) {
    if (!(values[k] > 0.0)) continue;
    const double y = std::log(values[k]);
    sx += k;
    sy += y;
    sxx += double(k) * k;
    sxy += k * y;
    ++n;
  }
  if (n < 2) throw std::runtime_error("fit_decay_rate: not enough points");
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return std::exp(-slope);
}

ConvergenceTable convergence_study(std::shared_ptr<const Space> space, const Function& f,
                                   double tol) {
  ConvergenceTable t;
  t.basis = space->name();
  t.coefficients = space->expand0(f, tol);
  const int m = space->elements();
  const int K = static_cast<int>(t.coefficients.size()) / m;
  const bool arc = space->kind() == BasisKind::arc;
  const int degrees = arc ? K / 2 + 1 : K;
  t.per_degree.assign(degrees, 0.0);
  for (int k = 0; k < K; ++k) {
    const int deg = arc ? (k + 1) / 2 : k;
    for (int e = 0; e < m; ++e)
      t.per_degree[deg] = std::max(t.per_degree[deg], std::abs(t.coefficients[k * m + e]));
  }
  // Fit the upper envelope (coefficients can oscillate or vanish by parity)
  // above the rounding floor, skipping the pre-asymptotic start.
  std::vector<double> env(degrees);
  double run = 0.0;
  for (int k = degrees - 1; k >= 0; --k) env[k] = run = std::max(run, t.per_degree[k]);
  const double top = env.empty() ? 0.0 : env[0];
  int last = 0;
  for (int k = 0; k < degrees; ++k)
    if (env[k] > 1e-13 * top) last = k;
  t.fit_last = last;
  t.fit_first = std::max(2, last / 8);
  t.rho = fit_decay_rate(env, t.fit_first, t.fit_last);
  return t;
}

std::vector<BenchPoint> bench_screened_poisson(const std::vector<int>& elements, int blocks,
                                              int repeats, std::uint64_t seed) {
  using clock = std::chrono::steady_clock;
  auto seconds = [](clock::time_point a, clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
  };
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
  };
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<BenchPoint> out;
  for (int m : elements) {
    const auto space = Space::make(BasisKind::arc, PiecewiseGrid::uniform(m + 1));
    const int n = blocks * m;
    Eigen::VectorXd rhs(n);
    for (int i = 0; i < n; ++i) rhs[i] = dist(rng);
    std::vector<double> build, solve_t;
    for (int r = 0; r <= repeats; ++r) {
      const auto t0 = clock::now();
      const ReverseCholeskyFactor fac = reverse_cholesky(screened_poisson_operator(*space, 1.5, n));
      const auto t1 = clock::now();
      const Eigen::VectorXd x = solve(fac, rhs);
      const auto t2 = clock::now();
      if (!x.allFinite()) throw std::runtime_error("bench: non-finite solution");
      if (r == 0) continue;  // warm-up
      build.push_back(seconds(t0, t1));
      solve_t.push_back(seconds(t1, t2));
    }
    out.push_back({n, median(build), median(solve_t)});
  }
  return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double a = std::log(x[i]), b = std::log(y[i]);
    sx += a;
    sy += b;
    sxx += a * a;
    sxy += a * b;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace arcsem
