#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "arcsem/space.hpp"
#include "arcsem/structmat.hpp"

namespace arcsem {

// Derivatives of a b = -1 expansion: u' = P^{(0)} D u and, for d >= 2, the
// chain P^{(0)} D [R]^{-1} D ... with [R]^{-1} applied to the first S
// coefficients of the continuous intermediate derivative.
class DerivativeReconstructor {
 public:
  // section <= 0 keeps every coefficient (S = trunc + 2M).
  DerivativeReconstructor(std::shared_ptr<const Space> space, int trunc, int section = 0);

  int trunc() const { return trunc_; }
  int section() const { return section_; }
  // b = 0 coefficients of u^{(d)} for 1 <= d <= 3.
  Eigen::VectorXd derivative_coeffs(const Eigen::VectorXd& u, int d) const;
  double value(const Eigen::VectorXd& u, int d, double theta) const;

 private:
  std::shared_ptr<const Space> space_;
  int trunc_, section_;
  SparseMatrix d_full_;
};

// A b = -1 expansion, complex when `imag` is nonempty.
struct SolutionField {
  std::shared_ptr<const Space> space;
  std::shared_ptr<const DerivativeReconstructor> recon;
  Eigen::VectorXd real, imag;

  bool is_complex() const { return imag.size() > 0; }
  double value(double theta) const { return derivative(0, theta); }
  double derivative(int d, double theta, bool imaginary = false) const;
};

// -Laplacian + omega^2 M as a CB3(2,2;1,0) matrix.
CB3Arrowhead screened_poisson_operator(const Space& space, double omega, int trunc);
SolutionField solve_screened_poisson(std::shared_ptr<const Space> space, const Function& f,
                                     double omega, int trunc, int section = 0);

// expm(A t) v by scaling and squaring with a degree-13 Pade approximant.
Eigen::VectorXd matrix_exponential(const Eigen::MatrixXd& A, double t, const Eigen::VectorXd& v);
Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& A);

enum class EvolutionKind { heat, schrodinger, convection_diffusion };
EvolutionKind parse_evolution_kind(const std::string& name);

struct EvolutionProblem {
  EvolutionKind kind = EvolutionKind::heat;
  Function initial;
  Function velocity;  // convection-diffusion only
  int trunc = 0;
  int section = 0;
  std::vector<double> times;
};

struct EvolutionResult {
  std::vector<double> times;
  std::vector<SolutionField> fields;
  Eigen::MatrixXd generator;  // real form used for expm
  Eigen::MatrixXd mass;       // b = -1 mass section
};

EvolutionResult solve_evolution(std::shared_ptr<const Space> space, const EvolutionProblem& p);

// |u^{(d)}(pi) - u^{(d)}(-pi)|, complex modulus for complex fields.
double periodic_drift(const SolutionField& u, int d);

struct DriftReport {
  std::vector<double> times;
  std::vector<std::vector<double>> drift;  // drift[k][d]
};
DriftReport periodic_drift(const EvolutionResult& r, int d_max);

// u^* M u.
double mass_norm2(const SolutionField& u, const Eigen::MatrixXd& mass);

struct EigenResult {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns are b = -1 coefficient vectors
};
// -Laplacian u = lambda M u on trunc x trunc sections.
EigenResult eigen_experiment(std::shared_ptr<const Space> space, int trunc);

struct ConvergenceTable {
  std::string basis;
  std::vector<double> per_degree;  // max |coefficient| at each polynomial degree
  Eigen::VectorXd coefficients;    // b = 0 interlaced vector
  double rho = 0.0;                // fitted decay rate
  int fit_first = 0, fit_last = 0;
};
ConvergenceTable convergence_study(std::shared_ptr<const Space> space, const Function& f,
                                   double tol = 1e-15);
// Least-squares decay rate exp(-slope) of log(values) over degrees [first, last].
double fit_decay_rate(const std::vector<double>& values, int first, int last);

struct BenchPoint {
  int n = 0;
  double build_seconds = 0.0;  // assemble + factorise
  double solve_seconds = 0.0;
};
// Screened Poisson on uniform arc grids with `blocks` coefficients per
// element; median of `repeats` timings after one discarded warm-up.
std::vector<BenchPoint> bench_screened_poisson(const std::vector<int>& elements, int blocks,
                                              int repeats, std::uint64_t seed);
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace arcsem
