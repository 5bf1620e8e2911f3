#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "arcsem/arcpoly.hpp"
#include "arcsem/structmat.hpp"

namespace arcsem {

using Function = std::function<double(double)>;

// Breakpoints -pi = theta_0 < ... < theta_M = pi of a periodic grid with M
// elements E_e = [theta_e, theta_{e+1}].
class PiecewiseGrid {
 public:
  // Endpoints within 1e-6 of -pi and pi are snapped to them.
  explicit PiecewiseGrid(std::vector<double> breakpoints);
  // `points` equally spaced breakpoints, i.e. points - 1 elements.
  static PiecewiseGrid uniform(int points);
  // "uniform:k", a comma separated list, or the path of a JSON file holding
  // either a list or {"breakpoints": [...]}.
  static PiecewiseGrid parse(const std::string& spec);
  static PiecewiseGrid from_json(const std::string& text);
  std::string to_json() const;

  int elements() const { return static_cast<int>(bp_.size()) - 1; }
  const std::vector<double>& breakpoints() const { return bp_; }
  double left(int e) const { return bp_.at(e); }
  double right(int e) const { return bp_.at(e + 1); }
  double length(int e) const { return bp_.at(e + 1) - bp_.at(e); }
  double center(int e) const { return 0.5 * (bp_.at(e) + bp_.at(e + 1)); }
  double half_angle(int e) const { return 0.5 * length(e); }

  // Element containing theta after wrapping into [-pi, pi]. A breakpoint
  // belongs to the element on its right; pi belongs to the last element.
  // `local` receives theta - center(e).
  int locate(double theta, double* local = nullptr) const;

 private:
  std::vector<double> bp_;
};

// Hat function i (equal to 1 at theta_i), built from linear trigonometric
// pieces on E_{i-1} and E_i.
double hat_eval(const PiecewiseGrid& grid, int i, double theta);

// Interlaced coefficient layouts (M elements):
//   b = 0:  local index k on element e sits at k M + e, local k following the
//           arc ordering p_0, q_1, p_1, q_2, ...
//   b = -1: block 0 holds the M hat coefficients; the local bubble with arc
//           index k >= 2 (q_2, p_1, q_3, ...) sits at (k - 1) M + e.
class PiecewiseBasis {
 public:
  PiecewiseBasis(PiecewiseGrid grid, int b);

  const PiecewiseGrid& grid() const { return grid_; }
  int b() const { return b_; }
  int elements() const { return grid_.elements(); }
  // Element arc with the basis' b.
  const ArcBasis& arc(int e) const { return arcs_.at(e); }

 private:
  PiecewiseGrid grid_;
  int b_;
  std::vector<ArcBasis> arcs_;
};

// Local arc-basis coefficients of element e gathered from a b = 0 vector.
Eigen::VectorXd gather_local(const Eigen::VectorXd& c, int m, int e);

double pw_eval(const PiecewiseBasis& basis, const Eigen::VectorXd& coeffs, double theta);

// R with P^{(-1)} = P^{(0)} R: rows b = 0 coefficients, cols b = -1 ones; both
// multiples of M. Hat columns use closed forms.
SparseMatrix pw_connection_sparse(const PiecewiseGrid& grid, int rows, int cols);
// D with dP^{(-1)}/dtheta = P^{(0)} D, same shape conventions.
SparseMatrix pw_derivative_sparse(const PiecewiseGrid& grid, int rows, int cols);
// Diagonal of M^{(0)} for the first n b = 0 coefficients.
Eigen::VectorXd pw_mass0_diag(const PiecewiseGrid& grid, int n);

// Principal trunc x trunc sections as CB^3 matrices (trunc a multiple of M).
CB3Arrowhead pw_connection(const PiecewiseBasis& basis, int trunc);  // (1,1;1,0)
CB3Arrowhead pw_diff(const PiecewiseBasis& basis, int trunc);        // (2,2;1,0)
// b = -1: R^T M^{(0)} R; b = 0: the diagonal stored as CB^3(0,0;0,0).
CB3Arrowhead pw_mass(const PiecewiseBasis& basis, int trunc);
// -Laplacian, D^T M^{(0)} D.
CB3Arrowhead weak_laplacian(const PiecewiseBasis& basis, int trunc);

// Per-element adaptive transform. b = 0 gives each element's chopped arc
// expansion; b = -1 converts every element by back-substitution and takes
// hat values as the mean of the two one-sided values.
Eigen::VectorXd pw_transform(const PiecewiseBasis& basis, const Function& f,
                             double tol = 1e-14);
// b = 0 -> b = -1 conversion of a finite b = 0 vector (same local degrees).
Eigen::VectorXd pw_to_minus1(const PiecewiseGrid& grid, const Eigen::VectorXd& c0);

// Multiplication by a in the b = 0 basis, block diagonal over elements;
// rows = cols = n (a multiple of M).
SparseMatrix pw_mult(const PiecewiseGrid& grid, const Function& a, int n);

// Exact expansion of a0 + sum a_n cos(n theta) + b_n sin(n theta) with
// M (2N + 1) (b = 0) or M max(2N, 1) (b = -1) coefficients.
Eigen::VectorXd trig_exact_expand(const PiecewiseBasis& basis, double a0,
                                  const Eigen::VectorXd& a, const Eigen::VectorXd& b);

// Number of entries with |c| > tol.
int count_significant(const Eigen::VectorXd& c, double tol);

}  // namespace arcsem
