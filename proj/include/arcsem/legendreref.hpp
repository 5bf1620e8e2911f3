#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "arcsem/piecewise.hpp"

namespace arcsem {

// Periodic piecewise integrated-Legendre basis on a grid, with local
// variable s = (2 theta - theta_e - theta_{e+1}) / l_e in [-1, 1].
// Layouts (M elements):
//   b = 0:  P_k on element e at k M + e.
//   b = -1: affine hats in block 0, bubble W_k at (k + 1) M + e, where
//           W_k(s) = (1 - s^2) C_k^{(3/2)}(s) / ((k+1)(k+2)) = (P_k - P_{k+2}) / (2k + 3).
class LegendreBasis {
 public:
  LegendreBasis(PiecewiseGrid grid, int b);
  const PiecewiseGrid& grid() const { return grid_; }
  int b() const { return b_; }
  int elements() const { return grid_.elements(); }

 private:
  PiecewiseGrid grid_;
  int b_;
};

// Piecewise-linear hat, equal to 1 at breakpoint i.
double leg_hat(const PiecewiseGrid& grid, int i, double theta);
// W_k(s) and its s-derivative.
double leg_bubble(int k, double s, double* ds = nullptr);

double leg_eval(const LegendreBasis& basis, const Eigen::VectorXd& coeffs, double theta);

// R and D in the conventions of pw_connection_sparse.
SparseMatrix leg_connection_sparse(const PiecewiseGrid& grid, int rows, int cols);
SparseMatrix leg_derivative_sparse(const PiecewiseGrid& grid, int rows, int cols);
Eigen::VectorXd leg_mass0_diag(const PiecewiseGrid& grid, int n);

struct LegendreOperators {
  SparseMatrix mass;        // b = -1 Gram matrix
  SparseMatrix laplacian;   // -Laplacian (stiffness)
  SparseMatrix derivative;  // D, (trunc + 2M) x trunc
};

// Mass and stiffness by element-wise Gauss-Legendre quadrature (exact for
// these polynomial integrands).
LegendreOperators leg_operators(const PiecewiseGrid& grid, int trunc);
// int W_i v W_j' over the grid, by Gauss-Legendre quadrature with `nodes`
// points per element.
SparseMatrix leg_advection(const PiecewiseGrid& grid, const Function& v, int trunc, int nodes);

// Per-element Legendre expansion (adaptive), then the b = -1 conversion when
// requested; hat values are averages of the one-sided limits.
Eigen::VectorXd leg_transform(const LegendreBasis& basis, const Function& f, double tol = 1e-14);
Eigen::VectorXd leg_to_minus1(const PiecewiseGrid& grid, const Eigen::VectorXd& c0);

}  // namespace arcsem
