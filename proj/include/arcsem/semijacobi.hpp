#pragma once

#include <functional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "arcsem/banded.hpp"

namespace arcsem {

// Semiclassical Jacobi weight x^a (1-x)^b (t-x)^c on [0,1], t > 1.
// b = -1 selects the derived family P_0 = 1, P_n = (1-x) P^{(a,1,c)}_{n-1}.
struct WeightParams {
  double t = 2.0, a = 0.0, b = 0.0, c = 0.0;
  bool operator==(const WeightParams&) const = default;
};

// Throws std::domain_error for parameters outside the supported range.
void validate(const WeightParams& p);

// x P_n = c_n P_{n-1} + a_n P_n + b_n P_{n+1}, with P_0 = 1 and every P_n
// sharing the norm of P_0 when the weight is integrable.
struct RecurrenceCoeffs {
  WeightParams params;
  std::vector<double> a, b, c;
  int size() const { return static_cast<int>(a.size()); }
};

struct LinearCoeffs {
  double alpha, beta;  // P_1 = beta (x - alpha)
};

struct QuadratureRule {
  std::vector<double> nodes, weights;
  bool fixed_node = false;  // true for Radau rules; nodes[0] is the pinned one
};

// B(a+1,b+1) t^c 2F1(a+1, -c; a+b+2; 1/t).
double weight_integral(const WeightParams& p);
LinearCoeffs linear_coeffs(const WeightParams& p);

// Coefficients for n = 0..n_max.
RecurrenceCoeffs recurrence_coeffs(const WeightParams& p, int n_max);

// Clenshaw summation of sum_k f_k P_k(x). Valid outside [0,1] too, where the
// polynomials are simply extrapolated.
double evaluate(const RecurrenceCoeffs& rc, const double* f, int n, double x);
double evaluate(const RecurrenceCoeffs& rc, const Eigen::VectorXd& f, double x);

// P_0..P_{n-1} at x (and their derivatives if dp is non-null).
void eval_basis(const RecurrenceCoeffs& rc, double x, int n, double* p,
                double* dp = nullptr);

// n x n section of J with x P = P J.
BandedOperator jacobi_matrix(const RecurrenceCoeffs& rc, int n);

// R with P^{src} = P^{dst} R (n x n). Upper bandwidth equals the total
// parameter increase.
BandedOperator connection_matrix(const WeightParams& src,
                                 const WeightParams& dst, int n);

// L with w^{src} P^{src} = w^{dst} P^{dst} L where dst lowers each tagged
// parameter ('a', 'b' or 'c') by one. Result is n x n, lower bandwidth equal
// to the number of tags.
BandedOperator weighted_connection(const WeightParams& src,
                                   const WeightParams& dst, int n,
                                   std::string_view tags);

// D with d/dx P^{(a,b,c)} = P^{(a+1,b+1,c+1)} D, n x n, (-1, 2) banded.
BandedOperator differentiation_matrix(const WeightParams& src, int n);

// Gauss-Radau rule with n nodes, one pinned at `endpoint`; exact for
// degree <= 2n-2 against the weight.
QuadratureRule gauss_radau(const WeightParams& p, int n, double endpoint = 1.0);
QuadratureRule gauss_rule(const WeightParams& p, int n);
// Weight x^a (1-x)^b on [0,1].
QuadratureRule gauss_jacobi(double a, double b, int n);
// Unit weight on [-1,1].
QuadratureRule gauss_legendre(int n);
// Eigenvalues of the symmetric tridiagonal matrix (diag, offdiag) and
// mu0 * (first eigenvector component)^2, sorted by node.
QuadratureRule golub_welsch(std::vector<double> diag,
                            std::vector<double> offdiag, double mu0);

// Coefficients of polynomial columns in the dst family, by Gauss quadrature
// exact up to total degree max_degree. eval_cols(x, out) writes the value of
// column j at x into out[j]. Entries within the band are stored; two extra
// diagonals on each side are checked to vanish.
BandedOperator project_columns(
    const WeightParams& dst, int rows, int cols, int lower, int upper,
    int max_degree,
    const std::function<void(double, double*)>& eval_cols);

}  // namespace arcsem
