#pragma once

#include <functional>
#include <string>

#include <Eigen/Dense>

#include "arcsem/banded.hpp"
#include "arcsem/semijacobi.hpp"

namespace arcsem {

// Arc {x^2 + y^2 = 1, x >= h} parametrised by theta in [-phi, phi].
// Interlaced basis ordering: p_0, q_1, p_1, q_2, p_2, ...
// p_n = P_n^{tau,(-1/2,b,-1/2)}(sigma), q_n = sin(theta) P_{n-1}^{tau,(1/2,b,1/2)}(sigma),
// sigma = (1 - cos theta)/(1 - h).
class ArcBasis {
 public:
  ArcBasis(int b, double h);
  // Preferred for short arcs: 1 - h is formed as 2 sin^2(phi/2).
  static ArcBasis from_half_angle(int b, double phi);

  int b() const { return b_; }
  double h() const { return h_; }
  double phi() const { return phi_; }
  double tau() const { return tau_; }
  double one_minus_h() const { return omh_; }

  WeightParams minus_params() const { return {tau_, -0.5, double(b_), -0.5}; }
  WeightParams plus_params() const { return {tau_, 0.5, double(b_), 0.5}; }
  ArcBasis with_b(int b) const;

  double sigma(double theta) const;
  // Nonnegative theta with sigma(theta) = s.
  double theta_of_sigma(double s) const;

 private:
  ArcBasis() = default;
  int b_ = 0;
  double h_ = 0, phi_ = 0, tau_ = 0, omh_ = 0;
};

inline int arc_p_index(int n) { return 2 * n; }
inline int arc_q_index(int n) { return 2 * n - 1; }

// Values of the first n interlaced basis functions at theta.
void arc_basis_values(const ArcBasis& basis, double theta, int n, double* out);
double eval_arc(const ArcBasis& basis, const Eigen::VectorXd& coeffs, double theta);

// R with P^{(b)} = P^{(b+1)} R, (0,2) banded; b in {-1, 0}.
BandedOperator arc_connection(const ArcBasis& basis, int n);
// D with dP^{(b)}/dtheta = P^{(b+1)} D, (1,3) banded; b in {-1, 0}.
BandedOperator arc_diff(const ArcBasis& basis, int n);
// Gram matrix of the unweighted arc-length inner product; b in {-1, 0}.
BandedOperator arc_mass(const ArcBasis& basis, int n);

// Closed forms 4 arccsc(sqrt tau) and (1-h)^2 [tau^2 arccsc(sqrt tau) + (2-tau) sqrt(tau-1)]/2.
double mass_p_closed(double h);
double mass_q_closed(double h);
// The same quantities as 2 phi and phi - sin(phi) cos(phi), without the
// cancellation the closed forms suffer on short arcs.
double arc_mass_p(const ArcBasis& basis);
double arc_mass_q(const ArcBasis& basis);

// Radau rule for (-1/2,b,-1/2) in sigma with the node at sigma = 0 (theta = 0).
QuadratureRule arc_radau(const ArcBasis& basis, int n);

// Interpolant at the n-point Radau nodes: 2n-1 interlaced coefficients. b >= 0.
Eigen::VectorXd arc_transform_fixed(const ArcBasis& basis,
                                    const std::function<double(double)>& f, int n);
// Adaptive transform with n doubling from 8 to 4096; b = -1 goes through b = 0
// and back-substitution with R.
Eigen::VectorXd arc_transform(const ArcBasis& basis,
                              const std::function<double(double)>& f,
                              double tol = 1e-14);
// Doubles n from 8 until the last eighth of compute(n) drops below tol
// relative to the largest entry, or stalls at a rounding plateau.
Eigen::VectorXd adaptive_coefficients(const std::function<Eigen::VectorXd(int)>& compute,
                                      double tol, const std::string& who);
// Drops trailing entries below tol * max|c| (keeps at least one).
Eigen::VectorXd chop_trailing(const Eigen::VectorXd& c, double tol);

// mu(j, n) for 0 <= j, n <= N: cos(n theta) = sum_j mu(j,n)/mu(0,0) p_j.
Eigen::MatrixXd trig_expand_cos(const ArcBasis& basis, int N);
// eta(j, n) for 1 <= j, n <= N (row/column 0 unused):
// sin(n theta) = sum_j eta(j,n)/eta(1,1) q_j.
Eigen::MatrixXd trig_expand_sin(const ArcBasis& basis, int N);
// Interlaced b = 0 coefficients (length 2N+1) of
// a0 + sum_{n=1}^N a[n-1] cos(n theta) + b[n-1] sin(n theta).
Eigen::VectorXd trig_local_coeffs(const ArcBasis& basis, double a0,
                                  const Eigen::VectorXd& a, const Eigen::VectorXd& b);

}  // namespace arcsem
