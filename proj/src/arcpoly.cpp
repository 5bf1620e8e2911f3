#include "arcsem/arcpoly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace arcsem {

namespace {

int count_p(int n) { return n > 0 ? (n - 1) / 2 + 1 : 0; }
int count_q(int n) { return n / 2; }

void check_b(const ArcBasis& basis, const char* who) {
  if (basis.b() != -1 && basis.b() != 0)
    throw std::invalid_argument(std::string(who) + ": b must be -1 or 0");
}

}  // namespace

ArcBasis::ArcBasis(int b, double h) {
  if (b < -1 || b > 1) throw std::invalid_argument("ArcBasis: b must be -1, 0 or 1");
  if (!(std::abs(h) < 1.0)) throw std::invalid_argument("ArcBasis: |h| must be < 1");
  b_ = b;
  h_ = h;
  phi_ = std::acos(h);
  omh_ = 1.0 - h;
  tau_ = std::max(2.0 / omh_, 1.0 + 1e-12);
}

ArcBasis ArcBasis::from_half_angle(int b, double phi) {
  if (b < -1 || b > 1) throw std::invalid_argument("ArcBasis: b must be -1, 0 or 1");
  if (!(phi > 0.0) || !(phi < std::numbers::pi))
    throw std::invalid_argument("ArcBasis: phi must lie in (0, pi)");
  ArcBasis r;
  r.b_ = b;
  r.phi_ = phi;
  r.h_ = std::cos(phi);
  const double s = std::sin(0.5 * phi);
  r.omh_ = 2.0 * s * s;
  r.tau_ = std::max(1.0 / (s * s), 1.0 + 1e-12);
  return r;
}

ArcBasis ArcBasis::with_b(int b) const {
  ArcBasis r = *this;
  if (b < -1 || b > 1) throw std::invalid_argument("ArcBasis: b must be -1, 0 or 1");
  r.b_ = b;
  return r;
}

double ArcBasis::sigma(double theta) const {
  const double s = std::sin(0.5 * theta);
  return 2.0 * s * s / omh_;
}

double ArcBasis::theta_of_sigma(double s) const {
  const double v = std::sqrt(0.5 * omh_ * std::max(s, 0.0));
  return 2.0 * std::asin(std::min(v, 1.0));
}

void arc_basis_values(const ArcBasis& basis, double theta, int n, double* out) {
  if (n <= 0) return;
  const int np = count_p(n), nq = count_q(n);
  const double s = basis.sigma(theta), y = std::sin(theta);
  std::vector<double> pm(np), pp(std::max(nq, 1));
  eval_basis(recurrence_coeffs(basis.minus_params(), np + 1), s, np, pm.data());
  if (nq > 0) eval_basis(recurrence_coeffs(basis.plus_params(), nq + 1), s, nq, pp.data());
  for (int k = 0; k < np; ++k) out[2 * k] = pm[k];
  for (int k = 1; k <= nq; ++k) out[2 * k - 1] = y * pp[k - 1];
}

double eval_arc(const ArcBasis& basis, const Eigen::VectorXd& coeffs, double theta) {
  const int n = static_cast<int>(coeffs.size());
  if (n == 0) return 0.0;
  const int np = count_p(n), nq = count_q(n);
  std::vector<double> fp(np), fq(nq);
  for (int k = 0; k < np; ++k) fp[k] = coeffs[2 * k];
  for (int k = 1; k <= nq; ++k) fq[k - 1] = coeffs[2 * k - 1];
  const double s = basis.sigma(theta);
  double v = evaluate(recurrence_coeffs(basis.minus_params(), np + 1), fp.data(), np, s);
  if (nq > 0)
    v += std::sin(theta) *
         evaluate(recurrence_coeffs(basis.plus_params(), nq + 1), fq.data(), nq, s);
  return v;
}

BandedOperator arc_connection(const ArcBasis& basis, int n) {
  check_b(basis, "arc_connection");
  if (n < 1) throw std::invalid_argument("arc_connection: n < 1");
  const ArcBasis up = basis.with_b(basis.b() + 1);
  const int np = count_p(n), nq = count_q(n);
  const BandedOperator rm = connection_matrix(basis.minus_params(), up.minus_params(), np);
  BandedOperator r(n, n, 0, 2);
  for (int j = 0; j < np; ++j)
    for (int i = std::max(0, j - 1); i <= j; ++i) r.at(2 * i, 2 * j) = rm(i, j);
  if (nq > 0) {
    const BandedOperator rp = connection_matrix(basis.plus_params(), up.plus_params(), nq);
    for (int j = 1; j <= nq; ++j)
      for (int i = std::max(1, j - 1); i <= j; ++i) r.at(2 * i - 1, 2 * j - 1) = rp(i - 1, j - 1);
  }
  return r;
}

BandedOperator arc_diff(const ArcBasis& basis, int n) {
  check_b(basis, "arc_diff");
  if (n < 1) throw std::invalid_argument("arc_diff: n < 1");
  const ArcBasis up = basis.with_b(basis.b() + 1);
  const int np = count_p(n), nq = count_q(n);
  const double omh = basis.one_minus_h(), tau = basis.tau();
  BandedOperator d(n, n, 1, 3);

  // dp_j/dtheta = sin(theta) P^-'_j(sigma)/(1-h), expanded in q^{(b+1)}.
  const BandedOperator dm = differentiation_matrix(basis.minus_params(), np);
  for (int j = 0; j < np; ++j)
    for (int i = std::max(0, j - 2); i <= j - 1; ++i) {
      const int row = 2 * (i + 1) - 1;
      if (row < n) d.at(row, 2 * j) = dm(i, j) / omh;
    }

  // dq_j/dtheta = x P^+_{j-1} + (1-h) sigma (tau - sigma) P^+'_{j-1}, in p^{(b+1)}.
  if (nq > 0) {
    const RecurrenceCoeffs rp = recurrence_coeffs(basis.plus_params(), nq + 1);
    std::vector<double> v(nq), dv(nq);
    const BandedOperator dq = project_columns(
        up.minus_params(), nq + 1, nq, 1, 0, nq, [&](double s, double* out) {
          eval_basis(rp, s, nq, v.data(), dv.data());
          const double x = 1.0 - omh * s;
          for (int j = 0; j < nq; ++j) out[j] = x * v[j] + omh * s * (tau - s) * dv[j];
        });
    for (int j = 1; j <= nq; ++j)
      for (int k = j - 1; k <= j; ++k) {
        const int row = 2 * k;
        if (row < n) d.at(row, 2 * j - 1) = dq(k, j - 1);
      }
  }
  return d;
}

double mass_p_closed(double h) {
  const double tau = std::max(2.0 / (1.0 - h), 1.0 + 1e-12);
  return 4.0 * std::asin(1.0 / std::sqrt(tau));
}

double mass_q_closed(double h) {
  const double tau = std::max(2.0 / (1.0 - h), 1.0 + 1e-12);
  const double omh = 1.0 - h;
  return 0.5 * omh * omh *
         (tau * tau * std::asin(1.0 / std::sqrt(tau)) + (2.0 - tau) * std::sqrt(tau - 1.0));
}

double arc_mass_p(const ArcBasis& basis) { return 2.0 * basis.phi(); }

double arc_mass_q(const ArcBasis& basis) {
  const double phi = basis.phi();
  if (phi > 0.5) return phi - std::sin(phi) * std::cos(phi);
  // phi - sin(2 phi)/2 = sum_{k>=1} (-1)^{k+1} (2 phi)^{2k+1} / (2 (2k+1)!)
  const double z = 2.0 * phi;
  double term = z * z * z / 12.0, sum = 0.0;
  for (int k = 1; k < 30; ++k) {
    sum += term;
    term *= -z * z / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

BandedOperator arc_mass(const ArcBasis& basis, int n) {
  check_b(basis, "arc_mass");
  if (n < 1) throw std::invalid_argument("arc_mass: n < 1");
  const ArcBasis b0 = basis.with_b(0);
  const double mp = arc_mass_p(b0), mq = arc_mass_q(b0);
  if (basis.b() == 0) {
    BandedOperator m(n, n, 0, 0);
    for (int i = 0; i < n; ++i) m.at(i, i) = (i % 2 == 0) ? mp : mq;
    return m;
  }
  const BandedOperator r = arc_connection(basis, n + 2);
  BandedOperator m(n, n, 2, 2);
  for (int j = 0; j < n; ++j)
    for (int i = std::max(0, j - 2); i <= std::min(n - 1, j + 2); ++i) {
      double s = 0.0;
      for (int k = std::max(i, j) - 2; k <= std::min(i, j); ++k)
        if (k >= 0) s += r(k, i) * ((k % 2 == 0) ? mp : mq) * r(k, j);
      m.at(i, j) = s;
    }
  return m;
}

QuadratureRule arc_radau(const ArcBasis& basis, int n) {
  return gauss_radau(basis.minus_params(), n, 0.0);
}

Eigen::VectorXd arc_transform_fixed(const ArcBasis& basis,
                                    const std::function<double(double)>& f, int n) {
  if (basis.b() < 0) throw std::invalid_argument("arc_transform_fixed: b must be >= 0");
  if (n < 1) throw std::invalid_argument("arc_transform_fixed: n < 1");
  const QuadratureRule rule = arc_radau(basis, n);
  const RecurrenceCoeffs rm = recurrence_coeffs(basis.minus_params(), n + 1);
  const RecurrenceCoeffs rp = recurrence_coeffs(basis.plus_params(), n + 1);
  const int len = 2 * n - 1;
  Eigen::VectorXd num = Eigen::VectorXd::Zero(len), den = Eigen::VectorXd::Zero(len);
  std::vector<double> pm(n), pp(std::max(n - 1, 1));
  for (int j = 0; j < n; ++j) {
    const double s = rule.nodes[j], w = rule.weights[j];
    eval_basis(rm, s, n, pm.data());
    if (j == 0) {
      // Pinned node at theta = 0 counted with weight 2 w_1.
      const double f0 = f(0.0);
      for (int k = 0; k < n; ++k) {
        num[2 * k] += 2.0 * w * f0 * pm[k];
        den[2 * k] += 2.0 * w * pm[k] * pm[k];
      }
      continue;
    }
    const double th = basis.theta_of_sigma(s);
    const double y = std::sin(th);
    const double fe = f(th) + f(-th), fo = f(th) - f(-th);
    for (int k = 0; k < n; ++k) {
      num[2 * k] += w * fe * pm[k];
      den[2 * k] += 2.0 * w * pm[k] * pm[k];
    }
    if (n > 1) {
      eval_basis(rp, s, n - 1, pp.data());
      for (int k = 1; k < n; ++k) {
        num[2 * k - 1] += w * y * fo * pp[k - 1];
        den[2 * k - 1] += 2.0 * w * y * y * pp[k - 1] * pp[k - 1];
      }
    }
  }
  return num.cwiseQuotient(den);
}

Eigen::VectorXd chop_trailing(const Eigen::VectorXd& c, double tol) {
  const double mx = c.size() ? c.cwiseAbs().maxCoeff() : 0.0;
  int last = 0;
  for (int i = 0; i < c.size(); ++i)
    if (std::abs(c[i]) > tol * mx) last = i;
  if (c.size() == 0) return Eigen::VectorXd::Zero(1);
  return c.head(last + 1);
}

Eigen::VectorXd arc_transform(const ArcBasis& basis, const std::function<double(double)>& f,
                              double tol) {
  if (basis.b() == -1) {
    const Eigen::VectorXd c0 = arc_transform(basis.with_b(0), f, tol);
    const BandedOperator r = arc_connection(basis, static_cast<int>(c0.size()));
    return r.back_substitute(c0);
  }
  return adaptive_coefficients([&](int n) { return arc_transform_fixed(basis, f, n); }, tol,
                               "arc_transform");
}

Eigen::VectorXd adaptive_coefficients(const std::function<Eigen::VectorXd(int)>& compute,
                                      double tol, const std::string& who) {
  Eigen::VectorXd prev;
  double prev_tail = 0.0;
  for (int n = 8; n <= 4096; n *= 2) {
    const Eigen::VectorXd c = compute(n);
    const double mx = c.cwiseAbs().maxCoeff();
    if (!std::isfinite(mx)) throw std::runtime_error(who + ": non-finite coefficients");
    if (mx == 0.0) return Eigen::VectorXd::Zero(1);
    const int len = static_cast<int>(c.size());
    const double tail = c.tail(std::min(len, std::max((len + 7) / 8, 4))).cwiseAbs().maxCoeff();
    if (tail < tol * mx) return chop_trailing(c, tol);
    // Rounding plateau: doubling n no longer shrinks the tail.
    if (prev.size() && tail > 0.25 * prev_tail && prev_tail < 1e-11 * mx) {
      const double level = std::max(tol, 4.0 * std::min(tail, prev_tail) / mx);
      return chop_trailing(prev_tail <= tail ? prev : c, level);
    }
    prev = c;
    prev_tail = tail;
  }
  throw std::runtime_error(who + ": no convergence at n = 4096");
}

Eigen::MatrixXd trig_expand_cos(const ArcBasis& basis, int N) {
  if (N < 0) throw std::invalid_argument("trig_expand_cos: N < 0");
  const ArcBasis b0 = basis.with_b(0);
  const RecurrenceCoeffs rc = recurrence_coeffs(b0.minus_params(), N + 2);
  const LinearCoeffs lc = linear_coeffs(b0.minus_params());
  const double hm1 = -b0.one_minus_h();
  Eigen::MatrixXd mu = Eigen::MatrixXd::Zero(N + 1, N + 1);
  mu(0, 0) = 4.0 * std::asin(1.0 / std::sqrt(b0.tau()));
  if (N >= 1) {
    mu(0, 1) = mu(0, 0) * (1.0 + hm1 * lc.alpha);
    mu(1, 1) = mu(0, 0) * hm1 / lc.beta;
  }
  auto at = [&](int j, int n) { return (j < 0 || j > N || j > n) ? 0.0 : mu(j, n); };
  for (int n = 2; n <= N; ++n)
    for (int j = 0; j <= n; ++j)
      mu(j, n) = 2.0 * (1.0 + hm1 * rc.a[j]) * at(j, n - 1) - at(j, n - 2) +
                 2.0 * hm1 * (rc.c[j] * at(j - 1, n - 1) + rc.b[j] * at(j + 1, n - 1));
  return mu;
}

Eigen::MatrixXd trig_expand_sin(const ArcBasis& basis, int N) {
  if (N < 1) throw std::invalid_argument("trig_expand_sin: N < 1");
  const ArcBasis b0 = basis.with_b(0);
  const RecurrenceCoeffs rc = recurrence_coeffs(b0.plus_params(), N + 2);
  const LinearCoeffs lc = linear_coeffs(b0.plus_params());
  const double hm1 = -b0.one_minus_h(), tau = b0.tau(), omh = b0.one_minus_h();
  Eigen::MatrixXd eta = Eigen::MatrixXd::Zero(N + 1, N + 1);
  eta(1, 1) = 0.5 * omh * omh *
              (tau * tau * std::asin(1.0 / std::sqrt(tau)) + (2.0 - tau) * std::sqrt(tau - 1.0));
  if (N >= 2) {
    eta(1, 2) = 2.0 * eta(1, 1) * (1.0 + hm1 * lc.alpha);
    eta(2, 2) = 2.0 * eta(1, 1) * hm1 / lc.beta;
  }
  auto at = [&](int j, int n) { return (j < 1 || j > N || j > n || n < 1) ? 0.0 : eta(j, n); };
  for (int n = 3; n <= N; ++n)
    for (int j = 1; j <= n; ++j)
      eta(j, n) = 2.0 * (1.0 + hm1 * rc.a[j - 1]) * at(j, n - 1) - at(j, n - 2) +
                  2.0 * hm1 * (rc.c[j - 1] * at(j - 1, n - 1) + rc.b[j - 1] * at(j + 1, n - 1));
  return eta;
}

Eigen::VectorXd trig_local_coeffs(const ArcBasis& basis, double a0, const Eigen::VectorXd& a,
                                  const Eigen::VectorXd& b) {
  if (a.size() != b.size()) throw std::invalid_argument("trig_local_coeffs: size mismatch");
  const int N = static_cast<int>(a.size());
  Eigen::VectorXd c = Eigen::VectorXd::Zero(2 * N + 1);
  c[0] = a0;
  if (N == 0) return c;
  const Eigen::MatrixXd mu = trig_expand_cos(basis, N);
  const Eigen::MatrixXd eta = trig_expand_sin(basis, N);
  for (int n = 1; n <= N; ++n) {
    for (int j = 0; j <= n; ++j) c[2 * j] += a[n - 1] * mu(j, n) / mu(0, 0);
    for (int j = 1; j <= n; ++j) c[2 * j - 1] += b[n - 1] * eta(j, n) / eta(1, 1);
  }
  return c;
}

}  // namespace arcsem
