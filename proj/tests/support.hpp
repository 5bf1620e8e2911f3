#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "arcsem/structmat.hpp"

namespace arcsem::testing {

inline constexpr double kPi = std::numbers::pi;

inline std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = a + (b - a) * i / (n - 1);
  return x;
}

// Random SPD CB3(2,2;1,0) matrix G^T G + I, with G sharing the block pattern
// of the b = -1 -> b = 0 connection: hats feed the first two blocks of the
// two elements they straddle, bubble block j feeds blocks j-1..j+1 of its
// own element.
inline CB3Arrowhead random_cb3_spd(int m, int p, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int n = m * (p + 1);
  std::vector<Eigen::Triplet<double>> t;
  for (int e = 0; e < m; ++e) {
    const int e1 = (e + 1) % m;
    t.emplace_back(e, e, 1.5 + u(rng));
    t.emplace_back(e, e1, u(rng));
    if (p >= 1) {
      t.emplace_back(m + e, e, u(rng));
      t.emplace_back(m + e, e1, u(rng));
    }
    for (int j = 1; j <= p; ++j) {
      const int col = j * m + e;
      t.emplace_back(col, col, 2.0 + u(rng));
      if (j + 1 <= p) t.emplace_back((j + 1) * m + e, col, u(rng));
      t.emplace_back((j - 1) * m + e, col, u(rng));
    }
  }
  Eigen::SparseMatrix<double> g(n, n);
  g.setFromTriplets(t.begin(), t.end());
  Eigen::SparseMatrix<double> id(n, n);
  id.setIdentity();
  Eigen::SparseMatrix<double> a = Eigen::SparseMatrix<double>(g.transpose() * g) + id;
  return CB3Arrowhead::from_sparse(a, m, 2, 2, 1, 0);
}

// Exact periodic solution of -u'' + w^2 u = f with f = 1 for |theta| < pi/3
// and f = 3 otherwise: cosh pieces matched in value and slope at pi/3.
// d selects u, u' or u''.
inline double screened_step_exact(double theta, double w, int d = 0) {
  const double t = std::abs(theta), sgn = theta < 0 ? -1.0 : 1.0;
  const double a = w * kPi / 3.0, b = w * (kPi - kPi / 3.0), s = std::sinh(w * kPi);
  if (t < kPi / 3.0) {
    const double A = 2.0 * std::sinh(b) / (w * w * s);
    if (d == 0) return 1.0 / (w * w) + A * std::cosh(w * t);
    if (d == 1) return sgn * A * w * std::sinh(w * t);
    return A * w * w * std::cosh(w * t);
  }
  const double B = -2.0 * std::sinh(a) / (w * w * s);
  if (d == 0) return 3.0 / (w * w) + B * std::cosh(w * (kPi - t));
  if (d == 1) return -sgn * B * w * std::sinh(w * (kPi - t));
  return B * w * w * std::cosh(w * (kPi - t));
}

// Least-squares line y = c0 + c1 x; returns R^2.
inline double line_r2(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  const double cov = sxy - sx * sy / n, vx = sxx - sx * sx / n, vy = syy - sy * sy / n;
  return cov * cov / (vx * vy);
}

}  // namespace arcsem::testing
