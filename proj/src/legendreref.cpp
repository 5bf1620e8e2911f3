#include "arcsem/legendreref.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "arcsem/semijacobi.hpp"

namespace arcsem {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

// P_0..P_{n-1} at s.
void legendre_values(int n, double s, double* p) {
  if (n <= 0) return;
  p[0] = 1.0;
  if (n > 1) p[1] = s;
  for (int k = 1; k + 1 < n; ++k) p[k + 1] = ((2.0 * k + 1.0) * s * p[k] - k * p[k - 1]) / (k + 1.0);
}

void check_blocks(const PiecewiseGrid& grid, int n, const char* who) {
  if (n <= 0 || n % grid.elements() != 0)
    throw std::invalid_argument(std::string(who) + ": size must be a positive multiple of M");
}

double local_s(const PiecewiseGrid& grid, double theta, int& e) {
  double t;
  e = grid.locate(theta, &t);
  return 2.0 * t / grid.length(e);
}

// Global b = -1 index of local function j (0 left hat, 1 right hat, 2 + k bubble W_k).
int global_index(int j, int e, int m) {
  if (j == 0) return e;
  if (j == 1) return (e + 1) % m;
  return (j - 1) * m + e;
}

// Values and theta-derivatives of the local functions 0..nloc-1 at s.
void local_functions(int nloc, double s, double len, double* v, double* dv) {
  v[0] = 0.5 * (1.0 - s);
  v[1] = 0.5 * (1.0 + s);
  dv[0] = -1.0 / len;
  dv[1] = 1.0 / len;
  for (int j = 2; j < nloc; ++j) {
    double ds;
    v[j] = leg_bubble(j - 2, s, &ds);
    dv[j] = 2.0 * ds / len;
  }
}

}  // namespace

LegendreBasis::LegendreBasis(PiecewiseGrid grid, int b) : grid_(std::move(grid)), b_(b) {
  if (b != -1 && b != 0) throw std::invalid_argument("LegendreBasis: b must be -1 or 0");
}

double leg_hat(const PiecewiseGrid& grid, int i, double theta) {
  const int m = grid.elements();
  if (i < 0 || i >= m) throw std::out_of_range("leg_hat: index out of range");
  int e;
  const double s = local_s(grid, theta, e);
  if (e == i) return 0.5 * (1.0 - s);
  if ((e + 1) % m == i) return 0.5 * (1.0 + s);
  return 0.0;
}

double leg_bubble(int k, double s, double* ds) {
  std::vector<double> p(k + 3);
  legendre_values(k + 3, s, p.data());
  if (ds) *ds = -p[k + 1];
  return (p[k] - p[k + 2]) / (2.0 * k + 3.0);
}

double leg_eval(const LegendreBasis& basis, const Eigen::VectorXd& coeffs, double theta) {
  const PiecewiseGrid& grid = basis.grid();
  const int m = grid.elements();
  if (coeffs.size() % m != 0)
    throw std::invalid_argument("leg_eval: length must be a multiple of M");
  const int K = static_cast<int>(coeffs.size()) / m;
  int e;
  const double s = local_s(grid, theta, e);
  std::vector<double> p(K + 2);
  legendre_values(K + 2, s, p.data());
  double v = 0.0;
  if (basis.b() == 0) {
    for (int k = 0; k < K; ++k) v += coeffs[k * m + e] * p[k];
    return v;
  }
  v = 0.5 * (1.0 - s) * coeffs[e] + 0.5 * (1.0 + s) * coeffs[(e + 1) % m];
  for (int k = 0; k + 1 < K; ++k)
    v += coeffs[(k + 1) * m + e] * (p[k] - p[k + 2]) / (2.0 * k + 3.0);
  return v;
}

SparseMatrix leg_connection_sparse(const PiecewiseGrid& grid, int rows, int cols) {
  check_blocks(grid, rows, "leg_connection");
  check_blocks(grid, cols, "leg_connection");
  const int m = grid.elements(), kr = rows / m, kc = cols / m;
  Triplets t;
  auto put = [&](int lr, int e, int col, double v) {
    if (lr < kr) t.emplace_back(lr * m + e, col, v);
  };
  for (int e = 0; e < m; ++e) {
    put(0, e, e, 0.5);
    put(1, e, e, -0.5);
    put(0, e, (e + 1) % m, 0.5);
    put(1, e, (e + 1) % m, 0.5);
    for (int k = 0; k + 1 < kc; ++k) {
      const int col = (k + 1) * m + e;
      put(k, e, col, 1.0 / (2.0 * k + 3.0));
      put(k + 2, e, col, -1.0 / (2.0 * k + 3.0));
    }
  }
  SparseMatrix s(rows, cols);
  s.setFromTriplets(t.begin(), t.end());
  return s;
}

SparseMatrix leg_derivative_sparse(const PiecewiseGrid& grid, int rows, int cols) {
  check_blocks(grid, rows, "leg_derivative");
  check_blocks(grid, cols, "leg_derivative");
  const int m = grid.elements(), kr = rows / m, kc = cols / m;
  Triplets t;
  auto put = [&](int lr, int e, int col, double v) {
    if (lr < kr) t.emplace_back(lr * m + e, col, v);
  };
  for (int e = 0; e < m; ++e) {
    const double len = grid.length(e);
    put(0, e, e, -1.0 / len);
    put(0, e, (e + 1) % m, 1.0 / len);
    for (int k = 0; k + 1 < kc; ++k) put(k + 1, e, (k + 1) * m + e, -2.0 / len);
  }
  SparseMatrix s(rows, cols);
  s.setFromTriplets(t.begin(), t.end());
  return s;
}

Eigen::VectorXd leg_mass0_diag(const PiecewiseGrid& grid, int n) {
  check_blocks(grid, n, "leg_mass0_diag");
  const int m = grid.elements();
  Eigen::VectorXd d(n);
  for (int k = 0; k < n / m; ++k)
    for (int e = 0; e < m; ++e) d[k * m + e] = grid.length(e) / (2.0 * k + 1.0);
  return d;
}

LegendreOperators leg_operators(const PiecewiseGrid& grid, int trunc) {
  check_blocks(grid, trunc, "leg_operators");
  const int m = grid.elements(), kc = trunc / m;
  const int nloc = kc + 1;  // two hats plus bubbles W_0..W_{kc-2}
  const QuadratureRule q = gauss_legendre(nloc + 3);
  Triplets tm, tl;
  std::vector<double> v(nloc), dv(nloc);
  for (int e = 0; e < m; ++e) {
    const double len = grid.length(e);
    Eigen::MatrixXd ml = Eigen::MatrixXd::Zero(nloc, nloc), ll = ml;
    for (std::size_t r = 0; r < q.nodes.size(); ++r) {
      local_functions(nloc, q.nodes[r], len, v.data(), dv.data());
      const double w = 0.5 * len * q.weights[r];
      for (int i = 0; i < nloc; ++i)
        for (int j = 0; j < nloc; ++j) {
          ml(i, j) += w * v[i] * v[j];
          ll(i, j) += w * dv[i] * dv[j];
        }
    }
    for (int i = 0; i < nloc; ++i)
      for (int j = 0; j < nloc; ++j) {
        const int gi = global_index(i, e, m), gj = global_index(j, e, m);
        if (std::abs(ml(i, j)) > 1e-15 * len) tm.emplace_back(gi, gj, ml(i, j));
        if (std::abs(ll(i, j)) > 1e-15 / len) tl.emplace_back(gi, gj, ll(i, j));
      }
  }
  LegendreOperators ops;
  ops.mass.resize(trunc, trunc);
  ops.mass.setFromTriplets(tm.begin(), tm.end());
  ops.laplacian.resize(trunc, trunc);
  ops.laplacian.setFromTriplets(tl.begin(), tl.end());
  ops.derivative = leg_derivative_sparse(grid, trunc + 2 * m, trunc);
  return ops;
}

SparseMatrix leg_advection(const PiecewiseGrid& grid, const Function& vfun, int trunc,
                           int nodes) {
  check_blocks(grid, trunc, "leg_advection");
  const int m = grid.elements(), nloc = trunc / m + 1;
  const QuadratureRule q = gauss_legendre(std::max(nodes, nloc + 3));
  Triplets t;
  std::vector<double> v(nloc), dv(nloc);
  for (int e = 0; e < m; ++e) {
    const double len = grid.length(e), c = grid.center(e);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(nloc, nloc);
    for (std::size_t r = 0; r < q.nodes.size(); ++r) {
      const double s = q.nodes[r];
      local_functions(nloc, s, len, v.data(), dv.data());
      const double w = 0.5 * len * q.weights[r] * vfun(c + 0.5 * len * s);
      for (int i = 0; i < nloc; ++i)
        for (int j = 0; j < nloc; ++j) a(i, j) += w * v[i] * dv[j];
    }
    for (int i = 0; i < nloc; ++i)
      for (int j = 0; j < nloc; ++j)
        if (a(i, j) != 0.0) t.emplace_back(global_index(i, e, m), global_index(j, e, m), a(i, j));
  }
  SparseMatrix s(trunc, trunc);
  s.setFromTriplets(t.begin(), t.end());
  return s;
}

namespace {

Eigen::VectorXd leg_local_fixed(const Function& f, double c, double len, int n) {
  const QuadratureRule q = gauss_legendre(n);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  std::vector<double> p(n);
  for (int r = 0; r < n; ++r) {
    const double s = q.nodes[r];
    legendre_values(n, s, p.data());
    const double fv = f(c + 0.5 * len * s) * q.weights[r];
    for (int k = 0; k < n; ++k) out[k] += fv * p[k];
  }
  for (int k = 0; k < n; ++k) out[k] *= 0.5 * (2.0 * k + 1.0);
  return out;
}

Eigen::VectorXd leg_local_adaptive(const Function& f, double c, double len, double tol) {
  return adaptive_coefficients([&](int n) { return leg_local_fixed(f, c, len, n); }, tol,
                               "leg_transform");
}

}  // namespace

Eigen::VectorXd leg_to_minus1(const PiecewiseGrid& grid, const Eigen::VectorXd& c0) {
  const int m = grid.elements();
  if (c0.size() == 0 || c0.size() % m != 0)
    throw std::invalid_argument("leg_to_minus1: length must be a positive multiple of M");
  const int K = static_cast<int>(c0.size()) / m;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(std::max(K - 1, 1) * m);
  std::vector<double> left(m), right(m);
  for (int e = 0; e < m; ++e) {
    Eigen::VectorXd g = gather_local(c0, m, e);
    double uL = 0.0, uR = 0.0;
    for (int k = 0; k < K; ++k) {
      uR += g[k];
      uL += (k % 2 == 0 ? 1.0 : -1.0) * g[k];
    }
    left[e] = uL;
    right[e] = uR;
    g[0] -= 0.5 * (uL + uR);
    if (K > 1) g[1] -= 0.5 * (uR - uL);
    // sum_k w_k (P_k - P_{k+2})/(2k+3) = sum_j g_j P_j, solved from the top.
    std::vector<double> w(K + 2, 0.0);
    for (int j = K - 1; j >= 2; --j) w[j - 2] = (2.0 * j - 1.0) * (w[j] / (2.0 * j + 3.0) - g[j]);
    for (int k = 0; k + 2 < K; ++k) out[(k + 1) * m + e] = w[k];
  }
  for (int e = 0; e < m; ++e) out[e] = 0.5 * (left[e] + right[(e + m - 1) % m]);
  return out;
}

Eigen::VectorXd leg_transform(const LegendreBasis& basis, const Function& f, double tol) {
  const PiecewiseGrid& grid = basis.grid();
  const int m = grid.elements();
  std::vector<Eigen::VectorXd> local(m);
  int K = 1;
  for (int e = 0; e < m; ++e) {
    try {
      local[e] = leg_local_adaptive(f, grid.center(e), grid.length(e), tol);
    } catch (const std::exception& ex) {
      std::ostringstream os;
      os << "leg_transform: element " << e << ": " << ex.what();
      throw std::runtime_error(os.str());
    }
    K = std::max(K, static_cast<int>(local[e].size()));
  }
  Eigen::VectorXd c0 = Eigen::VectorXd::Zero(K * m);
  for (int e = 0; e < m; ++e)
    for (int k = 0; k < local[e].size(); ++k) c0[k * m + e] = local[e][k];
  return basis.b() == 0 ? c0 : leg_to_minus1(grid, c0);
}

}  // namespace arcsem
