#include "arcsem/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "arcsem/multop.hpp"

namespace arcsem {

namespace {

constexpr double kPi = std::numbers::pi;

using Triplets = std::vector<Eigen::Triplet<double>>;

SparseMatrix from_triplets(int rows, int cols, const Triplets& t) {
  SparseMatrix s(rows, cols);
  s.setFromTriplets(t.begin(), t.end());
  return s;
}

void check_blocks(const PiecewiseGrid& grid, int n, const char* who) {
  if (n <= 0 || n % grid.elements() != 0)
    throw std::invalid_argument(std::string(who) + ": size must be a positive multiple of M");
}

ArcBasis element_arc(const PiecewiseGrid& grid, int e, int b) {
  return ArcBasis::from_half_angle(b, grid.half_angle(e));
}

}  // namespace

PiecewiseGrid::PiecewiseGrid(std::vector<double> breakpoints) : bp_(std::move(breakpoints)) {
  if (bp_.size() < 3) throw std::invalid_argument("PiecewiseGrid: need at least two elements");
  if (std::abs(bp_.front() + kPi) > 1e-6 || std::abs(bp_.back() - kPi) > 1e-6)
    throw std::invalid_argument("PiecewiseGrid: breakpoints must run from -pi to pi");
  bp_.front() = -kPi;
  bp_.back() = kPi;
  for (std::size_t i = 0; i + 1 < bp_.size(); ++i) {
    const double len = bp_[i + 1] - bp_[i];
    if (!(len > 0.0))
      throw std::invalid_argument("PiecewiseGrid: breakpoints must be strictly increasing");
    if (len > kPi + 1e-12) {
      std::ostringstream os;
      os << "PiecewiseGrid: element " << i << " has length " << len << " > pi";
      throw std::invalid_argument(os.str());
    }
  }
}

PiecewiseGrid PiecewiseGrid::uniform(int points) {
  if (points < 3) throw std::invalid_argument("PiecewiseGrid::uniform: need >= 3 points");
  std::vector<double> bp(points);
  for (int i = 0; i < points; ++i) bp[i] = -kPi + 2.0 * kPi * i / (points - 1);
  return PiecewiseGrid(std::move(bp));
}

PiecewiseGrid PiecewiseGrid::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  const auto& list = j.is_object() ? j.at("breakpoints") : j;
  return PiecewiseGrid(list.get<std::vector<double>>());
}

std::string PiecewiseGrid::to_json() const {
  nlohmann::json j;
  j["breakpoints"] = bp_;
  return j.dump();
}

PiecewiseGrid PiecewiseGrid::parse(const std::string& spec) {
  if (spec.rfind("uniform:", 0) == 0) return uniform(std::stoi(spec.substr(8)));
  std::ifstream in(spec);
  if (in) {
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
  }
  std::vector<double> bp;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (item.find_first_not_of(" \t", used) != std::string::npos)
      throw std::invalid_argument("PiecewiseGrid::parse: bad number '" + item + "'");
    bp.push_back(v);
  }
  return PiecewiseGrid(std::move(bp));
}

int PiecewiseGrid::locate(double theta, double* local) const {
  if (theta < -kPi || theta > kPi) theta = std::remainder(theta, 2.0 * kPi);
  const int m = elements();
  int e;
  if (theta >= bp_.back()) {
    e = m - 1;
  } else {
    e = static_cast<int>(std::upper_bound(bp_.begin(), bp_.end(), theta) - bp_.begin()) - 1;
    e = std::clamp(e, 0, m - 1);
  }
  if (local) *local = theta - center(e);
  return e;
}

double hat_eval(const PiecewiseGrid& grid, int i, double theta) {
  const int m = grid.elements();
  if (i < 0 || i >= m) throw std::out_of_range("hat_eval: index out of range");
  double t;
  const int e = grid.locate(theta, &t);
  const double s = std::sin(t) / std::sin(grid.half_angle(e));
  if (e == i) return 0.5 * (1.0 - s);
  if ((e + 1) % m == i) return 0.5 * (1.0 + s);
  return 0.0;
}

PiecewiseBasis::PiecewiseBasis(PiecewiseGrid grid, int b) : grid_(std::move(grid)), b_(b) {
  if (b != -1 && b != 0) throw std::invalid_argument("PiecewiseBasis: b must be -1 or 0");
  for (int e = 0; e < grid_.elements(); ++e) arcs_.push_back(element_arc(grid_, e, b));
}

Eigen::VectorXd gather_local(const Eigen::VectorXd& c, int m, int e) {
  const int K = static_cast<int>(c.size()) / m;
  Eigen::VectorXd out(K);
  for (int k = 0; k < K; ++k) out[k] = c[k * m + e];
  return out;
}

namespace {

// Local b = -1 arc coefficients of element e from a global b = -1 vector.
Eigen::VectorXd local_minus1(const PiecewiseGrid& grid, const Eigen::VectorXd& c, int e) {
  const int m = grid.elements();
  const int blocks = static_cast<int>(c.size()) / m;
  Eigen::VectorXd loc = Eigen::VectorXd::Zero(std::max(blocks + 1, 2));
  const double uL = c[e], uR = c[(e + 1) % m];
  const double sphi = std::sin(grid.half_angle(e));
  loc[0] = 0.5 * (uL + uR);
  loc[1] = 0.5 * (uR - uL) / sphi;
  for (int k = 2; k <= blocks; ++k) loc[k] = c[(k - 1) * m + e];
  return loc;
}

}  // namespace

double pw_eval(const PiecewiseBasis& basis, const Eigen::VectorXd& coeffs, double theta) {
  const PiecewiseGrid& grid = basis.grid();
  const int m = grid.elements();
  if (coeffs.size() % m != 0)
    throw std::invalid_argument("pw_eval: length must be a multiple of M");
  double t;
  const int e = grid.locate(theta, &t);
  if (basis.b() == 0) return eval_arc(basis.arc(e), gather_local(coeffs, m, e), t);
  return eval_arc(basis.arc(e), local_minus1(grid, coeffs, e), t);
}

SparseMatrix pw_connection_sparse(const PiecewiseGrid& grid, int rows, int cols) {
  check_blocks(grid, rows, "pw_connection");
  check_blocks(grid, cols, "pw_connection");
  const int m = grid.elements(), kr = rows / m, kc = cols / m;
  Triplets t;
  auto put = [&](int lr, int e, int col, double v) {
    if (lr < kr && v != 0.0) t.emplace_back(lr * m + e, col, v);
  };
  for (int e = 0; e < m; ++e) {
    const double sphi = std::sin(grid.half_angle(e));
    // Left hat e and right hat e+1 restricted to element e.
    put(0, e, e, 0.5);
    put(1, e, e, -0.5 / sphi);
    put(0, e, (e + 1) % m, 0.5);
    put(1, e, (e + 1) % m, 0.5 / sphi);
    if (kc < 2) continue;
    const int nloc = kc + 1;  // local b = -1 indices 0..kc
    const BandedOperator r = arc_connection(element_arc(grid, e, -1), nloc);
    for (int k = 2; k < nloc; ++k)
      for (int i = std::max(0, k - 2); i <= k; ++i) put(i, e, (k - 1) * m + e, r(i, k));
  }
  return from_triplets(rows, cols, t);
}

SparseMatrix pw_derivative_sparse(const PiecewiseGrid& grid, int rows, int cols) {
  check_blocks(grid, rows, "pw_derivative");
  check_blocks(grid, cols, "pw_derivative");
  const int m = grid.elements(), kr = rows / m, kc = cols / m;
  Triplets t;
  auto put = [&](int lr, int e, int col, double v) {
    if (lr < kr && v != 0.0) t.emplace_back(lr * m + e, col, v);
  };
  for (int e = 0; e < m; ++e) {
    const double phi = grid.half_angle(e), sphi = std::sin(phi);
    const ArcBasis arc0 = element_arc(grid, e, 0);
    // cos(theta) = (sin(phi)/phi) p_0 - ((1-h)/beta) p_1 on the element.
    const double beta = linear_coeffs(arc0.minus_params()).beta;
    const double c1 = arc0.one_minus_h() / (2.0 * beta * sphi);
    put(0, e, e, -0.5 / phi);
    put(2, e, e, c1);
    put(0, e, (e + 1) % m, 0.5 / phi);
    put(2, e, (e + 1) % m, -c1);
    if (kc < 2) continue;
    const int nloc = kc + 1;
    const BandedOperator d = arc_diff(element_arc(grid, e, -1), nloc + 2);
    for (int k = 2; k < nloc; ++k)
      for (int i = std::max(0, k - 3); i <= k + 1; ++i) put(i, e, (k - 1) * m + e, d(i, k));
  }
  return from_triplets(rows, cols, t);
}

Eigen::VectorXd pw_mass0_diag(const PiecewiseGrid& grid, int n) {
  check_blocks(grid, n, "pw_mass0_diag");
  const int m = grid.elements();
  Eigen::VectorXd d(n);
  for (int e = 0; e < m; ++e) {
    const ArcBasis arc = element_arc(grid, e, 0);
    const double mp = arc_mass_p(arc), mq = arc_mass_q(arc);
    for (int k = 0; k < n / m; ++k) d[k * m + e] = (k % 2 == 0) ? mp : mq;
  }
  return d;
}

CB3Arrowhead pw_connection(const PiecewiseBasis& basis, int trunc) {
  const int m = basis.elements();
  return CB3Arrowhead::from_sparse(pw_connection_sparse(basis.grid(), trunc, trunc), m, 1, 1,
                                   1, 0);
}

CB3Arrowhead pw_diff(const PiecewiseBasis& basis, int trunc) {
  const int m = basis.elements();
  return CB3Arrowhead::from_sparse(pw_derivative_sparse(basis.grid(), trunc, trunc), m, 2, 2,
                                   1, 0);
}

CB3Arrowhead pw_mass(const PiecewiseBasis& basis, int trunc) {
  const PiecewiseGrid& grid = basis.grid();
  const int m = grid.elements();
  if (basis.b() == 0) {
    const Eigen::VectorXd d = pw_mass0_diag(grid, trunc);
    SparseMatrix s(trunc, trunc);
    for (int i = 0; i < trunc; ++i) s.insert(i, i) = d[i];
    return CB3Arrowhead::from_sparse(s, m, 0, 0, 0, 0);
  }
  const int rows = trunc + 2 * m;
  const SparseMatrix R = pw_connection_sparse(grid, rows, trunc);
  const Eigen::VectorXd d = pw_mass0_diag(grid, rows);
  const SparseMatrix A = SparseMatrix(R.transpose()) * (d.asDiagonal() * R);
  return CB3Arrowhead::from_sparse(A, m, 2, 2, 1, 0);
}

CB3Arrowhead weak_laplacian(const PiecewiseBasis& basis, int trunc) {
  const PiecewiseGrid& grid = basis.grid();
  const int m = grid.elements();
  const int rows = trunc + 2 * m;
  const SparseMatrix D = pw_derivative_sparse(grid, rows, trunc);
  const Eigen::VectorXd d = pw_mass0_diag(grid, rows);
  const SparseMatrix A = SparseMatrix(D.transpose()) * (d.asDiagonal() * D);
  return CB3Arrowhead::from_sparse(A, m, 2, 2, 1, 0);
}

Eigen::VectorXd pw_to_minus1(const PiecewiseGrid& grid, const Eigen::VectorXd& c0) {
  const int m = grid.elements();
  if (c0.size() == 0 || c0.size() % m != 0)
    throw std::invalid_argument("pw_to_minus1: length must be a positive multiple of M");
  const int K = static_cast<int>(c0.size()) / m;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(std::max(K - 1, 1) * m);
  std::vector<double> left(m), right(m);
  for (int e = 0; e < m; ++e) {
    Eigen::VectorXd loc = gather_local(c0, m, e);
    if (K < 2) {
      loc.conservativeResize(2);
      loc[1] = 0.0;
    }
    const BandedOperator r = arc_connection(element_arc(grid, e, -1), loc.size());
    const Eigen::VectorXd f = r.back_substitute(loc);
    const double sphi = std::sin(grid.half_angle(e));
    left[e] = f[0] - sphi * f[1];
    right[e] = f[0] + sphi * f[1];
    for (int k = 2; k < K; ++k) out[(k - 1) * m + e] = f[k];
  }
  for (int e = 0; e < m; ++e) out[e] = 0.5 * (left[e] + right[(e + m - 1) % m]);
  return out;
}

Eigen::VectorXd pw_transform(const PiecewiseBasis& basis, const Function& f, double tol) {
  const PiecewiseGrid& grid = basis.grid();
  const int m = grid.elements();
  std::vector<Eigen::VectorXd> local(m);
  int K = 1;
  for (int e = 0; e < m; ++e) {
    const double c = grid.center(e);
    try {
      local[e] = arc_transform(element_arc(grid, e, 0), [&](double t) { return f(t + c); }, tol);
    } catch (const std::exception& ex) {
      std::ostringstream os;
      os << "pw_transform: element " << e << ": " << ex.what();
      throw std::runtime_error(os.str());
    }
    K = std::max(K, static_cast<int>(local[e].size()));
  }
  Eigen::VectorXd c0 = Eigen::VectorXd::Zero(K * m);
  for (int e = 0; e < m; ++e)
    for (int k = 0; k < local[e].size(); ++k) c0[k * m + e] = local[e][k];
  return basis.b() == 0 ? c0 : pw_to_minus1(grid, c0);
}

SparseMatrix pw_mult(const PiecewiseGrid& grid, const Function& a, int n) {
  check_blocks(grid, n, "pw_mult");
  const int m = grid.elements(), K = n / m;
  Triplets t;
  for (int e = 0; e < m; ++e) {
    const double c = grid.center(e);
    const ArcBasis arc = element_arc(grid, e, 0);
    const Eigen::VectorXd al = arc_transform(arc, [&](double s) { return a(s + c); });
    const BandedOperator J = mult_matrix(arc, al, K);
    for (int j = 0; j < K; ++j)
      for (int i = std::max(0, j - J.upper()); i <= std::min(K - 1, j + J.lower()); ++i) {
        const double v = J(i, j);
        if (v != 0.0) t.emplace_back(i * m + e, j * m + e, v);
      }
  }
  return from_triplets(n, n, t);
}

Eigen::VectorXd trig_exact_expand(const PiecewiseBasis& basis, double a0, const Eigen::VectorXd& a,
                                  const Eigen::VectorXd& b) {
  if (a.size() != b.size()) throw std::invalid_argument("trig_exact_expand: size mismatch");
  const PiecewiseGrid& grid = basis.grid();
  const int m = grid.elements(), N = static_cast<int>(a.size());
  const int K = 2 * N + 1;
  Eigen::VectorXd c0 = Eigen::VectorXd::Zero(K * m);
  for (int e = 0; e < m; ++e) {
    // Shift to the element's local angle theta' = theta - c.
    const double c = grid.center(e);
    Eigen::VectorXd al(N), bl(N);
    for (int n = 1; n <= N; ++n) {
      const double cn = std::cos(n * c), sn = std::sin(n * c);
      al[n - 1] = a[n - 1] * cn + b[n - 1] * sn;
      bl[n - 1] = -a[n - 1] * sn + b[n - 1] * cn;
    }
    const Eigen::VectorXd loc = trig_local_coeffs(element_arc(grid, e, 0), a0, al, bl);
    for (int k = 0; k < K; ++k) c0[k * m + e] = loc[k];
  }
  return basis.b() == 0 ? c0 : pw_to_minus1(grid, c0);
}

int count_significant(const Eigen::VectorXd& c, double tol) {
  return static_cast<int>((c.array().abs() > tol).count());
}

}  // namespace arcsem
