#include "arcsem/space.hpp"

#include <algorithm>
#include <stdexcept>

namespace arcsem {

namespace {

class ArcSpace final : public Space {
 public:
  explicit ArcSpace(const PiecewiseGrid& grid)
      : Space(grid), b0_(grid, 0), bm1_(grid, -1) {}

  BasisKind kind() const override { return BasisKind::arc; }
  Eigen::VectorXd expand0(const Function& f, double tol) const override {
    return pw_transform(b0_, f, tol);
  }
  Eigen::VectorXd to_minus1(const Eigen::VectorXd& c0) const override {
    return pw_to_minus1(grid(), c0);
  }
  double eval0(const Eigen::VectorXd& c0, double theta) const override {
    return pw_eval(b0_, c0, theta);
  }
  double eval_m1(const Eigen::VectorXd& c, double theta) const override {
    return pw_eval(bm1_, c, theta);
  }
  SparseMatrix connection(int rows, int cols) const override {
    return pw_connection_sparse(grid(), rows, cols);
  }
  SparseMatrix derivative(int rows, int cols) const override {
    return pw_derivative_sparse(grid(), rows, cols);
  }
  Eigen::VectorXd mass0(int n) const override { return pw_mass0_diag(grid(), n); }
  SparseMatrix mass(int trunc) const override { return pw_mass(bm1_, trunc).sparse(); }
  SparseMatrix laplacian(int trunc) const override {
    return weak_laplacian(bm1_, trunc).sparse();
  }
  SparseMatrix advection(const Function& v, int trunc) const override {
    const int rows = trunc + 2 * elements();
    const SparseMatrix R = connection(rows, trunc), D = derivative(rows, trunc);
    const SparseMatrix J = pw_mult(grid(), v, rows);
    const Eigen::VectorXd m0 = mass0(rows);
    return SparseMatrix(R.transpose()) * (m0.asDiagonal() * (J * D));
  }

 private:
  PiecewiseBasis b0_, bm1_;
};

class LegendreSpace final : public Space {
 public:
  explicit LegendreSpace(const PiecewiseGrid& grid)
      : Space(grid), b0_(grid, 0), bm1_(grid, -1) {}

  BasisKind kind() const override { return BasisKind::legendre; }
  Eigen::VectorXd expand0(const Function& f, double tol) const override {
    return leg_transform(b0_, f, tol);
  }
  Eigen::VectorXd to_minus1(const Eigen::VectorXd& c0) const override {
    return leg_to_minus1(grid(), c0);
  }
  double eval0(const Eigen::VectorXd& c0, double theta) const override {
    return leg_eval(b0_, c0, theta);
  }
  double eval_m1(const Eigen::VectorXd& c, double theta) const override {
    return leg_eval(bm1_, c, theta);
  }
  SparseMatrix connection(int rows, int cols) const override {
    return leg_connection_sparse(grid(), rows, cols);
  }
  SparseMatrix derivative(int rows, int cols) const override {
    return leg_derivative_sparse(grid(), rows, cols);
  }
  Eigen::VectorXd mass0(int n) const override { return leg_mass0_diag(grid(), n); }
  SparseMatrix mass(int trunc) const override { return leg_operators(grid(), trunc).mass; }
  SparseMatrix laplacian(int trunc) const override {
    return leg_operators(grid(), trunc).laplacian;
  }
  SparseMatrix advection(const Function& v, int trunc) const override {
    return leg_advection(grid(), v, trunc, trunc / elements() + 40);
  }

 private:
  LegendreBasis b0_, bm1_;
};

}  // namespace

BasisKind parse_basis_kind(const std::string& name) {
  if (name == "arc") return BasisKind::arc;
  if (name == "legendre") return BasisKind::legendre;
  throw std::invalid_argument("unknown basis '" + name + "' (expected arc or legendre)");
}

std::string to_string(BasisKind kind) { return kind == BasisKind::arc ? "arc" : "legendre"; }

std::shared_ptr<const Space> Space::make(BasisKind kind, const PiecewiseGrid& grid) {
  if (kind == BasisKind::arc) return std::make_shared<ArcSpace>(grid);
  return std::make_shared<LegendreSpace>(grid);
}

Eigen::VectorXd Space::load(const Eigen::VectorXd& f0, int trunc) const {
  const int m = elements();
  const int rows = std::max<int>(static_cast<int>(f0.size()), trunc + 2 * m);
  const Eigen::VectorXd f = resize_coeffs(f0, rows);
  const SparseMatrix R = connection(rows, trunc);
  return SparseMatrix(R.transpose()) * mass0(rows).cwiseProduct(f);
}

Eigen::VectorXd resize_coeffs(const Eigen::VectorXd& c, int n) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  const int k = std::min<int>(n, static_cast<int>(c.size()));
  out.head(k) = c.head(k);
  return out;
}

}  // namespace arcsem
