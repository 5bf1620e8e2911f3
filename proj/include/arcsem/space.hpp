#pragma once

#include <memory>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "arcsem/legendreref.hpp"
#include "arcsem/piecewise.hpp"

namespace arcsem {

enum class BasisKind { arc, legendre };

BasisKind parse_basis_kind(const std::string& name);
std::string to_string(BasisKind kind);

// Common view of the two periodic bases: a b = 0 family that can represent
// discontinuous data and the continuous b = -1 family used for trial and
// test functions. All sizes are multiples of the element count M.
class Space {
 public:
  static std::shared_ptr<const Space> make(BasisKind kind, const PiecewiseGrid& grid);
  virtual ~Space() = default;

  virtual BasisKind kind() const = 0;
  std::string name() const { return to_string(kind()); }
  const PiecewiseGrid& grid() const { return grid_; }
  int elements() const { return grid_.elements(); }

  virtual Eigen::VectorXd expand0(const Function& f, double tol = 1e-14) const = 0;
  virtual Eigen::VectorXd to_minus1(const Eigen::VectorXd& c0) const = 0;
  Eigen::VectorXd expand_m1(const Function& f, double tol = 1e-14) const {
    return to_minus1(expand0(f, tol));
  }
  virtual double eval0(const Eigen::VectorXd& c0, double theta) const = 0;
  virtual double eval_m1(const Eigen::VectorXd& c, double theta) const = 0;

  // R and D: b = 0 rows x b = -1 cols.
  virtual SparseMatrix connection(int rows, int cols) const = 0;
  virtual SparseMatrix derivative(int rows, int cols) const = 0;
  virtual Eigen::VectorXd mass0(int n) const = 0;
  // Exact trunc x trunc sections.
  virtual SparseMatrix mass(int trunc) const = 0;
  virtual SparseMatrix laplacian(int trunc) const = 0;  // -Laplacian
  // int w v u' for w, u in the b = -1 family.
  virtual SparseMatrix advection(const Function& v, int trunc) const = 0;

  // P_trunc (R^T M0 f0).
  Eigen::VectorXd load(const Eigen::VectorXd& f0, int trunc) const;

 protected:
  explicit Space(PiecewiseGrid grid) : grid_(std::move(grid)) {}

 private:
  PiecewiseGrid grid_;
};

// Zero-pads or truncates to length n.
Eigen::VectorXd resize_coeffs(const Eigen::VectorXd& c, int n);

}  // namespace arcsem
