#pragma once

#include <Eigen/Dense>

namespace arcsem {

// Rectangular matrix whose nonzeros satisfy -lower <= j - i <= upper.
// Bandwidths may be negative (e.g. (-1, 2) for an operator that strictly
// lowers degree) as long as lower + upper >= 0.
class BandedOperator {
 public:
  BandedOperator() = default;
  BandedOperator(int rows, int cols, int lower, int upper);

  static BandedOperator identity(int n);
  // Throws if an entry outside the band exceeds tol in magnitude.
  static BandedOperator from_dense(const Eigen::MatrixXd& a, int lower,
                                   int upper, double tol = 0.0);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int lower() const { return lower_; }
  int upper() const { return upper_; }

  bool in_band(int i, int j) const {
    return i >= 0 && i < rows_ && j >= 0 && j < cols_ && j - i >= -lower_ &&
           j - i <= upper_;
  }
  // Zero outside the band.
  double operator()(int i, int j) const;
  // Throws std::out_of_range outside the band.
  double& at(int i, int j);

  Eigen::MatrixXd dense() const;
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  Eigen::VectorXd apply_transpose(const Eigen::VectorXd& x) const;
  BandedOperator transpose() const;
  // Top-left r x c block; keeps the declared bandwidths.
  BandedOperator section(int r, int c) const;
  BandedOperator section(int n) const { return section(n, n); }

  // Solves U x = y for square upper-triangular operators (lower <= 0).
  Eigen::VectorXd back_substitute(const Eigen::VectorXd& y) const;

 private:
  int rows_ = 0, cols_ = 0, lower_ = 0, upper_ = 0;
  Eigen::MatrixXd data_;  // (lower+upper+1) x cols, LAPACK band layout
};

BandedOperator multiply(const BandedOperator& a, const BandedOperator& b);

}  // namespace arcsem
