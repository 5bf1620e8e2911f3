#include "arcsem/banded.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace arcsem {

BandedOperator::BandedOperator(int rows, int cols, int lower, int upper)
    : rows_(rows), cols_(cols), lower_(lower), upper_(upper) {
  if (rows < 0 || cols < 0)
    throw std::invalid_argument("BandedOperator: negative dimension");
  if (lower + upper < 0)
    throw std::invalid_argument("BandedOperator: empty band");
  data_ = Eigen::MatrixXd::Zero(lower + upper + 1, cols);
}

BandedOperator BandedOperator::identity(int n) {
  BandedOperator r(n, n, 0, 0);
  for (int i = 0; i < n; ++i) r.at(i, i) = 1.0;
  return r;
}

BandedOperator BandedOperator::from_dense(const Eigen::MatrixXd& a, int lower,
                                          int upper, double tol) {
  BandedOperator r(static_cast<int>(a.rows()), static_cast<int>(a.cols()),
                   lower, upper);
  for (int j = 0; j < a.cols(); ++j)
    for (int i = 0; i < a.rows(); ++i) {
      if (r.in_band(i, j)) {
        r.at(i, j) = a(i, j);
      } else if (std::abs(a(i, j)) > tol) {
        std::ostringstream msg;
        msg << "BandedOperator::from_dense: entry (" << i << ", " << j
            << ") = " << a(i, j) << " outside band (" << lower << ", "
            << upper << ")";
        throw std::logic_error(msg.str());
      }
    }
  return r;
}

double BandedOperator::operator()(int i, int j) const {
  if (!in_band(i, j)) return 0.0;
  return data_(upper_ + i - j, j);
}

double& BandedOperator::at(int i, int j) {
  if (!in_band(i, j)) {
    std::ostringstream msg;
    msg << "BandedOperator::at: (" << i << ", " << j << ") outside band";
    throw std::out_of_range(msg.str());
  }
  return data_(upper_ + i - j, j);
}

Eigen::MatrixXd BandedOperator::dense() const {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows_, cols_);
  for (int j = 0; j < cols_; ++j) {
    const int i0 = std::max(0, j - upper_), i1 = std::min(rows_ - 1, j + lower_);
    for (int i = i0; i <= i1; ++i) a(i, j) = data_(upper_ + i - j, j);
  }
  return a;
}

Eigen::VectorXd BandedOperator::apply(const Eigen::VectorXd& x) const {
  if (x.size() != cols_)
    throw std::invalid_argument("BandedOperator::apply: size mismatch");
  Eigen::VectorXd y = Eigen::VectorXd::Zero(rows_);
  for (int j = 0; j < cols_; ++j) {
    const int i0 = std::max(0, j - upper_), i1 = std::min(rows_ - 1, j + lower_);
    for (int i = i0; i <= i1; ++i) y[i] += data_(upper_ + i - j, j) * x[j];
  }
  return y;
}

Eigen::VectorXd BandedOperator::apply_transpose(const Eigen::VectorXd& x) const {
  if (x.size() != rows_)
    throw std::invalid_argument("BandedOperator::apply_transpose: size mismatch");
  Eigen::VectorXd y = Eigen::VectorXd::Zero(cols_);
  for (int j = 0; j < cols_; ++j) {
    const int i0 = std::max(0, j - upper_), i1 = std::min(rows_ - 1, j + lower_);
    for (int i = i0; i <= i1; ++i) y[j] += data_(upper_ + i - j, j) * x[i];
  }
  return y;
}

BandedOperator BandedOperator::transpose() const {
  BandedOperator t(cols_, rows_, upper_, lower_);
  for (int j = 0; j < cols_; ++j) {
    const int i0 = std::max(0, j - upper_), i1 = std::min(rows_ - 1, j + lower_);
    for (int i = i0; i <= i1; ++i) t.at(j, i) = data_(upper_ + i - j, j);
  }
  return t;
}

BandedOperator BandedOperator::section(int r, int c) const {
  if (r > rows_ || c > cols_)
    throw std::invalid_argument("BandedOperator::section: larger than operator");
  BandedOperator s(r, c, lower_, upper_);
  for (int j = 0; j < c; ++j) {
    const int i0 = std::max(0, j - upper_), i1 = std::min(r - 1, j + lower_);
    for (int i = i0; i <= i1; ++i) s.at(i, j) = data_(upper_ + i - j, j);
  }
  return s;
}

Eigen::VectorXd BandedOperator::back_substitute(const Eigen::VectorXd& y) const {
  if (rows_ != cols_ || y.size() != rows_)
    throw std::invalid_argument("BandedOperator::back_substitute: shape mismatch");
  if (lower_ > 0)
    throw std::invalid_argument("BandedOperator::back_substitute: not upper triangular");
  Eigen::VectorXd x = y;
  for (int i = rows_ - 1; i >= 0; --i) {
    const int j1 = std::min(cols_ - 1, i + upper_);
    double s = x[i];
    for (int j = i + 1; j <= j1; ++j) s -= (*this)(i, j) * x[j];
    const double d = (*this)(i, i);
    if (d == 0.0)
      throw std::domain_error("BandedOperator::back_substitute: zero diagonal");
    x[i] = s / d;
  }
  return x;
}

BandedOperator multiply(const BandedOperator& a, const BandedOperator& b) {
  if (a.cols() != b.rows())
    throw std::invalid_argument("multiply: inner dimensions differ");
  BandedOperator c(a.rows(), b.cols(), a.lower() + b.lower(),
                   a.upper() + b.upper());
  for (int j = 0; j < b.cols(); ++j) {
    const int k0 = std::max(0, j - b.upper()), k1 = std::min(b.rows() - 1, j + b.lower());
    for (int k = k0; k <= k1; ++k) {
      const double bkj = b(k, j);
      if (bkj == 0.0) continue;
      const int i0 = std::max(0, k - a.upper()), i1 = std::min(a.rows() - 1, k + a.lower());
      for (int i = i0; i <= i1; ++i) c.at(i, j) += a(i, k) * bkj;
    }
  }
  return c;
}

}  // namespace arcsem
