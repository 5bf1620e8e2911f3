#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "arcsem/banded.hpp"

namespace arcsem {

using SparseMatrix = Eigen::SparseMatrix<double>;

// n x n matrix with a_ij = 0 unless (j - i) mod n is congruent to some
// offset d in [-lower, upper]. Storage is row-wise by offset.
class CyclicBanded {
 public:
  CyclicBanded() = default;
  CyclicBanded(int n, int lower, int upper);

  int n() const { return n_; }
  int lower() const { return l_; }
  int upper() const { return u_; }

  // First offset d in [-lower, upper] reaching column j from row i.
  bool slot(int i, int j, int& d) const;
  bool in_structure(int i, int j) const {
    int d;
    return slot(i, j, d);
  }
  double operator()(int i, int j) const;
  double& at(int i, int j);
  double by_offset(int i, int d) const { return data_[i * (l_ + u_ + 1) + d + l_]; }
  double& by_offset(int i, int d) { return data_[i * (l_ + u_ + 1) + d + l_]; }
  int column(int i, int d) const { return ((i + d) % n_ + n_) % n_; }

  Eigen::MatrixXd dense() const;
  CyclicBanded transpose() const;
  const std::vector<double>& raw() const { return data_; }
  std::vector<double>& raw() { return data_; }

 private:
  int n_ = 0, l_ = 0, u_ = 0;
  std::vector<double> data_;
};

// Cyclic banded product; sub-bandwidths add.
CyclicBanded multiply(const CyclicBanded& a, const CyclicBanded& b);

// CB^3(l, u; lambda, mu) arrowhead matrix of size m + p m:
//   [ A0  B_1 .. B_u          ]
//   [ C_1 D_11 ..             ]
//   [ ..        ..            ]
// with A0 cyclic (lambda+mu, lambda+mu), B_k cyclic (lambda, mu),
// C_k cyclic (mu, lambda) and diagonal tail blocks D_kj. The tail is stored
// interlaced: D_i holds entry i of every tail block as a p x p (l, u) banded
// matrix, laid out so element i is the fastest index.
class CB3Arrowhead {
 public:
  CB3Arrowhead() = default;
  CB3Arrowhead(int m, int p, int l, int u, int lambda, int mu);

  int m() const { return m_; }
  int p() const { return p_; }
  int lower() const { return l_; }
  int upper() const { return u_; }
  int lambda() const { return lambda_; }
  int mu() const { return mu_; }
  int size() const { return m_ * (p_ + 1); }

  CyclicBanded& A0() { return a0_; }
  const CyclicBanded& A0() const { return a0_; }
  CyclicBanded& B(int k) { return b_.at(k - 1); }  // k = 1..u
  const CyclicBanded& B(int k) const { return b_.at(k - 1); }
  CyclicBanded& C(int k) { return c_.at(k - 1); }  // k = 1..l
  const CyclicBanded& C(int k) const { return c_.at(k - 1); }
  // Tail entry D_i[k, k + d], 0-based tail block k, offset d in [-l, u].
  double tail(int i, int k, int d) const { return d_[index(i, k, d)]; }
  double& tail(int i, int k, int d) { return d_[index(i, k, d)]; }
  const std::vector<double>& tail_raw() const { return d_; }

  bool in_structure(int r, int c) const;
  double get(int r, int c) const;
  void set(int r, int c, double v);  // throws outside the structure
  void add(int r, int c, double v);

  Eigen::MatrixXd dense() const;
  SparseMatrix sparse() const;
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  CB3Arrowhead transpose() const;

  // Minimal structure containing every entry with |a| > drop_tol.
  static CB3Arrowhead from_sparse(const SparseMatrix& a, int m, double drop_tol = 0.0);
  // Declared structure; throws if an entry with |a| > drop_tol falls outside.
  static CB3Arrowhead from_sparse(const SparseMatrix& a, int m, int l, int u, int lambda,
                                  int mu, double drop_tol = 0.0);

  std::string to_json() const;
  static CB3Arrowhead from_json(const std::string& text);

 private:
  std::size_t index(int i, int k, int d) const {
    return (static_cast<std::size_t>(k) * (l_ + u_ + 1) + (d + l_)) * m_ + i;
  }
  int m_ = 0, p_ = 0, l_ = 0, u_ = 0, lambda_ = 0, mu_ = 0;
  CyclicBanded a0_;
  std::vector<CyclicBanded> b_, c_;
  std::vector<double> d_;
};

// Product; throws std::domain_error if the result leaves the CB^3 class
// (tail blocks must stay diagonal).
CB3Arrowhead cb3_multiply(const CB3Arrowhead& a, const CB3Arrowhead& b);
CB3Arrowhead principal_section(const CB3Arrowhead& a, int n);
BandedOperator principal_section(const BandedOperator& a, int n);

// A = L^T L with L lower triangular. For CB^3(l, l; 1, 0) or (l, l; 0, 1):
// L = L1 + L2 with L1 a CB^3(l, 0; 1, 1) matrix and L2 nonzero only in the
// first column of the head block.
struct ReverseCholeskyFactor {
  int m = 0, p = 0, l = 0;
  bool dense_path = false;
  Eigen::MatrixXd dense_factor;  // used when dense_path

  std::vector<double> tail;   // L~_i[k, k - d], index (k (l+1) + d) m + i
  std::vector<CyclicBanded> M;  // M_k, k = 1..l; block (k, 0) of L is M_k^T
  double l11 = 0.0;
  Eigen::VectorXd v;           // rows 1..m-1 of the first head column
  Eigen::VectorXd head_diag;   // L0'(k, k), k = 0..m-2 (head rows 1..m-1)
  Eigen::VectorXd head_sub;    // L0'(k, k-1)
  long long factor_ops = 0;
  mutable long long solve_ops = 0;

  int size() const { return m * (p + 1); }
  Eigen::MatrixXd dense_L() const;
  CB3Arrowhead L1() const;
  Eigen::MatrixXd L2_block() const;
};

ReverseCholeskyFactor reverse_cholesky(const CB3Arrowhead& a);
Eigen::VectorXd solve(const ReverseCholeskyFactor& f, const Eigen::VectorXd& rhs);

}  // namespace arcsem
