#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "arcsem/arcpoly.hpp"
#include "arcsem/banded.hpp"

namespace arcsem {

// Blocks of a single-arc multiplication operator for
// a = b_2(sigma) + y b_1(sigma), with a given by its interlaced coefficients:
//   a p = q M12 + p M22,   a q = p M11 + q M21.
struct MultBlocks {
  BandedOperator m11, m12, m21, m22;
  int alpha1 = 0, alpha2 = 0;  // degrees of the q- and p-parts of a
  int size() const { return m22.rows(); }
};

// sum_k f_k P_k(J) for the family with recurrence rc, J an N x N section of
// a tridiagonal matrix; evaluated by Clenshaw's recurrence.
Eigen::SparseMatrix<double> matrix_clenshaw(const RecurrenceCoeffs& rc,
                                            const Eigen::VectorXd& f,
                                            const Eigen::SparseMatrix<double>& J);

// alpha2 = floor((L-1)/2), alpha1 = ceil((L-1)/2) for an expansion of length L.
void mult_degrees(int length, int& alpha1, int& alpha2);
int mult_bandwidth(int alpha1, int alpha2);

// Blocks of size nb x nb; Clenshaw runs on a padded section and is cropped,
// so every kept entry is exact.
MultBlocks mult_blocks(const ArcBasis& basis, const Eigen::VectorXd& a, int nb);
// Interlaced n x n J_a with a P = P J_a; declared (alpha, alpha) banded.
BandedOperator build_ja(const MultBlocks& blocks, int n);
BandedOperator mult_matrix(const ArcBasis& basis, const Eigen::VectorXd& a, int n);

}  // namespace arcsem
