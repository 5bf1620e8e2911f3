#include "arcsem/multop.hpp"

#include <algorithm>
#include <stdexcept>

namespace arcsem {

namespace {

using Sparse = Eigen::SparseMatrix<double>;

Sparse to_sparse(const BandedOperator& a) {
  std::vector<Eigen::Triplet<double>> t;
  for (int j = 0; j < a.cols(); ++j)
    for (int i = std::max(0, j - a.upper()); i <= std::min(a.rows() - 1, j + a.lower()); ++i) {
      const double v = a(i, j);
      if (v != 0.0) t.emplace_back(i, j, v);
    }
  Sparse s(a.rows(), a.cols());
  s.setFromTriplets(t.begin(), t.end());
  return s;
}

BandedOperator crop(const Sparse& s, int n, int lower, int upper) {
  BandedOperator out(n, n, lower, upper);
  for (int j = 0; j < n; ++j)
    for (Sparse::InnerIterator it(s, j); it; ++it) {
      const int i = static_cast<int>(it.row());
      if (i >= n || it.value() == 0.0) continue;
      out.at(i, j) = it.value();
    }
  return out;
}

}  // namespace

Sparse matrix_clenshaw(const RecurrenceCoeffs& rc, const Eigen::VectorXd& f, const Sparse& J) {
  const int K = static_cast<int>(f.size());
  const int N = static_cast<int>(J.rows());
  Sparse I(N, N);
  I.setIdentity();
  if (K == 0) return Sparse(N, N);
  if (rc.size() < K) throw std::invalid_argument("matrix_clenshaw: too few coefficients");
  Sparse b1(N, N), b2(N, N);  // b_{k+1}, b_{k+2}
  for (int k = K - 1; k >= 0; --k) {
    Sparse bk = f[k] * I;
    if (k + 1 < K) {
      Sparse shifted = (J - rc.a[k] * I) / rc.b[k];
      bk += shifted * b1;
    }
    if (k + 2 < K) bk -= (rc.c[k + 1] / rc.b[k + 1]) * b2;
    b2 = std::move(b1);
    b1 = std::move(bk);
    b1.prune(0.0);
  }
  return b1;
}

void mult_degrees(int length, int& alpha1, int& alpha2) {
  if (length < 1) throw std::invalid_argument("mult_degrees: empty expansion");
  alpha2 = (length - 1) / 2;
  alpha1 = length / 2;
}

int mult_bandwidth(int alpha1, int alpha2) {
  return 2 * std::max(alpha1, alpha2) + (alpha1 >= alpha2 ? 1 : 0);
}

MultBlocks mult_blocks(const ArcBasis& basis, const Eigen::VectorXd& a, int nb) {
  if (nb < 1) throw std::invalid_argument("mult_blocks: nb < 1");
  MultBlocks out;
  mult_degrees(static_cast<int>(a.size()), out.alpha1, out.alpha2);
  const int a1 = out.alpha1, a2 = out.alpha2;
  const int N = nb + 2 * std::max(a1, a2) + 6;
  const WeightParams pm = basis.minus_params(), pp = basis.plus_params();
  const RecurrenceCoeffs rm = recurrence_coeffs(pm, N + 1);
  const RecurrenceCoeffs rp = recurrence_coeffs(pp, N + 1);
  const Sparse Jm = to_sparse(jacobi_matrix(rm, N));
  const Sparse Jp = to_sparse(jacobi_matrix(rp, N));

  Eigen::VectorXd f2(a2 + 1), f1(a1);
  for (int k = 0; k <= a2; ++k) f2[k] = a[2 * k];
  for (int k = 0; k < a1; ++k) f1[k] = a[2 * k + 1];

  out.m22 = crop(matrix_clenshaw(rm, f2, Jm), nb, a2, a2);
  out.m21 = crop(matrix_clenshaw(rm, f2, Jp), nb, a2, a2);
  if (a1 == 0) {
    out.m12 = BandedOperator(nb, nb, -1, 1);
    out.m11 = BandedOperator(nb, nb, 1, -1);
    return out;
  }
  const Sparse R = to_sparse(connection_matrix(pm, pp, N));
  const Sparse L = to_sparse(weighted_connection(pp, pm, N, "ac"));
  const double omh = basis.one_minus_h();
  const Sparse m12 = R * matrix_clenshaw(rp, f1, Jm);
  const Sparse m11 = (omh * omh) * (L * matrix_clenshaw(rp, f1, Jp));
  out.m12 = crop(m12, nb, a1 - 1, a1 + 1);
  out.m11 = crop(m11, nb, a1 + 1, a1 - 1);
  return out;
}

BandedOperator build_ja(const MultBlocks& blocks, int n) {
  const int alpha = mult_bandwidth(blocks.alpha1, blocks.alpha2);
  const int nb = blocks.size();
  if (n > 2 * nb - 1) throw std::invalid_argument("build_ja: blocks too small for n");
  BandedOperator J(n, n, alpha, alpha);
  auto put = [&](int r, int c, double v) {
    if (r < n && c < n && v != 0.0) J.at(r, c) = v;
  };
  for (int j = 0; j < nb; ++j)
    for (int i = 0; i < nb; ++i) {
      put(2 * i, 2 * j, blocks.m22(i, j));
      put(2 * i + 1, 2 * j, blocks.m12(i, j));
      put(2 * i, 2 * j + 1, blocks.m11(i, j));
      put(2 * i + 1, 2 * j + 1, blocks.m21(i, j));
    }
  return J;
}

BandedOperator mult_matrix(const ArcBasis& basis, const Eigen::VectorXd& a, int n) {
  return build_ja(mult_blocks(basis, a, n / 2 + 1), n);
}

}  // namespace arcsem
