#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "arcsem/multop.hpp"
#include "support.hpp"

using namespace arcsem;
using arcsem::testing::linspace;

namespace {

std::vector<double> values(const ArcBasis& basis, double theta, int n) {
  std::vector<double> v(n);
  arc_basis_values(basis, theta, n, v.data());
  return v;
}

Eigen::VectorXd expand(const ArcBasis& a, const std::function<double(double)>& f) {
  return chop_trailing(arc_transform(a, f), 1e-15);
}

}  // namespace

TEST(MatrixClenshaw, MatchesScalarClenshawOnDiagonal) {
  const ArcBasis a(0, 0.1);
  const RecurrenceCoeffs rc = recurrence_coeffs(a.minus_params(), 8);
  Eigen::VectorXd f(5);
  f << 0.3, -1.0, 0.5, 0.25, -0.125;
  Eigen::SparseMatrix<double> D(4, 4);
  const double xs[] = {0.1, 0.4, 0.7, 0.95};
  for (int k = 0; k < 4; ++k) D.insert(k, k) = xs[k];
  const Eigen::MatrixXd F(matrix_clenshaw(rc, f, D));
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(F(k, k), evaluate(rc, f, xs[k]), 1e-14);
}

TEST(MultBlocks, ConstantFunction) {
  const ArcBasis a(0, -0.2);
  Eigen::VectorXd one(1);
  one << 1.0;
  const MultBlocks b = mult_blocks(a, one, 8);
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(8, 8);
  EXPECT_LT((b.m22.dense() - I).norm(), 1e-14);
  EXPECT_LT((b.m21.dense() - I).norm(), 1e-14);
  EXPECT_EQ(b.m11.dense().norm(), 0.0);
  EXPECT_EQ(b.m12.dense().norm(), 0.0);
}

TEST(MultBlocks, SineAgainstPointwiseProducts) {
  const ArcBasis a(0, 0.3);
  Eigen::VectorXd s = Eigen::VectorXd::Zero(2);
  s[arc_q_index(1)] = 1.0;
  const int nb = 7, n = 2 * nb;
  const MultBlocks b = mult_blocks(a, s, nb);
  EXPECT_EQ(b.alpha1, 1);
  EXPECT_EQ(b.alpha2, 0);
  // sin(theta) q_{j+1} = sum_i p_i M11(i, j) + q_{i+1} M21(i, j).
  for (double th : linspace(-a.phi(), a.phi(), 15)) {
    const auto v = values(a, th, n + 2);
    for (int j = 0; j + 2 < nb; ++j) {
      double rhs = 0.0;
      for (int i = 0; i < nb; ++i) rhs += v[2 * i] * b.m11(i, j) + v[2 * i + 1] * b.m21(i, j);
      EXPECT_NEAR(rhs, std::sin(th) * v[2 * j + 1], 1e-12);
    }
  }
}

TEST(MultBlocks, DeclaredBandwidthsHold) {
  const ArcBasis a(0, -0.4);
  const Eigen::VectorXd c = expand(a, [](double t) { return std::sin(2 * t) + std::cos(t); });
  const MultBlocks b = mult_blocks(a, c, 12);
  const int a1 = b.alpha1, a2 = b.alpha2;
  const auto check = [](const BandedOperator& m, int lo, int up) {
    const Eigen::MatrixXd d = m.dense();
    for (int i = 0; i < d.rows(); ++i)
      for (int j = 0; j < d.cols(); ++j)
        if (j - i > up || i - j > lo) EXPECT_LT(std::abs(d(i, j)), 1e-13) << i << "," << j;
  };
  check(b.m22, a2, a2);
  check(b.m21, a2, a2);
  check(b.m12, a1 - 1, a1 + 1);
  check(b.m11, a1 + 1, a1 - 1);
}

TEST(BuildJa, ConstantIsIdentity) {
  Eigen::VectorXd one(1);
  one << 1.0;
  const BandedOperator J = mult_matrix(ArcBasis(0, 0.5), one, 11);
  EXPECT_LT((J.dense() - Eigen::MatrixXd::Identity(11, 11)).norm(), 1e-14);
}

TEST(BuildJa, CosineBandwidthAndPointwise) {
  const ArcBasis a(0, 0.0);
  const Eigen::VectorXd c = expand(a, [](double t) { return std::cos(t); });
  int a1 = 0, a2 = 0;
  mult_degrees(static_cast<int>(c.size()), a1, a2);
  EXPECT_EQ(a1, 1);
  EXPECT_EQ(a2, 1);
  EXPECT_EQ(mult_bandwidth(a1, a2), 3);

  const int n = 21;
  const BandedOperator J = mult_matrix(a, c, n);
  EXPECT_EQ(J.lower(), 3);
  EXPECT_EQ(J.upper(), 3);
  std::mt19937_64 rng(20);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
    for (int k = 0; k < n - 4; ++k) f[k] = u(rng);
    const Eigen::VectorXd af = J.apply(f);
    for (int s = 0; s < 30; ++s) {
      const double th = u(rng) * a.phi();
      EXPECT_NEAR(eval_arc(a, af, th), std::cos(th) * eval_arc(a, f, th), 1e-11);
    }
  }
}

TEST(BuildJa, CommutesWithTransform) {
  const ArcBasis a(0, -0.3);
  const auto g = [](double t) { return 1.0 / (3.0 - std::cos(t)); };
  const auto f = [](double t) { return std::exp(std::sin(t)); };
  const Eigen::VectorXd ca = expand(a, g);
  const Eigen::VectorXd cf = expand(a, f);
  const Eigen::VectorXd cp = expand(a, [&](double t) { return g(t) * f(t); });
  const int n = static_cast<int>(std::max(cp.size(), cf.size()) + ca.size() + 4);
  const BandedOperator J = mult_matrix(a, ca, n);
  Eigen::VectorXd lhs = Eigen::VectorXd::Zero(n);
  lhs.head(cp.size()) = cp;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs.head(cf.size()) = cf;
  EXPECT_LT((J.apply(rhs) - lhs).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(BuildJa, MassWeightedFormIsSymmetric) {
  const ArcBasis a(0, 0.2);
  const Eigen::VectorXd c = expand(a, [](double t) { return std::cos(2 * t) + 0.5 * std::sin(t); });
  const int n = 25;
  const Eigen::MatrixXd J = mult_matrix(a, c, n).dense();
  const Eigen::MatrixXd MJ = arc_mass(a, n).dense() * J;
  const int k = n - 8;  // away from the truncation edge
  const Eigen::MatrixXd S = MJ.topLeftCorner(k, k);
  EXPECT_LT((S - S.transpose()).cwiseAbs().maxCoeff(), 1e-11 * S.cwiseAbs().maxCoeff());
}
