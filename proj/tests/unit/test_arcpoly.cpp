#include <cmath>
#include <random>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include "arcsem/arcpoly.hpp"
#include "support.hpp"

using namespace arcsem;
using arcsem::testing::kPi;

namespace {

std::vector<double> values(const ArcBasis& basis, double theta, int n) {
  std::vector<double> v(n);
  arc_basis_values(basis, theta, n, v.data());
  return v;
}

double integrate(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-15);
}

Eigen::VectorXd unit(int n, int k) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  e[k] = 1.0;
  return e;
}

}  // namespace

TEST(ArcBasis, DerivedQuantities) {
  const ArcBasis a(0, 0.3);
  EXPECT_NEAR(a.phi(), std::acos(0.3), 1e-15);
  EXPECT_NEAR(a.tau(), 2.0 / 0.7, 1e-14);
  EXPECT_NEAR(a.sigma(0.0), 0.0, 1e-16);
  EXPECT_NEAR(a.sigma(a.phi()), 1.0, 1e-14);
  EXPECT_NEAR(a.theta_of_sigma(a.sigma(0.4)), 0.4, 1e-13);
  EXPECT_THROW(ArcBasis(0, 1.0), std::exception);
}

TEST(ArcEval, ConstantAndSine) {
  const ArcBasis a(0, -0.2);
  for (double th : {-1.5, -0.3, 0.0, 0.9, a.phi()}) {
    EXPECT_NEAR(eval_arc(a, unit(5, 0), th), 1.0, 1e-15);
    EXPECT_NEAR(eval_arc(a, unit(5, arc_q_index(1)), th), std::sin(th), 1e-14);
  }
}

TEST(ArcEval, MatchesComposition) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int b : {-1, 0, 1}) {
    const ArcBasis a(b, 0.25);
    const RecurrenceCoeffs rm = recurrence_coeffs(a.minus_params(), 6);
    const RecurrenceCoeffs rp = recurrence_coeffs(a.plus_params(), 6);
    Eigen::VectorXd c(9);
    for (int k = 0; k < 9; ++k) c[k] = u(rng);
    Eigen::VectorXd fp = Eigen::VectorXd::Zero(5), fq = Eigen::VectorXd::Zero(4);
    fp[0] = c[0];
    for (int n = 1; n <= 4; ++n) {
      fp[n] = c[arc_p_index(n)];
      fq[n - 1] = c[arc_q_index(n)];
    }
    for (int s = 0; s < 20; ++s) {
      const double th = u(rng) * a.phi();
      const double x = a.sigma(th);
      const double direct = evaluate(rm, fp, x) + std::sin(th) * evaluate(rp, fq, x);
      EXPECT_NEAR(eval_arc(a, c, th), direct, 1e-13);
    }
  }
}

TEST(ArcConnection, BandAndLeadingEntry) {
  for (int b : {-1, 0}) {
    const ArcBasis a(b, 0.1);
    const BandedOperator R = arc_connection(a, 15);
    EXPECT_EQ(R.lower(), 0);
    EXPECT_EQ(R.upper(), 2);
    const Eigen::MatrixXd d = R.dense();
    for (int i = 0; i < 15; ++i)
      for (int j = 0; j < 15; ++j)
        if (j < i || j > i + 2) EXPECT_EQ(d(i, j), 0.0);
    EXPECT_NEAR(d(0, 0), 1.0, 1e-14);
  }
}

TEST(ArcConnection, Pointwise) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int b : {-1, 0}) {
    const ArcBasis a(b, -0.4), up = a.with_b(b + 1);
    const int n = 13;
    const Eigen::MatrixXd R = arc_connection(a, n).dense();
    for (int s = 0; s < 20; ++s) {
      const double th = u(rng) * a.phi();
      const auto lo = values(a, th, n), hi = values(up, th, n);
      const Eigen::RowVectorXd via = Eigen::Map<const Eigen::RowVectorXd>(hi.data(), n) * R;
      for (int k = 0; k < n - 2; ++k) EXPECT_NEAR(via[k], lo[k], 1e-11);
    }
  }
}

TEST(ArcDiff, SineToCosine) {
  const ArcBasis a(0, 0.2), up = a.with_b(1);
  const Eigen::VectorXd d = arc_diff(a, 9).apply(unit(9, arc_q_index(1)));
  for (double th : {-1.2, -0.5, 0.0, 0.7, 1.3}) EXPECT_NEAR(eval_arc(up, d, th), std::cos(th), 1e-12);
}

TEST(ArcDiff, ConstantColumnVanishes) {
  for (int b : {-1, 0}) {
    const Eigen::MatrixXd D = arc_diff(ArcBasis(b, 0.5), 9).dense();
    EXPECT_LT(D.col(0).norm(), 1e-14);
  }
}

TEST(ArcDiff, BandAndFiniteDifferences) {
  for (int b : {-1, 0}) {
    const ArcBasis a(b, -0.3), up = a.with_b(b + 1);
    const int n = 12;
    const BandedOperator D = arc_diff(a, n);
    EXPECT_EQ(D.lower(), 1);
    EXPECT_EQ(D.upper(), 3);
    const Eigen::MatrixXd Dd = D.dense();
    for (int i = 1; i <= 10; ++i) {
      const double th = a.phi() * (2.0 * i / 11.0 - 1.0), h = 1e-6;
      const auto vp = values(a, th + h, n), vm = values(a, th - h, n), vu = values(up, th, n);
      const Eigen::RowVectorXd via = Eigen::Map<const Eigen::RowVectorXd>(vu.data(), n) * Dd;
      for (int k = 0; k < 8; ++k) {
        const double fd = (vp[k] - vm[k]) / (2 * h);
        EXPECT_NEAR(via[k], fd, 1e-7 * std::max(1.0, std::abs(fd)));
      }
    }
  }
}

TEST(ArcMass, HalfCircle) {
  EXPECT_NEAR(mass_p_closed(0.0), kPi, 1e-15);
  EXPECT_NEAR(mass_q_closed(0.0), kPi / 2, 1e-15);
  const ArcBasis a(0, 0.0);
  EXPECT_NEAR(arc_mass_p(a), kPi, 1e-15);
  EXPECT_NEAR(arc_mass_q(a), kPi / 2, 1e-15);
}

TEST(ArcMass, DiagonalMatchesQuadrature) {
  for (double h : {-0.5, 0.2, 0.9}) {
    const ArcBasis a(0, h);
    const int n = 13;
    const BandedOperator M = arc_mass(a, n);
    for (int k = 0; k < n; ++k) {
      const double q = integrate([&](double th) {
        const double v = values(a, th, n)[k];
        return v * v;
      }, -a.phi(), a.phi());
      EXPECT_NEAR(M(k, k), q, 1e-12 * q);
      EXPECT_NEAR(M(k, k), k % 2 ? mass_q_closed(h) : mass_p_closed(h), 1e-12 * q);
    }
  }
}

TEST(ArcMass, GramMatrixOrthogonalAndMinusOneMass) {
  for (double h : {0.0, 0.6}) {
    for (int b : {-1, 0}) {
      const ArcBasis a(b, h);
      const int n = 9;
      const Eigen::MatrixXd M = arc_mass(a, n).dense();
      for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) {
          const double q = integrate([&](double th) {
            const auto v = values(a, th, n);
            return v[i] * v[j];
          }, -a.phi(), a.phi());
          EXPECT_NEAR(M(i, j), q, 1e-12 * std::max(1.0, std::abs(M(i, i))));
          if (b == 0 && i != j) EXPECT_LT(std::abs(q), 1e-11);
        }
    }
  }
}

TEST(ArcTransform, Constant) {
  const ArcBasis a(0, 0.1);
  const Eigen::VectorXd c = arc_transform(a, [](double) { return 1.0; });
  EXPECT_NEAR(c[0], 1.0, 1e-14);
  EXPECT_LT(c.tail(c.size() - 1).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(ArcTransform, SineIsSingleSlot) {
  const ArcBasis a(0, -0.3);
  const Eigen::VectorXd c = arc_transform(a, [](double t) { return std::sin(t); });
  for (int k = 0; k < c.size(); ++k) {
    if (k == arc_q_index(1))
      EXPECT_NEAR(c[k], 1.0, 1e-13);
    else
      EXPECT_LT(std::abs(c[k]), 1e-13);
  }
}

TEST(ArcTransform, RoundTripAndEvenSplit) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int b : {-1, 0}) {
    const ArcBasis a(b, 0.2);
    const auto f = [](double t) { return std::exp(std::cos(t)); };
    const Eigen::VectorXd c = arc_transform(a, f);
    for (int s = 0; s < 50; ++s) {
      const double th = u(rng) * a.phi();
      EXPECT_NEAR(eval_arc(a, c, th), f(th), 1e-12);
    }
    if (b == 0)
      for (int k = 1; k < c.size(); k += 2) EXPECT_LT(std::abs(c[k]), 1e-12);
  }
}

TEST(ArcTransform, TrigPolynomialIsFinite) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int N = 4;
  std::vector<double> ca(N + 1), cb(N + 1);
  for (int k = 0; k <= N; ++k) {
    ca[k] = u(rng);
    cb[k] = u(rng);
  }
  const auto f = [&](double t) {
    double s = ca[0];
    for (int k = 1; k <= N; ++k) s += ca[k] * std::cos(k * t) + cb[k] * std::sin(k * t);
    return s;
  };
  for (double h : {-0.6, 0.0, 0.7}) {
    const Eigen::VectorXd c = arc_transform_fixed(ArcBasis(0, h), f, 32);
    for (int k = 2 * N + 1; k < c.size(); ++k) EXPECT_LT(std::abs(c[k]), 1e-11);
  }
}

TEST(TrigExpand, CosineLowOrders) {
  const ArcBasis a(0, 0.0);
  const Eigen::MatrixXd mu = trig_expand_cos(a, 1);
  EXPECT_NEAR(mu(0, 0), mass_p_closed(0.0), 1e-15);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(3);
  c[0] = mu(0, 1) / mu(0, 0);
  c[arc_p_index(1)] = mu(1, 1) / mu(0, 0);
  for (double th : arcsem::testing::linspace(-a.phi(), a.phi(), 20))
    EXPECT_NEAR(eval_arc(a, c, th), std::cos(th), 1e-13);
}

TEST(TrigExpand, CosineMatchesProjection) {
  for (double h : {-0.5, 0.3}) {
    const ArcBasis a(0, h);
    const Eigen::MatrixXd mu = trig_expand_cos(a, 5);
    const Eigen::VectorXd c = arc_transform_fixed(a, [](double t) { return std::cos(5 * t); }, 16);
    for (int j = 0; j <= 5; ++j) EXPECT_NEAR(mu(j, 5) / mu(0, 0), c[arc_p_index(j)], 1e-11);
  }
}

TEST(TrigExpand, SineLowOrders) {
  const ArcBasis a(0, 0.4);
  const Eigen::MatrixXd eta = trig_expand_sin(a, 2);
  EXPECT_NEAR(eta(1, 1), mass_q_closed(0.4), 1e-14);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(5);
  c[arc_q_index(1)] = eta(1, 2) / eta(1, 1);
  c[arc_q_index(2)] = eta(2, 2) / eta(1, 1);
  for (double th : arcsem::testing::linspace(-a.phi(), a.phi(), 20))
    EXPECT_NEAR(eval_arc(a, c, th), std::sin(2 * th), 1e-13);
}

TEST(TrigExpand, SineMatchesProjection) {
  for (double h : {-0.5, 0.3}) {
    const ArcBasis a(0, h);
    const Eigen::MatrixXd eta = trig_expand_sin(a, 6);
    const Eigen::VectorXd c = arc_transform_fixed(a, [](double t) { return std::sin(6 * t); }, 16);
    for (int j = 1; j <= 6; ++j) EXPECT_NEAR(eta(j, 6) / eta(1, 1), c[arc_q_index(j)], 1e-11);
  }
}

TEST(TrigExpand, LocalCoefficientsReconstruct) {
  const ArcBasis a(0, -0.1);
  Eigen::VectorXd ca(3), cb(3);
  ca << 0.5, -1.0, 0.25;
  cb << 2.0, 0.0, -0.75;
  const Eigen::VectorXd c = trig_local_coeffs(a, 1.5, ca, cb);
  ASSERT_EQ(c.size(), 7);
  for (double th : arcsem::testing::linspace(-a.phi(), a.phi(), 25)) {
    double f = 1.5;
    for (int k = 1; k <= 3; ++k) f += ca[k - 1] * std::cos(k * th) + cb[k - 1] * std::sin(k * th);
    EXPECT_NEAR(eval_arc(a, c, th), f, 1e-12);
  }
}

TEST(Chop, DropsTrailing) {
  Eigen::VectorXd c(5);
  c << 1.0, 0.5, 1e-3, 1e-16, 1e-17;
  EXPECT_EQ(chop_trailing(c, 1e-14).size(), 3);
  EXPECT_EQ(chop_trailing(Eigen::VectorXd::Zero(4), 1e-14).size(), 1);
}
