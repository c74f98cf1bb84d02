#include <gtest/gtest.h>

#include <cmath>

#include "nckit/nc_lp.hpp"
#include "nckit/random.hpp"
#include "oracles.hpp"

using namespace nckit;

namespace {

AlgebraElement diag(std::initializer_list<double> d) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double v : d) m(i, i) = v, ++i;
  return AlgebraElement::from_matrix(m);
}

const std::vector<double> kExponents{1.0, 1.5, 2.0, 3.0, kInf};

}  // namespace

TEST(LpNorm, Examples) {
  const MatrixAlgebra m4 = MatrixAlgebra::full(4);
  const auto tau = TraceSpec::can(m4);
  const auto p2 = diag({1, 1, 0, 0});
  for (double p : {1.0, 2.0, 3.5, 10.0}) EXPECT_NEAR(lp_norm(p2, p, tau), std::pow(2.0, 1.0 / p), 1e-14);
  EXPECT_NEAR(lp_norm(p2, kInf, tau), 1.0, 1e-15);
  EXPECT_NEAR(lp_norm(diag({3, 4}), 2.0, TraceSpec::can(MatrixAlgebra::full(2))), 5.0, 1e-14);
}

TEST(LpNorm, AgreesWithEigenvalueOracle) {
  Rng rng(61);
  const MatrixAlgebra a({{3, 2}, {2, 1}});
  for (const auto& tau : {TraceSpec::can(a), TraceSpec::rep(a)}) {
    const auto x = random_element(a, rng);
    double ref = 0.0;
    for (std::size_t k = 0; k < a.block_count(); ++k) ref += tau.weight(k) * oracle::schatten_power(x.block(k), 3.5);
    EXPECT_NEAR(lp_norm(x, 3.5, tau), std::pow(ref, 1.0 / 3.5), 1e-10);
  }
}

TEST(LpNorm, TwoNormIsHilbertSchmidt) {
  Rng rng(62);
  const MatrixAlgebra a({{2, 1}, {3, 1}});
  const auto x = random_element(a, rng);
  EXPECT_NEAR(lp_norm(x, 2.0, TraceSpec::can(a)), x.hs_norm(), 1e-12);
}

TEST(LpNorm, BadExponent) {
  const auto tau = TraceSpec::can(MatrixAlgebra::full(2));
  try {
    lp_norm(diag({1, 1}), 0.5, tau);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BadExponent);
  }
}

TEST(LpNorm, TriangleAndUnitaryInvariance) {
  Rng rng(63);
  const MatrixAlgebra a({{3, 1}, {2, 2}});
  for (const auto& tau : {TraceSpec::can(a), TraceSpec::rep(a)})
    for (double p : {1.0, 1.5, 2.0, 4.0}) {
      for (int trial = 0; trial < 100; ++trial) {
        const auto x = random_element(a, rng), y = random_element(a, rng);
        EXPECT_GE(lp_norm(x, p, tau) + lp_norm(y, p, tau) - lp_norm(x + y, p, tau), -1e-10);
      }
      const auto x = random_element(a, rng);
      const auto u = random_unitary(a, rng), v = random_unitary(a, rng);
      EXPECT_NEAR(lp_norm(u * x * v, p, tau), lp_norm(x, p, tau), 1e-10);
    }
}

TEST(LpNorm, NonincreasingInPWhenWeightsAtLeastOne) {
  Rng rng(64);
  const MatrixAlgebra a({{3, 1}, {2, 3}});
  const auto tau = TraceSpec::rep(a);
  const auto x = random_element(a, rng);
  double prev = kInf;
  for (double p : {1.0, 1.25, 1.5, 2.0, 3.0, 5.0, 8.0, kInf}) {
    const double n = lp_norm(x, p, tau);
    EXPECT_LE(n, prev + 1e-12);
    prev = n;
  }
}

TEST(Duality, Examples) {
  const int n = 4;
  const MatrixAlgebra mn = MatrixAlgebra::full(n);
  const auto id = AlgebraElement::identity(mn);
  EXPECT_NEAR(duality_pair(id, id, TraceSpec::can(mn)).real(), n, 1e-15);
  EXPECT_EQ(conjugate_exponent(1.0), kInf);
  EXPECT_EQ(conjugate_exponent(kInf), 1.0);
  EXPECT_NEAR(conjugate_exponent(3.0), 1.5, 1e-15);
}

TEST(Duality, ExtremalDualSaturatesHolder) {
  Rng rng(65);
  const MatrixAlgebra a({{2, 1}, {3, 2}});
  for (const auto& tau : {TraceSpec::can(a), TraceSpec::rep(a)})
    for (double p : kExponents)
      for (int trial = 0; trial < 10; ++trial) {
        const auto x = random_element(a, rng);
        const auto y = extremal_dual(x, p, tau);
        const double q = conjugate_exponent(p);
        EXPECT_NEAR(lp_norm(y, q, tau), 1.0, 1e-9) << "p=" << p;
        const Complex pair = duality_pair(x, y, tau);
        EXPECT_NEAR(pair.real(), lp_norm(x, p, tau), 1e-9 * lp_norm(x, p, tau)) << "p=" << p;
        EXPECT_NEAR(pair.imag(), 0.0, 1e-9 * lp_norm(x, p, tau));
      }
}

TEST(Duality, HolderWithConjugateExponents) {
  Rng rng(66);
  const MatrixAlgebra a({{3, 1}, {2, 2}});
  const auto tau = TraceSpec::rep(a);
  for (int trial = 0; trial < 100; ++trial) {
    const auto x = random_element(a, rng), y = random_element(a, rng);
    EXPECT_GE(lp_norm(x, 3.0, tau) * lp_norm(y, 1.5, tau) - std::abs(duality_pair(x, y, tau)), -1e-12);
    EXPECT_LT(std::abs(duality_pair(x, y, tau) - duality_pair(y, x, tau)), 1e-11);
    // The stronger form ‖xy‖₁ ≤ ‖x‖_p‖y‖_q.
    EXPECT_LE(lp_norm(x * y, 1.0, tau), lp_norm(x, 3.0, tau) * lp_norm(y, 1.5, tau) + 1e-10);
  }
}

TEST(Duality, NoRandomUnitBallElementBeatsTheExtremal) {
  Rng rng(67);
  const MatrixAlgebra a({{3, 1}});
  const auto tau = TraceSpec::can(a);
  const auto x = random_element(a, rng);
  const double target = lp_norm(x, 1.5, tau);
  for (int trial = 0; trial < 200; ++trial) {
    auto y = random_element(a, rng);
    y *= 1.0 / lp_norm(y, 3.0, tau);
    EXPECT_LE(std::abs(duality_pair(x, y, tau)), target + 1e-12);
  }
}

TEST(Mazur, Examples) {
  const auto id = AlgebraElement::identity(MatrixAlgebra::full(3));
  EXPECT_LT(operator_norm(mazur(id, 2.7) - id), 1e-15);
  EXPECT_LT(operator_norm(mazur(diag({4, 9}), 0.5) - diag({2, 3})), 1e-15);
  EXPECT_THROW(mazur(diag({1, -1}), 2.0), Error);
  EXPECT_THROW(mazur(diag({1, 1}), 0.0), Error);
}

TEST(Mazur, RoundTripAndNormMapping) {
  Rng rng(68);
  const MatrixAlgebra a({{3, 1}, {2, 2}});
  const auto tau = TraceSpec::rep(a);
  for (int trial = 0; trial < 10; ++trial) {
    const auto x = random_positive(a, rng);
    EXPECT_LT(operator_norm(mazur(mazur(x, 3.0), 1.0 / 3.0) - x), 1e-9 * operator_norm(x));
    // ‖x^{p/q}‖_q^q = ‖x‖_p^p for positive x.
    EXPECT_NEAR(std::pow(lp_norm(mazur(x, 1.5), 2.0, tau), 2.0), std::pow(lp_norm(x, 3.0, tau), 3.0),
                1e-9 * std::pow(lp_norm(x, 3.0, tau), 3.0));
  }
}

TEST(Rearrangement, ProjectionIsOneStep) {
  const auto mu = rearrangement(diag({1, 0, 1, 1}), TraceSpec::can(MatrixAlgebra::full(4)));
  ASSERT_EQ(mu.steps().size(), 1u);
  EXPECT_DOUBLE_EQ(mu.steps()[0].width, 3.0);
  EXPECT_NEAR(mu.steps()[0].value, 1.0, 1e-15);
}

TEST(Rearrangement, WeightedSortAcrossBlocks) {
  const MatrixAlgebra a({{2, 1}, {1, 2}});
  AlgebraElement x(a);
  x.block(0) = diag({3, 1}).block(0);
  x.block(1)(0, 0) = 2.0;
  const auto mu = rearrangement(x, TraceSpec::rep(a));
  ASSERT_EQ(mu.steps().size(), 3u);
  const std::vector<std::pair<double, double>> ref{{1, 3}, {2, 2}, {1, 1}};
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_DOUBLE_EQ(mu.steps()[i].width, ref[i].first);
    EXPECT_NEAR(mu.steps()[i].value, ref[i].second, 1e-14);
  }
  EXPECT_DOUBLE_EQ(mu(0.5), mu.steps()[0].value);
  EXPECT_DOUBLE_EQ(mu(1.0), mu.steps()[1].value);
  EXPECT_EQ(mu(4.0), 0.0);
}

TEST(Rearrangement, IntegralOfPowerIsLpNorm) {
  Rng rng(69);
  const MatrixAlgebra a({{3, 2}, {2, 1}, {1, 3}});
  for (const auto& tau : {TraceSpec::can(a), TraceSpec::rep(a)}) {
    const auto x = random_element(a, rng);
    const auto mu = rearrangement(x, tau);
    for (double p : {1.0, 2.0, 3.0})
      EXPECT_NEAR(mu.integrate([p](double v) { return std::pow(v, p); }), std::pow(lp_norm(x, p, tau), p),
                  1e-11 * std::pow(lp_norm(x, p, tau), p));
    EXPECT_NEAR(mu.support_length(), tau(AlgebraElement::identity(a)).real(), 1e-12);
  }
}

TEST(StepFunction, RejectsBadSteps) {
  EXPECT_THROW(StepFunction({{0.0, 1.0}}), Error);
  EXPECT_THROW(StepFunction({{1.0, 1.0}, {1.0, 2.0}}), Error);
}
