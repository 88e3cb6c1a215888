#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "midec/errors.hpp"
#include "midec/linalg.hpp"
#include "midec/random.hpp"
#include "midec/targets.hpp"

using namespace midec;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

VectorXd vec(std::initializer_list<double> v) {
  VectorXd out(v.size());
  int i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

MatrixXd random_spd(int d, RngStream& rng) {
  MatrixXd a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = rng.normal();
  return a * a.transpose() + 0.5 * MatrixXd::Identity(d, d);
}

}  // namespace

TEST(GaussianDist, RejectsBadCovariances) {
  EXPECT_THROW(GaussianDist(vec({0}), MatrixXd::Constant(1, 1, -1)), DomainError);
  MatrixXd asym(2, 2);
  asym << 1, 0.5, 0.2, 1;
  EXPECT_THROW(GaussianDist(vec({0, 0}), asym), DomainError);
  EXPECT_THROW(GaussianDist(vec({0, 0}), MatrixXd::Identity(3, 3)), DomainError);
}

TEST(GaussianDist, Isotropy) {
  EXPECT_TRUE(GaussianDist::isotropic(vec({1, 2}), 3).is_isotropic());
  EXPECT_DOUBLE_EQ(GaussianDist::isotropic(vec({1, 2}), 3).isotropic_variance(), 3);
  MatrixXd c(2, 2);
  c << 1, 0, 0, 4;
  EXPECT_FALSE(GaussianDist(vec({0, 0}), c).is_isotropic());
  EXPECT_THROW(GaussianDist(vec({0, 0}), c).isotropic_variance(), DomainError);
}

TEST(GaussianPotential, StandardNormal) {
  const Potential p = gaussian_potential(GaussianDist::standard(1));
  EXPECT_DOUBLE_EQ(p.value(vec({2})), 2.0);
  EXPECT_DOUBLE_EQ(p.gradient(vec({2}))(0), 2.0);
}

TEST(GaussianPotential, IsotropicConstants) {
  const Potential p = gaussian_potential(GaussianDist::isotropic(vec({0}), 0.25));
  EXPECT_NEAR(p.alpha(), 4.0, 1e-12);
  ASSERT_TRUE(p.smoothness());
  EXPECT_NEAR(*p.smoothness(), 4.0, 1e-12);
}

TEST(GaussianPotential, DiagonalConstants) {
  MatrixXd c(2, 2);
  c << 1, 0, 0, 4;
  const Potential p = gaussian_potential(GaussianDist(vec({0, 0}), c));
  EXPECT_NEAR(p.alpha(), 0.25, 1e-12);
  EXPECT_NEAR(*p.smoothness(), 1.0, 1e-12);
}

TEST(GaussianPotential, RejectsIllConditioned) {
  MatrixXd c(2, 2);
  c << 1, 0, 0, 1e-13;
  EXPECT_THROW(gaussian_potential(GaussianDist(vec({0, 0}), c)), DomainError);
}

TEST(GaussianPotential, AlphaTimesVarianceIsOne) {
  for (double var : {0.01, 0.3, 1.0, 7.5, 1e3}) {
    const Potential p = gaussian_potential(GaussianDist::isotropic(VectorXd::Zero(3), var));
    EXPECT_NEAR(p.alpha() * var, 1.0, 1e-12);
  }
}

TEST(GaussianPotential, MatchesDenseFormula) {
  RngStream rng(17, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 1 + trial % 4;
    const MatrixXd cov = random_spd(d, rng);
    VectorXd m(d), x(d);
    for (int i = 0; i < d; ++i) {
      m(i) = rng.normal();
      x(i) = rng.normal();
    }
    const Potential p = gaussian_potential(GaussianDist(m, cov));
    const MatrixXd prec = cov.inverse();
    EXPECT_NEAR(p.value(x), 0.5 * (x - m).dot(prec * (x - m)), 1e-9);
    EXPECT_LT((p.gradient(x) - prec * (x - m)).norm(), 1e-9);
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<MatrixXd>(cov).eigenvalues();
    EXPECT_NEAR(p.alpha(), 1 / ev.maxCoeff(), 1e-10);
    EXPECT_NEAR(*p.smoothness(), 1 / ev.minCoeff(), 1e-8);
  }
}

TEST(ValidatePotential, ExactQuadraticPasses) {
  const Potential p = gaussian_potential(GaussianDist::standard(1));
  const auto r = validate_potential(p, {vec({-1}), vec({0}), vec({1})});
  EXPECT_LT(r.max_gradient_error, 1e-6);
  EXPECT_TRUE(r.ok());
}

TEST(ValidatePotential, RandomGaussianProbes) {
  RngStream rng(23, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const int d = 1 + trial % 3;
    const Potential p = gaussian_potential(GaussianDist(VectorXd::Zero(d), random_spd(d, rng)));
    std::vector<VectorXd> probes;
    for (int i = 0; i < 10; ++i) {
      VectorXd x(d);
      for (int j = 0; j < d; ++j) x(j) = 2 * rng.normal();
      probes.push_back(x);
    }
    EXPECT_LT(validate_potential(p, probes).max_gradient_error, 1e-6);
  }
}

TEST(ValidatePotential, WrongGradientFlagged) {
  const Potential p(
      1, [](const VectorXd& x) { return 0.5 * x.squaredNorm(); },
      [](const VectorXd& x) { return VectorXd(2 * x); }, 1.0, 1.0);
  const auto r = validate_potential(p, {vec({-1}), vec({0.5}), vec({1})});
  EXPECT_FALSE(r.ok());
  EXPECT_FALSE(r.gradient_flags.empty());
}

TEST(ValidatePotential, QuarticCurvatureBelowAlphaAtZero) {
  const Potential p(
      1, [](const VectorXd& x) { return std::pow(x(0), 4) / 4; },
      [](const VectorXd& x) { return VectorXd::Constant(1, std::pow(x(0), 3)); }, 1.0, std::nullopt);
  const auto r = validate_potential(p, {vec({0})});
  ASSERT_EQ(r.curvature_flags.size(), 1u);
  EXPECT_EQ(r.curvature_flags[0].probe, 0u);
  EXPECT_TRUE(r.curvature_flags[0].below_alpha);
  EXPECT_NEAR(r.curvature_flags[0].curvature, 0.0, 1e-6);
  EXPECT_TRUE(r.gradient_flags.empty());
}

TEST(BuiltinPotential, LogcoshIsValid) {
  const Potential p = builtin_potential("logcosh", 2, 1.0);
  EXPECT_DOUBLE_EQ(p.alpha(), 1.0);
  EXPECT_DOUBLE_EQ(*p.smoothness(), 2.0);
  std::vector<VectorXd> probes{vec({0, 0}), vec({1, -2}), vec({3, 0.5}), vec({-0.3, 4})};
  EXPECT_TRUE(validate_potential(p, probes).ok());
  EXPECT_THROW(builtin_potential("nope", 1, 1.0), DomainError);
}

TEST(Linalg, SymmetricFactorInverseAndSqrt) {
  RngStream rng(5, 0);
  const MatrixXd a = random_spd(4, rng);
  SymmetricFactor f(a);
  EXPECT_LT((f.inverse() * a - MatrixXd::Identity(4, 4)).norm(), 1e-10);
  EXPECT_LT((f.sqrt() * f.sqrt() - a).norm(), 1e-10);
  EXPECT_LT((f.inverse_sqrt() * a * f.inverse_sqrt() - MatrixXd::Identity(4, 4)).norm(), 1e-10);
  EXPECT_NEAR(f.log_det(), std::log(a.determinant()), 1e-10);
}

TEST(Linalg, OperatorNorm) {
  MatrixXd m(2, 2);
  m << 3, 0, 0, -4;
  EXPECT_NEAR(operator_norm(m), 4.0, 1e-14);
}
