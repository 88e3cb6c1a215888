#include <cmath>
#include <limits>
#include <numbers>

#include <gtest/gtest.h>

#include "midec/errors.hpp"
#include "midec/maybe_infinite.hpp"
#include "midec/phi_info.hpp"
#include "midec/quadrature.hpp"
#include "midec/random.hpp"
#include "oracles.hpp"

using namespace midec;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

const PhiGenerator kKL{PhiKind::KL};
const PhiGenerator kChi2{PhiKind::ChiSquared};
const PhiGenerator kHel{PhiKind::SquaredHellinger};
const PhiGenerator kTV{PhiKind::TV};
const PhiGenerator kRevKL{PhiKind::ReverseKL};
const PhiGenerator kRevChi2{PhiKind::ReverseChiSquared};
const PhiGenerator kAll[] = {kKL, kChi2, kHel, kTV, kRevKL, kRevChi2};
const PhiGenerator kSmooth[] = {kKL, kChi2, kHel, kRevKL, kRevChi2};

GaussianDist n1(double m, double v) {
  return GaussianDist(VectorXd::Constant(1, m), MatrixXd::Constant(1, 1, v));
}

// Hand-written generators used by the grid oracles.
double phi_ref(PhiKind k, double x) {
  switch (k) {
    case PhiKind::KL: return x > 0 ? x * std::log(x) : 0.0;
    case PhiKind::ChiSquared: return (x - 1) * (x - 1);
    case PhiKind::SquaredHellinger: return 0.5 * (std::sqrt(x) - 1) * (std::sqrt(x) - 1);
    case PhiKind::TV: return 0.5 * std::abs(x - 1);
    case PhiKind::ReverseKL: return -std::log(x);
    case PhiKind::ReverseChiSquared: return 1 / x - x;
  }
  return 0;
}

double grid_divergence(PhiKind k, double mp, double vp, double mq, double vq) {
  const double s = std::sqrt(std::max(vp, vq));
  const double lo = std::min(mp, mq) - 14 * s, hi = std::max(mp, mq) + 14 * s;
  return oracle::riemann(
      [&](double x) {
        const double q = oracle::npdf(x, mq, vq);
        if (q < 1e-300) return 0.0;
        return q * phi_ref(k, std::max(oracle::npdf(x, mp, vp), 1e-300) / q);
      },
      lo, hi, 200000);
}

JointGaussianState scalar_joint(double v0, double vk, double c) {
  JointGaussianState j;
  j.mean0 = VectorXd::Zero(1);
  j.meank = VectorXd::Zero(1);
  j.cov0 = MatrixXd::Constant(1, 1, v0);
  j.covk = MatrixXd::Constant(1, 1, vk);
  j.cross = MatrixXd::Constant(1, 1, c);
  return j;
}

MatrixXd random_matrix(int d, RngStream& rng) {
  MatrixXd a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = rng.normal();
  return a;
}

// Random valid joint: covariance of (X, B X + noise).
JointGaussianState random_joint(int d, RngStream& rng) {
  const MatrixXd a = random_matrix(d, rng);
  const MatrixXd cov0 = a * a.transpose() + 0.3 * MatrixXd::Identity(d, d);
  const MatrixXd b = 0.5 * random_matrix(d, rng);
  const MatrixXd n = random_matrix(d, rng);
  JointGaussianState j;
  j.mean0 = VectorXd::Zero(d);
  j.meank = VectorXd::Zero(d);
  j.cov0 = cov0;
  j.cross = cov0 * b.transpose();
  j.covk = b * cov0 * b.transpose() + n * n.transpose() + 0.2 * MatrixXd::Identity(d, d);
  j.covk = 0.5 * (j.covk + j.covk.transpose()).eval();
  return j;
}

}  // namespace

TEST(PhiGenerator, NamesRoundTrip) {
  for (const auto& name : PhiGenerator::names())
    EXPECT_EQ(PhiGenerator::from_name(name).name(), name);
  EXPECT_EQ(PhiGenerator::names().size(), 6u);
  EXPECT_THROW(PhiGenerator::from_name("js"), Error);
}

TEST(PhiEval, KLAtOne) {
  const auto r = phi_eval(kKL, 1.0);
  EXPECT_DOUBLE_EQ(r.value, 0);
  EXPECT_DOUBLE_EQ(r.d1, 1);
  EXPECT_DOUBLE_EQ(r.d2, 1);
}

TEST(PhiEval, ChiSquaredAtTwo) {
  const auto r = phi_eval(kChi2, 2.0);
  EXPECT_DOUBLE_EQ(r.value, 1);
  EXPECT_DOUBLE_EQ(r.d1, 2);
  EXPECT_DOUBLE_EQ(r.d2, 2);
}

TEST(PhiEval, HellingerAtFour) {
  // 1/2 (sqrt x - 1)^2, (1 - x^{-1/2})/2, x^{-3/2}/4 at x = 4
  const auto r = phi_eval(kHel, 4.0);
  EXPECT_NEAR(r.value, 0.5, 1e-15);
  EXPECT_NEAR(r.d1, 0.25, 1e-15);
  EXPECT_NEAR(r.d2, 0.03125, 1e-15);
}

TEST(PhiEval, DerivativesMatchFiniteDifferences) {
  for (auto g : kSmooth) {
    for (double x : {0.3, 0.9, 1.7, 5.0}) {
      const double h = 1e-5;
      const auto r = g.eval(x);
      EXPECT_NEAR(r.value, phi_ref(g.kind(), x), 1e-14) << g.name();
      EXPECT_NEAR(r.d1, (phi_ref(g.kind(), x + h) - phi_ref(g.kind(), x - h)) / (2 * h),
                  1e-8 * std::max(1.0, std::abs(r.d1)))
          << g.name();
      EXPECT_NEAR(r.d2,
                  (phi_ref(g.kind(), x + h) - 2 * phi_ref(g.kind(), x) + phi_ref(g.kind(), x - h)) /
                      (h * h),
                  1e-4 * std::max(1.0, std::abs(r.d2)))
          << g.name();
    }
  }
}

TEST(PhiEval, DomainErrors) {
  EXPECT_THROW(phi_eval(kKL, 0.0), DomainError);
  EXPECT_THROW(phi_eval(kRevKL, 0.0), DomainError);
  EXPECT_THROW(phi_eval(kRevChi2, 0.0), DomainError);
  EXPECT_THROW(phi_eval(kChi2, -1.0), DomainError);
  EXPECT_THROW(phi_eval(kTV, 2.0), CapabilityError);
  EXPECT_NO_THROW(phi_eval(kChi2, 0.0));
}

TEST(PhiGenerator, ZeroAtOneAndConvex) {
  RngStream rng(1, 0);
  for (auto g : kAll) {
    EXPECT_EQ(g.value(1.0), 0.0) << g.name();
    for (int i = 0; i < 200; ++i) {
      const double a = std::exp(3 * rng.normal()), b = std::exp(3 * rng.normal());
      const double lhs = g.value(0.5 * (a + b));
      const double rhs = 0.5 * (g.value(a) + g.value(b));
      EXPECT_LE(lhs, rhs + 1e-12 * std::max(1.0, std::abs(rhs))) << g.name();
    }
    if (g.smooth()) {
      for (double x : {1e-3, 0.5, 1.0, 2.0, 1e3}) EXPECT_GT(g.eval(x).d2, 0) << g.name();
    }
  }
  EXPECT_FALSE(kTV.smooth());
}

TEST(PhiDivergenceGaussian, Examples) {
  EXPECT_NEAR(phi_divergence_gaussian(kKL, n1(0, 1), n1(0, 1)), 0.0, 1e-15);
  EXPECT_NEAR(phi_divergence_gaussian(kKL, n1(1, 1), n1(0, 1)), 0.5, 1e-12);
  EXPECT_NEAR(phi_divergence_gaussian(kChi2, n1(1, 1), n1(0, 1)), std::numbers::e - 1, 1e-12);
  // independent grid oracles for the same two values
  EXPECT_NEAR(grid_divergence(PhiKind::KL, 1, 1, 0, 1), 0.5, 1e-9);
  EXPECT_NEAR(grid_divergence(PhiKind::ChiSquared, 1, 1, 0, 1), std::numbers::e - 1, 1e-9);
}

TEST(PhiDivergenceGaussian, ChiSquaredDivergesWhenVarianceTooLarge) {
  EXPECT_TRUE(std::isinf(phi_divergence_gaussian(kChi2, n1(0, 2.5), n1(0, 1))));
  EXPECT_TRUE(std::isinf(phi_divergence_gaussian(kRevChi2, n1(0, 1), n1(0, 2.5))));
  EXPECT_TRUE(std::isfinite(phi_divergence_gaussian(kChi2, n1(0, 1.9), n1(0, 1))));
}

TEST(PhiDivergenceGaussian, ClosedFormsMatchGridOracleIn1d) {
  RngStream rng(2, 0);
  for (int trial = 0; trial < 12; ++trial) {
    const double mp = rng.normal(), mq = rng.normal();
    const double vp = 0.8 + 0.4 * rng.uniform(), vq = 0.8 + 0.4 * rng.uniform();
    for (auto g : kAll) {
      const double closed = phi_divergence_gaussian(g, n1(mp, vp), n1(mq, vq));
      const double grid = grid_divergence(g.kind(), mp, vp, mq, vq);
      if (std::isinf(grid) || grid > 1e6) {
        EXPECT_TRUE(std::isinf(closed) || closed > 1e6) << g.name();
        continue;
      }
      EXPECT_NEAR(closed, grid, 1e-7 * std::max(1.0, grid)) << g.name() << " trial " << trial;
    }
  }
}

TEST(PhiDivergenceGaussian, NonnegativeAndZeroOnIdentity) {
  RngStream rng(3, 0);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 1 + trial % 3;
    const MatrixXd a = random_matrix(d, rng);
    VectorXd m(d);
    for (int i = 0; i < d; ++i) m(i) = rng.normal();
    const GaussianDist mu(m, a * a.transpose() + 0.1 * MatrixXd::Identity(d, d));
    const MatrixXd b = random_matrix(d, rng);
    const GaussianDist nu(VectorXd::Zero(d), b * b.transpose() + 0.1 * MatrixXd::Identity(d, d));
    for (auto g : kAll) {
      if (g.kind() == PhiKind::TV && d > 1) continue;
      EXPECT_NEAR(phi_divergence_gaussian(g, mu, mu), 0.0, 1e-10) << g.name();
      EXPECT_GE(phi_divergence_gaussian(g, mu, nu), -1e-10) << g.name();
    }
  }
}

TEST(PhiDivergenceGaussian, TVNeedsOneDimension) {
  EXPECT_THROW(phi_divergence_gaussian(kTV, GaussianDist::standard(2), GaussianDist::standard(2)),
               CapabilityError);
  // TV(N(0,1), N(1,1)) = 2 Phi(1/2) - 1
  const double tv = std::erf(0.5 / std::sqrt(2.0));
  EXPECT_NEAR(phi_divergence_gaussian(kTV, n1(0, 1), n1(1, 1)), tv, 1e-9);
}

TEST(PhiDivergenceQuadrature, Examples) {
  auto std_normal = [](double x) { return normal_pdf(x, 0, 1); };
  EXPECT_NEAR(phi_divergence_quadrature_1d(kKL, std_normal, std_normal, -10, 10).value, 0.0, 1e-9);
  auto shifted = [](double x) { return normal_pdf(x, 1, 1); };
  EXPECT_NEAR(phi_divergence_quadrature_1d(kKL, shifted, std_normal, -12, 12).value, 0.5, 1e-8);
  auto wide = [](double x) { return normal_pdf(x, 0, 4); };
  const double expected = 4 / std::sqrt(7.0) - 1;
  EXPECT_NEAR(grid_divergence(PhiKind::ChiSquared, 0, 1, 0, 4), expected, 1e-9);
  EXPECT_NEAR(phi_divergence_quadrature_1d(kChi2, std_normal, wide, -25, 25).value, expected, 1e-8);
}

TEST(PhiDivergenceQuadrature, RejectsUnnormalizedDensities) {
  auto half = [](double x) { return 0.5 * normal_pdf(x, 0, 1); };
  auto std_normal = [](double x) { return normal_pdf(x, 0, 1); };
  EXPECT_THROW(phi_divergence_quadrature_1d(kKL, half, std_normal, -10, 10), InputError);
  EXPECT_THROW(phi_divergence_quadrature_1d(kKL, std_normal, std_normal, -1, 1), InputError);
}

TEST(PhiFisherInfo, Examples) {
  auto q = [](double x) { return normal_pdf(x, 0, 1); };
  EXPECT_NEAR(phi_fisher_info_quadrature_1d(kKL, q, q, -10, 10).value, 0.0, 1e-12);
  auto p = [](double x) { return normal_pdf(x, 0.1, 1); };
  EXPECT_NEAR(phi_fisher_info_quadrature_1d(kKL, p, q, -12, 12).value, 0.01, 1e-6);

  // chi2 Fisher information of N(m,1) against N(0,1): E_q[(m r)^2 * 2] with r = p/q,
  // which is 2 m^2 e^{m^2}; compare with a grid sum of the same integrand.
  const double m = 0.1;
  const double grid = oracle::riemann(
      [&](double x) {
        const double r = std::exp(m * x - m * m / 2);
        return oracle::npdf(x, 0, 1) * (m * r) * (m * r) * 2;
      },
      -14, 14, 100000);
  EXPECT_NEAR(grid, 2 * m * m * std::exp(m * m), 1e-10);
  const double fi = phi_fisher_info_quadrature_1d(kChi2, p, q, -12, 12).value;
  EXPECT_NEAR(fi, grid, 1e-6);
  EXPECT_GE(fi, 2 * phi_divergence_gaussian(kChi2, n1(0.1, 1), n1(0, 1)));
}

TEST(PhiFisherInfo, SobolevInequalityOnPerturbedGaussians) {
  // N(0, 1) satisfies every Phi-Sobolev inequality with constant 1.
  RngStream rng(4, 0);
  auto q = [](double x) { return normal_pdf(x, 0, 1); };
  for (int trial = 0; trial < 50; ++trial) {
    const double m = 0.8 * rng.normal();
    const double v = 0.6 + 0.8 * rng.uniform();
    auto p = [&](double x) { return normal_pdf(x, m, v); };
    for (auto g : {kKL, kChi2}) {
      const double d = phi_divergence_quadrature_1d(g, p, q, -14, 14).value;
      const auto fi = phi_fisher_info_quadrature_1d(g, p, q, -14, 14);
      ASSERT_FALSE(fi.diverged);
      EXPECT_LE(2 * d, fi.value + 1e-6) << g.name() << " m=" << m << " v=" << v;
    }
  }
}

TEST(PhiFisherInfo, ReportsDivergence) {
  // reverse chi2 with a much lighter p: Phi'' = 2/r^3 blows up in the tails
  auto p = [](double x) { return normal_pdf(x, 0, 0.05); };
  auto q = [](double x) { return normal_pdf(x, 0, 1); };
  const auto r = phi_fisher_info_quadrature_1d(kRevChi2, p, q, -10, 10);
  EXPECT_TRUE(r.diverged);
  EXPECT_TRUE(std::isinf(r.value));
}

TEST(SobolevAlgebra, Examples) {
  EXPECT_DOUBLE_EQ(sobolev_constant_slc(1).value(), 1);
  EXPECT_DOUBLE_EQ(sobolev_constant_slc(4).value(), 4);
  EXPECT_THROW(sobolev_constant_slc(0), DomainError);
  EXPECT_THROW(SobolevConstant(-1), DomainError);
  EXPECT_DOUBLE_EQ(sobolev_pushforward(SobolevConstant(1), 1).value(), 1);
  EXPECT_NEAR(sobolev_pushforward(SobolevConstant(2), 0.9).value(), 2 / 0.81, 1e-12);
  EXPECT_NEAR(sobolev_pushforward(SobolevConstant(1), 2).value(), 0.25, 1e-15);
  EXPECT_DOUBLE_EQ(sobolev_convolution(SobolevConstant(2), SobolevConstant(2)).value(), 1);
  EXPECT_NEAR(sobolev_convolution(SobolevConstant(1), SobolevConstant(1 / (2 * 0.1))).value(),
              1 / 1.2, 1e-12);
}

TEST(SobolevAlgebra, ConvolutionSymmetricAndAssociative) {
  RngStream rng(6, 0);
  for (int i = 0; i < 100; ++i) {
    const SobolevConstant a(std::exp(rng.normal())), b(std::exp(rng.normal())),
        c(std::exp(rng.normal()));
    EXPECT_NEAR(sobolev_convolution(a, b).value(), sobolev_convolution(b, a).value(), 1e-12);
    EXPECT_NEAR(sobolev_convolution(sobolev_convolution(a, b), c).value(),
                sobolev_convolution(a, sobolev_convolution(b, c)).value(), 1e-12);
  }
}

TEST(PhiMutualInfo, Independence) {
  for (auto g : kSmooth)
    EXPECT_EQ(phi_mutual_info_gaussian(scalar_joint(1, 2, 0), g).as_double(), 0.0) << g.name();
}

TEST(PhiMutualInfo, ScalarKL) {
  const double expected = -0.5 * std::log(0.75);
  EXPECT_NEAR(oracle::scalar_gaussian_mi(1, 1, 0.5), expected, 1e-15);
  EXPECT_NEAR(phi_mutual_info_gaussian(scalar_joint(1, 1, 0.5), kKL).value(), expected, 1e-12);
  EXPECT_NEAR(expected, 0.143841036225890, 1e-12);
}

TEST(PhiMutualInfo, ChiSquaredExceedsKL) {
  const auto j = scalar_joint(1, 1, 0.5);
  const double grid = oracle::phi_mi_grid_2d([](double r) { return (r - 1) * (r - 1); }, 1, 1, 0.5);
  EXPECT_NEAR(grid, 1 / 0.75 - 1, 1e-9);
  const double chi2 = phi_mutual_info_gaussian(j, kChi2).value();
  EXPECT_NEAR(chi2, grid, 1e-9);
  EXPECT_GT(chi2, phi_mutual_info_gaussian(j, kKL).value());
}

TEST(PhiMutualInfo, AllSmoothKindsMatchGridOracle) {
  RngStream rng(7, 0);
  for (int trial = 0; trial < 4; ++trial) {
    const double v0 = 0.5 + rng.uniform(), vk = 0.5 + rng.uniform();
    const double rho = 0.35 * (2 * rng.uniform() - 1);
    const double c = rho * std::sqrt(v0 * vk);
    const auto j = scalar_joint(v0, vk, c);
    for (auto g : kSmooth) {
      const PhiKind k = g.kind();
      const double grid =
          oracle::phi_mi_grid_2d([k](double r) { return phi_ref(k, r); }, v0, vk, c);
      const double closed = phi_mutual_info_gaussian(j, g).value();
      EXPECT_NEAR(closed, grid, 1e-7 * std::max(1.0, grid)) << g.name() << " rho=" << rho;
    }
  }
}

TEST(PhiMutualInfo, KLInvariantUnderBlockReparametrization) {
  RngStream rng(8, 0);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 2 + trial % 2;
    const auto j = random_joint(d, rng);
    const MatrixXd a = random_matrix(d, rng) + 2 * MatrixXd::Identity(d, d);
    const MatrixXd b = random_matrix(d, rng) + 2 * MatrixXd::Identity(d, d);
    JointGaussianState t = j;
    t.cov0 = a * j.cov0 * a.transpose();
    t.covk = b * j.covk * b.transpose();
    t.cross = a * j.cross * b.transpose();
    t.cov0 = 0.5 * (t.cov0 + t.cov0.transpose()).eval();
    t.covk = 0.5 * (t.covk + t.covk.transpose()).eval();
    const double x = phi_mutual_info_gaussian(j, kKL).value();
    const double y = phi_mutual_info_gaussian(t, kKL).value();
    EXPECT_NEAR(x, y, 1e-9 * std::max(1.0, x));
  }
}

TEST(PhiMutualInfo, KLEqualsLogDetFormula) {
  RngStream rng(9, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 1 + trial % 3;
    const auto j = random_joint(d, rng);
    const double direct = 0.5 * (std::log(j.cov0.determinant()) + std::log(j.covk.determinant()) -
                                 std::log(j.block_covariance().determinant()));
    EXPECT_NEAR(phi_mutual_info_gaussian(j, kKL).value(), direct, 1e-9 * std::max(1.0, direct));
    for (auto g : kSmooth) {
      const auto v = phi_mutual_info_gaussian(j, g);
      EXPECT_GE(v.as_double(), -1e-10) << g.name();
      const auto s = phi_mutual_info_gaussian(j.swapped(), g);
      if (v.is_finite() && s.is_finite()) {
        EXPECT_NEAR(v.value(), s.value(), 1e-9 * std::max(1.0, v.value())) << g.name();
      }
    }
  }
}

TEST(PhiMutualInfo, DeterministicLinkIsInfinite) {
  const auto j = scalar_joint(1, 1, 1);
  EXPECT_TRUE(phi_mutual_info_gaussian(j, kKL).is_infinite());
  EXPECT_TRUE(phi_mutual_info_gaussian(j, kChi2).is_infinite());
  EXPECT_DOUBLE_EQ(phi_mutual_info_gaussian(j, kHel).value(), 1.0);
  EXPECT_THROW(phi_mutual_info_gaussian(j, kTV), CapabilityError);
}

TEST(PhiMutualInfo, InvalidJointRejected) {
  EXPECT_THROW(phi_mutual_info_gaussian(scalar_joint(1, 1, 2), kKL), DomainError);
}

TEST(CanonicalCorrelations, ScalarIsAbsoluteCorrelation) {
  EXPECT_NEAR(canonical_correlations(scalar_joint(4, 9, -3))(0), 0.5, 1e-14);
}

TEST(Quadrature, AdaptiveSimpson) {
  const auto r = adaptive_simpson([](double x) { return std::sin(x); }, 0, std::numbers::pi, 1e-12);
  EXPECT_NEAR(r.value, 2.0, 1e-11);
  EXPECT_FALSE(r.diverged);
  const auto big = adaptive_simpson([](double) { return 1e14; }, 0, 1, 1e-9);
  EXPECT_TRUE(big.diverged);
}

TEST(Quadrature, GaussHermiteMoments) {
  const auto rule = gauss_hermite_normal(12);
  ASSERT_EQ(rule.nodes.size(), 12u);
  double m0 = 0, m2 = 0, m4 = 0, m6 = 0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double x = rule.nodes[i], w = rule.weights[i];
    m0 += w;
    m2 += w * x * x;
    m4 += w * std::pow(x, 4);
    m6 += w * std::pow(x, 6);
  }
  EXPECT_NEAR(m0, 1, 1e-13);
  EXPECT_NEAR(m2, 1, 1e-12);
  EXPECT_NEAR(m4, 3, 1e-11);
  EXPECT_NEAR(m6, 15, 1e-10);
}

TEST(MaybeInfinite, Representation) {
  EXPECT_EQ(MaybeInfinite::pos_inf().to_string(), "inf");
  EXPECT_EQ(MaybeInfinite::neg_inf().to_string(), "-inf");
  EXPECT_THROW(MaybeInfinite::finite(std::nan("")), std::domain_error);
  EXPECT_TRUE(MaybeInfinite::finite(std::numeric_limits<double>::infinity()).is_infinite());
  EXPECT_THROW(MaybeInfinite::pos_inf().value(), std::logic_error);
  const double x = 0.1 + 0.2;
  EXPECT_EQ(std::stod(format_real(x)), x);
  EXPECT_EQ(format_real(std::numeric_limits<double>::infinity()), "inf");
}
