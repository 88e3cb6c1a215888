#include "midec/gaussian_oracle.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "midec/errors.hpp"
#include "midec/linalg.hpp"

namespace midec {

namespace {

constexpr double kTwoPiE = 2.0 * std::numbers::pi * std::numbers::e;

void require(bool ok, const char* msg) {
  if (!ok) throw DomainError(msg);
}

JointGaussianState isotropic_joint(const GaussianDist& init, double mean_factor, double covk,
                                   double cross) {
  const Eigen::Index d = init.dim();
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(d, d);
  return JointGaussianState{init.mean(), mean_factor * init.mean(), init.covariance(), covk * I,
                            cross * I};
}

}  // namespace

JointGaussianState ou_joint(double alpha, const GaussianDist& init, double t) {
  require(alpha > 0, "ou_joint: alpha must be > 0");
  require(t >= 0, "ou_joint: t must be >= 0");
  const double c2 = init.isotropic_variance();
  const double e = std::exp(-alpha * t);
  const double tau = -std::expm1(-2 * alpha * t) / alpha;
  return isotropic_joint(init, e, e * e * c2 + tau, e * c2);
}

MaybeInfinite ou_mi_exact(double alpha, double t, int d) {
  require(alpha > 0, "ou_mi_exact: alpha must be > 0");
  require(t >= 0, "ou_mi_exact: t must be >= 0");
  require(d >= 1, "ou_mi_exact: d must be >= 1");
  if (t == 0) return MaybeInfinite::pos_inf();
  return MaybeInfinite::finite(0.5 * d * std::log1p(alpha / std::expm1(2 * alpha * t)));
}

MiBounds ou_mi_bounds(double alpha, double t, int d, double J, double H0) {
  require(alpha > 0 && t > 0 && d >= 1, "ou_mi_bounds: need alpha > 0, t > 0, d >= 1");
  require(J >= 0, "ou_mi_bounds: J must be >= 0");
  require(std::isfinite(H0), "ou_mi_bounds: H0 must be finite");
  const double denom = std::expm1(2 * alpha * t);
  const double power = std::exp(2 * H0 / d) / kTwoPiE;
  return {0.5 * d * std::log1p(alpha * power / denom), 0.5 * d * std::log1p(alpha * J / denom)};
}

MiBounds heat_flow_mi_bounds(double t, const Eigen::VectorXd& cov0_eigenvalues, double H0) {
  require(t > 0, "heat_flow_mi_bounds: t must be > 0");
  const Eigen::Index d = cov0_eigenvalues.size();
  require(d >= 1, "heat_flow_mi_bounds: empty spectrum");
  require(std::isfinite(H0), "heat_flow_mi_bounds: H0 must be finite");
  double upper = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    require(cov0_eigenvalues(i) >= 0, "heat_flow_mi_bounds: negative eigenvalue");
    upper += 0.5 * std::log1p(cov0_eigenvalues(i) / (2 * t));
  }
  const double power = std::exp(2 * H0 / static_cast<double>(d));
  const double lower = 0.5 * d * std::log1p(power / (2 * kTwoPiE * t));
  return {lower, upper};
}

JointGaussianState ula_gaussian_joint(double alpha, double eta, std::int64_t k,
                                      const GaussianDist& init) {
  require(alpha > 0 && eta > 0 && eta * alpha < 2, "ula_gaussian_joint: need 0 < eta < 2/alpha");
  require(k >= 0, "ula_gaussian_joint: k must be >= 0");
  const double c2 = init.isotropic_variance();
  const double gamma = 1 - eta * alpha;
  const double gk = std::pow(gamma, static_cast<double>(k));
  const double g2k = gk * gk;
  const double noise = 2 * (1 - g2k) / (alpha * (2 - eta * alpha));
  return isotropic_joint(init, gk, g2k * c2 + noise, gk * c2);
}

MaybeInfinite ula_gaussian_mi_exact(double alpha, double eta, std::int64_t k, int d) {
  require(alpha > 0 && eta > 0 && eta * alpha < 2, "ula_gaussian_mi_exact: need 0 < eta < 2/alpha");
  require(k >= 0 && d >= 1, "ula_gaussian_mi_exact: need k >= 0, d >= 1");
  if (k == 0) return MaybeInfinite::pos_inf();
  const double log_g2k = 2.0 * static_cast<double>(k) * std::log(std::abs(1 - eta * alpha));
  if (log_g2k == -std::numeric_limits<double>::infinity()) return MaybeInfinite::finite(0.0);
  const double g2k = std::exp(log_g2k);
  const double one_minus = -std::expm1(log_g2k);
  return MaybeInfinite::finite(
      0.5 * d * std::log1p(g2k * (2 * alpha - eta * alpha * alpha) / (2 * one_minus)));
}

JointGaussianState proximal_gaussian_joint(double alpha, double eta, std::int64_t k,
                                           const GaussianDist& init) {
  require(alpha > 0 && eta > 0, "proximal_gaussian_joint: need alpha, eta > 0");
  require(k >= 0, "proximal_gaussian_joint: k must be >= 0");
  const double c2 = init.isotropic_variance();
  const double rk = std::exp(-static_cast<double>(k) * std::log1p(alpha * eta));
  const double covk = 1 / alpha + (c2 - 1 / alpha) * rk * rk;
  return isotropic_joint(init, rk, covk, c2 * rk);
}

MaybeInfinite proximal_gaussian_mi_exact(double alpha, double eta, std::int64_t k, int d) {
  require(alpha > 0 && eta > 0, "proximal_gaussian_mi_exact: need alpha, eta > 0");
  require(k >= 0 && d >= 1, "proximal_gaussian_mi_exact: need k >= 0, d >= 1");
  if (k == 0) return MaybeInfinite::pos_inf();
  const double denom = std::expm1(2.0 * static_cast<double>(k) * std::log1p(alpha * eta));
  return MaybeInfinite::finite(0.5 * d * std::log1p(alpha / denom));
}

MaybeInfinite gaussian_entropy(const Eigen::MatrixXd& cov) {
  require(cov.rows() == cov.cols() && cov.rows() > 0, "gaussian_entropy: covariance must be square");
  SymmetricFactor f(cov);
  const double lo = f.lambda_min();
  const double hi = f.lambda_max();
  require(lo >= -1e-10 * std::max(hi, 0.0), "gaussian_entropy: covariance is not PSD");
  if (lo <= 0) return MaybeInfinite::neg_inf();
  const double d = static_cast<double>(cov.rows());
  return MaybeInfinite::finite(0.5 * d * std::log(kTwoPiE) + 0.5 * f.eigenvalues().array().log().sum());
}

double entropy_power(double entropy, int d) {
  require(d >= 1, "entropy_power: d must be >= 1");
  return std::exp(2 * entropy / d) / kTwoPiE;
}

}  // namespace midec
