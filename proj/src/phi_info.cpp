#include "midec/phi_info.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Cholesky>

#include "midec/errors.hpp"
#include "midec/linalg.hpp"

namespace midec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTiny = 1e-300;
// Canonical correlations this close to 1 mean an (almost) deterministic link.
constexpr double kDegenerateCorrelation = 1.0 - 1e-10;

struct NamedKind {
  const char* name;
  PhiKind kind;
};

constexpr NamedKind kKinds[] = {
    {"kl", PhiKind::KL},          {"chi2", PhiKind::ChiSquared},
    {"hellinger2", PhiKind::SquaredHellinger}, {"tv", PhiKind::TV},
    {"reverse-kl", PhiKind::ReverseKL}, {"reverse-chi2", PhiKind::ReverseChiSquared},
};

// Cholesky with a readable failure.
Eigen::LLT<Eigen::MatrixXd> chol(const Eigen::MatrixXd& m, const char* what) {
  Eigen::LLT<Eigen::MatrixXd> llt(0.5 * (m + m.transpose()));
  if (llt.info() != Eigen::Success) throw DomainError(std::string(what) + ": covariance is singular");
  return llt;
}

double log_det(const Eigen::LLT<Eigen::MatrixXd>& llt) {
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

double kl_gaussian(const GaussianDist& mu, const GaussianDist& nu) {
  const auto lmu = chol(mu.covariance(), "KL");
  const auto lnu = chol(nu.covariance(), "KL");
  const Eigen::VectorXd delta = nu.mean() - mu.mean();
  const double d = static_cast<double>(mu.dim());
  const double tr = lnu.solve(mu.covariance()).trace();
  const double quad = delta.dot(lnu.solve(delta));
  return std::max(0.0, 0.5 * (tr + quad - d + log_det(lnu) - log_det(lmu)));
}

// chi^2(mu || nu) = int mu^2/nu - 1.
double chi2_gaussian(const GaussianDist& mu, const GaussianDist& nu) {
  const auto l1 = chol(mu.covariance(), "chi2");
  const auto l2 = chol(nu.covariance(), "chi2");
  const Eigen::Index d = mu.dim();
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(d, d);
  const Eigen::MatrixXd p1 = l1.solve(I);
  const Eigen::MatrixXd p2 = l2.solve(I);
  const Eigen::MatrixXd A = 2.0 * p1 - p2;
  Eigen::LLT<Eigen::MatrixXd> la(0.5 * (A + A.transpose()));
  if (la.info() != Eigen::Success) return kInf;
  if (la.matrixLLT().diagonal().minCoeff() <= 0) return kInf;
  const Eigen::VectorXd m1 = mu.mean() - nu.mean();
  const Eigen::VectorXd b = 2.0 * (p1 * m1);
  const double log_ratio = 0.5 * log_det(l2) - log_det(l1) - 0.5 * log_det(la) +
                           0.5 * b.dot(la.solve(b)) - m1.dot(p1 * m1);
  if (log_ratio > 700) return kInf;
  return std::max(0.0, std::expm1(log_ratio));
}

// 1 - Bhattacharyya coefficient.
double hellinger2_gaussian(const GaussianDist& mu, const GaussianDist& nu) {
  const auto l1 = chol(mu.covariance(), "hellinger2");
  const auto l2 = chol(nu.covariance(), "hellinger2");
  const Eigen::MatrixXd s = 0.5 * (mu.covariance() + nu.covariance());
  const auto ls = chol(s, "hellinger2");
  const Eigen::VectorXd delta = mu.mean() - nu.mean();
  const double db = 0.125 * delta.dot(ls.solve(delta)) +
                    0.5 * (log_det(ls) - 0.5 * log_det(l1) - 0.5 * log_det(l2));
  return std::clamp(-std::expm1(-db), 0.0, 1.0);
}

double tv_gaussian_1d(const GaussianDist& mu, const GaussianDist& nu) {
  if (mu.dim() != 1) throw CapabilityError("tv divergence between Gaussians is only available for d = 1");
  const double m1 = mu.mean()(0), v1 = mu.covariance()(0, 0);
  const double m2 = nu.mean()(0), v2 = nu.covariance()(0, 0);
  if (!(v1 > 0 && v2 > 0)) throw DomainError("tv: covariance is singular");
  const double s = std::sqrt(std::max(v1, v2));
  const double a = std::min(m1, m2) - 40 * s;
  const double b = std::max(m1, m2) + 40 * s;
  auto f = [&](double x) { return 0.5 * std::abs(normal_pdf(x, m1, v1) - normal_pdf(x, m2, v2)); };
  return std::clamp(adaptive_simpson(f, a, b, 1e-12, 256).value, 0.0, 1.0);
}

}  // namespace

PhiGenerator PhiGenerator::from_name(const std::string& name) {
  for (const auto& k : kKinds)
    if (name == k.name) return PhiGenerator(k.kind);
  throw DomainError("unknown divergence generator '" + name + "'");
}

std::vector<std::string> PhiGenerator::names() {
  std::vector<std::string> out;
  for (const auto& k : kKinds) out.emplace_back(k.name);
  return out;
}

std::string PhiGenerator::name() const {
  for (const auto& k : kKinds)
    if (k.kind == kind_) return k.name;
  return "?";
}

double PhiGenerator::value(double x) const {
  if (!(x >= 0)) throw DomainError("Phi: argument must be >= 0");
  switch (kind_) {
    case PhiKind::KL:
      return x == 0 ? 0.0 : x * std::log(x);
    case PhiKind::ChiSquared:
      return (x - 1) * (x - 1);
    case PhiKind::SquaredHellinger: {
      const double r = std::sqrt(x) - 1;
      return 0.5 * r * r;
    }
    case PhiKind::TV:
      return 0.5 * std::abs(x - 1);
    case PhiKind::ReverseKL:
      return x == 0 ? kInf : -std::log(x);
    case PhiKind::ReverseChiSquared:
      return x == 0 ? kInf : 1.0 / x - x;
  }
  return 0.0;
}

double PhiGenerator::d1(double x) const {
  if (!(x >= 0)) throw DomainError("Phi': argument must be >= 0");
  switch (kind_) {
    case PhiKind::KL:
      return std::log(x) + 1;
    case PhiKind::ChiSquared:
      return 2 * (x - 1);
    case PhiKind::SquaredHellinger:
      return 0.5 * (1 - 1 / std::sqrt(x));
    case PhiKind::TV:
      return x > 1 ? 0.5 : (x < 1 ? -0.5 : 0.0);
    case PhiKind::ReverseKL:
      return -1 / x;
    case PhiKind::ReverseChiSquared:
      return -1 / (x * x) - 1;
  }
  return 0.0;
}

PhiDerivatives PhiGenerator::eval(double x) const {
  if (kind_ == PhiKind::TV) throw CapabilityError("Phi derivatives: tv is not differentiable");
  if (!(x >= 0)) throw DomainError("Phi derivatives: argument must be >= 0");
  if (x == 0 && kind_ != PhiKind::ChiSquared)
    throw DomainError("Phi derivatives: singular at 0 for " + name());
  double d2 = 0.0;
  switch (kind_) {
    case PhiKind::KL:
      d2 = 1 / x;
      break;
    case PhiKind::ChiSquared:
      d2 = 2;
      break;
    case PhiKind::SquaredHellinger:
      d2 = 0.25 / (x * std::sqrt(x));
      break;
    case PhiKind::ReverseKL:
      d2 = 1 / (x * x);
      break;
    case PhiKind::ReverseChiSquared:
      d2 = 2 / (x * x * x);
      break;
    case PhiKind::TV:
      break;
  }
  return {value(x), d1(x), d2};
}

SobolevConstant::SobolevConstant(double value) : value_(value) {
  if (!(value > 0) || !std::isfinite(value))
    throw DomainError("Sobolev constant must be finite and > 0");
}

double normal_pdf(double x, double mean, double variance) {
  const double z = x - mean;
  return std::exp(-0.5 * z * z / variance) / std::sqrt(2 * std::numbers::pi * variance);
}

double phi_divergence_gaussian(PhiGenerator gen, const GaussianDist& mu, const GaussianDist& nu) {
  if (mu.dim() != nu.dim()) throw DomainError("phi divergence: dimension mismatch");
  switch (gen.kind()) {
    case PhiKind::KL:
      return kl_gaussian(mu, nu);
    case PhiKind::ChiSquared:
      return chi2_gaussian(mu, nu);
    case PhiKind::SquaredHellinger:
      return hellinger2_gaussian(mu, nu);
    case PhiKind::ReverseKL:
      return kl_gaussian(nu, mu);
    case PhiKind::ReverseChiSquared:
      // E_nu[nu/mu - mu/nu] = chi2(nu || mu)
      return chi2_gaussian(nu, mu);
    case PhiKind::TV:
      return tv_gaussian_1d(mu, nu);
  }
  return 0.0;
}

QuadratureResult phi_divergence_quadrature_1d(PhiGenerator gen, const Density1d& p,
                                              const Density1d& q, double a, double b,
                                              double tol) {
  const double norm_tol = std::max(tol, 1e-8);
  const double zp = adaptive_simpson(p, a, b, 0.1 * norm_tol).value;
  const double zq = adaptive_simpson(q, a, b, 0.1 * norm_tol).value;
  if (std::abs(zp - 1) > norm_tol || std::abs(zq - 1) > norm_tol)
    throw InputError("phi divergence quadrature: densities do not integrate to 1 on the interval");
  auto integrand = [&](double x) {
    const double qv = q(x);
    if (qv < kTiny) return 0.0;
    const double pv = std::max(p(x), kTiny);
    return qv * gen.value(pv / qv);
  };
  return adaptive_simpson(integrand, a, b, tol);
}

QuadratureResult phi_fisher_info_quadrature_1d(PhiGenerator gen, const Density1d& p,
                                               const Density1d& q, double a, double b,
                                               double tol) {
  auto ratio = [&](double x) { return std::max(p(x), kTiny) / std::max(q(x), kTiny); };
  auto integrand = [&](double x) {
    const double qv = q(x);
    if (qv < kTiny) return 0.0;
    const double h = 1e-5 * (1 + std::abs(x));
    const double dr = (ratio(x + h) - ratio(x - h)) / (2 * h);
    const double r = std::max(p(x), kTiny) / qv;
    return qv * dr * dr * gen.eval(r).d2;
  };
  return adaptive_simpson(integrand, a, b, tol, 64, 1e12);
}

SobolevConstant sobolev_constant_slc(double alpha) { return SobolevConstant(alpha); }

SobolevConstant sobolev_pushforward(SobolevConstant c, double lip) {
  if (!(lip > 0)) throw DomainError("sobolev_pushforward: Lipschitz constant must be > 0");
  return SobolevConstant(c.value() / (lip * lip));
}

SobolevConstant sobolev_convolution(SobolevConstant c1, SobolevConstant c2) {
  return SobolevConstant(1.0 / (1.0 / c1.value() + 1.0 / c2.value()));
}

Eigen::VectorXd canonical_correlations(const JointGaussianState& joint) {
  joint.validate();
  const Eigen::MatrixXd w0 = SymmetricFactor(joint.cov0).inverse_sqrt();
  const Eigen::MatrixXd wk = SymmetricFactor(joint.covk).inverse_sqrt();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(w0 * joint.cross * wk);
  return svd.singularValues();
}

MaybeInfinite phi_mutual_info_gaussian(const JointGaussianState& joint, PhiGenerator gen) {
  joint.validate();
  if (gen.kind() == PhiKind::TV)
    throw CapabilityError("Phi-mutual information of Gaussian joints is not available for tv");
  if (joint.cross.isZero(0.0)) return MaybeInfinite::finite(0.0);

  const Eigen::VectorXd s = canonical_correlations(joint);
  if (s.size() && s.maxCoeff() >= kDegenerateCorrelation) {
    // The joint is singular w.r.t. the product: only the squared Hellinger
    // distance stays bounded.
    if (gen.kind() == PhiKind::SquaredHellinger) return MaybeInfinite::finite(1.0);
    return MaybeInfinite::pos_inf();
  }
  if (gen.kind() == PhiKind::KL) {
    double mi = 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i) mi -= 0.5 * std::log1p(-s(i) * s(i));
    return MaybeInfinite::finite(std::max(mi, 0.0));
  }

  const Eigen::Index d = joint.dim();
  Eigen::VectorXd mean(2 * d);
  mean << joint.mean0, joint.meank;
  Eigen::MatrixXd prod = Eigen::MatrixXd::Zero(2 * d, 2 * d);
  prod.topLeftCorner(d, d) = joint.cov0;
  prod.bottomRightCorner(d, d) = joint.covk;
  return MaybeInfinite::finite(
      phi_divergence_gaussian(gen, GaussianDist(mean, joint.block_covariance()), GaussianDist(mean, prod)));
}

}  // namespace midec
