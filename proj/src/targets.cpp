#include "midec/targets.hpp"

#include <cmath>

#include "midec/errors.hpp"
#include "midec/linalg.hpp"

namespace midec {

GaussianDist::GaussianDist(Eigen::VectorXd mean, Eigen::MatrixXd covariance)
    : mean_(std::move(mean)), cov_(std::move(covariance)) {
  const Eigen::Index d = mean_.size();
  if (d == 0) throw DomainError("GaussianDist: dimension must be positive");
  if (cov_.rows() != d || cov_.cols() != d)
    throw DomainError("GaussianDist: covariance shape does not match mean");
  if (!mean_.allFinite() || !cov_.allFinite())
    throw DomainError("GaussianDist: non-finite mean or covariance");
  const double scale = std::max(1.0, cov_.cwiseAbs().maxCoeff());
  if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw DomainError("GaussianDist: covariance is not symmetric");
  cov_ = 0.5 * (cov_ + cov_.transpose());
  SymmetricFactor f(cov_);
  if (f.lambda_min() < -1e-10 * std::max(f.lambda_max(), 0.0))
    throw DomainError("GaussianDist: covariance is not positive semi-definite");
}

GaussianDist GaussianDist::isotropic(const Eigen::VectorXd& mean, double variance) {
  if (!(variance >= 0)) throw DomainError("GaussianDist: variance must be >= 0");
  const Eigen::Index d = mean.size();
  return GaussianDist(mean, variance * Eigen::MatrixXd::Identity(d, d));
}

GaussianDist GaussianDist::standard(Eigen::Index dim) {
  return isotropic(Eigen::VectorXd::Zero(dim), 1.0);
}

bool GaussianDist::is_isotropic() const {
  const double c = cov_(0, 0);
  const Eigen::Index d = dim();
  return (cov_ - c * Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff() <= 1e-12;
}

double GaussianDist::isotropic_variance() const {
  if (!is_isotropic()) throw DomainError("GaussianDist: covariance is not isotropic");
  return cov_(0, 0);
}

Potential::Potential(Eigen::Index dim, ValueFn value, GradFn grad, double alpha,
                     std::optional<double> smoothness, std::string name)
    : dim_(dim),
      value_(std::move(value)),
      grad_(std::move(grad)),
      alpha_(alpha),
      smoothness_(smoothness),
      name_(std::move(name)) {
  if (dim_ <= 0) throw DomainError("Potential: dimension must be positive");
  if (!value_ || !grad_) throw DomainError("Potential: missing oracle");
  if (!(alpha_ >= 0) || !std::isfinite(alpha_)) throw DomainError("Potential: alpha must be >= 0");
  if (smoothness_ && !(*smoothness_ >= alpha_ && std::isfinite(*smoothness_)))
    throw DomainError("Potential: smoothness must be finite and >= alpha");
}

Potential gaussian_potential(const GaussianDist& g) {
  SymmetricFactor f(g.covariance());
  if (!(f.condition_number() <= 1e12))
    throw DomainError("gaussian_potential: covariance condition number exceeds 1e12");
  const Eigen::MatrixXd prec = f.inverse();
  const Eigen::VectorXd m = g.mean();
  auto value = [prec, m](const Eigen::VectorXd& x) {
    const Eigen::VectorXd r = x - m;
    return 0.5 * r.dot(prec * r);
  };
  auto grad = [prec, m](const Eigen::VectorXd& x) -> Eigen::VectorXd { return prec * (x - m); };
  return Potential(g.dim(), value, grad, 1.0 / f.lambda_max(), 1.0 / f.lambda_min(), "gaussian");
}

namespace {

// log cosh without overflow.
double log_cosh(double x) {
  const double a = std::abs(x);
  return a + std::log1p(std::exp(-2.0 * a)) - std::log(2.0);
}

}  // namespace

Potential builtin_potential(const std::string& name, Eigen::Index dim, double alpha) {
  if (name == "logcosh") {
    if (!(alpha > 0)) throw DomainError("logcosh potential: alpha must be > 0");
    auto value = [alpha](const Eigen::VectorXd& x) {
      double s = 0.5 * alpha * x.squaredNorm();
      for (Eigen::Index i = 0; i < x.size(); ++i) s += log_cosh(x(i));
      return s;
    };
    auto grad = [alpha](const Eigen::VectorXd& x) -> Eigen::VectorXd {
      return alpha * x + x.array().tanh().matrix();
    };
    return Potential(dim, value, grad, alpha, alpha + 1.0, "logcosh");
  }
  throw DomainError("unknown builtin potential '" + name + "'");
}

std::vector<std::string> builtin_potential_names() { return {"logcosh"}; }

PotentialValidation validate_potential(const Potential& p,
                                       const std::vector<Eigen::VectorXd>& probes) {
  PotentialValidation out;
  const Eigen::Index d = p.dim();
  std::vector<Eigen::VectorXd> dirs;
  for (Eigen::Index i = 0; i < d; ++i) dirs.push_back(Eigen::VectorXd::Unit(d, i));
  if (d > 1) dirs.push_back(Eigen::VectorXd::Ones(d) / std::sqrt(static_cast<double>(d)));

  for (std::size_t n = 0; n < probes.size(); ++n) {
    const Eigen::VectorXd& x = probes[n];
    if (x.size() != d) throw DomainError("validate_potential: probe dimension mismatch");
    const double h = 1e-4 * (1.0 + x.norm());

    const Eigen::VectorXd g = p.gradient(x);
    Eigen::VectorXd fd(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      Eigen::VectorXd e = Eigen::VectorXd::Unit(d, i) * h;
      fd(i) = (p.value(x + e) - p.value(x - e)) / (2 * h);
    }
    const double err = (g - fd).norm() / std::max(1.0, g.norm());
    out.max_gradient_error = std::max(out.max_gradient_error, err);
    if (err > out.gradient_tolerance) out.gradient_flags.push_back(n);

    const double f0 = p.value(x);
    for (const auto& u : dirs) {
      const double c = (p.value(x + h * u) - 2 * f0 + p.value(x - h * u)) / (h * h);
      if (c < p.alpha() - 1e-3) {
        out.curvature_flags.push_back({n, u, c, true});
      } else if (p.smoothness() && c > *p.smoothness() + 1e-3) {
        out.curvature_flags.push_back({n, u, c, false});
      }
    }
  }
  return out;
}

}  // namespace midec
