#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace midec {

/// Gaussian N(mean, covariance). Construction validates symmetry and
/// positive semi-definiteness; instances are immutable.
class GaussianDist {
 public:
  GaussianDist(Eigen::VectorXd mean, Eigen::MatrixXd covariance);

  /// N(mean, variance * I).
  static GaussianDist isotropic(const Eigen::VectorXd& mean, double variance);
  static GaussianDist standard(Eigen::Index dim);

  Eigen::Index dim() const noexcept { return mean_.size(); }
  const Eigen::VectorXd& mean() const noexcept { return mean_; }
  const Eigen::MatrixXd& covariance() const noexcept { return cov_; }

  /// True when covariance equals c^2 I within 1e-12 elementwise.
  bool is_isotropic() const;
  /// c^2 of an isotropic covariance; throws DomainError otherwise.
  double isotropic_variance() const;

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
};

/// Target nu proportional to exp(-f) through value and gradient oracles,
/// a strong-convexity modulus alpha, and an optional smoothness constant L.
/// The oracles must be safe to call concurrently.
class Potential {
 public:
  using ValueFn = std::function<double(const Eigen::VectorXd&)>;
  using GradFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

  Potential(Eigen::Index dim, ValueFn value, GradFn grad, double alpha,
            std::optional<double> smoothness, std::string name = "custom");

  Eigen::Index dim() const noexcept { return dim_; }
  double value(const Eigen::VectorXd& x) const { return value_(x); }
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const { return grad_(x); }
  double alpha() const noexcept { return alpha_; }
  const std::optional<double>& smoothness() const noexcept { return smoothness_; }
  const std::string& name() const noexcept { return name_; }

 private:
  Eigen::Index dim_;
  ValueFn value_;
  GradFn grad_;
  double alpha_;
  std::optional<double> smoothness_;
  std::string name_;
};

/// f(x) = (x-m)^T Sigma^{-1} (x-m) / 2 with alpha = 1/lambda_max, L = 1/lambda_min.
/// Rejects covariances with condition number above 1e12.
Potential gaussian_potential(const GaussianDist& g);

/// Named non-Gaussian test potentials.
///   "logcosh": f(x) = alpha/2 |x|^2 + sum_i log cosh(x_i), smoothness alpha + 1.
Potential builtin_potential(const std::string& name, Eigen::Index dim, double alpha);
std::vector<std::string> builtin_potential_names();

struct CurvatureFlag {
  std::size_t probe;
  Eigen::VectorXd direction;
  double curvature;
  bool below_alpha;  // false means above smoothness
};

struct PotentialValidation {
  double max_gradient_error = 0.0;
  std::vector<std::size_t> gradient_flags;  // probes whose error exceeds gradient_tolerance
  std::vector<CurvatureFlag> curvature_flags;
  double gradient_tolerance = 1e-5;

  bool ok() const noexcept { return gradient_flags.empty() && curvature_flags.empty(); }
};

/// Compares the gradient oracle against central differences and probes
/// curvature with second differences (step 1e-4 (1 + |x|)) along the
/// coordinate axes and the normalized diagonal. Report-only; never throws
/// on a failed check.
PotentialValidation validate_potential(const Potential& p,
                                       const std::vector<Eigen::VectorXd>& probes);

}  // namespace midec
