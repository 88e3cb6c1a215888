#pragma once

#include <Eigen/Dense>

namespace midec {

/// Joint law of (X0, Xk) when both are Gaussian: marginal means and
/// covariances plus the cross-covariance Cov(X0, Xk).
struct JointGaussianState {
  Eigen::VectorXd mean0;
  Eigen::VectorXd meank;
  Eigen::MatrixXd cov0;
  Eigen::MatrixXd covk;
  Eigen::MatrixXd cross;

  Eigen::Index dim() const noexcept { return mean0.size(); }

  /// The (2d)x(2d) block covariance [[cov0, cross], [cross^T, covk]].
  Eigen::MatrixXd block_covariance() const;

  /// Shapes agree and the block covariance is PSD within -1e-10 * lambda_max.
  bool is_valid() const;
  /// Throws DomainError when is_valid() is false.
  void validate() const;

  /// Same joint with the roles of X0 and Xk exchanged.
  JointGaussianState swapped() const;
};

}  // namespace midec
