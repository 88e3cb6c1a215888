#pragma once

#include <Eigen/Dense>

namespace midec {

/// Symmetric eigendecomposition of a covariance matrix.
///
/// Eigenvalues below 1e-12 * lambda_max are floored before any inverse or
/// square root is formed.
class SymmetricFactor {
 public:
  explicit SymmetricFactor(const Eigen::MatrixXd& sym);

  Eigen::Index dim() const noexcept { return eigenvalues_.size(); }
  const Eigen::VectorXd& eigenvalues() const noexcept { return eigenvalues_; }
  const Eigen::MatrixXd& eigenvectors() const noexcept { return eigenvectors_; }

  double lambda_min() const noexcept { return eigenvalues_.minCoeff(); }
  double lambda_max() const noexcept { return eigenvalues_.maxCoeff(); }
  /// lambda_max / lambda_min of the unfloored spectrum; +inf when lambda_min <= 0.
  double condition_number() const noexcept;

  Eigen::MatrixXd inverse() const;
  Eigen::MatrixXd sqrt() const;
  Eigen::MatrixXd inverse_sqrt() const;
  double log_det() const;

 private:
  Eigen::VectorXd eigenvalues_;
  Eigen::VectorXd floored_;
  Eigen::MatrixXd eigenvectors_;
};

/// Largest singular value.
double operator_norm(const Eigen::MatrixXd& m);

}  // namespace midec
