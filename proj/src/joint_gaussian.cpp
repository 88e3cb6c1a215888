#include "midec/joint_gaussian.hpp"

#include <Eigen/Eigenvalues>

#include "midec/errors.hpp"

namespace midec {

Eigen::MatrixXd JointGaussianState::block_covariance() const {
  const Eigen::Index d = dim();
  Eigen::MatrixXd b(2 * d, 2 * d);
  b << cov0, cross, cross.transpose(), covk;
  return b;
}

bool JointGaussianState::is_valid() const {
  const Eigen::Index d = dim();
  if (meank.size() != d || cov0.rows() != d || cov0.cols() != d || covk.rows() != d ||
      covk.cols() != d || cross.rows() != d || cross.cols() != d)
    return false;
  if (!mean0.allFinite() || !meank.allFinite() || !cov0.allFinite() || !covk.allFinite() ||
      !cross.allFinite())
    return false;
  if (d == 0) return true;
  Eigen::MatrixXd b = block_covariance();
  b = 0.5 * (b + b.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b, Eigen::EigenvaluesOnly);
  const double hi = es.eigenvalues().maxCoeff();
  const double lo = es.eigenvalues().minCoeff();
  return lo >= -1e-10 * std::max(hi, 0.0);
}

void JointGaussianState::validate() const {
  if (!is_valid()) throw DomainError("joint Gaussian state: shape mismatch or block covariance not PSD");
}

JointGaussianState JointGaussianState::swapped() const {
  return JointGaussianState{meank, mean0, covk, cov0, cross.transpose()};
}

}  // namespace midec
