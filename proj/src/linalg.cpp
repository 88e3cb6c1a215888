#include "midec/linalg.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace midec {

SymmetricFactor::SymmetricFactor(const Eigen::MatrixXd& sym) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (sym + sym.transpose()));
  eigenvalues_ = es.eigenvalues();
  eigenvectors_ = es.eigenvectors();
  const double top = eigenvalues_.size() ? std::max(eigenvalues_.maxCoeff(), 0.0) : 0.0;
  const double floor = top > 0 ? 1e-12 * top : std::numeric_limits<double>::min();
  floored_ = eigenvalues_.cwiseMax(floor);
}

double SymmetricFactor::condition_number() const noexcept {
  const double lo = lambda_min();
  if (lo <= 0) return std::numeric_limits<double>::infinity();
  return lambda_max() / lo;
}

Eigen::MatrixXd SymmetricFactor::inverse() const {
  return eigenvectors_ * floored_.cwiseInverse().asDiagonal() * eigenvectors_.transpose();
}

Eigen::MatrixXd SymmetricFactor::sqrt() const {
  Eigen::VectorXd s = eigenvalues_.cwiseMax(0.0).cwiseSqrt();
  return eigenvectors_ * s.asDiagonal() * eigenvectors_.transpose();
}

Eigen::MatrixXd SymmetricFactor::inverse_sqrt() const {
  Eigen::VectorXd s = floored_.cwiseSqrt().cwiseInverse();
  return eigenvectors_ * s.asDiagonal() * eigenvectors_.transpose();
}

double SymmetricFactor::log_det() const { return floored_.array().log().sum(); }

double operator_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(0);
}

}  // namespace midec
