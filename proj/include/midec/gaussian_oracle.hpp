#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "midec/joint_gaussian.hpp"
#include "midec/maybe_infinite.hpp"
#include "midec/targets.hpp"

namespace midec {

// Closed-form joint laws of (X_0, X_k) for the three chains run on the
// isotropic target N(0, I/alpha) from an isotropic Gaussian start.

struct MiBounds {
  double lower;
  double upper;
};

/// Langevin dynamics (OU process) at time t.
JointGaussianState ou_joint(double alpha, const GaussianDist& init, double t);
/// MI(X_0; X_t) for X_0 ~ N(0, I). +inf at t = 0.
MaybeInfinite ou_mi_exact(double alpha, double t, int d);
/// Bounds for a general start with Cov(X_0) <= J I and entropy H0.
MiBounds ou_mi_bounds(double alpha, double t, int d, double J, double H0);

/// Heat flow X_t = X_0 + sqrt(2t) Z; `cov0_eigenvalues` of Cov(X_0).
MiBounds heat_flow_mi_bounds(double t, const Eigen::VectorXd& cov0_eigenvalues, double H0);

JointGaussianState ula_gaussian_joint(double alpha, double eta, std::int64_t k,
                                      const GaussianDist& init);
MaybeInfinite ula_gaussian_mi_exact(double alpha, double eta, std::int64_t k, int d);

JointGaussianState proximal_gaussian_joint(double alpha, double eta, std::int64_t k,
                                           const GaussianDist& init);
MaybeInfinite proximal_gaussian_mi_exact(double alpha, double eta, std::int64_t k, int d);

/// Differential entropy of N(., cov); -inf when singular.
MaybeInfinite gaussian_entropy(const Eigen::MatrixXd& cov);
/// e^{2H/d} / (2 pi e).
double entropy_power(double entropy, int d);

}  // namespace midec
