#pragma once

#include <cstdint>
#include <optional>

#include <Eigen/Dense>

#include "midec/joint_gaussian.hpp"
#include "midec/maybe_infinite.hpp"
#include "midec/phi_info.hpp"
#include "midec/samplers.hpp"

namespace midec {

/// Streaming first and second moments of stacked (x0, xk) pairs.
/// merge() uses the pairwise update of Chan et al.
class MomentAccumulator {
 public:
  explicit MomentAccumulator(Eigen::Index dim);

  void add(const Eigen::Ref<const Eigen::VectorXd>& x0, const Eigen::Ref<const Eigen::VectorXd>& xk);
  void merge(const MomentAccumulator& other);

  Eigen::Index dim() const noexcept { return dim_; }
  std::int64_t count() const noexcept { return count_; }
  Eigen::VectorXd mean0() const { return mean_.head(dim_); }
  Eigen::VectorXd meank() const { return mean_.tail(dim_); }
  /// Unbiased 2d x 2d covariance of the stacked vector.
  Eigen::MatrixXd covariance() const;
  /// Unbiased joint fit, symmetrized, with ridge 1e-12 * (trace/d) on the diagonal blocks.
  JointGaussianState joint() const;

 private:
  Eigen::Index dim_;
  std::int64_t count_ = 0;
  Eigen::VectorXd mean_;
  Eigen::MatrixXd m2_;
};

/// Fit at record point `record` (0-based position in the record list).
/// InputError when n_chains < d + 2.
JointGaussianState joint_gaussian_fit(const TrajectorySample& samples, std::size_t record);
JointGaussianState joint_gaussian_fit(const Eigen::MatrixXd& x0, const Eigen::MatrixXd& xk);

/// -1/2 log det(I - C) from the canonical correlations of the joint.
MaybeInfinite mi_plugin_gaussian(const JointGaussianState& j);

struct MiEstimate {
  MaybeInfinite value;
  double ci_halfwidth;  // NaN-free; +inf when any replicate is infinite
};

struct BootstrapOptions {
  int replicates = 200;
  double level = 0.95;
  std::uint64_t seed = 0;
};

/// Plug-in estimate at one record point with a percentile bootstrap CI over chains.
MiEstimate mi_plugin_with_ci(const Eigen::MatrixXd& x0, const Eigen::MatrixXd& xk,
                             const BootstrapOptions& opts = {});

/// Estimates at every record point. Each bootstrap replicate draws one set
/// of chain indices and reuses it across record points.
std::vector<MiEstimate> mi_plugin_trajectory(const TrajectorySample& samples,
                                             const BootstrapOptions& opts = {});

/// Histogram plug-in Phi-MI for scalar pairs. Diagnostic only: positively
/// biased at finite n. Bins in [16, 512]; equal-width over the sample range.
MaybeInfinite phi_mi_histogram_1d(const Eigen::VectorXd& x0, const Eigen::VectorXd& xk, int bins,
                                  PhiGenerator gen);

/// Largest singular value of the cross-covariance block.
double empirical_cov_opnorm(const JointGaussianState& j);

}  // namespace midec
