#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "midec/harness.hpp"
#include "midec/samplers.hpp"

namespace midec {

ChainTarget make_target(const TargetSpec& spec);

/// Everything run_experiment needs beyond the config itself.
struct Plan {
  explicit Plan(ChainTarget t) : target(std::move(t)) {}

  ChainTarget target;
  bool gaussian = false;
  double alpha = 0.0;             // strong convexity of the target
  std::optional<double> smoothness;
  double init_alpha = 0.0;        // Sobolev constant of the Gaussian start
  double init_trace = 0.0;        // Var(X0) = trace Cov(X0)
  // Gaussian target in a basis diagonalizing both the target and the init
  // covariances, centred at the target mean.
  Eigen::VectorXd target_var;     // lambda_i
  Eigen::VectorXd init_mean;      // mu_i
  Eigen::VectorXd init_var;       // c_i^2
  double reference = 0.0;
};

/// Throws ConfigError for inconsistent configs.
Plan resolve_plan(const ExperimentConfig& cfg, const std::string& source = "");

}  // namespace midec
