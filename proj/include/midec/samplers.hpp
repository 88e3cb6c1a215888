#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "midec/random.hpp"
#include "midec/targets.hpp"

namespace midec {

enum class ChainKind { LangevinEM, ULA, Proximal };

ChainKind chain_kind_from_name(const std::string& name);
std::string chain_kind_name(ChainKind kind);

struct ChainConfig {
  ChainKind kind = ChainKind::ULA;
  double eta = 0.1;         // step size (ula, proximal)
  double em_substep = 1e-3; // Euler-Maruyama substep (langevin only)
  std::vector<std::int64_t> record_steps;  // ula, proximal
  std::vector<double> record_times;        // langevin
  std::size_t n_chains = 1;
  std::uint64_t seed = 0;
  GaussianDist init = GaussianDist::standard(1);
  /// Use the exact Ornstein-Uhlenbeck transition for Gaussian Langevin targets.
  bool exact_gaussian = true;
  /// 0 = use configured_threads().
  unsigned threads = 0;

  std::size_t n_records() const noexcept;
};

using ChainTarget = std::variant<GaussianDist, Potential>;

/// X0 and the recorded Xk for every chain. Chain j uses RNG stream j.
struct TrajectorySample {
  Eigen::Index dim = 0;
  std::vector<double> record_points;    // k (as double) or t
  Eigen::MatrixXd x0;                   // dim x n_chains
  std::vector<Eigen::MatrixXd> xk;      // one dim x n_chains block per record point
  std::uint64_t oracle_call_count = 0;  // gradient evaluations + RGO proposal rounds
  std::uint64_t seed = 0;

  std::size_t n_chains() const noexcept { return static_cast<std::size_t>(x0.cols()); }
  std::uint64_t stream_id(std::size_t chain) const noexcept { return chain; }
};

/// x - eta grad f(x) + sqrt(2 eta) z. ChainFailure on a non-finite gradient.
Eigen::VectorXd ula_step(const Potential& p, const Eigen::VectorXd& x, double eta,
                         const Eigen::VectorXd& z);

/// Euler-Maruyama for dX = -grad f dt + sqrt(2) dW up to time t with
/// ceil(t/dt) substeps, the last one truncated. Each substep draws from
/// `rng` at its current position. `grad_evals` (optional) accumulates oracle calls.
Eigen::VectorXd langevin_em(const Potential& p, const Eigen::VectorXd& x0, double t, double dt,
                            RngStream& rng, std::uint64_t* grad_evals = nullptr);

/// Exact Langevin transition for a Gaussian target N(m, Sigma):
/// m + e^{-t Sigma^{-1}} (x0 - m) + noise with covariance
/// Sigma (I - e^{-2 t Sigma^{-1}}).
class OuTransition {
 public:
  OuTransition(const GaussianDist& target, double t);
  Eigen::VectorXd operator()(const Eigen::VectorXd& x0, const Eigen::VectorXd& z) const;
  Eigen::VectorXd sample(const Eigen::VectorXd& x0, RngStream& rng) const;

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd drift_;
  Eigen::MatrixXd noise_sqrt_;
};

/// Forward step of the proximal sampler: y = x + sqrt(eta) z.
Eigen::VectorXd proximal_forward(const Eigen::VectorXd& x, double eta, RngStream& rng);

/// Exact restricted Gaussian oracle for a Gaussian target:
/// N(M (Sigma^{-1} m + y/eta), M) with M = (Sigma^{-1} + I/eta)^{-1}.
class GaussianRgo {
 public:
  GaussianRgo(const GaussianDist& target, double eta);
  Eigen::VectorXd mean(const Eigen::VectorXd& y) const;
  const Eigen::MatrixXd& covariance() const noexcept { return cov_; }
  Eigen::VectorXd operator()(const Eigen::VectorXd& y, const Eigen::VectorXd& z) const;
  Eigen::VectorXd sample(const Eigen::VectorXd& y, RngStream& rng) const;

 private:
  Eigen::MatrixXd precision_mean_;  // Sigma^{-1} m
  Eigen::MatrixXd cov_;
  Eigen::MatrixXd cov_sqrt_;
  double eta_;
};

Eigen::VectorXd rgo_gaussian_exact(const GaussianDist& target, const Eigen::VectorXd& y,
                                   double eta, RngStream& rng);

struct RgoDraw {
  Eigen::VectorXd x;
  std::int64_t iterations = 0;      // proposal rounds
  std::int64_t gradient_calls = 0;  // spent locating the mode
  Eigen::VectorXd mode;
  double beta = 0.0;                // strong convexity of g_y
};

/// Rejection-sampling RGO. Minimizes g_y(x) = f(x) + |x - y|^2/(2 eta) by
/// gradient descent (step 1/(L + 1/eta)) to |grad| <= 1e-10, then proposes
/// Z ~ N(x*, I/beta) with beta = 1/eta - L and accepts with probability
/// exp(-g_y(Z) + g_y(x*) + beta/2 |Z - x*|^2).
/// PreconditionError unless smoothness is known and eta < 1/L;
/// OptimizationError when the minimizer needs more than 1e4 iterations.
RgoDraw rgo_rejection(const Potential& p, const Eigen::VectorXd& y, double eta, RngStream& rng);

/// Log acceptance probability of a rejection-RGO proposal z (always <= 0).
double rgo_log_acceptance(const Potential& p, const Eigen::VectorXd& y, double eta,
                          const Eigen::VectorXd& mode, const Eigen::VectorXd& z);

/// Runs cfg.n_chains independent chains and records (X0, Xk) at every record
/// point. Output is a pure function of (cfg, target): chains may run on any
/// number of threads.
TrajectorySample run_chain_pairs(const ChainConfig& cfg, const ChainTarget& target);

/// Validates cfg against the target; throws PreconditionError / DomainError.
void validate_chain_config(const ChainConfig& cfg, const ChainTarget& target);

}  // namespace midec
