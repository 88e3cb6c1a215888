#pragma once

#include <functional>
#include <string>
#include <vector>

#include "midec/joint_gaussian.hpp"
#include "midec/maybe_infinite.hpp"
#include "midec/quadrature.hpp"
#include "midec/targets.hpp"

namespace midec {

enum class PhiKind { KL, ChiSquared, SquaredHellinger, TV, ReverseKL, ReverseChiSquared };

struct PhiDerivatives {
  double value;
  double d1;
  double d2;
};

/// Convex generator Phi with Phi(1) = 0 selecting a divergence family.
///
/// | name           | Phi(x)            |
/// |----------------|-------------------|
/// | "kl"           | x log x           |
/// | "chi2"         | (x - 1)^2         |
/// | "hellinger2"   | (sqrt(x) - 1)^2/2 |
/// | "tv"           | abs(x - 1)/2      |
/// | "reverse-kl"   | -log x            |
/// | "reverse-chi2" | 1/x - x           |
class PhiGenerator {
 public:
  constexpr explicit PhiGenerator(PhiKind kind) : kind_(kind) {}

  static PhiGenerator from_name(const std::string& name);
  static std::vector<std::string> names();

  PhiKind kind() const noexcept { return kind_; }
  std::string name() const;
  /// Twice differentiable on (0, inf); false only for TV.
  bool smooth() const noexcept { return kind_ != PhiKind::TV; }

  /// Phi(x) for x >= 0, using the continuous extension at 0 (possibly +inf).
  double value(double x) const;
  /// Phi'(x); TV uses sign(x - 1)/2.
  double d1(double x) const;
  /// (Phi, Phi', Phi''). DomainError for x < 0 or x = 0 where the
  /// derivatives blow up; CapabilityError for TV.
  PhiDerivatives eval(double x) const;

  friend bool operator==(PhiGenerator a, PhiGenerator b) { return a.kind_ == b.kind_; }

 private:
  PhiKind kind_;
};

inline PhiDerivatives phi_eval(PhiGenerator gen, double x) { return gen.eval(x); }

/// Certified lower bound on a Phi-Sobolev constant; always > 0.
class SobolevConstant {
 public:
  explicit SobolevConstant(double value);
  double value() const noexcept { return value_; }

 private:
  double value_;
};

using Density1d = std::function<double(double)>;

/// D_Phi(mu || nu) between nonsingular Gaussians. Closed forms in any
/// dimension for every smooth kind (chi2 is +inf when 2 Sigma_nu - Sigma_mu
/// is not positive definite); TV uses quadrature and needs d = 1.
double phi_divergence_gaussian(PhiGenerator gen, const GaussianDist& mu, const GaussianDist& nu);

/// E_q[Phi(p/q)] over [a, b]. Densities are clipped below at 1e-300 and
/// regions with q < 1e-300 contribute 0. InputError when p or q fail to
/// integrate to 1 within max(tol, 1e-8).
QuadratureResult phi_divergence_quadrature_1d(PhiGenerator gen, const Density1d& p,
                                              const Density1d& q, double a, double b,
                                              double tol = 1e-9);

/// E_q[(d/dx (p/q))^2 Phi''(p/q)] over [a, b], derivative by central
/// differences. Reports diverged (value +inf) once partial sums pass 1e12.
QuadratureResult phi_fisher_info_quadrature_1d(PhiGenerator gen, const Density1d& p,
                                               const Density1d& q, double a, double b,
                                               double tol = 1e-9);

/// Strongly log-concave targets satisfy every Phi-Sobolev inequality with constant alpha.
SobolevConstant sobolev_constant_slc(double alpha);
/// Pushforward by a lip-Lipschitz map: c / lip^2.
SobolevConstant sobolev_pushforward(SobolevConstant c, double lip);
/// Convolution: 1 / (1/c1 + 1/c2).
SobolevConstant sobolev_convolution(SobolevConstant c1, SobolevConstant c2);

/// MI_Phi(X0; Xk) = D_Phi(joint || product of marginals) for a Gaussian joint.
/// KL via canonical correlations, -1/2 sum log(1 - s_i^2); other smooth kinds
/// from the closed-form Gaussian divergence. A canonical correlation within
/// 1e-10 of 1 is treated as a deterministic link (+inf, or 1 for hellinger2).
/// CapabilityError for TV.
MaybeInfinite phi_mutual_info_gaussian(const JointGaussianState& joint, PhiGenerator gen);

/// Canonical correlations of a joint (singular values of the whitened cross block).
Eigen::VectorXd canonical_correlations(const JointGaussianState& joint);

/// Density of N(mean, variance) at x.
double normal_pdf(double x, double mean, double variance);

}  // namespace midec
