#include "midec/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "midec/errors.hpp"

namespace midec {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw DomainError(msg);
}

void require_mi(double mi, const char* op) {
  if (!(mi >= 0)) throw DomainError(std::string(op) + ": reference MI must be >= 0");
}

// e^{-2 a t} as a pair (value, 1 - value) without cancellation.
struct Decay {
  double e;
  double one_minus;
};

Decay decay(double a, double t) {
  const double x = -2 * a * t;
  return {std::exp(x), -std::expm1(x)};
}

}  // namespace

double bound_mi_langevin(double alpha, SobolevConstant alpha_s, double mi_s, double dt) {
  require(alpha > 0, "bound_mi_langevin: alpha must be > 0");
  require(dt >= 0, "bound_mi_langevin: t - s must be >= 0");
  require_mi(mi_s, "bound_mi_langevin");
  return std::exp(-2 * alpha * dt) * std::max(1.0, alpha / alpha_s.value()) * mi_s;
}

double bound_mi_langevin_sharp(double alpha, SobolevConstant alpha_s, double mi_s, double dt) {
  require(alpha > 0, "bound_mi_langevin_sharp: alpha must be > 0");
  require(dt >= 0, "bound_mi_langevin_sharp: t - s must be >= 0");
  require_mi(mi_s, "bound_mi_langevin_sharp");
  return mi_s * contraction_langevin(alpha, alpha_s, dt);
}

double bound_mi_ula(double alpha, double eta, SobolevConstant alpha_l, double mi_l,
                    std::int64_t steps) {
  require(alpha > 0 && eta > 0, "bound_mi_ula: alpha and eta must be > 0");
  require(alpha * eta < 1, "bound_mi_ula: requires alpha * eta < 1");
  require(steps >= 0, "bound_mi_ula: steps must be >= 0");
  require_mi(mi_l, "bound_mi_ula");
  const double log_rate = 2.0 * static_cast<double>(steps) * std::log1p(-alpha * eta);
  return std::exp(log_rate) * std::max(1.0, alpha / alpha_l.value()) * mi_l;
}

double bound_mi_proximal(double alpha, double eta, SobolevConstant alpha_l, double mi_l,
                         std::int64_t steps) {
  require(alpha > 0 && eta > 0, "bound_mi_proximal: alpha and eta must be > 0");
  require(steps >= 0, "bound_mi_proximal: steps must be >= 0");
  require_mi(mi_l, "bound_mi_proximal");
  const double a = std::min(alpha, alpha_l.value());
  return mi_l * std::exp(-2.0 * static_cast<double>(steps) * std::log1p(eta * a));
}

std::int64_t iters_ula(double epsilon, double alpha, double eta, SobolevConstant alpha_l,
                       double mi_l, std::int64_t ell) {
  require(epsilon > 0, "iters_ula: epsilon must be > 0");
  require(alpha > 0 && eta > 0 && alpha * eta < 1, "iters_ula: need alpha, eta > 0 and alpha * eta < 1");
  require(ell >= 0, "iters_ula: ell must be >= 0");
  require_mi(mi_l, "iters_ula");
  const double start = std::max(1.0, alpha / alpha_l.value()) * mi_l;
  if (start <= epsilon) return ell;
  const double extra = std::log(start / epsilon) / (2 * alpha * eta);
  return ell + static_cast<std::int64_t>(std::ceil(extra));
}

std::int64_t iters_proximal(double epsilon, double alpha, double eta, SobolevConstant alpha_l,
                            double mi_l, std::int64_t ell) {
  require(epsilon > 0, "iters_proximal: epsilon must be > 0");
  require(alpha > 0 && eta > 0, "iters_proximal: alpha and eta must be > 0");
  require(ell >= 0, "iters_proximal: ell must be >= 0");
  require_mi(mi_l, "iters_proximal");
  if (mi_l <= epsilon) return ell;
  const double a = std::min(alpha, alpha_l.value());
  const double extra = (0.5 + 1 / (2 * eta * a)) * std::log(mi_l / epsilon);
  return ell + static_cast<std::int64_t>(std::ceil(extra));
}

SobolevConstant sobolev_evolution_langevin(double alpha, SobolevConstant alpha_s, double dt) {
  require(alpha > 0, "sobolev_evolution_langevin: alpha must be > 0");
  require(dt >= 0, "sobolev_evolution_langevin: t - s must be >= 0");
  const Decay dc = decay(alpha, dt);
  return SobolevConstant(1 / (dc.e / alpha_s.value() + dc.one_minus / alpha));
}

SobolevConstant sobolev_evolution_ula(SobolevConstant alpha_rho, double gamma, double eta) {
  require(gamma > 0, "sobolev_evolution_ula: gamma must be > 0");
  require(eta >= 0, "sobolev_evolution_ula: eta must be >= 0");
  const double a = alpha_rho.value();
  return SobolevConstant(a / (gamma * gamma + 2 * eta * a));
}

SobolevConstant sobolev_evolution_proximal(double alpha, SobolevConstant alpha_rho, double eta) {
  require(alpha > 0 && eta >= 0, "sobolev_evolution_proximal: need alpha > 0, eta >= 0");
  const double a = alpha_rho.value();
  const double r = 1 + alpha * eta;
  return SobolevConstant(1 / ((1 + a * eta) / (a * r * r) + eta / r));
}

SobolevConstant sobolev_evolution_backward_heat(double alpha, double T, double t,
                                                SobolevConstant alpha0) {
  require(alpha > 0 && T > 0, "sobolev_evolution_backward_heat: need alpha, T > 0");
  require(t >= 0 && t <= T, "sobolev_evolution_backward_heat: need 0 <= t <= T");
  const double shrink = 1 - alpha * t / (1 + alpha * T);
  return SobolevConstant(
      1 / (shrink * shrink / alpha0.value() + t * (1 + alpha * (T - t)) / (1 + alpha * T)));
}

double contraction_langevin(double alpha, SobolevConstant alpha_rho, double t) {
  require(alpha > 0, "contraction_langevin: alpha must be > 0");
  require(t >= 0, "contraction_langevin: t must be >= 0");
  const Decay dc = decay(alpha, t);
  return std::min(1.0, alpha * dc.e / (alpha_rho.value() * dc.one_minus + alpha * dc.e));
}

double contraction_ula(double gamma, double eta, SobolevConstant alpha_rho) {
  require(gamma > 0 && eta >= 0, "contraction_ula: need gamma > 0, eta >= 0");
  const double g2 = gamma * gamma;
  return g2 / (g2 + 2 * eta * alpha_rho.value());
}

double contraction_proximal(double alpha, double eta, SobolevConstant alpha_rho) {
  require(alpha > 0 && eta >= 0, "contraction_proximal: need alpha > 0, eta >= 0");
  const double a = alpha_rho.value();
  return 1 / (1 + 2 * eta * a + eta * eta * alpha * a);
}

double contraction_forward_heat(double eta, SobolevConstant alpha_rho) {
  require(eta >= 0, "contraction_forward_heat: eta must be >= 0");
  return 1 / (1 + eta * alpha_rho.value());
}

double contraction_backward_heat(double alpha, double T, double t, SobolevConstant alpha_rho) {
  require(alpha > 0 && T > 0, "contraction_backward_heat: need alpha, T > 0");
  require(t >= 0 && t <= T, "contraction_backward_heat: need 0 <= t <= T");
  const double num = 1 + alpha * T - alpha * t;
  return std::min(1.0, num / ((1 + alpha * T) * (1 + alpha_rho.value() * t) - alpha * t));
}

double mi_bound_via_coefficients(const std::vector<double>& coeffs, double mi_l) {
  require_mi(mi_l, "mi_bound_via_coefficients");
  double log_prod = 0.0;
  for (double c : coeffs) {
    require(c > 0 && c <= 1, "mi_bound_via_coefficients: coefficients must lie in (0, 1]");
    log_prod += std::log(c);
  }
  return mi_l * std::exp(log_prod);
}

double bound_phi_divergence_langevin(double alpha_phisi, double t, double d0) {
  require(alpha_phisi > 0 && t >= 0 && d0 >= 0,
          "bound_phi_divergence_langevin: need alpha > 0, t >= 0, d0 >= 0");
  return std::exp(-2 * alpha_phisi * t) * d0;
}

double bound_mi_regularity_ld(double alpha, double t, double var0) {
  require(t > 0, "bound_mi_regularity_ld: t must be > 0");
  require(alpha >= 0 && var0 >= 0, "bound_mi_regularity_ld: need alpha >= 0, var0 >= 0");
  if (alpha == 0) return var0 / (2 * t);
  return alpha * var0 / std::expm1(2 * alpha * t);
}

double bound_mi_regularity_ula(double alpha, double eta, std::int64_t k, double var0) {
  require(alpha > 0 && eta > 0, "bound_mi_regularity_ula: alpha and eta must be > 0");
  require(alpha * eta < 1, "bound_mi_regularity_ula: requires alpha * eta < 1");
  require(k >= 1 && var0 >= 0, "bound_mi_regularity_ula: need k >= 1, var0 >= 0");
  // (1 - eta alpha)^{-2k} - 1
  const double denom = std::expm1(-2.0 * static_cast<double>(k) * std::log1p(-eta * alpha));
  return alpha * var0 / denom;
}

double bound_mi_proximal_first_step(double eta, double var0) {
  require(eta > 0, "bound_mi_proximal_first_step: eta must be > 0");
  require(var0 >= 0, "bound_mi_proximal_first_step: var0 must be >= 0");
  return var0 / (2 * eta);
}

double bound_mi_regularity_proximal(double alpha, double eta, SobolevConstant alpha_1,
                                    std::int64_t k, double var0) {
  require(k >= 1, "bound_mi_regularity_proximal: k must be >= 1");
  return bound_mi_proximal(alpha, eta, alpha_1, bound_mi_proximal_first_step(eta, var0), k - 1);
}

double bound_cov_from_mi(double mi, double var_opnorm, double xi) {
  require(mi >= 0 && var_opnorm >= 0 && xi >= 0, "bound_cov_from_mi: inputs must be >= 0");
  return xi * std::sqrt(2 * var_opnorm * mi);
}

double bound_cov_decay_poincare(double alpha, double t, double var_f) {
  require(alpha > 0 && t >= 0 && var_f >= 0,
          "bound_cov_decay_poincare: need alpha > 0, t >= 0, var_f >= 0");
  return std::exp(-alpha * t) * var_f;
}

double bound_kl_regularity(double alpha, double t, double w2sq) {
  require(t > 0, "bound_kl_regularity: t must be > 0");
  require(alpha >= 0 && w2sq >= 0, "bound_kl_regularity: need alpha >= 0, w2sq >= 0");
  if (alpha == 0) return w2sq / (4 * t);
  return alpha * w2sq / (2 * std::expm1(2 * alpha * t));
}

double mi_from_pointwise_mixing(double epsilon) {
  require(epsilon >= 0, "mi_from_pointwise_mixing: epsilon must be >= 0");
  return epsilon;
}

void BoundReport::resize(std::size_t n) {
  index.resize(n);
  time.resize(n);
  exact_mi.resize(n);
  empirical_mi.resize(n);
  ci_halfwidth.resize(n);
  thm_bound.resize(n);
  thm_bound_sharp.resize(n);
  regularity_bound.resize(n);
  sobolev_lower.resize(n);
  contraction_coeff.resize(n);
  cov_opnorm.resize(n);
  cov_bound.resize(n);
}

void BoundReport::check_invariants() const {
  const std::size_t n = index.size();
  if (time.size() != n || exact_mi.size() != n || empirical_mi.size() != n ||
      ci_halfwidth.size() != n || thm_bound.size() != n || thm_bound_sharp.size() != n ||
      regularity_bound.size() != n || sobolev_lower.size() != n || contraction_coeff.size() != n ||
      cov_opnorm.size() != n || cov_bound.size() != n)
    throw InputError("bound report: column lengths differ");
  for (double c : contraction_coeff)
    if (!(c > 0 && c <= 1)) throw InputError("bound report: contraction coefficient outside (0, 1]");
  double prev = std::numeric_limits<double>::infinity();
  for (const auto& b : thm_bound) {
    if (!b) continue;
    const double v = b->as_double();
    if (v > prev * (1 + 1e-12)) throw InputError("bound report: thm_bound increases along the index");
    prev = v;
  }
}

}  // namespace midec
