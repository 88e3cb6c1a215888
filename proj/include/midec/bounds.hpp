#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "midec/maybe_infinite.hpp"
#include "midec/phi_info.hpp"

namespace midec {

// Decay bounds for mutual information along Langevin dynamics, ULA and the
// proximal sampler. Reference MI values (at s or l) are always passed in.

double bound_mi_langevin(double alpha, SobolevConstant alpha_s, double mi_s, double dt);
double bound_mi_langevin_sharp(double alpha, SobolevConstant alpha_s, double mi_s, double dt);
double bound_mi_ula(double alpha, double eta, SobolevConstant alpha_l, double mi_l,
                    std::int64_t steps);
double bound_mi_proximal(double alpha, double eta, SobolevConstant alpha_l, double mi_l,
                         std::int64_t steps);

std::int64_t iters_ula(double epsilon, double alpha, double eta, SobolevConstant alpha_l,
                       double mi_l, std::int64_t ell);
std::int64_t iters_proximal(double epsilon, double alpha, double eta, SobolevConstant alpha_l,
                            double mi_l, std::int64_t ell);

SobolevConstant sobolev_evolution_langevin(double alpha, SobolevConstant alpha_s, double dt);
SobolevConstant sobolev_evolution_ula(SobolevConstant alpha_rho, double gamma, double eta);
SobolevConstant sobolev_evolution_proximal(double alpha, SobolevConstant alpha_rho, double eta);
/// Along the backward heat flow that undoes a time-T forward heat step.
SobolevConstant sobolev_evolution_backward_heat(double alpha, double T, double t,
                                                SobolevConstant alpha0);

double contraction_langevin(double alpha, SobolevConstant alpha_rho, double t);
double contraction_ula(double gamma, double eta, SobolevConstant alpha_rho);
double contraction_proximal(double alpha, double eta, SobolevConstant alpha_rho);
double contraction_forward_heat(double eta, SobolevConstant alpha_rho);
double contraction_backward_heat(double alpha, double T, double t, SobolevConstant alpha_rho);

/// mi_l times the product of coeffs (each in (0, 1]), accumulated in log space.
double mi_bound_via_coefficients(const std::vector<double>& coeffs, double mi_l);

double bound_phi_divergence_langevin(double alpha_phisi, double t, double d0);
double bound_mi_regularity_ld(double alpha, double t, double var0);
double bound_mi_regularity_ula(double alpha, double eta, std::int64_t k, double var0);
double bound_mi_proximal_first_step(double eta, double var0);
/// Multi-step form: var0 / (2 eta (1 + eta min(alpha, alpha_1))^{2(k-1)}), k >= 1.
double bound_mi_regularity_proximal(double alpha, double eta, SobolevConstant alpha_1,
                                    std::int64_t k, double var0);
double bound_cov_from_mi(double mi, double var_opnorm, double xi);
double bound_cov_decay_poincare(double alpha, double t, double var_f);
double bound_kl_regularity(double alpha, double t, double w2sq);
double mi_from_pointwise_mixing(double epsilon);

struct Violation {
  double index;
  std::string kind;
  double margin;  // positive amount by which the inequality failed
};

/// Per-index bound table for one experiment. Optional columns are empty
/// when the quantity is unavailable for the chain or generator.
struct BoundReport {
  std::string index_name = "k";  // "k" or "t"
  std::vector<double> index;
  std::vector<double> time;
  std::vector<std::optional<MaybeInfinite>> exact_mi;
  std::vector<std::optional<MaybeInfinite>> empirical_mi;
  std::vector<std::optional<double>> ci_halfwidth;
  std::vector<std::optional<MaybeInfinite>> thm_bound;
  std::vector<std::optional<MaybeInfinite>> thm_bound_sharp;
  std::vector<std::optional<double>> regularity_bound;
  std::vector<double> sobolev_lower;
  std::vector<double> contraction_coeff;
  std::vector<std::optional<double>> cov_opnorm;
  std::vector<std::optional<double>> cov_bound;
  std::vector<Violation> violations;

  std::size_t size() const noexcept { return index.size(); }
  void resize(std::size_t n);
  void check_invariants() const;
};

}  // namespace midec
