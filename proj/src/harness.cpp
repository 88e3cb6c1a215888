#include "midec/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <Eigen/Eigenvalues>

#include "harness_internal.hpp"
#include "midec/errors.hpp"
#include "midec/estimation.hpp"
#include "midec/gaussian_oracle.hpp"
#include "midec/linalg.hpp"

namespace midec {

ChainTarget make_target(const TargetSpec& spec) {
  if (spec.kind == "gaussian") return GaussianDist(spec.mean, spec.covariance);
  if (spec.kind == "builtin") return builtin_potential(spec.builtin, spec.dim, spec.alpha);
  throw DomainError("unknown target kind '" + spec.kind + "'");
}

Plan resolve_plan(const ExperimentConfig& cfg, const std::string& source) {
  Plan plan(make_target(cfg.target));
  const GaussianDist& init = cfg.chain.init;
  const SymmetricFactor init_f(init.covariance());
  if (!(init_f.lambda_max() > 0))
    throw ConfigError(source, "chain.init.covariance", "must be nonzero");
  plan.init_alpha = 1.0 / init_f.lambda_max();
  plan.init_trace = init.covariance().trace();

  if (const auto* g = std::get_if<GaussianDist>(&plan.target)) {
    plan.gaussian = true;
    const SymmetricFactor f(g->covariance());
    if (!(f.lambda_min() > 0)) throw ConfigError(source, "target.covariance", "must be nonsingular");
    plan.alpha = 1.0 / f.lambda_max();
    plan.smoothness = 1.0 / f.lambda_min();
    // A generic combination of two commuting symmetric matrices has an
    // eigenbasis that diagonalizes both.
    const double s = std::sqrt(0.5) * g->covariance().trace() / std::max(init.covariance().trace(), 1e-300);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g->covariance() + s * init.covariance());
    const Eigen::MatrixXd& V = es.eigenvectors();
    const Eigen::MatrixXd tv = V.transpose() * g->covariance() * V;
    const Eigen::MatrixXd iv = V.transpose() * init.covariance() * V;
    auto off_diag = [](const Eigen::MatrixXd& m) {
      Eigen::MatrixXd o = m;
      o.diagonal().setZero();
      return o.cwiseAbs().maxCoeff();
    };
    const double scale = std::max({1.0, g->covariance().cwiseAbs().maxCoeff(), init.covariance().cwiseAbs().maxCoeff()});
    if (off_diag(tv) > 1e-9 * scale || off_diag(iv) > 1e-9 * scale)
      throw ConfigError(source, "chain.init.covariance", "must commute with the target covariance");
    plan.target_var = tv.diagonal();
    plan.init_var = iv.diagonal().cwiseMax(0.0);
    plan.init_mean = V.transpose() * (init.mean() - g->mean());
  } else {
    const auto& p = std::get<Potential>(plan.target);
    plan.alpha = p.alpha();
    plan.smoothness = p.smoothness();
    if (!(plan.alpha > 0)) throw ConfigError(source, "target.alpha", "must be > 0");
  }

  const auto& chain = cfg.chain;
  std::vector<double> points;
  if (chain.kind == ChainKind::LangevinEM) {
    points = chain.record_times;
  } else {
    for (auto k : chain.record_steps) points.push_back(static_cast<double>(k));
  }
  if (cfg.reference) {
    plan.reference = *cfg.reference;
  } else {
    const auto it = std::find_if(points.begin(), points.end(), [](double v) { return v > 0; });
    if (it == points.end()) throw ConfigError(source, "reference", "no positive record point to use as reference");
    plan.reference = *it;
  }
  if (!(plan.reference > 0)) throw ConfigError(source, "reference", "must be > 0");
  if (chain.kind != ChainKind::LangevinEM && plan.reference != std::floor(plan.reference))
    throw ConfigError(source, "reference", "must be an integer step for discrete chains");
  return plan;
}

namespace {

constexpr double kMinCoeff = std::numeric_limits<double>::min();

// Exact joint of (X0, X_index) in the rotated, centred basis.
JointGaussianState exact_joint(const ExperimentConfig& cfg, const Plan& plan, double index) {
  const Eigen::Index d = plan.target_var.size();
  JointGaussianState j{Eigen::VectorXd(d), Eigen::VectorXd(d), Eigen::MatrixXd::Zero(d, d),
                       Eigen::MatrixXd::Zero(d, d), Eigen::MatrixXd::Zero(d, d)};
  for (Eigen::Index i = 0; i < d; ++i) {
    const double a = 1.0 / plan.target_var(i);
    const GaussianDist init(Eigen::VectorXd::Constant(1, plan.init_mean(i)),
                            Eigen::MatrixXd::Constant(1, 1, plan.init_var(i)));
    JointGaussianState c;
    switch (cfg.chain.kind) {
      case ChainKind::LangevinEM:
        c = ou_joint(a, init, index);
        break;
      case ChainKind::ULA:
        c = ula_gaussian_joint(a, cfg.chain.eta, static_cast<std::int64_t>(index), init);
        break;
      case ChainKind::Proximal:
        c = proximal_gaussian_joint(a, cfg.chain.eta, static_cast<std::int64_t>(index), init);
        break;
    }
    j.mean0(i) = c.mean0(0);
    j.meank(i) = c.meank(0);
    j.cov0(i, i) = c.cov0(0, 0);
    j.covk(i, i) = c.covk(0, 0);
    j.cross(i, i) = c.cross(0, 0);
  }
  return j;
}

std::optional<MaybeInfinite> exact_mi(const ExperimentConfig& cfg, const JointGaussianState& j) {
  try {
    return phi_mutual_info_gaussian(j, cfg.generator);
  } catch (const CapabilityError&) {
    return std::nullopt;
  }
}

// Sobolev lower bounds and one-step contraction coefficients along a discrete chain.
struct DiscreteTrajectory {
  std::vector<double> sobolev;   // alpha_k, k = 0..K
  std::vector<double> log_coeff; // log contraction of step k -> k+1, k = 0..K-1
};

DiscreteTrajectory discrete_trajectory(const ExperimentConfig& cfg, const Plan& plan, std::int64_t K) {
  DiscreteTrajectory tr;
  const double eta = cfg.chain.eta;
  const double alpha = plan.alpha;
  SobolevConstant a(plan.init_alpha);
  tr.sobolev.push_back(a.value());
  const double gamma = 1 - eta * alpha;
  for (std::int64_t k = 0; k < K; ++k) {
    if (cfg.chain.kind == ChainKind::ULA) {
      tr.log_coeff.push_back(std::log(contraction_ula(gamma, eta, a)));
      a = sobolev_evolution_ula(a, gamma, eta);
    } else {
      tr.log_coeff.push_back(std::log(contraction_proximal(alpha, eta, a)));
      a = sobolev_evolution_proximal(alpha, a, eta);
    }
    tr.sobolev.push_back(a.value());
  }
  return tr;
}

double clamp_coeff(double log_c) { return std::max(kMinCoeff, std::min(1.0, std::exp(log_c))); }

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  const Plan plan = resolve_plan(cfg);
  const ChainConfig& chain = cfg.chain;
  const bool langevin = chain.kind == ChainKind::LangevinEM;
  const bool kl = cfg.generator.kind() == PhiKind::KL;
  const double alpha = plan.alpha;
  const double eta = chain.eta;

  ExperimentResult res;
  res.reference_index = plan.reference;
  BoundReport& rep = res.report;
  rep.index_name = langevin ? "t" : "k";

  std::vector<double> points;
  if (langevin) {
    points = chain.record_times;
  } else {
    for (auto k : chain.record_steps) points.push_back(static_cast<double>(k));
  }
  const std::size_t n = points.size();
  rep.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    rep.index[i] = points[i];
    rep.time[i] = langevin ? points[i] : points[i] * eta;
  }

  // Sobolev constants and contraction coefficients.
  const double ref = plan.reference;
  std::vector<double> sobolev_at(n);
  std::vector<double> log_coeff_at(n);  // contraction from the previous record point
  std::vector<double> log_sharp_at(n, std::numeric_limits<double>::quiet_NaN());  // from the reference
  double sobolev_ref = 0.0;
  bool ula_ok = true;
  if (langevin) {
    const SobolevConstant a0(plan.init_alpha);
    auto sob = [&](double t) { return sobolev_evolution_langevin(alpha, a0, t); };
    double prev = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sobolev_at[i] = sob(points[i]).value();
      log_coeff_at[i] = std::log(contraction_langevin(alpha, sob(prev), points[i] - prev));
      prev = points[i];
    }
    sobolev_ref = sob(ref).value();
    double last = ref;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (points[i] < ref) continue;
      acc += std::log(contraction_langevin(alpha, sob(last), points[i] - last));
      last = points[i];
      log_sharp_at[i] = acc;
    }
  } else {
    ula_ok = chain.kind != ChainKind::ULA || alpha * eta < 1;
    if (!ula_ok) res.notes.push_back("ula bounds need alpha * eta < 1; theorem columns left empty");
    const auto K = static_cast<std::int64_t>(std::max(points.back(), ref));
    if (ula_ok) {
      const DiscreteTrajectory tr = discrete_trajectory(cfg, plan, K);
      std::vector<double> cum(tr.log_coeff.size() + 1, 0.0);
      for (std::size_t k = 0; k < tr.log_coeff.size(); ++k) cum[k + 1] = cum[k] + tr.log_coeff[k];
      std::int64_t prev = 0;
      const auto l = static_cast<std::int64_t>(ref);
      for (std::size_t i = 0; i < n; ++i) {
        const auto k = static_cast<std::int64_t>(points[i]);
        sobolev_at[i] = tr.sobolev[static_cast<std::size_t>(k)];
        log_coeff_at[i] = cum[static_cast<std::size_t>(k)] - cum[static_cast<std::size_t>(prev)];
        if (k >= l) log_sharp_at[i] = cum[static_cast<std::size_t>(k)] - cum[static_cast<std::size_t>(l)];
        prev = k;
      }
      sobolev_ref = tr.sobolev[static_cast<std::size_t>(l)];
    }
  }
  if (ula_ok) res.sobolev_reference = sobolev_ref;
  for (std::size_t i = 0; i < n && ula_ok; ++i) {
    rep.sobolev_lower[i] = sobolev_at[i];
    rep.contraction_coeff[i] = clamp_coeff(log_coeff_at[i]);
  }
  if (!ula_ok) {
    for (std::size_t i = 0; i < n; ++i) {
      rep.sobolev_lower[i] = plan.init_alpha;
      rep.contraction_coeff[i] = 1.0;
    }
  }

  // Exact oracle values.
  std::vector<std::optional<JointGaussianState>> joints(n);
  if (plan.gaussian) {
    for (std::size_t i = 0; i < n; ++i) {
      joints[i] = exact_joint(cfg, plan, points[i]);
      rep.exact_mi[i] = exact_mi(cfg, *joints[i]);
    }
    if (!kl && !rep.exact_mi.empty() && !rep.exact_mi[0])
      res.notes.push_back("exact MI unavailable for generator " + cfg.generator.name());
  }

  // Regularity bounds (KL only).
  auto regularity = [&](double index) -> std::optional<double> {
    if (!kl || !(index > 0)) return std::nullopt;
    switch (chain.kind) {
      case ChainKind::LangevinEM:
        return bound_mi_regularity_ld(alpha, index, plan.init_trace);
      case ChainKind::ULA:
        if (!ula_ok) return std::nullopt;
        return bound_mi_regularity_ula(alpha, eta, static_cast<std::int64_t>(index), plan.init_trace);
      case ChainKind::Proximal: {
        const SobolevConstant a1 =
            sobolev_evolution_proximal(alpha, SobolevConstant(plan.init_alpha), eta);
        return bound_mi_regularity_proximal(alpha, eta, a1, static_cast<std::int64_t>(index),
                                            plan.init_trace);
      }
    }
    return std::nullopt;
  };
  if (cfg.bounds.regularity)
    for (std::size_t i = 0; i < n; ++i) rep.regularity_bound[i] = regularity(points[i]);

  // Reference MI for the theorem bounds.
  std::optional<double> mi_ref = cfg.mi_reference;
  if (!mi_ref && plan.gaussian) {
    const auto v = exact_mi(cfg, exact_joint(cfg, plan, ref));
    if (v && v->is_finite()) mi_ref = v->value();
  }
  if (!mi_ref) {
    mi_ref = regularity(ref);
    if (mi_ref) res.notes.push_back("reference MI taken from the regularity bound");
  }
  res.mi_reference = mi_ref;
  if (!mi_ref) res.notes.push_back("no reference MI available; theorem columns left empty");

  if (mi_ref && ula_ok && (cfg.bounds.thm || cfg.bounds.sharp)) {
    const SobolevConstant a_ref(sobolev_ref);
    for (std::size_t i = 0; i < n; ++i) {
      if (points[i] < ref) continue;
      const double steps = points[i] - ref;
      double thm = 0.0;
      switch (chain.kind) {
        case ChainKind::LangevinEM:
          thm = bound_mi_langevin(alpha, a_ref, *mi_ref, steps);
          break;
        case ChainKind::ULA:
          thm = bound_mi_ula(alpha, eta, a_ref, *mi_ref, static_cast<std::int64_t>(steps));
          break;
        case ChainKind::Proximal:
          thm = bound_mi_proximal(alpha, eta, a_ref, *mi_ref, static_cast<std::int64_t>(steps));
          break;
      }
      if (cfg.bounds.thm) rep.thm_bound[i] = MaybeInfinite::finite(thm * cfg.thm_bound_scale);
      if (cfg.bounds.sharp)
        rep.thm_bound_sharp[i] =
            MaybeInfinite::finite(*mi_ref * std::exp(log_sharp_at[i]) * cfg.thm_bound_scale);
    }
  }

  // Covariance bound from the exact joint (KL instantiation).
  if (cfg.bounds.cov && plan.gaussian) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto& j = *joints[i];
      rep.cov_opnorm[i] = j.cross.diagonal().cwiseAbs().maxCoeff();
      if (!kl) continue;
      const MaybeInfinite mi = phi_mutual_info_gaussian(j, cfg.generator);
      const double xi = std::sqrt(j.covk.diagonal().maxCoeff());
      const double var = j.cov0.diagonal().maxCoeff();
      rep.cov_bound[i] = mi.is_finite() ? bound_cov_from_mi(mi.value(), var, xi)
                                        : std::numeric_limits<double>::infinity();
    }
  }

  // Sampling.
  if (chain.n_chains > 0) {
    const TrajectorySample samples = run_chain_pairs(chain, plan.target);
    res.oracle_call_count = samples.oracle_call_count;
    res.n_chains_run = samples.n_chains();
    res.empirical_heuristic = !plan.gaussian;
    if (cfg.bounds.empirical && kl && samples.n_chains() >= static_cast<std::size_t>(samples.dim) + 2) {
      BootstrapOptions opts;
      opts.replicates = cfg.bootstrap_replicates;
      opts.seed = chain.seed;
      const auto est = mi_plugin_trajectory(samples, opts);
      for (std::size_t i = 0; i < n; ++i) {
        rep.empirical_mi[i] = est[i].value;
        rep.ci_halfwidth[i] = est[i].ci_halfwidth;
      }
      if (!plan.gaussian) {
        res.notes.push_back("empirical MI is a Gaussian plug-in heuristic for this target");
        if (cfg.bounds.cov)
          for (std::size_t i = 0; i < n; ++i)
            rep.cov_opnorm[i] = empirical_cov_opnorm(joint_gaussian_fit(samples, i));
      }
    } else if (cfg.bounds.empirical && !kl) {
      res.notes.push_back("empirical MI is only estimated for the kl generator");
    }
  }

  rep.violations = verify_dominance(rep, cfg.tolerances, !res.empirical_heuristic);
  return res;
}

std::vector<Violation> verify_dominance(const BoundReport& report, const Tolerances& tol,
                                        bool check_empirical) {
  std::vector<Violation> out;
  const double slack = tol.dominance_slack;
  for (std::size_t i = 0; i < report.size(); ++i) {
    const double idx = report.index[i];
    auto check_exact = [&](const std::optional<MaybeInfinite>& bound, const char* kind) {
      if (!report.exact_mi[i] || !bound) return;
      const double e = report.exact_mi[i]->as_double();
      const double b = bound->as_double();
      if (e > b + slack) out.push_back({idx, kind, e - b});
    };
    check_exact(report.thm_bound[i], "exact_mi>thm_bound");
    check_exact(report.thm_bound_sharp[i], "exact_mi>thm_bound_sharp");
    if (report.exact_mi[i] && report.regularity_bound[i]) {
      const double e = report.exact_mi[i]->as_double();
      if (e > *report.regularity_bound[i] + slack)
        out.push_back({idx, "exact_mi>regularity_bound", e - *report.regularity_bound[i]});
    }
    if (check_empirical && report.empirical_mi[i] && report.thm_bound[i]) {
      const double e = report.empirical_mi[i]->as_double();
      const double ci = report.ci_halfwidth[i].value_or(0.0);
      const double b = report.thm_bound[i]->as_double();
      const double low = e - tol.mc_sigma * ci;
      if (low > b) out.push_back({idx, "empirical_mi>thm_bound", low - b});
    }
    if (report.cov_opnorm[i] && report.cov_bound[i] && *report.cov_opnorm[i] > *report.cov_bound[i] + slack)
      out.push_back({idx, "cov_opnorm>cov_bound", *report.cov_opnorm[i] - *report.cov_bound[i]});
  }
  return out;
}

}  // namespace midec
