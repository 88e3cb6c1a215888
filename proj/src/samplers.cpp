#include "midec/samplers.hpp"

#include <algorithm>
#include <cmath>

#include "midec/errors.hpp"
#include "midec/linalg.hpp"
#include "midec/parallel.hpp"

namespace midec {

namespace {

constexpr int kMaxMinimizerIterations = 10000;
constexpr double kMinimizerTolerance = 1e-10;
// Guard against a runaway rejection loop; far above (M/beta)^{d/2} for sane inputs.
constexpr std::int64_t kMaxProposalRounds = 100000000;

Eigen::VectorXd normal_vector(Eigen::Index d, RngStream& rng) {
  Eigen::VectorXd z(d);
  rng.fill_normal({z.data(), static_cast<std::size_t>(d)});
  return z;
}

std::optional<double> smoothness_of(const ChainTarget& target) {
  if (const auto* g = std::get_if<GaussianDist>(&target)) {
    SymmetricFactor f(g->covariance());
    if (f.lambda_min() <= 0) return std::nullopt;
    return 1.0 / f.lambda_min();
  }
  return std::get<Potential>(target).smoothness();
}

Eigen::Index target_dim(const ChainTarget& target) {
  return std::visit([](const auto& t) { return t.dim(); }, target);
}

bool strictly_increasing_nonneg(const auto& v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] >= 0)) return false;
    if (i > 0 && !(v[i] > v[i - 1])) return false;
  }
  return true;
}

}  // namespace

ChainKind chain_kind_from_name(const std::string& name) {
  if (name == "langevin_em" || name == "langevin") return ChainKind::LangevinEM;
  if (name == "ula") return ChainKind::ULA;
  if (name == "proximal") return ChainKind::Proximal;
  throw DomainError("unknown chain kind '" + name + "'");
}

std::string chain_kind_name(ChainKind kind) {
  switch (kind) {
    case ChainKind::LangevinEM:
      return "langevin_em";
    case ChainKind::ULA:
      return "ula";
    case ChainKind::Proximal:
      return "proximal";
  }
  return "?";
}

std::size_t ChainConfig::n_records() const noexcept {
  return kind == ChainKind::LangevinEM ? record_times.size() : record_steps.size();
}

Eigen::VectorXd ula_step(const Potential& p, const Eigen::VectorXd& x, double eta,
                         const Eigen::VectorXd& z) {
  if (!(eta > 0)) throw DomainError("ula_step: eta must be > 0");
  const Eigen::VectorXd g = p.gradient(x);
  if (!g.allFinite()) throw ChainFailure("ula_step: non-finite gradient", x);
  Eigen::VectorXd out = x - eta * g + std::sqrt(2 * eta) * z;
  if (!out.allFinite()) throw ChainFailure("ula_step: non-finite iterate", x);
  return out;
}

Eigen::VectorXd langevin_em(const Potential& p, const Eigen::VectorXd& x0, double t, double dt,
                            RngStream& rng, std::uint64_t* grad_evals) {
  if (!(t >= 0)) throw DomainError("langevin_em: t must be >= 0");
  if (!(dt > 0)) throw DomainError("langevin_em: dt must be > 0");
  if (t == 0) return x0;
  const auto n = static_cast<std::int64_t>(std::max(1.0, std::ceil(t / dt * (1 - 1e-12))));
  Eigen::VectorXd x = x0;
  for (std::int64_t i = 0; i < n; ++i) {
    const double h = (i + 1 == n) ? t - dt * static_cast<double>(n - 1) : dt;
    x = ula_step(p, x, h, normal_vector(x.size(), rng));
    if (grad_evals) ++*grad_evals;
  }
  return x;
}

OuTransition::OuTransition(const GaussianDist& target, double t) : mean_(target.mean()) {
  if (!(t >= 0)) throw DomainError("OuTransition: t must be >= 0");
  SymmetricFactor f(target.covariance());
  if (f.lambda_min() <= 0) throw DomainError("OuTransition: singular target covariance");
  const Eigen::VectorXd lam = f.eigenvalues();
  Eigen::VectorXd decay(lam.size()), noise(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    decay(i) = std::exp(-t / lam(i));
    noise(i) = std::sqrt(-lam(i) * std::expm1(-2 * t / lam(i)));
  }
  const Eigen::MatrixXd& V = f.eigenvectors();
  drift_ = V * decay.asDiagonal() * V.transpose();
  noise_sqrt_ = V * noise.asDiagonal() * V.transpose();
}

Eigen::VectorXd OuTransition::operator()(const Eigen::VectorXd& x0, const Eigen::VectorXd& z) const {
  return mean_ + drift_ * (x0 - mean_) + noise_sqrt_ * z;
}

Eigen::VectorXd OuTransition::sample(const Eigen::VectorXd& x0, RngStream& rng) const {
  return (*this)(x0, normal_vector(x0.size(), rng));
}

Eigen::VectorXd proximal_forward(const Eigen::VectorXd& x, double eta, RngStream& rng) {
  if (!(eta > 0)) throw DomainError("proximal_forward: eta must be > 0");
  return x + std::sqrt(eta) * normal_vector(x.size(), rng);
}

GaussianRgo::GaussianRgo(const GaussianDist& target, double eta) : eta_(eta) {
  if (!(eta > 0)) throw DomainError("GaussianRgo: eta must be > 0");
  SymmetricFactor f(target.covariance());
  if (f.lambda_min() <= 0) throw DomainError("GaussianRgo: singular target covariance");
  const Eigen::VectorXd& lam = f.eigenvalues();
  const Eigen::MatrixXd& V = f.eigenvectors();
  Eigen::VectorXd m(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i) m(i) = lam(i) * eta / (lam(i) + eta);
  cov_ = V * m.asDiagonal() * V.transpose();
  cov_sqrt_ = V * m.cwiseSqrt().asDiagonal() * V.transpose();
  precision_mean_ = V * lam.cwiseInverse().asDiagonal() * V.transpose() * target.mean();
}

Eigen::VectorXd GaussianRgo::mean(const Eigen::VectorXd& y) const {
  return cov_ * (precision_mean_ + y / eta_);
}

Eigen::VectorXd GaussianRgo::operator()(const Eigen::VectorXd& y, const Eigen::VectorXd& z) const {
  return mean(y) + cov_sqrt_ * z;
}

Eigen::VectorXd GaussianRgo::sample(const Eigen::VectorXd& y, RngStream& rng) const {
  return (*this)(y, normal_vector(y.size(), rng));
}

Eigen::VectorXd rgo_gaussian_exact(const GaussianDist& target, const Eigen::VectorXd& y,
                                   double eta, RngStream& rng) {
  return GaussianRgo(target, eta).sample(y, rng);
}

namespace {

double rgo_beta(const Potential& p, double eta) {
  if (!p.smoothness()) throw PreconditionError("rgo_rejection: potential has no smoothness constant");
  if (!(eta > 0)) throw PreconditionError("rgo_rejection: eta must be > 0");
  const double L = *p.smoothness();
  if (!(eta * L < 1)) throw PreconditionError("rgo_rejection: requires eta < 1/L");
  return 1 / eta - L;
}

double g_value(const Potential& p, const Eigen::VectorXd& y, double eta, const Eigen::VectorXd& x) {
  return p.value(x) + (x - y).squaredNorm() / (2 * eta);
}

}  // namespace

double rgo_log_acceptance(const Potential& p, const Eigen::VectorXd& y, double eta,
                          const Eigen::VectorXd& mode, const Eigen::VectorXd& z) {
  const double beta = rgo_beta(p, eta);
  const double v = -g_value(p, y, eta, z) + g_value(p, y, eta, mode) +
                   0.5 * beta * (z - mode).squaredNorm();
  return std::min(v, 0.0);
}

RgoDraw rgo_rejection(const Potential& p, const Eigen::VectorXd& y, double eta, RngStream& rng) {
  const double beta = rgo_beta(p, eta);
  const double step = 1 / (*p.smoothness() + 1 / eta);

  RgoDraw out;
  out.beta = beta;
  Eigen::VectorXd x = y;
  for (int it = 0;; ++it) {
    const Eigen::VectorXd g = p.gradient(x) + (x - y) / eta;
    ++out.gradient_calls;
    if (!g.allFinite()) throw ChainFailure("rgo_rejection: non-finite gradient", x);
    if (g.norm() <= kMinimizerTolerance) break;
    if (it >= kMaxMinimizerIterations)
      throw OptimizationError("rgo_rejection: minimizer did not converge in 1e4 iterations");
    x -= step * g;
  }
  out.mode = x;
  const double g_mode = g_value(p, y, eta, x);
  const double scale = 1 / std::sqrt(beta);
  while (true) {
    if (out.iterations >= kMaxProposalRounds)
      throw OptimizationError("rgo_rejection: proposal budget exhausted");
    ++out.iterations;
    const Eigen::VectorXd z = x + scale * normal_vector(x.size(), rng);
    const double log_acc =
        std::min(0.0, -g_value(p, y, eta, z) + g_mode + 0.5 * beta * (z - x).squaredNorm());
    if (std::log(rng.uniform()) < log_acc) {
      out.x = z;
      return out;
    }
  }
}

void validate_chain_config(const ChainConfig& cfg, const ChainTarget& target) {
  const Eigen::Index d = target_dim(target);
  if (cfg.n_chains < 1) throw PreconditionError("chain config: n_chains must be positive");
  if (cfg.init.dim() != d) throw PreconditionError("chain config: init dimension differs from target");
  if (cfg.n_records() == 0) throw PreconditionError("chain config: no record points");
  const bool gaussian = std::holds_alternative<GaussianDist>(target);
  switch (cfg.kind) {
    case ChainKind::LangevinEM:
      if (!strictly_increasing_nonneg(cfg.record_times))
        throw PreconditionError("chain config: record times must be >= 0 and strictly increasing");
      if (!(gaussian && cfg.exact_gaussian) && !(cfg.em_substep > 0))
        throw PreconditionError("chain config: em_substep must be > 0");
      break;
    case ChainKind::ULA: {
      if (!strictly_increasing_nonneg(cfg.record_steps))
        throw PreconditionError("chain config: record steps must be >= 0 and strictly increasing");
      if (!(cfg.eta > 0)) throw PreconditionError("chain config: eta must be > 0");
      const auto L = smoothness_of(target);
      if (L && cfg.eta > (1 / *L) * (1 + 1e-12))
        throw PreconditionError("chain config: ula requires eta <= 1/L");
      break;
    }
    case ChainKind::Proximal:
      if (!strictly_increasing_nonneg(cfg.record_steps))
        throw PreconditionError("chain config: record steps must be >= 0 and strictly increasing");
      if (!(cfg.eta > 0)) throw PreconditionError("chain config: eta must be > 0");
      if (!gaussian) {
        const auto& p = std::get<Potential>(target);
        if (!p.smoothness() || !(cfg.eta * *p.smoothness() < 1))
          throw PreconditionError("chain config: proximal on a non-Gaussian target requires eta < 1/L");
      }
      break;
  }
}

TrajectorySample run_chain_pairs(const ChainConfig& cfg, const ChainTarget& target) {
  validate_chain_config(cfg, target);
  const Eigen::Index d = target_dim(target);
  const std::size_t n = cfg.n_chains;
  const std::size_t n_rec = cfg.n_records();
  const auto* gauss = std::get_if<GaussianDist>(&target);

  TrajectorySample out;
  out.dim = d;
  out.seed = cfg.seed;
  out.x0.resize(d, static_cast<Eigen::Index>(n));
  out.xk.assign(n_rec, Eigen::MatrixXd(d, static_cast<Eigen::Index>(n)));
  if (cfg.kind == ChainKind::LangevinEM) {
    out.record_points = cfg.record_times;
  } else {
    for (auto k : cfg.record_steps) out.record_points.push_back(static_cast<double>(k));
  }

  // Shared read-only machinery.
  const Eigen::MatrixXd init_sqrt = SymmetricFactor(cfg.init.covariance()).sqrt();
  std::optional<Potential> potential;
  if (gauss) {
    const bool need_potential =
        cfg.kind == ChainKind::ULA || (cfg.kind == ChainKind::LangevinEM && !cfg.exact_gaussian);
    if (need_potential) potential = gaussian_potential(*gauss);
  } else {
    potential = std::get<Potential>(target);
  }
  std::optional<GaussianRgo> rgo;
  if (gauss && cfg.kind == ChainKind::Proximal) rgo.emplace(*gauss, cfg.eta);
  std::vector<OuTransition> ou;
  if (gauss && cfg.kind == ChainKind::LangevinEM && cfg.exact_gaussian) {
    double prev = 0.0;
    for (double t : cfg.record_times) {
      ou.emplace_back(*gauss, t - prev);
      prev = t;
    }
  }

  const unsigned threads = cfg.threads ? cfg.threads : configured_threads();
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, n));
  std::vector<std::uint64_t> calls(n, 0);  // per chain, summed in index order

  parallel_for_chunks(n, static_cast<unsigned>(workers), [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      std::uint64_t& local_calls = calls[j];
      const auto col = static_cast<Eigen::Index>(j);
      RngStream rng(cfg.seed, out.stream_id(j), 0);
      Eigen::VectorXd x = cfg.init.mean() + init_sqrt * normal_vector(d, rng);
      out.x0.col(col) = x;

      if (cfg.kind == ChainKind::LangevinEM) {
        double prev = 0.0;
        for (std::size_t r = 0; r < n_rec; ++r) {
          rng.set_step(static_cast<std::uint32_t>(r + 1));
          const double t = cfg.record_times[r];
          if (!ou.empty()) {
            x = ou[r].sample(x, rng);
          } else {
            x = langevin_em(*potential, x, t - prev, cfg.em_substep, rng, &local_calls);
          }
          prev = t;
          out.xk[r].col(col) = x;
        }
        continue;
      }

      std::int64_t k = 0;
      for (std::size_t r = 0; r < n_rec; ++r) {
        const std::int64_t target_k = cfg.record_steps[r];
        for (; k < target_k; ++k) {
          rng.set_step(static_cast<std::uint32_t>(k + 1));
          if (cfg.kind == ChainKind::ULA) {
            x = ula_step(*potential, x, cfg.eta, normal_vector(d, rng));
            ++local_calls;
          } else {
            const Eigen::VectorXd y = proximal_forward(x, cfg.eta, rng);
            if (rgo) {
              x = rgo->sample(y, rng);
              ++local_calls;
            } else {
              const RgoDraw draw = rgo_rejection(*potential, y, cfg.eta, rng);
              x = draw.x;
              local_calls += static_cast<std::uint64_t>(draw.iterations + draw.gradient_calls);
            }
          }
        }
        out.xk[r].col(col) = x;
      }
    }
  });

  for (auto c : calls) out.oracle_call_count += c;
  return out;
}

}  // namespace midec
