#include "midec/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "midec/errors.hpp"
#include "midec/linalg.hpp"
#include "midec/parallel.hpp"
#include "midec/random.hpp"

namespace midec {

namespace {

constexpr std::uint64_t kBootstrapStreamBase = std::uint64_t{1} << 63;

JointGaussianState joint_from_cov(const Eigen::VectorXd& mean, Eigen::MatrixXd cov, Eigen::Index d) {
  cov = 0.5 * (cov + cov.transpose());
  double scale = cov.trace() / static_cast<double>(2 * d);
  if (!(scale > 0)) scale = 1.0;
  const double ridge = 1e-12 * scale;
  JointGaussianState j;
  j.mean0 = mean.head(d);
  j.meank = mean.tail(d);
  j.cov0 = cov.topLeftCorner(d, d);
  j.covk = cov.bottomRightCorner(d, d);
  j.cross = cov.topRightCorner(d, d);
  j.cov0.diagonal().array() += ridge;
  j.covk.diagonal().array() += ridge;
  return j;
}

// Two-pass moments of the stacked columns selected by idx (all columns when idx is null).
JointGaussianState fit_columns(const Eigen::MatrixXd& x0, const Eigen::MatrixXd& xk,
                               const std::vector<std::uint32_t>* idx) {
  const Eigen::Index d = x0.rows();
  const Eigen::Index D = 2 * d;
  const std::size_t n = idx ? idx->size() : static_cast<std::size_t>(x0.cols());
  auto column = [&](std::size_t i) { return idx ? static_cast<Eigen::Index>((*idx)[i]) : static_cast<Eigen::Index>(i); };

  Eigen::VectorXd mean = Eigen::VectorXd::Zero(D);
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Index c = column(i);
    mean.head(d) += x0.col(c);
    mean.tail(d) += xk.col(c);
  }
  mean /= static_cast<double>(n);

  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(D, D);
  Eigen::VectorXd u(D);
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Index c = column(i);
    u.head(d) = x0.col(c) - mean.head(d);
    u.tail(d) = xk.col(c) - mean.tail(d);
    for (Eigen::Index a = 0; a < D; ++a)
      for (Eigen::Index b = a; b < D; ++b) cov(a, b) += u(a) * u(b);
  }
  for (Eigen::Index a = 0; a < D; ++a)
    for (Eigen::Index b = 0; b < a; ++b) cov(a, b) = cov(b, a);
  cov /= static_cast<double>(n - 1);
  return joint_from_cov(mean, cov, d);
}

void check_pairs(const Eigen::MatrixXd& x0, const Eigen::MatrixXd& xk) {
  if (x0.rows() != xk.rows() || x0.cols() != xk.cols())
    throw InputError("joint fit: x0 and xk shapes differ");
  if (x0.cols() < x0.rows() + 2) throw InputError("joint fit: need at least d + 2 chains");
}

double quantile_sorted(const std::vector<double>& v, double q) {
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  const double w = pos - static_cast<double>(lo);
  if (w == 0) return v[lo];
  return v[lo] + w * (v[hi] - v[lo]);
}

double percentile_halfwidth(std::vector<double> reps, double level) {
  if (reps.empty()) return 0.0;
  for (double r : reps)
    if (std::isinf(r)) return std::numeric_limits<double>::infinity();
  std::sort(reps.begin(), reps.end());
  const double tail = 0.5 * (1 - level);
  return 0.5 * (quantile_sorted(reps, 1 - tail) - quantile_sorted(reps, tail));
}

std::vector<std::uint32_t> resample(std::size_t n, std::uint64_t seed, int replicate) {
  RngStream rng(seed, kBootstrapStreamBase + static_cast<std::uint64_t>(replicate));
  std::vector<std::uint32_t> idx(n);
  for (auto& i : idx) i = static_cast<std::uint32_t>(rng.below(n));
  return idx;
}

void check_bootstrap(const BootstrapOptions& opts) {
  if (opts.replicates < 0) throw InputError("bootstrap: replicates must be >= 0");
  if (!(opts.level > 0 && opts.level < 1)) throw InputError("bootstrap: level must lie in (0, 1)");
}

}  // namespace

MomentAccumulator::MomentAccumulator(Eigen::Index dim)
    : dim_(dim), mean_(Eigen::VectorXd::Zero(2 * dim)), m2_(Eigen::MatrixXd::Zero(2 * dim, 2 * dim)) {
  if (dim <= 0) throw InputError("MomentAccumulator: dimension must be positive");
}

void MomentAccumulator::add(const Eigen::Ref<const Eigen::VectorXd>& x0,
                            const Eigen::Ref<const Eigen::VectorXd>& xk) {
  if (x0.size() != dim_ || xk.size() != dim_) throw InputError("MomentAccumulator: dimension mismatch");
  Eigen::VectorXd v(2 * dim_);
  v << x0, xk;
  ++count_;
  const Eigen::VectorXd delta = v - mean_;
  mean_ += delta / static_cast<double>(count_);
  m2_ += delta * (v - mean_).transpose();
}

void MomentAccumulator::merge(const MomentAccumulator& other) {
  if (other.dim_ != dim_) throw InputError("MomentAccumulator: dimension mismatch");
  if (other.count_ == 0) return;
  if (count_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(count_);
  const double nb = static_cast<double>(other.count_);
  const double n = na + nb;
  const Eigen::VectorXd delta = other.mean_ - mean_;
  mean_ += delta * (nb / n);
  m2_ += other.m2_ + delta * delta.transpose() * (na * nb / n);
  count_ += other.count_;
}

Eigen::MatrixXd MomentAccumulator::covariance() const {
  if (count_ < 2) throw InputError("MomentAccumulator: need at least two samples");
  const Eigen::MatrixXd c = m2_ / static_cast<double>(count_ - 1);
  return 0.5 * (c + c.transpose());
}

JointGaussianState MomentAccumulator::joint() const {
  if (count_ < dim_ + 2) throw InputError("joint fit: need at least d + 2 chains");
  return joint_from_cov(mean_, covariance(), dim_);
}

JointGaussianState joint_gaussian_fit(const Eigen::MatrixXd& x0, const Eigen::MatrixXd& xk) {
  check_pairs(x0, xk);
  return fit_columns(x0, xk, nullptr);
}

JointGaussianState joint_gaussian_fit(const TrajectorySample& samples, std::size_t record) {
  if (record >= samples.xk.size()) throw InputError("joint fit: record index out of range");
  return joint_gaussian_fit(samples.x0, samples.xk[record]);
}

MaybeInfinite mi_plugin_gaussian(const JointGaussianState& j) {
  return phi_mutual_info_gaussian(j, PhiGenerator(PhiKind::KL));
}

MiEstimate mi_plugin_with_ci(const Eigen::MatrixXd& x0, const Eigen::MatrixXd& xk,
                             const BootstrapOptions& opts) {
  check_pairs(x0, xk);
  check_bootstrap(opts);
  const MaybeInfinite value = mi_plugin_gaussian(fit_columns(x0, xk, nullptr));
  const std::size_t n = static_cast<std::size_t>(x0.cols());
  std::vector<double> reps(static_cast<std::size_t>(opts.replicates));
  parallel_for_chunks(reps.size(), 0, [&](std::size_t b, std::size_t e) {
    for (std::size_t r = b; r < e; ++r) {
      const auto idx = resample(n, opts.seed, static_cast<int>(r));
      reps[r] = mi_plugin_gaussian(fit_columns(x0, xk, &idx)).as_double();
    }
  });
  return {value, percentile_halfwidth(std::move(reps), opts.level)};
}

std::vector<MiEstimate> mi_plugin_trajectory(const TrajectorySample& samples,
                                             const BootstrapOptions& opts) {
  check_bootstrap(opts);
  const std::size_t n_rec = samples.xk.size();
  for (std::size_t r = 0; r < n_rec; ++r) check_pairs(samples.x0, samples.xk[r]);
  const std::size_t n = samples.n_chains();
  const auto R = static_cast<std::size_t>(opts.replicates);

  std::vector<MiEstimate> out(n_rec);
  for (std::size_t r = 0; r < n_rec; ++r)
    out[r].value = mi_plugin_gaussian(fit_columns(samples.x0, samples.xk[r], nullptr));

  // reps[rec * R + replicate]
  std::vector<double> reps(n_rec * R);
  parallel_for_chunks(R, 0, [&](std::size_t b, std::size_t e) {
    for (std::size_t rep = b; rep < e; ++rep) {
      const auto idx = resample(n, opts.seed, static_cast<int>(rep));
      for (std::size_t r = 0; r < n_rec; ++r)
        reps[r * R + rep] = mi_plugin_gaussian(fit_columns(samples.x0, samples.xk[r], &idx)).as_double();
    }
  });
  for (std::size_t r = 0; r < n_rec; ++r) {
    std::vector<double> slice(reps.begin() + static_cast<std::ptrdiff_t>(r * R),
                              reps.begin() + static_cast<std::ptrdiff_t>((r + 1) * R));
    out[r].ci_halfwidth = percentile_halfwidth(std::move(slice), opts.level);
  }
  return out;
}

MaybeInfinite phi_mi_histogram_1d(const Eigen::VectorXd& x0, const Eigen::VectorXd& xk, int bins,
                                  PhiGenerator gen) {
  if (bins < 16 || bins > 512) throw InputError("phi_mi_histogram_1d: bins must lie in [16, 512]");
  if (x0.size() != xk.size() || x0.size() == 0) throw InputError("phi_mi_histogram_1d: need paired samples");
  const Eigen::Index n = x0.size();
  auto binner = [bins](const Eigen::VectorXd& v) {
    const double lo = v.minCoeff();
    const double hi = v.maxCoeff();
    std::vector<int> out(static_cast<std::size_t>(v.size()), 0);
    if (!(hi > lo)) return out;
    const double scale = bins / (hi - lo);
    for (Eigen::Index i = 0; i < v.size(); ++i)
      out[static_cast<std::size_t>(i)] = std::min(bins - 1, static_cast<int>((v(i) - lo) * scale));
    return out;
  };
  const auto b0 = binner(x0);
  const auto bk = binner(xk);
  const auto B = static_cast<std::size_t>(bins);
  std::vector<double> joint(B * B, 0.0), m0(B, 0.0), mk(B, 0.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto a = static_cast<std::size_t>(b0[static_cast<std::size_t>(i)]);
    const auto b = static_cast<std::size_t>(bk[static_cast<std::size_t>(i)]);
    joint[a * B + b] += 1;
    m0[a] += 1;
    mk[b] += 1;
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  double total = 0.0;
  for (std::size_t a = 0; a < B; ++a) {
    if (m0[a] == 0) continue;
    for (std::size_t b = 0; b < B; ++b) {
      if (mk[b] == 0) continue;
      const double q = m0[a] * mk[b] * inv_n * inv_n;
      const double p = joint[a * B + b] * inv_n;
      const double term = q * gen.value(p / q);
      if (std::isinf(term)) return MaybeInfinite::pos_inf();
      total += term;
    }
  }
  return MaybeInfinite::finite(std::max(total, 0.0));
}

double empirical_cov_opnorm(const JointGaussianState& j) { return operator_norm(j.cross); }

}  // namespace midec
