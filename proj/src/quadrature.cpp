#include "midec/quadrature.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "midec/errors.hpp"

namespace midec {

namespace {

struct SimpsonState {
  const std::function<double(double)>& f;
  double threshold;
  double magnitude = 0.0;
  double error = 0.0;
  bool diverged = false;
};

double simpson_rec(SimpsonState& st, double a, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth) {
  if (st.diverged) return 0.0;
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = st.f(lm);
  const double frm = st.f(rm);
  const double left = (m - a) / 6.0 * (fa + 4 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4 * frm + fb);
  const double delta = left + right - whole;
  if (!std::isfinite(delta) || std::abs(left + right) > st.threshold) {
    st.diverged = true;
    return 0.0;
  }
  if (depth <= 0 || std::abs(delta) <= 15 * tol) {
    st.error += std::abs(delta) / 15;
    st.magnitude += std::abs(left + right);
    if (st.magnitude > st.threshold) st.diverged = true;
    return left + right + delta / 15;
  }
  return simpson_rec(st, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(st, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  double abs_tol, int panels, double divergence_threshold) {
  if (!(b > a)) throw DomainError("adaptive_simpson: need a < b");
  if (panels < 1) panels = 1;
  SimpsonState st{f, divergence_threshold};
  const double w = (b - a) / panels;
  double total = 0.0;
  for (int i = 0; i < panels && !st.diverged; ++i) {
    const double lo = a + i * w;
    const double hi = (i + 1 == panels) ? b : lo + w;
    const double flo = f(lo);
    const double fmid = f(0.5 * (lo + hi));
    const double fhi = f(hi);
    const double whole = (hi - lo) / 6.0 * (flo + 4 * fmid + fhi);
    total += simpson_rec(st, lo, hi, flo, fmid, fhi, whole, abs_tol / panels, 40);
  }
  if (st.diverged) {
    return {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(), true};
  }
  return {total, st.error, false};
}

GaussHermiteRule gauss_hermite_normal(int n) {
  if (n < 1) throw DomainError("gauss_hermite_normal: n must be >= 1");
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    jac(i, i - 1) = std::sqrt(static_cast<double>(i));
    jac(i - 1, i) = jac(i, i - 1);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
  GaussHermiteRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.nodes[i] = es.eigenvalues()(i);
    const double v = es.eigenvectors()(0, i);
    rule.weights[i] = v * v;
  }
  return rule;
}

}  // namespace midec
