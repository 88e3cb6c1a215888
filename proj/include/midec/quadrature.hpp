#pragma once

#include <functional>
#include <vector>

namespace midec {

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  bool diverged = false;  // partial sums exceeded the divergence threshold
};

/// Adaptive Simpson with Richardson correction. The interval is split into
/// `panels` equal pieces first so narrow peaks on wide domains are resolved.
/// Integration stops early (diverged = true, value = +inf) once the running
/// magnitude exceeds `divergence_threshold`.
QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                                  double abs_tol, int panels = 64,
                                  double divergence_threshold = 1e12);

/// Gauss-Hermite rule for the standard normal weight: sum_i w_i g(x_i)
/// approximates E[g(Z)], Z ~ N(0, 1). Nodes via Golub-Welsch.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussHermiteRule gauss_hermite_normal(int n);

}  // namespace midec
