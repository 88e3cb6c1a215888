#pragma once

// Reference computations that share no code path with the library.

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>

#include <Eigen/Dense>

namespace oracle {

inline double scalar_gaussian_mi(double var0, double vark, double cross) {
  const double rho2 = cross * cross / (var0 * vark);
  return -0.5 * std::log1p(-rho2);
}

struct ScalarJoint {
  double var0;
  double vark;
  double cross;
};

// Iterates x <- (1 - eta a) x + sqrt(2 eta) z one step at a time.
inline ScalarJoint ula_recursion(double alpha, double eta, std::int64_t k, double c0sq) {
  ScalarJoint j{c0sq, c0sq, c0sq};
  const double g = 1 - eta * alpha;
  for (std::int64_t i = 0; i < k; ++i) {
    j.vark = g * g * j.vark + 2 * eta;
    j.cross *= g;
  }
  return j;
}

// y = x + sqrt(eta) z, then x | y ~ N(y / (1 + a eta), eta / (1 + a eta)).
inline ScalarJoint proximal_recursion(double alpha, double eta, std::int64_t k, double c0sq) {
  ScalarJoint j{c0sq, c0sq, c0sq};
  const double s = 1 + alpha * eta;
  for (std::int64_t i = 0; i < k; ++i) {
    j.vark = (j.vark + eta) / (s * s) + eta / s;
    j.cross /= s;
  }
  return j;
}

// RK4 on dv/dt = -2 a v + 2, dc/dt = -a c.
inline ScalarJoint ou_moments_rk4(double alpha, double t, double c0sq, int steps = 20000) {
  double v = c0sq, c = c0sq;
  const double h = t / steps;
  auto fv = [&](double x) { return -2 * alpha * x + 2; };
  auto fc = [&](double x) { return -alpha * x; };
  for (int i = 0; i < steps; ++i) {
    const double k1 = fv(v), k2 = fv(v + h / 2 * k1), k3 = fv(v + h / 2 * k2), k4 = fv(v + h * k3);
    v += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    const double l1 = fc(c), l2 = fc(c + h / 2 * l1), l3 = fc(c + h / 2 * l2), l4 = fc(c + h * l3);
    c += h / 6 * (l1 + 2 * l2 + 2 * l3 + l4);
  }
  return {c0sq, v, c};
}

inline double npdf(double x, double m, double var) {
  return std::exp(-(x - m) * (x - m) / (2 * var)) / std::sqrt(2 * std::numbers::pi * var);
}

// Midpoint rule; spectrally accurate for smooth integrands with Gaussian tails.
inline double riemann(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = 0;
  for (int i = 0; i < n; ++i) s += f(a + (i + 0.5) * h);
  return s * h;
}

// int int q(x) q(y) Phi(p(x, y) / (q(x) q(y))) on a square grid for a
// centered scalar Gaussian joint.
inline double phi_mi_grid_2d(const std::function<double(double)>& phi, double var0, double vark,
                             double cross, double half_width = 12.0, int n = 1200) {
  const double det = var0 * vark - cross * cross;
  const double h0 = 2 * half_width * std::sqrt(var0) / n;
  const double hk = 2 * half_width * std::sqrt(vark) / n;
  double s = 0;
  for (int i = 0; i < n; ++i) {
    const double x = -half_width * std::sqrt(var0) + (i + 0.5) * h0;
    const double qx = npdf(x, 0, var0);
    for (int j = 0; j < n; ++j) {
      const double y = -half_width * std::sqrt(vark) + (j + 0.5) * hk;
      const double qy = npdf(y, 0, vark);
      const double quad = (vark * x * x - 2 * cross * x * y + var0 * y * y) / det;
      const double p = std::exp(-0.5 * quad) / (2 * std::numbers::pi * std::sqrt(det));
      const double q = qx * qy;
      if (q < 1e-300) continue;
      s += q * phi(p / q);
    }
  }
  return s * h0 * hk;
}

inline double power_iteration_opnorm(const Eigen::MatrixXd& m, int iters = 2000) {
  const Eigen::MatrixXd g = m.transpose() * m;
  Eigen::VectorXd v = Eigen::VectorXd::Ones(g.cols());
  for (int i = 0; i < iters; ++i) {
    Eigen::VectorXd w = g * v;
    const double n = w.norm();
    if (n == 0) return 0;
    v = w / n;
  }
  return std::sqrt(v.dot(g * v));
}

}  // namespace oracle
