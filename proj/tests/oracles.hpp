#pragma once

// Independent reference computations used only by the tests. None of these
// call into the library's numerical kernels.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

/// Cyclic Jacobi rotations for a symmetric matrix; eigenvalues ascending.
inline Eigen::VectorXd jacobi_eigenvalues(Eigen::MatrixXd a, int sweeps = 100) {
  const auto n = a.rows();
  for (int s = 0; s < sweeps; ++s) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-30) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
      }
    }
  }
  Eigen::VectorXd ev = a.diagonal();
  std::sort(ev.data(), ev.data() + ev.size());
  return ev;
}

/// l1-ball projection by bisection on the soft threshold.
inline Eigen::VectorXd l1_projection_bisect(const Eigen::VectorXd& x, double radius) {
  if (x.lpNorm<1>() <= radius) return x;
  double lo = 0.0, hi = x.cwiseAbs().maxCoeff();
  for (int it = 0; it < 200; ++it) {
    const double tau = 0.5 * (lo + hi);
    const double mass = (x.cwiseAbs().array() - tau).max(0.0).sum();
    (mass > radius ? lo : hi) = tau;
  }
  const double tau = 0.5 * (lo + hi);
  Eigen::VectorXd out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    out[i] = std::copysign(std::max(std::abs(x[i]) - tau, 0.0), x[i]);
  }
  return out;
}

/// Central finite-difference gradient.
inline Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& x, double h = 1e-6) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Eigen::VectorXd a = x, b = x;
    a[i] += h;
    b[i] -= h;
    g[i] = (f(a) - f(b)) / (2.0 * h);
  }
  return g;
}

/// Composite Simpson CDF of exp(-f) on [lo, hi] evaluated at x.
inline double simpson_cdf(const std::function<double(double)>& f, double lo, double hi, double x,
                          int panels = 200000) {
  auto integrate = [&](double a, double b) {
    if (b <= a) return 0.0;
    const int m = std::max(2, static_cast<int>(panels * (b - a) / (hi - lo)) / 2 * 2);
    const double h = (b - a) / m;
    double s = std::exp(-f(a)) + std::exp(-f(b));
    for (int i = 1; i < m; ++i) s += (i % 2 ? 4.0 : 2.0) * std::exp(-f(a + i * h));
    return s * h / 3.0;
  };
  return integrate(lo, std::min(x, hi)) / integrate(lo, hi);
}

/// Quantile by bisection on the Simpson CDF.
inline double simpson_quantile(const std::function<double(double)>& f, double lo, double hi,
                               double u) {
  double a = lo, b = hi;
  for (int it = 0; it < 60; ++it) {
    const double m = 0.5 * (a + b);
    (simpson_cdf(f, lo, hi, m, 20000) < u ? a : b) = m;
  }
  return 0.5 * (a + b);
}

}  // namespace oracle
