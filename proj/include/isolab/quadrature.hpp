#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "isolab/linalg.hpp"

namespace isolab {

struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss–Legendre rule on [-1, 1] via Newton iteration on P_n.
inline QuadRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n >= 1");
  QuadRule q;
  q.nodes.resize(n);
  q.weights.resize(n);
  const int mid = (n + 1) / 2;
  for (int i = 0; i < mid; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    q.nodes[i] = -x;
    q.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    q.weights[i] = w;
    q.weights[n - 1 - i] = w;
  }
  return q;
}

/// Gauss rule for the Gegenbauer weight (1-t^2)^a on [-1, 1], a > -1,
/// by Golub–Welsch on the monic Jacobi recurrence.
inline QuadRule gauss_gegenbauer(int n, double a) {
  if (n < 1) throw std::invalid_argument("gauss_gegenbauer: n >= 1");
  // mu0 = integral of the weight
  const double mu0 = std::sqrt(M_PI) * std::exp(std::lgamma(a + 1.0) - std::lgamma(a + 1.5));
  std::vector<double> diag(n, 0.0), sub(n - 1, 0.0);
  for (int k = 1; k < n; ++k) {
    // monic Jacobi(a, a) recurrence: beta_k = k(k+2a) / ((2k+2a+1)(2k+2a-1))
    const double bk =
        k * (k + 2.0 * a) / ((2.0 * k + 2.0 * a + 1.0) * (2.0 * k + 2.0 * a - 1.0));
    sub[k - 1] = std::sqrt(bk);
  }
  TridiagEig te = tridiag_eig(diag, sub);
  QuadRule q;
  q.nodes = te.values;
  q.weights.resize(n);
  for (int i = 0; i < n; ++i) q.weights[i] = mu0 * te.first_components[i] * te.first_components[i];
  return q;
}

/// Area of the unit sphere S^{n-1} in R^n.
inline double unit_sphere_area(int n) {
  return 2.0 * std::pow(M_PI, 0.5 * n) / std::exp(std::lgamma(0.5 * n));
}

/// Gauss–Legendre integration of f over [a, b] with a single m-node panel.
inline double integrate_gl(const std::function<double(double)>& f, double a, double b, int m = 64) {
  const QuadRule q = gauss_legendre(m);
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < m; ++i) s += q.weights[i] * f(c + h * q.nodes[i]);
  return s * h;
}

/// Radial quadrature on [a, b] split into logarithmic decades, 64 Gauss
/// nodes per decade (minimum one panel).
inline double integrate_radial(const std::function<double(double)>& f, double a, double b,
                               int nodes_per_decade = 64) {
  if (!(b > a) || !(a > 0.0)) throw std::invalid_argument("integrate_radial: need 0 < a < b");
  const double decades = std::log10(b / a);
  const int panels = std::max(1, static_cast<int>(std::ceil(decades)));
  double s = 0.0;
  double lo = std::log(a);
  const double step = (std::log(b) - std::log(a)) / panels;
  for (int p = 0; p < panels; ++p) {
    const double x0 = std::exp(lo + p * step);
    const double x1 = std::exp(lo + (p + 1) * step);
    s += integrate_gl(f, x0, x1, nodes_per_decade);
  }
  return s;
}

}  // namespace isolab
