#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace isolab {

/// Deterministic pseudo-random stream for property tests and sampling.
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  double uniform() { return (next() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  /// log-uniform on [a, b], a, b > 0
  double log_uniform(double a, double b) {
    return std::exp(uniform(std::log(a), std::log(b)));
  }
};

/// C^4 polynomial transition: 0 for t <= 0, 1 for t >= 1, first four
/// derivatives vanish at both knots.
inline double smoothstep_c4(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double t2 = t * t, t4 = t2 * t2, t5 = t4 * t;
  return t5 * (126.0 + t * (-420.0 + t * (540.0 + t * (-315.0 + t * 70.0))));
}
inline double smoothstep_c4_d1(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double u = 1.0 - t;
  const double t2 = t * t, u2 = u * u;
  return 630.0 * t2 * t2 * u2 * u2;
}
inline double smoothstep_c4_d2(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double u = 1.0 - t;
  return 2520.0 * t * t * t * u * u * u * (1.0 - 2.0 * t);
}

/// Richardson extrapolation of f(r) -> limit as r -> infinity for samples on
/// an increasing radius ladder, assuming an error expansion in integer powers
/// of 1/r. `order` stages are performed (defaults to 2 per the harness).
inline double richardson_limit(const std::vector<double>& radii,
                               const std::vector<double>& values, int order = 2) {
  const std::size_t n = radii.size();
  if (n != values.size() || n == 0) throw std::invalid_argument("richardson: bad ladder");
  std::vector<std::vector<double>> T(1, values);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 / radii[i];
  const int stages = std::min<int>(order, static_cast<int>(n) - 1);
  for (int k = 1; k <= stages; ++k) {
    std::vector<double> row(n - k);
    for (std::size_t i = 0; i < n - k; ++i) {
      // Neville step for polynomial in 1/r through (x_i..x_{i+k}) evaluated at 0
      row[i] = (x[i] * T[k - 1][i + 1] - x[i + k] * T[k - 1][i]) / (x[i] - x[i + k]);
    }
    T.push_back(std::move(row));
  }
  return T.back().back();
}

/// Least-squares slope of log|y| against log x; used for decay-rate fits.
struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;  // in log space
};

inline SlopeFit loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 2) throw std::invalid_argument("loglog_slope: need >= 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(std::abs(y[i]) > 0.0))
      throw std::invalid_argument("loglog_slope: non-positive data");
    const double lx = std::log(x[i]), ly = std::log(std::abs(y[i]));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  SlopeFit f;
  const double d = n * sxx - sx * sx;
  f.slope = (n * sxy - sx * sy) / d;
  f.intercept = (sy - f.slope * sx) / n;
  return f;
}

inline double sq(double x) { return x * x; }

}  // namespace isolab
