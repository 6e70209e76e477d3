#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace isolab {

/// Adaptive Dormand–Prince 5(4) integrator for scalar equations with a fixed
/// end point: the last step is clamped so the integration lands on x_end
/// exactly. Accepted (x, y) pairs are appended to the table.
struct OdeResult {
  std::vector<double> x;
  std::vector<double> y;
  int steps = 0;
  int rejected = 0;
};

inline OdeResult integrate_rk45(const std::function<double(double, double)>& f, double x0,
                                double y0, double x_end, double rtol = 1e-10,
                                double atol = 1e-13) {
  static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static const double a21 = 1.0 / 5;
  static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                      a54 = -212.0 / 729;
  static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                      a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                      b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                      e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  const double dir = (x_end >= x0) ? 1.0 : -1.0;
  double x = x0, y = y0;
  double h = dir * std::max(1e-8, 1e-2 * std::abs(x_end - x0));
  OdeResult out;
  out.x.push_back(x);
  out.y.push_back(y);
  double k1 = f(x, y);
  const int max_steps = 2000000;
  while (dir * (x_end - x) > 0.0) {
    if (out.steps + out.rejected > max_steps)
      throw std::runtime_error("integrate_rk45: step limit exceeded");
    bool final_step = false;
    if (dir * (x + h - x_end) >= 0.0) {
      h = x_end - x;
      final_step = true;
    }
    const double k2 = f(x + c2 * h, y + h * a21 * k1);
    const double k3 = f(x + c3 * h, y + h * (a31 * k1 + a32 * k2));
    const double k4 = f(x + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const double k5 = f(x + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const double k6 = f(x + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const double ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const double k7 = f(x + h, ynew);
    const double err_raw =
        h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double sc = atol + rtol * std::max(std::abs(y), std::abs(ynew));
    const double err = std::abs(err_raw) / sc;
    if (err <= 1.0) {
      x = final_step ? x_end : x + h;
      y = ynew;
      k1 = k7;
      out.x.push_back(x);
      out.y.push_back(y);
      ++out.steps;
    } else {
      ++out.rejected;
    }
    const double fac = std::min(5.0, std::max(0.2, 0.9 * std::pow(err > 0 ? err : 1e-16, -0.2)));
    h *= fac;
    if (std::abs(h) < 1e-14 * std::max(1.0, std::abs(x)))
      throw std::runtime_error("integrate_rk45: step underflow");
  }
  return out;
}

}  // namespace isolab
