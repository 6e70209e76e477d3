#pragma once

#include <iosfwd>
#include <limits>
#include <vector>

#include "isolab/manifold.hpp"

namespace isolab {

/// Volume-preserving chart data for the background of mass m in dimension n,
/// anchored at the coordinate sphere S_r. The interior tables (w on (s0, c))
/// are represented but never constructed here; only s >= c is used.
struct ChartSolution {
  double m = 0.0;
  int n = 3;
  double r = 0.0;
  double alpha = 0.0;
  double c = 0.0;
  double volume_gap = 0.0;  // V0
  std::vector<double> s;    // table abscissae on [c, s_max]
  std::vector<double> u;    // u(s) along the table
  std::vector<double> s_interior;  // empty by default
  std::vector<double> w_interior;  // empty by default
  double s0 = std::numeric_limits<double>::quiet_NaN();  // unset
};

struct MatchingResult {
  double alpha = 0.0;
  double c = 0.0;
};

/// Closed-form solution of the two matching equations:
/// cone sphere area  alpha c^{n-1} omega = A(S_r),
/// cone mean curvature alpha (n-1)/c = H(S_r).
/// Requires r > r_h so that H(S_r) > 0.
MatchingResult solve_matching(double m, int n, double r);

/// Integrates the rotationally invariant isometry in the radius-matching
/// gauge: d(rho)/ds = s^{n-1} / (a(rho) phi^{2/(n-2)}) with rho(c) = r and
/// a(rho) = phi^{2(n-1)/(n-2)} rho^{n-1}; then u(s) = a(rho(s)) / s^{n-1}.
/// The two defining conditions are sphere-area matching and radial arclength
/// matching.
ChartSolution exterior_chart_ode(double m, int n, double r, double alpha, double c, double s_max,
                                 double rtol = 1e-10);

/// u(s_target) by a fresh integration (exact endpoint landing).
double chart_u_at(double m, int n, double r, double s_target, double rtol = 1e-10);

/// V0 = (background volume of B_r minus the horizon ball) - omega c^n / n.
double volume_gap(double m, int n, double r, double alpha, double c);

/// solve_matching + ODE table + volume gap in one call
ChartSolution build_chart(double m, int n, double r, double s_max_factor = 1e3,
                          double rtol = 1e-10);

struct ChartDiagnostics {
  double u_at_c_error = 0.0;       // |u(c) - alpha|
  double monotonicity_violation = 0.0;
  double u_at_smax_gap = 0.0;      // |u(s_max) - 1|
  double sandwich_violation = 0.0; // most negative eigenvalue margin of the cone sandwich
};

ChartDiagnostics validate_chart(const ChartSolution& chart);

/// Off-center competitor measurement: Omega is the union of the ball
/// B_{r'}(p) with the horizon ball, r' fixed by matching the enclosed volume
/// (outside the horizon) to that of B_r. Areas and volumes are measured in
/// the conformal metric by Gauss quadrature.
struct OffCenterCheck {
  double tau = 0.0;
  double eta = 0.0;
  double r = 0.0;        // volume-matched centered radius
  double r_prime = 0.0;  // competitor ball radius
  double p_norm = 0.0;   // competitor center offset
  double volume = 0.0;
  double area_boundary = 0.0;
  double area_sphere = 0.0;
  double deficit = 0.0;
  double ratio = 0.0;  // deficit / (eta m (1 - 1/tau)^2 r); 0 when eta = 0
  bool disjoint_configuration = false;
};

OffCenterCheck effective_deficit(double m, int n, double r, double p_norm, double tau);

/// two-column table with a JSON header line
void write_chart(std::ostream& os, const ChartSolution& chart);

}  // namespace isolab
