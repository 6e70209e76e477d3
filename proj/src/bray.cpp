#include "isolab/bray.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "isolab/metric.hpp"
#include "isolab/numerics.hpp"
#include "isolab/ode.hpp"
#include "isolab/quadrature.hpp"

namespace isolab {

namespace {

ManifoldSpec bare_spec(double m, int n) {
  ManifoldSpec s;
  s.n = n;
  s.m = m;
  return s;
}

double phi_of(double m, int n, double rho) { return 1.0 + 0.5 * m * std::pow(rho, 2.0 - n); }

/// a(rho) = phi^{2(n-1)/(n-2)} rho^{n-1}: the sphere-area radical
double area_radical(double m, int n, double rho) {
  return std::pow(phi_of(m, n, rho), 2.0 * (n - 1) / (n - 2.0)) * std::pow(rho, n - 1.0);
}

}  // namespace

MatchingResult solve_matching(double m, int n, double r) {
  if (!(m > 0.0)) throw std::domain_error("solve_matching: mass must be positive");
  const ManifoldSpec s = bare_spec(m, n);
  if (!(r > horizon_radius(s)))
    throw std::domain_error("solve_matching: need r > r_h for positive mean curvature");
  const double A = sphere_area_schwarzschild(s, r);
  const double H = sphere_mean_curvature_schwarzschild(s, r);
  if (!(H > 0.0)) throw std::domain_error("solve_matching: mean curvature not positive");
  const double omega = unit_sphere_area(n);
  const double alpha_n = (A / omega) * std::pow(H / (n - 1.0), n - 1.0);
  MatchingResult out;
  out.alpha = std::pow(alpha_n, 1.0 / n);
  out.c = out.alpha * (n - 1.0) / H;
  return out;
}

ChartSolution exterior_chart_ode(double m, int n, double r, double alpha, double c, double s_max,
                                 double rtol) {
  if (!(s_max > c)) throw std::invalid_argument("exterior_chart_ode: s_max must exceed c");
  ChartSolution chart;
  chart.m = m;
  chart.n = n;
  chart.r = r;
  chart.alpha = alpha;
  chart.c = c;
  auto rhs = [m, n](double s, double rho) {
    return std::pow(s, n - 1.0) / (area_radical(m, n, rho) * std::pow(phi_of(m, n, rho), 2.0 / (n - 2.0)));
  };
  const OdeResult sol = integrate_rk45(rhs, c, r, s_max, rtol, 1e-13);
  chart.s = sol.x;
  chart.u.resize(sol.y.size());
  for (std::size_t i = 0; i < sol.y.size(); ++i)
    chart.u[i] = area_radical(m, n, sol.y[i]) / std::pow(sol.x[i], n - 1.0);
  for (std::size_t i = 0; i + 1 < chart.u.size(); ++i)
    if (chart.u[i + 1] < chart.u[i] - 1e-9 * std::abs(chart.u[i]))
      throw std::runtime_error("exterior_chart_ode: non-monotone u along the table");
  return chart;
}

double chart_u_at(double m, int n, double r, double s_target, double rtol) {
  const MatchingResult mc = solve_matching(m, n, r);
  if (s_target == mc.c) return mc.alpha;
  if (s_target < mc.c)
    throw std::domain_error("chart_u_at: target below c lies in the interior region");
  auto rhs = [m, n](double s, double rho) {
    return std::pow(s, n - 1.0) /
           (area_radical(m, n, rho) * std::pow(phi_of(m, n, rho), 2.0 / (n - 2.0)));
  };
  const OdeResult sol = integrate_rk45(rhs, mc.c, r, s_target, rtol, 1e-13);
  return area_radical(m, n, sol.y.back()) / std::pow(s_target, n - 1.0);
}

double volume_gap(double m, int n, double r, double /*alpha*/, double c) {
  const ManifoldSpec s = bare_spec(m, n);
  const double rh = horizon_radius(s);
  const double v_schw = schwarzschild_annulus_volume(s, rh, r);
  const double v_cone = unit_sphere_area(n) * std::pow(c, static_cast<double>(n)) / n;
  const double gap = v_schw - v_cone;
  if (!(gap > 0.0)) throw std::runtime_error("volume_gap: non-positive gap flags a chart error");
  return gap;
}

ChartSolution build_chart(double m, int n, double r, double s_max_factor, double rtol) {
  const MatchingResult mc = solve_matching(m, n, r);
  ChartSolution chart = exterior_chart_ode(m, n, r, mc.alpha, mc.c, mc.c * s_max_factor, rtol);
  chart.volume_gap = volume_gap(m, n, r, mc.alpha, mc.c);
  return chart;
}

ChartDiagnostics validate_chart(const ChartSolution& chart) {
  ChartDiagnostics d;
  if (chart.u.empty()) return d;
  d.u_at_c_error = std::abs(chart.u.front() - chart.alpha);
  for (std::size_t i = 0; i + 1 < chart.u.size(); ++i)
    d.monotonicity_violation = std::max(d.monotonicity_violation, chart.u[i] - chart.u[i + 1]);
  d.u_at_smax_gap = std::abs(chart.u.back() - 1.0);
  // cone sandwich: alpha^2 g_c <= ds^2 + s^2 g_S <= u^{-2/(n-1)} g_c, with
  // g_c = u^{-2} ds^2 + u^{2/(n-1)} s^2 g_S; all forms diagonal, so compare
  // the coefficient margins directly.
  const double nn = chart.n - 1.0;
  for (std::size_t i = 0; i < chart.u.size(); ++i) {
    const double u = chart.u[i];
    const double a2 = chart.alpha * chart.alpha;
    const double lower_ds = 1.0 - a2 / (u * u);
    const double lower_sphere = 1.0 - a2 * std::pow(u, 2.0 / nn);
    const double upper_ds = std::pow(u, -2.0 / nn) / (u * u) - 1.0;
    const double upper_sphere = std::pow(u, -2.0 / nn) * std::pow(u, 2.0 / nn) - 1.0;
    for (double margin : {lower_ds, lower_sphere, upper_ds, upper_sphere})
      d.sandwich_violation = std::max(d.sandwich_violation, -margin);
  }
  return d;
}

namespace {

/// All angular quadratures below run in the angle itself (not its cosine) so
/// the sin^{n-2} measure stays analytic in every dimension.

/// conformal volume of B_{r'}(p) when disjoint from the horizon ball:
/// quadrature in ball-centered spherical coordinates (smooth integrand)
double ball_volume_disjoint(double m, int n, double p, double rp) {
  const double omega_sub = unit_sphere_area(n - 1);
  const QuadRule qb = gauss_legendre(64);  // beta on [0, pi]
  const QuadRule qs = gauss_legendre(64);  // radial per panel
  const int panels = 8;
  double vol = 0.0;
  for (int ib = 0; ib < 64; ++ib) {
    const double beta = 0.5 * M_PI * (1.0 + qb.nodes[ib]);
    const double cb = std::cos(beta);
    const double wb = 0.5 * M_PI * qb.weights[ib] * std::pow(std::sin(beta), n - 2.0);
    double inner = 0.0;
    for (int pnl = 0; pnl < panels; ++pnl) {
      const double s0 = rp * pnl / panels, s1 = rp * (pnl + 1) / panels;
      const double mid = 0.5 * (s0 + s1), half = 0.5 * (s1 - s0);
      for (int is = 0; is < 64; ++is) {
        const double s = mid + half * qs.nodes[is];
        const double rad = std::sqrt(p * p + s * s + 2.0 * p * s * cb);
        inner += half * qs.weights[is] * std::pow(phi_of(m, n, rad), 2.0 * n / (n - 2.0)) *
                 std::pow(s, n - 1.0);
      }
    }
    vol += wb * inner;
  }
  return omega_sub * vol;
}

/// conformal volume of B_{r'}(p) \ B_{rh}(0) when the horizon ball is
/// contained; origin-centered coordinates, rho from rh to the ray exit
double ball_volume_containing(double m, int n, double p, double rp, double rh) {
  const double omega_sub = unit_sphere_area(n - 1);
  const QuadRule qt = gauss_legendre(96);
  const QuadRule qs = gauss_legendre(96);
  double vol = 0.0;
  for (int it = 0; it < 96; ++it) {
    const double theta = 0.5 * M_PI * (1.0 + qt.nodes[it]);
    const double ct = std::cos(theta);
    const double wt = 0.5 * M_PI * qt.weights[it] * std::pow(std::sin(theta), n - 2.0);
    const double disc = rp * rp - p * p * (1.0 - ct * ct);
    const double rho_max = p * ct + std::sqrt(disc);
    const double mid = 0.5 * (rh + rho_max), half = 0.5 * (rho_max - rh);
    double inner = 0.0;
    for (int is = 0; is < 96; ++is) {
      const double rho = mid + half * qs.nodes[is];
      inner += half * qs.weights[is] * std::pow(phi_of(m, n, rho), 2.0 * n / (n - 2.0)) *
               std::pow(rho, n - 1.0);
    }
    vol += wt * inner;
  }
  return omega_sub * vol;
}

/// conformal area of the portion of the sphere bd B_{r'}(p) with |x| > cut
/// (cut <= 0 integrates the whole sphere)
double sphere_area_outside(double m, int n, double p, double rp, double cut) {
  const double omega_sub = unit_sphere_area(n - 1);
  // |x|^2 = p^2 + rp^2 + 2 p rp cos(beta); area element rp^{n-1} phi^{2(n-1)/(n-2)}
  auto segment = [&](double beta0, double beta1) {
    if (!(beta1 > beta0)) return 0.0;
    const QuadRule q = gauss_legendre(96);
    const double mid = 0.5 * (beta0 + beta1), half = 0.5 * (beta1 - beta0);
    double area = 0.0;
    for (int i = 0; i < 96; ++i) {
      const double beta = mid + half * q.nodes[i];
      const double cb = std::cos(beta);
      const double rad = std::sqrt(p * p + rp * rp + 2.0 * p * rp * cb);
      area += half * q.weights[i] * std::pow(std::sin(beta), n - 2.0) *
              std::pow(phi_of(m, n, rad), 2.0 * (n - 1) / (n - 2.0));
    }
    return omega_sub * std::pow(rp, n - 1.0) * area;
  };
  if (p == 0.0) {
    if (cut > 0.0) return (rp > cut) ? segment(0.0, M_PI) : 0.0;
    return segment(0.0, M_PI);
  }
  if (cut <= 0.0) return segment(0.0, M_PI);
  const double cos_cut = (cut * cut - p * p - rp * rp) / (2.0 * p * rp);
  if (cos_cut >= 1.0) return 0.0;                  // whole sphere inside the cut radius
  if (cos_cut <= -1.0) return segment(0.0, M_PI);  // whole sphere outside
  return segment(0.0, std::acos(cos_cut));
}

}  // namespace

OffCenterCheck effective_deficit(double m, int n, double r, double p_norm, double tau) {
  if (!(tau > 1.0)) throw std::invalid_argument("effective_deficit: tau must exceed 1");
  const ManifoldSpec spec = bare_spec(m, n);
  const double rh = horizon_radius(spec);
  if (!(r > rh)) throw std::domain_error("effective_deficit: r must exceed the horizon radius");
  const double v_target = schwarzschild_annulus_volume(spec, rh, r);

  OffCenterCheck out;
  out.tau = tau;
  out.r = r;
  out.p_norm = p_norm;
  out.volume = v_target;

  // choose the configuration: the competitor sphere must not cross the
  // horizon ball, so either it contains it or it is disjoint from it
  auto vol_containing = [&](double rp) { return ball_volume_containing(m, n, p_norm, rp, rh); };
  auto vol_disjoint = [&](double rp) { return ball_volume_disjoint(m, n, p_norm, rp); };

  auto bisect = [&](auto&& f, double lo, double hi) {
    double flo = f(lo) - v_target, fhi = f(hi) - v_target;
    if (flo > 0.0 || fhi < 0.0) return -1.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fm = f(mid) - v_target;
      if (fm > 0.0)
        hi = mid;
      else
        lo = mid;
      if ((hi - lo) < 1e-13 * hi) break;
    }
    return 0.5 * (lo + hi);
  };

  double rp = -1.0;
  bool disjoint = false;
  if (p_norm < r) {
    // containing configuration: need rp > p + rh
    rp = bisect(vol_containing, p_norm + rh * (1.0 + 1e-9), 4.0 * r + p_norm);
    if (rp > 0.0 && !(rp > p_norm + rh)) rp = -1.0;
  }
  if (rp < 0.0 && p_norm > 2.0 * rh) {
    // disjoint configuration: need rp < p - rh
    rp = bisect(vol_disjoint, 1e-6 * r, p_norm - rh * (1.0 + 1e-9));
    if (rp > 0.0) disjoint = true;
  }
  if (rp < 0.0)
    throw std::runtime_error(
        "effective_deficit: unsupported configuration (competitor sphere would cross the horizon "
        "ball)");

  out.r_prime = rp;
  out.disjoint_configuration = disjoint;
  const double horizon_area = sphere_area_schwarzschild(spec, rh);
  out.area_boundary = sphere_area_outside(m, n, p_norm, rp, -1.0) + (disjoint ? horizon_area : 0.0);
  out.area_sphere = sphere_area_schwarzschild(spec, r);
  out.deficit = out.area_boundary - out.area_sphere;
  // eta from the definition: boundary area beyond radius tau*r over area(S_r);
  // the horizon component always lies inside B_{tau r}
  const double outside = sphere_area_outside(m, n, p_norm, rp, tau * r);
  out.eta = outside / out.area_sphere;
  out.ratio =
      (out.eta > 0.0) ? out.deficit / (out.eta * m * sq(1.0 - 1.0 / tau) * r) : 0.0;
  return out;
}

void write_chart(std::ostream& os, const ChartSolution& chart) {
  os.precision(17);
  os << "{\"m\": " << chart.m << ", \"n\": " << chart.n << ", \"r\": " << chart.r
     << ", \"alpha\": " << chart.alpha << ", \"c\": " << chart.c
     << ", \"V0\": " << chart.volume_gap << "}\n";
  os << "# s u\n";
  for (std::size_t i = 0; i < chart.s.size(); ++i) os << chart.s[i] << ' ' << chart.u[i] << '\n';
}

}  // namespace isolab
