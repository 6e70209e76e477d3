#include "isolab/iso_mass.hpp"

#include <cmath>
#include <stdexcept>

#include "isolab/numerics.hpp"
#include "isolab/quadrature.hpp"
#include "isolab/surface.hpp"

namespace isolab {

namespace {

/// metric volume of the centered ball (outside the horizon when m > 0);
/// background part in closed radial quadrature, perturbation correction by
/// sphere x radial quadrature over its support
double ball_volume(const Metric& metric, double r) {
  const ManifoldSpec& spec = metric.spec();
  const int n = spec.n;
  double inner;
  double vol = 0.0;
  if (spec.m > 0.0) {
    inner = horizon_radius(spec);
    ManifoldSpec bare = spec;
    bare.perturbation = PerturbationSpec{};
    bare.translation = VecN{};
    vol = schwarzschild_annulus_volume(bare, inner, r);
  } else {
    inner = 0.0;
    vol = unit_sphere_area(n) * std::pow(r, static_cast<double>(n)) / n;
  }
  if (spec.pure_schwarzschild()) return vol;
  if (!spec.zonal() && n != 3)
    throw std::invalid_argument("ball_volume: n >= 4 requires a zonal metric");
  for (int k = 0; k < n; ++k)
    if (spec.translation[k] != 0.0)
      throw std::invalid_argument("ball_volume: centered exhaustions require a centered metric");

  // deviation of the volume element from the background, supported where the
  // envelope is active
  const double lo = std::max(inner, spec.perturbation.r0 * (1.0 - 1e-12));
  if (lo >= r) return vol;
  std::shared_ptr<SphereGrid> grid =
      spec.zonal() ? std::make_shared<SphereGrid>(SphereGrid::axisymmetric(n, 96, 8))
                   : std::make_shared<SphereGrid>(SphereGrid::full(32, 64, 8));
  ManifoldSpec bare = spec;
  bare.perturbation = PerturbationSpec{};
  const MetricField background(bare);
  MetricJet jet, jet0;
  const double correction = integrate_radial(
      [&](double rho) {
        double shell = 0.0;
        for (int p = 0; p < grid->node_count(); ++p) {
          VecN x{};
          const double theta = grid->theta(p), phi = grid->phi(p);
          if (grid->mode() == GridMode::Full2Sphere) {
            x[0] = rho * std::sin(theta) * std::cos(phi);
            x[1] = rho * std::sin(theta) * std::sin(phi);
            x[2] = rho * std::cos(theta);
          } else {
            x[0] = rho * std::cos(theta);
            x[1] = rho * std::sin(theta);
          }
          metric.eval(x, jet);
          background.eval(x, jet0);
          double det = 1.0, det0 = 1.0;
          {
            // determinant by elimination (small n)
            double a[kMaxDim][kMaxDim], b[kMaxDim][kMaxDim];
            for (int i = 0; i < n; ++i)
              for (int j = 0; j < n; ++j) {
                a[i][j] = jet.g[i][j];
                b[i][j] = jet0.g[i][j];
              }
            for (int c = 0; c < n; ++c) {
              det *= a[c][c];
              det0 *= b[c][c];
              for (int i = c + 1; i < n; ++i) {
                const double fa = a[i][c] / a[c][c];
                const double fb = b[i][c] / b[c][c];
                for (int j = c; j < n; ++j) {
                  a[i][j] -= fa * a[c][j];
                  b[i][j] -= fb * b[c][j];
                }
              }
            }
          }
          shell += grid->weight(p) * (std::sqrt(det) - std::sqrt(det0));
        }
        return shell * std::pow(rho, n - 1.0);
      },
      lo, r);
  return vol + correction;
}

/// metric area of the centered coordinate sphere
double sphere_area(const Metric& metric, double r) {
  const ManifoldSpec& spec = metric.spec();
  if (spec.pure_schwarzschild() && spec.translation == VecN{}) {
    if (spec.m == 0.0) return unit_sphere_area(spec.n) * std::pow(r, spec.n - 1.0);
    ManifoldSpec bare = spec;
    return sphere_area_schwarzschild(bare, r);
  }
  std::shared_ptr<SphereGrid> grid =
      spec.zonal() ? std::make_shared<SphereGrid>(SphereGrid::axisymmetric(spec.n, 96, 8))
                   : std::make_shared<SphereGrid>(SphereGrid::full(32, 64, 8));
  std::vector<double> zero(grid->basis_size(), 0.0);
  const GraphSurface s = build_surface(grid, metric, r, zero);
  return induced_area(s);
}

double quasi_mass(double V, double A) {
  return 2.0 / A * (V - std::pow(A, 1.5) / (6.0 * std::sqrt(M_PI)));
}

double tail_windows_max(const std::vector<double>& radii, const std::vector<double>& values) {
  double best = -1e300;
  for (std::size_t start = 0; start + 3 <= radii.size(); ++start) {
    std::vector<double> r(radii.begin() + start, radii.end());
    std::vector<double> v(values.begin() + start, values.end());
    best = std::max(best, richardson_limit(r, v, 2));
  }
  if (best == -1e300) best = richardson_limit(radii, values, std::min<int>(2, radii.size() - 1));
  return best;
}

}  // namespace

std::vector<ProfilePoint> schwarzschild_profile(double m, int n,
                                                const std::vector<double>& volumes) {
  ManifoldSpec spec;
  spec.n = n;
  spec.m = m;
  const double omega = unit_sphere_area(n);
  std::vector<ProfilePoint> out;
  for (double V : volumes) {
    if (!(V > 0.0)) throw std::domain_error("schwarzschild_profile: volumes must be positive");
    ProfilePoint pt;
    pt.V = V;
    if (m == 0.0) {
      pt.r = std::pow(n * V / omega, 1.0 / n);
      pt.A = omega * std::pow(pt.r, n - 1.0);
    } else {
      const double rh = horizon_radius(spec);
      double lo = rh, hi = rh + std::pow(n * V / omega, 1.0 / n) + rh + 1.0;
      while (schwarzschild_annulus_volume(spec, rh, hi) < V) hi *= 2.0;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (schwarzschild_annulus_volume(spec, rh, mid) < V ? lo : hi) = mid;
        if (hi - lo < 1e-14 * hi) break;
      }
      pt.r = 0.5 * (lo + hi);
      pt.A = sphere_area_schwarzschild(spec, pt.r);
    }
    out.push_back(pt);
  }
  return out;
}

MassEstimate iso_mass_exhaustion(const Metric& metric, const std::vector<double>& radii) {
  if (metric.dim() != 3)
    throw std::invalid_argument("iso_mass_exhaustion: defined for n = 3 only");
  if (radii.size() < 2) throw std::invalid_argument("iso_mass_exhaustion: need a radius ladder");
  for (std::size_t i = 0; i + 1 < radii.size(); ++i)
    if (!(radii[i] < radii[i + 1]))
      throw std::invalid_argument("iso_mass_exhaustion: radii must increase");
  MassEstimate est;
  est.radii = radii;
  for (double r : radii) {
    const double V = ball_volume(metric, r);
    const double A = sphere_area(metric, r);
    est.quasi_mass.push_back(quasi_mass(V, A));
  }
  est.estimate = richardson_limit(radii, est.quasi_mass, 2);
  return est;
}

MassEstimate modified_iso_mass(const std::vector<ProfilePoint>& profile) {
  if (profile.size() < 3)
    throw std::invalid_argument("modified_iso_mass: need at least three profile points");
  MassEstimate est;
  est.modified = true;
  for (const auto& pt : profile) {
    est.radii.push_back(pt.r);
    est.quasi_mass.push_back(quasi_mass(pt.V, pt.A));
  }
  est.estimate = tail_windows_max(est.radii, est.quasi_mass);
  return est;
}

VolumeLowerBoundCheck volume_lower_bound_replay(const std::vector<ProfilePoint>& profile,
                                                double m_tilde) {
  VolumeLowerBoundCheck check;
  for (const auto& pt : profile) {
    if (quasi_mass(pt.V, pt.A) <= 0.5 * m_tilde) continue;
    ++check.points_checked;
    const double margin = pt.V - 0.25 * m_tilde * pt.A;
    if (margin < check.worst_margin) check.worst_margin = margin;
    if (margin < 0.0) check.holds = false;
  }
  return check;
}

}  // namespace isolab
