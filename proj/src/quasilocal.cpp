#include "isolab/quasilocal.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "isolab/metric.hpp"
#include "isolab/numerics.hpp"
#include "isolab/quadrature.hpp"

namespace isolab {

bool RotProfile::verify(int samples, double tol) {
  area_nondecreasing = true;
  scalar_nonnegative = true;
  double prev = area(a + (b - a) / (samples + 1.0));
  double scale = std::abs(prev);
  for (int i = 2; i <= samples; ++i) {
    const double r = a + (b - a) * i / (samples + 1.0);
    const double A = area(r);
    scale = std::max(scale, std::abs(A));
    if (A < prev - tol * scale) area_nondecreasing = false;
    if (scalar_curvature(r) < -tol) scalar_nonnegative = false;
    prev = A;
  }
  verified = true;
  return area_nondecreasing && scalar_nonnegative;
}

RotProfile schwarzschild_rot_profile(const ManifoldSpec& spec, double a, double b) {
  if (!spec.pure_schwarzschild())
    throw std::invalid_argument("schwarzschild_rot_profile: perturbation present");
  RotProfile p;
  p.n = spec.n;
  p.a = a;
  p.b = b;
  p.provenance = "schwarzschild";
  const ManifoldSpec s = spec;
  p.area = [s](double r) { return sphere_area_schwarzschild(s, r); };
  p.mean_curvature = [s](double r) { return sphere_mean_curvature_schwarzschild(s, r); };
  p.scalar_curvature = [](double) { return 0.0; };
  return p;
}

RotProfile euclidean_rot_profile(int n, double a, double b) {
  RotProfile p;
  p.n = n;
  p.a = a;
  p.b = b;
  p.provenance = "euclidean";
  const double omega = unit_sphere_area(n);
  p.area = [n, omega](double r) { return omega * std::pow(r, n - 1.0); };
  p.mean_curvature = [n](double r) { return (n - 1.0) / r; };
  p.scalar_curvature = [](double) { return 0.0; };
  return p;
}

RotProfile cone_rot_profile(int n, double alpha, double a, double b) {
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw std::invalid_argument("cone_rot_profile: alpha must lie in (0, 1)");
  RotProfile p;
  p.n = n;
  p.a = a;
  p.b = b;
  p.provenance = "cone";
  const double omega = unit_sphere_area(n);
  p.area = [n, alpha, omega](double s) { return alpha * omega * std::pow(s, n - 1.0); };
  p.mean_curvature = [n, alpha](double s) { return alpha * (n - 1.0) / s; };
  p.scalar_curvature = [n, alpha](double s) {
    return (n - 1.0) * (n - 2.0) / (s * s) * (std::pow(alpha, -2.0 / (n - 1.0)) - alpha * alpha);
  };
  return p;
}

RotProfile table_rot_profile(int n, const std::vector<double>& r, const std::vector<double>& A,
                             const std::vector<double>& H, const std::vector<double>& R) {
  if (r.size() < 2 || r.size() != A.size() || r.size() != H.size() || r.size() != R.size())
    throw std::invalid_argument("table_rot_profile: inconsistent columns");
  RotProfile p;
  p.n = n;
  p.a = r.front();
  p.b = r.back();
  p.provenance = "user";
  auto interp = [r](std::vector<double> v) {
    return [r, v = std::move(v)](double x) {
      if (x <= r.front()) return v.front();
      if (x >= r.back()) return v.back();
      std::size_t lo = 0, hi = r.size() - 1;
      while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        (r[mid] <= x ? lo : hi) = mid;
      }
      const double t = (x - r[lo]) / (r[lo + 1] - r[lo]);
      return (1.0 - t) * v[lo] + t * v[lo + 1];
    };
  };
  p.area = interp(A);
  p.mean_curvature = interp(H);
  p.scalar_curvature = interp(R);
  return p;
}

double hawking_mass(int n, double A, double H, bool normalized) {
  if (!(A > 0.0)) throw std::domain_error("hawking_mass: area must be positive");
  const double omega = unit_sphere_area(n);
  const double kappa = normalized ? 0.5 : 1.0;
  const double area_radius_pow = std::pow(A / omega, (n - 2.0) / (n - 1.0));
  const double ratio =
      std::pow(A, 2.0 / (n - 1.0)) * H * H / (std::pow(omega, 2.0 / (n - 1.0)) * sq(n - 1.0));
  return kappa * area_radius_pow * (1.0 - ratio);
}

HawkingProfileResult hawking_profile(const RotProfile& profile, const std::vector<double>& radii,
                                     bool normalized) {
  if (!profile.verified)
    throw std::logic_error("hawking_profile: profile flags not verified; call verify() first");
  if (!profile.area_nondecreasing || !profile.scalar_nonnegative)
    throw std::invalid_argument(
        "hawking_profile: profile fails the area-monotone / R >= 0 hypotheses");
  HawkingProfileResult out;
  out.radii = radii;
  out.masses.reserve(radii.size());
  for (double r : radii) {
    if (r < profile.a || r > profile.b)
      throw std::domain_error("hawking_profile: radius outside the profile interval");
    out.masses.push_back(
        hawking_mass(profile.n, profile.area(r), profile.mean_curvature(r), normalized));
  }
  for (std::size_t i = 0; i + 1 < out.masses.size(); ++i)
    out.max_violation = std::max(out.max_violation, out.masses[i] - out.masses[i + 1]);
  return out;
}

void write_rot_profile(std::ostream& os, const RotProfile& profile,
                       const std::vector<double>& radii) {
  os << "# r A H R\n";
  os.precision(17);
  for (double r : radii)
    os << r << ' ' << profile.area(r) << ' ' << profile.mean_curvature(r) << ' '
       << profile.scalar_curvature(r) << '\n';
}

RotProfile read_rot_profile(std::istream& is, int n) {
  std::vector<double> r, A, H, R;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    double vr, va, vh, vR;
    if (ls >> vr >> va >> vh >> vR) {
      r.push_back(vr);
      A.push_back(va);
      H.push_back(vh);
      R.push_back(vR);
    }
  }
  return table_rot_profile(n, r, A, H, R);
}

}  // namespace isolab
