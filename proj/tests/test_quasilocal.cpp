#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "isolab/metric.hpp"
#include "isolab/quasilocal.hpp"

using namespace isolab;

TEST_CASE("normalized mass is constant equal to m on centered background spheres") {
  for (int n : {3, 4, 5, 6}) {
    ManifoldSpec s;
    s.n = n;
    s.m = 2.0;
    const double rh = horizon_radius(s);
    double lo = 1e300, hi = -1e300;
    for (double f : {1.2, 2.0, 5.0, 10.0, 15.0}) {
      const double r = f * rh;
      const double mass = hawking_mass(n, sphere_area_schwarzschild(s, r),
                                       sphere_mean_curvature_schwarzschild(s, r));
      lo = std::min(lo, mass);
      hi = std::max(hi, mass);
    }
    CHECK((hi - lo) / s.m < 1e-10);
    CHECK(hi == doctest::Approx(s.m).epsilon(1e-10));
  }
}

TEST_CASE("raw formula reports twice the mass") {
  ManifoldSpec s;
  s.n = 4;
  s.m = 1.3;
  const double r = 3.0;
  const double raw = hawking_mass(s.n, sphere_area_schwarzschild(s, r),
                                  sphere_mean_curvature_schwarzschild(s, r), false);
  CHECK(raw == doctest::Approx(2.0 * s.m).epsilon(1e-12));
}

TEST_CASE("Euclidean spheres have zero mass") {
  for (int n : {3, 5}) {
    const double omega = unit_sphere_area(n);
    for (double r : {0.5, 3.0, 100.0}) {
      const double A = omega * std::pow(r, n - 1.0);
      const double H = (n - 1.0) / r;
      CHECK(std::abs(hawking_mass(n, A, H)) < 1e-12 * std::pow(r, n - 2.0));
    }
  }
}

TEST_CASE("horizon sphere: H = 0, A = 64 pi gives mass 2") {
  CHECK(hawking_mass(3, 64.0 * M_PI, 0.0) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("profile masses: background constant, cone monotone, Euclidean zero") {
  ManifoldSpec s;
  s.n = 3;
  s.m = 2.0;
  std::vector<double> radii;
  for (int i = 0; i <= 16; ++i) radii.push_back(1.5 + 0.5 * i);

  RotProfile schw = schwarzschild_rot_profile(s, 1.1, 12.0);
  CHECK(schw.verify());
  const auto res = hawking_profile(schw, radii);
  for (double mass : res.masses) CHECK(mass == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(res.max_violation < 1e-10);

  for (int n : {3, 4, 5}) {
    RotProfile cone = cone_rot_profile(n, 0.9, 0.5, 50.0);
    CHECK(cone.verify());
    std::vector<double> svals;
    for (int i = 1; i <= 20; ++i) svals.push_back(0.6 + 2.0 * i);
    const auto cr = hawking_profile(cone, svals);
    CHECK(cr.max_violation <= 0.0);
    // closed form: kappa alpha^{(n-2)/(n-1)} (1 - alpha^{2n/(n-1)}) s^{n-2}
    const double alpha = 0.9;
    for (std::size_t i = 0; i < svals.size(); ++i) {
      const double expect = 0.5 * std::pow(alpha, (n - 2.0) / (n - 1.0)) *
                            (1.0 - std::pow(alpha, 2.0 * n / (n - 1.0))) *
                            std::pow(svals[i], n - 2.0);
      CHECK(cr.masses[i] == doctest::Approx(expect).epsilon(1e-12));
    }
  }

  RotProfile flat = euclidean_rot_profile(3, 0.5, 100.0);
  CHECK(flat.verify());
  const auto fr = hawking_profile(flat, radii);
  for (double mass : fr.masses) CHECK(std::abs(mass) < 1e-10);
}

TEST_CASE("profiles must be verified and must satisfy the hypotheses") {
  RotProfile flat = euclidean_rot_profile(3, 0.5, 10.0);
  CHECK_THROWS_AS(hawking_profile(flat, {1.0, 2.0}), std::logic_error);

  // area-decreasing profile fails the flags
  RotProfile bad = euclidean_rot_profile(3, 0.5, 10.0);
  bad.area = [](double r) { return 4.0 * M_PI / r; };
  CHECK_FALSE(bad.verify());
  CHECK_THROWS_AS(hawking_profile(bad, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("profile table round-trip through the plain-text format") {
  RotProfile cone = cone_rot_profile(3, 0.8, 1.0, 20.0);
  std::vector<double> radii;
  for (int i = 0; i <= 40; ++i) radii.push_back(1.0 + i * 19.0 / 40.0);
  std::stringstream ss;
  write_rot_profile(ss, cone, radii);
  RotProfile back = read_rot_profile(ss, 3);
  CHECK(back.verify());
  CHECK(cone.verify());
  for (double r : {2.0, 7.7, 18.0}) {
    CHECK(back.area(r) == doctest::Approx(cone.area(r)).epsilon(0.02));
    CHECK(back.mean_curvature(r) == doctest::Approx(cone.mean_curvature(r)).epsilon(0.02));
  }
  const auto a = hawking_profile(cone, {2.0, 5.0, 11.0});
  const auto b = hawking_profile(back, {2.0, 5.0, 11.0});
  for (std::size_t i = 0; i < a.masses.size(); ++i)
    CHECK(a.masses[i] == doctest::Approx(b.masses[i]).epsilon(1e-2));
}
