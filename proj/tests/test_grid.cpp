#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "isolab/numerics.hpp"
#include "isolab/quadrature.hpp"
#include "isolab/sphere_grid.hpp"

using namespace isolab;

TEST_CASE("quadrature weights sum to the sphere area") {
  const SphereGrid full = SphereGrid::full(24, 48, 10);
  double s = 0.0;
  for (int p = 0; p < full.node_count(); ++p) s += full.weight(p);
  CHECK(s == doctest::Approx(4.0 * M_PI).epsilon(1e-13));
  for (int n : {3, 4, 5, 6}) {
    const SphereGrid axi = SphereGrid::axisymmetric(n, 64, 20);
    double sa = 0.0;
    for (int p = 0; p < axi.node_count(); ++p) sa += axi.weight(p);
    CHECK(sa == doctest::Approx(unit_sphere_area(n)).epsilon(1e-13));
  }
}

TEST_CASE("analyze inverts synthesize on the basis") {
  SplitMix64 rng(11);
  const SphereGrid full = SphereGrid::full(24, 48, 10);
  std::vector<double> c(full.basis_size());
  for (auto& x : c) x = rng.uniform(-1.0, 1.0);
  GridFields f;
  full.synthesize(c, f);
  const std::vector<double> back = full.analyze(f.f);
  for (int i = 0; i < full.basis_size(); ++i)
    CHECK(back[i] == doctest::Approx(c[i]).epsilon(1e-11).scale(1.0));

  for (int n : {3, 5}) {
    const SphereGrid axi = SphereGrid::axisymmetric(n, 48, 16);
    std::vector<double> ca(axi.basis_size());
    for (auto& x : ca) x = rng.uniform(-1.0, 1.0);
    GridFields fa;
    axi.synthesize(ca, fa);
    const std::vector<double> backa = axi.analyze(fa.f);
    for (int i = 0; i < axi.basis_size(); ++i)
      CHECK(backa[i] == doctest::Approx(ca[i]).epsilon(1e-11).scale(1.0));
  }
}

TEST_CASE("basis value tables agree with synthesize") {
  const SphereGrid full = SphereGrid::full(16, 32, 6);
  for (int idx : {0, 3, 10, 24}) {
    std::vector<double> c(full.basis_size(), 0.0);
    c[idx] = 1.0;
    GridFields f;
    full.synthesize(c, f);
    for (int p = 0; p < full.node_count(); p += 7) {
      CHECK(f.f[p] == doctest::Approx(full.psi(p, idx)).epsilon(1e-13).scale(1e-12));
      CHECK(f.ft[p] == doctest::Approx(full.psi_dtheta(p, idx)).epsilon(1e-13).scale(1e-12));
      CHECK(f.fp[p] == doctest::Approx(full.psi_dphi(p, idx)).epsilon(1e-13).scale(1e-12));
    }
  }
}

TEST_CASE("spectral derivatives satisfy the round Laplace-Beltrami eigenrelation") {
  // full 2-sphere: f_tt + cot f_t + f_pp / sin^2 = -l(l+1) f
  const SphereGrid full = SphereGrid::full(24, 48, 8);
  for (int idx = 0; idx < full.basis_size(); ++idx) {
    const int l = full.basis_l(idx);
    std::vector<double> c(full.basis_size(), 0.0);
    c[idx] = 1.0;
    GridFields f;
    full.synthesize(c, f);
    for (int p = 0; p < full.node_count(); p += 11) {
      const double st = std::sin(full.theta(p)), ct = std::cos(full.theta(p));
      const double lap = f.ftt[p] + ct / st * f.ft[p] + f.fpp[p] / (st * st);
      CHECK(lap == doctest::Approx(-l * (l + 1.0) * f.f[p]).epsilon(1e-10).scale(1e-9));
    }
  }
  // axisymmetric on S^{n-1}: f_tt + (n-2) cot f_t = -l(l+n-2) f
  for (int n : {3, 4, 5}) {
    const SphereGrid axi = SphereGrid::axisymmetric(n, 48, 12);
    for (int l = 0; l <= 12; ++l) {
      std::vector<double> c(axi.basis_size(), 0.0);
      c[l] = 1.0;
      GridFields f;
      axi.synthesize(c, f);
      for (int p = 0; p < axi.node_count(); p += 5) {
        const double st = std::sin(axi.theta(p)), ct = std::cos(axi.theta(p));
        const double lap = f.ftt[p] + (n - 2.0) * ct / st * f.ft[p];
        CHECK(lap == doctest::Approx(-l * (l + n - 2.0) * f.f[p]).epsilon(1e-9).scale(1e-2));
        CHECK(axi.round_laplace_eigenvalue(l) == doctest::Approx(-l * (l + n - 2.0)));
      }
    }
  }
}

TEST_CASE("smooth fields round-trip at spectral accuracy") {
  const SphereGrid full = SphereGrid::full(48, 96, 20);
  std::vector<double> nodal(full.node_count());
  for (int p = 0; p < full.node_count(); ++p) {
    const double ct = std::cos(full.theta(p)), st = std::sin(full.theta(p));
    nodal[p] = std::exp(0.5 * ct) * (1.0 + 0.1 * st * std::cos(full.phi(p)));
  }
  GridFields f;
  full.synthesize(full.analyze(nodal), f);
  double worst = 0.0;
  for (int p = 0; p < full.node_count(); ++p) worst = std::max(worst, std::abs(f.f[p] - nodal[p]));
  CHECK(worst < 1e-10);
}
