#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>

#include "isolab/cmc.hpp"
#include "isolab/metric.hpp"
#include "isolab/spectrum.hpp"

using namespace isolab;

namespace {

std::shared_ptr<MetricField> make_metric(int n, double m) {
  ManifoldSpec s;
  s.n = n;
  s.m = m;
  return std::make_shared<MetricField>(s);
}

}  // namespace

TEST_CASE("laplace spectrum of the round sphere reproduces l(l+n-2)") {
  // full 2-sphere, unit radius: eigenvalues l(l+1) with multiplicity 2l+1
  auto metric = make_metric(3, 0.0);
  auto grid = std::make_shared<SphereGrid>(SphereGrid::full(24, 48, 8));
  std::vector<double> zero(grid->basis_size(), 0.0);
  GraphSurface s = build_surface(grid, *metric, 1.0, zero);
  const std::vector<double> eig = laplace_spectrum(s, 25);
  int idx = 0;
  for (int l = 0; l <= 4; ++l)
    for (int mult = 0; mult < 2 * l + 1; ++mult, ++idx) {
      const double expect = l * (l + 1.0);
      if (l == 0)
        CHECK(std::abs(eig[idx]) < 1e-10);
      else
        CHECK(std::abs(eig[idx] - expect) < 1e-6 * expect);
    }

  // axisymmetric zonal sector on S^{n-1}
  for (int n : {3, 4, 5}) {
    auto mn = make_metric(n, 0.0);
    auto ag = std::make_shared<SphereGrid>(SphereGrid::axisymmetric(n, 64, 24));
    std::vector<double> za(ag->basis_size(), 0.0);
    GraphSurface sa = build_surface(ag, *mn, 1.0, za);
    const std::vector<double> eiga = laplace_spectrum(sa, 6);
    for (int l = 1; l <= 4; ++l) {
      const double expect = l * (l + n - 2.0);
      CHECK(std::abs(eiga[l] - expect) < 1e-6 * expect);
    }
  }
}

TEST_CASE("Euclidean round sphere: translational kernel and mu0 = -2/R^2") {
  auto metric = make_metric(3, 0.0);
  auto grid = std::make_shared<SphereGrid>(SphereGrid::full(24, 48, 8));
  std::vector<double> zero(grid->basis_size(), 0.0);
  const double R = 10.0;
  GraphSurface s = build_surface(grid, *metric, R, zero);
  const SpectrumReport rep = jacobi_spectrum(s, 5);
  CHECK(rep.mu0 == doctest::Approx(-2.0 / (R * R)).epsilon(1e-10));
  CHECK(std::abs(rep.lambda1) < 1e-10 / (R * R));
  CHECK(rep.laplace_first_nonzero == doctest::Approx(2.0 / (R * R)).epsilon(1e-10));
  CHECK(rep.mu0 <= rep.lambda1);
  CHECK(rep.constraint_residual < 1e-10);
  const double scale = 2.0 / (R * R);
  CHECK(rep.assembly_asymmetry < 1e-12 * scale * induced_area(s));
}

TEST_CASE("background spheres: lambda1 and mu0 match the mass predictions") {
  auto metric = make_metric(3, 2.0);
  auto grid = std::make_shared<SphereGrid>(SphereGrid::axisymmetric(3, 128, 40));
  std::vector<double> zero(grid->basis_size(), 0.0);
  for (double R : {100.0, 1000.0}) {
    GraphSurface s = build_surface(grid, *metric, R, zero);
    const SpectrumReport rep = jacobi_spectrum(s, 4);
    const double phi = 1.0 + 1.0 / R;
    // exact round geometry: lambda1 = n(n-1) m / (R^n phi^{2n/(n-2)})
    CHECK(rep.lambda1 ==
          doctest::Approx(rep.predicted_lambda1 / std::pow(phi, 6.0)).epsilon(1e-8));
    // mu0 = -H^2/(n-1) - Rc(nu,nu); the asymptotic prediction is approached
    // at an O(1/R) rate, so the window tightens with the radius
    const double m_term = 2.0 * 2.0 / std::pow(R, 3.0);
    CHECK(std::abs(rep.mu0 - rep.predicted_mu0) < (R >= 1000.0 ? 0.05 : 0.10) * m_term);
    CHECK(rep.mu0 <= rep.lambda1);
  }
  // at R = 1000 the normalized ratio sits inside the acceptance window
  GraphSurface s = build_surface(grid, *metric, 1000.0, zero);
  const SpectrumReport rep = jacobi_spectrum(s, 4);
  CHECK(rep.lambda1_ratio > 0.95);
  CHECK(rep.lambda1_ratio < 1.05);
}

TEST_CASE("cross-check between grid levels flags a converged spectrum") {
  auto metric = make_metric(3, 2.0);
  auto grid = std::make_shared<SphereGrid>(SphereGrid::axisymmetric(3, 64, 20));
  std::vector<double> zero(grid->basis_size(), 0.0);
  GraphSurface s = build_surface(grid, *metric, 50.0, zero);
  const SpectrumReport rep = jacobi_spectrum(s, 4, true);
  CHECK(rep.cross_checked);
  CHECK(rep.converged_between_levels);
}

TEST_CASE("solved CMC sphere in a perturbed metric is strictly stable") {
  ManifoldSpec spec;
  spec.n = 3;
  spec.m = 2.0;
  spec.gamma = 1.0;
  spec.perturbation.sigma = 0.1;
  spec.perturbation.pattern = 4;
  spec.perturbation.parity = Parity::Even;
  const MetricField target(spec);
  auto background = make_metric(3, 2.0);
  auto grid = std::make_shared<SphereGrid>(SphereGrid::axisymmetric(3, 96, 32));
  const double R = 60.0;
  const double Ht = sphere_mean_curvature_schwarzschild(background->spec(), R);
  ContinuationReport crep;
  GraphSurface s = continuation_path(grid, target, *background, R, Ht, &crep);
  REQUIRE(crep.completed);
  const SpectrumReport rep = jacobi_spectrum(s, 4);
  CHECK(rep.lambda1 > 0.0);             // volume preserving stability
  CHECK(rep.mu0 < 0.0);
  CHECK(rep.mu1 >= rep.lambda1 * 0.5);  // invertibility at the predicted scale
  CHECK(rep.lambda1_ratio > 0.8);
  CHECK(rep.lambda1_ratio < 1.2);
}
