#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>

#include "isolab/metric.hpp"
#include "isolab/numerics.hpp"
#include "isolab/surface.hpp"

using namespace isolab;

namespace {

std::shared_ptr<MetricField> make_metric(int n, double m) {
  ManifoldSpec s;
  s.n = n;
  s.m = m;
  return std::make_shared<MetricField>(s);
}

}  // namespace

TEST_CASE("round sphere in Euclidean space: H = (n-1)/R, umbilic") {
  auto metric = make_metric(3, 0.0);
  auto grid = std::make_shared<SphereGrid>(SphereGrid::full(24, 48, 10));
  std::vector<double> zero(grid->basis_size(), 0.0);
  const double R = 7.0;
  const GraphSurface s = build_surface(grid, *metric, R, zero);
  for (int p = 0; p < s.nodes(); p += 13) {
    CHECK(s.H[p] == doctest::Approx(2.0 / R).epsilon(1e-12));
    CHECK(std::abs(s.hring_sq[p]) < 1e-14 / (R * R));
    CHECK(s.omega_ray[p] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(s.mu_density[p] == doctest::Approx(R * R).epsilon(1e-12));
  }
  CHECK(induced_area(s) == doctest::Approx(4.0 * M_PI * R * R).epsilon(1e-12));
  CHECK(graph_norm_scaled(s) < 1e-14);
}

TEST_CASE("coordinate spheres in the background match the closed forms") {
  for (int n : {3, 4, 5}) {
    auto metric = make_metric(n, 2.0);
    const double R = 6.0;
    const double H_exact = sphere_mean_curvature_schwarzschild(metric->spec(), R);
    const double A_exact = sphere_area_schwarzschild(metric->spec(), R);
    const double phi = 1.0 + 0.5 * 2.0 * std::pow(R, 2.0 - n);
    const double omega_exact = std::pow(phi, 2.0 / (n - 2.0));

    std::shared_ptr<SphereGrid> grid;
    if (n == 3) {
      grid = std::make_shared<SphereGrid>(SphereGrid::full(24, 48, 10));
    } else {
      grid = std::make_shared<SphereGrid>(SphereGrid::axisymmetric(n, 48, 16));
    }
    std::vector<double> zero(grid->basis_size(), 0.0);
    const GraphSurface s = build_surface(grid, *metric, R, zero);
    for (int p = 0; p < s.nodes(); p += 7) {
      CHECK(s.H[p] == doctest::Approx(H_exact).epsilon(1e-10));
      CHECK(std::abs(s.hring_sq[p]) < 1e-16);
      CHECK(s.omega_ray[p] == doctest::Approx(omega_exact).epsilon(1e-12));
    }
    CHECK(induced_area(s) == doctest::Approx(A_exact).epsilon(1e-10));
  }
  // n = 3 axisymmetric route agrees with the full route node-for-node
  auto metric = make_metric(3, 2.0);
  auto gfull = std::make_shared<SphereGrid>(SphereGrid::full(32, 64, 12));
  auto gaxi = std::make_shared<SphereGrid>(SphereGrid::axisymmetric(3, 32, 12));
  std::vector<double> cf(gfull->basis_size(), 0.0), ca(gaxi->basis_size(), 0.0);
  // same zonal graph in both bases (identical normalization for m = 0 rows)
  auto zonal_index_full = [&](int l) {
    for (int idx = 0; idx < gfull->basis_size(); ++idx)
      if (gfull->basis_l(idx) == l) return idx;  // first entry of degree l is m = 0
    return -1;
  };
  cf[zonal_index_full(2)] = 0.4;
  ca[2] = 0.4;
  const GraphSurface sf = build_surface(gfull, *metric, 9.0, cf);
  const GraphSurface sa = build_surface(gaxi, *metric, 9.0, ca);
  for (int i = 0; i < 32; ++i) {
    const int pf = i * 64;  // phi = 0 column
    CHECK(sf.grid->theta(pf) == doctest::Approx(sa.grid->theta(i)).epsilon(1e-14));
    CHECK(sf.H[pf] == doctest::Approx(sa.H[i]).epsilon(1e-11));
    CHECK(sf.hring_sq[pf] == doctest::Approx(sa.hring_sq[i]).epsilon(1e-8).scale(1e-13));
    CHECK(sf.omega_ray[pf] == doctest::Approx(sa.omega_ray[i]).epsilon(1e-11));
    CHECK(sf.mu_density[pf] == doctest::Approx(sa.mu_density[i]).epsilon(1e-11));
  }
}

TEST_CASE("mean curvature linearization matches the Jacobi prediction") {
  // Euclidean round sphere: dH[v] = (l(l+1) - 2) v / R^2 for an l-harmonic v
  auto metric = make_metric(3, 0.0);
  auto grid = std::make_shared<SphereGrid>(SphereGrid::full(24, 48, 10));
  const double R = 5.0;
  const int l = 2;
  int idx2 = -1;
  for (int idx = 0; idx < grid->basis_size(); ++idx)
    if (grid->basis_l(idx) == l) {
      idx2 = idx;
      break;
    }
  const double eps = 1e-6 * R;
  std::vector<double> cp(grid->basis_size(), 0.0), cm(grid->basis_size(), 0.0);
  cp[idx2] = eps;
  cm[idx2] = -eps;
  const GraphSurface sp = build_surface(grid, *metric, R, cp);
  const GraphSurface sm = build_surface(grid, *metric, R, cm);
  std::vector<double> unit(grid->basis_size(), 0.0);
  unit[idx2] = 1.0;
  GridFields v;
  grid->synthesize(unit, v);
  const double factor = (l * (l + 1.0) - 2.0) / (R * R);
  for (int p = 0; p < sp.nodes(); p += 17) {
    const double dH = (sp.H[p] - sm.H[p]) / (2.0 * eps);
    CHECK(dH == doctest::Approx(factor * v.f[p]).epsilon(1e-6).scale(1e-8));
  }
}

TEST_CASE("dual slots carry exact derivatives of H through the kernel") {
  ManifoldSpec spec;
  spec.n = 3;
  spec.m = 1.0;
  spec.gamma = 0.8;
  spec.perturbation.sigma = 0.04;
  spec.perturbation.pattern = 2;
  spec.perturbation.parity = Parity::Even;
  const MetricField metric(spec);
  const double R = 8.0, theta = 1.1, phi = 0.7;
  const double u0 = 0.3, ut0 = 0.1, up0 = -0.05, utt0 = 0.02, utp0 = 0.01, upp0 = -0.03;

  NodeGeometry<Dual<6>> g = graph_node_full<Dual<6>>(
      metric, R, VecN{}, theta, phi, Dual<6>(u0, 0), Dual<6>(ut0, 1), Dual<6>(up0, 2),
      Dual<6>(utt0, 3), Dual<6>(utp0, 4), Dual<6>(upp0, 5));

  const double h = 1e-6;
  auto H_at = [&](double a, double b, double c, double d, double e, double f) {
    return graph_node_full<double>(metric, R, VecN{}, theta, phi, a, b, c, d, e, f).H;
  };
  const double base[6] = {u0, ut0, up0, utt0, utp0, upp0};
  for (int slot = 0; slot < 6; ++slot) {
    double args_p[6], args_m[6];
    for (int k = 0; k < 6; ++k) args_p[k] = args_m[k] = base[k];
    args_p[slot] += h;
    args_m[slot] -= h;
    const double fd = (H_at(args_p[0], args_p[1], args_p[2], args_p[3], args_p[4], args_p[5]) -
                       H_at(args_m[0], args_m[1], args_m[2], args_m[3], args_m[4], args_m[5])) /
                      (2.0 * h);
    CHECK(g.H.d[slot] == doctest::Approx(fd).epsilon(1e-4).scale(1e-8));
  }

  // axisymmetric kernel, n = 4
  ManifoldSpec spec4;
  spec4.n = 4;
  spec4.m = 1.5;
  const MetricField metric4(spec4);
  NodeGeometry<Dual<3>> g4 = graph_node_axi<Dual<3>>(metric4, 6.0, VecN{}, 0.9, Dual<3>(0.2, 0),
                                                     Dual<3>(0.05, 1), Dual<3>(-0.01, 2));
  auto H4 = [&](double a, double b, double c) {
    return graph_node_axi<double>(metric4, 6.0, VecN{}, 0.9, a, b, c).H;
  };
  const double base4[3] = {0.2, 0.05, -0.01};
  for (int slot = 0; slot < 3; ++slot) {
    double ap[3], am[3];
    for (int k = 0; k < 3; ++k) ap[k] = am[k] = base4[k];
    ap[slot] += h;
    am[slot] -= h;
    const double fd = (H4(ap[0], ap[1], ap[2]) - H4(am[0], am[1], am[2])) / (2.0 * h);
    CHECK(g4.H.d[slot] == doctest::Approx(fd).epsilon(1e-4).scale(1e-8));
  }
}

TEST_CASE("ambient curvature fields on background coordinate spheres") {
  for (int n : {3, 4}) {
    auto metric = make_metric(n, 2.0);
    const double R = 10.0;
    std::shared_ptr<SphereGrid> grid =
        (n == 3) ? std::make_shared<SphereGrid>(SphereGrid::full(16, 32, 6))
                 : std::make_shared<SphereGrid>(SphereGrid::axisymmetric(n, 32, 10));
    std::vector<double> zero(grid->basis_size(), 0.0);
    GraphSurface s = build_surface(grid, *metric, R, zero);
    attach_ambient_curvature(s);
    const double phi = 1.0 + std::pow(R, 2.0 - n);
    const double rc_expected =
        -(n - 1.0) * (n - 2.0) * 2.0 / (std::pow(R, n) * std::pow(phi, 2.0 * n / (n - 2.0)));
    for (int p = 0; p < s.nodes(); p += 9) {
      CHECK(s.rc_nn[p] == doctest::Approx(rc_expected).epsilon(1e-10));
      // tangential slots of Rm against the normal vanish on centered spheres
      CHECK(s.rmnu_norm[p] < 1e-12 * std::abs(rc_expected) * R);
      CHECK(s.rm_norm[p] < 20.0 * 2.0 / std::pow(R, n));
      // class-membership sanity: (n-1)/2 <= |H R| <= 2(n-1)
      const double HR = std::abs(s.H[p] * R);
      CHECK(HR >= 0.5 * (n - 1.0));
      CHECK(HR <= 2.0 * (n - 1.0));
    }
  }
}

TEST_CASE("translated sphere graph has the right centroid and area") {
  auto metric = make_metric(3, 0.0);
  auto grid = std::make_shared<SphereGrid>(SphereGrid::full(24, 48, 10));
  std::vector<double> zero(grid->basis_size(), 0.0);
  VecN center{1.0, -2.0, 0.5};
  const GraphSurface s = build_surface(grid, *metric, 4.0, zero, center);
  const VecN c = euclidean_centroid(s);
  for (int k = 0; k < 3; ++k) CHECK(c[k] == doctest::Approx(center[k]).epsilon(1e-12).scale(1e-12));
  CHECK(euclidean_area(s) == doctest::Approx(4.0 * M_PI * 16.0).epsilon(1e-12));
}

TEST_CASE("degenerate embeddings are rejected") {
  auto metric = make_metric(3, 0.0);
  auto grid = std::make_shared<SphereGrid>(SphereGrid::full(16, 32, 6));
  std::vector<double> c(grid->basis_size(), 0.0);
  c[0] = -5.0 * std::sqrt(4.0 * M_PI);  // u = -5 everywhere: rho = R - 5 < 0 for R = 4
  CHECK_THROWS_AS(build_surface(grid, *metric, 4.0, c), std::runtime_error);
}
