#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "isolab/curvature.hpp"
#include "isolab/metric.hpp"
#include "isolab/numerics.hpp"

using namespace isolab;

namespace {

VecN radial_point(SplitMix64& rng, int n, double r) {
  VecN x{};
  double norm = 0.0;
  for (int k = 0; k < n; ++k) {
    x[k] = rng.uniform(-1.0, 1.0);
    norm += x[k] * x[k];
  }
  for (int k = 0; k < n; ++k) x[k] *= r / std::sqrt(norm);
  return x;
}

}  // namespace

TEST_CASE("kulkarni-nomizu of the identity with itself") {
  const int n = 4;
  Sym2 id;
  for (int i = 0; i < n; ++i) id.a[i][i] = 1.0;
  const Tensor4 c = kulkarni_nomizu(id, id, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double expect = 2.0 * ((j == k ? 1.0 : 0.0) * (i == l ? 1.0 : 0.0) -
                                       (i == k ? 1.0 : 0.0) * (j == l ? 1.0 : 0.0));
          CHECK(c.a[i][j][k][l] == doctest::Approx(expect).epsilon(1e-15));
        }
}

TEST_CASE("kulkarni-nomizu has curvature-tensor symmetries for random inputs") {
  SplitMix64 rng(5);
  const int n = 5;
  for (int trial = 0; trial < 5; ++trial) {
    Sym2 a, b;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) {
        a.a[i][j] = a.a[j][i] = rng.uniform(-1.0, 1.0);
        b.a[i][j] = b.a[j][i] = rng.uniform(-1.0, 1.0);
      }
    const Tensor4 c = kulkarni_nomizu(a, b, n);
    CHECK(curvature_symmetry_residual(c, n) < 1e-14);
  }
}

TEST_CASE("closed-form and finite-difference curvature agree for the background") {
  SplitMix64 rng(99);
  for (int n : {3, 4, 5}) {
    ManifoldSpec s;
    s.n = n;
    s.m = 2.0;
    const MetricField metric(s);
    double scale = 0.0, worst = 0.0;
    for (int t = 0; t < 30; ++t) {
      const double r = rng.log_uniform(2.0, 100.0);
      const VecN x = radial_point(rng, n, r);
      const CurvatureSample closed = curvature_schwarzschild_closed(s, x);
      const CurvatureSample fd = curvature_finite_difference(metric, x);
      const double ref = tensor4_max_abs(closed.rm, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l)
              worst = std::max(worst,
                               std::abs(closed.rm.a[i][j][k][l] - fd.rm.a[i][j][k][l]) / ref);
      scale = std::max(scale, ref);
      // scalar curvature of the background vanishes
      CHECK(std::abs(fd.scalar) < 1e-8 * ref);
      CHECK(closed.scalar == 0.0);
    }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("closed-form Ricci is the trace of the closed-form Riemann tensor") {
  ManifoldSpec s;
  s.n = 4;
  s.m = 1.5;
  const MetricField metric(s);
  VecN x{3.0, -1.0, 2.0, 0.5};
  const CurvatureSample c = curvature_schwarzschild_closed(s, x);
  MetricJet jet;
  metric.eval(x, jet);
  double ginv[kMaxDim][kMaxDim];
  detail::invert_small(jet.g, ginv, s.n);
  for (int j = 0; j < s.n; ++j)
    for (int k = 0; k < s.n; ++k) {
      double tr = 0.0;
      for (int i = 0; i < s.n; ++i)
        for (int l = 0; l < s.n; ++l) tr += ginv[i][l] * c.rm.a[i][j][k][l];
      CHECK(tr == doctest::Approx(c.ricci.a[j][k]).epsilon(1e-11).scale(1e-8));
    }
}

TEST_CASE("Euclidean curvature vanishes") {
  ManifoldSpec s;
  s.n = 3;
  s.m = 0.0;
  const MetricField metric(s);
  VecN x{2.0, 1.0, -1.0};
  const CurvatureSample fd = curvature_finite_difference(metric, x);
  CHECK(tensor4_max_abs(fd.rm, 3) < 1e-14);
}

TEST_CASE("radial Ricci contraction at a frozen point") {
  // n = 3, m = 2, |x| = 2: Rc(nu, nu) = -(n-1)(n-2) m / (r^n phi^{2n/(n-2)})
  //                                   = -4 / 91.125 = -0.04389574759945...
  ManifoldSpec s;
  s.n = 3;
  s.m = 2.0;
  const MetricField metric(s);
  VecN x{2.0, 0.0, 0.0};
  const double expected = -4.0 / 91.125;
  for (auto method : {CurvatureMethod::ClosedForm, CurvatureMethod::FiniteDifference}) {
    const CurvatureSample c = curvature_at(metric, x, method);
    MetricJet jet;
    metric.eval(x, jet);
    // unit radial normal: nu = phi^{-2/(n-2)} e_1
    const double phi = 1.0 + 0.5 * s.m / 2.0;
    const double nu0 = std::pow(phi, -2.0 / (s.n - 2));
    const double rc_nn = c.ricci.a[0][0] * nu0 * nu0;
    CHECK(rc_nn == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("finite-difference curvature of a perturbed metric keeps tensor symmetries") {
  ManifoldSpec s;
  s.n = 3;
  s.m = 1.0;
  s.gamma = 0.8;
  s.perturbation.sigma = 0.05;
  s.perturbation.pattern = 3;
  s.perturbation.parity = Parity::Even;
  const MetricField metric(s);
  SplitMix64 rng(31);
  for (int t = 0; t < 5; ++t) {
    const VecN x = radial_point(rng, 3, rng.uniform(4.0, 12.0));
    const CurvatureSample c = curvature_finite_difference(metric, x);
    const double scale = std::max(tensor4_max_abs(c.rm, 3), 1e-30);
    CHECK(curvature_symmetry_residual(c.rm, 3) < 1e-6 * scale);
  }
}

TEST_CASE("curvature decomposition remainder is trace-free and vanishes for the background") {
  ManifoldSpec pure;
  pure.n = 4;
  pure.m = 2.0;
  const MetricField metric(pure);
  VecN x{3.0, 1.0, -2.0, 1.0};
  const CurvatureSample c = curvature_schwarzschild_closed(pure, x);
  MetricJet jet;
  metric.eval(x, jet);
  const WeylSplit w = weyl_remainder(c, jet);
  const double scale = tensor4_max_abs(c.rm, 4);
  // conformally flat and scalar flat: remainder (Weyl) vanishes entirely
  CHECK(tensor4_max_abs(w.weyl, 4) < 1e-10 * scale);
  CHECK(w.trace_residual < 1e-10 * scale);

  // perturbed metric: remainder no longer zero but still trace-free
  ManifoldSpec pert = pure;
  pert.perturbation.sigma = 0.05;
  pert.perturbation.pattern = 3;
  pert.perturbation.parity = Parity::Even;
  const MetricField mp(pert);
  const CurvatureSample cp = curvature_finite_difference(mp, x);
  MetricJet jp;
  mp.eval(x, jp);
  const WeylSplit wp = weyl_remainder(cp, jp);
  const double pscale = tensor4_max_abs(cp.rm, 4);
  CHECK(wp.trace_residual < 1e-5 * pscale);
}

TEST_CASE("finite-difference stencil respects the chart boundary") {
  ManifoldSpec s;
  s.n = 3;
  s.m = 2.0;
  const MetricField metric(s);
  VecN x{0.5005, 0.0, 0.0};
  CHECK_THROWS_AS(curvature_finite_difference(metric, x), std::domain_error);
}
