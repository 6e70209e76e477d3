#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "isolab/curvature.hpp"
#include "isolab/manifold.hpp"
#include "isolab/metric.hpp"
#include "isolab/numerics.hpp"

using namespace isolab;

namespace {

ManifoldSpec schwarzschild(int n, double m) {
  ManifoldSpec s;
  s.n = n;
  s.m = m;
  return s;
}

ManifoldSpec perturbed(int n, double m, double gamma, int pattern, double sigma) {
  ManifoldSpec s;
  s.n = n;
  s.m = m;
  s.gamma = gamma;
  s.perturbation.sigma = sigma;
  s.perturbation.pattern = pattern;
  s.perturbation.parity = pattern_traits(pattern).parity;
  s.perturbation.r0 = 2.0;
  s.perturbation.width = 2.0;
  return s;
}

}  // namespace

TEST_CASE("horizon radius") {
  CHECK(horizon_radius(schwarzschild(3, 2.0)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(horizon_radius(schwarzschild(4, 0.5)) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(horizon_radius(schwarzschild(5, 2.0)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(horizon_radius(schwarzschild(3, 0.0)), std::domain_error);
}

TEST_CASE("coordinate sphere area") {
  CHECK(sphere_area_schwarzschild(schwarzschild(3, 0.0), 1.0) ==
        doctest::Approx(4.0 * M_PI).epsilon(1e-14));
  // phi(1) = 2 at m = 2, n = 3: area = 2^4 * 4 pi = 64 pi
  CHECK(sphere_area_schwarzschild(schwarzschild(3, 2.0), 1.0) ==
        doctest::Approx(64.0 * M_PI).epsilon(1e-14));
  // asymptotic flatness: ratio to 4 pi r^2 -> 1
  for (double r : {1e4, 1e6}) {
    const double ratio = sphere_area_schwarzschild(schwarzschild(3, 2.0), r) / (4.0 * M_PI * r * r);
    CHECK(std::abs(ratio - 1.0) < 5.0 / r);
  }
}

TEST_CASE("coordinate sphere mean curvature and first-variation oracle") {
  CHECK(sphere_mean_curvature_schwarzschild(schwarzschild(3, 2.0), 1.0) ==
        doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
  CHECK(sphere_mean_curvature_schwarzschild(schwarzschild(3, 0.0), 2.0) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sphere_mean_curvature_schwarzschild(schwarzschild(3, 2.0), 2.0) ==
        doctest::Approx(4.0 / 27.0).epsilon(1e-14));

  // H = A'(r) / (A(r) phi^{2/(n-2)}): the area first-variation identity
  for (int n : {3, 4, 5}) {
    const ManifoldSpec s = schwarzschild(n, 1.3);
    for (double r : {2.0, 5.0, 40.0}) {
      const double h = 1e-5 * r;
      const double dA = (sphere_area_schwarzschild(s, r + h) - sphere_area_schwarzschild(s, r - h)) /
                        (2.0 * h);
      const double phi = 1.0 + 0.5 * s.m * std::pow(r, 2.0 - n);
      const double H_fd = dA / (sphere_area_schwarzschild(s, r) * std::pow(phi, 2.0 / (n - 2)));
      CHECK(sphere_mean_curvature_schwarzschild(s, r) == doctest::Approx(H_fd).epsilon(1e-8));
    }
  }
}

TEST_CASE("metric jet derivatives agree with finite differences") {
  SplitMix64 rng(123);
  for (int pattern : {0, 1, 2, 3, 4, 5, 6, 7}) {
    for (int n : {3, 5}) {
      ManifoldSpec s = perturbed(n, 1.7, 0.7, pattern, 0.05);
      s.translation[0] = 0.3;
      const MetricField metric(s);
      for (int trial = 0; trial < 4; ++trial) {
        VecN x{};
        const double r = rng.uniform(3.0, 8.0);  // inside the active envelope region
        double norm = 0.0;
        for (int k = 0; k < n; ++k) {
          x[k] = rng.uniform(-1.0, 1.0);
          norm += x[k] * x[k];
        }
        for (int k = 0; k < n; ++k) x[k] *= r / std::sqrt(norm);
        MetricJet jet;
        metric.eval(x, jet);
        const double h = 1e-5;
        for (int d = 0; d < n; ++d) {
          VecN xp = x, xm = x;
          xp[d] += h;
          xm[d] -= h;
          MetricJet jp, jm;
          metric.eval(xp, jp);
          metric.eval(xm, jm);
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
              const double fd = (jp.g[i][j] - jm.g[i][j]) / (2.0 * h);
              CHECK(jet.dg[d][i][j] == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
              const double fd2 = (jp.dg[d][i][j] - jm.dg[d][i][j]) / (2.0 * h);
              CHECK(jet.d2g[d][d][i][j] == doctest::Approx(fd2).epsilon(1e-5).scale(1.0));
            }
        }
      }
    }
  }
}

TEST_CASE("dual-lifted jet carries position derivatives") {
  const MetricField metric(perturbed(3, 2.0, 1.0, 2, 0.03));
  VecN x{4.0, 1.0, -2.0};
  MetricJet jet;
  metric.eval(x, jet);
  std::array<Dual<2>, kMaxDim> xd{};
  for (int k = 0; k < 3; ++k) xd[k] = Dual<2>(x[k]);
  xd[0].d[0] = 1.0;  // slot 0 follows x_0
  xd[2].d[1] = 1.0;  // slot 1 follows x_2
  MetricJet1<2> j1;
  metric_eval_dual(metric, xd, j1);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      CHECK(j1.g[i][j].v == doctest::Approx(jet.g[i][j]).epsilon(1e-14));
      CHECK(j1.g[i][j].d[0] == doctest::Approx(jet.dg[0][i][j]).epsilon(1e-12).scale(1e-6));
      CHECK(j1.g[i][j].d[1] == doctest::Approx(jet.dg[2][i][j]).epsilon(1e-12).scale(1e-6));
      CHECK(j1.dg[1][i][j].d[0] == doctest::Approx(jet.d2g[0][1][i][j]).epsilon(1e-12).scale(1e-6));
    }
}

TEST_CASE("perturbation decay envelopes hold on a log-spaced grid") {
  for (int pattern : {0, 1, 2, 3, 4, 5, 6, 7}) {
    const double gamma = 0.6;
    const ManifoldSpec s = perturbed(3, 1.0, gamma, pattern, 0.1);
    const MetricField metric(s);
    const int n = s.n;
    double c0 = 0.0, c1 = 0.0, c2 = 0.0;
    for (int k = 0; k < 24; ++k) {
      const double r = std::pow(10.0, 0.0 + 3.0 * k / 23.0);  // r in [1, 1000]
      VecN x{};
      x[0] = r * 0.36;
      x[1] = r * 0.48;
      x[2] = r * 0.8;
      double h[kMaxDim][kMaxDim], dh[kMaxDim][kMaxDim][kMaxDim],
          d2h[kMaxDim][kMaxDim][kMaxDim][kMaxDim];
      metric.perturbation_only(x, h, dh, d2h);
      double nh = 0.0, ndh = 0.0, nd2h = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          nh = std::max(nh, std::abs(h[i][j]));
          for (int a = 0; a < n; ++a) {
            ndh = std::max(ndh, std::abs(dh[a][i][j]));
            for (int b = 0; b < n; ++b) nd2h = std::max(nd2h, std::abs(d2h[a][b][i][j]));
          }
        }
      c0 = std::max(c0, nh * std::pow(r, n - 2 + gamma));
      c1 = std::max(c1, ndh * std::pow(r, n - 1 + gamma));
      c2 = std::max(c2, nd2h * std::pow(r, n + gamma));
    }
    // bounded decay constants (finite and not absurdly large)
    CHECK(c0 < 50.0);
    CHECK(c1 < 500.0);
    CHECK(c2 < 5000.0);
    if (pattern != 6) CHECK(c0 > 0.0);  // tails are active far out
  }
}

TEST_CASE("metric symmetry and positive definiteness at random points") {
  SplitMix64 rng(2024);
  std::vector<ManifoldSpec> specs = {schwarzschild(3, 2.0), schwarzschild(5, 0.5),
                                     perturbed(3, 1.0, 1.0, 3, 0.05),
                                     perturbed(4, 2.0, 0.5, 1, 0.05)};
  specs.push_back(schwarzschild(3, 0.0));  // Euclidean
  for (const auto& s : specs) {
    const MetricField metric(s);
    const int n = s.n;
    const int samples = 2000;
    for (int t = 0; t < samples; ++t) {
      const double r = rng.log_uniform(1.0, 1e3);
      VecN x{};
      double norm = 0.0;
      for (int k = 0; k < n; ++k) {
        x[k] = rng.uniform(-1.0, 1.0);
        norm += x[k] * x[k];
      }
      for (int k = 0; k < n; ++k) x[k] *= r / std::sqrt(norm);
      MetricJet jet;
      metric.eval(x, jet);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) CHECK(jet.g[i][j] == doctest::Approx(jet.g[j][i]).epsilon(1e-15));
      // positive definite: Cholesky-style elimination succeeds
      double a[kMaxDim][kMaxDim];
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a[i][j] = jet.g[i][j];
      bool pd = true;
      for (int c = 0; c < n && pd; ++c) {
        if (a[c][c] <= 0.0) pd = false;
        for (int i = c + 1; i < n && pd; ++i) {
          const double f = a[i][c] / a[c][c];
          for (int j = c; j < n; ++j) a[i][j] -= f * a[c][j];
        }
      }
      CHECK(pd);
      // second-derivative symmetry in (k, l)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < k; ++l)
          CHECK(jet.d2g[k][l][0][0] == doctest::Approx(jet.d2g[l][k][0][0]).epsilon(1e-13).scale(1e-10));
    }
  }
}

TEST_CASE("translation shifts the evaluation point") {
  ManifoldSpec s0 = schwarzschild(3, 2.0);
  ManifoldSpec sq = s0;
  sq.translation = VecN{1.0, -0.5, 2.0};
  const MetricField m0(s0), mq(sq);
  VecN x{5.0, 3.0, -1.0};
  VecN z = x;
  for (int k = 0; k < 3; ++k) z[k] -= sq.translation[k];
  MetricJet a, b;
  mq.eval(x, a);
  m0.eval(z, b);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(a.g[i][j] == doctest::Approx(b.g[i][j]).epsilon(1e-15));
}

TEST_CASE("chart boundary is enforced") {
  const MetricField metric(schwarzschild(3, 2.0));
  MetricJet jet;
  VecN x{0.2, 0.1, 0.0};
  CHECK_THROWS_AS(metric.eval(x, jet), std::domain_error);
}

TEST_CASE("spec validation rejects out-of-range parameters") {
  ManifoldSpec bad = schwarzschild(2, 1.0);
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad = schwarzschild(3, 1.0);
  bad.gamma = 1.5;
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  bad.gamma = 0.5;
  CHECK_NOTHROW(validate(bad));
  ManifoldSpec wrong_parity = perturbed(3, 1.0, 1.0, 1, 0.1);
  wrong_parity.perturbation.parity = Parity::Even;  // pattern 1 is odd
  CHECK_THROWS_AS(validate(wrong_parity), std::invalid_argument);
}
