#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "isolab/dual.hpp"
#include "isolab/linalg.hpp"
#include "isolab/numerics.hpp"
#include "isolab/ode.hpp"
#include "isolab/quadrature.hpp"

using namespace isolab;

TEST_CASE("gauss-legendre integrates polynomials exactly") {
  const QuadRule q = gauss_legendre(12);
  // exact: int_{-1}^{1} t^k dt
  for (int k = 0; k <= 23; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) s += q.weights[i] * std::pow(q.nodes[i], k);
    const double exact = (k % 2 == 1) ? 0.0 : 2.0 / (k + 1);
    CHECK(s == doctest::Approx(exact).epsilon(1e-13).scale(1.0));
  }
}

TEST_CASE("gauss-gegenbauer matches Beta-function moments") {
  // int_{-1}^{1} t^{2j} (1-t^2)^a dt = B(j+1/2, a+1)
  for (double a : {0.0, 0.5, 1.0, 1.5}) {
    const QuadRule q = gauss_gegenbauer(24, a);
    for (int j = 0; j <= 6; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < q.nodes.size(); ++i)
        s += q.weights[i] * std::pow(q.nodes[i], 2 * j);
      const double exact =
          std::exp(std::lgamma(j + 0.5) + std::lgamma(a + 1.0) - std::lgamma(j + a + 1.5));
      CHECK(s == doctest::Approx(exact).epsilon(1e-12));
    }
  }
}

TEST_CASE("unit sphere areas from the Gamma-function formula") {
  CHECK(unit_sphere_area(2) == doctest::Approx(2.0 * M_PI).epsilon(1e-14));
  CHECK(unit_sphere_area(3) == doctest::Approx(4.0 * M_PI).epsilon(1e-14));
  CHECK(unit_sphere_area(4) == doctest::Approx(2.0 * M_PI * M_PI).epsilon(1e-14));
  CHECK(unit_sphere_area(5) == doctest::Approx(8.0 * M_PI * M_PI / 3.0).epsilon(1e-14));
  CHECK(unit_sphere_area(6) == doctest::Approx(M_PI * M_PI * M_PI).epsilon(1e-14));
}

TEST_CASE("symmetric eigensolver reconstructs random matrices") {
  SplitMix64 rng(42);
  for (int trial = 0; trial < 3; ++trial) {
    const std::size_t n = 20 + 10 * trial;
    Matrix A(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j <= i; ++j) A(i, j) = A(j, i) = rng.uniform(-1.0, 1.0);
    const SymEig eig = sym_eig(A);
    for (std::size_t j = 0; j + 1 < n; ++j) CHECK(eig.values[j] <= eig.values[j + 1]);
    // ||A v - lambda v|| small, v orthonormal
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<double> v(n), Av(n, 0.0);
      for (std::size_t k = 0; k < n; ++k) v[k] = eig.vectors(k, j);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) Av[i] += A(i, k) * v[k];
      axpy(-eig.values[j], v, Av);
      CHECK(norm2(Av) < 1e-11);
      CHECK(norm2(v) == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("generalized eigensolver on a known pencil") {
  // A = diag(1, 2, 3), B = diag(1, 4, 9): eigenvalues 1, 1/2, 1/3
  Matrix A(3, 3), B(3, 3);
  for (int i = 0; i < 3; ++i) {
    A(i, i) = i + 1.0;
    B(i, i) = (i + 1.0) * (i + 1.0);
  }
  const SymEig eig = sym_eig_generalized(A, B);
  CHECK(eig.values[0] == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(eig.values[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(eig.values[2] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("LU and GMRES solve the same system") {
  SplitMix64 rng(7);
  const std::size_t n = 40;
  Matrix A(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) A(i, j) = 0.05 * rng.uniform(-1.0, 1.0);
    A(i, i) += 2.0;
  }
  std::vector<double> b(n);
  for (auto& x : b) x = rng.uniform(-1.0, 1.0);
  const LuSolver lu(A);
  const auto x_lu = lu.solve(b);
  auto apply_A = [&](const std::vector<double>& v) { return matvec(A, v); };
  auto ident = [](const std::vector<double>& v) { return v; };
  const GmresResult g = gmres(apply_A, ident, b, 1e-12, 200);
  CHECK(g.converged);
  for (std::size_t i = 0; i < n; ++i) CHECK(x_lu[i] == doctest::Approx(g.x[i]).epsilon(1e-9));
}

TEST_CASE("dual numbers differentiate a composite expression") {
  auto f = [](auto x) { return sqrt(x * x + 3.0 * x) * pow(x, 1.7) / (1.0 + exp(-x)); };
  const double x0 = 1.37;
  Dual<1> x(x0, 0);
  const Dual<1> y = f(x);
  const double h = 1e-6;
  const double fd = (f(x0 + h) - f(x0 - h)) / (2.0 * h);
  CHECK(y.d[0] == doctest::Approx(fd).epsilon(1e-8));
}

TEST_CASE("rk45 reproduces exp and lands on the endpoint") {
  const auto r = integrate_rk45([](double, double y) { return y; }, 0.0, 1.0, 2.0, 1e-12, 1e-14);
  CHECK(r.x.back() == 2.0);  // endpoint is landed on exactly
  CHECK(r.y.back() == doctest::Approx(std::exp(2.0)).epsilon(1e-10));
}

TEST_CASE("richardson extrapolation removes power-law tails") {
  std::vector<double> radii = {100.0, 316.22776601683796, 1000.0};
  std::vector<double> vals;
  for (double r : radii) vals.push_back(5.0 + 3.0 / r - 7.0 / (r * r));
  CHECK(richardson_limit(radii, vals, 2) == doctest::Approx(5.0).epsilon(1e-10));
}

TEST_CASE("log-log slope fit recovers the exponent") {
  std::vector<double> x = {10.0, 100.0, 1000.0}, y;
  for (double t : x) y.push_back(4.2 * std::pow(t, -2.5));
  const SlopeFit f = loglog_slope(x, y);
  CHECK(f.slope == doctest::Approx(-2.5).epsilon(1e-12));
}

TEST_CASE("smoothstep transition is C^4 with matching derivatives") {
  CHECK(smoothstep_c4(0.0) == 0.0);
  CHECK(smoothstep_c4(1.0) == 1.0);
  CHECK(smoothstep_c4(0.5) == doctest::Approx(0.5).epsilon(1e-14));
  const double h = 1e-5;
  for (double t : {0.2, 0.5, 0.8}) {
    const double d1 = (smoothstep_c4(t + h) - smoothstep_c4(t - h)) / (2 * h);
    CHECK(smoothstep_c4_d1(t) == doctest::Approx(d1).epsilon(1e-8));
    const double d2 = (smoothstep_c4_d1(t + h) - smoothstep_c4_d1(t - h)) / (2 * h);
    CHECK(smoothstep_c4_d2(t) == doctest::Approx(d2).epsilon(1e-8));
  }
  // derivatives vanish at the knots
  CHECK(smoothstep_c4_d1(1e-9) < 1e-30);
  CHECK(smoothstep_c4_d2(1.0 - 1e-9) < 1e-20);
}
