#pragma once

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "isolab/manifold.hpp"
#include "isolab/metric.hpp"

namespace isolab {

struct Sym2 {
  double a[kMaxDim][kMaxDim] = {};
};

struct Tensor4 {
  double a[kMaxDim][kMaxDim][kMaxDim][kMaxDim] = {};
};

/// (a (x) b)_{ijkl} = a_jk b_il + a_il b_jk - a_ik b_jl - a_jl b_ik.
/// Produces a tensor with the algebraic symmetries of a curvature tensor.
inline Tensor4 kulkarni_nomizu(const Sym2& a, const Sym2& b, int n) {
  Tensor4 c;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          c.a[i][j][k][l] = a.a[j][k] * b.a[i][l] + a.a[i][l] * b.a[j][k] -
                            a.a[i][k] * b.a[j][l] - a.a[j][l] * b.a[i][k];
  return c;
}

enum class CurvatureMethod { ClosedForm, FiniteDifference };

struct CurvatureSample {
  VecN point{};
  int n = 0;
  Tensor4 rm;     // (0,4) Riemann tensor
  Sym2 ricci;     // Rc_jk = g^{il} Rm_ijkl
  double scalar = 0.0;
  CurvatureMethod method = CurvatureMethod::ClosedForm;
};

namespace detail {

/// n x n inverse by Gauss-Jordan with partial pivoting.
inline void invert_small(const double g[kMaxDim][kMaxDim], double inv[kMaxDim][kMaxDim], int n) {
  double a[kMaxDim][2 * kMaxDim];
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a[i][j] = g[i][j];
    for (int j = 0; j < n; ++j) a[i][n + j] = (i == j) ? 1.0 : 0.0;
  }
  for (int c = 0; c < n; ++c) {
    int p = c;
    for (int i = c + 1; i < n; ++i)
      if (std::abs(a[i][c]) > std::abs(a[p][c])) p = i;
    if (a[p][c] == 0.0) throw std::runtime_error("invert_small: singular metric matrix");
    if (p != c)
      for (int j = 0; j < 2 * n; ++j) std::swap(a[c][j], a[p][j]);
    const double piv = 1.0 / a[c][c];
    for (int j = 0; j < 2 * n; ++j) a[c][j] *= piv;
    for (int i = 0; i < n; ++i) {
      if (i == c) continue;
      const double f = a[i][c];
      if (f == 0.0) continue;
      for (int j = 0; j < 2 * n; ++j) a[i][j] -= f * a[c][j];
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv[i][j] = a[i][n + j];
}

/// Christoffel symbols from a metric jet: Gamma^k_ij.
inline void christoffel(const MetricJet& jet, int n, double gamma[kMaxDim][kMaxDim][kMaxDim]) {
  double ginv[kMaxDim][kMaxDim];
  invert_small(jet.g, ginv, n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l)
          s += ginv[k][l] * (jet.dg[i][j][l] + jet.dg[j][i][l] - jet.dg[l][i][j]);
        gamma[k][i][j] = 0.5 * s;
      }
}

}  // namespace detail

/// Closed-form curvature of the unperturbed background:
///   Rm = m r^{-n} phi^{-2n/(n-2)} ( g (x) g - n phi^{4/(n-2)} dr^2 (x) g )
/// assembled through the Kulkarni-Nomizu product; Ricci and scalar follow by
/// traces (the scalar vanishes identically).
inline CurvatureSample curvature_schwarzschild_closed(const ManifoldSpec& spec, const VecN& x) {
  if (!spec.pure_schwarzschild())
    throw std::invalid_argument("curvature_schwarzschild_closed: perturbation present");
  const int n = spec.n;
  VecN z = x;
  for (int k = 0; k < n; ++k) z[k] -= spec.translation[k];
  double r2 = 0.0;
  for (int k = 0; k < n; ++k) r2 += z[k] * z[k];
  const double r = std::sqrt(r2);
  const double phi = 1.0 + 0.5 * spec.m * std::pow(r, 2.0 - n);
  const double psi = std::pow(phi, 4.0 / (n - 2));

  Sym2 g, drdr;
  for (int i = 0; i < n; ++i) {
    g.a[i][i] = psi;
    for (int j = 0; j < n; ++j) drdr.a[i][j] = z[i] * z[j] / r2;
  }
  const double pref = spec.m * std::pow(r, -static_cast<double>(n)) *
                      std::pow(phi, -2.0 * n / (n - 2));
  const Tensor4 gg = kulkarni_nomizu(g, g, n);
  const Tensor4 rg = kulkarni_nomizu(drdr, g, n);

  CurvatureSample out;
  out.point = x;
  out.n = n;
  out.method = CurvatureMethod::ClosedForm;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          out.rm.a[i][j][k][l] = pref * (gg.a[i][j][k][l] - n * psi * rg.a[i][j][k][l]);
  // Rc = (n-2) m r^{-n} phi^{-2n/(n-2)} ( g - n psi dr^2 )
  const double rc_pref = (n - 2.0) * spec.m * std::pow(r, -static_cast<double>(n)) *
                         std::pow(phi, -2.0 * n / (n - 2));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out.ricci.a[i][j] = rc_pref * (g.a[i][j] - n * psi * drdr.a[i][j]);
  out.scalar = 0.0;
  return out;
}

/// Curvature by 4th-order central differences of the Christoffel symbols,
/// valid for any MetricField. Step h = max(1e-3, 1e-4 |x|).
inline CurvatureSample curvature_finite_difference(const Metric& metric, const VecN& x) {
  const int n = metric.dim();
  double r2 = 0.0;
  for (int k = 0; k < n; ++k) r2 += x[k] * x[k];
  const double h = std::max(1e-3, 1e-4 * std::sqrt(r2));
  {
    VecN z = x;
    for (int k = 0; k < n; ++k) z[k] -= metric.spec().translation[k];
    double zr2 = 0.0;
    for (int k = 0; k < n; ++k) zr2 += z[k] * z[k];
    if (std::sqrt(zr2) - 2.0 * h < 0.5)
      throw std::domain_error("curvature_finite_difference: stencil leaves the chart");
  }

  MetricJet jet;
  metric.eval(x, jet);
  double gamma0[kMaxDim][kMaxDim][kMaxDim];
  detail::christoffel(jet, n, gamma0);

  // dGamma[d][k][i][j] = d_d Gamma^k_ij
  static thread_local double dgamma[kMaxDim][kMaxDim][kMaxDim][kMaxDim];
  MetricJet jp;
  double gp[4][kMaxDim][kMaxDim][kMaxDim];
  for (int d = 0; d < n; ++d) {
    const double offs[4] = {-2.0 * h, -h, h, 2.0 * h};
    for (int s = 0; s < 4; ++s) {
      VecN y = x;
      y[d] += offs[s];
      metric.eval(y, jp);
      detail::christoffel(jp, n, gp[s]);
    }
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          dgamma[d][k][i][j] =
              (gp[0][k][i][j] - 8.0 * gp[1][k][i][j] + 8.0 * gp[2][k][i][j] - gp[3][k][i][j]) /
              (12.0 * h);
  }

  CurvatureSample out;
  out.point = x;
  out.n = n;
  out.method = CurvatureMethod::FiniteDifference;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double s = 0.0;
          for (int m = 0; m < n; ++m) {
            double quad = 0.0;
            for (int p = 0; p < n; ++p)
              quad += gamma0[m][i][p] * gamma0[p][j][k] - gamma0[m][j][p] * gamma0[p][i][k];
            s += jet.g[m][l] * (dgamma[i][m][j][k] - dgamma[j][m][i][k] + quad);
          }
          out.rm.a[i][j][k][l] = s;
        }
  double ginv[kMaxDim][kMaxDim];
  detail::invert_small(jet.g, ginv, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      double s = 0.0;
      for (int i = 0; i < n; ++i)
        for (int l = 0; l < n; ++l) s += ginv[i][l] * out.rm.a[i][j][k][l];
      out.ricci.a[j][k] = s;
    }
  out.scalar = 0.0;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) out.scalar += ginv[j][k] * out.ricci.a[j][k];
  return out;
}

/// Dispatch per the requested method; ClosedForm requires the pure background.
inline CurvatureSample curvature_at(const Metric& metric, const VecN& x,
                                    CurvatureMethod method) {
  if (method == CurvatureMethod::ClosedForm)
    return curvature_schwarzschild_closed(metric.spec(), x);
  return curvature_finite_difference(metric, x);
}

inline double tensor4_max_abs(const Tensor4& t, int n) {
  double m = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) m = std::max(m, std::abs(t.a[i][j][k][l]));
  return m;
}

/// Max violation of the curvature-tensor symmetries (antisymmetry in the
/// first pair and pair-exchange symmetry).
inline double curvature_symmetry_residual(const Tensor4& rm, int n) {
  double res = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          res = std::max(res, std::abs(rm.a[i][j][k][l] + rm.a[j][i][k][l]));
          res = std::max(res, std::abs(rm.a[i][j][k][l] - rm.a[k][l][i][j]));
        }
  return res;
}

/// Remainder W of Rm after removing the Ricci and scalar parts:
///   W = Rm - (Rc0 (x) g)/(n-2) - R (g (x) g)/(2n(n-1)),  Rc0 = Rc - R g / n.
/// Returns the max |g^{il} W_ijkl| over (j,k) as the trace-free residual.
struct WeylSplit {
  Tensor4 weyl;
  double trace_residual = 0.0;
};

inline WeylSplit weyl_remainder(const CurvatureSample& c, const MetricJet& jet) {
  const int n = c.n;
  WeylSplit out;
  Sym2 g, rc0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g.a[i][j] = jet.g[i][j];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) rc0.a[i][j] = c.ricci.a[i][j] - c.scalar * g.a[i][j] / n;
  const Tensor4 t1 = kulkarni_nomizu(rc0, g, n);
  const Tensor4 t2 = kulkarni_nomizu(g, g, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          out.weyl.a[i][j][k][l] = c.rm.a[i][j][k][l] - t1.a[i][j][k][l] / (n - 2.0) -
                                   c.scalar * t2.a[i][j][k][l] / (2.0 * n * (n - 1.0));
  double ginv[kMaxDim][kMaxDim];
  detail::invert_small(jet.g, ginv, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      double s = 0.0;
      for (int i = 0; i < n; ++i)
        for (int l = 0; l < n; ++l) s += ginv[i][l] * out.weyl.a[i][j][k][l];
      out.trace_residual = std::max(out.trace_residual, std::abs(s));
    }
  return out;
}

}  // namespace isolab
