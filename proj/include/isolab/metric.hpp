#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include "isolab/dual.hpp"
#include "isolab/manifold.hpp"
#include "isolab/numerics.hpp"
#include "isolab/quadrature.hpp"

namespace isolab {

/// Metric coefficients with first and second coordinate derivatives at one
/// point of the asymptotic chart. Index layout: dg[k][i][j] = d_k g_ij,
/// d2g[k][l][i][j] = d^2_{kl} g_ij. Only the leading n x n block is touched.
struct MetricJet {
  double g[kMaxDim][kMaxDim];
  double dg[kMaxDim][kMaxDim][kMaxDim];
  double d2g[kMaxDim][kMaxDim][kMaxDim][kMaxDim];
};

/// First-order jet over a generic scalar (double or a dual type).
template <class S>
struct MetricJetG {
  S g[kMaxDim][kMaxDim];
  S dg[kMaxDim][kMaxDim][kMaxDim];
};

template <int K>
using MetricJet1 = MetricJetG<Dual<K>>;

namespace detail {

/// value/first/second derivative of a scalar radial profile
struct RadialJet {
  double f = 0.0, df = 0.0, ddf = 0.0;
};

inline RadialJet tail_envelope(double r, double sigma, double q, double r0, double w) {
  const double t = (r - r0) / w;
  const double chi = smoothstep_c4(t);
  if (chi == 0.0) return {};
  const double dchi = smoothstep_c4_d1(t) / w;
  const double ddchi = smoothstep_c4_d2(t) / (w * w);
  const double p = std::pow(r, -q);
  const double dp = -q * p / r;
  const double ddp = q * (q + 1.0) * p / (r * r);
  RadialJet out;
  out.f = sigma * chi * p;
  out.df = sigma * (dchi * p + chi * dp);
  out.ddf = sigma * (ddchi * p + 2.0 * dchi * dp + chi * ddp);
  return out;
}

inline RadialJet compact_bump(double r, double sigma, double q, double r0, double w) {
  const double t = (r - r0) / w;
  if (t <= 0.0 || t >= 2.0) return {};
  const double chi = smoothstep_c4(t) - smoothstep_c4(t - 1.0);
  const double dchi = (smoothstep_c4_d1(t) - smoothstep_c4_d1(t - 1.0)) / w;
  const double ddchi = (smoothstep_c4_d2(t) - smoothstep_c4_d2(t - 1.0)) / (w * w);
  const double p = std::pow(r, -q);
  const double dp = -q * p / r;
  const double ddp = q * (q + 1.0) * p / (r * r);
  RadialJet out;
  out.f = sigma * chi * p;
  out.df = sigma * (dchi * p + chi * dp);
  out.ddf = sigma * (ddchi * p + 2.0 * dchi * dp + chi * ddp);
  return out;
}

}  // namespace detail

/// Abstract pointwise metric evaluator on the asymptotic chart. Evaluation
/// is pure and safe for concurrent use.
class Metric {
 public:
  virtual ~Metric() = default;
  virtual int dim() const = 0;
  virtual double mass() const = 0;
  virtual const ManifoldSpec& spec() const = 0;
  virtual bool pure_schwarzschild() const = 0;
  virtual void eval(const VecN& x, MetricJet& out) const = 0;
};

/// Pointwise evaluator of the metric under study: conformal Schwarzschild
/// background plus the optional perturbation pattern, shifted by the
/// translation vector.
class MetricField : public Metric {
 public:
  explicit MetricField(ManifoldSpec spec) : spec_(spec) { validate(spec_); }

  const ManifoldSpec& spec() const override { return spec_; }
  int dim() const override { return spec_.n; }
  double mass() const override { return spec_.m; }
  bool pure_schwarzschild() const override { return spec_.pure_schwarzschild(); }

  /// phi_m(r) = 1 + m / (2 r^{n-2})
  double conformal_phi(double r) const {
    return 1.0 + 0.5 * spec_.m * std::pow(r, 2.0 - spec_.n);
  }

  /// full second-order jet
  void eval(const VecN& x, MetricJet& out) const override {
    const int n = spec_.n;
    VecN z = x;
    for (int k = 0; k < n; ++k) z[k] -= spec_.translation[k];
    double r2 = 0.0;
    for (int k = 0; k < n; ++k) r2 += z[k] * z[k];
    const double r = std::sqrt(r2);
    if (!(r >= 0.4999))
      throw std::domain_error("MetricField: point outside the chart |x - q| >= 1/2");

    // background psi = phi^{4/(n-2)}
    const double m = spec_.m;
    const double phi = 1.0 + 0.5 * m * std::pow(r, 2.0 - n);
    const double e = 4.0 / (n - 2);
    const double psi = std::pow(phi, e);
    // psi' = -2 m r^{1-n} phi^{e-1}
    const double dpsi = -2.0 * m * std::pow(r, 1.0 - n) * std::pow(phi, e - 1.0);
    const double dphi = -0.5 * m * (n - 2.0) * std::pow(r, 1.0 - n);
    const double ddpsi = -2.0 * m * ((1.0 - n) * std::pow(r, -static_cast<double>(n)) * std::pow(phi, e - 1.0) +
                                     std::pow(r, 1.0 - n) * (e - 1.0) * std::pow(phi, e - 2.0) * dphi);

    VecN u{};  // unit radial
    for (int k = 0; k < n; ++k) u[k] = z[k] / r;

    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out.g[i][j] = (i == j) ? psi : 0.0;
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out.dg[k][i][j] = (i == j) ? dpsi * u[k] : 0.0;
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        const double rad = ddpsi * u[k] * u[l] + dpsi * (((k == l) ? 1.0 : 0.0) - u[k] * u[l]) / r;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) out.d2g[k][l][i][j] = (i == j) ? rad : 0.0;
      }

    if (!spec_.perturbation.empty()) add_perturbation(z, r, out);
  }

  /// h_ij = g_ij - (g_m)_ij at x (for decay validation)
  void perturbation_only(const VecN& x, double h[kMaxDim][kMaxDim],
                         double dh[kMaxDim][kMaxDim][kMaxDim],
                         double d2h[kMaxDim][kMaxDim][kMaxDim][kMaxDim]) const {
    const int n = spec_.n;
    MetricJet full;
    eval(x, full);
    ManifoldSpec bare = spec_;
    bare.perturbation = PerturbationSpec{};
    MetricField base(bare);
    MetricJet bg;
    base.eval(x, bg);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        h[i][j] = full.g[i][j] - bg.g[i][j];
        for (int k = 0; k < n; ++k) {
          dh[k][i][j] = full.dg[k][i][j] - bg.dg[k][i][j];
          for (int l = 0; l < n; ++l) d2h[k][l][i][j] = full.d2g[k][l][i][j] - bg.d2g[k][l][i][j];
        }
      }
  }

 private:
  void add_perturbation(const VecN& z, double r, MetricJet& out) const {
    const int n = spec_.n;
    const PerturbationSpec& p = spec_.perturbation;
    const PatternTraits traits = pattern_traits(p.pattern);
    const double q = (n - 2) + spec_.gamma + traits.degree + traits.extra_decay;
    const detail::RadialJet f =
        (p.pattern == 6) ? detail::compact_bump(r, p.sigma, q, p.r0, p.width)
                         : detail::tail_envelope(r, p.sigma, q, p.r0, p.width);
    if (f.f == 0.0 && f.df == 0.0 && f.ddf == 0.0) return;

    // polynomial tensor factor Q_ij(z) with first/second derivatives
    double Q[kMaxDim][kMaxDim] = {};
    double dQ[kMaxDim][kMaxDim][kMaxDim] = {};
    double d2Q[kMaxDim][kMaxDim][kMaxDim][kMaxDim] = {};
    fill_pattern(z, Q, dQ, d2Q);

    VecN u{};
    for (int k = 0; k < n; ++k) u[k] = z[k] / r;

    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        out.g[i][j] += f.f * Q[i][j];
        for (int k = 0; k < n; ++k) {
          out.dg[k][i][j] += f.df * u[k] * Q[i][j] + f.f * dQ[k][i][j];
          for (int l = 0; l < n; ++l) {
            out.d2g[k][l][i][j] += f.ddf * u[k] * u[l] * Q[i][j] +
                                   f.df * (((k == l) ? 1.0 : 0.0) - u[k] * u[l]) / r * Q[i][j] +
                                   f.df * u[k] * dQ[l][i][j] + f.df * u[l] * dQ[k][i][j] +
                                   f.f * d2Q[k][l][i][j];
          }
        }
      }
  }

  void fill_pattern(const VecN& z, double Q[kMaxDim][kMaxDim],
                    double dQ[kMaxDim][kMaxDim][kMaxDim],
                    double d2Q[kMaxDim][kMaxDim][kMaxDim][kMaxDim]) const {
    const int n = spec_.n;
    const int id = spec_.perturbation.pattern;
    auto kron = [](int a, int b) { return a == b ? 1.0 : 0.0; };
    switch (id) {
      case 0:
      case 6:
        for (int i = 0; i < n; ++i) Q[i][i] = 1.0;
        break;
      case 8:
      case 1:
        for (int i = 0; i < n; ++i) {
          Q[i][i] = z[0];
          dQ[0][i][i] = 1.0;
        }
        break;
      case 2: {
        double r2 = 0.0;
        for (int k = 0; k < n; ++k) r2 += z[k] * z[k];
        const double val = z[0] * z[0] - r2 / n;
        for (int i = 0; i < n; ++i) {
          Q[i][i] = val;
          for (int k = 0; k < n; ++k) {
            dQ[k][i][i] = 2.0 * z[0] * kron(k, 0) - 2.0 * z[k] / n;
            for (int l = 0; l < n; ++l)
              d2Q[k][l][i][i] = 2.0 * kron(k, 0) * kron(l, 0) - 2.0 * kron(k, l) / n;
          }
        }
        break;
      }
      case 3:
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            Q[i][j] = z[i] * z[j];
            for (int k = 0; k < n; ++k) {
              dQ[k][i][j] = kron(k, i) * z[j] + kron(k, j) * z[i];
              for (int l = 0; l < n; ++l)
                d2Q[k][l][i][j] = kron(k, i) * kron(l, j) + kron(k, j) * kron(l, i);
            }
          }
        break;
      case 4:
        Q[0][0] = 1.0;
        break;
      case 5:
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            Q[i][j] = 0.5 * (z[i] * kron(j, 0) + z[j] * kron(i, 0));
            for (int k = 0; k < n; ++k)
              dQ[k][i][j] = 0.5 * (kron(k, i) * kron(j, 0) + kron(k, j) * kron(i, 0));
          }
        break;
      case 7:
        for (int i = 0; i < n; ++i) {
          Q[i][i] = z[0] * z[1];
          for (int k = 0; k < n; ++k) {
            dQ[k][i][i] = kron(k, 0) * z[1] + kron(k, 1) * z[0];
            for (int l = 0; l < n; ++l)
              d2Q[k][l][i][i] = kron(k, 0) * kron(l, 1) + kron(k, 1) * kron(l, 0);
          }
        }
        break;
      default:
        throw std::invalid_argument("unknown perturbation pattern");
    }
  }

  ManifoldSpec spec_;
};

/// Convex combination t a + (1-t) b of two metrics on the same chart, used
/// for metric-path continuation. Both endpoints must share (n, m).
class BlendedMetric : public Metric {
 public:
  BlendedMetric(const Metric& a, const Metric& b, double t) : a_(&a), b_(&b), t_(t) {
    if (a.dim() != b.dim() || a.mass() != b.mass())
      throw std::invalid_argument("BlendedMetric: endpoints must share dimension and mass");
  }
  int dim() const override { return a_->dim(); }
  double mass() const override { return a_->mass(); }
  const ManifoldSpec& spec() const override { return (t_ == 1.0) ? a_->spec() : b_->spec(); }
  bool pure_schwarzschild() const override {
    if (t_ == 1.0) return a_->pure_schwarzschild();
    if (t_ == 0.0) return b_->pure_schwarzschild();
    return a_->pure_schwarzschild() && b_->pure_schwarzschild();
  }
  double t() const { return t_; }
  void eval(const VecN& x, MetricJet& out) const override {
    MetricJet jb;
    a_->eval(x, out);
    b_->eval(x, jb);
    const int n = dim();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        out.g[i][j] = t_ * out.g[i][j] + (1.0 - t_) * jb.g[i][j];
        for (int k = 0; k < n; ++k) {
          out.dg[k][i][j] = t_ * out.dg[k][i][j] + (1.0 - t_) * jb.dg[k][i][j];
          for (int l = 0; l < n; ++l)
            out.d2g[k][l][i][j] = t_ * out.d2g[k][l][i][j] + (1.0 - t_) * jb.d2g[k][l][i][j];
        }
      }
  }

 private:
  const Metric* a_;
  const Metric* b_;
  double t_;
};

/// first-order jet with K derivative slots threaded through the position
template <int K>
inline void metric_eval_dual(const Metric& metric, const std::array<Dual<K>, kMaxDim>& x,
                             MetricJet1<K>& out) {
  const int n = metric.dim();
  VecN xv{};
  for (int k = 0; k < n; ++k) xv[k] = x[k].v;
  MetricJet jet;
  metric.eval(xv, jet);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Dual<K> gij(jet.g[i][j]);
      for (int k = 0; k < n; ++k)
        for (int s = 0; s < K; ++s) gij.d[s] += jet.dg[k][i][j] * x[k].d[s];
      out.g[i][j] = gij;
    }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Dual<K> dgk(jet.dg[k][i][j]);
        for (int l = 0; l < n; ++l)
          for (int s = 0; s < K; ++s) dgk.d[s] += jet.d2g[l][k][i][j] * x[l].d[s];
        out.dg[k][i][j] = dgk;
      }
}

/// g_m-area of the centered coordinate sphere S_r (background only).
inline double sphere_area_schwarzschild(const ManifoldSpec& s, double r) {
  if (!s.pure_schwarzschild())
    throw std::invalid_argument("sphere_area_schwarzschild: perturbation present");
  if (!(r > 0.0)) throw std::domain_error("sphere_area_schwarzschild: r > 0 required");
  const double phi = 1.0 + 0.5 * s.m * std::pow(r, 2.0 - s.n);
  return std::pow(phi, 2.0 * (s.n - 1) / (s.n - 2)) * std::pow(r, s.n - 1.0) *
         unit_sphere_area(s.n);
}

/// g_m-mean curvature of S_r with respect to the outward normal.
inline double sphere_mean_curvature_schwarzschild(const ManifoldSpec& s, double r) {
  if (!s.pure_schwarzschild())
    throw std::invalid_argument("sphere_mean_curvature_schwarzschild: perturbation present");
  if (!(r > 0.0)) throw std::domain_error("sphere_mean_curvature_schwarzschild: r > 0 required");
  const double u = 0.5 * s.m * std::pow(r, 2.0 - s.n);
  const double phi = 1.0 + u;
  return std::pow(phi, -static_cast<double>(s.n) / (s.n - 2)) * (1.0 - u) * (s.n - 1.0) / r;
}

/// g_m-volume of the annulus a < |x| < b (background only).
inline double schwarzschild_annulus_volume(const ManifoldSpec& s, double a, double b) {
  const double omega = unit_sphere_area(s.n);
  const int n = s.n;
  const double m = s.m;
  return integrate_radial(
      [&](double rho) {
        const double phi = 1.0 + 0.5 * m * std::pow(rho, 2.0 - n);
        return omega * std::pow(phi, 2.0 * n / (n - 2.0)) * std::pow(rho, n - 1.0);
      },
      a, b);
}

}  // namespace isolab
