#pragma once

#include <vector>

#include "isolab/metric.hpp"
#include "isolab/surface.hpp"

namespace isolab {

/// Flux-integral center of the metric, evaluated on a ladder of coordinate
/// spheres and Richardson-extrapolated in 1/r.
struct CenterReport {
  VecN center{};
  std::vector<double> radii;
  std::vector<VecN> partials;     // per-radius integrals before extrapolation
  double error_estimate = 0.0;    // ladder-based estimate, max over components
  double cauchy_gap = 0.0;        // |last - previous| partial, max component
  bool evenness_warning = false;  // set when the metric is not asymptotically even
};

/// dimension 3 uses a full 2-sphere quadrature grid; higher dimensions
/// require a zonal (axisymmetric about e1) metric
CenterReport adm_center(const Metric& metric, const std::vector<double>& radii,
                        int full_theta = 48, int full_phi = 96, int axi_nodes = 192);

/// Boundary integral int_{S_r(p)} (x_l - p_l)(H - (n-1)/r) dA_delta with the
/// mean curvature of the Euclidean sphere computed exactly in the metric g.
double alternative_center_integral(const Metric& metric, const VecN& p, double r, int l,
                                   int full_theta = 48, int full_phi = 96, int axi_nodes = 192);

/// value the boundary integral is expected to take given the center C
inline double alternative_center_prediction(const Metric& metric, const VecN& C, const VecN& p,
                                            int l) {
  const int n = metric.dim();
  return metric.mass() * (n - 1.0) * unit_sphere_area(n) * (p[l] - C[l]);
}

/// First-order expansion of H^{S_r(p)} - (n-1)/r in the metric deviation
/// h = g - delta: five explicit terms evaluated at quadrature nodes, with the
/// residual against the exact mean curvature, plus the discrete check of the
/// associated divergence identity for component l.
struct ExpansionReport {
  std::vector<double> exact;        // H - (n-1)/r per node
  std::vector<double> first_order;  // sum of the five expansion terms
  double max_residual = 0.0;
  double divergence_identity_gap = 0.0;
  double divergence_identity_scale = 0.0;
};

ExpansionReport mean_curvature_expansion(const Metric& metric, const VecN& p, double r, int l = 0,
                                         int full_theta = 48, int full_phi = 96,
                                         int axi_nodes = 192);

/// Least-squares round-sphere approximation of a graph surface (Gauss-Newton
/// on center and radius). The class precondition and the bound are checked
/// against the Euclidean curvature of the surface.
struct SphereFit {
  VecN center{};
  double radius = 0.0;
  std::vector<double> v;        // radial deviation at the surface nodes
  double sup_v_scaled = 0.0;    // sup(r^{-1}|v| + |Dv|)
  double euclid_Hbar = 0.0;
  double euclid_defect = 0.0;   // sup|hring_delta| + sup|H_delta - Hbar|
  double bound_constant = 0.0;  // sup_v_scaled / (r * euclid_defect), 0 if defect = 0
  bool radius_window_ok = false;
  int iterations = 0;
};

SphereFit fit_sphere(const GraphSurface& surface, double class_delta = 0.1);

/// Foliation sweep: solves the CMC leaf for each radius (continuation from
/// the background), records Euclidean centroids, and compares against the
/// flux-integral center.
struct ComConvergenceReport {
  std::vector<double> radii;
  std::vector<VecN> centroids;
  std::vector<double> leaf_norms;  // ||u||_B per leaf
  VecN adm_center_value{};
  std::vector<double> gaps;  // |a(V) - C| per leaf
  double fitted_rate = 0.0;  // log-log slope of the gap (0 if not fit)
  bool completed = false;
};

ComConvergenceReport com_convergence_experiment(const Metric& target, const Metric& background,
                                                const std::vector<double>& radii,
                                                int axi_nodes = 192, int axi_lmax = 48,
                                                int full_theta = 48, int full_phi = 96,
                                                int full_lmax = 20);

}  // namespace isolab
