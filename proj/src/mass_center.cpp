#include "isolab/mass_center.hpp"

#include <cmath>
#include <stdexcept>

#include "isolab/cmc.hpp"
#include "isolab/numerics.hpp"
#include "isolab/quadrature.hpp"

namespace isolab {

namespace {

std::shared_ptr<SphereGrid> quadrature_grid(const Metric& metric, int full_theta, int full_phi,
                                            int axi_nodes, const VecN* p = nullptr) {
  const int n = metric.dim();
  bool zonal = metric.spec().zonal();
  if (p)
    for (int k = 1; k < n; ++k) zonal = zonal && (*p)[k] == 0.0;
  if (n == 3 && !zonal)
    return std::make_shared<SphereGrid>(SphereGrid::full(full_theta, full_phi, 8));
  if (!zonal)
    throw std::invalid_argument(
        "center-of-mass quadrature: n >= 4 requires a metric (and offset) axisymmetric about e1");
  return std::make_shared<SphereGrid>(SphereGrid::axisymmetric(n, axi_nodes, 8));
}

/// per-radius flux integral (one component); h = g - delta
double center_flux(const Metric& metric, const SphereGrid& grid, double r, int l) {
  const int n = metric.dim();
  double integral = 0.0;
  MetricJet jet;
  for (int p = 0; p < grid.node_count(); ++p) {
    const double theta = grid.theta(p), phi = grid.phi(p);
    VecN x{};
    if (grid.mode() == GridMode::Full2Sphere) {
      x[0] = r * std::sin(theta) * std::cos(phi);
      x[1] = r * std::sin(theta) * std::sin(phi);
      x[2] = r * std::cos(theta);
    } else {
      x[0] = r * std::cos(theta);
      x[1] = r * std::sin(theta);
    }
    metric.eval(x, jet);
    double h[kMaxDim][kMaxDim], dh[kMaxDim][kMaxDim][kMaxDim];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        h[i][j] = jet.g[i][j] - ((i == j) ? 1.0 : 0.0);
        for (int k = 0; k < n; ++k) dh[k][i][j] = jet.dg[k][i][j];
      }
    double term = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) term += x[l] * (dh[i][i][j] - dh[j][i][i]) * x[j];
    for (int i = 0; i < n; ++i) term -= h[i][l] * x[i] - h[i][i] * x[l];
    integral += grid.weight(p) * std::pow(r, n - 1.0) * term;
  }
  return integral;
}

}  // namespace

CenterReport adm_center(const Metric& metric, const std::vector<double>& radii, int full_theta,
                        int full_phi, int axi_nodes) {
  if (radii.size() < 2) throw std::invalid_argument("adm_center: need an increasing radius ladder");
  for (std::size_t i = 0; i + 1 < radii.size(); ++i)
    if (!(radii[i] < radii[i + 1]))
      throw std::invalid_argument("adm_center: radii must increase");
  if (!(radii.back() >= 1e2))
    throw std::invalid_argument("adm_center: largest ladder radius must reach 1e2");
  if (!(metric.mass() > 0.0))
    throw std::invalid_argument("adm_center: normalization requires positive mass");

  const int n = metric.dim();
  auto grid = quadrature_grid(metric, full_theta, full_phi, axi_nodes);
  const double norm = 1.0 / (2.0 * metric.mass() * (n - 1.0) * unit_sphere_area(n));
  const int active_components = (grid->mode() == GridMode::Axisymmetric) ? 1 : n;

  CenterReport rep;
  rep.radii = radii;
  rep.evenness_warning = !metric.spec().asymptotically_even();
  rep.partials.resize(radii.size());
  for (std::size_t k = 0; k < radii.size(); ++k) {
    VecN partial{};
    for (int l = 0; l < active_components; ++l)
      partial[l] = norm / radii[k] * center_flux(metric, *grid, radii[k], l);
    rep.partials[k] = partial;
  }
  for (int l = 0; l < active_components; ++l) {
    std::vector<double> vals;
    for (const auto& p : rep.partials) vals.push_back(p[l]);
    rep.center[l] = richardson_limit(radii, vals, 2);
    // error estimate: change of extrapolant when the coarsest rung is dropped
    if (radii.size() >= 3) {
      std::vector<double> radii_tail(radii.begin() + 1, radii.end());
      std::vector<double> vals_tail(vals.begin() + 1, vals.end());
      rep.error_estimate = std::max(
          rep.error_estimate, std::abs(rep.center[l] - richardson_limit(radii_tail, vals_tail, 2)));
    }
    rep.cauchy_gap =
        std::max(rep.cauchy_gap, std::abs(vals[vals.size() - 1] - vals[vals.size() - 2]));
  }
  return rep;
}

double alternative_center_integral(const Metric& metric, const VecN& p, double r, int l,
                                   int full_theta, int full_phi, int axi_nodes) {
  const int n = metric.dim();
  double pnorm = 0.0;
  for (int k = 0; k < n; ++k) pnorm += p[k] * p[k];
  pnorm = std::sqrt(pnorm);
  if (!(r >= 1.0) || 2.0 * pnorm > r)
    throw std::domain_error("alternative_center_integral: need r >= 1 and 2|p| <= r");
  auto grid = quadrature_grid(metric, full_theta, full_phi, axi_nodes, &p);
  if (grid->mode() == GridMode::Axisymmetric && l != 0)
    throw std::invalid_argument(
        "alternative_center_integral: zonal quadrature computes the e1 component");

  std::vector<double> zero(grid->basis_size(), 0.0);
  const GraphSurface sphere = build_surface(grid, metric, r, zero, p);
  double integral = 0.0;
  for (int q = 0; q < sphere.nodes(); ++q) {
    const double xl = sphere.position[q][l] - p[l];
    integral += grid->weight(q) * std::pow(r, n - 1.0) * xl * (sphere.H[q] - (n - 1.0) / r);
  }
  return integral;
}

ExpansionReport mean_curvature_expansion(const Metric& metric, const VecN& p, double r, int l,
                                         int full_theta, int full_phi, int axi_nodes) {
  const int n = metric.dim();
  double pnorm = 0.0;
  for (int k = 0; k < n; ++k) pnorm += p[k] * p[k];
  pnorm = std::sqrt(pnorm);
  if (!(r >= 1.0) || 2.0 * pnorm > r)
    throw std::domain_error("mean_curvature_expansion: need r >= 1 and 2|p| <= r");
  auto grid = quadrature_grid(metric, full_theta, full_phi, axi_nodes, &p);
  std::vector<double> zero(grid->basis_size(), 0.0);
  const GraphSurface sphere = build_surface(grid, metric, r, zero, p);

  ExpansionReport rep;
  const int nodes = sphere.nodes();
  rep.exact.resize(nodes);
  rep.first_order.resize(nodes);
  double lhs = 0.0, rhs = 0.0, scale = 0.0;
  MetricJet jet;
  for (int q = 0; q < nodes; ++q) {
    const VecN& x = sphere.position[q];
    VecN rho{};
    for (int k = 0; k < n; ++k) rho[k] = (x[k] - p[k]) / r;
    metric.eval(x, jet);
    double h[kMaxDim][kMaxDim], dh[kMaxDim][kMaxDim][kMaxDim];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        h[i][j] = jet.g[i][j] - ((i == j) ? 1.0 : 0.0);
        for (int k = 0; k < n; ++k) dh[k][i][j] = jet.dg[k][i][j];
      }
    double t1 = 0.0, t2 = 0.0, t3 = 0.0, t4 = 0.0, t5 = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) t1 += 0.5 * dh[k][i][j] * rho[i] * rho[j] * rho[k];
        t4 += 0.5 * (n + 1.0) * h[i][j] * rho[i] * rho[j] / r;
      }
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        t2 += 0.5 * dh[j][i][i] * rho[j];
        t3 -= dh[i][i][j] * rho[j];
      }
    }
    for (int i = 0; i < n; ++i) t5 -= h[i][i] / r;
    rep.first_order[q] = t1 + t2 + t3 + t4 + t5;
    rep.exact[q] = sphere.H[q] - (n - 1.0) / r;
    rep.max_residual = std::max(rep.max_residual, std::abs(rep.exact[q] - rep.first_order[q]));

    // divergence identity for component l:
    //   (1/2) int (x_l - p_l) h_{ij,k} rho_i rho_j rho_k
    // = (1/2) int h_{il} rho_i + (x_l - p_l)(h_{ii}/r - (n+1) h_{ij} rho_i rho_j / r
    //   + h_{ij,j} rho_i)
    const double w = grid->weight(q) * std::pow(r, n - 1.0);
    const double xl = x[l] - p[l];
    double hrrr = 0.0, hil = 0.0, hii = 0.0, hijrr = 0.0, divh = 0.0;
    for (int i = 0; i < n; ++i) {
      hil += h[i][l] * rho[i];
      hii += h[i][i];
      for (int j = 0; j < n; ++j) {
        hijrr += h[i][j] * rho[i] * rho[j];
        divh += dh[j][i][j] * rho[i];
        for (int k = 0; k < n; ++k) hrrr += dh[k][i][j] * rho[i] * rho[j] * rho[k];
      }
    }
    lhs += w * 0.5 * xl * hrrr;
    rhs += w * 0.5 * (hil + xl * (hii / r - (n + 1.0) * hijrr / r + divh));
    scale += w * std::abs(0.5 * xl * hrrr);
  }
  rep.divergence_identity_gap = std::abs(lhs - rhs);
  rep.divergence_identity_scale = std::max(scale, 1e-300);
  return rep;
}

SphereFit fit_sphere(const GraphSurface& surface, double class_delta) {
  const int n = surface.metric->dim();
  // Euclidean curvature of the same graph for the class precondition
  ManifoldSpec flat_spec;
  flat_spec.n = n;
  flat_spec.m = 0.0;
  const MetricField flat(flat_spec);
  const GraphSurface delta_surface =
      build_surface(surface.grid, flat, surface.R, surface.u_coeffs, surface.center);

  SphereFit fit;
  double area = 0.0;
  for (int p = 0; p < delta_surface.nodes(); ++p) {
    const double w = delta_surface.grid->weight(p) * delta_surface.euclid_density[p];
    area += w;
    fit.euclid_Hbar += w * delta_surface.H[p];
  }
  fit.euclid_Hbar /= area;
  double sup_hring = 0.0, sup_dh = 0.0;
  for (int p = 0; p < delta_surface.nodes(); ++p) {
    sup_hring = std::max(sup_hring, std::sqrt(std::max(0.0, delta_surface.hring_sq[p])));
    sup_dh = std::max(sup_dh, std::abs(delta_surface.H[p] - fit.euclid_Hbar));
  }
  fit.euclid_defect = sup_hring + sup_dh;
  if (!(fit.euclid_defect <= class_delta * std::abs(fit.euclid_Hbar)))
    throw std::domain_error("fit_sphere: surface is not close enough to a round sphere");

  // Gauss-Newton on (center, radius) for sum w (|Y - c| - rho)^2; zonal grids
  // constrain the center to the symmetry axis
  const int center_dofs = (surface.grid->mode() == GridMode::Axisymmetric) ? 1 : n;
  VecN c = euclidean_centroid(surface);
  double rho = (n - 1.0) / fit.euclid_Hbar;
  for (int it = 0; it < 60; ++it) {
    // normal equations of the linearized residual
    double JTJ[kMaxDim + 1][kMaxDim + 1] = {};
    double JTr[kMaxDim + 1] = {};
    for (int p = 0; p < surface.nodes(); ++p) {
      const double w = surface.grid->weight(p) * surface.euclid_density[p];
      double dist = 0.0;
      VecN dir{};
      for (int k = 0; k < n; ++k) {
        dir[k] = surface.position[p][k] - c[k];
        dist += dir[k] * dir[k];
      }
      dist = std::sqrt(dist);
      for (int k = 0; k < n; ++k) dir[k] /= dist;
      const double res = dist - rho;
      // d res / d c_k = -dir_k, d res / d rho = -1
      double row[kMaxDim + 1];
      for (int k = 0; k < center_dofs; ++k) row[k] = -dir[k];
      row[center_dofs] = -1.0;
      for (int a = 0; a <= center_dofs; ++a) {
        JTr[a] += w * row[a] * res;
        for (int b = 0; b <= center_dofs; ++b) JTJ[a][b] += w * row[a] * row[b];
      }
    }
    Matrix A(center_dofs + 1, center_dofs + 1);
    std::vector<double> rhs(center_dofs + 1);
    for (int a = 0; a <= center_dofs; ++a) {
      rhs[a] = -JTr[a];
      for (int b = 0; b <= center_dofs; ++b) A(a, b) = JTJ[a][b];
    }
    const LuSolver lu(std::move(A));
    const std::vector<double> delta = lu.solve(rhs);
    double step = 0.0;
    for (int k = 0; k < center_dofs; ++k) {
      c[k] += delta[k];
      step = std::max(step, std::abs(delta[k]));
    }
    rho += delta[center_dofs];
    step = std::max(step, std::abs(delta[center_dofs]));
    fit.iterations = it + 1;
    if (step < 1e-14 * rho) break;
  }
  fit.center = c;
  fit.radius = rho;

  // deviation table and scaled norm; the gradient is taken over the graph's
  // own parametrization (second-order accurate in the deviation scale)
  fit.v.resize(surface.nodes());
  for (int p = 0; p < surface.nodes(); ++p) {
    double dist = 0.0;
    for (int k = 0; k < n; ++k) dist += sq(surface.position[p][k] - c[k]);
    fit.v[p] = std::sqrt(dist) - rho;
  }
  GridFields vf;
  surface.grid->synthesize(surface.grid->analyze(fit.v), vf);
  const bool full = surface.grid->mode() == GridMode::Full2Sphere;
  for (int p = 0; p < surface.nodes(); ++p) {
    const double st = std::sin(surface.grid->theta(p));
    double grad;
    if (full)
      grad = std::sqrt(sq(vf.ft[p]) + sq(vf.fp[p] / st)) / rho;
    else
      grad = std::abs(vf.ft[p]) / rho;
    fit.sup_v_scaled = std::max(fit.sup_v_scaled, std::abs(fit.v[p]) / rho + grad);
  }
  fit.radius_window_ok = (rho > 0.5 * (n - 1.0) / fit.euclid_Hbar) &&
                         (rho < 2.0 * (n - 1.0) / fit.euclid_Hbar);
  fit.bound_constant =
      (fit.euclid_defect > 0.0) ? fit.sup_v_scaled / (rho * fit.euclid_defect) : 0.0;
  return fit;
}

ComConvergenceReport com_convergence_experiment(const Metric& target, const Metric& background,
                                                const std::vector<double>& radii, int axi_nodes,
                                                int axi_lmax, int full_theta, int full_phi,
                                                int full_lmax) {
  ComConvergenceReport rep;
  rep.radii = radii;
  const int n = target.dim();
  const bool zonal = target.spec().zonal();
  if (!zonal && n != 3)
    throw std::invalid_argument("com_convergence_experiment: n >= 4 requires a zonal metric");

  std::shared_ptr<SphereGrid> grid =
      zonal ? std::make_shared<SphereGrid>(SphereGrid::axisymmetric(n, axi_nodes, axi_lmax))
            : std::make_shared<SphereGrid>(SphereGrid::full(full_theta, full_phi, full_lmax));

  // flux-integral center on a ladder reaching past the largest leaf
  std::vector<double> flux_radii;
  const double rmax = std::max(1000.0, 2.0 * radii.back());
  for (double r = 100.0; r <= rmax * 1.0001; r *= std::sqrt(10.0)) flux_radii.push_back(r);
  if (flux_radii.size() < 3) flux_radii = {100.0, 316.22776601683796, 1000.0};
  const CenterReport center = adm_center(target, flux_radii);
  rep.adm_center_value = center.center;

  for (double R : radii) {
    const double Ht = sphere_mean_curvature_schwarzschild(background.spec(), R);
    ContinuationReport crep;
    GraphSurface leaf = continuation_path(grid, target, background, R, Ht, &crep);
    if (!crep.completed)
      throw std::runtime_error("com_convergence_experiment: continuation failed at R = " +
                               std::to_string(R));
    rep.centroids.push_back(euclidean_centroid(leaf));
    rep.leaf_norms.push_back(graph_norm_scaled(leaf));
    double gap = 0.0;
    for (int k = 0; k < n; ++k) gap += sq(rep.centroids.back()[k] - center.center[k]);
    rep.gaps.push_back(std::sqrt(gap));
  }
  if (rep.gaps.size() >= 2) {
    bool positive = true;
    for (double g : rep.gaps) positive = positive && g > 1e-14;
    if (positive) rep.fitted_rate = loglog_slope(radii, rep.gaps).slope;
  }
  rep.completed = true;
  return rep;
}

}  // namespace isolab
