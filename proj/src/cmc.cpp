#include "isolab/cmc.hpp"

#include <algorithm>
#include <cmath>

#include "isolab/linalg.hpp"
#include "isolab/numerics.hpp"
#include "isolab/quadrature.hpp"

namespace isolab {

namespace {

/// directional derivative of the nodal H map along the coefficient vector v
std::vector<double> nodal_dH(const SphereGrid& grid, const Metric& metric, double R,
                             const VecN& center, const GridFields& u, const GridFields& v) {
  const int nodes = grid.node_count();
  std::vector<double> out(nodes);
  const bool full = grid.mode() == GridMode::Full2Sphere;
  for (int p = 0; p < nodes; ++p) {
    if (full) {
      Dual<1> du(u.f[p]), dut(u.ft[p]), dup(u.fp[p]), dutt(u.ftt[p]), dutp(u.ftp[p]),
          dupp(u.fpp[p]);
      du.d[0] = v.f[p];
      dut.d[0] = v.ft[p];
      dup.d[0] = v.fp[p];
      dutt.d[0] = v.ftt[p];
      dutp.d[0] = v.ftp[p];
      dupp.d[0] = v.fpp[p];
      out[p] = graph_node_full<Dual<1>>(metric, R, center, grid.theta(p), grid.phi(p), du, dut,
                                        dup, dutt, dutp, dupp)
                   .H.d[0];
    } else {
      Dual<1> du(u.f[p]), dut(u.ft[p]), dutt(u.ftt[p]);
      du.d[0] = v.f[p];
      dut.d[0] = v.ft[p];
      dutt.d[0] = v.ftt[p];
      out[p] = graph_node_axi<Dual<1>>(metric, R, center, grid.theta(p), du, dut, dutt).H.d[0];
    }
  }
  return out;
}

/// diagonal spectral preconditioner from round-sphere estimates of the
/// Jacobi operator: a_l ~ omega_bar (l(l+n-2)/rho_g^2 - w_bar)
std::vector<double> preconditioner_diagonal(const SphereGrid& grid, const GraphSurface& s) {
  const int n = grid.dim();
  const double A = induced_area(s);
  const double rho_g2 = std::pow(A / unit_sphere_area(n), 2.0 / (n - 1.0));
  double omega_bar = 0.0, wsum = 0.0, area = 0.0;
  for (int p = 0; p < s.nodes(); ++p) {
    const double w = s.grid->weight(p) * s.mu_density[p];
    area += w;
    omega_bar += w * s.omega_ray[p];
    wsum += w * s.hsq[p];
  }
  omega_bar /= area;
  const double m = s.metric->mass();
  const double w_bar =
      wsum / area - (n - 1.0) * (n - 2.0) * m / std::pow(rho_g2, 0.5 * n);
  std::vector<double> diag(grid.basis_size());
  double amax = 0.0;
  for (int idx = 0; idx < grid.basis_size(); ++idx) {
    const int l = grid.basis_l(idx);
    diag[idx] = omega_bar * (static_cast<double>(l) * (l + n - 2) / rho_g2 - w_bar);
    amax = std::max(amax, std::abs(diag[idx]));
  }
  for (double& d : diag)
    if (std::abs(d) < 1e-8 * amax) d = (d >= 0.0 ? 1.0 : -1.0) * 1e-8 * amax;
  return diag;
}

/// dense Jacobian for zonal grids via per-node dual partials
Matrix assemble_dense_jacobian(const SphereGrid& grid, const Metric& metric, double R,
                               const VecN& center, const GridFields& u) {
  const int nodes = grid.node_count();
  const int nb = grid.basis_size();
  std::vector<double> s0(nodes), s1(nodes), s2(nodes);
  for (int p = 0; p < nodes; ++p) {
    const NodeGeometry<Dual<3>> geo = graph_node_axi<Dual<3>>(
        metric, R, center, grid.theta(p), Dual<3>(u.f[p], 0), Dual<3>(u.ft[p], 1),
        Dual<3>(u.ftt[p], 2));
    s0[p] = geo.H.d[0];
    s1[p] = geo.H.d[1];
    s2[p] = geo.H.d[2];
  }
  Matrix J(nb, nb, 0.0);
  for (int p = 0; p < nodes; ++p) {
    const double w = grid.weight(p);
    for (int j = 0; j < nb; ++j) {
      const double dj = s0[p] * grid.psi(p, j) + s1[p] * grid.psi_dtheta(p, j) +
                        s2[p] * grid.psi_d2theta(p, j);
      if (dj == 0.0) continue;
      for (int i = 0; i < nb; ++i) J(i, j) += w * grid.psi(p, i) * dj;
    }
  }
  return J;
}

}  // namespace

std::vector<double> harmonic_seed(const SphereGrid& grid, int l, double amp) {
  std::vector<double> c(grid.basis_size(), 0.0);
  int idx = -1;
  for (int i = 0; i < grid.basis_size(); ++i)
    if (grid.basis_l(i) == l) {
      idx = i;
      break;
    }
  if (idx < 0) throw std::invalid_argument("harmonic_seed: degree beyond the basis band limit");
  double peak = 0.0;
  for (int p = 0; p < grid.node_count(); ++p) peak = std::max(peak, std::abs(grid.psi(p, idx)));
  c[idx] = amp / peak;
  return c;
}

double newton_quadratic_ratio(const std::vector<double>& history, int tail) {
  double worst = 0.0;
  const int n = static_cast<int>(history.size());
  for (int k = std::max(0, n - 1 - tail); k + 1 < n; ++k) {
    if (history[k] <= 0.0) continue;
    worst = std::max(worst, history[k + 1] / (history[k] * history[k]));
  }
  return worst;
}

GraphSurface newton_solve_cmc(std::shared_ptr<const SphereGrid> grid, const Metric& metric,
                              double R, double H_target, const std::vector<double>& u0,
                              NewtonReport* report, const NewtonOptions& opt) {
  NewtonReport local;
  NewtonReport& rep = report ? *report : local;
  rep = NewtonReport{};
  const VecN center{};
  const bool full = grid->mode() == GridMode::Full2Sphere;
  const double scale = std::abs(H_target);

  std::vector<double> coeffs = u0;
  GraphSurface s = build_surface(grid, metric, R, coeffs, center);
  double res_max = cmc_residual_max(s, H_target);
  rep.residual_history.push_back(res_max);

  for (int it = 0; it < opt.max_iterations; ++it) {
    if (res_max <= opt.tol_rel * scale) {
      rep.converged = true;
      break;
    }
    // Galerkin residual in coefficient space
    std::vector<double> nodal(s.nodes());
    for (int p = 0; p < s.nodes(); ++p) nodal[p] = s.H[p] - H_target;
    const std::vector<double> F = grid->analyze(nodal);

    std::vector<double> delta;
    if (full) {
      const std::vector<double> diag = preconditioner_diagonal(*grid, s);
      auto apply_A = [&](const std::vector<double>& v) {
        GridFields vf;
        grid->synthesize(v, vf);
        return grid->analyze(nodal_dH(*grid, metric, R, center, s.ufields, vf));
      };
      auto apply_M = [&](const std::vector<double>& v) {
        std::vector<double> out(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / diag[i];
        return out;
      };
      std::vector<double> rhs = F;
      for (double& x : rhs) x = -x;
      const GmresResult lin = gmres(apply_A, apply_M, rhs, opt.gmres_rtol, opt.gmres_maxit);
      if (!lin.converged && lin.rel_residual > 1e-6) {
        rep.failure = "linear solve failed: Jacobi operator numerically singular or "
                      "ill-conditioned";
        break;
      }
      delta = lin.x;
    } else {
      Matrix J = assemble_dense_jacobian(*grid, metric, R, center, s.ufields);
      std::vector<double> rhs = F;
      for (double& x : rhs) x = -x;
      try {
        const LuSolver lu(std::move(J));
        delta = lu.solve(rhs);
      } catch (const std::exception&) {
        rep.failure = "Jacobi operator numerically singular (dense factorization failed)";
        break;
      }
    }

    // backtracking line search on the coefficient residual norm
    const double f0 = norm2(F);
    double step = 1.0;
    bool accepted = false;
    for (int bt = 0; bt <= opt.max_backtracks; ++bt) {
      std::vector<double> trial = coeffs;
      axpy(step, delta, trial);
      GraphSurface strial;
      try {
        strial = build_surface(grid, metric, R, trial, center);
      } catch (const std::exception&) {
        step *= 0.5;
        continue;
      }
      std::vector<double> tn(strial.nodes());
      for (int p = 0; p < strial.nodes(); ++p) tn[p] = strial.H[p] - H_target;
      const double f1 = norm2(grid->analyze(tn));
      if (f1 <= (1.0 - 1e-4 * step) * f0 || f1 <= 1e-16 * scale) {
        coeffs = std::move(trial);
        s = std::move(strial);
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      rep.failure = "divergence: damping exhausted without residual decrease";
      break;
    }
    res_max = cmc_residual_max(s, H_target);
    rep.residual_history.push_back(res_max);
    ++rep.iterations;
  }
  if (!rep.converged && rep.failure.empty() && res_max > opt.tol_rel * scale)
    rep.failure = "maximum Newton iterations reached";
  if (res_max <= opt.tol_rel * scale) rep.converged = true;
  rep.final_residual = res_max;
  rep.norm_scaled = graph_norm_scaled(s);
  if (!rep.converged && !report)
    throw std::runtime_error("newton_solve_cmc: " + rep.failure);
  return s;
}

GraphSurface continuation_path(std::shared_ptr<const SphereGrid> grid, const Metric& target,
                               const Metric& background, double R, double H_target,
                               ContinuationReport* report, const ContinuationOptions& opt) {
  ContinuationReport local;
  ContinuationReport& rep = report ? *report : local;
  rep = ContinuationReport{};
  rep.t_path.push_back(1.0);

  std::vector<double> u_prev(grid->basis_size(), 0.0);  // u = 0 at t = 1
  std::vector<double> u_prev2 = u_prev;
  double t = 1.0, dt = opt.dt_initial, dt_prev = 0.0;
  GraphSurface current = build_surface(grid, background, R, u_prev);

  while (t > 0.0) {
    const double t_next = std::max(0.0, t - dt);
    auto g_t = std::make_shared<BlendedMetric>(background, target, t_next);
    // secant predictor
    std::vector<double> seed = u_prev;
    if (dt_prev > 0.0) {
      for (std::size_t i = 0; i < seed.size(); ++i)
        seed[i] += (u_prev[i] - u_prev2[i]) * ((t - t_next) / dt_prev);
    }
    NewtonReport nrep;
    GraphSurface snext = newton_solve_cmc(grid, *g_t, R, H_target, seed, &nrep, opt.newton);
    snext.metric_owner = g_t;
    ++rep.newton_solves;
    if (!nrep.converged) {
      dt *= 0.5;
      if (dt < opt.dt_min) {
        rep.failure = "continuation stuck: step underflow at t = " + std::to_string(t);
        rep.last_good_t = t;
        if (!report) throw std::runtime_error("continuation_path: " + rep.failure);
        return current;
      }
      continue;
    }
    // diagnostics: ||du/dt||_B between accepted steps
    std::vector<double> diff(grid->basis_size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = snext.u_coeffs[i] - u_prev[i];
    GridFields df;
    grid->synthesize(diff, df);
    rep.du_dt_norm.push_back(scaled_graph_norm(*grid, df, R) / (t - t_next));
    rep.t_path.push_back(t_next);

    u_prev2 = u_prev;
    u_prev = snext.u_coeffs;
    dt_prev = t - t_next;
    t = t_next;
    current = std::move(snext);
    if (nrep.iterations <= 4) dt = std::min(opt.dt_max, dt * 1.5);
  }
  rep.completed = true;
  rep.last_good_t = 0.0;
  // rebuild against the target metric itself so the returned surface does
  // not reference a temporary blend
  GraphSurface final_surface = build_surface(grid, target, R, u_prev);
  return final_surface;
}

CurvatureEstimateReport curvature_estimate_check(const Metric& target, const Metric& background,
                                                 const std::vector<double>& radii, int axi_nodes,
                                                 int axi_lmax) {
  CurvatureEstimateReport rep;
  const int n = target.dim();
  auto grid = std::make_shared<SphereGrid>(SphereGrid::axisymmetric(n, axi_nodes, axi_lmax));
  for (double R : radii) {
    const double H_target =
        sphere_mean_curvature_schwarzschild(background.spec(), R);
    ContinuationReport crep;
    GraphSurface s = continuation_path(grid, target, background, R, H_target, &crep);
    if (!crep.completed)
      throw std::runtime_error("curvature_estimate_check: continuation failed at R = " +
                               std::to_string(R));
    CurvatureEstimatePoint pt;
    pt.R = R;
    pt.cmc_residual = cmc_residual_max(s, H_target);
    pt.norm_scaled = graph_norm_scaled(s);
    double hring = 0.0, hrmin = 1e300, hrmax = 0.0;
    for (int p = 0; p < s.nodes(); ++p) {
      hring = std::max(hring, std::sqrt(std::max(0.0, s.hring_sq[p])));
      hrmin = std::min(hrmin, std::abs(s.H[p] * R));
      hrmax = std::max(hrmax, std::abs(s.H[p] * R));
    }
    pt.sup_hring = hring;
    pt.HR_min = hrmin;
    pt.HR_max = hrmax;
    rep.points.push_back(pt);
  }
  if (rep.points.size() >= 2) {
    std::vector<double> xs, ys;
    for (const auto& pt : rep.points)
      if (pt.sup_hring > 0.0) {
        xs.push_back(pt.R);
        ys.push_back(pt.sup_hring);
      }
    if (xs.size() >= 2) {
      const SlopeFit fit = loglog_slope(xs, ys);
      rep.slope = fit.slope;
      rep.constant = std::exp(fit.intercept);
    }
  }
  return rep;
}

}  // namespace isolab
