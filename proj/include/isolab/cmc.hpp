#pragma once

#include <memory>
#include <string>
#include <vector>

#include "isolab/metric.hpp"
#include "isolab/surface.hpp"

namespace isolab {

struct NewtonOptions {
  double tol_rel = 1e-11;  // max-norm CMC residual relative to |H_target|
  int max_iterations = 40;
  int max_backtracks = 30;   // halving steps in the line search
  double gmres_rtol = 1e-12;
  int gmres_maxit = 400;
};

struct NewtonReport {
  bool converged = false;
  int iterations = 0;
  std::vector<double> residual_history;  // max-norm nodal residual per iterate
  double final_residual = 0.0;
  double norm_scaled = 0.0;  // ||u||_B of the accepted solution
  std::string failure;
};

/// Newton solution of H(graph u) = H_target. The linearization is the exact
/// directional derivative of the discrete residual (the Jacobi operator
/// acting through the normal speed), evaluated with dual numbers; full
/// 2-sphere grids solve the correction by preconditioned GMRES, zonal grids
/// assemble the dense Jacobian and factor it.
GraphSurface newton_solve_cmc(std::shared_ptr<const SphereGrid> grid, const Metric& metric,
                              double R, double H_target, const std::vector<double>& u0,
                              NewtonReport* report = nullptr, const NewtonOptions& opt = {});

/// largest ratio r_{k+1}/r_k^2 over the final `tail` accepted iterations;
/// used to verify quadratic convergence
double newton_quadratic_ratio(const std::vector<double>& history, int tail = 3);

struct ContinuationOptions {
  double dt_initial = 0.25;
  double dt_min = 1e-4;
  double dt_max = 0.5;
  NewtonOptions newton;
};

struct ContinuationReport {
  bool completed = false;
  double last_good_t = 1.0;
  std::vector<double> t_path;
  std::vector<double> du_dt_norm;  // ||u_{k+1} - u_k||_B / dt along the path
  int newton_solves = 0;
  std::string failure;
};

/// Path-follows H(u_t; g_t) = H_target along g_t = t*background + (1-t)*target
/// from t = 1 (background, u = 0) to t = 0 (the target metric), with
/// adaptive step halving on Newton failure.
GraphSurface continuation_path(std::shared_ptr<const SphereGrid> grid, const Metric& target,
                               const Metric& background, double R, double H_target,
                               ContinuationReport* report = nullptr,
                               const ContinuationOptions& opt = {});

/// coefficient vector representing amp * (degree-l harmonic), scaled so the
/// sup over nodes is amp; full grids use the m = 0 row of degree l
std::vector<double> harmonic_seed(const SphereGrid& grid, int l, double amp);

struct CurvatureEstimatePoint {
  double R = 0.0;
  double sup_hring = 0.0;
  double norm_scaled = 0.0;
  double HR_min = 0.0, HR_max = 0.0;
  double cmc_residual = 0.0;
};

struct CurvatureEstimateReport {
  std::vector<CurvatureEstimatePoint> points;
  double slope = 0.0;      // fitted log-log slope of sup|hring| vs R
  double constant = 0.0;   // fitted prefactor
};

/// Solves the CMC sphere for each radius (continuation from the background)
/// and fits the decay of sup |hring| against R.
CurvatureEstimateReport curvature_estimate_check(const Metric& target, const Metric& background,
                                                 const std::vector<double>& radii,
                                                 int axi_nodes = 256, int axi_lmax = 48);

}  // namespace isolab
