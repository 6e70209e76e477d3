#pragma once

#include <vector>

#include "isolab/surface.hpp"

namespace isolab {

/// Spectral data of the Jacobi operator L = -lap - (|h|^2 + Rc(nu,nu)) on a
/// graph sphere, assembled as a symmetric Galerkin pencil weighted by the
/// induced area element. In axisymmetric mode the spectrum is that of the
/// zonal sector.
struct SpectrumReport {
  std::vector<double> eigenvalues;  // lowest k of the Jacobi pencil
  double mu0 = 0.0;                 // lowest eigenvalue
  double mu1 = 0.0;                 // second eigenvalue
  double lambda1 = 0.0;             // lowest on area-weighted mean-zero functions
  double laplace_first_nonzero = 0.0;

  double predicted_mu0 = 0.0;      // -H^2/(n-1) + (n-1)(n-2) m / R^n
  double predicted_lambda1 = 0.0;  // n(n-1) m / R^n
  double lambda1_ratio = 0.0;      // lambda1 / predicted_lambda1 (0 when m = 0)

  double assembly_asymmetry = 0.0;  // max |A - A^T| before symmetrization
  double constraint_residual = 0.0; // |m . c| for the lambda1 eigenvector

  bool cross_checked = false;
  bool converged_between_levels = true;
  double cross_check_delta = 0.0;
};

SpectrumReport jacobi_spectrum(GraphSurface& surface, int k, bool cross_check = false);

/// eigenvalues of the Laplace-Beltrami pencil alone (ascending, first `count`)
std::vector<double> laplace_spectrum(GraphSurface& surface, int count);

}  // namespace isolab
