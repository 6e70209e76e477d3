#pragma once

#include "isolab/surface.hpp"

namespace isolab {

/// Discrete residuals of the Codazzi and Gauss equations on an axisymmetric
/// graph sphere, max-norm over the nodes. Consistency check of the surface
/// geometry pipeline: both vanish at the discretization error of the
/// spectral profile derivatives.
struct GaussCodazziResidual {
  double gauss = 0.0;
  double codazzi = 0.0;
};

GaussCodazziResidual gauss_codazzi_residual(GraphSurface& surface);

/// Residual of the traceless-magnitude form of Simons' identity
/// (1/2) lap |hring|^2 = <hring, Hess H> + |grad hring|^2 + H tr hring^3
///   + H^2 |hring|^2/(n-1) - |hring|^4 + curvature contractions
/// evaluated at the grid nodes of an axisymmetric surface; returns the max
/// absolute difference of the two sides.
double simons_residual(GraphSurface& surface);

}  // namespace isolab
