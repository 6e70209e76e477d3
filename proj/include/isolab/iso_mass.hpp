#pragma once

#include <string>
#include <vector>

#include "isolab/metric.hpp"

namespace isolab {

struct ProfilePoint {
  double V = 0.0;  // enclosed volume (outside the horizon when one exists)
  double A = 0.0;  // boundary area
  double r = 0.0;  // centered radius with matching volume
  std::string source = "centered-sphere";
};

/// Isoperimetric profile along centered coordinate spheres: for each volume,
/// the radius is found by bisection on the radial volume quadrature and the
/// area comes from the closed form.
std::vector<ProfilePoint> schwarzschild_profile(double m, int n,
                                                const std::vector<double>& volumes);

struct MassEstimate {
  std::vector<double> radii;
  std::vector<double> quasi_mass;  // per-radius 2/A (V - A^{3/2} / (6 sqrt pi))
  double estimate = 0.0;           // extrapolated limit
  bool modified = false;
};

/// Quasi-mass along centered coordinate balls in dimension 3, Richardson
/// extrapolated. Supports the plain background as well as perturbed metrics
/// whose volumes are integrated by quadrature.
MassEstimate iso_mass_exhaustion(const Metric& metric, const std::vector<double>& radii);

/// Same functional evaluated on an isoperimetric profile; the limsup is
/// realized as the max of Richardson extrapolants over tail windows.
MassEstimate modified_iso_mass(const std::vector<ProfilePoint>& profile);

/// Arithmetic replay of the volume lower bound: at every profile point where
/// the quasi-mass exceeds m_tilde/2, check L^3(Omega) >= (m_tilde/4) A.
struct VolumeLowerBoundCheck {
  bool holds = true;
  double worst_margin = 0.0;  // most negative (V - m_tilde A / 4); >= 0 when holds
  int points_checked = 0;
};

VolumeLowerBoundCheck volume_lower_bound_replay(const std::vector<ProfilePoint>& profile,
                                                double m_tilde);

}  // namespace isolab
