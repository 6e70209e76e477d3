#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "isolab/manifold.hpp"

namespace isolab {

/// Rotationally symmetric geometry on (a, b) x S^{n-1} described by the area,
/// mean curvature and scalar curvature of its coordinate spheres.
/// Monotonicity statements apply only after verify() has confirmed the
/// area-monotone and nonnegative-scalar-curvature flags by sampling.
struct RotProfile {
  int n = 3;
  double a = 0.0, b = 0.0;
  std::function<double(double)> area;
  std::function<double(double)> mean_curvature;
  std::function<double(double)> scalar_curvature;
  std::string provenance;  // "schwarzschild" | "cone" | "euclidean" | "user"
  bool verified = false;
  bool area_nondecreasing = false;
  bool scalar_nonnegative = false;

  /// samples the flags on a uniform grid; returns true if both hold
  bool verify(int samples = 512, double tol = 1e-12);
};

RotProfile schwarzschild_rot_profile(const ManifoldSpec& spec, double a, double b);
RotProfile euclidean_rot_profile(int n, double a, double b);
/// the cone (0, inf) x S^{n-1} with metric alpha^{-2} ds^2 + alpha^{2/(n-1)} s^2 g_S
RotProfile cone_rot_profile(int n, double alpha, double a, double b);
/// linear interpolation through a sampled (r, A, H, R) table
RotProfile table_rot_profile(int n, const std::vector<double>& r, const std::vector<double>& A,
                             const std::vector<double>& H, const std::vector<double>& R);

/// Quasi-local mass of a sphere of area A and constant mean curvature H in
/// dimension n. With normalized = true (default) the constant is fixed so
/// that centered background coordinate spheres report exactly the mass m;
/// normalized = false exposes the raw expression, which is twice that.
double hawking_mass(int n, double A, double H, bool normalized = true);

struct HawkingProfileResult {
  std::vector<double> radii;
  std::vector<double> masses;
  double max_violation = 0.0;  // largest downward step along the ladder
};

/// Masses at the sample radii plus a monotonicity report. Refuses profiles
/// whose flags have not been verified.
HawkingProfileResult hawking_profile(const RotProfile& profile, const std::vector<double>& radii,
                                     bool normalized = true);

/// plain-text (r, A, H, R) table exchange
void write_rot_profile(std::ostream& os, const RotProfile& profile,
                       const std::vector<double>& radii);
RotProfile read_rot_profile(std::istream& is, int n);

}  // namespace isolab
