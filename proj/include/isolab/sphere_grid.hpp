#pragma once

#include <memory>
#include <vector>

#include "isolab/manifold.hpp"

namespace isolab {

enum class GridMode { Full2Sphere, Axisymmetric };

/// Nodal values of a scalar field on the grid together with its first and
/// second chart derivatives (theta/phi in full mode, theta only otherwise).
struct GridFields {
  std::vector<double> f, ft, fp, ftt, ftp, fpp;
};

/// Spectral discretization of the unit sphere S^{n-1}.
///
/// Full2Sphere (n = 3): Gauss-Legendre colatitudes x uniform longitudes with
/// a real spherical-harmonic basis. Axisymmetric (any n >= 3): Gauss-Jacobi
/// colatitudes for the sin^{n-2} measure with a normalized zonal Gegenbauer
/// basis. Differentiation is spectral: derivative tables of the basis are
/// evaluated by recurrence, so all operators converge geometrically in the
/// band limit.
class SphereGrid {
 public:
  static SphereGrid full(int n_theta = 48, int n_phi = 96, int lmax = 20);
  static SphereGrid axisymmetric(int n, int n_nodes = 256, int lmax = 80);

  GridMode mode() const { return mode_; }
  int dim() const { return dim_; }              // ambient dimension n
  int node_count() const { return static_cast<int>(theta_.size()); }
  int basis_size() const { return static_cast<int>(basis_l_.size()); }
  int lmax() const { return lmax_; }

  double theta(int p) const { return theta_[p]; }
  double phi(int p) const { return phi_[p]; }
  /// quadrature weight integrating over the unit S^{n-1}; weights sum to
  /// the full sphere area
  double weight(int p) const { return weight_[p]; }

  int basis_l(int idx) const { return basis_l_[idx]; }

  /// nodal basis value / theta-derivative / phi-derivative
  double psi(int p, int idx) const;
  double psi_dtheta(int p, int idx) const;
  double psi_dphi(int p, int idx) const;
  double psi_d2theta(int p, int idx) const;

  /// synthesize nodal fields (with chart derivatives) from coefficients
  void synthesize(const std::vector<double>& coeffs, GridFields& out) const;

  /// round-measure projection of nodal values onto the basis
  std::vector<double> analyze(const std::vector<double>& nodal) const;

  /// eigenvalue of the round Laplace-Beltrami operator on degree l
  double round_laplace_eigenvalue(int l) const { return -static_cast<double>(l) * (l + dim_ - 2); }

 private:
  SphereGrid() = default;

  GridMode mode_ = GridMode::Axisymmetric;
  int dim_ = 3;
  int lmax_ = 0;
  int n_theta_ = 0, n_phi_ = 0;

  std::vector<double> theta_, phi_, weight_;
  std::vector<double> cos_theta_, sin_theta_;

  // basis bookkeeping: degree l per index; full mode also order m and parity
  std::vector<int> basis_l_;
  std::vector<int> basis_m_;     // full mode: order; axisym: 0
  std::vector<int> basis_trig_;  // 0 cos, 1 sin (full mode)

  // value tables: tab[k][i] for theta-node i; k enumerates (l, m) pairs in
  // full mode and l in axisymmetric mode
  std::vector<std::vector<double>> ptab_, dptab_, d2ptab_;
  std::vector<int> pair_index_;  // full mode: basis idx -> (l, m) pair row

  void build_full_tables();
  void build_axi_tables();
};

}  // namespace isolab
