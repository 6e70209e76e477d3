#include "isolab/sphere_grid.hpp"

#include <cmath>
#include <stdexcept>

#include "isolab/numerics.hpp"
#include "isolab/quadrature.hpp"

namespace isolab {

namespace {

/// fully normalized associated Legendre values, theta-derivatives and second
/// derivatives at one colatitude, for all 0 <= m <= l <= lmax; row layout
/// pair(l, m) = l(l+1)/2 + m
void legendre_tables(double theta, int lmax, std::vector<double>& P, std::vector<double>& dP,
                     std::vector<double>& d2P) {
  const int pairs = (lmax + 1) * (lmax + 2) / 2;
  P.assign(pairs, 0.0);
  dP.assign(pairs, 0.0);
  d2P.assign(pairs, 0.0);
  const double ct = std::cos(theta), st = std::sin(theta);
  auto at = [](int l, int m) { return l * (l + 1) / 2 + m; };
  P[0] = std::sqrt(1.0 / (4.0 * M_PI));
  for (int m = 1; m <= lmax; ++m)
    P[at(m, m)] = std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * st * P[at(m - 1, m - 1)];
  for (int m = 0; m < lmax; ++m)
    P[at(m + 1, m)] = std::sqrt(2.0 * m + 3.0) * ct * P[at(m, m)];
  for (int m = 0; m <= lmax; ++m)
    for (int l = m + 2; l <= lmax; ++l) {
      const double a = std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - m * m));
      const double b = std::sqrt((sq(l - 1.0) - m * m) / (4.0 * sq(l - 1.0) - 1.0));
      P[at(l, m)] = a * (ct * P[at(l - 1, m)] - b * P[at(l - 2, m)]);
    }
  // dP/dtheta = (l ct P_lm - c_lm P_{l-1,m}) / st
  for (int m = 0; m <= lmax; ++m)
    for (int l = m; l <= lmax; ++l) {
      double num = l * ct * P[at(l, m)];
      if (l > m) {
        const double c = std::sqrt((2.0 * l + 1.0) * (static_cast<double>(l) * l - m * m) /
                                   (2.0 * l - 1.0));
        num -= c * P[at(l - 1, m)];
      }
      dP[at(l, m)] = num / st;
      // associated Legendre equation: P'' = -cot P' + (m^2/st^2 - l(l+1)) P
      d2P[at(l, m)] = -ct / st * dP[at(l, m)] +
                      (static_cast<double>(m) * m / (st * st) - static_cast<double>(l) * (l + 1)) *
                          P[at(l, m)];
    }
}

/// normalized zonal basis on S^{n-1}: Zbar_l(theta) with unit L^2 norm for
/// the sphere measure; values plus first/second theta-derivatives
void gegenbauer_tables(double theta, int n, int lmax, std::vector<double>& Z,
                       std::vector<double>& dZ, std::vector<double>& d2Z) {
  const double lambda = 0.5 * (n - 2);
  const double t = std::cos(theta), st = std::sin(theta);
  auto family = [lmax](double lam, double x, std::vector<double>& C) {
    C.assign(lmax + 1, 0.0);
    if (lmax >= 0) C[0] = 1.0;
    if (lmax >= 1) C[1] = 2.0 * lam * x;
    for (int l = 2; l <= lmax; ++l)
      C[l] = (2.0 * x * (l + lam - 1.0) * C[l - 1] - (l + 2.0 * lam - 2.0) * C[l - 2]) / l;
  };
  std::vector<double> C0, C1, C2;
  family(lambda, t, C0);
  family(lambda + 1.0, t, C1);
  family(lambda + 2.0, t, C2);
  Z.assign(lmax + 1, 0.0);
  dZ.assign(lmax + 1, 0.0);
  d2Z.assign(lmax + 1, 0.0);
  const double omega_sub = unit_sphere_area(n - 1);
  for (int l = 0; l <= lmax; ++l) {
    // || C_l ||^2 for the weight (1-t^2)^{lambda-1/2}
    const double h = M_PI * std::pow(2.0, 1.0 - 2.0 * lambda) *
                     std::exp(std::lgamma(l + 2.0 * lambda) - std::lgamma(l + 1.0) -
                              2.0 * std::lgamma(lambda)) /
                     (l + lambda);
    const double norm = 1.0 / std::sqrt(h * omega_sub);
    const double dC = (l >= 1) ? 2.0 * lambda * C1[l - 1] : 0.0;
    const double ddC = (l >= 2) ? 4.0 * lambda * (lambda + 1.0) * C2[l - 2] : 0.0;
    Z[l] = norm * C0[l];
    dZ[l] = -norm * st * dC;
    d2Z[l] = norm * (-t * dC + st * st * ddC);
  }
}

}  // namespace

SphereGrid SphereGrid::full(int n_theta, int n_phi, int lmax) {
  if (n_phi < 2 * lmax + 2) throw std::invalid_argument("SphereGrid::full: n_phi too small for lmax");
  if (n_theta <= lmax) throw std::invalid_argument("SphereGrid::full: n_theta must exceed lmax");
  SphereGrid g;
  g.mode_ = GridMode::Full2Sphere;
  g.dim_ = 3;
  g.lmax_ = lmax;
  g.n_theta_ = n_theta;
  g.n_phi_ = n_phi;
  const QuadRule gl = gauss_legendre(n_theta);
  const int nodes = n_theta * n_phi;
  g.theta_.resize(nodes);
  g.phi_.resize(nodes);
  g.weight_.resize(nodes);
  g.cos_theta_.resize(nodes);
  g.sin_theta_.resize(nodes);
  for (int i = 0; i < n_theta; ++i) {
    const double th = std::acos(gl.nodes[n_theta - 1 - i]);  // theta increasing from pole
    for (int j = 0; j < n_phi; ++j) {
      const int p = i * n_phi + j;
      g.theta_[p] = th;
      g.phi_[p] = 2.0 * M_PI * j / n_phi;
      g.weight_[p] = gl.weights[n_theta - 1 - i] * (2.0 * M_PI / n_phi);
      g.cos_theta_[p] = std::cos(th);
      g.sin_theta_[p] = std::sin(th);
    }
  }
  for (int l = 0; l <= lmax; ++l) {
    g.basis_l_.push_back(l);
    g.basis_m_.push_back(0);
    g.basis_trig_.push_back(0);
    for (int m = 1; m <= l; ++m) {
      for (int trig = 0; trig < 2; ++trig) {
        g.basis_l_.push_back(l);
        g.basis_m_.push_back(m);
        g.basis_trig_.push_back(trig);
      }
    }
  }
  g.build_full_tables();
  return g;
}

SphereGrid SphereGrid::axisymmetric(int n, int n_nodes, int lmax) {
  if (n < 3 || n > kMaxDim) throw std::invalid_argument("SphereGrid::axisymmetric: bad dimension");
  if (n_nodes <= lmax)
    throw std::invalid_argument("SphereGrid::axisymmetric: node count must exceed lmax");
  SphereGrid g;
  g.mode_ = GridMode::Axisymmetric;
  g.dim_ = n;
  g.lmax_ = lmax;
  g.n_theta_ = n_nodes;
  g.n_phi_ = 1;
  const QuadRule gg = gauss_gegenbauer(n_nodes, 0.5 * (n - 3));
  const double omega_sub = unit_sphere_area(n - 1);
  g.theta_.resize(n_nodes);
  g.phi_.assign(n_nodes, 0.0);
  g.weight_.resize(n_nodes);
  g.cos_theta_.resize(n_nodes);
  g.sin_theta_.resize(n_nodes);
  for (int i = 0; i < n_nodes; ++i) {
    const double t = gg.nodes[n_nodes - 1 - i];
    g.theta_[i] = std::acos(t);
    g.weight_[i] = gg.weights[n_nodes - 1 - i] * omega_sub;
    g.cos_theta_[i] = t;
    g.sin_theta_[i] = std::sin(g.theta_[i]);
  }
  for (int l = 0; l <= lmax; ++l) {
    g.basis_l_.push_back(l);
    g.basis_m_.push_back(0);
    g.basis_trig_.push_back(0);
  }
  g.build_axi_tables();
  return g;
}

void SphereGrid::build_full_tables() {
  const int pairs = (lmax_ + 1) * (lmax_ + 2) / 2;
  ptab_.assign(pairs, std::vector<double>(n_theta_));
  dptab_.assign(pairs, std::vector<double>(n_theta_));
  d2ptab_.assign(pairs, std::vector<double>(n_theta_));
  std::vector<double> P, dP, d2P;
  for (int i = 0; i < n_theta_; ++i) {
    legendre_tables(theta_[i * n_phi_], lmax_, P, dP, d2P);
    for (int k = 0; k < pairs; ++k) {
      ptab_[k][i] = P[k];
      dptab_[k][i] = dP[k];
      d2ptab_[k][i] = d2P[k];
    }
  }
  pair_index_.resize(basis_size());
  for (int idx = 0; idx < basis_size(); ++idx) {
    const int l = basis_l_[idx], m = basis_m_[idx];
    pair_index_[idx] = l * (l + 1) / 2 + m;
  }
}

void SphereGrid::build_axi_tables() {
  ptab_.assign(lmax_ + 1, std::vector<double>(n_theta_));
  dptab_.assign(lmax_ + 1, std::vector<double>(n_theta_));
  d2ptab_.assign(lmax_ + 1, std::vector<double>(n_theta_));
  std::vector<double> Z, dZ, d2Z;
  for (int i = 0; i < n_theta_; ++i) {
    gegenbauer_tables(theta_[i], dim_, lmax_, Z, dZ, d2Z);
    for (int l = 0; l <= lmax_; ++l) {
      ptab_[l][i] = Z[l];
      dptab_[l][i] = dZ[l];
      d2ptab_[l][i] = d2Z[l];
    }
  }
  pair_index_.resize(basis_size());
  for (int idx = 0; idx < basis_size(); ++idx) pair_index_[idx] = idx;
}

double SphereGrid::psi(int p, int idx) const {
  const int i = (mode_ == GridMode::Full2Sphere) ? p / n_phi_ : p;
  const double base = ptab_[pair_index_[idx]][i];
  if (mode_ == GridMode::Axisymmetric || basis_m_[idx] == 0) return base;
  const double arg = basis_m_[idx] * phi_[p];
  return std::sqrt(2.0) * base * (basis_trig_[idx] == 0 ? std::cos(arg) : std::sin(arg));
}

double SphereGrid::psi_dtheta(int p, int idx) const {
  const int i = (mode_ == GridMode::Full2Sphere) ? p / n_phi_ : p;
  const double base = dptab_[pair_index_[idx]][i];
  if (mode_ == GridMode::Axisymmetric || basis_m_[idx] == 0) return base;
  const double arg = basis_m_[idx] * phi_[p];
  return std::sqrt(2.0) * base * (basis_trig_[idx] == 0 ? std::cos(arg) : std::sin(arg));
}

double SphereGrid::psi_d2theta(int p, int idx) const {
  const int i = (mode_ == GridMode::Full2Sphere) ? p / n_phi_ : p;
  const double base = d2ptab_[pair_index_[idx]][i];
  if (mode_ == GridMode::Axisymmetric || basis_m_[idx] == 0) return base;
  const double arg = basis_m_[idx] * phi_[p];
  return std::sqrt(2.0) * base * (basis_trig_[idx] == 0 ? std::cos(arg) : std::sin(arg));
}

double SphereGrid::psi_dphi(int p, int idx) const {
  if (mode_ == GridMode::Axisymmetric || basis_m_[idx] == 0) return 0.0;
  const int i = p / n_phi_;
  const int m = basis_m_[idx];
  const double base = ptab_[pair_index_[idx]][i];
  const double arg = m * phi_[p];
  return std::sqrt(2.0) * base * m * (basis_trig_[idx] == 0 ? -std::sin(arg) : std::cos(arg));
}

void SphereGrid::synthesize(const std::vector<double>& coeffs, GridFields& out) const {
  const int nodes = node_count();
  out.f.assign(nodes, 0.0);
  out.ft.assign(nodes, 0.0);
  out.ftt.assign(nodes, 0.0);
  out.fp.assign(nodes, 0.0);
  out.ftp.assign(nodes, 0.0);
  out.fpp.assign(nodes, 0.0);
  if (mode_ == GridMode::Axisymmetric) {
    for (int i = 0; i < nodes; ++i) {
      double f = 0.0, ft = 0.0, ftt = 0.0;
      for (int l = 0; l <= lmax_; ++l) {
        const double c = coeffs[l];
        if (c == 0.0) continue;
        f += c * ptab_[l][i];
        ft += c * dptab_[l][i];
        ftt += c * d2ptab_[l][i];
      }
      out.f[i] = f;
      out.ft[i] = ft;
      out.ftt[i] = ftt;
    }
    return;
  }
  // accumulate per-(theta, m) partial sums, then synthesize in phi
  const int mmax = lmax_;
  std::vector<double> pc((mmax + 1) * n_theta_, 0.0), ps((mmax + 1) * n_theta_, 0.0);
  std::vector<double> dc((mmax + 1) * n_theta_, 0.0), ds((mmax + 1) * n_theta_, 0.0);
  std::vector<double> d2c((mmax + 1) * n_theta_, 0.0), d2s((mmax + 1) * n_theta_, 0.0);
  for (int idx = 0; idx < basis_size(); ++idx) {
    const double c = coeffs[idx];
    if (c == 0.0) continue;
    const int m = basis_m_[idx];
    const double scale = (m == 0) ? 1.0 : std::sqrt(2.0);
    const int row = pair_index_[idx];
    auto& target_p = (basis_trig_[idx] == 0) ? pc : ps;
    auto& target_d = (basis_trig_[idx] == 0) ? dc : ds;
    auto& target_d2 = (basis_trig_[idx] == 0) ? d2c : d2s;
    for (int i = 0; i < n_theta_; ++i) {
      target_p[m * n_theta_ + i] += scale * c * ptab_[row][i];
      target_d[m * n_theta_ + i] += scale * c * dptab_[row][i];
      target_d2[m * n_theta_ + i] += scale * c * d2ptab_[row][i];
    }
  }
  for (int i = 0; i < n_theta_; ++i) {
    for (int j = 0; j < n_phi_; ++j) {
      const int p = i * n_phi_ + j;
      double f = 0.0, ft = 0.0, fp = 0.0, ftt = 0.0, ftp = 0.0, fpp = 0.0;
      for (int m = 0; m <= mmax; ++m) {
        const double a = pc[m * n_theta_ + i], b = ps[m * n_theta_ + i];
        const double da = dc[m * n_theta_ + i], db = ds[m * n_theta_ + i];
        const double d2a = d2c[m * n_theta_ + i], d2b = d2s[m * n_theta_ + i];
        if (a == 0.0 && b == 0.0 && da == 0.0 && db == 0.0 && d2a == 0.0 && d2b == 0.0) continue;
        const double arg = m * phi_[p];
        const double cm = std::cos(arg), sm = std::sin(arg);
        f += a * cm + b * sm;
        ft += da * cm + db * sm;
        ftt += d2a * cm + d2b * sm;
        fp += m * (-a * sm + b * cm);
        ftp += m * (-da * sm + db * cm);
        fpp += -static_cast<double>(m) * m * (a * cm + b * sm);
      }
      out.f[p] = f;
      out.ft[p] = ft;
      out.fp[p] = fp;
      out.ftt[p] = ftt;
      out.ftp[p] = ftp;
      out.fpp[p] = fpp;
    }
  }
}

std::vector<double> SphereGrid::analyze(const std::vector<double>& nodal) const {
  std::vector<double> coeffs(basis_size(), 0.0);
  if (mode_ == GridMode::Axisymmetric) {
    for (int l = 0; l <= lmax_; ++l) {
      double s = 0.0;
      for (int i = 0; i < node_count(); ++i) s += weight_[i] * nodal[i] * ptab_[l][i];
      coeffs[l] = s;
    }
    return coeffs;
  }
  const int mmax = lmax_;
  std::vector<double> fc((mmax + 1) * n_theta_, 0.0), fs((mmax + 1) * n_theta_, 0.0);
  for (int i = 0; i < n_theta_; ++i)
    for (int j = 0; j < n_phi_; ++j) {
      const int p = i * n_phi_ + j;
      const double v = nodal[p];
      for (int m = 0; m <= mmax; ++m) {
        const double arg = m * phi_[p];
        fc[m * n_theta_ + i] += v * std::cos(arg);
        fs[m * n_theta_ + i] += v * std::sin(arg);
      }
    }
  for (int idx = 0; idx < basis_size(); ++idx) {
    const int m = basis_m_[idx];
    const double scale = (m == 0) ? 1.0 : std::sqrt(2.0);
    const auto& row = ptab_[pair_index_[idx]];
    const auto& data = (basis_trig_[idx] == 0) ? fc : fs;
    double s = 0.0;
    for (int i = 0; i < n_theta_; ++i)
      s += weight_[i * n_phi_] * row[i] * data[m * n_theta_ + i];
    coeffs[idx] = scale * s;
  }
  return coeffs;
}

}  // namespace isolab
