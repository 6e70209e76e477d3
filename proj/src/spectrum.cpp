#include "isolab/spectrum.hpp"

#include <cmath>
#include <stdexcept>

#include "isolab/linalg.hpp"
#include "isolab/metric.hpp"
#include "isolab/quadrature.hpp"

namespace isolab {

namespace {

/// C += sum_p a_p (x) b_p over rows of two node x basis tables
void accumulate_outer(const Matrix& A, const Matrix& B, Matrix& C) {
  const std::size_t nodes = A.rows(), nb = A.cols();
  for (std::size_t p = 0; p < nodes; ++p) {
    const double* a = A.row(p);
    const double* b = B.row(p);
    for (std::size_t i = 0; i < nb; ++i) {
      const double ai = a[i];
      if (ai == 0.0) continue;
      double* c = C.row(i);
      for (std::size_t j = 0; j < nb; ++j) c[j] += ai * b[j];
    }
  }
}

struct Pencil {
  Matrix stiffness;  // gradient part
  Matrix potential;  // potential mass-weighted part
  Matrix mass;
  std::vector<double> mean;  // integral of each basis function over d(mu)
  double asymmetry = 0.0;
};

Pencil assemble(GraphSurface& s) {
  attach_ambient_curvature(s);
  const SphereGrid& grid = *s.grid;
  const int nodes = grid.node_count();
  const int nb = grid.basis_size();
  const bool full = grid.mode() == GridMode::Full2Sphere;
  const int n = grid.dim();

  // basis tables and weighted counterparts
  Matrix P(nodes, nb), Wgrad_t(nodes, nb), Wmass(nodes, nb), Wpot(nodes, nb);
  Matrix Pt, Wgrad_p;
  if (full) {
    Pt = Matrix(nodes, nb);
    Wgrad_p = Matrix(nodes, nb);
  } else {
    Pt = Matrix(nodes, nb);
  }
  for (int p = 0; p < nodes; ++p) {
    const double wJ = grid.weight(p) * s.mu_density[p];
    double itt, itp, ipp;
    if (full) {
      const double det = s.gtt[p] * s.gpp[p] - s.gtp[p] * s.gtp[p];
      itt = s.gpp[p] / det;
      itp = -s.gtp[p] / det;
      ipp = s.gtt[p] / det;
    } else {
      itt = 1.0 / s.gtt[p];
      itp = ipp = 0.0;
    }
    for (int j = 0; j < nb; ++j) {
      const double v = grid.psi(p, j);
      const double vt = grid.psi_dtheta(p, j);
      P(p, j) = v;
      Wmass(p, j) = wJ * v;
      Wpot(p, j) = wJ * s.jacobi_potential[p] * v;
      if (full) {
        const double vp = grid.psi_dphi(p, j);
        Pt(p, j) = vt;
        // store the phi-gradient in a second table; weighted combinations
        Wgrad_t(p, j) = wJ * (itt * vt + itp * vp);
        Wgrad_p(p, j) = wJ * (itp * vt + ipp * vp);
      } else {
        Pt(p, j) = vt;
        Wgrad_t(p, j) = wJ * itt * vt;
      }
    }
  }
  Matrix Pp;
  if (full) {
    Pp = Matrix(nodes, nb);
    for (int p = 0; p < nodes; ++p)
      for (int j = 0; j < nb; ++j) Pp(p, j) = grid.psi_dphi(p, j);
  }

  Pencil out;
  out.stiffness = Matrix(nb, nb, 0.0);
  out.potential = Matrix(nb, nb, 0.0);
  out.mass = Matrix(nb, nb, 0.0);
  accumulate_outer(Pt, Wgrad_t, out.stiffness);
  if (full) accumulate_outer(Pp, Wgrad_p, out.stiffness);
  accumulate_outer(P, Wpot, out.potential);
  accumulate_outer(P, Wmass, out.mass);

  out.mean.assign(nb, 0.0);
  for (int p = 0; p < nodes; ++p) {
    const double wJ = grid.weight(p) * s.mu_density[p];
    for (int j = 0; j < nb; ++j) out.mean[j] += wJ * P(p, j);
  }

  for (int i = 0; i < nb; ++i)
    for (int j = 0; j < i; ++j) {
      out.asymmetry = std::max(
          out.asymmetry, std::abs(out.stiffness(i, j) - out.stiffness(j, i)));
      const double sym = 0.5 * (out.stiffness(i, j) + out.stiffness(j, i));
      out.stiffness(i, j) = out.stiffness(j, i) = sym;
      const double msym = 0.5 * (out.mass(i, j) + out.mass(j, i));
      out.mass(i, j) = out.mass(j, i) = msym;
      const double psym = 0.5 * (out.potential(i, j) + out.potential(j, i));
      out.potential(i, j) = out.potential(j, i) = psym;
    }
  return out;
}

/// Householder basis of the complement of a vector; applies the reflection
/// on both sides of a symmetric matrix and strips the first row/column.
Matrix deflate_constraint(const Matrix& A, const std::vector<double>& m) {
  const std::size_t nb = m.size();
  std::vector<double> v = m;
  const double norm = norm2(v);
  v[0] += (v[0] >= 0.0 ? norm : -norm);
  const double vn2 = dot(v, v);
  // H = I - 2 v v^T / (v.v); B = H A H
  Matrix AV(nb, nb);
  // A v outer parts
  std::vector<double> Av = matvec(A, v);
  const double vAv = dot(v, Av);
  Matrix B = A;
  for (std::size_t i = 0; i < nb; ++i)
    for (std::size_t j = 0; j < nb; ++j)
      B(i, j) += -2.0 / vn2 * (v[i] * Av[j] + Av[i] * v[j]) +
                 4.0 * vAv / (vn2 * vn2) * v[i] * v[j];
  Matrix out(nb - 1, nb - 1);
  for (std::size_t i = 1; i < nb; ++i)
    for (std::size_t j = 1; j < nb; ++j) out(i - 1, j - 1) = B(i, j);
  (void)AV;
  return out;
}

}  // namespace

std::vector<double> laplace_spectrum(GraphSurface& s, int count) {
  Pencil pencil = assemble(s);
  const SymEig eig = sym_eig_generalized(pencil.stiffness, pencil.mass);
  std::vector<double> out;
  for (int i = 0; i < count && i < static_cast<int>(eig.values.size()); ++i)
    out.push_back(eig.values[i]);
  return out;
}

SpectrumReport jacobi_spectrum(GraphSurface& s, int k, bool cross_check) {
  if (k < 3) throw std::invalid_argument("jacobi_spectrum: need k >= 3");
  SpectrumReport rep;
  Pencil pencil = assemble(s);
  rep.assembly_asymmetry = pencil.asymmetry;

  const std::size_t nb = pencil.mass.rows();
  Matrix A(nb, nb);
  for (std::size_t i = 0; i < nb; ++i)
    for (std::size_t j = 0; j < nb; ++j) A(i, j) = pencil.stiffness(i, j) - pencil.potential(i, j);

  const SymEig eig = sym_eig_generalized(A, pencil.mass);
  for (int i = 0; i < k && i < static_cast<int>(eig.values.size()); ++i)
    rep.eigenvalues.push_back(eig.values[i]);
  rep.mu0 = eig.values[0];
  rep.mu1 = eig.values[1];

  // lambda1: restrict to the area-weighted mean-zero subspace
  const Matrix Ares = deflate_constraint(A, pencil.mean);
  const Matrix Mres = deflate_constraint(pencil.mass, pencil.mean);
  const SymEig eig_res = sym_eig_generalized(Ares, Mres);
  rep.lambda1 = eig_res.values[0];
  {
    // reconstruct the constrained eigenvector and check the constraint
    std::vector<double> v = pencil.mean;
    const double norm = norm2(v);
    v[0] += (v[0] >= 0.0 ? norm : -norm);
    const double vn2 = dot(v, v);
    std::vector<double> y(nb, 0.0);
    for (std::size_t i = 1; i < nb; ++i) y[i] = eig_res.vectors(i - 1, 0);
    const double vy = dot(v, y);
    for (std::size_t i = 0; i < nb; ++i) y[i] -= 2.0 * vy / vn2 * v[i];
    rep.constraint_residual =
        std::abs(dot(pencil.mean, y)) / (norm2(pencil.mean) * norm2(y));
  }

  // Laplace part alone
  const SymEig lap = sym_eig_generalized(pencil.stiffness, pencil.mass);
  rep.laplace_first_nonzero = lap.values[1];

  // paper-scale predictions from the background parameters
  const int n = s.metric->dim();
  const double m = s.metric->mass();
  double area = 0.0, Hbar = 0.0;
  for (int p = 0; p < s.nodes(); ++p) {
    const double w = s.grid->weight(p) * s.mu_density[p];
    area += w;
    Hbar += w * s.H[p];
  }
  Hbar /= area;
  rep.predicted_mu0 = -Hbar * Hbar / (n - 1.0) +
                      (n - 1.0) * (n - 2.0) * m / std::pow(s.R, static_cast<double>(n));
  rep.predicted_lambda1 = n * (n - 1.0) * m / std::pow(s.R, static_cast<double>(n));
  rep.lambda1_ratio = (m > 0.0) ? rep.lambda1 / rep.predicted_lambda1 : 0.0;

  if (cross_check) {
    rep.cross_checked = true;
    std::shared_ptr<SphereGrid> fine;
    const SphereGrid& g = *s.grid;
    if (g.mode() == GridMode::Full2Sphere) {
      const int nt = g.node_count() > 0 ? static_cast<int>(1.5 * std::sqrt(g.node_count() / 2.0))
                                        : 36;
      fine = std::make_shared<SphereGrid>(
          SphereGrid::full(std::max(nt, g.lmax() + 7), 2 * std::max(nt, g.lmax() + 7),
                           g.lmax() + 4));
    } else {
      fine = std::make_shared<SphereGrid>(
          SphereGrid::axisymmetric(g.dim(), g.node_count() * 3 / 2, g.lmax() + 8));
    }
    // re-express u on the finer grid by sampling the (band-limited) series
    GridFields uf;
    std::vector<double> coeffs_fine(fine->basis_size(), 0.0);
    for (int idx = 0; idx < g.basis_size(); ++idx) {
      // match by (l, m, trig) ordering: both grids enumerate identically
      coeffs_fine[idx] = s.u_coeffs[idx];
    }
    GraphSurface sf = build_surface(fine, *s.metric, s.R, coeffs_fine, s.center);
    SpectrumReport fine_rep = jacobi_spectrum(sf, k, false);
    rep.cross_check_delta =
        std::max(std::abs(fine_rep.mu0 - rep.mu0),
                 std::max(std::abs(fine_rep.mu1 - rep.mu1), std::abs(fine_rep.lambda1 - rep.lambda1)));
    const double scale = std::max({std::abs(rep.mu0), std::abs(rep.lambda1), 1e-300});
    rep.converged_between_levels = rep.cross_check_delta <= 1e-4 * scale + 1e-14;
  }
  return rep;
}

}  // namespace isolab
