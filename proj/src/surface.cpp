#include "isolab/surface.hpp"

#include <cmath>

#include "isolab/curvature.hpp"

namespace isolab {

GraphSurface build_surface(std::shared_ptr<const SphereGrid> grid, const Metric& metric, double R,
                           const std::vector<double>& u_coeffs, const VecN& center) {
  if (grid->mode() == GridMode::Full2Sphere && metric.dim() != 3)
    throw std::invalid_argument("build_surface: full 2-sphere grids require n = 3");
  if (grid->mode() == GridMode::Axisymmetric && grid->dim() != metric.dim())
    throw std::invalid_argument("build_surface: grid and metric dimensions differ");
  if (static_cast<int>(u_coeffs.size()) != grid->basis_size())
    throw std::invalid_argument("build_surface: coefficient vector does not match the basis");

  GraphSurface s;
  s.grid = std::move(grid);
  s.metric = &metric;
  s.R = R;
  s.center = center;
  s.u_coeffs = u_coeffs;
  s.grid->synthesize(u_coeffs, s.ufields);

  const int nodes = s.nodes();
  s.H.resize(nodes);
  s.omega_ray.resize(nodes);
  s.hsq.resize(nodes);
  s.hring_sq.resize(nodes);
  s.gtt.resize(nodes);
  s.gtp.resize(nodes);
  s.gpp.resize(nodes);
  s.htt.resize(nodes);
  s.htp.resize(nodes);
  s.hpp.resize(nodes);
  s.mu_density.resize(nodes);
  s.euclid_density.resize(nodes);
  s.position.resize(nodes);
  s.normal.resize(nodes);
  s.tangent_t.resize(nodes);
  s.tangent_p.resize(nodes);

  const bool full = s.grid->mode() == GridMode::Full2Sphere;
  for (int p = 0; p < nodes; ++p) {
    NodeGeometry<double> geo =
        full ? graph_node_full<double>(metric, R, center, s.grid->theta(p), s.grid->phi(p),
                                       s.ufields.f[p], s.ufields.ft[p], s.ufields.fp[p],
                                       s.ufields.ftt[p], s.ufields.ftp[p], s.ufields.fpp[p])
             : graph_node_axi<double>(metric, R, center, s.grid->theta(p), s.ufields.f[p],
                                      s.ufields.ft[p], s.ufields.ftt[p]);
    s.H[p] = geo.H;
    s.omega_ray[p] = geo.omega_ray;
    s.hsq[p] = geo.hsq;
    s.hring_sq[p] = geo.hring_sq;
    s.gtt[p] = geo.gtt;
    s.gtp[p] = geo.gtp;
    s.gpp[p] = geo.gpp;
    s.htt[p] = geo.htt;
    s.htp[p] = geo.htp;
    s.hpp[p] = geo.hpp;
    s.mu_density[p] = geo.mu_density;
    s.euclid_density[p] = geo.euclid_density;
    for (int k = 0; k < kMaxDim; ++k) {
      s.position[p][k] = geo.position[k];
      s.normal[p][k] = geo.normal[k];
      s.tangent_t[p][k] = geo.tangent_t[k];
      s.tangent_p[p][k] = geo.tangent_p[k];
    }
  }
  return s;
}

void attach_ambient_curvature(GraphSurface& s) {
  if (s.curvature_attached) return;
  const int nodes = s.nodes();
  const int n = s.metric->dim();
  s.rc_nn.resize(nodes);
  s.jacobi_potential.resize(nodes);
  s.rm_norm.resize(nodes);
  s.rmnu_norm.resize(nodes);
  const bool closed = s.metric->pure_schwarzschild();
  const bool full = s.grid->mode() == GridMode::Full2Sphere;

  for (int p = 0; p < nodes; ++p) {
    const VecN& x = s.position[p];
    const CurvatureSample c = closed ? curvature_schwarzschild_closed(s.metric->spec(), x)
                                     : curvature_finite_difference(*s.metric, x);
    MetricJet jet;
    s.metric->eval(x, jet);
    double ginv[kMaxDim][kMaxDim];
    detail::invert_small(jet.g, ginv, n);

    // Rc(nu, nu)
    double rc = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) rc += c.ricci.a[i][j] * s.normal[p][i] * s.normal[p][j];
    s.rc_nn[p] = rc;
    s.jacobi_potential[p] = s.hsq[p] + rc;

    // |Rm|^2 by raising all four slots
    double rm2 = 0.0;
    {
      static thread_local double up1[kMaxDim][kMaxDim][kMaxDim][kMaxDim];
      static thread_local double up2[kMaxDim][kMaxDim][kMaxDim][kMaxDim];
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            for (int i = 0; i < n; ++i) {
              double sum = 0.0;
              for (int a = 0; a < n; ++a) sum += ginv[i][a] * c.rm.a[a][j][k][l];
              up1[i][j][k][l] = sum;
            }
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            for (int j = 0; j < n; ++j) {
              double sum = 0.0;
              for (int a = 0; a < n; ++a) sum += ginv[j][a] * up1[i][a][k][l];
              up2[i][j][k][l] = sum;
            }
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
              double raised = 0.0;
              for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) raised += ginv[k][a] * ginv[l][b] * up2[i][j][a][b];
              rm2 += raised * c.rm.a[i][j][k][l];
            }
    }
    s.rm_norm[p] = std::sqrt(std::max(0.0, rm2));

    // orthonormal tangent frame
    double frame[kMaxDim - 1][kMaxDim] = {};
    int nf = 0;
    auto gdot = [&](const double* a, const double* b) {
      double sum = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) sum += jet.g[i][j] * a[i] * b[j];
      return sum;
    };
    {
      double e0[kMaxDim] = {};
      for (int k = 0; k < n; ++k) e0[k] = s.tangent_t[p][k];
      const double n0 = std::sqrt(gdot(e0, e0));
      for (int k = 0; k < n; ++k) frame[nf][k] = e0[k] / n0;
      ++nf;
      if (full) {
        double e1[kMaxDim] = {};
        for (int k = 0; k < n; ++k) e1[k] = s.tangent_p[p][k];
        const double proj = gdot(e1, frame[0]);
        for (int k = 0; k < n; ++k) e1[k] -= proj * frame[0][k];
        const double n1 = std::sqrt(gdot(e1, e1));
        for (int k = 0; k < n; ++k) frame[nf][k] = e1[k] / n1;
        ++nf;
      } else {
        for (int d = 2; d < n; ++d) {
          const double nd = std::sqrt(jet.g[d][d]);
          frame[nf][d] = 1.0 / nd;
          ++nf;
        }
      }
    }
    double rmnu2 = 0.0;
    for (int a = 0; a < nf; ++a)
      for (int b = 0; b < nf; ++b)
        for (int cidx = 0; cidx < nf; ++cidx) {
          double comp = 0.0;
          for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
              for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                  comp += c.rm.a[i][j][k][l] * frame[a][i] * frame[b][j] * frame[cidx][k] *
                          s.normal[p][l];
          rmnu2 += comp * comp;
        }
    s.rmnu_norm[p] = std::sqrt(rmnu2);
  }
  s.curvature_attached = true;
}

double scaled_graph_norm(const SphereGrid& grid, const GridFields& uf, double R) {
  const bool full = grid.mode() == GridMode::Full2Sphere;
  const int n = grid.dim();
  double worst = 0.0;
  for (int p = 0; p < grid.node_count(); ++p) {
    const double st = std::sin(grid.theta(p));
    const double ct = std::cos(grid.theta(p));
    const double u = uf.f[p], ut = uf.ft[p], utt = uf.ftt[p];
    double grad2, hess2;
    if (full) {
      const double up = uf.fp[p], utp = uf.ftp[p], upp = uf.fpp[p];
      grad2 = (ut * ut + sq(up / st)) / (R * R);
      const double Htt = utt;
      const double Htp = utp - ct / st * up;
      const double Hpp = upp + st * ct * ut;
      hess2 = (Htt * Htt + 2.0 * sq(Htp / st) + sq(Hpp / (st * st))) / std::pow(R, 4);
    } else {
      grad2 = ut * ut / (R * R);
      hess2 = (utt * utt + (n - 2.0) * sq(ct / st * ut)) / std::pow(R, 4);
    }
    worst = std::max(worst, std::abs(u) / R + std::sqrt(grad2) + R * std::sqrt(hess2));
  }
  return worst;
}

double graph_norm_scaled(const GraphSurface& s) {
  return scaled_graph_norm(*s.grid, s.ufields, s.R);
}

double induced_area(const GraphSurface& s) {
  double area = 0.0;
  for (int p = 0; p < s.nodes(); ++p) area += s.grid->weight(p) * s.mu_density[p];
  return area;
}

double euclidean_area(const GraphSurface& s) {
  double area = 0.0;
  for (int p = 0; p < s.nodes(); ++p) area += s.grid->weight(p) * s.euclid_density[p];
  return area;
}

VecN euclidean_centroid(const GraphSurface& s) {
  VecN c{};
  double area = 0.0;
  // orbit averages kill every non-axis component on zonal grids
  const int active = (s.grid->mode() == GridMode::Axisymmetric) ? 1 : s.metric->dim();
  for (int p = 0; p < s.nodes(); ++p) {
    const double w = s.grid->weight(p) * s.euclid_density[p];
    area += w;
    for (int k = 0; k < active; ++k) c[k] += w * s.position[p][k];
  }
  for (int k = 0; k < kMaxDim; ++k) c[k] /= area;
  return c;
}

double cmc_residual_max(const GraphSurface& s, double H_target) {
  double worst = 0.0;
  for (int p = 0; p < s.nodes(); ++p) worst = std::max(worst, std::abs(s.H[p] - H_target));
  return worst;
}

}  // namespace isolab
