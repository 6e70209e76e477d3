#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace isolab {

/// Dense row-major matrix. Sized for desk-scale spectral problems
/// (a few thousand rows at most).
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

  double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double* row(std::size_t i) { return a_.data() + i * cols_; }
  const double* row(std::size_t i) const { return a_.data() + i * cols_; }
  std::vector<double>& data() { return a_; }
  const std::vector<double>& data() const { return a_; }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> a_;
};

inline std::vector<double> matvec(const Matrix& A, const std::vector<double>& x) {
  std::vector<double> y(A.rows(), 0.0);
  for (std::size_t i = 0; i < A.rows(); ++i) {
    const double* r = A.row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < A.cols(); ++j) s += r[j] * x[j];
    y[i] = s;
  }
  return y;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

inline double norm_inf(const std::vector<double>& a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

inline void axpy(double alpha, const std::vector<double>& x, std::vector<double>& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

/// LU factorization with partial pivoting; solves in place.
class LuSolver {
 public:
  explicit LuSolver(Matrix A) : lu_(std::move(A)), piv_(lu_.rows()) {
    const std::size_t n = lu_.rows();
    if (lu_.cols() != n) throw std::invalid_argument("LuSolver: matrix not square");
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t p = k;
      double best = std::abs(lu_(k, k));
      for (std::size_t i = k + 1; i < n; ++i)
        if (std::abs(lu_(i, k)) > best) { best = std::abs(lu_(i, k)); p = i; }
      if (best == 0.0) throw std::runtime_error("LuSolver: singular matrix");
      piv_[k] = p;
      if (p != k)
        for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
      const double inv = 1.0 / lu_(k, k);
      for (std::size_t i = k + 1; i < n; ++i) {
        lu_(i, k) *= inv;
        const double lik = lu_(i, k);
        if (lik == 0.0) continue;
        for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= lik * lu_(k, j);
      }
    }
  }

  std::vector<double> solve(std::vector<double> b) const {
    const std::size_t n = lu_.rows();
    for (std::size_t k = 0; k < n; ++k) {
      if (piv_[k] != k) std::swap(b[k], b[piv_[k]]);
      for (std::size_t i = k + 1; i < n; ++i) b[i] -= lu_(i, k) * b[k];
    }
    for (std::size_t k = n; k-- > 0;) {
      for (std::size_t j = k + 1; j < n; ++j) b[k] -= lu_(k, j) * b[j];
      b[k] /= lu_(k, k);
    }
    return b;
  }

 private:
  Matrix lu_;
  std::vector<std::size_t> piv_;
};

/// Cholesky factor L (lower) of a symmetric positive definite matrix.
inline Matrix cholesky(const Matrix& A) {
  const std::size_t n = A.rows();
  Matrix L(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = A(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= L(i, k) * L(j, k);
      if (i == j) {
        if (s <= 0.0) throw std::runtime_error("cholesky: matrix not positive definite");
        L(i, i) = std::sqrt(s);
      } else {
        L(i, j) = s / L(j, j);
      }
    }
  }
  return L;
}

/// Householder tridiagonalization of a symmetric matrix, accumulating the
/// transform, followed by implicit-shift QL on the tridiagonal form.
/// Eigenvalues are returned ascending with matching eigenvector columns.
struct SymEig {
  std::vector<double> values;
  Matrix vectors;  // column j is the eigenvector of values[j]
};

namespace detail {

inline void tql_implicit(std::vector<double>& d, std::vector<double>& e, Matrix* z) {
  const std::size_t n = d.size();
  if (n == 0) return;
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;
  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= 1e-300 + 2.3e-16 * dd) break;
      }
      if (m != l) {
        if (++iter == 60) throw std::runtime_error("sym_eig: QL failed to converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + (g >= 0 ? std::abs(r) : -std::abs(r)));
        double s = 1.0, c = 1.0, p = 0.0;
        for (std::size_t i = m; i-- > l;) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          if (z) {
            for (std::size_t k = 0; k < z->rows(); ++k) {
              f = (*z)(k, i + 1);
              (*z)(k, i + 1) = s * (*z)(k, i) + c * f;
              (*z)(k, i) = c * (*z)(k, i) - s * f;
            }
          }
        }
        if (r == 0.0 && m > l + 1) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace detail

inline SymEig sym_eig(Matrix A, bool want_vectors = true) {
  const std::size_t n = A.rows();
  std::vector<double> d(n, 0.0), e(n, 0.0);
  // Householder reduction (tred2 layout: transform accumulated in A)
  for (std::size_t i = n; i-- > 1;) {
    const std::size_t l = i - 1;
    double h = 0.0, scale = 0.0;
    if (l > 0) {
      for (std::size_t k = 0; k <= l; ++k) scale += std::abs(A(i, k));
      if (scale == 0.0) {
        e[i] = A(i, l);
      } else {
        for (std::size_t k = 0; k <= l; ++k) {
          A(i, k) /= scale;
          h += A(i, k) * A(i, k);
        }
        double f = A(i, l);
        double g = (f >= 0.0 ? -std::sqrt(h) : std::sqrt(h));
        e[i] = scale * g;
        h -= f * g;
        A(i, l) = f - g;
        f = 0.0;
        for (std::size_t j = 0; j <= l; ++j) {
          A(j, i) = A(i, j) / h;
          g = 0.0;
          for (std::size_t k = 0; k <= j; ++k) g += A(j, k) * A(i, k);
          for (std::size_t k = j + 1; k <= l; ++k) g += A(k, j) * A(i, k);
          e[j] = g / h;
          f += e[j] * A(i, j);
        }
        const double hh = f / (h + h);
        for (std::size_t j = 0; j <= l; ++j) {
          f = A(i, j);
          e[j] = g = e[j] - hh * f;
          for (std::size_t k = 0; k <= j; ++k) A(j, k) -= f * e[k] + g * A(i, k);
        }
      }
    } else {
      e[i] = A(i, l);
    }
    d[i] = h;
  }
  d[0] = 0.0;
  e[0] = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (want_vectors) {
      if (d[i] != 0.0) {
        for (std::size_t j = 0; j < i; ++j) {
          double g = 0.0;
          for (std::size_t k = 0; k < i; ++k) g += A(i, k) * A(k, j);
          for (std::size_t k = 0; k < i; ++k) A(k, j) -= g * A(k, i);
        }
      }
      d[i] = A(i, i);
      A(i, i) = 1.0;
      for (std::size_t j = 0; j < i; ++j) A(j, i) = A(i, j) = 0.0;
    } else {
      d[i] = A(i, i);
    }
  }
  detail::tql_implicit(d, e, want_vectors ? &A : nullptr);
  // sort ascending
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (d[order[j]] < d[order[i]]) std::swap(order[i], order[j]);
  SymEig out;
  out.values.resize(n);
  if (want_vectors) out.vectors = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = d[order[j]];
    if (want_vectors)
      for (std::size_t k = 0; k < n; ++k) out.vectors(k, j) = A(k, order[j]);
  }
  return out;
}

/// Eigenvalues of a symmetric tridiagonal matrix together with the first
/// component of each (normalized) eigenvector; this is the Golub–Welsch
/// ingredient for Gaussian quadrature rules.
struct TridiagEig {
  std::vector<double> values;
  std::vector<double> first_components;
};

inline TridiagEig tridiag_eig(std::vector<double> diag, std::vector<double> sub) {
  const std::size_t n = diag.size();
  Matrix z(1, n, 0.0);
  z(0, 0) = 1.0;
  std::vector<double> e(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) e[i] = sub[i - 1];
  // detail::tql_implicit expects e shifted as in sym_eig: e[i] = offdiag below row i
  detail::tql_implicit(diag, e, &z);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (diag[order[j]] < diag[order[i]]) std::swap(order[i], order[j]);
  TridiagEig out;
  out.values.resize(n);
  out.first_components.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = diag[order[j]];
    out.first_components[j] = z(0, order[j]);
  }
  return out;
}

/// Lowest eigenvalues of the symmetric generalized pencil A x = λ B x with
/// B positive definite, via Cholesky reduction to standard form.
inline SymEig sym_eig_generalized(const Matrix& A, const Matrix& B) {
  const std::size_t n = A.rows();
  Matrix L = cholesky(B);
  // C = L^{-1} A L^{-T}
  Matrix C = A;
  // forward substitute on columns: solve L Y = A  (row-wise)
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = C(i, j);
      for (std::size_t k = 0; k < i; ++k) s -= L(i, k) * C(k, j);
      C(i, j) = s / L(i, i);
    }
  }
  // solve Z L^T = Y  => for each row of C, forward substitute with L
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = C(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= C(i, k) * L(j, k);
      C(i, j) = s / L(j, j);
    }
  }
  SymEig eig = sym_eig(std::move(C), true);
  // back-transform eigenvectors: x = L^{-T} y
  for (std::size_t j = 0; j < eig.vectors.cols(); ++j) {
    for (std::size_t i = n; i-- > 0;) {
      double s = eig.vectors(i, j);
      for (std::size_t k = i + 1; k < n; ++k) s -= L(k, i) * eig.vectors(k, j);
      eig.vectors(i, j) = s / L(i, i);
    }
  }
  return eig;
}

/// Restarted GMRES with right preconditioning. apply_A and apply_M take a
/// vector and return a vector; solves A x = b to relative tolerance rtol.
struct GmresResult {
  std::vector<double> x;
  double rel_residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

inline GmresResult gmres(const std::function<std::vector<double>(const std::vector<double>&)>& apply_A,
                         const std::function<std::vector<double>(const std::vector<double>&)>& apply_M,
                         const std::vector<double>& b, double rtol, int max_iter, int restart = 80) {
  const std::size_t n = b.size();
  GmresResult res;
  res.x.assign(n, 0.0);
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    res.converged = true;
    return res;
  }
  std::vector<double> r = b;  // x0 = 0
  int total_it = 0;
  while (total_it < max_iter) {
    const int m = std::min<int>(restart, max_iter - total_it);
    std::vector<std::vector<double>> V;
    V.reserve(m + 1);
    Matrix H(m + 1, m, 0.0);
    std::vector<double> cs(m, 0.0), sn(m, 0.0), g(m + 1, 0.0);
    double beta = norm2(r);
    if (beta / bnorm <= rtol) {
      res.converged = true;
      res.rel_residual = beta / bnorm;
      return res;
    }
    std::vector<double> v0 = r;
    for (double& t : v0) t /= beta;
    V.push_back(std::move(v0));
    g[0] = beta;
    int k = 0;
    for (; k < m; ++k) {
      ++total_it;
      std::vector<double> w = apply_A(apply_M(V[k]));
      for (int i = 0; i <= k; ++i) {
        const double hik = dot(w, V[i]);
        H(i, k) = hik;
        axpy(-hik, V[i], w);
      }
      const double hkk = norm2(w);
      H(k + 1, k) = hkk;
      if (hkk > 0.0) {
        for (double& t : w) t /= hkk;
        V.push_back(std::move(w));
      }
      for (int i = 0; i < k; ++i) {
        const double t = cs[i] * H(i, k) + sn[i] * H(i + 1, k);
        H(i + 1, k) = -sn[i] * H(i, k) + cs[i] * H(i + 1, k);
        H(i, k) = t;
      }
      const double denom = std::hypot(H(k, k), H(k + 1, k));
      cs[k] = H(k, k) / denom;
      sn[k] = H(k + 1, k) / denom;
      H(k, k) = denom;
      H(k + 1, k) = 0.0;
      g[k + 1] = -sn[k] * g[k];
      g[k] = cs[k] * g[k];
      if (std::abs(g[k + 1]) / bnorm <= rtol || hkk == 0.0) {
        ++k;
        break;
      }
    }
    // solve the small triangular system and update x
    std::vector<double> y(k, 0.0);
    for (int i = k; i-- > 0;) {
      double s = g[i];
      for (int j = i + 1; j < k; ++j) s -= H(i, j) * y[j];
      y[i] = s / H(i, i);
    }
    std::vector<double> z(n, 0.0);
    for (int i = 0; i < k; ++i) axpy(y[i], V[i], z);
    z = apply_M(z);
    axpy(1.0, z, res.x);
    // true residual for restart
    std::vector<double> Ax = apply_A(res.x);
    r = b;
    axpy(-1.0, Ax, r);
    res.rel_residual = norm2(r) / bnorm;
    res.iterations = total_it;
    if (res.rel_residual <= rtol) {
      res.converged = true;
      return res;
    }
  }
  return res;
}

}  // namespace isolab
