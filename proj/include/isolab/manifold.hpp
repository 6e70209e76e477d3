#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace isolab {

inline constexpr int kMaxDim = 6;

using VecN = std::array<double, kMaxDim>;

enum class Parity { Even, Odd };

/// Deterministic perturbation of the Schwarzschild background. Patterns are a
/// fixed enumeration of smooth symmetric-tensor bumps, each a radial envelope
/// times a low-order polynomial tensor (see pattern_traits / docs):
///   0 conformal-tail      f(r) delta_ij                       even, zonal
///   1 dipole-tail         f(r) x1 delta_ij                    odd,  zonal
///   2 quadrupole-tail     f(r) (x1^2 - r^2/n) delta_ij        even, zonal
///   3 radial-tail         f(r) x_i x_j                        even, zonal
///   4 axial-tail          f(r) e1_i e1_j                      even, zonal
///   5 shear-tail          f(r) sym(x_i e1_j)                  odd,  zonal
///   6 compact-bump        bump(r) delta_ij on [r0, r0+2w]     even, zonal
///   7 cross-quadrupole    f(r) x1 x2 delta_ij                 even, non-zonal
/// Tail envelopes are f(r) = sigma * chi((r-r0)/w) * r^{-(n-2+gamma+deg)}
/// so that |h| <= C r^{2-n-gamma} with one derivative lost per order.
struct PerturbationSpec {
  double sigma = 0.0;   // amplitude; 0 disables the perturbation
  int pattern = 0;      // id in the enumeration above
  double r0 = 2.0;      // envelope turn-on radius
  double width = 2.0;   // envelope transition width
  double C = 1.0;       // decay constant used in reporting/validation
  Parity parity = Parity::Even;

  bool empty() const { return sigma == 0.0; }
};

struct PatternTraits {
  int degree;       // polynomial degree of the tensor factor
  Parity parity;    // behavior under x -> -x
  bool zonal;       // invariant under rotations fixing the e1 axis
  int extra_decay;  // additional envelope orders beyond the class rate
  const char* name;
};

inline PatternTraits pattern_traits(int id) {
  switch (id) {
    case 0: return {0, Parity::Even, true, 0, "conformal-tail"};
    case 1: return {1, Parity::Odd, true, 0, "dipole-tail"};
    case 2: return {2, Parity::Even, true, 0, "quadrupole-tail"};
    case 3: return {2, Parity::Even, true, 0, "radial-tail"};
    case 4: return {0, Parity::Even, true, 0, "axial-tail"};
    case 5: return {1, Parity::Odd, true, 0, "shear-tail"};
    case 6: return {0, Parity::Even, true, 0, "compact-bump"};
    case 7: return {2, Parity::Even, false, 0, "cross-quadrupole-tail"};
    // odd tensor direction, one extra decay order: breaks exact point
    // symmetry while keeping the asymptotically-even scalar-curvature decay
    case 8: return {1, Parity::Odd, true, 1, "steep-dipole-tail"};
    default: throw std::invalid_argument("unknown perturbation pattern id " + std::to_string(id));
  }
}

/// Asymptotically Schwarzschild manifold described on the chart |x| >= 1/2.
struct ManifoldSpec {
  int n = 3;            // dimension, >= 3
  double m = 1.0;       // mass; 0 gives the Euclidean test case
  double gamma = 1.0;   // decay rate in (0, 1]
  PerturbationSpec perturbation{};
  VecN translation{};   // metric centered at this coordinate point

  bool pure_schwarzschild() const { return perturbation.empty(); }
  bool euclidean() const { return m == 0.0 && perturbation.empty(); }
  bool zonal() const {
    if (!perturbation.empty() && !pattern_traits(perturbation.pattern).zonal) return false;
    for (int k = 1; k < n; ++k)
      if (translation[k] != 0.0) return false;
    return true;
  }
  /// Asymptotically even in the sense that R(x) - R(-x) decays one order
  /// faster than generic: even patterns give an identically even metric,
  /// and odd patterns qualify when their envelope carries an extra order.
  bool asymptotically_even() const {
    if (perturbation.empty() || perturbation.parity == Parity::Even) return true;
    return pattern_traits(perturbation.pattern).extra_decay >= 1;
  }
};

inline void validate(const ManifoldSpec& s) {
  if (s.n < 3 || s.n > kMaxDim)
    throw std::invalid_argument("ManifoldSpec: dimension must satisfy 3 <= n <= " +
                                std::to_string(kMaxDim));
  if (s.m < 0.0) throw std::invalid_argument("ManifoldSpec: mass must be >= 0");
  if (!(s.gamma > 0.0) || s.gamma > 1.0)
    throw std::invalid_argument("ManifoldSpec: decay rate gamma must lie in (0, 1]");
  if (!s.perturbation.empty()) {
    const PatternTraits t = pattern_traits(s.perturbation.pattern);
    if (t.parity != s.perturbation.parity)
      throw std::invalid_argument("PerturbationSpec: declared parity does not match pattern");
    if (!(s.perturbation.r0 > 0.5) || !(s.perturbation.width > 0.0))
      throw std::invalid_argument("PerturbationSpec: need r0 > 1/2 and width > 0");
  }
}

/// r_h = (m/2)^{1/(n-2)}; the minimal coordinate sphere of the background.
inline double horizon_radius(const ManifoldSpec& s) {
  if (!(s.m > 0.0)) throw std::domain_error("horizon_radius: no horizon for m <= 0");
  return std::pow(0.5 * s.m, 1.0 / (s.n - 2));
}

}  // namespace isolab
