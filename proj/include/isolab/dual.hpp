#pragma once

#include <array>
#include <cmath>

namespace isolab {

/// Forward-mode derivative scalar carrying K derivative components.
/// Arithmetic propagates exact first derivatives through any composition of
/// the operations below; used to differentiate pointwise geometry kernels.
template <int K>
struct Dual {
  double v = 0.0;
  std::array<double, K> d{};

  Dual() = default;
  Dual(double value) : v(value) { d.fill(0.0); }
  Dual(double value, int slot) : v(value) {
    d.fill(0.0);
    d[slot] = 1.0;
  }

  Dual& operator+=(const Dual& o) {
    v += o.v;
    for (int k = 0; k < K; ++k) d[k] += o.d[k];
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    v -= o.v;
    for (int k = 0; k < K; ++k) d[k] -= o.d[k];
    return *this;
  }
  Dual& operator*=(const Dual& o) {
    for (int k = 0; k < K; ++k) d[k] = d[k] * o.v + v * o.d[k];
    v *= o.v;
    return *this;
  }
  Dual& operator/=(const Dual& o) {
    const double iv = 1.0 / o.v;
    v *= iv;
    for (int k = 0; k < K; ++k) d[k] = (d[k] - v * o.d[k]) * iv;
    return *this;
  }
};

template <int K> inline Dual<K> operator+(Dual<K> a, const Dual<K>& b) { return a += b; }
template <int K> inline Dual<K> operator-(Dual<K> a, const Dual<K>& b) { return a -= b; }
template <int K> inline Dual<K> operator*(Dual<K> a, const Dual<K>& b) { return a *= b; }
template <int K> inline Dual<K> operator/(Dual<K> a, const Dual<K>& b) { return a /= b; }

template <int K> inline Dual<K> operator+(Dual<K> a, double b) { a.v += b; return a; }
template <int K> inline Dual<K> operator+(double b, Dual<K> a) { a.v += b; return a; }
template <int K> inline Dual<K> operator-(Dual<K> a, double b) { a.v -= b; return a; }
template <int K> inline Dual<K> operator-(double b, const Dual<K>& a) {
  Dual<K> r;
  r.v = b - a.v;
  for (int k = 0; k < K; ++k) r.d[k] = -a.d[k];
  return r;
}
template <int K> inline Dual<K> operator-(const Dual<K>& a) { return 0.0 - a; }
template <int K> inline Dual<K> operator*(Dual<K> a, double b) {
  a.v *= b;
  for (int k = 0; k < K; ++k) a.d[k] *= b;
  return a;
}
template <int K> inline Dual<K> operator*(double b, Dual<K> a) { return a * b; }
template <int K> inline Dual<K> operator/(Dual<K> a, double b) { return a * (1.0 / b); }
template <int K> inline Dual<K> operator/(double b, const Dual<K>& a) { return Dual<K>(b) / a; }

template <int K> inline bool operator<(const Dual<K>& a, const Dual<K>& b) { return a.v < b.v; }
template <int K> inline bool operator>(const Dual<K>& a, const Dual<K>& b) { return a.v > b.v; }
template <int K> inline bool operator<(const Dual<K>& a, double b) { return a.v < b; }
template <int K> inline bool operator>(const Dual<K>& a, double b) { return a.v > b; }

template <int K>
inline Dual<K> sqrt(const Dual<K>& a) {
  Dual<K> r;
  r.v = std::sqrt(a.v);
  const double s = 0.5 / r.v;
  for (int k = 0; k < K; ++k) r.d[k] = s * a.d[k];
  return r;
}

template <int K>
inline Dual<K> exp(const Dual<K>& a) {
  Dual<K> r;
  r.v = std::exp(a.v);
  for (int k = 0; k < K; ++k) r.d[k] = r.v * a.d[k];
  return r;
}

template <int K>
inline Dual<K> log(const Dual<K>& a) {
  Dual<K> r;
  r.v = std::log(a.v);
  const double s = 1.0 / a.v;
  for (int k = 0; k < K; ++k) r.d[k] = s * a.d[k];
  return r;
}

/// a^p for real exponent p; requires a > 0.
template <int K>
inline Dual<K> pow(const Dual<K>& a, double p) {
  Dual<K> r;
  r.v = std::pow(a.v, p);
  const double s = p * std::pow(a.v, p - 1.0);
  for (int k = 0; k < K; ++k) r.d[k] = s * a.d[k];
  return r;
}

template <int K> inline double value(const Dual<K>& a) { return a.v; }
inline double value(double a) { return a; }

// scalar shims so templated kernels compile for plain double
using std::exp;
using std::log;
using std::pow;
using std::sqrt;

}  // namespace isolab
