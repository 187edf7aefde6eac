#pragma once

#include <array>
#include <cmath>

namespace mosharp {

/// Second-order forward-mode jet in up to three variables: value, gradient and
/// Hessian, propagated by the chain rule.
struct Jet {
  double v = 0.0;
  std::array<double, 3> g{0, 0, 0};
  std::array<std::array<double, 3>, 3> H{};

  static Jet constant(double c) {
    Jet j;
    j.v = c;
    return j;
  }
  static Jet variable(double x, int axis) {
    Jet j;
    j.v = x;
    j.g[axis] = 1.0;
    return j;
  }
};

inline Jet operator+(const Jet& a, const Jet& b) {
  Jet r;
  r.v = a.v + b.v;
  for (int i = 0; i < 3; ++i) {
    r.g[i] = a.g[i] + b.g[i];
    for (int k = 0; k < 3; ++k) r.H[i][k] = a.H[i][k] + b.H[i][k];
  }
  return r;
}

inline Jet operator*(double c, const Jet& a) {
  Jet r;
  r.v = c * a.v;
  for (int i = 0; i < 3; ++i) {
    r.g[i] = c * a.g[i];
    for (int k = 0; k < 3; ++k) r.H[i][k] = c * a.H[i][k];
  }
  return r;
}

inline Jet operator-(const Jet& a, const Jet& b) { return a + (-1.0) * b; }
inline Jet operator+(const Jet& a, double c) {
  Jet r = a;
  r.v += c;
  return r;
}
inline Jet operator+(double c, const Jet& a) { return a + c; }

inline Jet operator*(const Jet& a, const Jet& b) {
  Jet r;
  r.v = a.v * b.v;
  for (int i = 0; i < 3; ++i) {
    r.g[i] = a.g[i] * b.v + a.v * b.g[i];
    for (int k = 0; k < 3; ++k)
      r.H[i][k] = a.H[i][k] * b.v + a.g[i] * b.g[k] + a.g[k] * b.g[i] + a.v * b.H[i][k];
  }
  return r;
}

/// Composition with a scalar function given its value and first two derivatives at a.v.
inline Jet chain(const Jet& a, double f, double df, double d2f) {
  Jet r;
  r.v = f;
  for (int i = 0; i < 3; ++i) {
    r.g[i] = df * a.g[i];
    for (int k = 0; k < 3; ++k) r.H[i][k] = d2f * a.g[i] * a.g[k] + df * a.H[i][k];
  }
  return r;
}

inline Jet exp(const Jet& a) {
  const double e = std::exp(a.v);
  return chain(a, e, e, e);
}
inline Jet sin(const Jet& a) { return chain(a, std::sin(a.v), std::cos(a.v), -std::sin(a.v)); }
inline Jet cos(const Jet& a) { return chain(a, std::cos(a.v), -std::sin(a.v), -std::cos(a.v)); }
inline Jet reciprocal(const Jet& a) {
  const double i = 1.0 / a.v;
  return chain(a, i, -i * i, 2.0 * i * i * i);
}
inline Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

/// u -> exp(-1/u) for u > 0, and 0 with zero derivatives for u <= 0.
inline Jet exp_neg_reciprocal(const Jet& u) {
  if (u.v <= 0.0) return Jet{};
  const double i = 1.0 / u.v;
  const double f = std::exp(-i);
  return chain(u, f, f * i * i, f * (i * i * i * i - 2.0 * i * i * i));
}

/// |x| for x != 0. At 0 the gradient is set to zero (a subgradient).
inline Jet sqrt_nonneg(const Jet& s) {
  if (s.v <= 0.0) return Jet{};
  const double r = std::sqrt(s.v);
  return chain(s, r, 0.5 / r, -0.25 / (r * s.v));
}

}  // namespace mosharp
