#pragma once

// Second-order Taylor jets in four variables.
//
// A jet carries a value, gradient and Hessian of a scalar field at one point,
// together with the order up to which those are known. Arithmetic follows the
// Leibniz and chain rules and truncates to the lower order of its operands,
// so composite differential operators (Hodge star, codifferential, covariant
// derivatives) are exact when the seeds come from symbolic derivatives.

#include <algorithm>
#include <array>
#include <cmath>

#include "curv4/expr.hpp"

namespace curv4 {

struct Jet {
  double v = 0.0;
  std::array<double, 4> d{};
  std::array<std::array<double, 4>, 4> h{};
  int order = 2;

  Jet() = default;
  explicit Jet(double value, int ord = 2) : v(value), order(ord) {}

  /// Partial derivative d/dx_k as a jet of one order lower.
  Jet partial(int k) const {
    Jet r;
    r.order = order - 1;
    r.v = d[static_cast<std::size_t>(k)];
    if (r.order >= 1) r.d = h[static_cast<std::size_t>(k)];
    return r;
  }

  Jet& operator+=(const Jet& o) {
    v += o.v;
    for (int i = 0; i < 4; ++i) {
      d[i] += o.d[i];
      for (int j = 0; j < 4; ++j) h[i][j] += o.h[i][j];
    }
    order = std::min(order, o.order);
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    v -= o.v;
    for (int i = 0; i < 4; ++i) {
      d[i] -= o.d[i];
      for (int j = 0; j < 4; ++j) h[i][j] -= o.h[i][j];
    }
    order = std::min(order, o.order);
    return *this;
  }
  Jet& operator*=(double c) {
    v *= c;
    for (int i = 0; i < 4; ++i) {
      d[i] *= c;
      for (int j = 0; j < 4; ++j) h[i][j] *= c;
    }
    return *this;
  }
};

inline Jet operator+(Jet a, const Jet& b) { return a += b; }
inline Jet operator-(Jet a, const Jet& b) { return a -= b; }
inline Jet operator*(Jet a, double c) { return a *= c; }
inline Jet operator*(double c, Jet a) { return a *= c; }
inline Jet operator-(Jet a) { return a *= -1.0; }

inline Jet operator*(const Jet& a, const Jet& b) {
  Jet r;
  r.order = std::min(a.order, b.order);
  r.v = a.v * b.v;
  for (int i = 0; i < 4; ++i) {
    r.d[i] = a.d[i] * b.v + a.v * b.d[i];
    for (int j = 0; j < 4; ++j) {
      r.h[i][j] = a.h[i][j] * b.v + a.d[i] * b.d[j] + a.d[j] * b.d[i] + a.v * b.h[i][j];
    }
  }
  return r;
}

/// f(a) given f(a.v), f'(a.v), f''(a.v).
inline Jet compose(const Jet& a, double f0, double f1, double f2) {
  Jet r;
  r.order = a.order;
  r.v = f0;
  for (int i = 0; i < 4; ++i) {
    r.d[i] = f1 * a.d[i];
    for (int j = 0; j < 4; ++j) r.h[i][j] = f1 * a.h[i][j] + f2 * a.d[i] * a.d[j];
  }
  return r;
}

inline Jet reciprocal(const Jet& a) {
  const double inv = 1.0 / a.v;
  return compose(a, inv, -inv * inv, 2.0 * inv * inv * inv);
}

inline Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

inline Jet sqrt(const Jet& a) {
  const double s = std::sqrt(a.v);
  return compose(a, s, 0.5 / s, -0.25 / (s * a.v));
}

/// Seeds a jet of `e` at `p` from precomputed symbolic derivatives.
/// `first[k]` = de/dx_k, `second[k][l]` = d2e/dx_k dx_l.
inline Jet seed_jet(const Expr& e, const std::array<Expr, 4>& first,
                    const std::array<std::array<Expr, 4>, 4>& second, const Point& p) {
  Jet r;
  r.v = e.eval(p);
  for (int k = 0; k < 4; ++k) {
    r.d[k] = first[k].eval(p);
    for (int l = k; l < 4; ++l) r.h[k][l] = r.h[l][k] = second[k][l].eval(p);
  }
  return r;
}

}  // namespace curv4
