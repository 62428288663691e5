#pragma once

// Forward-mode automatic differentiation.
//
// Dual<double> carries a value and its gradient. Nesting gives higher order:
// in Dual<Dual<double>> the outer slots d[i] are themselves first-order jets
// of the partial derivative in direction i, so d[i].d[j] is a second
// derivative and d[i] can be handed on as a differentiable quantity.

#include <array>
#include <cmath>
#include <type_traits>

#include "clab/types.hpp"

namespace clab {

using std::cos;
using std::exp;
using std::log;
using std::pow;
using std::sin;
using std::sqrt;

template <typename T>
struct Dual {
  T v{};
  std::array<T, kMaxDim> d{};

  constexpr Dual() = default;
  constexpr Dual(double c) : v(c) {}  // NOLINT: constants promote implicitly
  constexpr Dual(const T& value, const std::array<T, kMaxDim>& grad) : v(value), d(grad) {}

  Dual& operator+=(const Dual& o) {
    v += o.v;
    for (int i = 0; i < kMaxDim; ++i) d[i] += o.d[i];
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    v -= o.v;
    for (int i = 0; i < kMaxDim; ++i) d[i] -= o.d[i];
    return *this;
  }
  Dual& operator*=(const Dual& o) {
    for (int i = 0; i < kMaxDim; ++i) d[i] = d[i] * o.v + v * o.d[i];
    v *= o.v;
    return *this;
  }
  Dual& operator*=(double c) {
    v *= c;
    for (auto& di : d) di *= c;
    return *this;
  }
};

using Jet1 = Dual<double>;
using Jet2 = Dual<Dual<double>>;

template <typename>
struct is_dual : std::false_type {};
template <typename T>
struct is_dual<Dual<T>> : std::true_type {};

inline double value_of(double x) { return x; }
template <typename T>
double value_of(const Dual<T>& x) {
  return value_of(x.v);
}

template <typename T>
Dual<T> operator-(const Dual<T>& a) {
  Dual<T> r;
  r.v = -a.v;
  for (int i = 0; i < kMaxDim; ++i) r.d[i] = -a.d[i];
  return r;
}
template <typename T>
Dual<T> operator+(Dual<T> a, const Dual<T>& b) {
  return a += b;
}
template <typename T>
Dual<T> operator-(Dual<T> a, const Dual<T>& b) {
  return a -= b;
}
template <typename T>
Dual<T> operator*(Dual<T> a, const Dual<T>& b) {
  return a *= b;
}
template <typename T>
Dual<T> operator+(Dual<T> a, double c) {
  a.v += c;
  return a;
}
template <typename T>
Dual<T> operator+(double c, Dual<T> a) {
  a.v += c;
  return a;
}
template <typename T>
Dual<T> operator-(Dual<T> a, double c) {
  a.v -= c;
  return a;
}
template <typename T>
Dual<T> operator-(double c, const Dual<T>& a) {
  return -a + c;
}
template <typename T>
Dual<T> operator*(Dual<T> a, double c) {
  return a *= c;
}
template <typename T>
Dual<T> operator*(double c, Dual<T> a) {
  return a *= c;
}

// Chain rule: r = f(a) given f(a.v) and f'(a.v).
template <typename T>
Dual<T> chain(const Dual<T>& a, const T& fa, const T& dfa) {
  Dual<T> r;
  r.v = fa;
  for (int i = 0; i < kMaxDim; ++i) r.d[i] = dfa * a.d[i];
  return r;
}

template <typename T>
Dual<T> reciprocal(const Dual<T>& a) {
  const T inv = 1.0 / a.v;
  return chain(a, inv, -(inv * inv));
}
inline double reciprocal(double a) { return 1.0 / a; }

template <typename T>
Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
  return a * reciprocal(b);
}
template <typename T>
Dual<T> operator/(Dual<T> a, double c) {
  return a *= (1.0 / c);
}
template <typename T>
Dual<T> operator/(double c, const Dual<T>& a) {
  return c * reciprocal(a);
}

template <typename T>
Dual<T> sqrt(const Dual<T>& a) {
  using std::sqrt;
  const T s = sqrt(a.v);
  return chain(a, s, 0.5 / s);
}
template <typename T>
Dual<T> exp(const Dual<T>& a) {
  using std::exp;
  const T e = exp(a.v);
  return chain(a, e, e);
}
template <typename T>
Dual<T> log(const Dual<T>& a) {
  using std::log;
  return chain(a, T(log(a.v)), T(1.0 / a.v));
}
template <typename T>
Dual<T> pow(const Dual<T>& a, double p) {
  using std::pow;
  return chain(a, T(pow(a.v, p)), T(p * pow(a.v, p - 1.0)));
}
template <typename T>
Dual<T> sin(const Dual<T>& a) {
  using std::cos;
  using std::sin;
  return chain(a, T(sin(a.v)), T(cos(a.v)));
}
template <typename T>
Dual<T> cos(const Dual<T>& a) {
  using std::cos;
  using std::sin;
  return chain(a, T(cos(a.v)), T(-sin(a.v)));
}

/// Point whose coordinates are seeded as independent variables.
using JetPoint = std::array<Jet2, kMaxDim>;
using JetPoint1 = std::array<Jet1, kMaxDim>;

/// Seeds the first `dim` coordinates of x; the remaining slots are constants.
inline JetPoint seed_jet2(const Vec& x, int dim) {
  JetPoint p;
  for (int i = 0; i < kMaxDim; ++i) {
    p[i] = Jet2(x[i]);
    if (i < dim) {
      p[i].v.d[i] = 1.0;
      p[i].d[i] = Jet1(1.0);
    }
  }
  return p;
}

inline JetPoint1 seed_jet1(const Vec& x, int dim) {
  JetPoint1 p;
  for (int i = 0; i < kMaxDim; ++i) {
    p[i] = Jet1(x[i]);
    if (i < dim) p[i].d[i] = 1.0;
  }
  return p;
}

inline double value(const Jet2& f) { return f.v.v; }
inline double value(const Jet1& f) { return f.v; }

/// First-order jet of the partial derivative of f in direction i.
inline const Jet1& partial(const Jet2& f, int i) { return f.d[i]; }

/// Drops the second-order information.
inline const Jet1& lower(const Jet2& f) { return f.v; }

inline Vec gradient(const Jet2& f) { return {f.v.d[0], f.v.d[1], f.v.d[2]}; }
inline Vec gradient(const Jet1& f) { return {f.d[0], f.d[1], f.d[2]}; }

inline Mat hessian(const Jet2& f) {
  Mat h;
  for (int i = 0; i < kMaxDim; ++i)
    for (int j = 0; j < kMaxDim; ++j) h(i, j) = f.d[i].d[j];
  return h;
}

}  // namespace clab
