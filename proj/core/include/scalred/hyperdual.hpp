#pragma once

/**
 * @file hyperdual.hpp
 * @brief Hyper-dual numbers for exact first and second derivatives.
 *
 * A hyper-dual number is  re + e1*E1 + e2*E2 + e12*E1E2  with
 * E1^2 = E2^2 = 0 and E1E2 = E2E1 != 0. Evaluating a smooth f at
 * x + d1*E1 + d2*E2 yields
 *
 *   f(x) + f'(x)d1*E1 + f'(x)d2*E2 + (d1^T f''(x) d2)*E1E2,
 *
 * so one pass gives a mixed second directional derivative with no
 * truncation error.
 *
 * The component type is a template parameter so that hyper-duals can be
 * nested: HyperDualT<HyperDual> carries derivatives of derivatives and is
 * used where a Jacobian-vector product itself has to be differentiated
 * twice (the reduced Lagrangian).
 */

#include <cmath>
#include <type_traits>

#include "scalred/errors.hpp"

namespace scalred {

template <class T>
struct HyperDualT;

namespace detail {
template <class T>
struct is_hyperdual : std::false_type {};
template <class T>
struct is_hyperdual<HyperDualT<T>> : std::true_type {};
}  // namespace detail

template <class T>
struct HyperDualT {
  T re{};
  T e1{};
  T e2{};
  T e12{};

  constexpr HyperDualT() = default;
  constexpr HyperDualT(double v) : re(v) {}  // NOLINT: implicit constant embedding
  template <class U = T>
    requires(!std::is_same_v<U, double>)
  constexpr HyperDualT(const T& v) : re(v) {}  // NOLINT
  constexpr HyperDualT(T r, T a, T b, T ab) : re(r), e1(a), e2(b), e12(ab) {}

  friend constexpr HyperDualT operator+(const HyperDualT& a, const HyperDualT& b) {
    return {a.re + b.re, a.e1 + b.e1, a.e2 + b.e2, a.e12 + b.e12};
  }
  friend constexpr HyperDualT operator-(const HyperDualT& a, const HyperDualT& b) {
    return {a.re - b.re, a.e1 - b.e1, a.e2 - b.e2, a.e12 - b.e12};
  }
  friend constexpr HyperDualT operator-(const HyperDualT& a) {
    return {-a.re, -a.e1, -a.e2, -a.e12};
  }
  friend constexpr HyperDualT operator*(const HyperDualT& a, const HyperDualT& b) {
    return {a.re * b.re, a.re * b.e1 + a.e1 * b.re, a.re * b.e2 + a.e2 * b.re,
            a.re * b.e12 + a.e1 * b.e2 + a.e2 * b.e1 + a.e12 * b.re};
  }
  friend constexpr HyperDualT operator*(const HyperDualT& a, double s) {
    return {a.re * s, a.e1 * s, a.e2 * s, a.e12 * s};
  }
  friend constexpr HyperDualT operator*(double s, const HyperDualT& a) { return a * s; }
  friend HyperDualT operator/(const HyperDualT& a, const HyperDualT& b) {
    return a * reciprocal(b);
  }
  friend constexpr HyperDualT operator/(const HyperDualT& a, double s) {
    return a * (1.0 / s);
  }

  HyperDualT& operator+=(const HyperDualT& o) { return *this = *this + o; }
  HyperDualT& operator-=(const HyperDualT& o) { return *this = *this - o; }
  HyperDualT& operator*=(const HyperDualT& o) { return *this = *this * o; }
  HyperDualT& operator/=(const HyperDualT& o) { return *this = *this / o; }
};

using HyperDual = HyperDualT<double>;
using NestedDual = HyperDualT<HyperDual>;

/// Innermost real value of a (possibly nested) hyper-dual.
constexpr double value_of(double x) { return x; }
template <class T>
constexpr double value_of(const HyperDualT<T>& x) {
  return value_of(x.re);
}

namespace detail {

// f(x) given f, f', f'' at x.re.
template <class T>
constexpr HyperDualT<T> chain(const HyperDualT<T>& x, const T& f0, const T& f1, const T& f2) {
  return {f0, f1 * x.e1, f1 * x.e2, f1 * x.e12 + f2 * x.e1 * x.e2};
}

inline bool is_integer(double p) { return std::floor(p) == p; }

}  // namespace detail

// Real overloads with the same domain guards as the hyper-dual ones, so
// that expression code generic in the scalar type behaves identically.
inline double reciprocal(double x) {
  if (x == 0.0) throw NumericError("division by zero");
  return 1.0 / x;
}
inline double exp(double x) { return std::exp(x); }
inline double log(double x) {
  if (!(x > 0.0)) throw NumericError("log of non-positive argument");
  return std::log(x);
}
inline double sqrt(double x) {
  if (x < 0.0) throw NumericError("sqrt of negative argument");
  return std::sqrt(x);
}
inline double sin(double x) { return std::sin(x); }
inline double cos(double x) { return std::cos(x); }
inline double tan(double x) { return std::tan(x); }
inline double atan(double x) { return std::atan(x); }
inline double atan2(double y, double x) {
  if (x == 0.0 && y == 0.0) throw NumericError("atan2 at the origin");
  return std::atan2(y, x);
}
inline double pow(double x, double p) {
  if (x < 0.0 && !detail::is_integer(p)) throw NumericError("pow of negative base with non-integer exponent");
  if (x == 0.0 && p < 0.0) throw NumericError("pow of zero with negative exponent");
  return std::pow(x, p);
}

template <class T>
HyperDualT<T> reciprocal(const HyperDualT<T>& x) {
  if (value_of(x) == 0.0) throw NumericError("division by zero");
  const T inv = reciprocal(x.re);
  return detail::chain(x, inv, -(inv * inv), 2.0 * inv * inv * inv);
}

template <class T>
HyperDualT<T> exp(const HyperDualT<T>& x) {
  const T e = exp(x.re);
  return detail::chain(x, e, e, e);
}

template <class T>
HyperDualT<T> log(const HyperDualT<T>& x) {
  if (!(value_of(x) > 0.0)) throw NumericError("log of non-positive argument");
  const T inv = reciprocal(x.re);
  return detail::chain(x, log(x.re), inv, -(inv * inv));
}

template <class T>
HyperDualT<T> sqrt(const HyperDualT<T>& x) {
  if (!(value_of(x) > 0.0)) throw NumericError("sqrt of non-positive argument (derivative undefined)");
  const T s = sqrt(x.re);
  const T inv = reciprocal(s);
  return detail::chain(x, s, 0.5 * inv, -0.25 * inv * inv * inv);
}

template <class T>
HyperDualT<T> sin(const HyperDualT<T>& x) {
  const T s = sin(x.re);
  return detail::chain(x, s, cos(x.re), -s);
}

template <class T>
HyperDualT<T> cos(const HyperDualT<T>& x) {
  const T c = cos(x.re);
  return detail::chain(x, c, -sin(x.re), -c);
}

template <class T>
HyperDualT<T> tan(const HyperDualT<T>& x) {
  const T t = tan(x.re);
  const T sec2 = 1.0 + t * t;
  return detail::chain(x, t, sec2, 2.0 * t * sec2);
}

template <class T>
HyperDualT<T> atan(const HyperDualT<T>& x) {
  const T d = reciprocal(1.0 + x.re * x.re);
  return detail::chain(x, atan(x.re), d, -2.0 * x.re * d * d);
}

/// Real exponent. Integer exponents accept negative bases.
template <class T>
HyperDualT<T> pow(const HyperDualT<T>& x, double p) {
  const double v = value_of(x);
  if (p == 0.0) return HyperDualT<T>(1.0);
  if (p == 1.0) return x;
  if (v < 0.0 && !detail::is_integer(p)) throw NumericError("pow of negative base with non-integer exponent");
  if (v == 0.0 && !(detail::is_integer(p) && p >= 2.0))
    throw NumericError("pow at zero base with exponent below 2 (derivative undefined)");
  const T f0 = pow(x.re, p);
  const T f1 = p * pow(x.re, p - 1.0);
  const T f2 = (p == 2.0) ? T(2.0) : T(p * (p - 1.0) * pow(x.re, p - 2.0));
  return detail::chain(x, f0, f1, f2);
}

template <class T>
HyperDualT<T> pow(const HyperDualT<T>& x, const HyperDualT<T>& p) {
  if (!(value_of(x) > 0.0)) throw NumericError("pow with variable exponent requires a positive base");
  return exp(p * log(x));
}

/// Two-argument arctangent. Derivatives are those of atan(y/x) (or of
/// -atan(x/y) when x vanishes); only the value carries the branch offset.
template <class T>
HyperDualT<T> atan2(const HyperDualT<T>& y, const HyperDualT<T>& x) {
  const double yv = value_of(y);
  const double xv = value_of(x);
  if (xv == 0.0 && yv == 0.0) throw NumericError("atan2 at the origin");
  HyperDualT<T> r = (std::abs(xv) >= std::abs(yv)) ? atan(y / x) : -atan(x / y);
  const double offset = std::atan2(yv, xv) - value_of(r);
  return r + HyperDualT<T>(offset);
}

}  // namespace scalred
