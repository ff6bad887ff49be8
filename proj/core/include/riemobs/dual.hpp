#pragma once

// Forward-mode dual numbers with a single tangent direction.
//
// Nesting Dual<Dual<double>> yields second directional derivatives, which is
// how the geometry kernel gets Hessians of user fields and derivatives of
// composite metrics. Expressions meant to be differentiated should be written
// as generic lambdas and call math functions unqualified (after
// `using std::sqrt;` etc.) so that argument-dependent lookup picks the
// overloads below.

#include <cmath>
#include <concepts>
#include <ostream>
#include <type_traits>

#include <Eigen/Core>

namespace riemobs {

template <class T>
struct Dual;

template <class T>
struct is_dual : std::false_type {};
template <class T>
struct is_dual<Dual<T>> : std::true_type {};
template <class T>
inline constexpr bool is_dual_v = is_dual<T>::value;

/// Nesting depth: double -> 0, Dual<double> -> 1, Dual<Dual<double>> -> 2, ...
template <class T>
struct dual_depth : std::integral_constant<int, 0> {};
template <class T>
struct dual_depth<Dual<T>> : std::integral_constant<int, 1 + dual_depth<T>::value> {};
template <class T>
inline constexpr int dual_depth_v = dual_depth<T>::value;

template <class T>
struct Dual {
  T v{};  // value
  T d{};  // tangent

  Dual() = default;
  Dual(const T& value, const T& tangent) : v(value), d(tangent) {}

  template <class S>
    requires(!is_dual_v<S> || (dual_depth_v<S> < dual_depth_v<Dual<T>>)) &&
            std::is_constructible_v<T, const S&>
  Dual(const S& s) : v(T(s)), d(T(0)) {}  // NOLINT(google-explicit-constructor)

  Dual& operator+=(const Dual& o) {
    v += o.v;
    d += o.d;
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    v -= o.v;
    d -= o.d;
    return *this;
  }
  Dual& operator*=(const Dual& o) {
    d = d * o.v + v * o.d;
    v *= o.v;
    return *this;
  }
  Dual& operator/=(const Dual& o) {
    const T inv = T(1) / o.v;
    v *= inv;
    d = (d - v * o.d) * inv;
    return *this;
  }

  friend Dual operator+(Dual a, const Dual& b) { return a += b; }
  friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
  friend Dual operator*(Dual a, const Dual& b) { return a *= b; }
  friend Dual operator/(Dual a, const Dual& b) { return a /= b; }
  friend Dual operator-(const Dual& a) { return Dual(-a.v, -a.d); }
  friend Dual operator+(const Dual& a) { return a; }

  friend bool operator==(const Dual& a, const Dual& b) { return a.v == b.v; }
  friend bool operator!=(const Dual& a, const Dual& b) { return a.v != b.v; }
  friend bool operator<(const Dual& a, const Dual& b) { return a.v < b.v; }
  friend bool operator>(const Dual& a, const Dual& b) { return a.v > b.v; }
  friend bool operator<=(const Dual& a, const Dual& b) { return a.v <= b.v; }
  friend bool operator>=(const Dual& a, const Dual& b) { return a.v >= b.v; }

  friend std::ostream& operator<<(std::ostream& os, const Dual& a) {
    return os << '(' << a.v << " + " << a.d << "e)";
  }
};

using D1 = Dual<double>;
using D2 = Dual<D1>;
using D3 = Dual<D2>;

/// Innermost double value of a (possibly nested) dual.
inline double value_of(double x) { return x; }
template <class T>
double value_of(const Dual<T>& x) {
  return value_of(x.v);
}

template <class T>
Dual<T> sqrt(const Dual<T>& a) {
  using std::sqrt;
  const T s = sqrt(a.v);
  return {s, a.d / (T(2) * s)};
}
template <class T>
Dual<T> exp(const Dual<T>& a) {
  using std::exp;
  const T e = exp(a.v);
  return {e, a.d * e};
}
template <class T>
Dual<T> log(const Dual<T>& a) {
  using std::log;
  return {log(a.v), a.d / a.v};
}
template <class T>
Dual<T> sin(const Dual<T>& a) {
  using std::cos;
  using std::sin;
  return {sin(a.v), a.d * cos(a.v)};
}
template <class T>
Dual<T> cos(const Dual<T>& a) {
  using std::cos;
  using std::sin;
  return {cos(a.v), -a.d * sin(a.v)};
}
template <class T>
Dual<T> tanh(const Dual<T>& a) {
  using std::tanh;
  const T t = tanh(a.v);
  return {t, a.d * (T(1) - t * t)};
}
template <class T>
Dual<T> atan(const Dual<T>& a) {
  using std::atan;
  return {atan(a.v), a.d / (T(1) + a.v * a.v)};
}
template <class T>
Dual<T> pow(const Dual<T>& a, double p) {
  using std::pow;
  const T head = pow(a.v, p - 1.0);
  return {head * a.v, a.d * (T(p) * head)};
}
template <class T>
Dual<T> abs(const Dual<T>& a) {
  return a.v < T(0) ? -a : a;
}

/// x*x, spelled out so that user expressions stay readable.
template <class T>
T square(const T& x) {
  return x * x;
}

}  // namespace riemobs

namespace Eigen {

template <class T>
struct NumTraits<riemobs::Dual<T>> : GenericNumTraits<riemobs::Dual<T>> {
  using Real = riemobs::Dual<T>;
  using NonInteger = riemobs::Dual<T>;
  using Nested = riemobs::Dual<T>;
  using Literal = riemobs::Dual<T>;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 2 * NumTraits<T>::ReadCost,
    AddCost = 2 * NumTraits<T>::AddCost,
    MulCost = 3 * NumTraits<T>::MulCost + NumTraits<T>::AddCost
  };
  static inline Real epsilon() { return Real(NumTraits<T>::epsilon()); }
  static inline Real dummy_precision() { return Real(NumTraits<T>::dummy_precision()); }
  static inline Real highest() { return Real(NumTraits<T>::highest()); }
  static inline Real lowest() { return Real(NumTraits<T>::lowest()); }
  static inline int digits10() { return NumTraits<T>::digits10(); }
};

}  // namespace Eigen
