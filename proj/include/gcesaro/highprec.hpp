#pragma once

// Quad-precision (binary128) scalar types and a few generic helpers that
// work uniformly on long double, std::complex<long double>, float128 and
// complex128. Needs GNU extensions (__float128) and libquadmath.

#include "core.hpp"

#include <boost/multiprecision/complex128.hpp>
#include <boost/multiprecision/float128.hpp>

#include <complex>
#include <type_traits>

namespace gcesaro {

using Quad = boost::multiprecision::float128;
using QuadComplex = boost::multiprecision::complex128;

namespace detail {

template <class V>
struct value_traits {
  using real = V;
  static constexpr bool complex = false;
};
template <class R>
struct value_traits<std::complex<R>> {
  using real = R;
  static constexpr bool complex = true;
};
template <>
struct value_traits<QuadComplex> {
  using real = Quad;
  static constexpr bool complex = true;
};

template <class V>
using real_of = typename value_traits<V>::real;

/// Builds V from a double-precision Scalar; the imaginary part is dropped for
/// real V (callers only choose real V when it is zero).
template <class V>
V from_scalar(Scalar z) {
  if constexpr (value_traits<V>::complex) {
    using R = real_of<V>;
    return V(R(z.real()), R(z.imag()));
  } else {
    return V(z.real());
  }
}

template <class V>
V from_wide(WideScalar z) {
  if constexpr (value_traits<V>::complex) {
    using R = real_of<V>;
    return V(R(z.real()), R(z.imag()));
  } else {
    return V(z.real());
  }
}

template <class V>
WideScalar to_wide(const V& v) {
  if constexpr (value_traits<V>::complex) {
    return {static_cast<long double>(v.real()), static_cast<long double>(v.imag())};
  } else {
    return {static_cast<long double>(v), 0.0L};
  }
}

template <class V>
Scalar to_scalar_value(const V& v) {
  return narrow(to_wide(v));
}

template <class R>
R rational_to(const Rational& q) {
  return boost::multiprecision::numerator(q).convert_to<R>() / boost::multiprecision::denominator(q).convert_to<R>();
}

/// exp(z) - 1 without cancellation for small |z|.
template <class V>
V expm1_value(const V& z) {
  using std::cos;
  using std::exp;
  using std::expm1;
  using std::sin;
  if constexpr (value_traits<V>::complex) {
    using R = real_of<V>;
    const R x = z.real(), y = z.imag();
    const R em1 = expm1(x);
    const R sh = sin(y / 2);
    const R cos_m1 = -2 * sh * sh;
    return V(em1 * cos(y) + cos_m1, exp(x) * sin(y));
  } else {
    return expm1(z);
  }
}

template <class V>
V log_value(const V& v) {
  using std::log;
  return log(v);
}

template <class V>
V exp_value(const V& v) {
  using std::exp;
  return exp(v);
}

template <class V>
auto abs_value(const V& v) {
  using std::abs;
  return abs(v);
}

}  // namespace detail
}  // namespace gcesaro
