#pragma once

/**
 * @file core.hpp
 * @brief Scalar types, exact rationals, error types and the pole signal.
 */

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <optional>
#include <variant>

namespace gcesaro {

using Scalar = std::complex<double>;
using Wide = long double;
using WideScalar = std::complex<long double>;
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Snap radius for special points (s = 1, s in Z<=0, integer exponents).
inline constexpr double kSnapRadius = 1e-9;
/// Exclusion radius for lambda = 1 in regular factors.
inline constexpr double kLambdaEps = 1e-9;
/// Exponents closer than this are merged.
inline constexpr double kExponentMerge = 1e-12;

// ---------------------------------------------------------------------------
// Errors

class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define GCESARO_ERROR(name)                      \
  class name : public error {                    \
   public:                                       \
    using error::error;                          \
  }

GCESARO_ERROR(domain_error);
GCESARO_ERROR(lambda_is_one);
GCESARO_ERROR(s_at_pole);
GCESARO_ERROR(non_triangular);
GCESARO_ERROR(not_convergent);
GCESARO_ERROR(fit_failure);
GCESARO_ERROR(cross_check_mismatch);
GCESARO_ERROR(vanishing_mass);
GCESARO_ERROR(quadrature_failure);
GCESARO_ERROR(missing_derivative_term);
GCESARO_ERROR(non_integer_rho);
GCESARO_ERROR(illegal_cancellation);
GCESARO_ERROR(order_exceeded);

#undef GCESARO_ERROR

// ---------------------------------------------------------------------------
// Scalars

/// Builds a Scalar, rejecting NaN and infinite components.
inline Scalar make_scalar(double re, double im = 0.0) {
  if (!std::isfinite(re) || !std::isfinite(im)) {
    throw domain_error("non-finite scalar component");
  }
  return {re, im};
}

inline bool is_finite(Scalar z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

inline WideScalar widen(Scalar z) { return {z.real(), z.imag()}; }
inline Scalar narrow(WideScalar z) {
  return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }
inline Scalar to_scalar(const Rational& q) { return {to_double(q), 0.0}; }

inline std::string to_string(const Rational& q) {
  std::ostringstream os;
  os << q;
  return os.str();
}

/// Returns n when z lies within `radius` of the integer n, otherwise nothing.
inline std::optional<std::int64_t> snap_integer(Scalar z, double radius = kSnapRadius) {
  const double n = std::round(z.real());
  if (std::abs(z - Scalar(n, 0.0)) <= radius && std::abs(n) < 9.0e15) {
    return static_cast<std::int64_t>(n);
  }
  return std::nullopt;
}

inline bool snaps_to_nonneg_integer(Scalar z, double radius = kSnapRadius) {
  auto n = snap_integer(z, radius);
  return n && *n >= 0;
}

inline bool snaps_to_nonpos_integer(Scalar z, double radius = kSnapRadius) {
  auto n = snap_integer(z, radius);
  return n && *n <= 0;
}

// ---------------------------------------------------------------------------
// Pole signal

/// Outcome reported where an eigenvalue-1 component (pure log divergence, or a
/// regular factor with lambda -> 1) blocks a generalised limit.
struct PoleSignal {
  std::string reason;
  Scalar exponent{0.0, 0.0};
  int log_power = 0;
};

using LimitValue = std::variant<Scalar, PoleSignal>;

inline bool is_pole(const LimitValue& v) { return std::holds_alternative<PoleSignal>(v); }
inline Scalar value_of(const LimitValue& v) {
  if (const auto* p = std::get_if<PoleSignal>(&v)) {
    throw s_at_pole("value requested at a pole: " + p->reason);
  }
  return std::get<Scalar>(v);
}

// ---------------------------------------------------------------------------
// Small numeric helpers

/// Neumaier-compensated accumulator.
template <class T>
class CompensatedSum {
 public:
  void add(T x) {
    add_part(x);
  }
  T value() const { return sum_ + comp_; }

 private:
  template <class U>
  static void step(U& sum, U& comp, U x) {
    U t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }
  void add_part(T x) {
    if constexpr (std::is_floating_point_v<T>) {
      step(sum_, comp_, x);
    } else {
      using R = typename T::value_type;
      R s = sum_.real(), c = comp_.real();
      step(s, c, x.real());
      R si = sum_.imag(), ci = comp_.imag();
      step(si, ci, x.imag());
      sum_ = T(s, si);
      comp_ = T(c, ci);
    }
  }
  T sum_{};
  T comp_{};
};

inline Rational binomial_rational(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return Rational(0);
  BigInt r = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    r *= (n - k + i);
    r /= i;
  }
  return Rational(r);
}

inline double binomial_double(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace gcesaro
