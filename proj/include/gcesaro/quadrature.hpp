#pragma once

// Fixed Gauss-Legendre rules for per-unit-interval work and thin wrappers over
// Boost.Math adaptive quadrature for generic integrands.

#include "core.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

namespace gcesaro::quad {

/// Gauss-Legendre nodes/weights on [0,1], computed once by Newton iteration
/// in the working precision R.
template <int N, class R = long double>
struct GaussRule {
  std::array<R, N> nodes{};
  std::array<R, N> weights{};

  GaussRule() {
    using std::abs;
    using std::cos;
    const R pi = boost::math::constants::pi<R>();
    const R tol = std::numeric_limits<R>::epsilon() * 16;
    auto legendre = [](const R& x, R& p0, R& p1) {
      p0 = 1;
      p1 = x;
      for (int k = 2; k <= N; ++k) {
        R p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
    };
    for (int i = 0; i < N; ++i) {
      R x = cos(pi * (i + R(0.75)) / (N + R(0.5)));
      R p0, p1, dp;
      for (int it = 0; it < 100; ++it) {
        legendre(x, p0, p1);
        dp = N * (x * p1 - p0) / (x * x - 1);
        R dx = p1 / dp;
        x -= dx;
        if (abs(dx) < tol) break;
      }
      legendre(x, p0, p1);
      dp = N * (x * p1 - p0) / (x * x - 1);
      nodes[i] = (1 - x) / 2;
      weights[i] = 1 / ((1 - x * x) * dp * dp);
    }
  }
};

inline const GaussRule<12>& rule12() {
  static const GaussRule<12> r;
  return r;
}

inline const GaussRule<24>& rule24() {
  static const GaussRule<24> r;
  return r;
}

/// Fixed-order Gauss on [a,b].
template <class F, int N = 12>
auto gauss(F&& f, long double a, long double b, const GaussRule<N>& r = rule12()) {
  using R = decltype(f(a));
  R acc{};
  const long double h = b - a;
  for (int i = 0; i < N; ++i) acc += r.weights[i] * f(a + h * r.nodes[i]);
  return acc * h;
}

/// Integral over (0, b] of an integrand with an integrable algebraic/log
/// singularity at 0: geometric subdivision until contributions are negligible.
template <class F>
WideScalar gauss_to_zero(F&& f, long double b) {
  CompensatedSum<WideScalar> acc;
  long double hi = b;
  int quiet = 0;
  for (int level = 0; level < 4000 && hi > 0; ++level) {
    const long double lo = hi / 2;
    WideScalar part = gauss(f, lo, hi, rule24());
    acc.add(part);
    const long double mag = std::abs(acc.value());
    if (std::abs(part) <= 1e-22L * (1 + mag)) {
      if (++quiet >= 6) break;
    } else {
      quiet = 0;
    }
    hi = lo;
  }
  return acc.value();
}

/// Adaptive Gauss-Kronrod on a finite interval for complex integrands.
template <class F>
Scalar adaptive(F&& f, double a, double b, double tol = 1e-13, double* err_out = nullptr) {
  using boost::math::quadrature::gauss_kronrod;
  double err = 0;
  Scalar r = gauss_kronrod<double, 31>::integrate(
      [&](double x) { return Scalar(f(x)); }, a, b, 20, tol, &err);
  if (!is_finite(r)) {
    throw quadrature_failure("non-finite quadrature on [" + std::to_string(a) + ", " +
                             std::to_string(b) + "]");
  }
  if (err_out) *err_out = err;
  return r;
}

/// Double-exponential quadrature on [a,b] (endpoint singularities allowed).
/// `err_out` receives the larger of the two component error estimates.
template <class F>
Scalar tanh_sinh(F&& f, double a, double b, double* err_out = nullptr) {
  static thread_local boost::math::quadrature::tanh_sinh<double> ts;
  const double tol = std::sqrt(std::numeric_limits<double>::epsilon());
  double err_re = 0, err_im = 0;
  const double re = ts.integrate([&](double x) { return Scalar(f(x)).real(); }, a, b, tol, &err_re);
  const double im = ts.integrate([&](double x) { return Scalar(f(x)).imag(); }, a, b, tol, &err_im);
  if (err_out) *err_out = std::max(err_re, err_im);
  Scalar r(re, im);
  if (!is_finite(r)) {
    throw quadrature_failure("non-finite tanh-sinh quadrature on [" + std::to_string(a) + ", " +
                             std::to_string(b) + "]");
  }
  return r;
}

/// Double-exponential quadrature on [a, infinity).
template <class F>
Scalar exp_sinh(F&& f, double a, double* err_out = nullptr) {
  static thread_local boost::math::quadrature::exp_sinh<double> es;
  const double inf = std::numeric_limits<double>::infinity();
  const double tol = std::sqrt(std::numeric_limits<double>::epsilon());
  double err_re = 0, err_im = 0;
  const double re = es.integrate([&](double x) { return Scalar(f(x)).real(); }, a, inf, tol, &err_re);
  const double im = es.integrate([&](double x) { return Scalar(f(x)).imag(); }, a, inf, tol, &err_im);
  if (err_out) *err_out = std::max(err_re, err_im);
  Scalar r(re, im);
  if (!is_finite(r)) {
    throw quadrature_failure("non-finite exp-sinh quadrature on [" + std::to_string(a) +
                             ", inf)");
  }
  return r;
}

}  // namespace gcesaro::quad
