#pragma once

// Averaging operators: continuous P, discrete P_D and its inverse, the
// measure-adapted P_mu, and regular polynomials in these operators.

#include "core.hpp"
#include "quadrature.hpp"
#include "seqfun.hpp"

#include <functional>
#include <limits>
#include <sstream>
#include <utility>
#include <vector>

namespace gcesaro {

// ---------------------------------------------------------------------------
// Continuous operator P

/// P[f](x) = (1/x) * integral_0^x f, with P[f](0) = f(0).
inline PiecewiseFn apply_P(const PiecewiseFn& f) {
  return PiecewiseFn::generic_pieces(
      [f](std::int64_t n, long double a) {
        const long double x = static_cast<long double>(n) + a;
        if (x == 0) return f.interval_eval(0, 0.0L);
        return f.cumulative(x) / x;
      },
      "P[" + f.label() + "]");
}

/// a*f + b*g, piecewise.
inline PiecewiseFn combine(Scalar a, const PiecewiseFn& f, Scalar b, const PiecewiseFn& g) {
  const WideScalar wa = widen(a), wb = widen(b);
  if (f.kind() == PiecewiseFn::Kind::step && g.kind() == PiecewiseFn::Kind::step) {
    return PiecewiseFn::step(
        [=](std::int64_t n) { return wa * f.interval_eval(n, 0.0L) + wb * g.interval_eval(n, 0.0L); });
  }
  return PiecewiseFn::generic_pieces(
      [=](std::int64_t n, long double al) { return wa * f.interval_eval(n, al) + wb * g.interval_eval(n, al); });
}

/// Closed form of P on a generalised eigenfunction:
/// P[x^rho (ln x)^m] = x^rho * sum_j c_j (ln x)^j, returned as (c_j, j).
inline std::vector<std::pair<Scalar, int>> P_on_term(Scalar rho, int m) {
  if (rho.real() <= -1.0) throw domain_error("P_on_term: requires Re(rho) > -1");
  if (m < 0) throw domain_error("P_on_term: log power must be >= 0");
  std::vector<std::pair<Scalar, int>> out;
  const Scalar rp1 = rho + 1.0;
  double mfact = 1.0;
  for (int i = 2; i <= m; ++i) mfact *= i;
  double jfact = 1.0;
  for (int j = 0; j <= m; ++j) {
    if (j > 0) jfact *= j;
    const double sign = ((m - j) % 2) ? -1.0 : 1.0;
    out.emplace_back(sign * mfact / jfact / std::pow(rp1, m - j + 1), j);
  }
  return out;
}

namespace detail {

template <class T>
struct is_std_complex : std::false_type {};
template <class R>
struct is_std_complex<std::complex<R>> : std::true_type {};

template <class T>
inline constexpr bool compensable = std::is_floating_point_v<T> || is_std_complex<T>::value;

template <class T>
class Accumulator {
 public:
  void add(const T& x) {
    if constexpr (compensable<T>) {
      c_.add(x);
    } else {
      s_ += x;
    }
  }
  T value() const {
    if constexpr (compensable<T>) {
      return c_.value();
    } else {
      return s_;
    }
  }

 private:
  std::conditional_t<compensable<T>, CompensatedSum<T>, int> c_{};
  std::conditional_t<compensable<T>, int, T> s_{};
};

}  // namespace detail

/// Fast evaluator for P^m[f] at many points up to a horizon, in working real
/// type R with values V. The function is given by its pieces on [n, n+1).
///
/// Uses P^m f(x) = (1/(x (m-1)!)) integral_0^x f(t) ln^{m-1}(x/t) dt and
/// precomputed prefix moments M_j(n) = integral_0^n f(t) u(t)^j dt with
/// u = ln(t/H). Centering the logarithm at the horizon H keeps the binomial
/// recombination well conditioned on [H/10, H].
template <class R, class V>
class BasicAveragingEngine {
 public:
  using Piece = std::function<V(std::int64_t, R)>;

  BasicAveragingEngine(Piece piece, std::int64_t horizon, int max_power)
      : piece_(std::move(piece)), horizon_(horizon), jmax_(std::max(max_power, 1)), max_power_(max_power) {
    using std::log;
    if (horizon < 1) throw domain_error("AveragingEngine: horizon must be >= 1");
    if (max_power < 0) throw domain_error("AveragingEngine: max_power must be >= 0");
    log_h_ = log(R(horizon_));
    moments_.resize(static_cast<std::size_t>((horizon_ + 1) * jmax_));
    std::vector<detail::Accumulator<V>> acc(static_cast<std::size_t>(jmax_));
    auto head = moments_to_zero(R(1));
    for (int j = 0; j < jmax_; ++j) {
      acc[j].add(head[j]);
      moments_[static_cast<std::size_t>(jmax_ + j)] = acc[j].value();
    }
    for (std::int64_t n = 1; n < horizon_; ++n) {
      auto part = moments_on(n, R(1));
      for (int j = 0; j < jmax_; ++j) {
        acc[j].add(part[j]);
        moments_[static_cast<std::size_t>((n + 1) * jmax_ + j)] = acc[j].value();
      }
    }
  }

  std::int64_t horizon() const { return horizon_; }
  int max_power() const { return max_power_; }

  /// P^0 f(x), ..., P^mmax f(x) at x in (0, horizon].
  std::vector<V> powers(R x, int mmax) const {
    using std::log;
    using std::pow;
    if (mmax > max_power_) throw order_exceeded("AveragingEngine: power exceeds configured maximum");
    if (!(x > 0) || x > R(horizon_)) throw domain_error("AveragingEngine: x outside (0, horizon]");
    const auto k = static_cast<std::int64_t>(floor_of(x));
    const R alpha = x - R(k);
    std::vector<V> out(static_cast<std::size_t>(mmax + 1));
    out[0] = piece_(k, alpha);
    if (mmax == 0) return out;
    std::vector<V> mom(static_cast<std::size_t>(jmax_));
    if (k == 0) {
      mom = moments_to_zero(x);
    } else {
      auto part = alpha > 0 ? moments_on(k, alpha) : std::vector<V>(static_cast<std::size_t>(jmax_));
      for (int j = 0; j < jmax_; ++j) mom[j] = moments_[static_cast<std::size_t>(k * jmax_ + j)] + part[j];
    }
    const R a = log(x) - log_h_;
    R fact = 1;
    for (int m = 1; m <= mmax; ++m) {
      if (m > 1) fact *= (m - 1);
      // sum_j C(m-1,j) a^{m-1-j} (-1)^j M_j
      detail::Accumulator<V> s;
      for (int j = 0; j < m; ++j) {
        R c = R(binomial_double(m - 1, j)) * pow(a, m - 1 - j);
        if (j % 2) c = -c;
        s.add(V(mom[j] * c));
      }
      out[static_cast<std::size_t>(m)] = s.value() / (x * fact);
    }
    return out;
  }

  V power(int m, R x) const { return powers(x, m)[static_cast<std::size_t>(m)]; }

  /// sum_m coeffs[m] P^m f(x).
  V poly(const std::vector<V>& coeffs, R x) const {
    if (coeffs.empty()) return {};
    auto p = powers(x, static_cast<int>(coeffs.size()) - 1);
    detail::Accumulator<V> s;
    for (std::size_t m = 0; m < coeffs.size(); ++m) s.add(V(coeffs[m] * p[m]));
    return s.value();
  }

 private:
  static R floor_of(const R& x) {
    using std::floor;
    return floor(x);
  }

  static const quad::GaussRule<12, R>& rule12() {
    static const quad::GaussRule<12, R> r;
    return r;
  }
  static const quad::GaussRule<24, R>& rule24() {
    static const quad::GaussRule<24, R> r;
    return r;
  }

  // Moments of f over [n, n+alpha].
  std::vector<V> moments_on(std::int64_t n, R alpha) const {
    using std::log;
    const auto& r = rule12();
    std::vector<V> out(static_cast<std::size_t>(jmax_));
    for (int i = 0; i < 12; ++i) {
      const R al = alpha * r.nodes[i];
      const R u = log(R(n) + al) - log_h_;
      V v = piece_(n, al) * (r.weights[i] * alpha);
      for (int j = 0; j < jmax_; ++j) {
        out[j] += v;
        v *= u;
      }
    }
    return out;
  }

  // Moments of f over (0, b], b <= 1, by geometric subdivision toward 0.
  std::vector<V> moments_to_zero(R b) const {
    using std::abs;
    using std::log;
    const auto& r = rule24();
    const R quiet_tol = std::max(R(1e-22L), std::numeric_limits<R>::epsilon());
    std::vector<detail::Accumulator<V>> acc(static_cast<std::size_t>(jmax_));
    R hi = b;
    int quiet = 0;
    for (int level = 0; level < 4000; ++level) {
      const R lo = hi / 2;
      bool small = true;
      std::vector<V> part(static_cast<std::size_t>(jmax_));
      for (int i = 0; i < 24; ++i) {
        const R t = lo + (hi - lo) * r.nodes[i];
        const R u = log(t) - log_h_;
        V v = piece_(0, t) * (r.weights[i] * (hi - lo));
        for (int j = 0; j < jmax_; ++j) {
          part[j] += v;
          v *= u;
        }
      }
      for (int j = 0; j < jmax_; ++j) {
        acc[j].add(part[j]);
        if (abs(part[j]) > quiet_tol * (1 + abs(acc[j].value()))) small = false;
      }
      quiet = small ? quiet + 1 : 0;
      if (quiet >= 6) break;
      hi = lo;
    }
    std::vector<V> out(static_cast<std::size_t>(jmax_));
    for (int j = 0; j < jmax_; ++j) out[j] = acc[j].value();
    return out;
  }

  Piece piece_;
  std::int64_t horizon_;
  int jmax_;
  int max_power_;
  R log_h_ = 0;
  std::vector<V> moments_;
};

/// Averaging engine over a piecewise function in long double precision.
class AveragingEngine : public BasicAveragingEngine<long double, WideScalar> {
 public:
  AveragingEngine(PiecewiseFn f, std::int64_t horizon, int max_power)
      : BasicAveragingEngine([f](std::int64_t n, long double a) { return f.interval_eval(n, a); }, horizon,
                             max_power),
        f_(std::move(f)) {}

  const PiecewiseFn& fn() const { return f_; }

 private:
  PiecewiseFn f_;
};

// ---------------------------------------------------------------------------
// Discrete operators

/// (P_D a)_n = (1/n) sum_{j<=n} a_j. Element i of the vector holds index i+1.
template <class T>
std::vector<T> apply_P_D(const std::vector<T>& a) {
  std::vector<T> out(a.size());
  detail::Accumulator<T> acc;
  for (std::size_t i = 0; i < a.size(); ++i) {
    acc.add(a[i]);
    out[i] = acc.value() / T(static_cast<std::int64_t>(i + 1));
  }
  return out;
}

/// (P_D^{-1} t)_k = k t_k - (k-1) t_{k-1}, with t_0 = 0.
template <class T>
std::vector<T> apply_P_D_inverse(const std::vector<T>& t) {
  std::vector<T> out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto k = static_cast<std::int64_t>(i + 1);
    out[i] = T(k) * t[i];
    if (i > 0) out[i] -= T(k - 1) * t[i - 1];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Regular polynomials

namespace detail {

template <class T>
double distance_to_one(const T& z) {
  if constexpr (std::is_same_v<T, Rational>) {
    return to_double(boost::multiprecision::abs(z - Rational(1)));
  } else {
    using std::abs;
    return static_cast<double>(abs(z - T(1)));
  }
}

template <class T>
std::string format_coeff(const T& z) {
  std::ostringstream os;
  os.precision(12);
  if constexpr (is_std_complex<T>::value) {
    if (z.imag() == 0) {
      os << z.real();
    } else {
      os << "(" << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i)";
    }
  } else {
    os << z;
  }
  return os.str();
}

}  // namespace detail

/// q(P) = normalization * prod (P - lambda)^mult * P^pure_power, q(1) = 1.
template <class T = Scalar>
struct RegularPolynomial {
  std::vector<std::pair<T, int>> factors;
  int pure_power = 0;
  T normalization = T(1);

  int degree() const {
    int d = pure_power;
    for (const auto& f : factors) d += f.second;
    return d;
  }

  /// q evaluated at a scalar argument.
  T eval(const T& z) const {
    T r = normalization;
    for (const auto& [lam, mult] : factors) {
      for (int i = 0; i < mult; ++i) r *= (z - lam);
    }
    for (int i = 0; i < pure_power; ++i) r *= z;
    return r;
  }

  /// Coefficients c_0..c_degree with q(P) = sum c_m P^m.
  std::vector<T> monomials() const {
    std::vector<T> c{normalization};
    auto mul_linear = [&](const T& lam) {  // c *= (P - lam)
      std::vector<T> n(c.size() + 1, T(0));
      for (std::size_t i = 0; i < c.size(); ++i) {
        n[i + 1] += c[i];
        n[i] -= lam * c[i];
      }
      c = std::move(n);
    };
    for (const auto& [lam, mult] : factors) {
      for (int i = 0; i < mult; ++i) mul_linear(lam);
    }
    for (int i = 0; i < pure_power; ++i) mul_linear(T(0));
    return c;
  }

  std::string describe() const {
    std::string s = detail::format_coeff(normalization);
    for (const auto& [lam, mult] : factors) {
      s += "*(P-" + detail::format_coeff(lam) + ")";
      if (mult > 1) s += "^" + std::to_string(mult);
    }
    if (pure_power == 1) s += "*P";
    if (pure_power > 1) s += "*P^" + std::to_string(pure_power);
    return s;
  }
};

/// Builds q(P) from (lambda, multiplicity) factors; throws lambda_is_one when
/// a factor sits within eps of 1.
template <class T = Scalar>
RegularPolynomial<T> build_regular_polynomial(std::vector<std::pair<T, int>> factors, int pure_power,
                                              double eps = kLambdaEps) {
  if (pure_power < 0) throw domain_error("build_regular_polynomial: pure power must be >= 0");
  RegularPolynomial<T> q;
  q.pure_power = pure_power;
  T norm = T(1);
  for (auto& [lam, mult] : factors) {
    if (mult < 1) throw domain_error("build_regular_polynomial: multiplicity must be >= 1");
    if (detail::distance_to_one(lam) <= eps) {
      throw lambda_is_one("build_regular_polynomial: factor with lambda = 1 is not regular");
    }
    for (int i = 0; i < mult; ++i) norm /= (T(1) - lam);
  }
  q.factors = std::move(factors);
  q.normalization = norm;
  return q;
}

/// Applies q(P) factor by factor through apply_P. Exact in structure but each
/// application nests another quadrature layer; use AveragingEngine for large x.
inline PiecewiseFn apply_regular_polynomial(const RegularPolynomial<Scalar>& q, const PiecewiseFn& f) {
  PiecewiseFn g = f;
  for (const auto& [lam, mult] : q.factors) {
    for (int i = 0; i < mult; ++i) g = combine(1.0, apply_P(g), -lam, g);
  }
  for (int i = 0; i < q.pure_power; ++i) g = apply_P(g);
  if (q.normalization != Scalar(1.0, 0.0)) g = combine(q.normalization, g, 0.0, g);
  return g;
}

/// q(P)[f](x) through the monomial expansion on the averaging engine.
inline WideScalar apply_regular_polynomial(const RegularPolynomial<Scalar>& q, const AveragingEngine& eng,
                                           long double x) {
  std::vector<WideScalar> c;
  for (const auto& m : q.monomials()) c.push_back(widen(m));
  return eng.poly(c, x);
}

/// Largest discrepancy between sequential factor application and the
/// monomial expansion at the given points (commuting-operator sanity check).
inline double regular_polynomial_order_gap(const RegularPolynomial<Scalar>& q, const PiecewiseFn& f,
                                           const std::vector<long double>& xs) {
  long double xmax = 1;
  for (auto x : xs) xmax = std::max(xmax, x);
  AveragingEngine eng(f, static_cast<std::int64_t>(std::ceil(xmax)), q.degree());
  const PiecewiseFn seq = apply_regular_polynomial(q, f);
  double gap = 0;
  for (auto x : xs) {
    const WideScalar a = widen(seq.value(x));
    const WideScalar b = apply_regular_polynomial(q, eng, x);
    gap = std::max(gap, static_cast<double>(std::abs(a - b) / std::max<long double>(1, std::abs(b))));
  }
  return gap;
}

/// q(P_D)[a], applying factors sequentially.
template <class T, class L>
std::vector<T> apply_regular_polynomial_D(const RegularPolynomial<L>& q, std::vector<T> a) {
  for (const auto& [lam, mult] : q.factors) {
    for (int i = 0; i < mult; ++i) {
      auto p = apply_P_D(a);
      for (std::size_t k = 0; k < a.size(); ++k) p[k] -= T(lam) * a[k];
      a = std::move(p);
    }
  }
  for (int i = 0; i < q.pure_power; ++i) a = apply_P_D(a);
  for (auto& v : a) v *= T(q.normalization);
  return a;
}

// ---------------------------------------------------------------------------
// Measure-adapted averaging P_mu

/// Weight mu >= 0 with mass function F_mu(X) = integral_0^X mu.
struct MeasureScheme {
  std::function<long double(long double)> mu;
  /// Closed form of F_mu when known; otherwise computed by quadrature.
  std::function<long double(long double)> F_mu;
  std::string label;
  bool uniform = false;

  long double F(long double X) const {
    if (F_mu) return F_mu(X);
    if (!mass_) {
      auto m = mu;
      mass_ = std::make_shared<PiecewiseFn>(PiecewiseFn::generic([m](long double t) {
        const long double v = m(t);
        if (v < 0) throw domain_error("MeasureScheme: mu must be nonnegative");
        return WideScalar(v, 0);
      }));
    }
    return mass_->cumulative(X).real();
  }

  static MeasureScheme lebesgue() {
    return {[](long double) { return 1.0L; }, [](long double X) { return X; }, "uniform", true};
  }

  /// mu(t) = t^p, p > -1.
  static MeasureScheme power(long double p) {
    if (p <= -1) throw domain_error("MeasureScheme::power: requires p > -1");
    return {[p](long double t) { return std::pow(t, p); },
            [p](long double X) { return std::pow(X, p + 1) / (p + 1); }, "t^" + std::to_string(double(p)),
            p == 0};
  }

  /// Lazily built quadrature cache for F_mu (internal).
  mutable std::shared_ptr<PiecewiseFn> mass_{};
};

/// P_mu[f](X) = (1/F_mu(X)) integral_0^X f mu. The uniform scheme delegates to P.
inline PiecewiseFn apply_P_mu(const PiecewiseFn& f, const MeasureScheme& scheme) {
  if (scheme.uniform) return apply_P(f);
  auto mu = scheme.mu;
  const PiecewiseFn weighted = PiecewiseFn::generic_pieces([f, mu](std::int64_t n, long double a) {
    const long double v = mu(static_cast<long double>(n) + a);
    if (v < 0) throw domain_error("apply_P_mu: mu must be nonnegative");
    return f.interval_eval(n, a) * v;
  });
  return PiecewiseFn::generic_pieces(
      [f, weighted, scheme](std::int64_t n, long double a) {
        const long double x = static_cast<long double>(n) + a;
        if (x == 0) return f.interval_eval(0, 0.0L);
        const long double mass = scheme.F(x);
        if (mass == 0) throw vanishing_mass("apply_P_mu: F_mu(X) = 0 at X = " + std::to_string(double(x)));
        return weighted.cumulative(x) / mass;
      },
      "P_mu[" + f.label() + "]");
}

}  // namespace gcesaro
