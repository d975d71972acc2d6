#pragma once

// Analytic continuation of zeta and eta by generalised Cesaro limits, the pole
// at s = 1, the discrete-framework extension with its anomalies at s in Z<=0
// and their correction, Faulhaber polynomials and the zeta-as-integral
// identity for non-positive integers.
//
// Precision policy: the p-sum of n^{-s} grows like x^{1-Re s}, and every path
// extracts an O(1) constant from it. Where long double would lose more than
// about 1e-9 to that cancellation the work is done in binary128 instead.

#include "asymptotics.hpp"
#include "climits.hpp"
#include "highprec.hpp"
#include "operators.hpp"
#include "seqfun.hpp"
#include "tail_fit.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

namespace gcesaro {

enum class ZetaPath { classical_sum, continuous_cesaro, discrete_cesaro, discrete_corrected, integral_rep };

inline std::string to_string(ZetaPath p) {
  switch (p) {
    case ZetaPath::classical_sum:
      return "classical-sum";
    case ZetaPath::continuous_cesaro:
      return "continuous-cesaro";
    case ZetaPath::discrete_cesaro:
      return "discrete-cesaro";
    case ZetaPath::discrete_corrected:
      return "discrete-corrected";
    case ZetaPath::integral_rep:
      return "integral-rep";
  }
  return "unknown";
}

/// Agreement required between the constant-extraction and averaging paths.
inline constexpr double kZetaCrossCheckTol = 1e-6;

struct ZetaEvaluation {
  Scalar s;
  LimitValue value{Scalar{}};
  ZetaPath path = ZetaPath::continuous_cesaro;
  std::optional<RegularPolynomial<Scalar>> q_used;
  /// The constant of the p-sum expansion (equal to zeta(s) off the pole).
  Scalar C_constant{};
  bool anomaly = false;
  /// Divergent p-sum terms (Re >= 0) that the Cesaro machinery removes.
  std::vector<ExpansionTerm> removed_terms;
  /// Value of the second, averaging-based path when one was run.
  std::optional<Scalar> cross_check;
  double cross_check_gap = 0;
  std::int64_t horizon = 0;
};

// ---------------------------------------------------------------------------
// Faulhaber polynomials and the integral representation

struct FaulhaberPoly {
  int m = 0;
  /// coefficients[i] multiplies k^i, i = 0..m+1.
  std::vector<Rational> coefficients;

  Rational operator()(const Rational& k) const {
    Rational v = 0;
    for (std::size_t i = coefficients.size(); i-- > 0;) v = v * k + coefficients[i];
    return v;
  }
};

/// p_m(k) = sum_{j=1}^k j^m = (1/(m+1)) sum_{j=0}^m C(m+1,j) B_j^+ k^{m+1-j},
/// with B_1^+ = +1/2, i.e. B_j^+ = (-1)^j B_j.
inline FaulhaberPoly faulhaber(int m) {
  if (m < 0 || m > 40) throw domain_error("faulhaber: requires 0 <= m <= 40");
  FaulhaberPoly p;
  p.m = m;
  p.coefficients.assign(static_cast<std::size_t>(m + 2), Rational(0));
  for (int j = 0; j <= m; ++j) {
    Rational b = bernoulli(j);
    if (j % 2) b = -b;
    p.coefficients[static_cast<std::size_t>(m + 1 - j)] = binomial_rational(m + 1, j) * b / Rational(m + 1);
  }
  return p;
}

/// zeta(s0) = integral_{-1}^{0} p_{-s0}(k) dk for s0 in Z<=0, exactly.
inline Rational zeta_integral_rep(int s0) {
  if (s0 > 0) throw domain_error("zeta_integral_rep: requires s0 <= 0");
  const auto p = faulhaber(-s0);
  Rational v = 0;
  for (std::size_t i = 0; i < p.coefficients.size(); ++i) {
    const Rational term = p.coefficients[i] / Rational(static_cast<long>(i) + 1);
    v += (i % 2) ? -term : term;
  }
  return v;
}

// ---------------------------------------------------------------------------
// Path (a): the constant of the truncated Euler-Maclaurin expansion

namespace detail {

struct EmConstant {
  Scalar value;
  double error_estimate = 0;
  int order = 0;
};

/// C = sum_{n<=K} n^{-s} - (K^{1-s}/(1-s) + K^{-s}/2 + sum_r (-1)^{r-1} B_r/r! s(s+1)...(s+r-2) K^{-s-r+1}),
/// with the series cut at its smallest term.
template <class V>
V em_constant_at(const V& s, std::int64_t K, int* order_used = nullptr) {
  using R = real_of<V>;
  using std::log;
  const V gamma = V(1) - s;
  V psum = 0;
  for (std::int64_t n = 1; n <= K; ++n) psum += exp_value(V(-s * log(R(n))));
  const R lk = log(R(K));
  const V k_pow = exp_value(V(-s * lk));  // K^{-s}
  V c = psum - V(k_pow * R(K)) / gamma - V(k_pow / R(2));
  const R tiny = R(1e-32L) * (1 + abs_value(psum));
  V rising = 1;  // s(s+1)...(s+r-2)
  R prev = abs_value(k_pow);
  int order = 1;
  for (int r = 2; r <= 60; ++r) {
    rising *= V(s + R(r - 2));
    const Rational b = bernoulli(r);
    if (b == 0) continue;
    const R coeff = rational_to<R>(b);
    R fact = 1;
    for (int i = 2; i <= r; ++i) fact *= i;
    const V term = V(rising * (((r % 2) ? coeff : -coeff) / fact)) * exp_value(V(-s * lk - R(r - 1) * lk));
    const R mag = abs_value(term);
    if (mag > prev && r > 4) break;  // asymptotic series turned divergent
    c -= term;
    order = r;
    prev = mag;
    if (mag <= tiny) break;
  }
  if (order_used) *order_used = order;
  return c;
}

template <class V>
EmConstant em_constant(Scalar s) {
  const auto K = static_cast<std::int64_t>(std::max(32.0, std::ceil(2 * std::abs(s)) + 16));
  int order = 0;
  const V sv = from_scalar<V>(s);
  const Scalar c1 = to_scalar_value(em_constant_at(sv, K, &order));
  const Scalar c2 = to_scalar_value(em_constant_at(sv, K + K / 2));
  return {c1, std::abs(c1 - c2), order};
}

inline EmConstant em_constant(Scalar s) {
  return s.imag() == 0 ? em_constant<Quad>(s) : em_constant<QuadComplex>(s);
}

// ---------------------------------------------------------------------------
// Path (b): lim P^r [sum_{j<=x} j^{-s} - x^{1-s}/(1-s)](x)

struct AveragedLimit {
  Scalar value;
  TailFit fit;
  int pure_power = 0;
  std::int64_t horizon = 0;
};

/// Pieces of f(x) = psum(x) - x^gamma/gamma on [n, n+1), gamma = 1 - s:
/// f(n + a) = E(n) - n^gamma expm1(gamma log1p(a/n))/gamma with
/// E(n) = psum(n) - n^gamma/gamma built by a cancellation-free recurrence.
template <class V>
typename BasicAveragingEngine<real_of<V>, V>::Piece eq13_pieces(Scalar s, std::int64_t H) {
  using R = real_of<V>;
  using std::log;
  using std::log1p;
  const V sv = from_scalar<V>(s);
  const V gamma = V(1) - sv;
  if (s.imag() == 0 && s.real() <= 0 && s.real() == std::round(s.real()) && s.real() > -40) {
    // Integer gamma: the pieces are polynomials in a and need no transcendentals.
    const int g = 1 - static_cast<int>(s.real());
    std::vector<R> b(static_cast<std::size_t>(g + 1));
    for (int i = 1; i <= g; ++i) b[i] = R(binomial_double(g, i)) / R(g);
    auto E = std::make_shared<std::vector<V>>(static_cast<std::size_t>(H + 2));
    R psum = 0;
    for (std::int64_t n = 1; n <= H + 1; ++n) {
      R p = 1;
      for (int i = 0; i < g - 1; ++i) p *= R(n);
      psum += p;
      (*E)[static_cast<std::size_t>(n)] = V(psum - p * R(n) / R(g));
    }
    return [b, g, E](std::int64_t n, R a) -> V {
      // sum_{i=1}^{g} b_i n^{g-i} a^i by Horner in a/n, times n^g
      R acc = 0;
      const R t = n == 0 ? a : a / R(n);
      for (int i = g; i >= 1; --i) acc = (acc + b[i]) * t;
      R ng = 1;
      if (n > 0) {
        for (int i = 0; i < g; ++i) ng *= R(n);
      } else {
        acc = b[g];
        for (int i = 0; i < g; ++i) acc *= a;
        ng = 1;
      }
      return (n == 0 ? V(0) : (*E)[static_cast<std::size_t>(n)]) - V(acc * ng);
    };
  }
  auto pw = std::make_shared<std::vector<V>>(static_cast<std::size_t>(H + 2));  // n^gamma
  auto E = std::make_shared<std::vector<V>>(static_cast<std::size_t>(H + 2));
  (*pw)[1] = 1;
  (*E)[1] = V(1) - V(1) / gamma;
  for (std::int64_t n = 2; n <= H + 1; ++n) {
    const R ln = log(R(n));
    const V p = exp_value(V(gamma * ln));
    (*pw)[n] = p;
    // n^gamma - (n-1)^gamma = -n^gamma expm1(gamma log1p(-1/n))
    const V step = V(-p * expm1_value(V(gamma * R(log1p(R(-1) / R(n)))))) / gamma;
    (*E)[n] = (*E)[n - 1] + V(p / R(n)) - step;
  }
  return [gamma, pw, E](std::int64_t n, R a) -> V {
    if (n == 0) {
      if (!(a > 0)) return V(0);
      return V(-exp_value(V(gamma * R(log(a))))) / gamma;
    }
    const auto i = static_cast<std::size_t>(n);
    return (*E)[i] - V((*pw)[i] * expm1_value(V(gamma * R(log1p(a / R(n)))))) / gamma;
  };
}

template <class V>
AveragedLimit eq13_limit(Scalar s, std::int64_t H, int r0, const LimitConfig& cfg) {
  using R = real_of<V>;
  // Up to two guard averagings beyond the strip count.
  const int extra = std::min(2, cfg.max_pure_power);
  BasicAveragingEngine<R, V> eng(eq13_pieces<V>(s, H), H, r0 + extra);
  auto opt = fit_options(cfg, ladder_decays({1.0 - s}));
  double last_var = 0;
  for (int r = r0; r <= r0 + extra; ++r) {
    // Each averaging of an x^{-1} tail adds one log power.
    opt.log_powers = std::max(2, r);
    const auto fit = tail_fit([&](long double x) { return to_wide(eng.power(r, R(x))); }, H, opt);
    last_var = fit.variation;
    if (tail_converged(fit, cfg.tail_tolerance)) return {narrow(fit.limit), fit, r, H};
  }
  throw not_convergent("zeta: averaged p-sum did not converge (tail variation " + std::to_string(last_var) + ")");
}

/// Number of averagings for the strip of s: floor(Re(-s)) + 1, constant on a
/// snap-radius neighbourhood of the strip edges.
inline int zeta_pure_power(Scalar s) {
  const double re = -s.real();
  const double n = std::round(re);
  const double base = std::abs(re - n) <= kSnapRadius ? n : std::floor(re);
  return std::max(0, static_cast<int>(base) + 1);
}

/// Horizon and precision for path (b): long double while the cancellation
/// loss 1e-19 H^{-Re s} stays harmless, binary128 on a shorter horizon below.
inline AveragedLimit zeta_averaged(Scalar s, const LimitConfig& cfg) {
  const int r0 = zeta_pure_power(s);
  if (-s.real() <= 1.25) {
    return s.imag() == 0 ? eq13_limit<long double>(s, cfg.horizon, r0, cfg)
                         : eq13_limit<WideScalar>(s, cfg.horizon, r0, cfg);
  }
  // binary128 keeps ~34 digits; spend at most 24 of them on the growth.
  const double cap = std::pow(10.0, 24.0 / (1.0 - s.real()));
  const std::int64_t H = std::min<std::int64_t>(cfg.horizon, static_cast<std::int64_t>(std::clamp(cap, 1000.0, 8000.0)));
  return s.imag() == 0 ? eq13_limit<Quad>(s, H, r0, cfg) : eq13_limit<QuadComplex>(s, H, r0, cfg);
}

/// Divergent terms (Re >= 0, constant excluded) of the p-sum expansion at s.
inline std::vector<ExpansionTerm> zeta_divergent_terms(Scalar s) {
  return zeta_psum_expansion(s, zeta_minimal_order(s)).terms_at_or_above(0.0);
}

}  // namespace detail

/// Registers the Euler-Maclaurin expansion of the p-sum of n^{-s} on `t`, so
/// that cesaro_sum takes the generalised route. At s = 1 the expansion is the
/// bare ln x and the sum is a pole.
inline SeriesTerms with_psum_expansion(SeriesTerms t, Scalar s) {
  AsymptoticExpansion e;
  if (snap_integer(s - 1.0) == 0) {
    e.var = Variable::x;
    e.terms.push_back({1.0, 0.0, 1, Variable::x});
  } else {
    e = zeta_psum_expansion(s, zeta_minimal_order(s));
  }
  t.expansion = std::make_shared<const AsymptoticExpansion>(std::move(e));
  return t;
}

/// zeta(s) by analytic continuation. Re(s) > 1: Euler-Maclaurin accelerated
/// direct summation. Otherwise the constant of the truncated p-sum expansion
/// (path a) is cross-checked against lim P^r[psum(x) - x^{1-s}/(1-s)] with
/// r = floor(Re(-s)) + 1 (path b); disagreement beyond kZetaCrossCheckTol
/// throws cross_check_mismatch. s = 1 yields a PoleSignal.
inline ZetaEvaluation zeta(Scalar s, const LimitConfig& cfg = {}) {
  cfg.validate();
  if (!is_finite(s)) throw domain_error("zeta: non-finite argument");
  ZetaEvaluation out;
  out.s = s;
  if (snap_integer(s - 1.0) == 0) {
    out.value = PoleSignal{"zeta: simple pole at s = 1 (pure log divergence of the harmonic p-sum)", 0.0, 1};
    out.path = ZetaPath::continuous_cesaro;
    out.removed_terms = {{1.0, 0.0, 1, Variable::x}};
    return out;
  }
  const auto a = detail::em_constant(s);
  out.C_constant = a.value;
  if (s.real() > 1) {
    out.value = a.value;
    out.path = ZetaPath::classical_sum;
    return out;
  }
  out.path = ZetaPath::continuous_cesaro;
  out.removed_terms = detail::zeta_divergent_terms(s);
  const auto b = detail::zeta_averaged(s, cfg);
  out.cross_check = b.value;
  out.cross_check_gap = std::abs(b.value - a.value);
  out.horizon = b.horizon;
  out.q_used = build_regular_polynomial<Scalar>({}, b.pure_power);
  if (out.cross_check_gap > kZetaCrossCheckTol) {
    std::ostringstream os;
    os << "zeta(" << s << "): constant extraction " << a.value << " vs averaged limit " << b.value;
    throw cross_check_mismatch(os.str());
  }
  out.value = a.value;
  return out;
}

/// Residue at s = 1 as -lim (P - 1)[psum of 1/j](x), computed on the numeric
/// harmonic p-sum function.
inline Scalar zeta_residue_at_1(const LimitConfig& cfg = {}) {
  cfg.validate();
  const PiecewiseFn h = psum_function(series::n_pow_minus_s(1.0));
  AveragingEngine eng(h, cfg.horizon, 1);
  const std::vector<WideScalar> c{1.0L, -1.0L};  // -(P - 1) = 1 - P
  const auto fit = tail_fit([&](long double x) { return eng.poly(c, x); }, cfg.horizon, detail::fit_options(cfg, {}));
  if (!tail_converged(fit, cfg.tail_tolerance)) {
    throw not_convergent("zeta_residue_at_1: tail variation " + std::to_string(fit.variation));
  }
  return narrow(fit.limit);
}

namespace detail {

/// Alternating p-sum A(n) = sum_{j<=n} (-1)^{j-1} j^{-s} as pieces of a step function.
template <class V>
typename BasicAveragingEngine<real_of<V>, V>::Piece alt_psum_pieces(Scalar s, std::int64_t H) {
  using R = real_of<V>;
  using std::log;
  const V sv = from_scalar<V>(s);
  auto A = std::make_shared<std::vector<V>>(static_cast<std::size_t>(H + 2));
  V acc = 0;
  for (std::int64_t n = 1; n <= H + 1; ++n) {
    const V t = exp_value(V(-sv * R(log(R(n)))));
    acc += (n % 2) ? t : V(-t);
    (*A)[static_cast<std::size_t>(n)] = acc;
  }
  return [A](std::int64_t n, R) -> V { return (*A)[static_cast<std::size_t>(n)]; };
}

template <class V>
AveragedLimit eta_limit(Scalar s, std::int64_t H, int r0, const LimitConfig& cfg) {
  using R = real_of<V>;
  BasicAveragingEngine<R, V> eng(alt_psum_pieces<V>(s, H), H, r0 + cfg.max_pure_power);
  auto opt = fit_options(cfg, ladder_decays({-s}));
  double last_var = 0;
  for (int r = r0; r <= r0 + cfg.max_pure_power; ++r) {
    opt.log_powers = std::max(2, r);
    const auto fit = tail_fit([&](long double x) { return to_wide(eng.power(r, R(x))); }, H, opt);
    last_var = fit.variation;
    if (tail_converged(fit, cfg.tail_tolerance)) return {narrow(fit.limit), fit, r, H};
  }
  throw not_convergent("eta: averaged alternating p-sum did not converge (tail variation " +
                       std::to_string(last_var) + ")");
}

}  // namespace detail

/// Dirichlet eta as the strong Cesaro limit of the alternating p-sum, with
/// r = max(0, floor(1 - Re s)) averagings plus escalation.
inline Scalar eta(Scalar s, const LimitConfig& cfg = {}) {
  cfg.validate();
  if (!is_finite(s)) throw domain_error("eta: non-finite argument");
  const int r0 = std::max(0, static_cast<int>(std::floor(1.0 - s.real() + kSnapRadius)));
  if (-s.real() <= 1.25) {
    return (s.imag() == 0 ? detail::eta_limit<long double>(s, cfg.horizon, r0, cfg)
                          : detail::eta_limit<WideScalar>(s, cfg.horizon, r0, cfg))
        .value;
  }
  const double cap = std::pow(10.0, 24.0 / (1.0 - s.real()));
  const std::int64_t H = std::min<std::int64_t>(cfg.horizon, static_cast<std::int64_t>(std::clamp(cap, 1000.0, 8000.0)));
  return (s.imag() == 0 ? detail::eta_limit<Quad>(s, H, r0, cfg) : detail::eta_limit<QuadComplex>(s, H, r0, cfg)).value;
}

// ---------------------------------------------------------------------------
// Discrete framework

namespace detail {

/// Terms of the p-sum expansion, as discrete power content for
/// cesaro_limit_discrete: k^{1-s}/(1-s) + k^{-s}/2 + sum_{t>=2} B_t/t!
/// (-s)(-s-1)...(-s-t+2) k^{1-s-t}, built in V so that the exponents and
/// weights carry the working precision of the driver.
template <class V>
std::vector<BasicEigenComponent<V>> zeta_discrete_decomposition(Scalar s) {
  using R = real_of<V>;
  const int order = static_cast<int>(std::floor(2.0 - s.real())) + 5;
  const V sv = from_scalar<V>(s);
  std::vector<BasicEigenComponent<V>> d;
  d.push_back({V(1) / (V(1) - sv), V(1) - sv});
  d.push_back({V(R(1) / R(2)), -sv});
  V rising = V(1);  // (-s)(-s-1)...(-s-t+2)
  R fact = 1;
  for (int t = 2; t <= order; ++t) {
    rising *= -sv - V(t - 2);
    fact *= t;
    const Rational b = bernoulli(t);
    if (b == 0) continue;
    d.push_back({V(rational_to<R>(b) / fact) * rising, V(1) - sv - V(t)});
  }
  return d;
}

template <class V>
CesaroResult zeta_discrete_limit(Scalar s, const LimitConfig& cfg) {
  using R = real_of<V>;
  using std::log;
  const V sv = from_scalar<V>(s);
  // Compensated running sum: plain accumulation loses about n eps |psum|,
  // which at H = 1e5 and growth n^{1.7} is already 1e-6 in long double.
  std::vector<V> psum(static_cast<std::size_t>(cfg.horizon) + 1);
  V acc = 0, comp = 0;
  for (std::int64_t n = 1; n <= cfg.horizon; ++n) {
    const V y = exp_value(V(-sv * R(log(R(n))))) - comp;
    const V t = acc + y;
    comp = (t - acc) - y;
    acc = t;
    psum[static_cast<std::size_t>(n)] = acc;
  }
  return discrete_limit<V>([&](std::int64_t n) { return psum[static_cast<std::size_t>(n)]; },
                           zeta_discrete_decomposition<V>(s), cfg);
}

}  // namespace detail

/// zeta by the discrete Cesaro framework: the p-sum sequence is rewritten in
/// asymptotic eigensequences of P_D and the discrete annihilator applied. At
/// s in Z<=0 the conversion leaves a constant eigensequence (eigenvalue 1)
/// and the result is the anomalous value 1, flagged.
inline ZetaEvaluation zeta_discrete_ext(Scalar s, const LimitConfig& cfg = {}) {
  cfg.validate();
  if (!is_finite(s)) throw domain_error("zeta_discrete_ext: non-finite argument");
  ZetaEvaluation out;
  out.s = s;
  out.path = ZetaPath::discrete_cesaro;
  if (snap_integer(s - 1.0) == 0) {
    out.value = PoleSignal{"zeta_discrete_ext: simple pole at s = 1", 0.0, 1};
    return out;
  }
  if (auto n = snap_integer(s); n && *n <= 0) {
    out.anomaly = true;
    s = Scalar(static_cast<double>(*n), 0.0);
  }
  out.C_constant = detail::em_constant(s).value;
  LimitConfig c = cfg;
  const double growth = 1.0 - s.real();
  CesaroResult res;
  if (growth * std::log10(static_cast<double>(cfg.horizon)) <= 9.0) {
    res = s.imag() == 0 ? detail::zeta_discrete_limit<long double>(s, c)
                        : detail::zeta_discrete_limit<WideScalar>(s, c);
  } else {
    // Quad rounding grows like 1e-34 H^{1-Re s}, far below the fit error; the
    // cap is a cost bound (complex128 transcendentals are slow).
    c.horizon = std::min<std::int64_t>(cfg.horizon, 8000);
    res = s.imag() == 0 ? detail::zeta_discrete_limit<Quad>(s, c)
                        : detail::zeta_discrete_limit<QuadComplex>(s, c);
  }
  out.value = res.limit;
  out.q_used = res.q;
  out.removed_terms = res.removed_terms;
  out.horizon = res.diag.horizon;
  return out;
}

// ---------------------------------------------------------------------------
// Corrected values at the anomalies

/// Pieces of the L'Hopital evaluation at s0 = -m. With the p-sum terms indexed
/// t = 0..a, a = m + 1, exponent 1 - s - t and eigenvalue 1/(2 - s - t),
///   q(P_D; s) = prod_t ((2 - s - t) P_D - 1) / prod_t (1 - s - t),
/// whose t = a factor in the denominator is s0 - s. Writing the numerator over
/// the remaining denominators as F(s), zeta(s0) = -lim_k d/ds F(s)[s_k(s)] at
/// s0, which splits into three brackets:
///   derivative_term   B A[d/ds s_k]          (B = ((2-s-a)P_D - 1)/D, A = prod_{t<a} A_t)
///   b_prime_term      B' A[s_k]
///   factor_term       B sum_u (-P_D) prod_{t != u} A_t [s_k]
/// The last two act on the Faulhaber polynomial and are polynomials in k.
struct ZetaCorrection {
  int s0 = 0;
  Scalar value{0, 0};
  std::vector<Rational> q_derivative;  ///< B A as coefficients of P_D^j
  std::vector<Rational> q_sequence;    ///< B' A + B sum_u (-P_D) prod A_t
  double C_prime = 0;
  /// |exact d/ds p-sum - symbolic derivative| at K = 1000 and K = 2000.
  double derivative_gap_1000 = 0;
  double derivative_gap_2000 = 0;
  std::int64_t horizon = 0;
  double tail_variation = 0;
};

namespace detail {

using RationalPoly = std::vector<Rational>;  // coefficient j multiplies P_D^j

inline RationalPoly poly_mul(const RationalPoly& x, const RationalPoly& y) {
  RationalPoly r(x.size() + y.size() - 1, Rational(0));
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < y.size(); ++j) r[i + j] += x[i] * y[j];
  }
  return r;
}

inline RationalPoly poly_add(RationalPoly x, const RationalPoly& y) {
  if (y.size() > x.size()) x.resize(y.size(), Rational(0));
  for (std::size_t i = 0; i < y.size(); ++i) x[i] += y[i];
  return x;
}

inline RationalPoly poly_scale(RationalPoly x, const Rational& c) {
  for (auto& v : x) v *= c;
  return x;
}

/// sum_j c_j P_D^j [a].
inline std::vector<Quad> apply_rational_poly_D(const RationalPoly& c, const std::vector<Quad>& a) {
  std::vector<Quad> out(a.size(), Quad(0)), power = a;
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (j > 0) power = apply_P_D(power);
    const Quad cj = rational_to<Quad>(c[j]);
    if (cj == 0) continue;
    for (std::size_t i = 0; i < a.size(); ++i) out[i] += cj * power[i];
  }
  return out;
}

/// Coefficient c_t(s) of k^{1-s-t} in the p-sum expansion and its s-derivative,
/// at integer s. t = 0: 1/(1-s); t = 1: 1/2; t = r >= 2:
/// (-1)^{r-1} B_r / r! * s(s+1)...(s+r-2).
inline std::pair<Rational, Rational> psum_coefficient(int t, int s) {
  if (t == 0) {
    const Rational d = Rational(1 - s);
    return {1 / d, 1 / (d * d)};
  }
  if (t == 1) return {Rational(1, 2), Rational(0)};
  const int r = t;
  const Rational b = bernoulli(r);
  if (b == 0) return {Rational(0), Rational(0)};
  Rational fact = 1;
  for (int i = 2; i <= r; ++i) fact *= i;
  const Rational lead = ((r - 1) % 2 ? -b : b) / fact;
  Rational g = 1, dg = 0;  // product and its derivative, built factor by factor
  for (int i = 0; i <= r - 2; ++i) {
    dg = dg * Rational(s + i) + g;
    g *= Rational(s + i);
  }
  return {lead * g, lead * dg};
}

/// dC_{zeta,s}/ds by a Richardson-refined central difference, step 1e-4.
inline double em_constant_derivative(double s0) {
  const auto D = [&](double h) {
    return (em_constant(Scalar(s0 + h, 0)).value.real() - em_constant(Scalar(s0 - h, 0)).value.real()) / (2 * h);
  };
  const double h = 1e-4;
  return (4 * D(h / 2) - D(h)) / 3;
}

}  // namespace detail

/// Corrected zeta(s0) at an anomaly s0 in Z<=0 of the discrete extension,
/// with the intermediate pieces. At s0 = 0 the brackets are checked against
/// their closed forms 5/4 - k/4 + 1/2, -1 and (k - 1)/4.
inline ZetaCorrection zeta_discrete_correction(int s0, const LimitConfig& cfg = {}) {
  using detail::RationalPoly;
  cfg.validate();
  if (s0 > 0) throw domain_error("zeta_discrete_corrected: requires s0 <= 0");
  if (s0 < -20) throw domain_error("zeta_discrete_corrected: requires s0 >= -20");
  const int m = -s0, a = m + 1;
  ZetaCorrection out;
  out.s0 = s0;

  // Operator polynomials with exact rational coefficients.
  Rational D = 1, S = 0;
  std::vector<RationalPoly> A;
  for (int t = 0; t < a; ++t) {
    D *= Rational(1 + m - t);
    S += Rational(1, 1 + m - t);
    A.push_back({Rational(-1), Rational(2 + m - t)});
  }
  RationalPoly prodA{Rational(1)};
  for (const auto& f : A) prodA = detail::poly_mul(prodA, f);
  const RationalPoly B = detail::poly_scale({Rational(-1), Rational(1)}, 1 / D);
  const RationalPoly Bp = detail::poly_scale({-S, S - 1}, 1 / D);  // (-P + (P - 1) S) / D
  RationalPoly sumA{Rational(0)};
  for (int u = 0; u < a; ++u) {
    RationalPoly p{Rational(0), Rational(-1)};
    for (int t = 0; t < a; ++t) {
      if (t != u) p = detail::poly_mul(p, A[static_cast<std::size_t>(t)]);
    }
    sumA = detail::poly_add(sumA, p);
  }
  out.q_derivative = detail::poly_mul(B, prodA);
  out.q_sequence = detail::poly_add(detail::poly_mul(Bp, prodA), detail::poly_mul(B, sumA));

  // d/ds of the truncated expansion at s0: sum_t (c_t' - c_t ln k) k^{1-s0-t} + C'.
  // Terms past t = a vanish at s0 but their derivatives do not; they are o(1)
  // and kept down to k^{-4} so the check against the exact derivative is sharp.
  std::vector<std::tuple<Quad, Quad, int>> terms;
  for (int t = 0; t <= a + 4; ++t) {
    const auto [c, dc] = detail::psum_coefficient(t, s0);
    if (c != 0 || dc != 0) terms.emplace_back(detail::rational_to<Quad>(c), detail::rational_to<Quad>(dc), 1 + m - t);
  }
  out.C_prime = detail::em_constant_derivative(s0);
  const Quad Cp = out.C_prime;
  const auto symbolic = [&](std::int64_t k) {
    const Quad ln = log(Quad(k));
    Quad v = Cp;
    for (const auto& [c, dc, e] : terms) v += (dc - c * ln) * pow(Quad(k), e);
    return v;
  };

  // The symbolic derivative must match -sum_{j<=K} j^m ln j up to o(1).
  {
    Quad exact = 0;
    for (std::int64_t j = 1; j <= 2000; ++j) {
      exact -= pow(Quad(j), m) * log(Quad(j));
      if (j == 1000) out.derivative_gap_1000 = static_cast<double>(abs(exact - symbolic(j)));
    }
    out.derivative_gap_2000 = static_cast<double>(abs(exact - symbolic(2000)));
    const double g1 = out.derivative_gap_1000, g2 = out.derivative_gap_2000;
    if (!(g2 <= 1e-8 || g2 < 0.75 * g1)) {
      throw missing_derivative_term("zeta_discrete_corrected: symbolic derivative misses a term (gap " +
                                    std::to_string(g1) + " at K = 1000, " + std::to_string(g2) + " at K = 2000)");
    }
  }

  // The brackets carry ln^j(k)/k tails up to j = deg q; larger horizons do
  // not help the long double fit, and quad work is costly.
  const std::int64_t H = std::min<std::int64_t>(cfg.horizon, 4000);
  out.horizon = H;
  const auto p = faulhaber(m);
  std::vector<Quad> da(static_cast<std::size_t>(H)), seq(static_cast<std::size_t>(H));
  for (std::int64_t k = 1; k <= H; ++k) {
    da[static_cast<std::size_t>(k - 1)] = symbolic(k);
    seq[static_cast<std::size_t>(k - 1)] = detail::rational_to<Quad>(p(Rational(k)));
  }
  const auto T1 = detail::apply_rational_poly_D(out.q_derivative, da);
  const auto T23 = detail::apply_rational_poly_D(out.q_sequence, seq);

  if (s0 == 0) {
    // Closed forms of the brackets: -(2P_D - 1)[k] = -1 and -P_D (P_D - 1)[k] = (k - 1)/4.
    const auto T2 = detail::apply_rational_poly_D(detail::poly_mul(Bp, prodA), seq);
    const auto T3 = detail::apply_rational_poly_D(detail::poly_mul(B, sumA), seq);
    for (std::int64_t k = 1; k <= H; ++k) {
      const auto i = static_cast<std::size_t>(k - 1);
      if (abs(T2[i] + 1) > 1e-25 || abs(T3[i] - Quad(k - 1) / 4) > 1e-25 * k) {
        throw error("zeta_discrete_corrected: bracket identities at s0 = 0 fail at k = " + std::to_string(k));
      }
    }
    const auto fit = tail_fit(
        [&](long double x) {
          const auto k = static_cast<std::int64_t>(x);
          return WideScalar(static_cast<long double>(T1[static_cast<std::size_t>(k - 1)] + Quad(k) / 4), 0);
        },
        H, TailFitOptions{{}, 2, true});
    if (std::abs(fit.limit - WideScalar(1.75L, 0)) > 1e-6) {
      throw missing_derivative_term("zeta_discrete_corrected: derivative bracket at s0 = 0 does not tend to 5/4 - k/4 + 1/2");
    }
  }

  // Each P_D raises the log power of the 1/k tail by one.
  TailFitOptions opt{{}, static_cast<int>(out.q_derivative.size()) - 1, true};
  const auto fit = tail_fit(
      [&](long double x) {
        const auto i = static_cast<std::size_t>(x) - 1;
        return WideScalar(static_cast<long double>(T1[i] + T23[i]), 0);
      },
      H, opt);
  out.tail_variation = fit.variation;
  if (!tail_converged(fit, cfg.tail_tolerance)) {
    throw not_convergent("zeta_discrete_corrected: bracket sum does not settle (tail variation " +
                         std::to_string(fit.variation) + ")");
  }
  out.value = -narrow(fit.limit);
  return out;
}

inline Scalar zeta_discrete_corrected(int s0, const LimitConfig& cfg = {}) {
  return zeta_discrete_correction(s0, cfg).value;
}

}  // namespace gcesaro
