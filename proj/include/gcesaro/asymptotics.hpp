#pragma once

// Bernoulli numbers, Euler-Maclaurin expansions of p-sums, the strong Cesaro
// expansion of x^gamma in powers of k, and annihilator synthesis.

#include "core.hpp"
#include "expansion.hpp"
#include "operators.hpp"

#include <functional>
#include <mutex>
#include <variant>
#include <vector>

namespace gcesaro {

inline constexpr int kBernoulliDefaultMax = 64;

/// Exact B_r with B_1 = -1/2, from sum_{j=0}^{r} C(r+1, j) B_j = 0.
inline Rational bernoulli(int r, int max_r = kBernoulliDefaultMax) {
  if (r < 0) throw domain_error("bernoulli: index must be >= 0");
  if (r > max_r) throw order_exceeded("bernoulli: index " + std::to_string(r) + " exceeds maximum " +
                                      std::to_string(max_r));
  static std::mutex mu;
  static std::vector<Rational> table{Rational(1)};
  std::lock_guard<std::mutex> lock(mu);
  while (static_cast<int>(table.size()) <= r) {
    const int n = static_cast<int>(table.size());
    Rational s = 0;
    for (int j = 0; j < n; ++j) s += binomial_rational(n + 1, j) * table[j];
    table.push_back(-s / Rational(n + 1));
  }
  return table[static_cast<std::size_t>(r)];
}

inline double bernoulli_double(int r) { return to_double(bernoulli(r)); }

inline double factorial_double(int n) {
  double r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

// ---------------------------------------------------------------------------
// Euler-Maclaurin

struct EulerMaclaurinValue {
  Scalar value;
  double last_term_magnitude = 0;
};

/// Truncated right-hand side of
///   sum_{n=1}^k f(n) ~ integral_0^k f + C_f + f(k)/2 + sum_{r=2}^{order} B_r/r! f^{(r-1)}(k)
/// without C_f. `derivatives[i]` is f^{(i+1)}; `antiderivative(k)` is the
/// integral from 0 to k.
inline EulerMaclaurinValue euler_maclaurin_psum(const std::function<Scalar(double)>& f,
                                                const std::vector<std::function<Scalar(double)>>& derivatives,
                                                const std::function<Scalar(double)>& antiderivative, double k,
                                                int order) {
  if (order > static_cast<int>(derivatives.size()) + 1) {
    throw order_exceeded("euler_maclaurin_psum: order needs more derivatives than supplied");
  }
  Scalar v = antiderivative(k) + 0.5 * f(k);
  double last = std::abs(0.5 * f(k));
  for (int r = 2; r <= order; ++r) {
    const double b = bernoulli_double(r);
    if (b == 0) continue;
    const Scalar t = b / factorial_double(r) * derivatives[static_cast<std::size_t>(r - 2)](k);
    v += t;
    last = std::abs(t);
  }
  return {v, last};
}

/// Smallest Euler-Maclaurin order for the zeta p-sum that keeps every
/// exponent with Re >= 0, plus one guard term.
inline int zeta_minimal_order(Scalar s) {
  const int r0 = static_cast<int>(std::floor(1.0 - s.real() + 1e-12));
  return std::max(r0, 1) + 1;
}

/// Asymptotic expansion in k of the p-sum of n^{-s}:
///   k^{1-s}/(1-s) + C + k^{-s}/2 + sum_{r=2}^{order} (-1)^{r-1} B_r/r! s(s+1)...(s+r-2) k^{-s-r+1}.
/// Exponent-0 terms fold into `constant`; the unknown C stays symbolic.
inline AsymptoticExpansion zeta_psum_expansion(Scalar s, int order) {
  if (snap_integer(s - 1.0) == 0) throw s_at_pole("zeta_psum_expansion: s = 1");
  AsymptoticExpansion e;
  e.var = Variable::k;
  e.has_unknown_constant = true;
  e.terms.push_back({1.0 / (1.0 - s), 1.0 - s, 0, Variable::k});
  e.terms.push_back({0.5, -s, 0, Variable::k});
  Scalar rising = 1.0;  // s(s+1)...(s+r-2)
  for (int r = 2; r <= order; ++r) {
    rising *= (s + double(r - 2));
    const double b = bernoulli_double(r);
    if (b == 0) continue;
    const double sign = (r % 2) ? 1.0 : -1.0;  // (-1)^{r-1}
    e.terms.push_back({sign * b / factorial_double(r) * rising, -s - double(r - 1), 0, Variable::k});
  }
  e.remainder_order = -s - double(order);
  e.normalize();
  return e;
}

/// Coefficients of the strong Cesaro expansion
///   x^gamma ~ sum_{r>=0} B_r^+/r! gamma(gamma-1)...(gamma-r+1) k^{gamma-r},
/// with B_1^+ = +1/2 and B_r^+ = B_r for r >= 2; r = 0..order-1.
inline std::vector<Scalar> x_power_coefficients(Scalar gamma, int order) {
  std::vector<Scalar> c;
  Scalar falling = 1.0;
  for (int r = 0; r < order; ++r) {
    if (r > 0) falling *= (gamma - double(r - 1));
    const double b = r == 1 ? 0.5 : bernoulli_double(r);
    c.push_back(b / factorial_double(r) * falling);
  }
  return c;
}

inline AsymptoticExpansion x_power_expansion(Scalar gamma, int order) {
  if (gamma.real() < 0) throw domain_error("x_power_expansion: requires Re(gamma) >= 0");
  if (order < 1) throw domain_error("x_power_expansion: order must be >= 1");
  AsymptoticExpansion e;
  e.var = Variable::k;
  const auto c = x_power_coefficients(gamma, order);
  for (int r = 0; r < order; ++r) e.terms.push_back({c[r], gamma - double(r), 0, Variable::k});
  e.remainder_order = gamma - double(order);
  e.normalize();
  return e;
}

/// Rewrites a k-expansion as an x-expansion whose difference is strongly
/// Cesaro null, by top-down substitution of k^gamma = x^gamma - (lower terms).
/// Terms with Re(exponent) < 0 are dropped (classically null).
inline AsymptoticExpansion invert_to_x_expansion(const AsymptoticExpansion& exp_k) {
  std::vector<ExpansionTerm> pending;
  for (const auto& t : exp_k.terms) {
    if (t.log_power != 0) throw non_triangular("invert_to_x_expansion: log terms have no power ladder");
    if (t.exponent.real() >= -kExponentMerge) pending.push_back(t);
  }
  AsymptoticExpansion out;
  out.var = Variable::x;
  out.constant = exp_k.constant;
  out.has_unknown_constant = exp_k.has_unknown_constant;
  out.remainder_order = 0.0;
  // Exact cancellations (e.g. the k^{-s}/2 term of the zeta p-sum) leave
  // roundoff-level coefficients; drop those relative to the input scale.
  double scale = 0;
  for (const auto& t : pending) scale = std::max(scale, std::abs(t.coeff));
  const double prune = 1e-13 * scale;
  int guard = 0;
  while (!pending.empty()) {
    if (++guard > 10000) throw non_triangular("invert_to_x_expansion: substitution did not terminate");
    auto top = std::max_element(pending.begin(), pending.end(), [](const auto& a, const auto& b) {
      return a.exponent.real() < b.exponent.real();
    });
    const ExpansionTerm t = *top;
    pending.erase(top);
    if (std::abs(t.coeff) <= prune) continue;
    if (std::abs(t.exponent) <= kExponentMerge) {
      out.constant += t.coeff;
      continue;
    }
    out.terms.push_back({t.coeff, t.exponent, 0, Variable::x});
    const int depth = static_cast<int>(std::floor(t.exponent.real() + kExponentMerge)) + 1;
    const auto c = x_power_coefficients(t.exponent, depth + 1);
    for (int r = 1; r <= depth; ++r) {
      const Scalar e = t.exponent - double(r);
      if (e.real() < -kExponentMerge || c[r] == Scalar(0.0)) continue;
      const Scalar add = -t.coeff * c[r];
      auto same = std::find_if(pending.begin(), pending.end(),
                               [&](const auto& p) { return std::abs(p.exponent - e) <= kExponentMerge; });
      if (same != pending.end()) {
        same->coeff += add;
      } else {
        pending.push_back({add, e, 0, Variable::k});
      }
    }
  }
  out.normalize();
  return out;
}

/// Annihilator for the divergent part of an x-expansion: a factor
/// lambda = 1/(rho+1) with multiplicity (max log power + 1) per exponent with
/// Re(rho) >= 0, times P^escalation_r. Eigenvalue-1 content yields a PoleSignal.
inline std::variant<RegularPolynomial<Scalar>, PoleSignal> synthesize_annihilator(const AsymptoticExpansion& exp_x,
                                                                                 int escalation_r,
                                                                                 double eps = kLambdaEps) {
  std::vector<std::pair<Scalar, int>> factors;
  std::vector<Scalar> exps;
  for (const auto& t : exp_x.terms) {
    if (t.exponent.real() < -kExponentMerge) continue;
    if (std::abs(t.exponent) <= kSnapRadius) {
      if (t.log_power >= 1) return PoleSignal{"pure log divergence (eigenvalue 1)", t.exponent, t.log_power};
      continue;
    }
    const Scalar lam = 1.0 / (t.exponent + 1.0);
    if (std::abs(lam - 1.0) <= eps) return PoleSignal{"factor with lambda near 1", t.exponent, t.log_power};
    auto it = std::find_if(exps.begin(), exps.end(),
                           [&](const Scalar& e) { return std::abs(e - t.exponent) <= kExponentMerge; });
    if (it == exps.end()) {
      exps.push_back(t.exponent);
      factors.emplace_back(lam, t.log_power + 1);
    } else {
      auto& f = factors[static_cast<std::size_t>(it - exps.begin())];
      f.second = std::max(f.second, t.log_power + 1);
    }
  }
  return build_regular_polynomial<Scalar>(std::move(factors), escalation_r, eps);
}

// ---------------------------------------------------------------------------
// Asymptotic eigensequences of P_D

namespace detail {

using Series = std::vector<WideScalar>;

inline Series series_log(const Series& a, int n) {  // a[0] = 1
  Series l(static_cast<std::size_t>(n), WideScalar(0));
  // l' = a'/a  =>  k l_k = k a_k - sum_{j=1}^{k-1} j l_j a_{k-j}
  for (int k = 1; k < n; ++k) {
    WideScalar s = WideScalar(static_cast<long double>(k)) * a[k];
    for (int j = 1; j < k; ++j) s -= WideScalar(static_cast<long double>(j)) * l[j] * a[k - j];
    l[k] = s / static_cast<long double>(k);
  }
  return l;
}

inline Series series_exp(const Series& l, int n) {  // l[0] = 0
  Series e(static_cast<std::size_t>(n), WideScalar(0));
  e[0] = 1;
  // e' = l' e  =>  k e_k = sum_{j=1}^{k} j l_j e_{k-j}
  for (int k = 1; k < n; ++k) {
    WideScalar s = 0;
    for (int j = 1; j <= k; ++j) s += static_cast<long double>(j) * l[j] * e[k - j];
    e[k] = s / static_cast<long double>(k);
  }
  return e;
}

}  // namespace detail

/// Norlund numbers B_k^{(sigma)}, k = 0..K: (t/(e^t-1))^sigma = sum B_k^{(sigma)} t^k/k!.
inline std::vector<WideScalar> norlund_numbers(WideScalar sigma, int K) {
  const int n = K + 1;
  detail::Series g(static_cast<std::size_t>(n));
  long double fact = 1;
  for (int j = 0; j < n; ++j) {
    if (j > 0) fact *= j;
    g[j] = static_cast<long double>(bernoulli_double(j)) / fact;
  }
  auto l = detail::series_log(g, n);
  for (auto& v : l) v *= sigma;
  auto e = detail::series_exp(l, n);
  std::vector<WideScalar> out(static_cast<std::size_t>(n));
  fact = 1;
  for (int k = 0; k < n; ++k) {
    if (k > 0) fact *= k;
    out[k] = e[k] * fact;
  }
  return out;
}

/// Coefficients c_0..c_K of the asymptotic eigensequence
///   e_n = sum_k c_k n^{rho-k},  c_k = C(rho, k) B_k^{(rho+1)},
/// the expansion of Gamma(n)/Gamma(n-rho) = rho! C(n-1, rho).
inline std::vector<WideScalar> eigensequence_coefficients(WideScalar r, int K) {
  auto b = norlund_numbers(r + 1.0L, K);
  std::vector<WideScalar> c(static_cast<std::size_t>(K + 1));
  WideScalar binom = 1;
  for (int k = 0; k <= K; ++k) {
    if (k > 0) binom *= (r - static_cast<long double>(k - 1)) / static_cast<long double>(k);
    c[k] = binom * b[k];
  }
  return c;
}

inline std::vector<WideScalar> eigensequence_coefficients(Scalar rho, int K) {
  return eigensequence_coefficients(widen(rho), K);
}

/// Number of correction terms used for the asymptotic eigensequence of
/// exponent rho: every term down to Re < 0, plus one guard term.
inline int eigensequence_depth(Scalar rho) {
  return static_cast<int>(std::floor(rho.real() + kExponentMerge)) + 1;
}

}  // namespace gcesaro
