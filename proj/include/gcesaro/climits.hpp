#pragma once

// Limit drivers: classical, strong (pure powers of P), generalised (regular
// polynomial q(P) plus escalation), closed-form limit tables, and the
// discrete driver over asymptotic eigensequences of P_D.

#include "asymptotics.hpp"
#include "core.hpp"
#include "operators.hpp"
#include "highprec.hpp"
#include "seqfun.hpp"
#include "tail_fit.hpp"

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace gcesaro {

struct LimitConfig {
  std::int64_t horizon = 100000;
  double tail_tolerance = 1e-8;
  int max_pure_power = 6;
  /// Euler-Maclaurin order; 0 selects the minimal order plus one guard term.
  int expansion_order = 0;
  bool exact_mode = false;
  double eps_lambda = kLambdaEps;
  /// Extra decay exponents offered to the tail fit.
  std::vector<Scalar> decay_exponents;

  void validate() const {
    if (horizon < 100) throw domain_error("LimitConfig: horizon must be >= 100");
    if (!(tail_tolerance > 0)) throw domain_error("LimitConfig: tail tolerance must be > 0");
    if (max_pure_power < 0) throw domain_error("LimitConfig: max_pure_power must be >= 0");
    if (!(eps_lambda > 0)) throw domain_error("LimitConfig: eps_lambda must be > 0");
  }
};

enum class Mechanism { classical, strong, generalised, pole };

struct LimitDiagnostics {
  std::int64_t horizon = 0;
  double tail_variation = 0;
  int escalations = 0;
  int samples = 0;
};

struct CesaroResult {
  LimitValue limit{Scalar{}};
  Mechanism mechanism = Mechanism::classical;
  /// r of strong(r), or the pure-power escalation applied after q(P).
  int pure_power = 0;
  std::optional<RegularPolynomial<Scalar>> q;
  std::vector<ExpansionTerm> removed_terms;
  /// Exact limit when exact mode proved it.
  std::optional<Rational> exact_value;
  /// Constant content created by converting powers into asymptotic
  /// eigensequences (discrete driver only).
  std::optional<Scalar> eigen_constant;
  std::string object_label;
  const void* object_id = nullptr;
  LimitDiagnostics diag;

  std::string mechanism_text() const {
    switch (mechanism) {
      case Mechanism::classical:
        return "classical";
      case Mechanism::strong:
        return "strong(" + std::to_string(pure_power) + ")";
      case Mechanism::generalised:
        return "generalised(" + (q ? q->describe() : std::string("?")) + ")";
      case Mechanism::pole:
        return "pole";
    }
    return "?";
  }
};

namespace detail {

inline TailFitOptions fit_options(const LimitConfig& cfg, std::vector<Scalar> extra, bool discrete = false) {
  TailFitOptions o;
  o.decay_exponents = std::move(extra);
  for (auto e : cfg.decay_exponents) o.decay_exponents.push_back(e);
  o.discrete = discrete;
  return o;
}

/// Decay exponents rho - j (j >= 0) with -2.5 < Re < 0, from a set of exponents.
inline std::vector<Scalar> ladder_decays(const std::vector<Scalar>& exps) {
  std::vector<Scalar> out;
  for (auto rho : exps) {
    for (int j = 0; j < 8; ++j) {
      const Scalar e = rho - double(j);
      if (e.real() < 0 && e.real() > -2.5 && !snap_integer(e, 1e-9)) {
        bool dup = false;
        for (auto f : out) dup = dup || std::abs(f - e) < 1e-9;
        if (!dup) out.push_back(e);
      }
    }
  }
  return out;
}

inline WideScalar eval_at(const PiecewiseFn& f, long double x) {
  const auto g = decompose(x);
  return f.interval_eval(g.k, g.alpha);
}

/// Exact P^r[f] on the last decade for r in {0, 1}; engaged only when every
/// sampled integer point gives the same rational.
inline std::optional<Rational> exact_strong_value(const PiecewiseFn& f, int r, std::int64_t H) {
  if (!f.has_exact() || f.kind() != PiecewiseFn::Kind::step || r > 1) return std::nullopt;
  const auto ks = tail_indices(std::max<std::int64_t>(1, H / 10), H - 6, 24, 64);
  std::optional<Rational> v;
  for (auto k : ks) {
    for (int j = 0; j < (r == 0 ? 6 : 1); ++j) {
      const Rational val = r == 0 ? f.exact_piece(k + j) : f.cumulative_exact(k) / Rational(k);
      if (!v) {
        v = val;
      } else if (*v != val) {
        return std::nullopt;
      }
    }
  }
  return v;
}

}  // namespace detail

/// Classical limit by tail extrapolation over [H/10, H]; throws
/// not_convergent when the tail does not settle.
inline Scalar classical_limit(const PiecewiseFn& f, const LimitConfig& cfg = {}) {
  cfg.validate();
  const auto fit = tail_fit([&](long double x) { return detail::eval_at(f, x); }, cfg.horizon,
                            detail::fit_options(cfg, {}));
  if (!tail_converged(fit, cfg.tail_tolerance)) {
    throw not_convergent("classical_limit: tail variation " + std::to_string(fit.variation));
  }
  return narrow(fit.limit);
}

/// Applies P^r for r = 0..max_pure_power and returns at the first classical
/// convergence.
inline CesaroResult strong_cesaro_limit(const PiecewiseFn& f, const LimitConfig& cfg = {},
                                        std::vector<Scalar> decays = {}) {
  cfg.validate();
  AveragingEngine eng(f, cfg.horizon, cfg.max_pure_power);
  const auto opt = detail::fit_options(cfg, std::move(decays));
  double last_var = 0;
  for (int r = 0; r <= cfg.max_pure_power; ++r) {
    const auto fit = tail_fit([&](long double x) { return eng.power(r, x); }, cfg.horizon, opt);
    last_var = fit.variation;
    if (!tail_converged(fit, cfg.tail_tolerance)) continue;
    CesaroResult res;
    res.limit = narrow(fit.limit);
    res.mechanism = r == 0 ? Mechanism::classical : Mechanism::strong;
    res.pure_power = r;
    res.object_label = f.label();
    res.object_id = f.id();
    res.diag = {cfg.horizon, fit.variation, r, fit.samples};
    if (cfg.exact_mode) {
      if (auto ex = detail::exact_strong_value(f, r, cfg.horizon)) {
        if (std::abs(to_scalar(*ex) - narrow(fit.limit)) <= 10 * cfg.tail_tolerance) {
          res.exact_value = ex;
          res.limit = to_scalar(*ex);
        }
      }
    }
    return res;
  }
  throw not_convergent("strong_cesaro_limit: no convergence up to P^" + std::to_string(cfg.max_pure_power) +
                       " (tail variation " + std::to_string(last_var) + ")");
}

/// Generalised Cesaro limit: the divergent terms of the x-expansion are
/// removed (subtracted, then annihilated by q(P)), and the pure power is
/// escalated until the tail converges.
inline CesaroResult cesaro_limit(const PiecewiseFn& f, std::optional<AsymptoticExpansion> expansion,
                                 const LimitConfig& cfg = {}) {
  cfg.validate();
  if (!expansion) {
    if (!f.expansion()) throw domain_error("cesaro_limit: no expansion supplied or registered");
    expansion = *f.expansion();
  }
  AsymptoticExpansion ex = expansion->var == Variable::x ? *expansion : invert_to_x_expansion(*expansion);
  ex.normalize();

  CesaroResult res;
  res.object_label = f.label();
  res.object_id = f.id();
  std::vector<ExpansionTerm> divergent = ex.terms_at_or_above(0.0);
  auto syn = synthesize_annihilator(ex, 0, cfg.eps_lambda);
  if (auto* pole = std::get_if<PoleSignal>(&syn)) {
    res.limit = *pole;
    res.mechanism = Mechanism::pole;
    res.removed_terms = divergent;
    res.diag.horizon = cfg.horizon;
    return res;
  }
  const auto q = std::get<RegularPolynomial<Scalar>>(syn);

  PiecewiseFn h = f;
  if (!divergent.empty()) {
    h = PiecewiseFn::generic_pieces(
        [f, divergent](std::int64_t n, long double a) {
          const long double x = static_cast<long double>(n) + a;
          WideScalar v = f.interval_eval(n, a);
          for (const auto& t : divergent) v -= t.eval(x);
          return v;
        },
        "residual[" + f.label() + "]");
  }
  std::vector<Scalar> exps;
  for (const auto& t : ex.terms) exps.push_back(t.exponent);
  const auto opt = detail::fit_options(cfg, detail::ladder_decays(exps));

  AveragingEngine eng(h, cfg.horizon, q.degree() + cfg.max_pure_power);
  double last_var = 0;
  for (int esc = 0; esc <= cfg.max_pure_power; ++esc) {
    auto qe = q;
    qe.pure_power += esc;
    std::vector<WideScalar> c;
    for (const auto& m : qe.monomials()) c.push_back(widen(m));
    const auto fit = tail_fit([&](long double x) { return eng.poly(c, x); }, cfg.horizon, opt);
    last_var = fit.variation;
    if (!tail_converged(fit, cfg.tail_tolerance)) continue;
    res.limit = narrow(fit.limit);
    res.pure_power = esc;
    res.diag = {cfg.horizon, fit.variation, esc, fit.samples};
    if (!divergent.empty()) {
      res.mechanism = Mechanism::generalised;
      res.q = qe;
      res.removed_terms = divergent;
    } else {
      res.mechanism = esc == 0 ? Mechanism::classical : Mechanism::strong;
    }
    return res;
  }
  throw not_convergent("cesaro_limit: no convergence after escalating to P^" +
                       std::to_string(cfg.max_pure_power) + " (tail variation " + std::to_string(last_var) + ")");
}

/// Cesaro sum of a series: the limit of its p-sum function, generalised when
/// an expansion is supplied or registered, strong otherwise.
inline CesaroResult cesaro_sum(const SeriesTerms& terms, std::optional<AsymptoticExpansion> expansion = std::nullopt,
                               const LimitConfig& cfg = {}) {
  const PiecewiseFn s = psum_function(terms);
  if (expansion || terms.expansion) return cesaro_limit(s, expansion, cfg);
  return strong_cesaro_limit(s, cfg);
}

// ---------------------------------------------------------------------------
// Closed-form limit tables

/// Generalised limit of k^delta alpha^r: (-1)^n/(n+r+1) at delta = n in Z>=0, else 0.
inline Rational clim_k_alpha_exact(int n, int r) {
  if (n < 0 || r < 0) throw domain_error("clim_k_alpha_exact: n and r must be >= 0");
  return Rational(n % 2 ? -1 : 1) / Rational(n + r + 1);
}

inline Scalar clim_k_alpha(Scalar delta, int r) {
  if (delta.real() < 0) throw domain_error("clim_k_alpha: requires Re(delta) >= 0");
  if (r < 0) throw domain_error("clim_k_alpha: r must be >= 0");
  if (auto n = snap_integer(delta); n && *n >= 0) return to_scalar(clim_k_alpha_exact(static_cast<int>(*n), r));
  return 0.0;
}

/// Generalised limit of x^delta alpha^r: 1/(r+1) at delta = 0, else 0.
inline Rational clim_x_alpha_exact(int delta, int r) {
  if (delta < 0 || r < 0) throw domain_error("clim_x_alpha_exact: arguments must be >= 0");
  return delta == 0 ? Rational(1) / Rational(r + 1) : Rational(0);
}

inline Scalar clim_x_alpha(Scalar delta, int r) {
  if (delta.real() < 0) throw domain_error("clim_x_alpha: requires Re(delta) >= 0");
  if (r < 0) throw domain_error("clim_x_alpha: r must be >= 0");
  return std::abs(delta) <= kSnapRadius ? Scalar(1.0 / (r + 1)) : Scalar(0.0);
}

/// Discrete generalised limit of {k^rho}: 1 on Z>=0 (snap radius), else 0.
inline Scalar cdlim_power(Scalar rho) {
  if (rho.real() < 0) throw domain_error("cdlim_power: requires Re(rho) >= 0");
  return snaps_to_nonneg_integer(rho) ? 1.0 : 0.0;
}

// ---------------------------------------------------------------------------
// Discrete driver

/// Asymptotic eigensequence of P_D for exponent rho (eigenvalue 1/(rho+1)):
/// e_n = sum_{k<=K} C(rho,k) B_k^{(rho+1)} n^{rho-k}.
inline WideScalar asymptotic_eigensequence_term(const std::vector<WideScalar>& coeffs, Scalar rho, std::int64_t n) {
  const WideScalar r = widen(rho);
  const long double ln = std::log(static_cast<long double>(n));
  CompensatedSum<WideScalar> s;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    s.add(coeffs[k] * std::exp((r - static_cast<long double>(k)) * ln));
  }
  return s.value();
}

enum class EigenKind { exact_binomial, generalised_harmonic, asymptotic_strip };

inline std::string to_string(EigenKind k) {
  switch (k) {
    case EigenKind::exact_binomial:
      return "exact-binomial";
    case EigenKind::generalised_harmonic:
      return "generalised-harmonic";
    case EigenKind::asymptotic_strip:
      return "asymptotic-strip";
  }
  return "?";
}

/// A sequence n = 1, 2, ... tied to the eigenvalue 1/(rho+1) of P_D.
struct DiscreteEigensequence {
  Scalar rho;
  EigenKind kind;
  Scalar eigenvalue;
  std::function<Scalar(std::int64_t)> value;
  /// Exact values, for the exact kinds.
  std::function<Rational(std::int64_t)> exact;
};

/// exact-binomial: C(n-1, m), an exact eigensequence of P_D with eigenvalue
/// 1/(m+1). generalised-harmonic: C(n-1, m) H_{n-m-1}, with
/// (P_D^{-1} - (m+1))^2 a = 0 exactly for n >= m+3. At n = m+2 it leaves the
/// value m+1: the identity is exact on bi-infinite sequences, and cutting the
/// index range at n = 1 leaves one boundary term, so (P_D - 1/(m+1))^2 a is
/// P_D^2 of that single spike rather than zero. asymptotic-strip: the
/// terms of sum_k C(rho,k) B_k^{(rho+1)} n^{rho-k} with Re(rho - k) >= 0,
/// which satisfy (P_D - 1/(rho+1)) e = o(1).
inline DiscreteEigensequence discrete_eigensequence(Scalar rho, EigenKind kind) {
  if (!is_finite(rho)) throw domain_error("discrete_eigensequence: non-finite rho");
  DiscreteEigensequence e{rho, kind, 1.0 / (rho + 1.0), {}, {}};
  if (kind == EigenKind::asymptotic_strip) {
    if (rho.real() < 0) throw domain_error("discrete_eigensequence: asymptotic-strip requires Re(rho) >= 0");
    const int K = static_cast<int>(std::floor(rho.real() + kExponentMerge));
    const auto c = eigensequence_coefficients(rho, K);
    e.value = [c, rho](std::int64_t n) { return narrow(asymptotic_eigensequence_term(c, rho, n)); };
    return e;
  }
  const auto m = snap_integer(rho);
  if (!m || *m < 0) throw non_integer_rho("discrete_eigensequence: exact kinds require rho in Z>=0");
  e.rho = double(*m);
  e.eigenvalue = 1.0 / double(*m + 1);
  const std::int64_t mm = *m;
  if (kind == EigenKind::exact_binomial) {
    e.exact = [mm](std::int64_t n) { return n - 1 < mm ? Rational(0) : binomial_rational(n - 1, mm); };
  } else {
    e.exact = [mm](std::int64_t n) {
      if (n - 1 < mm) return Rational(0);
      Rational h = 0;
      for (std::int64_t j = 1; j <= n - mm - 1; ++j) h += Rational(1, j);
      return binomial_rational(n - 1, mm) * h;
    };
  }
  auto ex = e.exact;
  e.value = [ex](std::int64_t n) { return Scalar(to_double(ex(n)), 0.0); };
  return e;
}

template <class T>
struct BasicEigenComponent {
  T coeff;
  T rho;
};
using EigenComponent = BasicEigenComponent<Scalar>;

/// Rewrites sum d_i k^{rho_i} (Re rho_i > -1) as sum d'_j e_{rho_j} + K0 + o(1),
/// where e_rho are asymptotic eigensequences. Returns the components and K0.
/// T is the value type of the coefficients and exponents; the discrete driver
/// runs this in its working precision because n^{rho} with rho rounded to
/// double is off by 1e-16 n^{rho} ln n, far above the limit tolerance.
template <class T>
std::pair<std::vector<BasicEigenComponent<T>>, T> to_eigensequences(std::vector<BasicEigenComponent<T>> terms) {
  using detail::to_scalar_value;
  std::vector<BasicEigenComponent<T>> out;
  T constant = T(0);
  std::erase_if(terms, [](const auto& t) { return to_scalar_value(t.rho).real() <= -1 + kExponentMerge; });
  int guard = 0;
  while (!terms.empty()) {
    if (++guard > 10000) throw non_triangular("to_eigensequences: conversion did not terminate");
    auto top = std::max_element(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
      return to_scalar_value(a.rho).real() < to_scalar_value(b.rho).real();
    });
    const BasicEigenComponent<T> t = *top;
    terms.erase(top);
    if (std::abs(detail::to_wide(t.coeff)) == 0) continue;
    const Scalar rho = to_scalar_value(t.rho);
    if (std::abs(rho) <= kSnapRadius) {
      constant += t.coeff;
      continue;
    }
    out.push_back(t);
    const int K = eigensequence_depth(rho);
    const auto c = eigensequence_coefficients(detail::to_wide(t.rho), K);
    for (int k = 1; k <= K; ++k) {
      T e = t.rho - T(k);
      const Scalar es = to_scalar_value(e);
      if (es.real() <= -1 + kExponentMerge) continue;
      if (auto n = snap_integer(es); n && *n == 0) e = T(0);
      const T add = -t.coeff * detail::from_wide<T>(c[static_cast<std::size_t>(k)]);
      if (std::abs(detail::to_wide(add)) == 0) continue;
      auto same = std::find_if(terms.begin(), terms.end(), [&](const auto& p) {
        return std::abs(to_scalar_value(p.rho) - to_scalar_value(e)) <= kExponentMerge;
      });
      if (same != terms.end()) {
        same->coeff += add;
      } else {
        terms.push_back({add, e});
      }
    }
  }
  return {out, constant};
}

namespace detail {

/// The discrete driver in value type V. The residual a_n - sum d_j e_j(n) and
/// the annihilator q(P_D) are both evaluated in V: a factor (P_D - lambda)
/// with lambda rounded to double leaves 1e-16 of every eigensequence it should
/// remove, which is fatal next to n^3 growth. The O(1) result is then rounded
/// to long double for the P_D escalation and the tail fit.
///
/// Components with Re rho <= -1 are classically null. They are subtracted as
/// plain powers and left out of q: q(P_D) would multiply k^rho by
/// q(1/(rho+1)), which is huge for rho near -1, and the result is nearly
/// collinear with the ln^j(k)/k tail the fit has to model. The first
/// kDiscreteWarmup residual terms are replaced by the next one; changing
/// finitely many terms leaves every C_D limit unchanged and keeps the poorly
/// approximated start of the sequence out of the P_D averages.
inline constexpr std::int64_t kDiscreteWarmup = 50;

template <class V>
CesaroResult discrete_limit(const std::function<V(std::int64_t)>& a,
                            const std::vector<BasicEigenComponent<V>>& decomposition, const LimitConfig& cfg) {
  using R = real_of<V>;
  using std::log;
  std::vector<BasicEigenComponent<V>> growing, null;
  for (const auto& d : decomposition) {
    (to_scalar_value(d.rho).real() > -1 + kExponentMerge ? growing : null).push_back(d);
  }
  const auto [eig, K0] = to_eigensequences(growing);
  const std::int64_t N = cfg.horizon;

  std::vector<std::vector<V>> coeffs;
  std::vector<V> rhos, weights;
  for (const auto& e : eig) {
    std::vector<V> c;
    for (const auto& w : eigensequence_coefficients(to_wide(e.rho), eigensequence_depth(to_scalar_value(e.rho)))) {
      c.push_back(from_wide<V>(w));
    }
    coeffs.push_back(std::move(c));
    rhos.push_back(e.rho);
    weights.push_back(e.coeff);
  }
  std::vector<V> resid(static_cast<std::size_t>(N));
  for (std::int64_t n = 1; n <= N; ++n) {
    const R ln = log(R(n));
    V v = a(n);
    for (std::size_t j = 0; j < eig.size(); ++j) {
      V e = 0;
      for (std::size_t k = 0; k < coeffs[j].size(); ++k) {
        e += coeffs[j][k] * exp_value(V((rhos[j] - R(static_cast<long>(k))) * ln));
      }
      v -= weights[j] * e;
    }
    for (const auto& t : null) v -= t.coeff * exp_value(V(t.rho * ln));
    resid[static_cast<std::size_t>(n - 1)] = v;
  }
  const auto warm = std::min<std::int64_t>(kDiscreteWarmup, N / 100);
  for (std::int64_t n = 1; n < warm; ++n) resid[static_cast<std::size_t>(n - 1)] = resid[static_cast<std::size_t>(warm - 1)];

  std::vector<std::pair<Scalar, int>> factors;
  RegularPolynomial<V> qv;
  for (std::size_t j = 0; j < eig.size(); ++j) {
    factors.emplace_back(1.0 / (to_scalar_value(eig[j].rho) + 1.0), 1);
    qv.factors.emplace_back(V(1) / (rhos[j] + V(1)), 1);
  }
  const auto q = build_regular_polynomial<Scalar>(factors, 0, cfg.eps_lambda);
  qv.normalization = from_scalar<V>(q.normalization);
  const auto hq = apply_regular_polynomial_D(qv, std::move(resid));
  std::vector<WideScalar> seq(hq.size());
  for (std::size_t i = 0; i < hq.size(); ++i) seq[i] = to_wide(hq[i]);

  std::vector<Scalar> exps;
  for (const auto& d : growing) exps.push_back(to_scalar_value(d.rho));
  auto opt = fit_options(cfg, ladder_decays(exps), true);
  double last_var = 0;
  for (int esc = 0; esc <= cfg.max_pure_power; ++esc) {
    if (esc > 0) seq = apply_P_D(seq);
    // Each factor of q(P_D) and each escalation maps ln^j(n)/n to
    // ln^{j+1}(n)/n, so the full model carries deg q + esc log powers. When
    // an exponent has Re exactly 0 those terms are essential (dropping them
    // biases the constant by O(1/H) with a clean residual); elsewhere their
    // amplitude is tiny and the extra columns can spoil the conditioning, so
    // the lean model (esc log powers) is the fallback.
    const auto sample = [&](long double x) { return seq[static_cast<std::size_t>(x) - 1]; };
    opt.log_powers = esc + static_cast<int>(eig.size());
    auto fit = tail_fit(sample, N, opt);
    if (!tail_converged(fit, cfg.tail_tolerance) && !eig.empty()) {
      opt.log_powers = esc;
      fit = tail_fit(sample, N, opt);
    }
    last_var = fit.variation;
    if (!tail_converged(fit, cfg.tail_tolerance)) continue;
    CesaroResult res;
    res.limit = narrow(fit.limit);
    res.pure_power = esc;
    res.eigen_constant = to_scalar_value(K0);
    res.diag = {N, fit.variation, esc, fit.samples};
    if (!eig.empty()) {
      res.mechanism = Mechanism::generalised;
      auto qe = q;
      qe.pure_power = esc;
      res.q = qe;
      for (const auto& e : eig) {
        res.removed_terms.push_back({to_scalar_value(e.coeff), to_scalar_value(e.rho), 0, Variable::k});
      }
    } else {
      res.mechanism = esc == 0 ? Mechanism::classical : Mechanism::strong;
    }
    return res;
  }
  throw not_convergent("cesaro_limit_discrete: no convergence after escalating to P_D^" +
                       std::to_string(cfg.max_pure_power) + " (tail variation " + std::to_string(last_var) + ")");
}

}  // namespace detail

/// Discrete generalised limit of a sequence a_1, a_2, ... whose power content
/// is sum d_i k^{rho_i} (+ constant + o(1)). The powers are
/// converted into asymptotic eigensequences and subtracted, the residual is
/// hit with the discrete annihilator q(P_D), and P_D powers are escalated.
/// Components with -1 < Re rho < 0 are classically null but are removed too,
/// which keeps q(P_D) analytic across a strip edge. Components with
/// Re rho <= -1 are optional and only subtracted.
inline CesaroResult cesaro_limit_discrete(const std::function<WideScalar(std::int64_t)>& a,
                                          const std::vector<EigenComponent>& decomposition,
                                          const LimitConfig& cfg = {}) {
  cfg.validate();
  std::vector<BasicEigenComponent<WideScalar>> wide;
  for (const auto& d : decomposition) wide.push_back({widen(d.coeff), widen(d.rho)});
  return detail::discrete_limit<WideScalar>(a, wide, cfg);
}

}  // namespace gcesaro
