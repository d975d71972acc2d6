#pragma once

// Generalised Cesàro integrals over (0, infinity) with divergences at 0, at
// infinity and at interior points z0.
//
// The domain is cut at the singular points and every piece is split at an
// anchor, so each singular point contributes one or two endpoint sides. Each
// side has its own cutoff variable X (distance 1/X at a finite point, x = X at
// infinity). The cutoff integral of a side behaves like
// const + sum c X^rho ln^m X + o(1); the divergent terms are annihilated by the
// side's own regular polynomial in P and the constant is the finite part. A
// term with rho = 0, m >= 1 has eigenvalue 1 and blocks the limit.
//
// With a supplied integrand expansion f ~ sum c t^rho (t = 1/u at distance u
// from a finite point, t = x at infinity) the constant is exact: f is
// integrated classically up to a split distance where the expansion is
// accurate, and each expansion term adds its closed-form finite part. Without
// one, the cutoff integral is sampled over three decades of X and fitted.

#include "asymptotics.hpp"
#include "core.hpp"
#include "expansion.hpp"
#include "operators.hpp"
#include "quadrature.hpp"
#include "tail_fit.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace gcesaro {

using Integrand = std::function<Scalar(double)>;

enum class PointKind { at_zero, at_infinity, interior };

inline std::string to_string(PointKind k) {
  switch (k) {
    case PointKind::at_zero: return "zero";
    case PointKind::at_infinity: return "infinity";
    case PointKind::interior: return "interior";
  }
  return "?";
}

struct SingularPoint {
  PointKind kind = PointKind::at_infinity;
  double z0 = 0;
  /// Integrand expansion in the local variable t, f ~ sum c t^rho with log
  /// power 0. For an interior point this is the right side, x = z0 + 1/t.
  std::optional<AsymptoticExpansion> expansion;
  /// Interior points only: left side, x = z0 - 1/t. Defaults to `expansion`.
  std::optional<AsymptoticExpansion> left_expansion;
  /// Used when no expansion is given: exponents of the cutoff integral's
  /// expansion in X for the numeric fit. An exponent 0 stands for ln X.
  std::vector<Scalar> fit_model;

  static SingularPoint zero(std::optional<AsymptoticExpansion> e = std::nullopt) {
    return {PointKind::at_zero, 0.0, std::move(e), std::nullopt, {}};
  }
  static SingularPoint infinity(std::optional<AsymptoticExpansion> e = std::nullopt) {
    return {PointKind::at_infinity, 0.0, std::move(e), std::nullopt, {}};
  }
  static SingularPoint interior(double z0, std::optional<AsymptoticExpansion> right = std::nullopt,
                                std::optional<AsymptoticExpansion> left = std::nullopt) {
    return {PointKind::interior, z0, std::move(right), std::move(left), {}};
  }
};

struct DomainSpec {
  std::vector<SingularPoint> singular_points;

  const SingularPoint* find(PointKind k) const {
    for (const auto& p : singular_points) {
      if (p.kind == k) return &p;
    }
    return nullptr;
  }

  std::vector<const SingularPoint*> interior_points() const {
    std::vector<const SingularPoint*> r;
    for (const auto& p : singular_points) {
      if (p.kind == PointKind::interior) r.push_back(&p);
    }
    return r;
  }

  void validate() const {
    int zeros = 0, infs = 0;
    double last = 0;
    for (const auto& p : singular_points) {
      if (p.kind == PointKind::at_zero) ++zeros;
      if (p.kind == PointKind::at_infinity) ++infs;
      if (p.kind != PointKind::interior) continue;
      if (!(p.z0 > 0) || !std::isfinite(p.z0)) {
        throw domain_error("DomainSpec: interior point must lie strictly inside (0, inf)");
      }
      if (!(p.z0 > last)) throw domain_error("DomainSpec: interior points must be strictly increasing");
      last = p.z0;
    }
    if (zeros > 1 || infs > 1) throw domain_error("DomainSpec: 0 and infinity may be listed at most once");
    for (const auto& p : singular_points) {
      for (const auto* e : {&p.expansion, &p.left_expansion}) {
        if (!*e) continue;
        for (const auto& t : (*e)->terms) {
          if (t.log_power != 0) throw domain_error("DomainSpec: integrand expansions take log power 0 only");
        }
      }
    }
  }
};

/// single: one cutoff X for all endpoints (Y = X); log terms of different
/// endpoints are summed, and a sum that cancels is refused.
/// independent: one cutoff per endpoint side; any log term is a pole.
/// automatic: single, escalating to independent when a log term appears.
enum class CutoffMode { automatic, single, independent };

inline std::string to_string(CutoffMode m) {
  switch (m) {
    case CutoffMode::automatic: return "automatic";
    case CutoffMode::single: return "single";
    case CutoffMode::independent: return "independent";
  }
  return "?";
}

struct IntegralConfig {
  CutoffMode mode = CutoffMode::automatic;
  /// Agreement required between two split distances (relative).
  double tolerance = 1e-10;
  /// Relative residual accepted by the numeric endpoint fit.
  double fit_tolerance = 1e-8;
  int max_split_halvings = 14;
};

struct EndpointResult {
  std::string point;  ///< "0", "inf", "z0-" or "z0+" with z0 printed
  PointKind kind = PointKind::at_infinity;
  double location = 0;
  /// +1: approached from the right (x = e + u), -1: from the left.
  int side = 1;
  std::string source;  ///< "classical", "expansion" or "fit"
  /// Divergent terms of the cutoff integral in X (exponent 0 with log power
  /// >= 1 marks a logarithm).
  std::vector<ExpansionTerm> removed_terms;
  bool log_flag = false;
  Scalar finite_part{0.0, 0.0};
  double error_estimate = 0;
  /// Annihilator of the removed terms; empty when log_flag is set.
  std::optional<RegularPolynomial<Scalar>> annihilator;
};

struct RegularizedIntegral {
  LimitValue value{Scalar{}};
  std::vector<EndpointResult> per_endpoint;
  int cutoff_variables = 1;
  CutoffMode mode_used = CutoffMode::single;
};

// ---------------------------------------------------------------------------
// Numeric endpoint fit

struct EndpointFit {
  AsymptoticExpansion expansion;
  double residual = 0;
};

namespace detail {

struct FitColumn {
  Scalar exponent;
  int log_power;
};

/// Model columns: each repeated exponent gets the next log power; exponent 0
/// starts at ln X because the constant is always present.
inline std::vector<FitColumn> fit_columns(const std::vector<Scalar>& model) {
  std::vector<FitColumn> cols;
  for (auto rho : model) {
    const bool zero = std::abs(rho) <= kSnapRadius;
    int m = zero ? 1 : 0;
    for (const auto& c : cols) {
      if (std::abs(c.exponent - rho) <= kExponentMerge) m = std::max(m, c.log_power + 1);
    }
    cols.push_back({zero ? Scalar(0.0) : rho, m});
  }
  return cols;
}

}  // namespace detail

/// Least-squares fit of F(X) ~ const + sum c X^rho ln^m X over the model,
/// with the decays X^-1, X^-2, X^-3 as extra nuisance columns (not returned).
inline EndpointFit fit_endpoint_expansion(const std::vector<std::pair<double, Scalar>>& samples,
                                          const std::vector<Scalar>& model_exponents,
                                          double fit_tolerance = 1e-8) {
  auto cols = detail::fit_columns(model_exponents);
  const std::size_t model_size = cols.size() + 1;
  for (double d : {-1.0, -2.0, -3.0}) {
    const bool present = std::any_of(cols.begin(), cols.end(), [&](const detail::FitColumn& c) {
      return c.log_power == 0 && std::abs(c.exponent - d) <= kExponentMerge;
    });
    if (!present) cols.push_back({d, 0});
  }
  const std::size_t ncols = cols.size() + 1;
  if (samples.size() < std::max(2 * model_size, ncols + 2)) {
    throw domain_error("fit_endpoint_expansion: need at least 2x the model size in samples");
  }
  double xmin = std::numeric_limits<double>::infinity(), xmax = 0;
  for (const auto& [x, y] : samples) {
    if (!(x > 0) || !std::isfinite(x) || !is_finite(y)) throw domain_error("fit_endpoint_expansion: bad sample");
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
  }
  if (xmax < 100 * xmin) throw domain_error("fit_endpoint_expansion: samples must span at least two decades");

  const auto n = static_cast<Eigen::Index>(samples.size());
  detail::CMat A(n, static_cast<Eigen::Index>(ncols));
  detail::CVec b(n);
  long double scale = 1;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& [x, y] = samples[static_cast<std::size_t>(i)];
    const long double lx = std::log(static_cast<long double>(x));
    A(i, 0) = 1;
    for (std::size_t c = 0; c < cols.size(); ++c) {
      WideScalar v = std::exp(widen(cols[c].exponent) * lx);
      for (int j = 0; j < cols[c].log_power; ++j) v *= lx;
      A(i, static_cast<Eigen::Index>(c + 1)) = v;
    }
    b(i) = widen(y);
    scale = std::max(scale, std::abs(b(i)));
  }
  std::vector<long double> norms(ncols);
  for (std::size_t c = 0; c < ncols; ++c) {
    norms[c] = A.col(static_cast<Eigen::Index>(c)).norm();
    if (norms[c] > 0) A.col(static_cast<Eigen::Index>(c)) /= norms[c];
  }
  Eigen::ColPivHouseholderQR<detail::CMat> qr(A);
  const detail::CVec sol = qr.solve(b);
  const double residual = static_cast<double>((A * sol - b).cwiseAbs().maxCoeff() / scale);

  EndpointFit out;
  out.residual = residual;
  if (!std::isfinite(residual) || residual > fit_tolerance) {
    std::ostringstream msg;
    msg << "fit_endpoint_expansion: relative residual " << residual << " exceeds " << fit_tolerance
        << " (behaviour outside the power-log model)";
    throw fit_failure(msg.str());
  }
  out.expansion.constant = narrow(sol(0) / norms[0]);
  for (std::size_t c = 0; c + 1 < model_size; ++c) {
    const WideScalar coeff = sol(static_cast<Eigen::Index>(c + 1)) / norms[c + 1];
    out.expansion.terms.push_back({narrow(coeff), cols[c].exponent, cols[c].log_power, Variable::x});
  }
  out.expansion.remainder_order = Scalar(-1.0);
  return out;
}

// ---------------------------------------------------------------------------
// Endpoint analysis

namespace detail {

inline std::string point_label(PointKind k, double z0, int side) {
  if (k == PointKind::at_zero) return "0";
  if (k == PointKind::at_infinity) return "inf";
  std::ostringstream s;
  s.precision(17);
  s << z0 << (side > 0 ? "+" : "-");
  return s.str();
}

inline WideScalar integrate_segment(const Integrand& f, double a, double b) {
  if (a == b) return 0;
  try {
    return widen(quad::adaptive(f, a, b, 1e-14));
  } catch (const quadrature_failure&) {
    return widen(quad::tanh_sinh(f, a, b));
  }
}

/// Integral over [a, b] with 0 < a < b split geometrically (ratio <= 2) and
/// a 24-point Gauss rule per piece. The fit fallback samples power-log
/// integrands across decades, where this is both exact to rounding and far
/// cheaper than adaptive refinement at a tight tolerance.
inline WideScalar integrate_geometric(const Integrand& f, double a, double b) {
  if (a == b) return 0;
  const double sign = a < b ? 1.0 : -1.0;
  long double lo = std::min(a, b);
  const long double hi = std::max(a, b);
  CompensatedSum<WideScalar> acc;
  while (lo < hi) {
    const long double next = std::min(hi, 2 * lo);
    acc.add(quad::gauss([&f](long double x) { return widen(f(static_cast<double>(x))); }, lo, next, quad::rule24()));
    lo = next;
  }
  return acc.value() * static_cast<long double>(sign);
}

/// Finite part of \int_0^d u^beta du: d^{beta+1}/(beta+1), or ln d when
/// beta = -1.
inline WideScalar power_finite_part(long double d, WideScalar beta) {
  const WideScalar e = beta + WideScalar(1);
  if (std::abs(e) <= kSnapRadius) return std::log(d);
  return std::exp(e * std::log(d)) / e;
}

inline void finish_endpoint(EndpointResult& r) {
  AsymptoticExpansion e;
  e.terms = r.removed_terms;
  auto q = synthesize_annihilator(e, 0);
  if (auto* p = std::get_if<RegularPolynomial<Scalar>>(&q)) r.annihilator = *p;
  for (const auto& t : r.removed_terms) {
    if (t.log_power >= 1 && std::abs(t.exponent) <= kSnapRadius) r.log_flag = true;
  }
}

/// Side of a finite endpoint e, integrated over u in (1/X, L] with
/// x = e + side * u.
inline EndpointResult finite_side(const Integrand& f, PointKind kind, double e, int side, double L,
                                  const std::optional<AsymptoticExpansion>& expansion,
                                  const std::vector<Scalar>& fit_model, const IntegralConfig& cfg) {
  EndpointResult r;
  r.kind = kind;
  r.location = e;
  r.side = side;
  r.point = point_label(kind, e, side);
  const double sd = side;
  Integrand g = [&f, e, sd](double u) { return f(e + sd * u); };

  if (expansion) {
    r.source = "expansion";
    for (const auto& t : expansion->terms) {
      const Scalar rho = t.exponent;
      if (std::abs(rho - 1.0) <= kSnapRadius) {
        r.removed_terms.push_back({t.coeff, Scalar(0.0), 1, Variable::x});
      } else if ((rho - 1.0).real() >= -kExponentMerge) {
        r.removed_terms.push_back({-t.coeff / (1.0 - rho), rho - 1.0, 0, Variable::x});
      }
    }
    auto at = [&](double d, long double& mag) {
      CompensatedSum<WideScalar> acc;
      acc.add(integrate_segment(g, d, L));
      mag = std::abs(acc.value());
      for (const auto& t : expansion->terms) {
        const WideScalar v = widen(t.coeff) * power_finite_part(d, -widen(t.exponent));
        mag = std::max(mag, std::abs(v));
        acc.add(v);
      }
      return acc.value();
    };
    double d = L / 2;
    long double mag = 0;
    WideScalar prev = at(d, mag);
    for (int k = 0; k < cfg.max_split_halvings; ++k) {
      d /= 2;
      long double mag2 = 0;
      const WideScalar cur = at(d, mag2);
      const long double diff = std::abs(cur - prev);
      const long double allow = cfg.tolerance * std::max(1.0L, std::abs(cur)) + 64 * 1e-16L * std::max(mag, mag2);
      if (diff <= allow) {
        r.finite_part = narrow(cur);
        r.error_estimate = static_cast<double>(diff);
        finish_endpoint(r);
        return r;
      }
      prev = cur;
      mag = mag2;
    }
    throw fit_failure("cesaro_integral: expansion at " + r.point + " does not match the integrand");
  }

  // Numeric fallback: cutoff integral over three decades of X.
  r.source = "fit";
  const double X0 = std::max(30.0, 10.0 / L);
  constexpr int kSamples = 36;
  std::vector<std::pair<double, Scalar>> samples;
  CompensatedSum<WideScalar> acc;
  double prev_u = L;
  for (int j = 0; j < kSamples; ++j) {
    const double X = X0 * std::pow(1000.0, double(j) / (kSamples - 1));
    const double u = 1.0 / X;
    acc.add(integrate_geometric(g, u, prev_u));
    prev_u = u;
    samples.emplace_back(X, narrow(acc.value()));
  }
  const auto fit = fit_endpoint_expansion(samples, fit_model, cfg.fit_tolerance);
  r.finite_part = fit.expansion.constant;
  r.error_estimate = fit.residual;
  for (const auto& t : fit.expansion.terms) {
    const bool is_log = std::abs(t.exponent) <= kSnapRadius && t.log_power >= 1;
    if (t.exponent.real() >= -kExponentMerge || is_log) r.removed_terms.push_back(t);
  }
  // A fitted log coefficient at rounding level is not a log.
  std::erase_if(r.removed_terms, [&](const ExpansionTerm& t) {
    return t.log_power >= 1 && std::abs(t.exponent) <= kSnapRadius &&
           std::abs(t.coeff) <= 1e3 * cfg.fit_tolerance * std::max(1.0, std::abs(r.finite_part));
  });
  finish_endpoint(r);
  return r;
}

/// Side at infinity, integrated over [m, X].
inline EndpointResult infinity_side(const Integrand& f, double m, const std::optional<AsymptoticExpansion>& expansion,
                                    const std::vector<Scalar>& fit_model, const IntegralConfig& cfg) {
  EndpointResult r;
  r.kind = PointKind::at_infinity;
  r.location = std::numeric_limits<double>::infinity();
  r.side = -1;
  r.point = "inf";

  if (expansion) {
    r.source = "expansion";
    for (const auto& t : expansion->terms) {
      const Scalar rho = t.exponent;
      if (std::abs(rho + 1.0) <= kSnapRadius) {
        r.removed_terms.push_back({t.coeff, Scalar(0.0), 1, Variable::x});
      } else if ((rho + 1.0).real() >= -kExponentMerge) {
        r.removed_terms.push_back({t.coeff / (rho + 1.0), rho + 1.0, 0, Variable::x});
      }
    }
    // \int_m^X f = \int_m^Lam f + sum c (X^{rho+1} - Lam^{rho+1})/(rho+1).
    auto at = [&](double lam, long double& mag) {
      CompensatedSum<WideScalar> acc;
      acc.add(integrate_segment(f, m, lam));
      mag = std::abs(acc.value());
      for (const auto& t : expansion->terms) {
        const WideScalar e = widen(t.exponent) + WideScalar(1);
        const WideScalar v = std::abs(e) <= kSnapRadius
                                 ? -widen(t.coeff) * std::log(static_cast<long double>(lam))
                                 : -widen(t.coeff) * std::exp(e * std::log(static_cast<long double>(lam))) / e;
        mag = std::max(mag, std::abs(v));
        acc.add(v);
      }
      return acc.value();
    };
    double lam = std::max(2.0, 2 * m);
    long double mag = 0;
    WideScalar prev = at(lam, mag);
    for (int k = 0; k < cfg.max_split_halvings; ++k) {
      lam *= 2;
      long double mag2 = 0;
      const WideScalar cur = at(lam, mag2);
      const long double diff = std::abs(cur - prev);
      const long double allow = cfg.tolerance * std::max(1.0L, std::abs(cur)) + 64 * 1e-16L * std::max(mag, mag2);
      if (diff <= allow) {
        r.finite_part = narrow(cur);
        r.error_estimate = static_cast<double>(diff);
        finish_endpoint(r);
        return r;
      }
      prev = cur;
      mag = mag2;
    }
    throw fit_failure("cesaro_integral: expansion at infinity does not match the integrand");
  }

  r.source = "fit";
  const double X0 = std::max(30.0, 10.0 * m);
  constexpr int kSamples = 36;
  std::vector<std::pair<double, Scalar>> samples;
  CompensatedSum<WideScalar> acc;
  double prev_x = m;
  for (int j = 0; j < kSamples; ++j) {
    const double X = X0 * std::pow(1000.0, double(j) / (kSamples - 1));
    acc.add(integrate_geometric(f, prev_x, X));
    prev_x = X;
    samples.emplace_back(X, narrow(acc.value()));
  }
  const auto fit = fit_endpoint_expansion(samples, fit_model, cfg.fit_tolerance);
  r.finite_part = fit.expansion.constant;
  r.error_estimate = fit.residual;
  for (const auto& t : fit.expansion.terms) {
    const bool is_log = std::abs(t.exponent) <= kSnapRadius && t.log_power >= 1;
    if (t.exponent.real() >= -kExponentMerge || is_log) r.removed_terms.push_back(t);
  }
  std::erase_if(r.removed_terms, [&](const ExpansionTerm& t) {
    return t.log_power >= 1 && std::abs(t.exponent) <= kSnapRadius &&
           std::abs(t.coeff) <= 1e3 * cfg.fit_tolerance * std::max(1.0, std::abs(r.finite_part));
  });
  finish_endpoint(r);
  return r;
}

inline EndpointResult classical_side(const Integrand& f, PointKind kind, double a, double b) {
  EndpointResult r;
  r.kind = kind;
  r.source = "classical";
  double err = 0;
  try {
    if (kind == PointKind::at_zero) {
      r.location = 0;
      r.side = 1;
      r.point = "0";
      r.finite_part = quad::tanh_sinh(f, a, b, &err);
    } else {
      r.location = std::numeric_limits<double>::infinity();
      r.side = -1;
      r.point = "inf";
      r.finite_part = quad::exp_sinh(f, a, &err);
    }
  } catch (const quadrature_failure& e) {
    throw not_convergent("cesaro_integral: " + std::string(e.what()) + "; declare the endpoint singular");
  }
  // A divergent endpoint shows up as a quadrature that cannot settle. Slowly
  // decaying oscillation (sin x/(1+x^2) at infinity) also lands here: the
  // double-exponential rules cannot certify it, and a wrong digit is worse
  // than a refusal.
  if (!(err <= 1e-6 * std::max(1.0, std::abs(r.finite_part)))) {
    std::ostringstream msg;
    msg << "cesaro_integral: classical quadrature at " << r.point << " did not settle (error estimate " << err
        << "); the integral diverges or oscillates there, declare the endpoint singular";
    throw not_convergent(msg.str());
  }
  r.error_estimate = err;
  r.annihilator = RegularPolynomial<Scalar>{};
  return r;
}

inline double anchor_between(double a, double b) {
  if (a == 0 && std::isinf(b)) return 1.0;
  if (a == 0) return b / 2;
  if (std::isinf(b)) return a + std::max(1.0, a);
  return (a + b) / 2;
}

}  // namespace detail

/// Generalised Cesàro integral of f over (0, infinity).
inline RegularizedIntegral cesaro_integral(const Integrand& f, const DomainSpec& spec, const IntegralConfig& cfg = {}) {
  spec.validate();
  const SingularPoint* zero = spec.find(PointKind::at_zero);
  const SingularPoint* inf = spec.find(PointKind::at_infinity);
  const auto inner = spec.interior_points();

  std::vector<double> bp{0.0};
  for (const auto* p : inner) bp.push_back(p->z0);
  bp.push_back(std::numeric_limits<double>::infinity());

  RegularizedIntegral out;
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    const double a = bp[i], b = bp[i + 1];
    const double m = detail::anchor_between(a, b);
    if (i == 0) {
      out.per_endpoint.push_back(zero ? detail::finite_side(f, PointKind::at_zero, 0.0, 1, m, zero->expansion,
                                                            zero->fit_model, cfg)
                                      : detail::classical_side(f, PointKind::at_zero, 0.0, m));
    } else {
      const auto* p = inner[i - 1];
      out.per_endpoint.push_back(
          detail::finite_side(f, PointKind::interior, a, 1, m - a, p->expansion, p->fit_model, cfg));
    }
    if (i + 2 == bp.size()) {
      out.per_endpoint.push_back(inf ? detail::infinity_side(f, m, inf->expansion, inf->fit_model, cfg)
                                     : detail::classical_side(f, PointKind::at_infinity, m, b));
    } else {
      const auto* p = inner[i];
      const auto& left = p->left_expansion ? p->left_expansion : p->expansion;
      out.per_endpoint.push_back(
          detail::finite_side(f, PointKind::interior, b, -1, b - m, left, p->fit_model, cfg));
    }
  }

  int singular_sides = 0;
  bool any_log = false;
  std::vector<std::string> log_points;
  CompensatedSum<WideScalar> total;
  for (const auto& r : out.per_endpoint) {
    if (r.source != "classical") ++singular_sides;
    if (r.log_flag) {
      any_log = true;
      log_points.push_back(r.point);
    }
    total.add(widen(r.finite_part));
  }
  std::string where;
  for (const auto& p : log_points) where += (where.empty() ? "" : ", ") + p;
  const PoleSignal pole{"logarithmic divergence at " + where, Scalar(0.0), 1};

  switch (cfg.mode) {
    case CutoffMode::automatic:
    case CutoffMode::independent:
      if (any_log || cfg.mode == CutoffMode::independent) {
        out.mode_used = CutoffMode::independent;
        out.cutoff_variables = std::max(1, singular_sides);
      } else {
        out.mode_used = CutoffMode::single;
        out.cutoff_variables = 1;
      }
      out.value = any_log ? LimitValue{pole} : LimitValue{narrow(total.value())};
      break;
    case CutoffMode::single: {
      out.mode_used = CutoffMode::single;
      out.cutoff_variables = 1;
      if (!any_log) {
        out.value = narrow(total.value());
        break;
      }
      // With Y = X the log terms of all endpoints add up. A sum that vanishes
      // would hide eigenvalue-1 content, which is never allowed.
      std::vector<std::pair<int, WideScalar>> sums;
      long double biggest = 0;
      for (const auto& r : out.per_endpoint) {
        for (const auto& t : r.removed_terms) {
          if (t.log_power < 1 || std::abs(t.exponent) > kSnapRadius) continue;
          auto it = std::find_if(sums.begin(), sums.end(), [&](const auto& s) { return s.first == t.log_power; });
          if (it == sums.end()) {
            sums.emplace_back(t.log_power, widen(t.coeff));
          } else {
            it->second += widen(t.coeff);
          }
          biggest = std::max(biggest, std::abs(widen(t.coeff)));
        }
      }
      const bool cancelled = std::all_of(sums.begin(), sums.end(),
                                         [&](const auto& s) { return std::abs(s.second) <= 1e-12L * biggest; });
      if (cancelled) {
        throw illegal_cancellation("cesaro_integral: log terms at " + where +
                                   " cancel under a single cutoff; use independent cutoffs");
      }
      out.value = pole;
      break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Mellin transform of 1/(1+x)

/// Integrand expansions of x^{s-1}/(1+x): near 0 (t = 1/x) the Taylor series
/// sum (-1)^n t^{1-s-n}; near infinity (t = x) sum (-1)^n t^{s-2-n}.
inline DomainSpec mellin_1_over_1px_domain(Scalar s, int extra_terms = 40) {
  AsymptoticExpansion at0, atinf;
  const int n0 = extra_terms + std::max(0, static_cast<int>(std::ceil(-s.real())));
  const int ninf = extra_terms + std::max(0, static_cast<int>(std::ceil(s.real())));
  for (int n = 0; n < n0; ++n) {
    at0.terms.push_back({Scalar(n % 2 ? -1.0 : 1.0), 1.0 - s - double(n), 0, Variable::x});
  }
  at0.remainder_order = 1.0 - s - double(n0);
  for (int n = 0; n < ninf; ++n) {
    atinf.terms.push_back({Scalar(n % 2 ? -1.0 : 1.0), s - 2.0 - double(n), 0, Variable::x});
  }
  atinf.remainder_order = s - 2.0 - double(ninf);
  return DomainSpec{{SingularPoint::zero(at0), SingularPoint::infinity(atinf)}};
}

inline RegularizedIntegral mellin_1_over_1px_integral(Scalar s, const IntegralConfig& cfg = {}) {
  if (!is_finite(s)) throw domain_error("mellin_1_over_1px: s must be finite");
  const WideScalar sm1 = widen(s) - WideScalar(1);
  Integrand f = [sm1](double x) {
    const long double xl = x;
    return narrow(std::exp(sm1 * std::log(xl)) / (1.0L + xl));
  };
  return cesaro_integral(f, mellin_1_over_1px_domain(s), cfg);
}

/// Generalised Cesàro value of \int_0^inf x^{s-1}/(1+x) dx; a PoleSignal
/// exactly when s is an integer.
inline LimitValue mellin_1_over_1px(Scalar s, const IntegralConfig& cfg = {}) {
  return mellin_1_over_1px_integral(s, cfg).value;
}

}  // namespace gcesaro
