#pragma once

// Classical-limit detection by least-squares extrapolation over the last
// decade [H/10, H] of a horizon.
//
// Sampling uses integer parts qM + j, with M highly composite and a fixed
// offset j = 0..5 per phase plus a non-integer alpha. Any periodic pattern
// with period dividing M is then seen at a fixed phase along each series,
// while the six offsets expose undamped oscillation of period 2..6. Per phase
// the samples are fitted by 1 + sum_e sum_j c_{e,j} (x/H)^e ln^j(x/H) with decay exponents e; the
// fitted constants must agree across phases, the fit residual must be small,
// and a refit on the upper half of the decade must roughly reproduce the
// constant (a coarse guard against slowly divergent tails such as ln x).

#include "core.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <functional>
#include <vector>

namespace gcesaro {

struct TailFitOptions {
  /// Decay exponents (Re < 0) beyond the defaults -1 and -2.
  std::vector<Scalar> decay_exponents;
  /// Log powers used with exponents that sit on negative integers.
  int log_powers = 2;
  /// Sequence mode: integer samples only.
  bool discrete = false;
  int min_samples = 24;
  int max_samples = 64;
};

struct TailFit {
  WideScalar limit{0, 0};
  double variation = 0;  ///< max of phase spread and fit residual
  double phase_spread = 0;
  double residual = 0;
  double drift = 0;
  int samples = 0;
};

namespace detail {

inline std::vector<std::int64_t> tail_indices(std::int64_t lo, std::int64_t hi, int min_count, int max_count) {
  static const std::int64_t mods[] = {2520, 840, 420, 120, 60, 12, 6, 2, 1};
  std::int64_t M = 1;
  for (auto m : mods) {
    const std::int64_t first = (lo + m - 1) / m, last = hi / m;
    if (last - first + 1 >= min_count) {
      M = m;
      break;
    }
  }
  std::vector<std::int64_t> all;
  for (std::int64_t q = (lo + M - 1) / M; q * M <= hi; ++q) all.push_back(q * M);
  if (static_cast<int>(all.size()) <= max_count) return all;
  std::vector<std::int64_t> pick;
  const double step = double(all.size() - 1) / double(max_count - 1);
  for (int i = 0; i < max_count; ++i) pick.push_back(all[static_cast<std::size_t>(std::llround(i * step))]);
  return pick;
}

struct BasisTerm {
  WideScalar exponent;
  int log_power;
};

/// Over one decade x^{e+eps} = x^e (1 + eps ln x + ...) is numerically
/// collinear with x^e for small eps, so exponents closer than this to an
/// existing column are folded into that column's log powers, and exponents
/// this close to 0 are dropped (indistinguishable from the constant; a
/// limit driver escalates the averaging power instead).
inline constexpr double kExponentFold = 0.05;

inline std::vector<BasisTerm> tail_basis(const TailFitOptions& opt) {
  std::vector<Scalar> exps{-1.0, -2.0};
  std::vector<bool> folded{false, false};
  for (auto e : opt.decay_exponents) {
    if (e.real() >= 0 || std::abs(e) < kExponentFold) continue;
    bool dup = false;
    for (std::size_t i = 0; i < exps.size() && !dup; ++i) {
      const double d = std::abs(exps[i] - e);
      if (d < kExponentFold) {
        dup = true;
        if (d >= 1e-9) folded[i] = true;
      }
    }
    if (!dup) {
      exps.push_back(e);
      folded.push_back(false);
    }
  }
  std::vector<BasisTerm> basis;
  for (std::size_t i = 0; i < exps.size(); ++i) {
    const bool on_integer = snap_integer(exps[i], 1e-9).has_value();
    int J = on_integer ? opt.log_powers : 0;
    if (folded[i]) J = std::max(J, 3);
    for (int j = 0; j <= J; ++j) basis.push_back({widen(exps[i]), j});
  }
  return basis;
}

using CMat = Eigen::Matrix<WideScalar, Eigen::Dynamic, Eigen::Dynamic>;
using CVec = Eigen::Matrix<WideScalar, Eigen::Dynamic, 1>;

struct PhaseFit {
  WideScalar constant;
  long double residual;
};

inline PhaseFit fit_phase(const std::vector<long double>& xs, const std::vector<WideScalar>& ys, long double H,
                          const std::vector<BasisTerm>& basis) {
  const auto n = static_cast<Eigen::Index>(xs.size());
  const auto cols = static_cast<Eigen::Index>(basis.size() + 1);
  CMat A(n, cols);
  CVec b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const long double u = std::log(xs[static_cast<std::size_t>(i)] / H);
    A(i, 0) = 1;
    for (std::size_t c = 0; c < basis.size(); ++c) {
      WideScalar v = std::exp(basis[c].exponent * u);
      for (int j = 0; j < basis[c].log_power; ++j) v *= u;
      A(i, static_cast<Eigen::Index>(c + 1)) = v;
    }
    b(i) = ys[static_cast<std::size_t>(i)];
  }
  std::vector<long double> norms(static_cast<std::size_t>(cols));
  for (Eigen::Index c = 0; c < cols; ++c) {
    norms[static_cast<std::size_t>(c)] = A.col(c).norm();
    if (norms[static_cast<std::size_t>(c)] > 0) A.col(c) /= norms[static_cast<std::size_t>(c)];
  }
  Eigen::ColPivHouseholderQR<CMat> qr(A);
  CVec sol = qr.solve(b);
  const long double res = (A * sol - b).cwiseAbs().maxCoeff();
  return {sol(0) / norms[0], res};
}

}  // namespace detail

/// Fits the classical limit of g over [H/10, H]. `g` is evaluated at x in
/// (0, H]; in discrete mode only at integers.
inline TailFit tail_fit(const std::function<WideScalar(long double)>& g, std::int64_t H,
                        const TailFitOptions& opt = {}) {
  const auto basis = detail::tail_basis(opt);
  const int cols = static_cast<int>(basis.size()) + 1;
  const int want = std::max(opt.min_samples, 2 * cols);
  const std::int64_t lo = std::max<std::int64_t>(1, H / 10);
  const std::int64_t hi = opt.discrete ? H - 5 : H - 6;
  const auto ks = detail::tail_indices(lo, hi, want, std::max(opt.max_samples, want));
  std::vector<long double> phases;
  for (int j = 0; j < 6; ++j) phases.push_back(opt.discrete ? j : j + (j + 0.5L) / 6);
  const long double Hl = static_cast<long double>(H);

  TailFit out;
  std::vector<WideScalar> consts;
  for (auto a : phases) {
    std::vector<long double> xs;
    std::vector<WideScalar> ys;
    for (auto k : ks) {
      const long double x = static_cast<long double>(k) + a;
      xs.push_back(x);
      ys.push_back(g(x));
    }
    out.samples += static_cast<int>(xs.size());
    if (static_cast<int>(xs.size()) < cols + 2) {
      throw fit_failure("tail_fit: horizon too small for the fit model");
    }
    const auto full = detail::fit_phase(xs, ys, Hl, basis);
    out.residual = std::max(out.residual, static_cast<double>(full.residual));
    // Refit on the upper half of the decade; a genuine limit is reproduced.
    const std::size_t half = xs.size() / 2;
    if (static_cast<int>(xs.size() - half) >= cols + 2) {
      std::vector<long double> xu(xs.begin() + static_cast<std::ptrdiff_t>(half), xs.end());
      std::vector<WideScalar> yu(ys.begin() + static_cast<std::ptrdiff_t>(half), ys.end());
      const auto upper = detail::fit_phase(xu, yu, Hl, basis);
      out.drift = std::max(out.drift, static_cast<double>(std::abs(upper.constant - full.constant)));
    }
    consts.push_back(full.constant);
  }
  WideScalar mean = 0;
  for (auto c : consts) mean += c;
  mean /= static_cast<long double>(consts.size());
  for (auto c : consts) out.phase_spread = std::max(out.phase_spread, static_cast<double>(std::abs(c - mean)));
  out.limit = mean;
  out.variation = std::max(out.phase_spread, out.residual);
  return out;
}

/// Convergence test used by all limit drivers. The drift guard is loose: the
/// upper-half refit extrapolates further and amplifies rounding noise.
inline bool tail_converged(const TailFit& t, double tol) {
  const double scale = std::max(1.0, static_cast<double>(std::abs(t.limit)));
  return std::isfinite(t.variation) && t.variation <= tol * scale && t.drift <= 1e-3 * scale;
}

}  // namespace gcesaro
