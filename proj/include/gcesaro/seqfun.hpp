#pragma once

// Series, p-sum sequences and piecewise functions on [0, inf) with memoized
// cumulative integrals.

#include "core.hpp"
#include "expansion.hpp"
#include "quadrature.hpp"

#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace gcesaro {

// ---------------------------------------------------------------------------
// Grid points

/// x = k + alpha with k = floor(x), alpha in [0,1).
struct GridPoint {
  std::int64_t k = 0;
  long double alpha = 0;
  long double x = 0;
};

inline GridPoint decompose(long double x) {
  if (!std::isfinite(x) || x < 0) throw domain_error("decompose: x must be finite and >= 0");
  const long double k = std::floor(x);
  return {static_cast<std::int64_t>(k), x - k, x};
}

// ---------------------------------------------------------------------------
// Series

/// A series given by its terms a_1, a_2, ... as a pure map.
struct SeriesTerms {
  std::function<Scalar(std::int64_t)> term;
  /// Exact rational terms, when the series has them.
  std::function<Rational(std::int64_t)> exact_term;
  std::string label;
  /// Registered x-expansion of the p-sum function (used by auto mode).
  std::shared_ptr<const AsymptoticExpansion> expansion;

  bool has_exact() const { return static_cast<bool>(exact_term); }
};

/// Sum of term(1..k), compensated.
inline Scalar psum(const SeriesTerms& terms, std::int64_t k) {
  if (k < 0) throw domain_error("psum: k must be >= 0");
  CompensatedSum<WideScalar> acc;
  for (std::int64_t i = 1; i <= k; ++i) acc.add(widen(terms.term(i)));
  return narrow(acc.value());
}

inline Rational psum_exact(const SeriesTerms& terms, std::int64_t k) {
  if (k < 0) throw domain_error("psum_exact: k must be >= 0");
  if (!terms.has_exact()) throw domain_error("psum_exact: series has no exact terms");
  Rational acc = 0;
  for (std::int64_t i = 1; i <= k; ++i) acc += terms.exact_term(i);
  return acc;
}

namespace detail {

/// Lazily grown prefix table: entry n holds the sum of gen(0..n-1).
/// Filling is idempotent and guarded, so concurrent readers are safe.
template <class T>
class PrefixTable {
 public:
  explicit PrefixTable(std::function<T(std::int64_t)> gen) : gen_(std::move(gen)) { table_.push_back(T{}); }

  T at(std::int64_t n) {
    std::lock_guard<std::mutex> lock(mu_);
    grow(n);
    return table_[static_cast<std::size_t>(n)];
  }

 private:
  void grow(std::int64_t n) {
    while (static_cast<std::int64_t>(table_.size()) <= n) {
      const auto i = static_cast<std::int64_t>(table_.size()) - 1;
      if constexpr (std::is_same_v<T, Rational>) {
        table_.push_back(table_.back() + gen_(i));
      } else {
        acc_.add(gen_(i));
        table_.push_back(acc_.value());
      }
    }
  }

  std::function<T(std::int64_t)> gen_;
  std::vector<T> table_;
  std::conditional_t<std::is_same_v<T, Rational>, int, CompensatedSum<T>> acc_{};
  std::mutex mu_;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Piecewise functions

/// A function on [0, inf) described piece by piece on unit intervals
/// [n, n+1). Step pieces are constant, poly-in-alpha pieces are polynomials in
/// alpha = x - n, generic pieces are arbitrary (smooth inside each interval).
class PiecewiseFn {
 public:
  enum class Kind { step, poly_in_alpha, generic };
  using Piece = std::function<WideScalar(std::int64_t, long double)>;

  static PiecewiseFn step(std::function<WideScalar(std::int64_t)> piece,
                          std::function<Rational(std::int64_t)> exact = {}, std::string label = {}) {
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::step;
    impl->label = std::move(label);
    impl->piece = [piece](std::int64_t n, long double) { return piece(n); };
    impl->cum = std::make_shared<detail::PrefixTable<WideScalar>>(piece);
    if (exact) {
      impl->exact_piece = exact;
      impl->cum_exact = std::make_shared<detail::PrefixTable<Rational>>(exact);
    }
    return PiecewiseFn(std::move(impl));
  }

  static PiecewiseFn poly_in_alpha(Piece piece, int degree, std::string label = {}) {
    if (degree < 0 || degree > 40) throw domain_error("poly_in_alpha: degree must be in [0,40]");
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::poly_in_alpha;
    impl->label = std::move(label);
    impl->piece = piece;
    // 24-point Gauss integrates polynomials of degree <= 47 exactly.
    impl->cum = std::make_shared<detail::PrefixTable<WideScalar>>([piece](std::int64_t n) {
      return quad::gauss([&](long double a) { return piece(n, a); }, 0.0L, 1.0L, quad::rule24());
    });
    return PiecewiseFn(std::move(impl));
  }

  /// Generic function given per unit interval; smooth inside each interval,
  /// possibly with an integrable singularity at x = 0.
  static PiecewiseFn generic_pieces(Piece piece, std::string label = {}) {
    auto impl = std::make_shared<Impl>();
    impl->kind = Kind::generic;
    impl->label = std::move(label);
    impl->piece = piece;
    impl->cum = std::make_shared<detail::PrefixTable<WideScalar>>([piece](std::int64_t n) {
      if (n == 0) return quad::gauss_to_zero([&](long double t) { return piece(0, t); }, 1.0L);
      return quad::gauss([&](long double a) { return piece(n, a); }, 0.0L, 1.0L, quad::rule24());
    });
    return PiecewiseFn(std::move(impl));
  }

  /// Generic function of x.
  static PiecewiseFn generic(std::function<WideScalar(long double)> f, std::string label = {}) {
    return generic_pieces([f](std::int64_t n, long double a) { return f(static_cast<long double>(n) + a); },
                          std::move(label));
  }

  Kind kind() const { return impl_->kind; }
  const std::string& label() const { return impl_->label; }
  /// Identity of the underlying object (two handles to one function compare equal).
  const void* id() const { return impl_.get(); }

  /// Value on the open piece [n, n+1) at offset alpha.
  WideScalar interval_eval(std::int64_t n, long double alpha) const { return impl_->piece(n, alpha); }

  /// Point value; at integer points of piecewise kinds, the midpoint of the
  /// adjacent pieces.
  Scalar value(long double x) const {
    const auto g = decompose(x);
    if (g.alpha == 0 && g.k >= 1 && kind() != Kind::generic) {
      return narrow((impl_->piece(g.k - 1, 1.0L) + impl_->piece(g.k, 0.0L)) / 2.0L);
    }
    return narrow(impl_->piece(g.k, g.alpha));
  }

  /// Integral over [0, X].
  WideScalar cumulative(long double X) const {
    const auto g = decompose(X);
    WideScalar base = impl_->cum->at(g.k);
    if (g.alpha == 0) return base;
    const auto n = g.k;
    switch (kind()) {
      case Kind::step:
        return base + g.alpha * impl_->piece(n, 0.0L);
      case Kind::poly_in_alpha:
        return base + quad::gauss([&](long double a) { return impl_->piece(n, a); }, 0.0L, g.alpha,
                                  quad::rule24());
      case Kind::generic:
        if (n == 0) {
          return quad::gauss_to_zero([&](long double t) { return impl_->piece(0, t); }, g.alpha);
        }
        return base + quad::gauss([&](long double a) { return impl_->piece(n, a); }, 0.0L, g.alpha,
                                  quad::rule24());
    }
    return base;
  }

  bool has_exact() const { return static_cast<bool>(impl_->exact_piece); }

  Rational exact_piece(std::int64_t n) const {
    if (!has_exact()) throw domain_error("exact_piece: function has no exact pieces");
    return impl_->exact_piece(n);
  }

  /// Exact integral over [0, K] for step functions built from exact data.
  Rational cumulative_exact(std::int64_t K) const {
    if (!has_exact()) throw domain_error("cumulative_exact: function has no exact pieces");
    if (K < 0) throw domain_error("cumulative_exact: K must be >= 0");
    return impl_->cum_exact->at(K);
  }

  std::shared_ptr<const AsymptoticExpansion> expansion() const { return impl_->expansion; }

  /// Same function with an attached x-expansion.
  PiecewiseFn with_expansion(std::shared_ptr<const AsymptoticExpansion> e) const {
    auto impl = std::make_shared<Impl>(*impl_);
    impl->expansion = std::move(e);
    return PiecewiseFn(std::move(impl));
  }

 private:
  struct Impl {
    Kind kind = Kind::generic;
    std::string label;
    Piece piece;
    std::function<Rational(std::int64_t)> exact_piece;
    std::shared_ptr<detail::PrefixTable<WideScalar>> cum;
    std::shared_ptr<detail::PrefixTable<Rational>> cum_exact;
    std::shared_ptr<const AsymptoticExpansion> expansion;
  };

  explicit PiecewiseFn(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

  std::shared_ptr<const Impl> impl_;
};

/// The p-sum function s(k + alpha) = term(1) + ... + term(k).
inline PiecewiseFn psum_function(const SeriesTerms& terms) {
  auto partial = std::make_shared<detail::PrefixTable<WideScalar>>(
      [t = terms.term](std::int64_t i) { return widen(t(i + 1)); });
  std::function<Rational(std::int64_t)> exact;
  if (terms.has_exact()) {
    auto partial_exact = std::make_shared<detail::PrefixTable<Rational>>(
        [t = terms.exact_term](std::int64_t i) { return t(i + 1); });
    exact = [partial_exact](std::int64_t n) { return partial_exact->at(n); };
  }
  auto f = PiecewiseFn::step([partial](std::int64_t n) { return partial->at(n); }, exact,
                             terms.label.empty() ? "psum" : "psum(" + terms.label + ")");
  if (terms.expansion) f = f.with_expansion(terms.expansion);
  return f;
}

/// Step embedding a(x) = a_n on [n, n+1), n >= 0.
inline PiecewiseFn embed_step(std::function<Scalar(std::int64_t)> seq, std::string label = {}) {
  return PiecewiseFn::step([seq](std::int64_t n) { return widen(seq(n)); }, {}, std::move(label));
}

/// Finite sequence a_0..a_{N-1}, zero beyond its end.
inline PiecewiseFn embed_step(const std::vector<Scalar>& seq) {
  auto data = std::make_shared<const std::vector<Scalar>>(seq);
  return embed_step([data](std::int64_t n) {
    return n < static_cast<std::int64_t>(data->size()) ? (*data)[static_cast<std::size_t>(n)] : Scalar{};
  });
}

inline PiecewiseFn embed_step(const std::vector<Rational>& seq) {
  auto data = std::make_shared<const std::vector<Rational>>(seq);
  auto get = [data](std::int64_t n) {
    return n < static_cast<std::int64_t>(data->size()) ? (*data)[static_cast<std::size_t>(n)] : Rational(0);
  };
  return PiecewiseFn::step([get](std::int64_t n) { return widen(to_scalar(get(n))); }, get);
}

// ---------------------------------------------------------------------------
// Builtin series

namespace series {

inline SeriesTerms ones() {
  return {[](std::int64_t) { return Scalar(1.0, 0.0); }, [](std::int64_t) { return Rational(1); }, "ones", {}};
}

/// 1 - 1 + 1 - 1 + ...
inline SeriesTerms alt_ones() {
  return {[](std::int64_t n) { return Scalar(n % 2 ? 1.0 : -1.0, 0.0); },
          [](std::int64_t n) { return Rational(n % 2 ? 1 : -1); }, "alt_ones", {}};
}

inline SeriesTerms naturals() {
  return {[](std::int64_t n) { return Scalar(static_cast<double>(n), 0.0); },
          [](std::int64_t n) { return Rational(n); }, "n", {}};
}

/// 1 - 2 + 3 - 4 + ...
inline SeriesTerms alt_naturals() {
  return {[](std::int64_t n) { return Scalar(n % 2 ? double(n) : -double(n), 0.0); },
          [](std::int64_t n) { return Rational(n % 2 ? n : -n); }, "alt_n", {}};
}

/// n^{-s}. Exact terms exist when s is a non-positive integer.
inline SeriesTerms n_pow_minus_s(Scalar s) {
  SeriesTerms t;
  t.term = [s](std::int64_t n) {
    return narrow(std::exp(-widen(s) * std::log(static_cast<long double>(n))));
  };
  if (auto m = snap_integer(s, 0.0); m && *m <= 0) {
    const auto p = static_cast<unsigned>(-*m);
    t.exact_term = [p](std::int64_t n) { return Rational(boost::multiprecision::pow(BigInt(n), p)); };
  }
  std::ostringstream os;
  os << "n_pow(" << s.real() << "," << s.imag() << ")";
  t.label = os.str();
  return t;
}

/// (-1)^{n-1} n^{-s}.
inline SeriesTerms alt_n_pow_minus_s(Scalar s) {
  SeriesTerms t = n_pow_minus_s(s);
  auto base = t.term;
  t.term = [base](std::int64_t n) { return n % 2 ? base(n) : -base(n); };
  if (t.exact_term) {
    auto be = t.exact_term;
    t.exact_term = [be](std::int64_t n) { return n % 2 ? be(n) : Rational(-be(n)); };
  }
  t.label = "alt_" + t.label;
  return t;
}

/// Inserts zeros into `inner` following a periodic 0/1 pattern: retained
/// slots (1) take successive terms of `inner`, zero slots (0) contribute 0.
inline SeriesTerms zero_padded(const SeriesTerms& inner, std::vector<int> pattern) {
  const auto per = static_cast<std::int64_t>(pattern.size());
  std::int64_t ones_per = 0;
  for (int p : pattern) {
    if (p != 0 && p != 1) throw domain_error("zero_padded: pattern entries must be 0 or 1");
    ones_per += p;
  }
  if (per == 0 || ones_per == 0) throw domain_error("zero_padded: pattern needs at least one retained slot");
  // Map slot n (1-based) to the index of the inner term, or 0 for a zero slot.
  auto inner_index = [pattern, per, ones_per](std::int64_t n) -> std::int64_t {
    const std::int64_t q = (n - 1) / per, r = (n - 1) % per;
    if (!pattern[static_cast<std::size_t>(r)]) return 0;
    std::int64_t before = 0;
    for (std::int64_t i = 0; i < r; ++i) before += pattern[static_cast<std::size_t>(i)];
    return q * ones_per + before + 1;
  };
  SeriesTerms t;
  t.term = [inner_index, f = inner.term](std::int64_t n) {
    const auto j = inner_index(n);
    return j ? f(j) : Scalar{};
  };
  if (inner.has_exact()) {
    t.exact_term = [inner_index, f = inner.exact_term](std::int64_t n) {
      const auto j = inner_index(n);
      return j ? f(j) : Rational(0);
    };
  }
  std::string pat;
  for (std::size_t i = 0; i < pattern.size(); ++i) pat += (i ? "," : "") + std::to_string(pattern[i]);
  t.label = "zero_padded(" + inner.label + "," + pat + ")";
  return t;
}

}  // namespace series

}  // namespace gcesaro
