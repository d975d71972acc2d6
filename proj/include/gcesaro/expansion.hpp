#pragma once

// Asymptotic expansions: finite sums of c * v^rho * (ln v)^m in a variable v
// (x or k), plus a separate constant slot and a remainder order.

#include "core.hpp"

#include <json.hpp>

#include <algorithm>
#include <vector>

namespace gcesaro {

enum class Variable { x, k };

struct ExpansionTerm {
  Scalar coeff{0.0, 0.0};
  Scalar exponent{0.0, 0.0};
  int log_power = 0;
  Variable var = Variable::x;

  /// Value of the term at v > 0.
  WideScalar eval(long double v) const {
    const WideScalar rho = widen(exponent);
    const long double lv = std::log(v);
    WideScalar r = widen(coeff) * std::exp(rho * lv);
    for (int i = 0; i < log_power; ++i) r *= lv;
    return r;
  }
};

struct AsymptoticExpansion {
  std::vector<ExpansionTerm> terms;
  /// Unexpanded remainder is o(v^remainder_order).
  Scalar remainder_order{0.0, 0.0};
  /// Known constant content (exponent 0, log power 0).
  Scalar constant{0.0, 0.0};
  /// True when the expansion additionally carries an unknown constant
  /// (C_f of Euler-Maclaurin) that is not included in `constant`.
  bool has_unknown_constant = false;
  Variable var = Variable::x;

  /// Merges near-equal exponents, folds exponent-0/log-0 terms into the
  /// constant, prunes zero coefficients and sorts by decreasing Re(exponent).
  void normalize() {
    std::vector<ExpansionTerm> out;
    for (auto t : terms) {
      t.var = var;
      if (t.coeff == Scalar(0.0, 0.0)) continue;
      if (t.log_power == 0 && std::abs(t.exponent) <= kExponentMerge) {
        constant += t.coeff;
        continue;
      }
      auto it = std::find_if(out.begin(), out.end(), [&](const ExpansionTerm& o) {
        return o.log_power == t.log_power && std::abs(o.exponent - t.exponent) <= kExponentMerge;
      });
      if (it != out.end()) {
        it->coeff += t.coeff;
      } else {
        out.push_back(t);
      }
    }
    std::erase_if(out, [](const ExpansionTerm& t) { return std::abs(t.coeff) == 0.0; });
    std::stable_sort(out.begin(), out.end(), [](const ExpansionTerm& a, const ExpansionTerm& b) {
      if (a.exponent.real() != b.exponent.real()) return a.exponent.real() > b.exponent.real();
      return a.log_power > b.log_power;
    });
    terms = std::move(out);
  }

  /// Sum of the terms plus the known constant at v.
  WideScalar eval(long double v) const {
    CompensatedSum<WideScalar> acc;
    for (const auto& t : terms) acc.add(t.eval(v));
    acc.add(widen(constant));
    return acc.value();
  }

  /// Terms whose exponent has real part >= threshold.
  std::vector<ExpansionTerm> terms_at_or_above(double threshold) const {
    std::vector<ExpansionTerm> r;
    for (const auto& t : terms) {
      if (t.exponent.real() >= threshold - kExponentMerge) r.push_back(t);
    }
    return r;
  }
};

inline nlohmann::json to_json(const ExpansionTerm& t) {
  return {{"coeff_re", t.coeff.real()},
          {"coeff_im", t.coeff.imag()},
          {"exponent_re", t.exponent.real()},
          {"exponent_im", t.exponent.imag()},
          {"log_power", t.log_power}};
}

inline nlohmann::json to_json(const AsymptoticExpansion& e) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : e.terms) terms.push_back(to_json(t));
  return {{"variable", e.var == Variable::x ? "x" : "k"},
          {"terms", terms},
          {"constant_re", e.constant.real()},
          {"constant_im", e.constant.imag()},
          {"unknown_constant", e.has_unknown_constant},
          {"remainder_order_re", e.remainder_order.real()},
          {"remainder_order_im", e.remainder_order.imag()}};
}

}  // namespace gcesaro
