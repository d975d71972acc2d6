#pragma once

// Command-line front end. Every value printed here comes straight from the
// library API with the configuration built from the flags; the CLI only
// parses, dispatches and formats.
//
// Exit codes: 0 success, 1 no limit found (NotConvergent, FitFailure, ...),
// 2 usage error, 3 pole at a point query.

#include "asymptotics.hpp"
#include "climits.hpp"
#include "core.hpp"
#include "integrals.hpp"
#include "seqfun.hpp"
#include "zeta.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace gcesaro::cli {

class usage_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Series grammar
//
//   series := ones | alt_ones | n | alt_n | n_pow(re,im) | alt_n_pow(re,im)
//           | zero_padded(series, 0/1, 0/1, ...)

namespace detail {

class SeriesParser {
 public:
  explicit SeriesParser(std::string text) : s_(std::move(text)) {}

  SeriesTerms parse() {
    SeriesTerms t = series();
    skip_ws();
    if (pos_ != s_.size()) fail("trailing characters");
    return t;
  }

 private:
  std::string s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& why) const {
    throw usage_error("bad series '" + s_ + "': " + why + " at position " + std::to_string(pos_));
  }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  std::string ident() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    if (start == pos_) fail("expected a series name");
    return s_.substr(start, pos_ - start);
  }
  double number() {
    skip_ws();
    const char* begin = s_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("expected a number");
    pos_ += static_cast<std::size_t>(end - begin);
    return v;
  }
  Scalar complex_args() {
    expect('(');
    const double re = number();
    double im = 0;
    if (accept(',')) im = number();
    expect(')');
    return make_scalar(re, im);
  }
  SeriesTerms series() {
    const std::string name = ident();
    // Non-alternating power series carry their Euler-Maclaurin expansion;
    // every other series is summed by pure averaging.
    if (name == "ones") return with_psum_expansion(series::ones(), 0.0);
    if (name == "alt_ones") return series::alt_ones();
    if (name == "n") return with_psum_expansion(series::naturals(), -1.0);
    if (name == "alt_n") return series::alt_naturals();
    if (name == "n_pow") {
      const Scalar s = complex_args();
      return s.real() <= 1 ? with_psum_expansion(series::n_pow_minus_s(s), s) : series::n_pow_minus_s(s);
    }
    if (name == "alt_n_pow") return series::alt_n_pow_minus_s(complex_args());
    if (name == "zero_padded") {
      expect('(');
      SeriesTerms inner = series();
      inner.expansion.reset();  // padding changes the p-sum's expansion
      std::vector<int> pattern;
      while (accept(',')) {
        const double p = number();
        if (p != 0 && p != 1) fail("pattern entries must be 0 or 1");
        pattern.push_back(static_cast<int>(p));
      }
      expect(')');
      if (pattern.empty()) fail("zero_padded needs a pattern");
      return series::zero_padded(inner, pattern);
    }
    fail("unknown series '" + name + "'");
  }
};

inline std::vector<double> parse_numbers(const std::string& text, char sep) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (end == item.c_str() || *end != '\0' || !std::isfinite(v)) throw usage_error("bad number '" + item + "'");
    out.push_back(v);
  }
  return out;
}

/// "re" or "re,im".
inline Scalar parse_complex(const std::string& text) {
  const auto v = parse_numbers(text, ',');
  if (v.empty() || v.size() > 2) throw usage_error("expected re[,im], got '" + text + "'");
  return {v[0], v.size() == 2 ? v[1] : 0.0};
}

/// "lo:hi:count" (count >= 1; a single point when count == 1 uses lo).
inline std::vector<double> parse_range(const std::string& text) {
  const auto v = parse_numbers(text, ':');
  if (v.size() == 1) return {v[0]};
  if (v.size() != 3) throw usage_error("expected lo:hi:count, got '" + text + "'");
  const double count = v[2];
  if (count < 1 || count != std::floor(count)) throw usage_error("grid count must be a positive integer");
  const auto n = static_cast<int>(count);
  std::vector<double> r;
  for (int i = 0; i < n; ++i) r.push_back(n == 1 ? v[0] : v[0] + (v[1] - v[0]) * i / (n - 1));
  return r;
}

inline ExpansionTerm parse_term(const std::string& text) {
  const auto v = parse_numbers(text, ',');
  if (v.size() != 4 && v.size() != 5) throw usage_error("expected c_re,c_im,rho_re,rho_im[,log_power]");
  const int m = v.size() == 5 ? static_cast<int>(v[4]) : 0;
  if (m < 0 || (v.size() == 5 && v[4] != m)) throw usage_error("log power must be a nonnegative integer");
  return {Scalar(v[0], v[1]), Scalar(v[2], v[3]), m, Variable::x};
}

// ---------------------------------------------------------------------------
// Integral builtins and domain JSON

inline Integrand builtin_integrand(const std::string& text) {
  const auto open = text.find('(');
  const std::string name = text.substr(0, open);
  std::vector<double> args;
  if (open != std::string::npos) {
    if (text.back() != ')') throw usage_error("bad integrand '" + text + "'");
    args = parse_numbers(text.substr(open + 1, text.size() - open - 2), ',');
  }
  auto need = [&](std::size_t n) {
    if (args.size() != n) throw usage_error("integrand '" + name + "' takes " + std::to_string(n) + " arguments");
  };
  if (name == "exp_neg") {
    need(0);
    return [](double x) { return Scalar(std::exp(-x)); };
  }
  if (name == "inv_x") {
    need(0);
    return [](double x) { return Scalar(1.0 / x); };
  }
  if (name == "inv_1px2") {
    need(0);
    return [](double x) { return Scalar(1.0 / (1.0 + x * x)); };
  }
  if (name == "mellin_kernel") {
    need(2);
    const WideScalar sm1(args[0] - 1.0L, args[1]);
    return [sm1](double x) { return narrow(std::exp(sm1 * std::log(static_cast<long double>(x))) / (1.0L + x)); };
  }
  if (name == "abs_dist_pow") {
    need(2);
    const double z0 = args[0], beta = args[1];
    return [z0, beta](double x) { return Scalar(std::pow(std::abs(x - z0), beta)); };
  }
  throw usage_error("unknown integrand '" + name + "' (exp_neg, inv_x, inv_1px2, mellin_kernel(re,im), abs_dist_pow(z0,beta))");
}

/// [[c_re, c_im, rho_re, rho_im], ...] as an integrand expansion.
inline AsymptoticExpansion expansion_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw usage_error("expansion must be an array of [c_re, c_im, rho_re, rho_im]");
  AsymptoticExpansion e;
  for (const auto& t : j) {
    if (!t.is_array() || t.size() != 4) throw usage_error("expansion term must be [c_re, c_im, rho_re, rho_im]");
    e.terms.push_back({Scalar(t[0].get<double>(), t[1].get<double>()), Scalar(t[2].get<double>(), t[3].get<double>()),
                       0, Variable::x});
  }
  return e;
}

/// {"points": [{"kind": "zero"|"infinity"|"interior", "z0": .., "expansion": [...],
///              "left": [...], "fit": [rho, ...]}]}
inline DomainSpec domain_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw usage_error(std::string("bad --spec JSON: ") + e.what());
  }
  if (!j.is_object()) throw usage_error("--spec must be a JSON object {\"points\": [...]}");
  for (const auto& [key, unused] : j.items()) {
    if (key != "points") throw usage_error("--spec: unknown key '" + key + "'");
  }
  DomainSpec spec;
  if (!j.contains("points")) return spec;
  try {
    for (const auto& p : j.at("points")) {
      SingularPoint sp;
      const std::string kind = p.at("kind").get<std::string>();
      if (kind == "zero") {
        sp.kind = PointKind::at_zero;
      } else if (kind == "infinity") {
        sp.kind = PointKind::at_infinity;
      } else if (kind == "interior") {
        sp.kind = PointKind::interior;
        sp.z0 = p.at("z0").get<double>();
      } else {
        throw usage_error("unknown point kind '" + kind + "'");
      }
      if (p.contains("expansion")) sp.expansion = expansion_from_json(p.at("expansion"));
      if (p.contains("left")) sp.left_expansion = expansion_from_json(p.at("left"));
      if (p.contains("fit")) {
        for (const auto& r : p.at("fit")) {
          sp.fit_model.push_back(r.is_array() ? Scalar(r.at(0).get<double>(), r.at(1).get<double>())
                                              : Scalar(r.get<double>()));
        }
      }
      spec.singular_points.push_back(std::move(sp));
    }
  } catch (const nlohmann::json::exception& e) {
    throw usage_error(std::string("bad --spec JSON: ") + e.what());
  }
  return spec;
}

// ---------------------------------------------------------------------------
// Formatting

inline std::string fmt(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

inline std::string fmt(Scalar z, int digits) {
  if (z.imag() == 0) return fmt(z.real(), digits);
  std::string im = fmt(z.imag(), digits);
  if (im[0] != '-') im = "+" + im;
  return fmt(z.real(), digits) + im + "i";
}

inline std::string describe_terms(const std::vector<ExpansionTerm>& terms, int digits) {
  std::string out;
  for (const auto& t : terms) {
    if (!out.empty()) out += " + ";
    out += "(" + fmt(t.coeff, digits) + ") x^(" + fmt(t.exponent, digits) + ")";
    if (t.log_power) out += " ln^" + std::to_string(t.log_power) + " x";
  }
  return out.empty() ? "none" : out;
}

/// Ordered key/value report rendered as "key: value" lines or one JSON object.
class Report {
 public:
  void add(std::string key, std::string value) { rows_.emplace_back(std::move(key), std::move(value)); }

  void write(std::ostream& out, const std::string& format) const {
    if (format == "json") {
      nlohmann::ordered_json j;
      for (const auto& [k, v] : rows_) j[k] = v;
      out << j.dump(2) << "\n";
      return;
    }
    if (format == "csv") {
      for (std::size_t i = 0; i < rows_.size(); ++i) out << (i ? "," : "") << rows_[i].first;
      out << "\n";
      for (std::size_t i = 0; i < rows_.size(); ++i) out << (i ? "," : "") << rows_[i].second;
      out << "\n";
      return;
    }
    for (const auto& [k, v] : rows_) out << k << ": " << v << "\n";
  }

 private:
  std::vector<std::pair<std::string, std::string>> rows_;
};

struct SweepRow {
  Scalar s;
  std::optional<Scalar> value;
  std::string path;
  std::size_t removed_terms = 0;
  bool anomaly = false;
  std::string status;
};

inline void write_sweep(std::ostream& out, const std::vector<SweepRow>& rows, const std::string& format) {
  if (format == "json") {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
      nlohmann::ordered_json j;
      j["s_re"] = r.s.real();
      j["s_im"] = r.s.imag();
      j["value_re"] = r.value ? nlohmann::ordered_json(r.value->real()) : nlohmann::ordered_json(nullptr);
      j["value_im"] = r.value ? nlohmann::ordered_json(r.value->imag()) : nlohmann::ordered_json(nullptr);
      j["path"] = r.path;
      j["removed_terms"] = r.removed_terms;
      j["anomaly"] = r.anomaly;
      j["status"] = r.status;
      arr.push_back(j);
    }
    out << arr.dump(2) << "\n";
    return;
  }
  const bool csv = format != "table";
  const char* sep = csv ? "," : "\t";
  out << "s_re" << sep << "s_im" << sep << "value_re" << sep << "value_im" << sep << "path" << sep << "removed_terms"
      << sep << "anomaly" << sep << "status\n";
  for (const auto& r : rows) {
    out << fmt(r.s.real(), 17) << sep << fmt(r.s.imag(), 17) << sep << (r.value ? fmt(r.value->real(), 17) : "")
        << sep << (r.value ? fmt(r.value->imag(), 17) : "") << sep << r.path << sep << r.removed_terms << sep
        << (r.anomaly ? "true" : "false") << sep << r.status << "\n";
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Entry point

struct Options {
  std::int64_t horizon = 100000;
  double tol = 1e-8;
  int max_power = 6;
  bool exact = false;
  int digits = 12;
  bool dump_expansion = false;
  bool strict_cutoffs = false;
  std::string format;

  LimitConfig limit_config() const {
    LimitConfig c;
    c.horizon = horizon;
    c.tail_tolerance = tol;
    c.max_pure_power = max_power;
    c.exact_mode = exact;
    c.validate();
    return c;
  }
};

namespace detail {

inline int report_pole(std::ostream& out, const Options& o, const std::string& what, const PoleSignal& p,
                       std::optional<Scalar> residue) {
  Report r;
  r.add("query", what);
  r.add("status", "pole");
  r.add("reason", p.reason);
  if (residue) r.add("residue", fmt(*residue, o.digits));
  r.write(out, o.format);
  return 3;
}

inline void add_cesaro(Report& r, const CesaroResult& res, const Options& o) {
  r.add("value", fmt(value_of(res.limit), o.digits));
  if (res.exact_value) r.add("exact", to_string(*res.exact_value));
  r.add("mechanism", res.mechanism_text());
  r.add("object", res.object_label);
  if (o.dump_expansion) r.add("removed_terms", describe_terms(res.removed_terms, o.digits));
}

/// Residue of the Mellin transform at an integer n from the symmetric
/// quotient R(h) = h (M(n+h) - M(n-h))/2, even in h; two Richardson steps
/// remove the h^2 and h^4 terms.
inline std::optional<Scalar> mellin_residue(Scalar s, const IntegralConfig& cfg) {
  auto quotient = [&](double h) -> std::optional<Scalar> {
    const auto a = mellin_1_over_1px(s + h, cfg), b = mellin_1_over_1px(s - h, cfg);
    if (is_pole(a) || is_pole(b)) return std::nullopt;
    return h * (std::get<Scalar>(a) - std::get<Scalar>(b)) / 2.0;
  };
  const auto r1 = quotient(1e-3), r2 = quotient(2e-3), r4 = quotient(4e-3);
  if (!r1 || !r2 || !r4) return std::nullopt;
  const Scalar a = (4.0 * *r1 - *r2) / 3.0, b = (4.0 * *r2 - *r4) / 3.0;
  return (16.0 * a - b) / 15.0;
}

inline SweepRow sweep_point(const std::string& fn, Scalar s, const std::string& path, const Options& o) {
  SweepRow row;
  row.s = s;
  try {
    const LimitConfig cfg = o.limit_config();
    if (fn == "zeta") {
      const ZetaEvaluation z = path == "discrete" ? zeta_discrete_ext(s, cfg) : zeta(s, cfg);
      row.path = to_string(z.path);
      row.removed_terms = z.removed_terms.size();
      row.anomaly = z.anomaly;
      if (is_pole(z.value)) {
        row.status = "pole";
      } else {
        row.value = std::get<Scalar>(z.value);
        row.status = "ok";
      }
    } else if (fn == "eta") {
      row.path = "continuous-cesaro";
      row.value = eta(s, cfg);
      row.status = "ok";
    } else {
      IntegralConfig ic;
      if (o.strict_cutoffs) ic.mode = CutoffMode::independent;
      const auto res = mellin_1_over_1px_integral(s, ic);
      row.path = "cesaro-integral";
      for (const auto& e : res.per_endpoint) row.removed_terms += e.removed_terms.size();
      if (is_pole(res.value)) {
        row.status = "pole";
      } else {
        row.value = std::get<Scalar>(res.value);
        row.status = "ok";
      }
    }
  } catch (const s_at_pole&) {
    row.status = "pole";
  } catch (const not_convergent&) {
    row.status = "not_convergent";
  } catch (const fit_failure&) {
    row.status = "fit_failure";
  } catch (const cross_check_mismatch&) {
    row.status = "cross_check_mismatch";
  } catch (const error&) {
    row.status = "error";
  }
  return row;
}

}  // namespace detail

/// Runs one command. `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using namespace detail;
  CLI::App app{"Generalised Cesàro summation, limits, zeta/eta, integrals and Mellin transforms", "gcesaro"};
  app.fallthrough();
  app.require_subcommand(1);
  Options o;
  app.add_option("--horizon", o.horizon, "limit horizon H")->check(CLI::Range(std::int64_t{100}, std::int64_t{1} << 40));
  app.add_option("--tol", o.tol, "tail tolerance")->check(CLI::PositiveNumber);
  app.add_option("--max-power", o.max_power, "maximum pure averaging depth")->check(CLI::Range(0, 64));
  app.add_flag("--exact", o.exact, "exact rational mode where available");
  app.add_option("--digits", o.digits, "significant digits in reports")->check(CLI::Range(1, 17));
  app.add_flag("--dump-expansion", o.dump_expansion, "print removed expansion terms");
  app.add_flag("--strict-cutoffs", o.strict_cutoffs, "independent cutoff per integral endpoint");
  app.add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv", "json", "table"}));

  std::string series_text, s_text = "0", path = "continuous", f_text, spec_text = "{}", cutoff_mode;
  std::vector<std::string> term_texts;
  std::string fn, re_text, im_text = "0", table_kind;
  int table_n = 4, table_r = 4;

  auto* sum = app.add_subcommand("sum", "Cesaro sum of a series (strong averaging, or generalised with a registered expansion)");
  sum->add_option("series", series_text, "ones | alt_ones | n | alt_n | n_pow(re,im) | alt_n_pow(re,im) | zero_padded(<series>,p,...)")
      ->required();

  auto* limit = app.add_subcommand("limit", "Generalised limit of a series' p-sum function with a supplied x-expansion");
  limit->add_option("series", series_text, "series whose p-sum function is taken")->required();
  limit->add_option("--term", term_texts, "x-expansion term c_re,c_im,rho_re,rho_im[,log_power] (repeatable)");

  auto* zeta_cmd = app.add_subcommand("zeta", "Riemann zeta");
  zeta_cmd->add_option("--s", s_text, "re,im")->required();
  zeta_cmd->add_option("--path", path, "continuous | discrete | corrected | integral")
      ->check(CLI::IsMember({"continuous", "discrete", "corrected", "integral"}));

  auto* eta_cmd = app.add_subcommand("eta", "Dirichlet eta");
  eta_cmd->add_option("--s", s_text, "re,im")->required();

  auto* integral = app.add_subcommand("integral", "Generalised Cesaro integral over (0, inf)");
  integral->add_option("--f", f_text, "exp_neg | inv_x | inv_1px2 | mellin_kernel(re,im) | abs_dist_pow(z0,beta)")
      ->required();
  integral->add_option("--spec", spec_text, "singular points as JSON");
  integral->add_option("--cutoff-mode", cutoff_mode, "automatic | single | independent")
      ->check(CLI::IsMember({"automatic", "single", "independent"}));

  auto* mellin = app.add_subcommand("mellin", "Mellin transform of 1/(1+x)");
  mellin->add_option("--s", s_text, "re,im")->required();

  auto* sweep = app.add_subcommand("sweep", "Evaluate zeta, eta or mellin over a grid (row-major: re outer, im inner)");
  sweep->add_option("function", fn, "zeta | eta | mellin")->required()->check(CLI::IsMember({"zeta", "eta", "mellin"}));
  sweep->add_option("--re", re_text, "lo:hi:count")->required();
  sweep->add_option("--im", im_text, "lo:hi:count");
  sweep->add_option("--path", path, "zeta path: continuous | discrete")->check(CLI::IsMember({"continuous", "discrete"}));

  auto* table = app.add_subcommand("table", "Closed-form tables");
  table->add_option("kind", table_kind, "clim_k_alpha | clim_x_alpha | bernoulli | zeta_integer")
      ->required()
      ->check(CLI::IsMember({"clim_k_alpha", "clim_x_alpha", "bernoulli", "zeta_integer"}));
  table->add_option("--max-n", table_n, "largest n (or -s0)")->check(CLI::Range(0, 60));
  table->add_option("--max-r", table_r, "largest r")->check(CLI::Range(0, 60));

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(std::move(rev));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    if (o.format.empty()) o.format = *sweep ? "csv" : "table";
    const LimitConfig cfg = o.limit_config();

    if (*sum || *limit) {
      const SeriesTerms terms = SeriesParser(series_text).parse();
      CesaroResult res;
      if (*limit && !term_texts.empty()) {
        AsymptoticExpansion e;
        for (const auto& t : term_texts) e.terms.push_back(parse_term(t));
        res = cesaro_limit(psum_function(terms), e, cfg);
      } else {
        res = cesaro_sum(terms, std::nullopt, cfg);
      }
      if (const auto* p = std::get_if<PoleSignal>(&res.limit)) return report_pole(out, o, series_text, *p, std::nullopt);
      Report r;
      add_cesaro(r, res, o);
      r.write(out, o.format);
      return 0;
    }

    if (*zeta_cmd) {
      const Scalar s = parse_complex(s_text);
      Report r;
      if (path == "corrected" || path == "integral") {
        const auto s0 = snap_integer(s, 0.0);
        if (!s0 || *s0 > 0) throw usage_error("--path " + path + " needs s at a non-positive integer");
        if (path == "integral") {
          const Rational q = zeta_integral_rep(static_cast<int>(*s0));
          r.add("value", fmt(to_double(q), o.digits));
          r.add("exact", to_string(q));
        } else {
          r.add("value", fmt(zeta_discrete_corrected(static_cast<int>(*s0), cfg), o.digits));
        }
        r.add("path", path == "integral" ? to_string(ZetaPath::integral_rep) : to_string(ZetaPath::discrete_corrected));
        r.write(out, o.format);
        return 0;
      }
      const ZetaEvaluation z = path == "discrete" ? zeta_discrete_ext(s, cfg) : zeta(s, cfg);
      if (const auto* p = std::get_if<PoleSignal>(&z.value)) {
        return report_pole(out, o, "zeta(" + fmt(s, o.digits) + ")", *p, zeta_residue_at_1(cfg));
      }
      r.add("value", fmt(std::get<Scalar>(z.value), o.digits));
      r.add("path", to_string(z.path));
      if (z.anomaly) r.add("anomaly", "true");
      if (z.cross_check) r.add("cross_check_gap", fmt(z.cross_check_gap, 3));
      if (o.dump_expansion) {
        r.add("removed_terms", describe_terms(z.removed_terms, o.digits));
        if (z.q_used) r.add("q", z.q_used->describe());
      }
      r.write(out, o.format);
      return 0;
    }

    if (*eta_cmd) {
      Report r;
      r.add("value", fmt(eta(parse_complex(s_text), cfg), o.digits));
      r.add("path", "continuous-cesaro");
      r.write(out, o.format);
      return 0;
    }

    if (*integral || *mellin) {
      IntegralConfig ic;
      if (o.strict_cutoffs) ic.mode = CutoffMode::independent;
      if (cutoff_mode == "single") ic.mode = CutoffMode::single;
      if (cutoff_mode == "independent") ic.mode = CutoffMode::independent;
      RegularizedIntegral res;
      std::string what;
      if (*mellin) {
        const Scalar s = parse_complex(s_text);
        res = mellin_1_over_1px_integral(s, ic);
        what = "mellin(" + fmt(s, o.digits) + ")";
        if (const auto* p = std::get_if<PoleSignal>(&res.value)) {
          return report_pole(out, o, what, *p, mellin_residue(s, ic));
        }
      } else {
        res = cesaro_integral(builtin_integrand(f_text), domain_from_json(spec_text), ic);
        what = f_text;
        if (const auto* p = std::get_if<PoleSignal>(&res.value)) return report_pole(out, o, what, *p, std::nullopt);
      }
      Report r;
      r.add("value", fmt(std::get<Scalar>(res.value), o.digits));
      r.add("cutoff_variables", std::to_string(res.cutoff_variables));
      r.add("cutoff_mode", to_string(res.mode_used));
      if (o.dump_expansion) {
        for (const auto& e : res.per_endpoint) {
          r.add("endpoint " + e.point, e.source + "; finite part " + fmt(e.finite_part, o.digits) + "; removed " +
                                           describe_terms(e.removed_terms, o.digits));
        }
      }
      r.write(out, o.format);
      return 0;
    }

    if (*sweep) {
      const auto res = parse_range(re_text), ims = parse_range(im_text);
      if (res.empty() || ims.empty()) throw usage_error("empty grid");
      std::vector<SweepRow> rows;
      for (double re : res) {
        for (double im : ims) rows.push_back(sweep_point(fn, Scalar(re, im), path, o));
      }
      write_sweep(out, rows, o.format);
      return 0;
    }

    if (*table) {
      if (o.format == "json") {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        auto push = [&](nlohmann::ordered_json j) { arr.push_back(std::move(j)); };
        if (table_kind == "clim_k_alpha" || table_kind == "clim_x_alpha") {
          for (int n = 0; n <= table_n; ++n) {
            for (int r = 0; r <= table_r; ++r) {
              const Rational q = table_kind == "clim_k_alpha" ? clim_k_alpha_exact(n, r) : clim_x_alpha_exact(n, r);
              push({{"n", n}, {"r", r}, {"value", to_string(q)}});
            }
          }
        } else if (table_kind == "bernoulli") {
          for (int n = 0; n <= table_n; ++n) push({{"n", n}, {"value", to_string(bernoulli(n))}});
        } else {
          for (int n = 0; n <= table_n; ++n) push({{"s", -n}, {"value", to_string(zeta_integral_rep(-n))}});
        }
        out << arr.dump(2) << "\n";
        return 0;
      }
      const char* sep = o.format == "csv" ? "," : "\t";
      if (table_kind == "clim_k_alpha" || table_kind == "clim_x_alpha") {
        out << "n" << sep << "r" << sep << "value\n";
        for (int n = 0; n <= table_n; ++n) {
          for (int r = 0; r <= table_r; ++r) {
            const Rational q = table_kind == "clim_k_alpha" ? clim_k_alpha_exact(n, r) : clim_x_alpha_exact(n, r);
            out << n << sep << r << sep << to_string(q) << "\n";
          }
        }
      } else if (table_kind == "bernoulli") {
        out << "n" << sep << "value\n";
        for (int n = 0; n <= table_n; ++n) out << n << sep << to_string(bernoulli(n)) << "\n";
      } else {
        out << "s" << sep << "value\n";
        for (int n = 0; n <= table_n; ++n) out << -n << sep << to_string(zeta_integral_rep(-n)) << "\n";
      }
      return 0;
    }
  } catch (const usage_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const domain_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const s_at_pole& e) {
    err << "pole: " << e.what() << "\n";
    return 3;
  } catch (const error& e) {
    err << "no value: " << e.what() << "\n";
    return 1;
  }
  err << app.help();
  return 2;
}

}  // namespace gcesaro::cli
