#include <gcesaro/integrals.hpp>

#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace gcesaro;

namespace {

constexpr double kPi = std::numbers::pi;

Scalar pi_over_sin(Scalar s) { return kPi / std::sin(kPi * s); }

/// \int_0^inf x^{s-1}/(1+x) dx for 0 < Re s < 1 by the trapezoid rule after
/// x = e^t. The integrand e^{st}/(1+e^t) is analytic in a strip around the
/// real axis and decays exponentially both ways, so the rule converges
/// geometrically in the step.
Scalar mellin_trapezoid(Scalar s) {
  const double h = 0.01;
  const double lim = 40.0 / std::min(s.real(), 1.0 - s.real());
  std::complex<long double> acc = 0;
  const std::complex<long double> sl = widen(s);
  for (long i = -static_cast<long>(lim / h); i <= static_cast<long>(lim / h); ++i) {
    const long double t = h * i;
    acc += std::exp(sl * t) / (1.0L + std::exp(t));
  }
  return narrow(acc * static_cast<long double>(h));
}

const ExpansionTerm* find_term(const EndpointResult& r, Scalar exponent, int log_power) {
  for (const auto& t : r.removed_terms) {
    if (std::abs(t.exponent - exponent) < 1e-9 && t.log_power == log_power) return &t;
  }
  return nullptr;
}

AsymptoticExpansion power_series(std::vector<std::pair<Scalar, Scalar>> coeff_exponent) {
  AsymptoticExpansion e;
  for (auto [c, rho] : coeff_exponent) e.terms.push_back({c, rho, 0, Variable::x});
  return e;
}

}  // namespace

TEST(Integral, ExpDecayIsClassical) {
  const auto r = cesaro_integral([](double x) { return Scalar(std::exp(-x)); }, DomainSpec{});
  EXPECT_NEAR(std::abs(value_of(r.value) - 1.0), 0.0, 1e-12);
  ASSERT_EQ(r.per_endpoint.size(), 2u);
  for (const auto& e : r.per_endpoint) {
    EXPECT_EQ(e.source, "classical");
    EXPECT_TRUE(e.removed_terms.empty());
    EXPECT_FALSE(e.log_flag);
  }
  EXPECT_EQ(r.cutoff_variables, 1);
}

// Random combinations of terms with closed-form integrals over (0, inf):
// a e^{-bx} -> a/b, c/(1+x^2) -> c pi/2, d x^p e^{-x} -> d Gamma(p+1) and
// g/(1+x)^q -> g/(q-1).
TEST(Integral, AgreesWithClassicalOnIntegrableFunctions) {
  std::mt19937_64 rng(20260415);
  std::uniform_real_distribution<double> coef(-2.0, 2.0), rate(0.3, 3.0), power(-0.6, 2.0), tail(1.5, 4.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = coef(rng), b = rate(rng), c = coef(rng), d = coef(rng), p = power(rng), g = coef(rng),
                 q = tail(rng);
    const Integrand f = [=](double x) {
      return Scalar(a * std::exp(-b * x) + c / (1 + x * x) + d * std::pow(x, p) * std::exp(-x) +
                    g * std::pow(1 + x, -q));
    };
    const double expected = a / b + c * kPi / 2 + d * boost::math::tgamma(p + 1) + g / (q - 1);
    const auto r = cesaro_integral(f, DomainSpec{});
    EXPECT_NEAR(std::abs(value_of(r.value) - expected), 0.0, 1e-6)
        << "trial " << trial << " a=" << a << " b=" << b << " c=" << c << " d=" << d << " p=" << p << " g=" << g
        << " q=" << q;
  }
}

TEST(Integral, ConstantPlusDecayAtInfinity) {
  // \int_0^X (1 + e^{-x}) dx = X + 1 - e^{-X}: the X term goes, 1 remains.
  const Integrand f = [](double x) { return Scalar(1.0 + std::exp(-x)); };
  const DomainSpec spec{{SingularPoint::infinity(power_series({{1.0, 0.0}}))}};
  const auto r = cesaro_integral(f, spec);
  EXPECT_NEAR(std::abs(value_of(r.value) - 1.0), 0.0, 1e-9);
  const auto& inf = r.per_endpoint.back();
  EXPECT_EQ(inf.point, "inf");
  ASSERT_NE(find_term(inf, 1.0, 0), nullptr);
  EXPECT_FALSE(inf.log_flag);
  EXPECT_TRUE(inf.annihilator.has_value());
}

TEST(Integral, ReciprocalIsPoleAtBothEnds) {
  const Integrand f = [](double x) { return Scalar(1.0 / x); };
  // Near 0 with t = 1/x the integrand is t; near infinity it is x^{-1}.
  const DomainSpec analytic{{SingularPoint::zero(power_series({{1.0, 1.0}})),
                             SingularPoint::infinity(power_series({{1.0, -1.0}}))}};
  auto zero_fit = SingularPoint::zero();
  zero_fit.fit_model = {0.0};
  auto inf_fit = SingularPoint::infinity();
  inf_fit.fit_model = {0.0};
  const DomainSpec fitted{{zero_fit, inf_fit}};
  for (const auto* spec : {&analytic, &fitted}) {
    const auto r = cesaro_integral(f, *spec);
    ASSERT_TRUE(is_pole(r.value));
    ASSERT_EQ(r.per_endpoint.size(), 2u);
    EXPECT_TRUE(r.per_endpoint[0].log_flag);
    EXPECT_TRUE(r.per_endpoint[1].log_flag);
    EXPECT_FALSE(r.per_endpoint[0].annihilator.has_value());
    EXPECT_EQ(r.cutoff_variables, 2);
    EXPECT_EQ(r.mode_used, CutoffMode::independent);
    const auto* l0 = find_term(r.per_endpoint[0], 0.0, 1);
    const auto* linf = find_term(r.per_endpoint[1], 0.0, 1);
    ASSERT_NE(l0, nullptr);
    ASSERT_NE(linf, nullptr);
    EXPECT_NEAR(std::abs(l0->coeff - 1.0), 0.0, 1e-6);
    EXPECT_NEAR(std::abs(linf->coeff - 1.0), 0.0, 1e-6);
  }
  // With one cutoff the two ln X add to 2 ln X: still a pole, never 0.
  IntegralConfig single;
  single.mode = CutoffMode::single;
  EXPECT_TRUE(is_pole(cesaro_integral(f, analytic, single).value));
}

TEST(Integral, LogFlagIndependentOfCutoffMode) {
  // x/(1+x^2) is bounded near 0 and ~ 1/x on the tail.
  const Integrand f = [](double x) { return Scalar(std::exp(-x) + x / (1 + x * x)); };
  auto inf = SingularPoint::infinity();
  inf.fit_model = {0.0};
  const DomainSpec spec{{inf}};
  std::vector<std::vector<bool>> flags;
  for (auto mode : {CutoffMode::single, CutoffMode::independent, CutoffMode::automatic}) {
    IntegralConfig cfg;
    cfg.mode = mode;
    const auto r = cesaro_integral(f, spec, cfg);
    EXPECT_TRUE(is_pole(r.value)) << to_string(mode);
    std::vector<bool> fl;
    for (const auto& e : r.per_endpoint) fl.push_back(e.log_flag);
    flags.push_back(fl);
  }
  EXPECT_EQ(flags[0], flags[1]);
  EXPECT_EQ(flags[0], flags[2]);
  EXPECT_EQ(flags[0], (std::vector<bool>{false, true}));
}

TEST(Integral, InteriorPowerSingularity) {
  // \int_{1/X}^1 u^{-3/2} du = 2 sqrt(X) - 2 and \int_{1/X}^inf u^{-3/2} du =
  // 2 sqrt(X), so the finite part of \int_0^inf |x-1|^{-3/2} dx is -2.
  const Integrand f = [](double x) { return Scalar(std::pow(std::abs(x - 1), -1.5)); };
  const DomainSpec analytic{{SingularPoint::interior(1.0, power_series({{1.0, 1.5}}))}};
  const auto r = cesaro_integral(f, analytic);
  EXPECT_NEAR(std::abs(value_of(r.value) + 2.0), 0.0, 1e-8);
  ASSERT_EQ(r.per_endpoint.size(), 4u);
  EXPECT_EQ(r.per_endpoint[1].point, "1-");
  EXPECT_EQ(r.per_endpoint[2].point, "1+");
  for (int i : {1, 2}) {
    const auto* t = find_term(r.per_endpoint[static_cast<std::size_t>(i)], 0.5, 0);
    ASSERT_NE(t, nullptr);
    EXPECT_NEAR(std::abs(t->coeff - 2.0), 0.0, 1e-12);
  }

  auto fitted = SingularPoint::interior(1.0);
  fitted.fit_model = {0.5};
  const auto rf = cesaro_integral(f, DomainSpec{{fitted}});
  EXPECT_NEAR(std::abs(value_of(rf.value) + 2.0), 0.0, 1e-6);
}

TEST(Integral, PrincipalValueIsNotSilentlyTaken) {
  // Near x = 1 the integrand is +-e^{-1}/u on the two sides; with one cutoff
  // the two ln X cancel, which is exactly the cancellation that is refused.
  const Integrand f = [](double x) { return Scalar(std::exp(-x) / (x - 1)); };
  // Right side x = 1 + 1/t: e^{-1} t e^{-1/t} = e^{-1} sum (-1)^n t^{1-n}/n!.
  // Left side x = 1 - 1/t: -e^{-1} t e^{1/t} = -e^{-1} sum t^{1-n}/n!.
  AsymptoticExpansion right, left;
  double fact = 1;
  for (int n = 0; n < 25; ++n) {
    if (n > 0) fact *= n;
    right.terms.push_back({Scalar((n % 2 ? -1.0 : 1.0) / (std::numbers::e * fact)), 1.0 - n, 0, Variable::x});
    left.terms.push_back({Scalar(-1.0 / (std::numbers::e * fact)), 1.0 - n, 0, Variable::x});
  }
  const DomainSpec spec{{SingularPoint::interior(1.0, right, left)}};

  IntegralConfig single;
  single.mode = CutoffMode::single;
  EXPECT_THROW(cesaro_integral(f, spec, single), illegal_cancellation);

  const auto r = cesaro_integral(f, spec);
  ASSERT_TRUE(is_pole(r.value));
  EXPECT_EQ(r.mode_used, CutoffMode::independent);
  EXPECT_EQ(r.cutoff_variables, 2);
  EXPECT_TRUE(r.per_endpoint[1].log_flag);
  EXPECT_TRUE(r.per_endpoint[2].log_flag);

  // The finite parts at a common cutoff still add up to the principal value
  // PV \int_0^inf e^{-x}/(x-1) dx = -Ei(1)/e.
  Scalar sum = 0;
  for (const auto& e : r.per_endpoint) sum += e.finite_part;
  EXPECT_NEAR(std::abs(sum + boost::math::expint(1.0) / std::numbers::e), 0.0, 1e-8);
}

TEST(Integral, DomainValidation) {
  const Integrand f = [](double x) { return Scalar(std::exp(-x)); };
  EXPECT_THROW(cesaro_integral(f, DomainSpec{{SingularPoint::interior(0.0)}}), domain_error);
  EXPECT_THROW(cesaro_integral(f, DomainSpec{{SingularPoint::interior(2.0), SingularPoint::interior(1.0)}}),
               domain_error);
  EXPECT_THROW(cesaro_integral(f, DomainSpec{{SingularPoint::zero(), SingularPoint::zero()}}), domain_error);
  AsymptoticExpansion with_log;
  with_log.terms.push_back({1.0, -1.0, 1, Variable::x});
  EXPECT_THROW(cesaro_integral(f, DomainSpec{{SingularPoint::infinity(with_log)}}), domain_error);
}

TEST(EndpointFit, ConstantPlusDecay) {
  std::vector<std::pair<double, Scalar>> samples;
  for (int i = 0; i < 30; ++i) {
    const double X = 10 * std::pow(10.0, 3.0 * i / 29);
    samples.emplace_back(X, 3.0 + 1.0 / X);
  }
  const auto fit = fit_endpoint_expansion(samples, {});
  EXPECT_NEAR(std::abs(fit.expansion.constant - 3.0), 0.0, 1e-10);
  EXPECT_TRUE(fit.expansion.terms.empty());
  EXPECT_LE(fit.residual, 1e-8);
}

TEST(EndpointFit, QuadraticPlusConstant) {
  std::vector<std::pair<double, Scalar>> samples;
  for (int i = 0; i < 30; ++i) {
    const double X = 10 * std::pow(10.0, 3.0 * i / 29);
    samples.emplace_back(X, X * X / 2 + 7);
  }
  const auto fit = fit_endpoint_expansion(samples, {2.0});
  ASSERT_EQ(fit.expansion.terms.size(), 1u);
  EXPECT_NEAR(std::abs(fit.expansion.terms[0].coeff - 0.5), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(fit.expansion.constant - 7.0), 0.0, 1e-6);
}

TEST(EndpointFit, UnmodelledLogIsRejected) {
  std::vector<std::pair<double, Scalar>> samples;
  for (int i = 0; i < 30; ++i) {
    const double X = 10 * std::pow(10.0, 3.0 * i / 29);
    samples.emplace_back(X, std::log(X) + 1);
  }
  EXPECT_THROW(fit_endpoint_expansion(samples, {}), fit_failure);
  // Modelled, the same data fits with a ln X term.
  const auto fit = fit_endpoint_expansion(samples, {0.0});
  ASSERT_EQ(fit.expansion.terms.size(), 1u);
  EXPECT_EQ(fit.expansion.terms[0].log_power, 1);
  EXPECT_NEAR(std::abs(fit.expansion.constant - 1.0), 0.0, 1e-8);
}

TEST(EndpointFit, RejectsThinSampling) {
  std::vector<std::pair<double, Scalar>> narrow_span;
  for (int i = 0; i < 30; ++i) narrow_span.emplace_back(10 + i, 1.0);
  EXPECT_THROW(fit_endpoint_expansion(narrow_span, {}), domain_error);
  std::vector<std::pair<double, Scalar>> few{{10, 1.0}, {1e4, 1.0}};
  EXPECT_THROW(fit_endpoint_expansion(few, {2.0}), domain_error);
}

TEST(Mellin, HalfIsPi) {
  const auto r = mellin_1_over_1px_integral(0.5);
  EXPECT_NEAR(std::abs(value_of(r.value) - kPi), 0.0, 1e-6);
  for (const auto& e : r.per_endpoint) EXPECT_EQ(e.source, "expansion");
}

TEST(Mellin, StripMatchesDirectQuadrature) {
  for (double re : {0.15, 0.3, 0.45, 0.6, 0.8}) {
    for (double im : {0.0, 0.4}) {
      const Scalar s(re, im);
      const Scalar v = value_of(mellin_1_over_1px(s));
      EXPECT_NEAR(std::abs(v - mellin_trapezoid(s)), 0.0, 1e-6) << s;
      EXPECT_NEAR(std::abs(v - pi_over_sin(s)), 0.0, 1e-6) << s;
    }
  }
}

// Reflection. For x^s/(1+x) = x^{s-1} - x^{s-1}/(1+x), the cutoff integral
// of x^{s-1} over [1/X, X] is (X^s - X^{-s})/s, a pure combination of
// eigensequences with eigenvalues != 1 when s is not an integer, so its
// generalised limit is 0. Linearity then gives M(s+1) = -M(s).
TEST(Mellin, Reflection) {
  for (Scalar s : {Scalar(0.3), Scalar(0.5), Scalar(0.7), Scalar(0.5, 0.2)}) {
    const Scalar a = value_of(mellin_1_over_1px(s));
    const Scalar b = value_of(mellin_1_over_1px(s + 1.0));
    EXPECT_NEAR(std::abs(a + b), 0.0, 1e-4) << s;
  }
  EXPECT_NEAR(std::abs(value_of(mellin_1_over_1px(1.5)) + kPi), 0.0, 1e-5);
}

TEST(Mellin, PoleSet) {
  for (int n = -2; n <= 2; ++n) {
    EXPECT_TRUE(is_pole(mellin_1_over_1px(double(n)))) << n;
  }
  for (double s : {-1.5, -0.5, 0.5, 1.5}) {
    const auto v = mellin_1_over_1px(s);
    ASSERT_FALSE(is_pole(v)) << s;
    EXPECT_NEAR(std::abs(value_of(v) - pi_over_sin(s)), 0.0, 1e-6) << s;
  }
}

TEST(Mellin, ContinuationOffTheRealAxis) {
  for (Scalar s : {Scalar(-0.7, 0.3), Scalar(2.4, -0.5), Scalar(-3.2, 0.1)}) {
    EXPECT_NEAR(std::abs(value_of(mellin_1_over_1px(s)) - pi_over_sin(s)), 0.0, 1e-6) << s;
  }
}
