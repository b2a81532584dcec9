#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "bioen/numerics.hpp"
#include "bioen/quadrature.hpp"
#include "bioen/signed_log.hpp"

using namespace bioen;

TEST_CASE("log_gamma values") {
    CHECK(log_gamma(1.0) == Catch::Approx(0.0).margin(1e-15));
    CHECK(log_gamma(2.0) == Catch::Approx(0.0).margin(1e-15));
    // ln Gamma(1/2) = ln sqrt(pi)
    CHECK(log_gamma(0.5) == Catch::Approx(0.57236494292470008707).epsilon(1e-13));
    CHECK_THROWS_AS(log_gamma(0.0), std::domain_error);
    CHECK_THROWS_AS(log_gamma(-2.5), std::domain_error);
    CHECK_THROWS_AS(log_gamma(std::numeric_limits<double>::infinity()), std::domain_error);
}

TEST_CASE("log_gamma recurrence property (randomized)") {
    std::mt19937 gen(1234);
    std::uniform_real_distribution<double> expo(std::log(0.1), std::log(1e5));
    for (int i = 0; i < 500; ++i) {
        const double x = std::exp(expo(gen));
        const double lhs = log_gamma(x + 1.0) - log_gamma(x);
        const double scale = std::max({1.0, std::fabs(log_gamma(x + 1.0)), std::fabs(log_gamma(x))});
        CHECK(std::fabs(lhs - std::log(x)) <= 1e-12 * scale);
    }
}

TEST_CASE("recip_gamma poles and values") {
    CHECK(recip_gamma(0.0) == 0.0);
    CHECK(recip_gamma(-3.0) == 0.0);
    CHECK(recip_gamma(3.0) == Catch::Approx(0.5).epsilon(1e-14));
    for (double x = 0.25; x <= 50.0; x += 0.5)
        CHECK(recip_gamma(x) * std::exp(log_gamma(x)) == Catch::Approx(1.0).epsilon(1e-12));
    // negative non-integer arguments keep the sign of 1/Gamma
    CHECK(recip_gamma(-0.5) == Catch::Approx(1.0 / std::tgamma(-0.5)).epsilon(1e-12));
    CHECK(recip_gamma(-1.5) == Catch::Approx(1.0 / std::tgamma(-1.5)).epsilon(1e-12));
}

TEST_CASE("log_pochhammer") {
    CHECK(log_pochhammer(5.7, 0).sign == 1);
    CHECK(log_pochhammer(5.7, 0).log_mag == 0.0);
    const auto p23 = log_pochhammer(2.0, 3);
    CHECK(p23.sign == 1);
    CHECK(p23.to_real() == Catch::Approx(24.0).epsilon(1e-13));
    const auto pneg = log_pochhammer(-1.5, 2);
    CHECK(pneg.sign == 1);
    CHECK(pneg.to_real() == Catch::Approx(0.75).epsilon(1e-13));
    CHECK(log_pochhammer(-2.0, 4).sign == 0); // factor hits zero at a+2
    CHECK(log_pochhammer(-2.5, 2).sign == 1); // (-2.5)(-1.5)
    CHECK(log_pochhammer(-2.5, 3).sign == -1);
}

TEST_CASE("log_pochhammer recurrence property") {
    std::mt19937 gen(99);
    std::uniform_real_distribution<double> au(-4.0, 8.0);
    for (int i = 0; i < 200; ++i) {
        const double a = au(gen);
        const int m = static_cast<int>(gen() % 9);
        const auto lhs = log_pochhammer(a, m + 1);
        const auto rhs = log_pochhammer(a, m) * SignedLogValue::from_real(a + m);
        CHECK(lhs.sign == rhs.sign);
        if (lhs.sign != 0)
            CHECK(std::fabs(lhs.log_mag - rhs.log_mag) <= 1e-12 * std::max(1.0, std::fabs(rhs.log_mag)));
    }
}

TEST_CASE("SignedLogValue round trip and algebra") {
    std::mt19937 gen(7);
    std::uniform_real_distribution<double> expo(-30.0 * std::log(10.0), 30.0 * std::log(10.0));
    for (int i = 0; i < 300; ++i) {
        const double x = (gen() % 2 ? 1.0 : -1.0) * std::exp(expo(gen));
        CHECK(SignedLogValue::from_real(x).to_real() == Catch::Approx(x).epsilon(1e-14));
    }
    // full double range: storage quantization of ln|x| bounds this at ~6e-14
    for (double x : {1e-300, 1e-200, 1e200, 1e300})
        CHECK(SignedLogValue::from_real(x).to_real() == Catch::Approx(x).epsilon(2e-13));
    CHECK(SignedLogValue::from_real(0.0).sign == 0);
    CHECK(SignedLogValue::from_real(0.0).to_real() == 0.0);

    const auto a = SignedLogValue::from_real(-3.0);
    const auto b = SignedLogValue::from_real(7.0);
    CHECK((a * b).sign == -1);
    CHECK((a * b).to_real() == Catch::Approx(-21.0).epsilon(1e-14));
    CHECK((a * b).log_mag == Catch::Approx(a.log_mag + b.log_mag));
    CHECK((a + b).to_real() == Catch::Approx(4.0).epsilon(1e-13));
    CHECK((a + a).to_real() == Catch::Approx(-6.0).epsilon(1e-13));
    CHECK((a + SignedLogValue::from_real(3.0)).sign == 0);

    // same-sign add never decreases log_mag below the larger operand
    const auto s = a + a;
    CHECK(s.log_mag >= a.log_mag);
}

TEST_CASE("SignedLogSum rescaling and cancellation tracking") {
    SignedLogSum s;
    s.add(SignedLogValue::from_log(1, 500.0));
    s.add(SignedLogValue::from_log(-1, 500.0));
    s.add(SignedLogValue::from_real(2.5));
    CHECK(s.to_real() == Catch::Approx(2.5).epsilon(1e-9));
    CHECK(s.cancellation() > 1e100);

    SignedLogSum t;
    for (int i = 0; i < 50; ++i) t.add(SignedLogValue::from_real(1.0));
    CHECK(t.to_real() == Catch::Approx(50.0).epsilon(1e-14));
}

TEST_CASE("sum_series geometric, zero, divergent") {
    SeriesConfig cfg;
    const auto geo = sum_series([](std::size_t m) { return std::pow(2.0, -static_cast<double>(m)); }, cfg);
    CHECK(geo.converged);
    CHECK(geo.value == Catch::Approx(2.0).margin(1e-11));

    const auto zero = sum_series([](std::size_t) { return 0.0; }, cfg);
    CHECK(zero.converged);
    CHECK(zero.value == 0.0);
    CHECK(zero.terms_used == cfg.tail_window);

    SeriesConfig small = cfg;
    small.max_terms = 100;
    const auto harm = sum_series([](std::size_t m) { return 1.0 / (static_cast<double>(m) + 1.0); }, small);
    CHECK_FALSE(harm.converged);

    CHECK_THROWS_AS(sum_series([](std::size_t m) {
                        return m == 5 ? std::numeric_limits<double>::quiet_NaN() : 1e-30;
                    },
                                cfg),
                    SeriesEvaluationError);
    try {
        sum_series([](std::size_t m) { return m == 5 ? std::numeric_limits<double>::infinity() : 1e-30; }, cfg);
        FAIL("expected throw");
    } catch (const SeriesEvaluationError& e) {
        CHECK(e.index == 5);
    }
}

TEST_CASE("sum_series exponential matches e") {
    SeriesConfig cfg;
    const auto r = sum_series([](std::size_t m) { return std::exp(-std::lgamma(static_cast<double>(m) + 1.0)); }, cfg);
    CHECK(r.converged);
    CHECK(std::fabs(r.value - std::exp(1.0)) <= 10.0 * cfg.rel_tol * std::exp(1.0));
}

TEST_CASE("SeriesConfig validation and env override") {
    SeriesConfig bad;
    bad.rel_tol = 1e-17;
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
    bad = {};
    bad.max_terms = 1;
    bad.tail_window = 3;
    CHECK_THROWS_AS(bad.validate(), std::domain_error);

    setenv("BIOEN_REL_TOL", "1e-8", 1);
    setenv("BIOEN_MAX_TERMS", "123", 1);
    const SeriesConfig fromenv = series_config_from_env();
    CHECK(fromenv.rel_tol == 1e-8);
    CHECK(fromenv.max_terms == 123);
    unsetenv("BIOEN_REL_TOL");
    unsetenv("BIOEN_MAX_TERMS");
}

TEST_CASE("integrate_weighted basics") {
    CHECK(integrate_weighted([](double) { return 1.0; }, 0.0) == Catch::Approx(1.0).epsilon(1e-13));
    CHECK(integrate_weighted([](double) { return 1.0; }, -0.5) == Catch::Approx(2.0).epsilon(1e-13));
    CHECK(integrate_weighted([](double t) { return t; }, 1.0) == Catch::Approx(1.0 / 3.0).epsilon(1e-13));
    CHECK_THROWS_AS(integrate_weighted([](double) { return 1.0; }, -1.5), std::domain_error);
}

TEST_CASE("integrate_weighted reproduces Beta integrals") {
    for (double alpha : {-0.5, 0.0, 1.7})
        for (int k = 0; k <= 5; ++k) {
            double expected = std::exp(std::lgamma(k + 1.0));
            for (int i = 0; i <= k; ++i) expected /= alpha + 1.0 + i; // k!/((a+1)...(a+k+1))
            const double got = integrate_weighted(
                [&](double t) { return std::pow(1.0 - t, static_cast<double>(k)); }, alpha);
            CHECK(got == Catch::Approx(expected).margin(1e-10));
        }
}

TEST_CASE("integrate_laguerre_weighted and hermite counterpart") {
    // int_0^inf x^alpha e^-x x^k dx = Gamma(alpha+k+1)
    for (double alpha : {-0.3, 0.0, 1.5})
        for (int k : {0, 3, 7}) {
            const double got = integrate_laguerre_weighted(
                [&](double x) { return std::pow(x, static_cast<double>(k)); }, alpha, {}, k + 1.0);
            CHECK(got == Catch::Approx(std::exp(std::lgamma(alpha + k + 1.0))).epsilon(1e-10));
        }
    // int_R |x|^alpha e^{-x^2} x^{2k} dx = Gamma((alpha+2k+1)/2)
    for (double alpha : {-0.3, 0.0, 1.5})
        for (int k : {0, 2}) {
            const double got = integrate_hermite_weighted(
                [&](double x) { return std::pow(x, 2.0 * k); }, alpha, {}, 2.0 * k + 1.0);
            CHECK(got == Catch::Approx(std::exp(std::lgamma((alpha + 2.0 * k + 1.0) / 2.0))).epsilon(1e-10));
        }
}

TEST_CASE("binomial exactness") {
    CHECK(binomial(12, 6) == 924.0);
    CHECK(binomial(5, 0) == 1.0);
    CHECK(binomial(5, 6) == 0.0);
    CHECK(binomial(9, 4) == 126.0);
}
