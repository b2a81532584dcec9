#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "bioen/polynomials.hpp"
#include "bioen/quadrature.hpp"
#include "oracles.hpp"

using namespace bioen;

namespace {

// direct alternating-sum evaluation of the Y_n inner sums (test-side cross
// check of the cancellation-free route)
DensePolynomial konhauser_Y_direct(double alpha, double theta, int n) {
    DensePolynomial p;
    p.coeffs.resize(static_cast<std::size_t>(n) + 1);
    for (int r = 0; r <= n; ++r) {
        double inner = 0.0;
        for (int i = 0; i <= r; ++i)
            inner += (i % 2 == 0 ? 1.0 : -1.0) * binomial(r, i)
                     * log_pochhammer((i + alpha + 1.0) / theta, n).to_real();
        p.coeffs[static_cast<std::size_t>(r)] =
            inner * std::exp(-std::lgamma(n + 1.0) - std::lgamma(r + 1.0));
    }
    return p;
}

} // namespace

TEST_CASE("biortho_pair_general n=1 and unit pairing") {
    const std::vector<double> a{0.7, 1.9}, b{0.25, 2.4};
    const auto [zeta, psi] = biortho_pair_general(a, b, 1);
    const double norm = std::sqrt(a[0] + b[0] + 1.0);
    CHECK(zeta(1.0) == Catch::Approx(norm).epsilon(1e-13));
    CHECK(psi(1.0) == Catch::Approx(norm).epsilon(1e-13));
    CHECK(zeta(0.5) == Catch::Approx(norm * std::pow(0.5, a[0])).epsilon(1e-13));
    const double got = integrate_weighted([&](double x) { return zeta(x) * psi(x); }, 0.0);
    CHECK(got == Catch::Approx(1.0).epsilon(1e-11));
}

TEST_CASE("biortho_pair_general precondition errors name indices") {
    CHECK_THROWS_AS(biortho_pair_general({0.0, 0.0}, {1.0, 2.0}, 2), std::domain_error);
    CHECK_THROWS_AS(biortho_pair_general({0.0, 1.0}, {-0.6, -0.7}, 2), std::domain_error);
    try {
        biortho_pair_general({-0.5, 1.0}, {-0.6, 2.0}, 2);
        FAIL("expected throw");
    } catch (const std::domain_error& e) {
        CHECK(std::string(e.what()).find("a[0] + b[0]") != std::string::npos);
    }
}

TEST_CASE("biortho_pair_general reproduces shifted Legendre at a_i=b_i=i-1") {
    const std::vector<double> seq{0.0, 1.0, 2.0, 3.0, 4.0};
    for (int n = 1; n <= 5; ++n) {
        const auto [zeta, psi] = biortho_pair_general(seq, seq, n);
        // same spans and weights: both must be +/- the orthonormal shifted
        // Legendre polynomial of degree n-1
        const double ratio = zeta(0.77) / oracles::shifted_legendre_orthonormal(n - 1, 0.77);
        CHECK(std::fabs(std::fabs(ratio) - 1.0) <= 1e-9);
        for (double x : {0.12, 0.45, 0.9}) {
            CHECK(zeta(x) == Catch::Approx(ratio * oracles::shifted_legendre_orthonormal(n - 1, x)).margin(1e-9));
            CHECK(psi(x) == Catch::Approx(zeta(x)).margin(1e-10));
        }
    }
}

TEST_CASE("biortho_pair_general biorthonormality with randomized exponents") {
    std::mt19937 gen(555);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    for (int trial = 0; trial < 3; ++trial) {
        std::vector<double> a(5), b(5);
        for (auto& v : a) v = u(gen);
        for (auto& v : b) v = u(gen);
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        bool distinct = true;
        for (int i = 0; i + 1 < 5; ++i)
            if (a[i + 1] - a[i] < 1e-3 || b[i + 1] - b[i] < 1e-3) distinct = false;
        if (!distinct) continue;
        for (int m = 1; m <= 5; ++m)
            for (int n = 1; n <= 5; ++n) {
                const auto zm = biortho_pair_general(a, b, m).first;
                const auto pn = biortho_pair_general(a, b, n).second;
                const double got = integrate_weighted([&](double x) { return zm(x) * pn(x); }, 0.0,
                                                      {1e-11, 1e-300, 10000, 3});
                CHECK(got == Catch::Approx(m == n ? 1.0 : 0.0).margin(1e-9));
            }
    }
}

TEST_CASE("konhauser_Z coefficients") {
    for (double alpha : {0.0, 0.5}) {
        const auto z0 = konhauser_Z(alpha, 2.0, 0);
        REQUIRE(z0.coeffs.size() == 1);
        CHECK(z0.coeffs[0] == Catch::Approx(1.0 / std::tgamma(alpha + 1.0)).epsilon(1e-13));
        const auto z1 = konhauser_Z(alpha, 1.7, 1);
        REQUIRE(z1.coeffs.size() == 2);
        CHECK(z1.coeffs[0] == Catch::Approx(1.0 / std::tgamma(alpha + 1.0)).epsilon(1e-13));
        CHECK(z1.coeffs[1] == Catch::Approx(-1.0 / std::tgamma(1.7 + alpha + 1.0)).epsilon(1e-13));
    }
    CHECK_THROWS_AS(konhauser_Z(0.0, 1.0, 13), std::domain_error);
}

TEST_CASE("konhauser polynomials at theta=1 are normalized classical Laguerre") {
    for (double alpha : {0.0, 0.5, 1.5})
        for (int n = 0; n <= 4; ++n) {
            const auto Z = konhauser_Z(alpha, 1.0, n);
            const auto Y = konhauser_Y(alpha, 1.0, n);
            const double factor = std::exp(std::lgamma(n + 1.0) - std::lgamma(n + alpha + 1.0));
            for (double x : {0.3, 1.1, 2.7}) {
                CHECK(Z(x) == Catch::Approx(factor * oracles::laguerre_classical(n, alpha, x)).epsilon(1e-10).margin(1e-12));
                CHECK(Y(x) == Catch::Approx(oracles::laguerre_classical(n, alpha, x)).epsilon(1e-10).margin(1e-12));
            }
        }
}

TEST_CASE("konhauser_Y values and cancellation-free route vs direct sum") {
    const auto y0 = konhauser_Y(0.7, 2.0, 0);
    REQUIRE(y0.coeffs.size() == 1);
    CHECK(y0.coeffs[0] == 1.0);
    const auto y1 = konhauser_Y(0.7, 2.0, 1);
    CHECK(y1.coeffs[0] == Catch::Approx((0.7 + 1.0) / 2.0).epsilon(1e-13));
    CHECK(y1.coeffs[1] == Catch::Approx(-1.0 / 2.0).epsilon(1e-13));
    for (auto [alpha, theta] : {std::pair{0.0, 1.0}, {0.5, 2.0}, {1.5, 0.5}})
        for (int n = 0; n <= 6; ++n) {
            const auto fast = konhauser_Y(alpha, theta, n);
            const auto direct = konhauser_Y_direct(alpha, theta, n);
            for (std::size_t i = 0; i < fast.coeffs.size(); ++i)
                CHECK(fast.coeffs[i] == Catch::Approx(direct.coeffs[i]).epsilon(1e-9).margin(1e-12));
        }
}

TEST_CASE("degree contract") {
    for (int n = 0; n <= 8; ++n) {
        CHECK(konhauser_Z(0.5, 2.0, n).degree() == n);
        CHECK(konhauser_Z(0.5, 2.0, n).coeffs.back() != 0.0);
        CHECK(konhauser_Y(0.5, 2.0, n).degree() == n);
        CHECK(konhauser_Y(0.5, 2.0, n).coeffs.back() != 0.0);
    }
}

TEST_CASE("konhauser biorthonormality by quadrature") {
    for (auto [alpha, theta] : {std::pair{0.0, 1.0}, {0.5, 2.0}, {1.5, 0.5}})
        for (int m = 0; m <= 4; ++m)
            for (int n = 0; n <= 4; ++n) {
                const auto Z = konhauser_Z(alpha, theta, m);
                const auto Y = konhauser_Y(alpha, theta, n);
                const double got = integrate_laguerre_weighted(
                    [&](double x) { return Z(std::pow(x, theta)) * Y(x); }, alpha,
                    {1e-11, 1e-300, 10000, 3}, theta * m + n + 2.0);
                CHECK(got == Catch::Approx(m == n ? 1.0 : 0.0).margin(1e-8));
            }
}

TEST_CASE("hermite S/T structure") {
    for (double alpha : {0.0, 0.5}) {
        const auto s0 = hermite_S(alpha, 2.0, 0);
        CHECK(s0.parity == Parity::Even);
        CHECK(s0.eval(1.3) == Catch::Approx(1.0 / std::tgamma((alpha + 1.0) / 2.0)).epsilon(1e-12));
        const auto s1 = hermite_S(alpha, 2.0, 1);
        CHECK(s1.parity == Parity::Odd);
        CHECK(s1.eval(0.6) == Catch::Approx(0.6 / std::tgamma((alpha + 2.0 + 2.0) / 2.0)).epsilon(1e-12));
        const auto t0 = hermite_T(alpha, 2.0, 0);
        CHECK(t0.eval(2.0) == 1.0);
        // S_2(u) = Z_1 at (alpha-1)/2 evaluated at u^2
        const auto s2 = hermite_S(alpha, 2.0, 2);
        const auto z1 = konhauser_Z((alpha - 1.0) / 2.0, 2.0, 1);
        CHECK(s2.eval(0.8) == Catch::Approx(z1(0.64)).epsilon(1e-13));
    }
}

TEST_CASE("hermite S/T biorthonormality and parity orthogonality") {
    for (auto [alpha, theta] : {std::pair{0.0, 1.0}, {0.5, 2.0}})
        for (int m = 0; m <= 4; ++m)
            for (int n = 0; n <= 4; ++n) {
                const auto S = hermite_S(alpha, theta, m);
                const auto T = hermite_T(alpha, theta, n);
                const double got = integrate_hermite_weighted(
                    [&](double x) { return S.eval(signed_pow(x, theta)) * T.eval(x); }, alpha,
                    {1e-11, 1e-300, 10000, 3}, 2.0 * (theta * m + n) + 2.0);
                CHECK(got == Catch::Approx(m == n ? 1.0 : 0.0).margin(1e-8));
            }
    // int S_0(x^theta) T_0(x) |x|^alpha e^{-x^2} dx = 1 via the u = x^2 route
    const double direct = integrate_hermite_weighted(
        [&](double x) {
            return hermite_S(0.5, 2.0, 0).eval(signed_pow(x, 2.0)) * hermite_T(0.5, 2.0, 0).eval(x);
        },
        0.5, {}, 2.0);
    CHECK(direct == Catch::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("kernel_from_polynomials matches closed-form kernels") {
    for (auto [alpha, theta] : {std::pair{0.0, 1.0}, {0.5, 2.0}})
        for (int n : {1, 3, 6}) {
            for (double x : {0.3, 1.6})
                for (double y : {0.7, 2.4}) {
                    const double kl = kernel_laguerre(alpha, theta, n, x, y);
                    CHECK(kernel_from_polynomials(Family::Laguerre, alpha, theta, n, x, y)
                          == Catch::Approx(kl).epsilon(1e-9).margin(1e-12));
                    const double kh = kernel_hermite(alpha, theta, n, x - 1.0, y - 1.5);
                    CHECK(kernel_from_polynomials(Family::Hermite, alpha, theta, n, x - 1.0, y - 1.5)
                          == Catch::Approx(kh).epsilon(1e-9).margin(1e-12));
                }
            for (double x : {0.2, 0.6})
                for (double y : {0.35, 0.85}) {
                    const double kj = kernel_jacobi(alpha, theta, n, x, y);
                    CHECK(kernel_from_polynomials(Family::Jacobi, alpha, theta, n, x, y)
                          == Catch::Approx(kj).epsilon(5e-7).margin(1e-10));
                }
        }
}

TEST_CASE("partial-sum consistency: K_{N+1} - K_N = zeta_N psi_N") {
    for (auto [alpha, theta] : {std::pair{0.0, 1.0}, {0.5, 2.0}}) {
        for (int n : {1, 3, 5}) {
            for (double x : {0.4, 1.9})
                for (double y : {0.8, 2.7}) {
                    const double diff = kernel_from_polynomials(Family::Laguerre, alpha, theta, n + 1, x, y)
                                        - kernel_from_polynomials(Family::Laguerre, alpha, theta, n, x, y);
                    const double term = konhauser_Z(alpha, theta, n)(std::pow(x, theta))
                                        * konhauser_Y(alpha, theta, n)(y);
                    CHECK(diff == Catch::Approx(term).epsilon(1e-10).margin(1e-12));
                }
        }
    }
}

TEST_CASE("ExponentPolynomial invariants") {
    using Term = ExponentPolynomial::Term;
    CHECK_THROWS_AS(ExponentPolynomial({Term{SignedLogValue::one(), 1.0}, Term{SignedLogValue::one(), 1.0}}, 1.0),
                    std::domain_error);
    const ExponentPolynomial p({Term{SignedLogValue::from_real(2.0), 0.0},
                                Term{SignedLogValue::from_real(-3.0), 1.5}},
                               1.0);
    CHECK(p(1.0) == Catch::Approx(-1.0).epsilon(1e-13));
    CHECK(p(0.0) == Catch::Approx(2.0));
    CHECK(p(4.0) == Catch::Approx(2.0 - 3.0 * 8.0).epsilon(1e-13));
}
