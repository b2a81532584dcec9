#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bioen/gram.hpp"
#include "bioen/kernels.hpp"
#include "bioen/polynomials.hpp"
#include "bioen/quadrature.hpp"
#include "bioen/sampler.hpp"
#include "bioen/scaling.hpp"
#include "bioen/special.hpp"

namespace bioen {

/// One named residual check: pass iff residual <= threshold.
struct CheckResult {
    std::string name;
    double residual = 0.0;
    double threshold = 0.0;
    bool pass() const { return std::isfinite(residual) && residual <= threshold; }
};

struct SuiteResult {
    std::string suite;
    std::vector<CheckResult> checks;
    bool pass() const {
        for (const auto& c : checks)
            if (!c.pass()) return false;
        return true;
    }
};

namespace verify_detail {

inline double rel_diff(double a, double b) {
    return std::fabs(a - b) / std::max({1.0, std::fabs(a), std::fabs(b)});
}

// reproducing probes: integrate K_N(x, .) against the xi-family member and
// compare with its value at x.
inline double reproducing_residual(Family family, double alpha, double theta, int n) {
    const SeriesConfig cfg{1e-9, 1e-300, 10000, 3};
    double worst = 0.0;
    const std::vector<double> probes =
        family == Family::Jacobi ? std::vector<double>{0.12, 0.37, 0.61, 0.83}
        : family == Family::Laguerre ? std::vector<double>{0.4, 1.1, 2.3}
                                     : std::vector<double>{-1.1, 0.3, 0.9};
    for (int j = 1; j <= n; ++j)
        for (double x : probes) {
            double got = 0.0, want = 0.0;
            switch (family) {
                case Family::Jacobi: {
                    got = integrate_weighted(
                        [&](double y) { return kernel_jacobi(alpha, theta, n, x, y) * std::pow(y, j - 1.0); },
                        alpha, cfg);
                    want = std::pow(x, j - 1.0);
                    break;
                }
                case Family::Laguerre: {
                    got = integrate_laguerre_weighted(
                        [&](double y) { return kernel_laguerre(alpha, theta, n, x, y) * std::pow(y, theta * (j - 1.0)); },
                        alpha, cfg, theta * n + n + 4.0);
                    want = std::pow(x, theta * (j - 1.0));
                    break;
                }
                case Family::Hermite: {
                    got = integrate_hermite_weighted(
                        [&](double y) {
                            return kernel_hermite(alpha, theta, n, x, y)
                                   * std::pow(signed_pow(y, theta), j - 1.0);
                        },
                        alpha, cfg, 2.0 * (theta * n + n) + 4.0);
                    want = std::pow(signed_pow(x, theta), j - 1.0);
                    break;
                }
            }
            worst = std::max(worst, std::fabs(got - want) / std::max(1.0, std::fabs(want)));
        }
    return worst;
}

inline double trace_residual(Family family, double alpha, double theta, int n) {
    const SeriesConfig cfg{1e-9, 1e-300, 10000, 3};
    double tr = 0.0;
    switch (family) {
        case Family::Jacobi:
            tr = integrate_weighted([&](double x) { return kernel_jacobi(alpha, theta, n, x, x); }, alpha, cfg);
            break;
        case Family::Laguerre:
            tr = integrate_laguerre_weighted([&](double x) { return kernel_laguerre(alpha, theta, n, x, x); },
                                             alpha, cfg, theta * n + n + 4.0);
            break;
        case Family::Hermite:
            tr = integrate_hermite_weighted([&](double x) { return kernel_hermite(alpha, theta, n, x, x); },
                                            alpha, cfg, 2.0 * (theta * n + n) + 4.0);
            break;
    }
    return std::fabs(tr - n);
}

} // namespace verify_detail

/// "special": Wright-Bessel identity, sine/Bessel reductions, series vs
/// quadrature agreement of the limit kernel.
inline SuiteResult verify_special() {
    SuiteResult r{"special", {}};
    double worst = 0.0;
    for (double a : {0.0, 0.5, 1.0, 2.3})
        for (double x : {0.1, 1.0, 5.0, 20.0})
            worst = std::max(worst, std::fabs(std::pow(x, a / 2.0) * wright_bessel(a + 1.0, 1.0, x)
                                              - bessel_j(a, 2.0 * std::sqrt(x))));
    r.checks.push_back({"wright_identity_x^(a/2)J_{a+1,1}=J_a(2sqrt)", worst, 1e-10});

    worst = 0.0;
    const LimitKernelParams her01{0.0, 1.0};
    for (int i = 0; i <= 8; ++i)
        for (int j = 0; j <= 8; ++j) {
            const double x = -2.0 + 0.5 * i, y = -2.0 + 0.5 * j;
            const double ref = std::fabs(x - y) < 1e-12 ? 2.0 / pi_v
                                                        : std::sin(2.0 * (x - y)) / (pi_v * (x - y));
            worst = std::max(worst, std::fabs(limit_kernel_hermite(her01, x, y) - ref));
        }
    r.checks.push_back({"sine_kernel_reduction_theta1", worst, 1e-8});

    worst = 0.0;
    for (double alpha : {0.0, 0.5, 2.0})
        for (double x : {0.4, 1.3, 2.6})
            for (double y : {0.7, 1.9, 3.4}) {
                const LimitKernelParams p{alpha, 1.0};
                worst = std::max(worst, std::fabs(std::pow(x * y, alpha / 2.0) * limit_kernel(p, x, y)
                                                  - bessel_kernel(alpha, x, y)));
            }
    r.checks.push_back({"bessel_kernel_reduction_theta1", worst, 1e-8});

    worst = 0.0;
    for (auto [alpha, theta] : {std::pair{0.0, 1.0}, {0.5, 2.0}, {1.0, 0.5}}) {
        const LimitKernelParams p{alpha, theta};
        for (double x : {0.0, 1.0, 2.0, 3.0, 4.0})
            for (double y : {0.0, 1.0, 2.0, 3.0, 4.0}) {
                const double s = limit_kernel(p, x, y, KernelMethod::Series);
                const double q = limit_kernel(p, x, y, KernelMethod::Quadrature);
                worst = std::max(worst, std::fabs(s - q) / (1.0 + std::fabs(s)));
            }
    }
    r.checks.push_back({"limit_kernel_series_vs_quadrature", worst, 1e-9});
    return r;
}

/// "gram": closed forms against the generic Cauchy inverse and decomposition
/// residuals at conditioning-safe sizes.
inline SuiteResult verify_gram() {
    SuiteResult r{"gram", {}};
    double worst_log = 0.0;
    int sign_mismatch = 0;
    for (auto [alpha, theta] : {std::pair{0.0, 1.0}, {0.5, 2.0}, {1.5, 0.5}})
        for (int n : {1, 3, 6}) {
            std::vector<double> A(static_cast<std::size_t>(n)), B(static_cast<std::size_t>(n));
            for (int i = 1; i <= n; ++i) {
                A[static_cast<std::size_t>(i - 1)] = theta * (i - 1);
                B[static_cast<std::size_t>(i - 1)] = i + alpha;
            }
            const CoefficientMatrix direct = cauchy_inverse(CauchySystem{A, B});
            const CoefficientMatrix closed = jacobi_coeffs(alpha, theta, n);
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    if (direct(k, l).sign != closed(k, l).sign) ++sign_mismatch;
                    worst_log = std::max(worst_log,
                                         std::fabs(direct(k, l).log_mag - closed(k, l).log_mag)
                                             / std::max(1.0, std::fabs(closed(k, l).log_mag)));
                }
        }
    r.checks.push_back({"jacobi_coeffs_equals_cauchy_inverse_logmag", worst_log, 1e-10});
    r.checks.push_back({"jacobi_coeffs_equals_cauchy_inverse_signs", static_cast<double>(sign_mismatch), 0.0});

    double worst = 0.0;
    for (auto [alpha, theta] : {std::pair{0.0, 1.0}, {0.5, 2.0}, {1.5, 0.5}})
        for (int n : {1, 2, 4, 5}) {
            worst = std::max(worst, identity_residual(jacobi_coeffs(alpha, theta, n),
                                                      jacobi_gram(alpha, theta, n)));
            worst = std::max(worst, identity_residual(laguerre_coeffs(alpha, theta, n),
                                                      laguerre_gram_tilde(alpha, theta, n)));
        }
    r.checks.push_back({"closed_form_inverse_residual_small_n", worst, 1e-8});

    worst = 0.0;
    for (int n : {2, 4, 6}) {
        const Eigen::MatrixXd G = jacobi_gram(0.0, 2.0, n);
        const auto [L, U] = biorthogonalize(G);
        worst = std::max(worst, ((L * G * U) - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff());
    }
    r.checks.push_back({"gauss_decomposition_LGU_residual", worst, 1e-10});
    return r;
}

/// "kernels": reproducing property, trace normalization, pointwise
/// nonnegativity of the one-point density, Hermite joint parity.
inline SuiteResult verify_kernels() {
    SuiteResult r{"kernels", {}};
    double worst = 0.0;
    for (auto [alpha, theta] : {std::pair{0.0, 1.0}, {0.5, 2.0}})
        for (Family f : {Family::Jacobi, Family::Laguerre, Family::Hermite})
            worst = std::max(worst, verify_detail::reproducing_residual(f, alpha, theta, 4));
    r.checks.push_back({"reproducing_property_n4", worst, 1e-6});

    worst = 0.0;
    for (auto [alpha, theta] : {std::pair{0.0, 1.0}, {0.5, 2.0}})
        for (Family f : {Family::Jacobi, Family::Laguerre, Family::Hermite})
            for (int n : {1, 3, 5})
                worst = std::max(worst, verify_detail::trace_residual(f, alpha, theta, n));
    r.checks.push_back({"trace_equals_n", worst, 1e-6});

    double most_negative = 0.0;
    for (auto [alpha, theta] : {std::pair{0.5, 2.0}, {1.0, 0.5}}) {
        const EnsembleSpec jac{Family::Jacobi, alpha, theta, 5};
        for (int i = 1; i < 60; ++i) {
            const double x = i / 60.0;
            most_negative = std::min(most_negative, weight(jac, x) * kernel_value(jac, x, x));
        }
        const EnsembleSpec her{Family::Hermite, alpha, theta, 5};
        for (int i = -30; i <= 30; ++i) {
            const double x = i / 10.0 + 0.013;
            most_negative = std::min(most_negative, weight(her, x) * kernel_value(her, x, x));
        }
    }
    r.checks.push_back({"one_point_density_nonnegative", -most_negative, 1e-10});

    double parity = 0.0;
    for (double x : {-1.2, 0.4, 2.0})
        for (double y : {-0.7, 0.9}) {
            const double a = kernel_hermite(0.5, 2.0, 5, x, y);
            const double b = kernel_hermite(0.5, 2.0, 5, -x, -y);
            parity = std::max(parity, verify_detail::rel_diff(a, b));
        }
    r.checks.push_back({"hermite_joint_parity", parity, 1e-12});
    return r;
}

/// "polynomials": biorthonormality by quadrature, the kernel-equals-
/// polynomial-sum identity, partial-sum consistency.
inline SuiteResult verify_polynomials() {
    SuiteResult r{"polynomials", {}};
    const SeriesConfig cfg{1e-10, 1e-300, 10000, 3};
    double worst = 0.0;
    for (auto [alpha, theta] : {std::pair{0.0, 1.0}, {0.5, 2.0}, {1.5, 0.5}})
        for (int m = 0; m <= 3; ++m)
            for (int n = 0; n <= 3; ++n) {
                const DensePolynomial Z = konhauser_Z(alpha, theta, m);
                const DensePolynomial Y = konhauser_Y(alpha, theta, n);
                const double got = integrate_laguerre_weighted(
                    [&](double x) { return Z(std::pow(x, theta)) * Y(x); }, alpha, cfg,
                    theta * m + n + 2.0);
                worst = std::max(worst, std::fabs(got - (m == n ? 1.0 : 0.0)));
            }
    r.checks.push_back({"konhauser_biorthonormality", worst, 1e-8});

    worst = 0.0;
    for (auto [alpha, theta] : {std::pair{0.0, 1.0}, {0.5, 2.0}})
        for (int m = 0; m <= 3; ++m)
            for (int n = 0; n <= 3; ++n) {
                const ParityPolynomial S = hermite_S(alpha, theta, m);
                const ParityPolynomial T = hermite_T(alpha, theta, n);
                const double got = integrate_hermite_weighted(
                    [&](double x) { return S.eval(signed_pow(x, theta)) * T.eval(x); }, alpha, cfg,
                    2.0 * (theta * m + n) + 2.0);
                worst = std::max(worst, std::fabs(got - (m == n ? 1.0 : 0.0)));
            }
    r.checks.push_back({"hermite_ST_biorthonormality", worst, 1e-8});

    worst = 0.0;
    for (auto [alpha, theta] : {std::pair{0.0, 1.0}, {0.5, 2.0}})
        for (int n : {1, 3, 5}) {
            for (double x : {0.4, 1.7})
                for (double y : {0.8, 2.6}) {
                    const double a = kernel_from_polynomials(Family::Laguerre, alpha, theta, n, x, y);
                    const double b = kernel_laguerre(alpha, theta, n, x, y);
                    worst = std::max(worst, std::fabs(a - b) / (1.0 + std::fabs(b)));
                }
        }
    r.checks.push_back({"laguerre_kernel_equals_polynomial_sum", worst, 1e-9});

    worst = 0.0;
    for (int n : {1, 2, 4}) {
        for (double x : {0.3, 0.8})
            for (double y : {0.25, 0.65}) {
                const double a = kernel_from_polynomials(Family::Jacobi, 0.5, 2.0, n, x, y);
                const double b = kernel_jacobi(0.5, 2.0, n, x, y);
                worst = std::max(worst, std::fabs(a - b) / (1.0 + std::fabs(b)));
                const double c = kernel_from_polynomials(Family::Hermite, 0.5, 2.0, n, x, y);
                const double d = kernel_hermite(0.5, 2.0, n, x, y);
                worst = std::max(worst, std::fabs(c - d) / (1.0 + std::fabs(d)));
            }
    }
    r.checks.push_back({"jacobi_hermite_kernel_equals_polynomial_sum", worst, 1e-7});
    return r;
}

/// "symmetry": the theta-factor scalar identity, determinant-level
/// invariance for both limit kernels, the involution, and the finite-N
/// violation.
inline SuiteResult verify_symmetry() {
    SuiteResult r{"symmetry", {}};
    // scalar identity K(y^(1/t), x^(1/t)) = t * K'(x,y); at (0,2),(0,0) the
    // right side is 2/sqrt(pi)
    double worst = 0.0;
    {
        const auto [ap, tp] = symmetry_map(0.0, 2.0);
        const LimitKernelParams p{0.0, 2.0}, q{ap, tp};
        worst = std::max(worst, std::fabs(limit_kernel(p, 0.0, 0.0) - 2.0 / std::sqrt(pi_v)));
        worst = std::max(worst, std::fabs(limit_kernel(p, 0.0, 0.0) - 2.0 * limit_kernel(q, 0.0, 0.0)));
        for (double x : {0.4, 1.1})
            for (double y : {0.6, 1.7})
                worst = std::max(worst,
                                 std::fabs(limit_kernel(p, std::pow(y, 1.0 / 2.0), std::pow(x, 1.0 / 2.0))
                                           - 2.0 * limit_kernel(q, x, y)));
    }
    r.checks.push_back({"scalar_symmetry_theta_factor", worst, 1e-9});

    worst = 0.0;
    for (auto [alpha, theta] : {std::pair{0.0, 2.0}, {1.0, 0.5}}) {
        const auto [ap, tp] = symmetry_map(alpha, theta);
        const LimitKernelParams p{alpha, theta}, q{ap, tp};
        const std::vector<double> pts{0.31, 0.87, 1.42};
        const int k = static_cast<int>(pts.size());
        Eigen::MatrixXd K1(k, k), K2(k, k);
        double w1 = 1.0, w2 = 1.0;
        for (int i = 0; i < k; ++i) {
            const double u = std::pow(pts[static_cast<std::size_t>(i)], theta);
            w1 *= std::pow(pts[static_cast<std::size_t>(i)], alpha);
            w2 *= std::pow(u, ap) * theta * std::pow(pts[static_cast<std::size_t>(i)], theta - 1.0);
            for (int j = 0; j < k; ++j) {
                K1(i, j) = limit_kernel(p, pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(j)]);
                K2(i, j) = limit_kernel(q, std::pow(pts[static_cast<std::size_t>(i)], theta),
                                        std::pow(pts[static_cast<std::size_t>(j)], theta));
            }
        }
        const double rhs = w1 * K1.determinant();
        const double lhs = w2 * K2.determinant();
        worst = std::max(worst, std::fabs(lhs - rhs) / std::max(std::fabs(rhs), 1e-30));
    }
    r.checks.push_back({"determinant_invariance_hard_edge", worst, 1e-8});

    worst = 0.0;
    for (auto [alpha, theta] : {std::pair{0.0, 2.0}, {1.0, 0.5}}) {
        const auto [ap, tp] = symmetry_map(alpha, theta);
        const LimitKernelParams p{alpha, theta}, q{ap, tp};
        const std::vector<double> pts{-1.13, 0.42, 0.95};
        const int k = static_cast<int>(pts.size());
        Eigen::MatrixXd K1(k, k), K2(k, k);
        double w1 = 1.0, w2 = 1.0;
        for (int i = 0; i < k; ++i) {
            const double xi = pts[static_cast<std::size_t>(i)];
            const double u = signed_pow(xi, theta);
            w1 *= std::pow(std::fabs(xi), alpha);
            w2 *= std::pow(std::fabs(u), ap) * theta * std::pow(std::fabs(xi), theta - 1.0);
            for (int j = 0; j < k; ++j) {
                K1(i, j) = limit_kernel_hermite(p, xi, pts[static_cast<std::size_t>(j)]);
                K2(i, j) = limit_kernel_hermite(q, u, signed_pow(pts[static_cast<std::size_t>(j)], theta));
            }
        }
        const double rhs = w1 * K1.determinant();
        const double lhs = w2 * K2.determinant();
        worst = std::max(worst, std::fabs(lhs - rhs) / std::max(std::fabs(rhs), 1e-30));
    }
    r.checks.push_back({"determinant_invariance_bulk", worst, 1e-8});

    worst = 0.0;
    for (auto [alpha, theta] : {std::pair{0.5, 2.0}, {1.25, 0.25}, {0.0, 4.0}}) {
        const auto [ap, tp] = symmetry_map(alpha, theta);
        const auto [a2, t2] = symmetry_map(ap, tp);
        worst = std::max(worst, std::fabs(a2 - alpha) + std::fabs(t2 - theta));
    }
    r.checks.push_back({"symmetry_map_involution_dyadic", worst, 0.0});

    // finite ensembles do not possess the symmetry: N = 3 Laguerre violates it
    double violation = 0.0;
    {
        const double alpha = 0.0, theta = 2.0;
        const auto [ap, tp] = symmetry_map(alpha, theta);
        const std::vector<double> pts{0.4, 0.9, 1.6};
        const EnsembleSpec s1{Family::Laguerre, alpha, theta, 3};
        const EnsembleSpec s2{Family::Laguerre, ap, tp, 3};
        std::vector<double> us;
        double jac = 1.0;
        for (double x : pts) {
            us.push_back(std::pow(x, theta));
            jac *= theta * std::pow(x, theta - 1.0);
        }
        const double rhs = correlation(s1, pts);
        const double lhs = correlation(s2, us) * jac;
        violation = std::fabs(lhs - rhs) / std::max(std::fabs(lhs), std::fabs(rhs));
    }
    r.checks.push_back({"finite_n_violates_symmetry(residual_must_exceed_1e-3)",
                        violation > 1e-3 ? 0.0 : 1.0, 0.0});
    return r;
}

/// "scaling": component limits and a reduced kernel convergence ladder.
inline SuiteResult verify_scaling() {
    SuiteResult r{"scaling", {}};
    double worst = 0.0;
    for (auto [alpha, theta] : {std::pair{0.0, 1.0}, {0.5, 2.0}})
        for (double x : {0.5, 1.5, 3.0}) {
            worst = std::max(worst, std::fabs(scaled_component_A(alpha, theta, 200, x)
                                              - scaled_component_A_limit(alpha, theta, x)));
            worst = std::max(worst, std::fabs(scaled_component_B(alpha, theta, 200, x)
                                              - scaled_component_B_limit(alpha, theta, x)));
            worst = std::max(worst, std::fabs(scaled_component_C(alpha, theta, 200, x)
                                              - scaled_component_C_limit(alpha, theta, x)));
            worst = std::max(worst, std::fabs(scaled_component_D(alpha, theta, 200, x)
                                              - scaled_component_D_limit(alpha, theta, x)));
        }
    r.checks.push_back({"component_limits_n200", worst, 0.05});

    bool monotone = true;
    double final_err = 0.0;
    for (Family f : {Family::Jacobi, Family::Laguerre, Family::Hermite}) {
        const auto rep = convergence_study(f, 0.0, 1.0, default_convergence_grid(f, 1.0), {25, 50, 100});
        monotone = monotone && rep.monotone_flag;
        final_err = std::max(final_err, rep.sup_errors.back());
    }
    r.checks.push_back({"kernel_convergence_monotone_theta1", monotone ? 0.0 : 1.0, 0.0});
    r.checks.push_back({"kernel_convergence_final_error_n100", final_err, 0.1});
    return r;
}

inline std::vector<std::string> verify_suites() {
    return {"special", "gram", "kernels", "polynomials", "symmetry", "scaling"};
}

inline SuiteResult run_verify_suite(const std::string& name) {
    if (name == "special") return verify_special();
    if (name == "gram") return verify_gram();
    if (name == "kernels") return verify_kernels();
    if (name == "polynomials") return verify_polynomials();
    if (name == "symmetry") return verify_symmetry();
    if (name == "scaling") return verify_scaling();
    throw std::domain_error("unknown verify suite '" + name + "'");
}

} // namespace bioen
