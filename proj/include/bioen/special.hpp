#pragma once

#include <cmath>
#include <stdexcept>

#include "bioen/numerics.hpp"
#include "bioen/quadrature.hpp"
#include "bioen/signed_log.hpp"

namespace bioen {

/// Wright's generalized Bessel function
///   J_{a,b}(x) = sum_m (-x)^m / (m! Gamma(a + b m)),
/// entire in x; pole terms of Gamma contribute zero.
inline double wright_bessel(double a, double b, double x, const SeriesConfig& config = {}) {
    if (!(b > 0.0)) throw std::domain_error("wright_bessel: b must be > 0");
    if (!std::isfinite(x)) throw std::domain_error("wright_bessel: x must be finite");
    const double lax = x == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(std::fabs(x));
    const int xsign = x >= 0.0 ? 1 : -1;
    auto term = [&](std::size_t m) {
        const SignedLogValue rg = signed_log_recip_gamma(a + b * static_cast<double>(m));
        if (rg.is_zero()) return 0.0;
        if (m == 0) return rg.to_real();
        int sign = rg.sign;
        if (xsign > 0 && m % 2 == 1) sign = -sign;
        const double lm = static_cast<double>(m) * lax - std::lgamma(static_cast<double>(m) + 1.0) + rg.log_mag;
        return sign * std::exp(lm);
    };
    const SeriesResult r = sum_series(term, config);
    if (!r.converged)
        throw AccuracyError("wright_bessel: series did not converge within max_terms", r.value);
    return r.value;
}

/// Classical Bessel function of the first kind by its ascending series;
/// adequate for the moderate arguments used here.
inline double bessel_j(double nu, double z, const SeriesConfig& config = {}) {
    if (z == 0.0) {
        if (nu == 0.0) return 1.0;
        if (nu > 0.0) return 0.0;
        throw std::domain_error("bessel_j: z must be > 0 for nu < 0");
    }
    if (!(z > 0.0)) throw std::domain_error("bessel_j: z must be >= 0");
    const double lh = std::log(0.5 * z);
    auto term = [&](std::size_t m) {
        const double md = static_cast<double>(m);
        const SignedLogValue rg = signed_log_recip_gamma(md + nu + 1.0);
        if (rg.is_zero()) return 0.0;
        const int sign = (m % 2 == 0 ? 1 : -1) * rg.sign;
        return sign * std::exp((2.0 * md + nu) * lh - std::lgamma(md + 1.0) + rg.log_mag);
    };
    const SeriesResult r = sum_series(term, config);
    if (!r.converged)
        throw AccuracyError("bessel_j: series did not converge within max_terms", r.value);
    return r.value;
}

/// Parameters (alpha, theta) of the hard-edge limit kernel.
struct LimitKernelParams {
    double alpha;
    double theta;

    LimitKernelParams(double alpha, double theta) : alpha(alpha), theta(theta) {
        if (!(alpha > -1.0)) throw std::domain_error("alpha must be > -1");
        if (!(theta > 0.0)) throw std::domain_error("theta must be > 0");
    }
};

enum class KernelMethod { Series, Quadrature, Auto };

namespace detail {

struct LimitKernelSeriesResult {
    double value;
    double cancellation;
    bool converged;
};

// Double sum over (k,l) enumerated along diagonals k+l = d so the tail rule
// sees a single index; terms decay factorially along diagonals.
inline LimitKernelSeriesResult limit_kernel_series(double alpha, double theta, double x, double y,
                                                   const SeriesConfig& config) {
    const double lx = x == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(x);
    const double ly = y == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(y);
    const double lt = std::log(theta);
    double sum = 0.0, comp = 0.0, max_abs = 0.0;
    int small_run = 0;
    const int max_diag = config.max_terms;
    for (int d = 0; d < max_diag; ++d) {
        double diag = 0.0;
        for (int k = 0; k <= d; ++k) {
            const int l = d - k;
            if (x == 0.0 && k > 0) continue;
            if (y == 0.0 && l > 0) continue;
            const double lm = (k == 0 ? 0.0 : k * lx) + (l == 0 ? 0.0 : theta * l * ly)
                              - std::lgamma(k + 1.0) - std::lgamma((alpha + 1.0 + k) / theta)
                              - std::lgamma(l + 1.0) - std::lgamma(alpha + 1.0 + theta * l)
                              - std::log(alpha + 1.0 + k + theta * l) + lt;
            const double t = (d % 2 == 0 ? 1.0 : -1.0) * std::exp(lm);
            diag += t;
            max_abs = std::max(max_abs, std::fabs(t));
        }
        const double s = sum + diag;
        if (std::fabs(sum) >= std::fabs(diag)) comp += (sum - s) + diag; else comp += (diag - s) + sum;
        sum = s;
        const double bound = std::max(config.abs_tol, config.rel_tol * std::fabs(sum + comp));
        small_run = (std::fabs(diag) <= bound) ? small_run + 1 : 0;
        if (small_run >= config.tail_window) {
            const double v = sum + comp;
            return {v, max_abs / std::max(std::fabs(v), 1e-300), true};
        }
    }
    return {sum + comp, 0.0, false};
}

} // namespace detail

/// Hard-edge limit kernel
///   K^(alpha,theta)(x,y) = sum_{k,l>=0} (-1)^{k+l} x^k y^{theta l} theta /
///        (k! Gamma((alpha+1+k)/theta) l! Gamma(alpha+1+theta l) (alpha+1+k+theta l))
///      = theta * int_0^1 J_{(alpha+1)/theta,1/theta}(x t) J_{alpha+1,theta}((y t)^theta) t^alpha dt.
/// Auto evaluates the series and falls back to the integral form when the
/// alternating double sum has cancelled more than six decades.
inline double limit_kernel(const LimitKernelParams& p, double x, double y,
                           KernelMethod method = KernelMethod::Auto,
                           const SeriesConfig& config = {}) {
    if (!(x >= 0.0) || !(y >= 0.0))
        throw std::domain_error("limit_kernel: x and y must be >= 0");
    config.validate();
    if (method == KernelMethod::Quadrature) {
        return p.theta * integrate_weighted(
                             [&](double t) {
                                 return wright_bessel((p.alpha + 1.0) / p.theta, 1.0 / p.theta, x * t, config)
                                        * wright_bessel(p.alpha + 1.0, p.theta, std::pow(y * t, p.theta), config);
                             },
                             p.alpha, config);
    }
    const auto r = detail::limit_kernel_series(p.alpha, p.theta, x, y, config);
    if (!r.converged)
        throw AccuracyError("limit_kernel: series did not converge within max_terms", r.value);
    if (method == KernelMethod::Auto && r.cancellation > 1e6)
        return limit_kernel(p, x, y, KernelMethod::Quadrature, config);
    return r.value;
}

/// Bulk limit kernel for the Hermite family,
///   K^Her(x,y) = K^((alpha-1)/2,theta)(x^2,y^2) + x^theta y K^((alpha+theta)/2,theta)(x^2,y^2),
/// with x^theta = sign(x)|x|^theta. Defined on all of R^2.
inline double limit_kernel_hermite(const LimitKernelParams& p, double x, double y,
                                   KernelMethod method = KernelMethod::Auto,
                                   const SeriesConfig& config = {}) {
    const LimitKernelParams even{(p.alpha - 1.0) / 2.0, p.theta};
    const LimitKernelParams odd{(p.alpha + p.theta) / 2.0, p.theta};
    return limit_kernel(even, x * x, y * y, method, config)
           + signed_pow(x, p.theta) * y * limit_kernel(odd, x * x, y * y, method, config);
}

/// sin(pi(xi-eta)) / (pi(xi-eta)), 1 on the diagonal.
inline double sine_kernel(double xi, double eta) {
    const double d = pi_v * (xi - eta);
    if (std::fabs(d) < 1e-8)
        return 1.0 - d * d / 6.0;
    return std::sin(d) / d;
}

/// Classical Bessel kernel (phi1(x)phi2(y) - phi1(y)phi2(x)) / (x - y) with
/// phi1(x) = J_alpha(2 sqrt x), phi2 = x phi1'. Near the diagonal switches to
/// the analytic midpoint value J'^2 + (1 - alpha^2/z^2) J^2 (z = 2 sqrt m),
/// the limit of the difference quotient, avoiding the cancellation.
inline double bessel_kernel(double alpha, double x, double y, const SeriesConfig& config = {}) {
    if (!(alpha > -1.0)) throw std::domain_error("bessel_kernel: alpha must be > -1");
    if (!(x > 0.0) || !(y > 0.0)) throw std::domain_error("bessel_kernel: x and y must be > 0");
    auto jp = [&](double nu, double z) { // J_nu'(z)
        return bessel_j(nu - 1.0, z, config) - (nu / z) * bessel_j(nu, z, config);
    };
    if (std::fabs(x - y) <= 1e-6 * std::max(1.0, std::fabs(x))) {
        const double m = 0.5 * (x + y);
        const double z = 2.0 * std::sqrt(m);
        const double J = bessel_j(alpha, z, config);
        const double Jd = jp(alpha, z);
        return Jd * Jd + (1.0 - alpha * alpha / (z * z)) * J * J;
    }
    auto phi1 = [&](double u) { return bessel_j(alpha, 2.0 * std::sqrt(u), config); };
    auto phi2 = [&](double u) { return std::sqrt(u) * jp(alpha, 2.0 * std::sqrt(u)); };
    return (phi1(x) * phi2(y) - phi1(y) * phi2(x)) / (x - y);
}

} // namespace bioen
