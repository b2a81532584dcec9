#pragma once

#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>

#include "bioen/errors.hpp"
#include "bioen/signed_log.hpp"

namespace bioen {

inline constexpr double pi_v = 3.14159265358979323846264338327950288;

/// ln Gamma(x) for x > 0.
inline double log_gamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw std::domain_error("log_gamma: argument must be positive and finite");
    return std::lgamma(x);
}

/// sin(pi*x) with exact argument reduction, accurate near the zeros.
inline double sin_pi(double x) {
    const double n = std::nearbyint(x);
    const double r = x - n;
    const double s = std::sin(pi_v * r);
    return (static_cast<long long>(n) % 2 != 0) ? -s : s;
}

/// 1/Gamma in signed-log form; exact zero at the poles of Gamma.
/// For x <= 0 uses the reflection Gamma(x)Gamma(1-x) = pi/sin(pi x).
inline SignedLogValue signed_log_recip_gamma(double x) {
    if (!std::isfinite(x))
        throw std::domain_error("recip_gamma: argument must be finite");
    if (x > 0.0)
        return SignedLogValue{1, -std::lgamma(x)};
    if (x == std::floor(x))
        return SignedLogValue::zero();
    const double s = sin_pi(x);
    const int sign = s > 0.0 ? 1 : -1;
    return SignedLogValue{sign, std::lgamma(1.0 - x) + std::log(std::fabs(s)) - std::log(pi_v)};
}

/// 1/Gamma(x), total on finite reals: 0 at non-positive integers.
inline double recip_gamma(double x) {
    return signed_log_recip_gamma(x).to_real();
}

/// Pochhammer symbol (a)_m = a(a+1)...(a+m-1) with exact sign tracking.
inline SignedLogValue log_pochhammer(double a, long m) {
    if (m < 0) throw std::domain_error("log_pochhammer: m must be >= 0");
    if (m == 0) return SignedLogValue::one();
    if (a > 0.0) // all factors positive, one Gamma ratio
        return SignedLogValue{1, std::lgamma(a + static_cast<double>(m)) - std::lgamma(a)};
    int sign = 1;
    double lm = 0.0;
    for (long i = 0; i < m; ++i) {
        const double f = a + static_cast<double>(i);
        if (f == 0.0) return SignedLogValue::zero();
        if (f < 0.0) sign = -sign;
        lm += std::log(std::fabs(f));
    }
    return SignedLogValue{sign, lm};
}

/// Binomial coefficient as a double; exact for the small orders used here
/// (every intermediate is an integer below 2^53).
inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double r = 1.0;
    for (int i = 1; i <= k; ++i)
        r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return std::nearbyint(r);
}

/// Tolerances and guards shared by every series and quadrature evaluation.
struct SeriesConfig {
    double rel_tol = 1e-12;
    double abs_tol = 1e-300;
    int max_terms = 10000;
    int tail_window = 3; // consecutive below-tolerance terms required to stop

    void validate() const {
        if (!(rel_tol >= 10.0 * std::numeric_limits<double>::epsilon()))
            throw std::domain_error("SeriesConfig: rel_tol must be >= 10*machine epsilon");
        if (!(abs_tol >= 0.0))
            throw std::domain_error("SeriesConfig: abs_tol must be >= 0");
        if (tail_window < 1)
            throw std::domain_error("SeriesConfig: tail_window must be >= 1");
        if (max_terms < tail_window)
            throw std::domain_error("SeriesConfig: max_terms must be >= tail_window");
    }
};

/// Default config overridden by BIOEN_REL_TOL / BIOEN_ABS_TOL /
/// BIOEN_MAX_TERMS / BIOEN_TAIL_WINDOW, for the CLI surface.
inline SeriesConfig series_config_from_env(SeriesConfig base = {}) {
    if (const char* v = std::getenv("BIOEN_REL_TOL")) base.rel_tol = std::strtod(v, nullptr);
    if (const char* v = std::getenv("BIOEN_ABS_TOL")) base.abs_tol = std::strtod(v, nullptr);
    if (const char* v = std::getenv("BIOEN_MAX_TERMS")) base.max_terms = static_cast<int>(std::strtol(v, nullptr, 10));
    if (const char* v = std::getenv("BIOEN_TAIL_WINDOW")) base.tail_window = static_cast<int>(std::strtol(v, nullptr, 10));
    base.validate();
    return base;
}

struct SeriesResult {
    double value = 0.0;
    int terms_used = 0;
    bool converged = false;
};

/// Compensated summation of terms(0), terms(1), ... with a tail-window
/// stopping rule: stop once `tail_window` consecutive terms satisfy
/// |term| <= max(abs_tol, rel_tol * |partial sum|).
template <typename Generator>
SeriesResult sum_series(Generator&& terms, const SeriesConfig& config = {}) {
    config.validate();
    double sum = 0.0, comp = 0.0;
    int small_run = 0;
    for (int m = 0; m < config.max_terms; ++m) {
        const double t = terms(static_cast<std::size_t>(m));
        if (!std::isfinite(t))
            throw SeriesEvaluationError("sum_series: non-finite term at index " + std::to_string(m),
                                        static_cast<std::size_t>(m));
        const double s = sum + t;
        if (std::fabs(sum) >= std::fabs(t))
            comp += (sum - s) + t;
        else
            comp += (t - s) + sum;
        sum = s;
        const double bound = std::max(config.abs_tol, config.rel_tol * std::fabs(sum + comp));
        small_run = (std::fabs(t) <= bound) ? small_run + 1 : 0;
        if (small_run >= config.tail_window)
            return {sum + comp, m + 1, true};
    }
    return {sum + comp, config.max_terms, false};
}

} // namespace bioen
