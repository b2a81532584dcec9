#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "bioen/gram.hpp"
#include "bioen/numerics.hpp"
#include "bioen/signed_log.hpp"

namespace bioen {

enum class Family { Jacobi, Laguerre, Hermite };

inline std::string to_string(Family f) {
    switch (f) {
        case Family::Jacobi: return "jacobi";
        case Family::Laguerre: return "laguerre";
        case Family::Hermite: return "hermite";
    }
    return "?";
}

inline Family family_from_string(const std::string& s) {
    if (s == "jacobi") return Family::Jacobi;
    if (s == "laguerre") return Family::Laguerre;
    if (s == "hermite") return Family::Hermite;
    throw std::domain_error("unknown family '" + s + "' (expected jacobi, laguerre or hermite)");
}

/// An ensemble instance: weight family, its (alpha, theta) and point count.
struct EnsembleSpec {
    Family family;
    double alpha;
    double theta;
    int n_points;

    EnsembleSpec(Family family, double alpha, double theta, int n_points)
        : family(family), alpha(alpha), theta(theta), n_points(n_points) {
        if (!(alpha > -1.0)) throw std::domain_error("alpha must be > -1");
        if (!(theta > 0.0)) throw std::domain_error("theta must be > 0");
        if (n_points < 1) throw std::domain_error("n must be >= 1");
    }
};

/// ln of the weight; -inf outside the family's interval. Total, for sampler use.
inline double log_weight(const EnsembleSpec& spec, double x) {
    switch (spec.family) {
        case Family::Jacobi:
            if (!(x > 0.0 && x < 1.0)) return -std::numeric_limits<double>::infinity();
            return spec.alpha * std::log(x);
        case Family::Laguerre:
            if (!(x > 0.0)) return -std::numeric_limits<double>::infinity();
            return spec.alpha * std::log(x) - x;
        case Family::Hermite:
            if (x == 0.0)
                return spec.alpha == 0.0 ? 0.0
                                         : (spec.alpha > 0.0 ? -std::numeric_limits<double>::infinity()
                                                             : std::numeric_limits<double>::infinity());
            return spec.alpha * std::log(std::fabs(x)) - x * x;
    }
    return -std::numeric_limits<double>::infinity();
}

/// Weight function on the family's interval; throws outside it.
inline double weight(const EnsembleSpec& spec, double x) {
    switch (spec.family) {
        case Family::Jacobi:
            if (!(x > 0.0 && x < 1.0)) throw std::domain_error("weight: x must be in (0,1)");
            return std::pow(x, spec.alpha);
        case Family::Laguerre:
            if (!(x > 0.0)) throw std::domain_error("weight: x must be > 0");
            return std::pow(x, spec.alpha) * std::exp(-x);
        case Family::Hermite:
            if (!std::isfinite(x)) throw std::domain_error("weight: x must be finite");
            return std::pow(std::fabs(x), spec.alpha) * std::exp(-x * x);
    }
    throw std::domain_error("weight: unknown family");
}

namespace detail {

// Coefficient table for the Laguerre kernel: entry (k,i) carries everything
// in the (k,i) summand except the monomials x^{theta k} y^i and the
// truncated-exponential factor; theta and 1/(alpha+theta k+i+1) folded in.
struct LaguerreKernelTable {
    int n = 0;
    std::vector<SignedLogValue> c; // (k,i), row-major
    const SignedLogValue& at(int k, int i) const { return c[static_cast<std::size_t>(k) * n + i]; }
};

inline LaguerreKernelTable build_laguerre_table(double alpha, double theta, int n) {
    LaguerreKernelTable t;
    t.n = n;
    t.c.resize(static_cast<std::size_t>(n) * n);
    const double lt = std::log(theta);
    std::vector<double> kpart(n), ipart(n);
    for (int k = 0; k < n; ++k)
        kpart[k] = -std::lgamma(alpha + theta * k + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 0.0);
    for (int i = 0; i < n; ++i)
        ipart[i] = std::lgamma(n + (i + alpha + 1.0) / theta) - std::lgamma((i + alpha + 1.0) / theta)
                   - std::lgamma(i + 1.0);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            t.c[static_cast<std::size_t>(k) * n + i] = SignedLogValue::from_log(
                (i + k) % 2 == 0 ? 1 : -1,
                lt + kpart[k] + ipart[i] - std::log(alpha + theta * k + i + 1.0));
    return t;
}

inline std::shared_ptr<const CoefficientMatrix> jacobi_table(double alpha, double theta, int n) {
    static std::mutex mtx;
    static std::map<std::tuple<double, double, int>, std::shared_ptr<const CoefficientMatrix>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto& slot = cache[{alpha, theta, n}];
    if (!slot) slot = std::make_shared<const CoefficientMatrix>(jacobi_coeffs(alpha, theta, n));
    return slot;
}

inline std::shared_ptr<const LaguerreKernelTable> laguerre_table(double alpha, double theta, int n) {
    static std::mutex mtx;
    static std::map<std::tuple<double, double, int>, std::shared_ptr<const LaguerreKernelTable>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto& slot = cache[{alpha, theta, n}];
    if (!slot) slot = std::make_shared<const LaguerreKernelTable>(build_laguerre_table(alpha, theta, n));
    return slot;
}

// n = 0 allowed (empty sum), needed by the Hermite odd part at N = 1.
inline double kernel_laguerre_impl(double alpha, double theta, int n, double x, double y) {
    if (n == 0) return 0.0;
    const auto table = laguerre_table(alpha, theta, n);
    const double lx = x == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(x);
    const double ly = y == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(y);
    // log E_m(y), E_m(y) = sum_{s<=m} y^s/s!; the inner r-sum of the kernel is
    // y^i E_{n-1-i}(y) after the substitution s = r - i.
    std::vector<double> logE(static_cast<std::size_t>(n), 0.0);
    for (int m = 1; m < n; ++m) {
        const double add = y == 0.0 ? -std::numeric_limits<double>::infinity()
                                    : m * ly - std::lgamma(m + 1.0);
        const double big = std::max(logE[m - 1], add);
        logE[m] = big + std::log1p(std::exp(std::min(logE[m - 1], add) - big));
    }
    SignedLogSum sum;
    for (int k = 0; k < n; ++k) {
        if (x == 0.0 && k > 0) break;
        const double xk = k == 0 ? 0.0 : theta * k * lx;
        for (int i = 0; i < n; ++i) {
            if (y == 0.0 && i > 0) break;
            const double yi = i == 0 ? 0.0 : i * ly;
            const SignedLogValue& c = table->at(k, i);
            sum.add(SignedLogValue::from_log(c.sign, c.log_mag + xk + yi + logE[n - 1 - i]));
        }
    }
    return sum.to_real();
}

} // namespace detail

/// Finite-N Jacobi-type kernel, the double sum
///   K_N(x,y) = sum_{k,l} c_kl x^{k-1} y^{theta(l-1)},
/// with the signed-log coefficients paired against the signed-log monomials
/// before exponentiation. Continuous extension at the endpoints.
inline double kernel_jacobi(double alpha, double theta, int n, double x, double y) {
    if (!(x >= 0.0 && x <= 1.0) || !(y >= 0.0 && y <= 1.0))
        throw std::domain_error("kernel_jacobi: x and y must lie in [0,1]");
    const auto C = detail::jacobi_table(alpha, theta, n);
    const double lx = x == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(x);
    const double ly = y == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(y);
    SignedLogSum sum;
    for (int k = 1; k <= n; ++k) {
        if (x == 0.0 && k > 1) break;
        const double xk = k == 1 ? 0.0 : (k - 1) * lx;
        for (int l = 1; l <= n; ++l) {
            if (y == 0.0 && l > 1) break;
            const double yl = l == 1 ? 0.0 : theta * (l - 1) * ly;
            const SignedLogValue& c = (*C)(k - 1, l - 1);
            sum.add(SignedLogValue::from_log(c.sign, c.log_mag + xk + yl));
        }
    }
    return sum.to_real();
}

/// Finite-N Laguerre-type kernel (triple sum with the inner truncated
/// exponential accumulated per y). Continuous extension at x = 0 or y = 0.
inline double kernel_laguerre(double alpha, double theta, int n, double x, double y) {
    if (n < 1) throw std::domain_error("kernel_laguerre: n must be >= 1");
    if (!(x >= 0.0) || !(y >= 0.0))
        throw std::domain_error("kernel_laguerre: x and y must be >= 0");
    return detail::kernel_laguerre_impl(alpha, theta, n, x, y);
}

/// Finite-N Hermite-type kernel by parity decomposition: ceil(N/2) even-index
/// terms give a Laguerre kernel at (alpha-1)/2, floor(N/2) odd-index terms one
/// at (alpha+theta)/2, glued with the signed power x^theta.
inline double kernel_hermite(double alpha, double theta, int n, double x, double y) {
    if (n < 1) throw std::domain_error("kernel_hermite: n must be >= 1");
    const int n_even = (n + 1) / 2;
    const int n_odd = n / 2;
    const double even = detail::kernel_laguerre_impl((alpha - 1.0) / 2.0, theta, n_even, x * x, y * y);
    if (n_odd == 0) return even;
    return even + signed_pow(x, theta) * y
                      * detail::kernel_laguerre_impl((alpha + theta) / 2.0, theta, n_odd, x * x, y * y);
}

/// Family dispatcher for the finite-N kernel.
inline double kernel_value(const EnsembleSpec& spec, double x, double y) {
    switch (spec.family) {
        case Family::Jacobi: return kernel_jacobi(spec.alpha, spec.theta, spec.n_points, x, y);
        case Family::Laguerre: return kernel_laguerre(spec.alpha, spec.theta, spec.n_points, x, y);
        case Family::Hermite: return kernel_hermite(spec.alpha, spec.theta, spec.n_points, x, y);
    }
    throw std::domain_error("kernel_value: unknown family");
}

/// Kernel values on a point set, kept with the points that produced them.
struct KernelMatrix {
    Eigen::MatrixXd values;
    std::vector<double> points;
};

inline KernelMatrix kernel_matrix(const EnsembleSpec& spec, const std::vector<double>& points) {
    const int k = static_cast<int>(points.size());
    KernelMatrix m;
    m.points = points;
    m.values.resize(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            m.values(i, j) = kernel_value(spec, points[i], points[j]);
    return m;
}

/// n-point correlation function: prod_i w(x_i) * det[K_N(x_i,x_j)].
/// Duplicate points are allowed (the determinant is then zero up to roundoff).
inline double correlation(const EnsembleSpec& spec, const std::vector<double>& points) {
    if (points.empty()) return 1.0;
    if (static_cast<int>(points.size()) > spec.n_points)
        throw std::domain_error("correlation: at most N points");
    double w = 1.0;
    for (double x : points) w *= weight(spec, x);
    const KernelMatrix m = kernel_matrix(spec, points);
    return w * Eigen::PartialPivLU<Eigen::MatrixXd>(m.values).determinant();
}

} // namespace bioen
