#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "bioen/errors.hpp"
#include "bioen/numerics.hpp"

namespace bioen {

/// Nodes and weights for integral of f(t) * t^alpha over (0,1), the t^alpha
/// endpoint weight absorbed into the rule so the singularity at t = 0 is
/// never sampled.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

namespace detail {

// Golub-Welsch for the Jacobi weight (1+x)^alpha on [-1,1] (a = 0, b = alpha),
// mapped to t = (x+1)/2. Nodes are eigenvalues of the recurrence tridiagonal;
// weights come from the Christoffel function 1/sum_k p_k(x_i)^2 with the
// orthonormal recurrence, which avoids storing eigenvectors.
inline QuadratureRule build_gauss_jacobi_01(double alpha, int n) {
    const double mu0 = std::pow(2.0, alpha + 1.0) / (alpha + 1.0);
    Eigen::VectorXd diag(n), sub(n - 1 > 0 ? n - 1 : 0);
    std::vector<double> beta(static_cast<std::size_t>(n), 0.0); // beta_k, k>=1 used
    diag(0) = alpha / (alpha + 2.0);
    for (int k = 1; k < n; ++k) {
        const double s = 2.0 * k + alpha;
        diag(k) = alpha * alpha / (s * (s + 2.0));
        beta[static_cast<std::size_t>(k)] =
            4.0 * k * k * (k + alpha) * (k + alpha) / (s * s * (s + 1.0) * (s - 1.0));
        sub(k - 1) = std::sqrt(beta[static_cast<std::size_t>(k)]);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& x = es.eigenvalues();

    QuadratureRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    const double wscale = std::pow(2.0, -alpha - 1.0);
    for (int i = 0; i < n; ++i) {
        // orthonormal recurrence: sqrt(b_{k+1}) p_{k+1} = (x - a_k) p_k - sqrt(b_k) p_{k-1}
        double pm1 = 0.0, p = 1.0 / std::sqrt(mu0), sum = p * p;
        for (int k = 0; k + 1 < n; ++k) {
            const double pn = ((x(i) - diag(k)) * p - (k > 0 ? std::sqrt(beta[static_cast<std::size_t>(k)]) : 0.0) * pm1)
                              / std::sqrt(beta[static_cast<std::size_t>(k + 1)]);
            pm1 = p;
            p = pn;
            sum += p * p;
        }
        rule.nodes[static_cast<std::size_t>(i)] = 0.5 * (x(i) + 1.0);
        rule.weights[static_cast<std::size_t>(i)] = wscale / sum;
    }
    return rule;
}

} // namespace detail

/// Cached Gauss-Jacobi rule for weight t^alpha on (0,1).
inline std::shared_ptr<const QuadratureRule> gauss_jacobi_01(double alpha, int n) {
    if (!(alpha > -1.0)) throw std::domain_error("gauss_jacobi_01: alpha must be > -1");
    if (n < 1) throw std::domain_error("gauss_jacobi_01: order must be >= 1");
    static std::mutex mtx;
    static std::map<std::pair<double, int>, std::shared_ptr<const QuadratureRule>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto& slot = cache[{alpha, n}];
    if (!slot) slot = std::make_shared<const QuadratureRule>(detail::build_gauss_jacobi_01(alpha, n));
    return slot;
}

/// Integral of f(t) * t^alpha over (0,1). The rule order doubles until two
/// successive orders agree to the requested tolerance.
template <typename F>
double integrate_weighted(F&& f, double alpha, const SeriesConfig& config = {}) {
    if (!(alpha > -1.0)) throw std::domain_error("integrate_weighted: alpha must be > -1");
    config.validate();
    double prev = 0.0;
    bool have_prev = false;
    for (int n = 16; n <= 4096; n *= 2) {
        const auto rule = gauss_jacobi_01(alpha, n);
        double s = 0.0, c = 0.0;
        for (std::size_t i = 0; i < rule->nodes.size(); ++i) {
            const double t = rule->weights[i] * f(rule->nodes[i]);
            const double y = s + t;
            if (std::fabs(s) >= std::fabs(t)) c += (s - y) + t; else c += (t - y) + s;
            s = y;
        }
        s += c;
        if (have_prev && std::fabs(s - prev) <= std::max(config.abs_tol, config.rel_tol * std::fabs(s)))
            return s;
        prev = s;
        have_prev = true;
    }
    throw AccuracyError("integrate_weighted: adaptive refinement did not converge", prev);
}

/// Integral of f(t) * t^alpha over (0, upper).
template <typename F>
double integrate_power_weighted(F&& f, double alpha, double upper, const SeriesConfig& config = {}) {
    if (!(upper > 0.0)) throw std::domain_error("integrate_power_weighted: upper must be > 0");
    const double scale = std::pow(upper, alpha + 1.0);
    return scale * integrate_weighted([&](double t) { return f(upper * t); }, alpha, config);
}

/// Integral of f(x) * x^alpha * exp(-x) over (0, inf) for f of at most
/// polynomial growth; truncated where the weight has fallen far below its
/// peak, then extended once to confirm the tail is negligible.
template <typename F>
double integrate_laguerre_weighted(F&& f, double alpha, const SeriesConfig& config = {},
                                   double degree_hint = 16.0) {
    const double peak = std::max(1.0, alpha + degree_hint);
    double upper = peak + 40.0 + 10.0 * std::sqrt(peak);
    double value = integrate_power_weighted([&](double x) { return f(x) * std::exp(-x); },
                                            alpha, upper, config);
    for (int pass = 0; pass < 3; ++pass) {
        const double wider = upper * 1.5;
        const double v2 = integrate_power_weighted([&](double x) { return f(x) * std::exp(-x); },
                                                   alpha, wider, config);
        if (std::fabs(v2 - value) <= std::max(config.abs_tol, 10.0 * config.rel_tol * std::fabs(v2)))
            return v2;
        upper = wider;
        value = v2;
    }
    throw AccuracyError("integrate_laguerre_weighted: truncation did not stabilize", value);
}

/// Integral of f(x) * |x|^alpha * exp(-x^2) over the real line, via u = x^2.
template <typename F>
double integrate_hermite_weighted(F&& f, double alpha, const SeriesConfig& config = {},
                                  double degree_hint = 16.0) {
    return 0.5 * integrate_laguerre_weighted(
                     [&](double u) {
                         const double r = std::sqrt(u);
                         return f(r) + f(-r);
                     },
                     0.5 * (alpha - 1.0), config, 0.5 * (alpha - 1.0) + 0.5 * degree_hint + 1.0);
}

} // namespace bioen
