#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "bioen/gram.hpp"
#include "bioen/kernels.hpp"
#include "bioen/numerics.hpp"
#include "bioen/signed_log.hpp"

namespace bioen {

/// Polynomial with real coefficients by ascending degree.
struct DensePolynomial {
    std::vector<double> coeffs;

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }

    double operator()(double x) const {
        double r = 0.0;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
            r = r * x + *it;
        return r;
    }
};

/// Generalized polynomial sum_i c_i x^{e_i} with signed-log coefficients and
/// strictly increasing real exponents; evaluated for x > 0 (x = 0 allowed
/// when all exponents are nonnegative).
class ExponentPolynomial {
public:
    struct Term {
        SignedLogValue coef;
        double exponent;
    };

    ExponentPolynomial(std::vector<Term> terms, double normalization)
        : terms_(std::move(terms)), normalization_(normalization) {
        std::sort(terms_.begin(), terms_.end(),
                  [](const Term& a, const Term& b) { return a.exponent < b.exponent; });
        for (std::size_t i = 1; i < terms_.size(); ++i)
            if (!(terms_[i - 1].exponent < terms_[i].exponent))
                throw std::domain_error("ExponentPolynomial: exponents must be strictly increasing");
    }

    const std::vector<Term>& terms() const { return terms_; }

    /// The sqrt normalization constant folded into the coefficients.
    double normalization() const { return normalization_; }

    double operator()(double x) const {
        if (x == 0.0) {
            double r = 0.0;
            for (const Term& t : terms_) {
                if (t.exponent < 0.0 && !t.coef.is_zero())
                    throw std::domain_error("ExponentPolynomial: negative exponent at x = 0");
                if (t.exponent == 0.0) r += t.coef.to_real();
            }
            return r;
        }
        if (!(x > 0.0)) throw std::domain_error("ExponentPolynomial: x must be >= 0");
        const double lx = std::log(x);
        SignedLogSum s;
        for (const Term& t : terms_)
            s.add(SignedLogValue::from_log(t.coef.sign, t.coef.log_mag + t.exponent * lx));
        return s.to_real();
    }

private:
    std::vector<Term> terms_;
    double normalization_;
};

/// Biorthonormal pair for the exponent systems x^{a_i}, x^{b_i} on [0,1]
/// with unit weight:
///   zeta_n(x) = sqrt(a_n+b_n+1) sum_i [prod_{k<n}(a_i+b_k+1) /
///               prod_{k<=n,k!=i}(a_i-a_k)] x^{a_i},
/// psi_n the same with the roles of a and b swapped.
inline std::pair<ExponentPolynomial, ExponentPolynomial>
biortho_pair_general(const std::vector<double>& a_seq, const std::vector<double>& b_seq, int n) {
    if (n < 1) throw std::domain_error("biortho_pair_general: n must be >= 1");
    if (static_cast<int>(a_seq.size()) < n || static_cast<int>(b_seq.size()) < n)
        throw std::domain_error("biortho_pair_general: sequences shorter than n");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (!(a_seq[i] + b_seq[j] > -1.0))
                throw std::domain_error("biortho_pair_general: a[" + std::to_string(i) + "] + b[" +
                                        std::to_string(j) + "] must be > -1");
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (a_seq[i] == a_seq[j])
                throw std::domain_error("biortho_pair_general: duplicate a at indices " +
                                        std::to_string(i) + "," + std::to_string(j));
            if (b_seq[i] == b_seq[j])
                throw std::domain_error("biortho_pair_general: duplicate b at indices " +
                                        std::to_string(i) + "," + std::to_string(j));
        }
    const double norm = std::sqrt(a_seq[n - 1] + b_seq[n - 1] + 1.0);
    auto build = [&](const std::vector<double>& a, const std::vector<double>& b) {
        std::vector<ExponentPolynomial::Term> terms;
        terms.reserve(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            SignedLogValue c = SignedLogValue::from_real(norm);
            for (int k = 0; k < n - 1; ++k)
                c *= SignedLogValue::from_real(a[i] + b[k] + 1.0);
            for (int k = 0; k < n; ++k)
                if (k != i) c = c / SignedLogValue::from_real(a[i] - a[k]);
            terms.push_back({c, a[i]});
        }
        return ExponentPolynomial(std::move(terms), norm);
    };
    return {build(a_seq, b_seq), build(b_seq, a_seq)};
}

namespace detail {

inline constexpr int kMaxKonhauserDegree = 12;

// Stirling numbers of the second kind up to kMaxKonhauserDegree; exact.
inline double stirling2(int m, int r) {
    static const auto table = [] {
        std::array<std::array<double, kMaxKonhauserDegree + 1>, kMaxKonhauserDegree + 1> t{};
        t[0][0] = 1.0;
        for (int m = 1; m <= kMaxKonhauserDegree; ++m)
            for (int r = 1; r <= m; ++r)
                t[m][r] = r * t[m - 1][r] + t[m - 1][r - 1];
        return t;
    }();
    return table[static_cast<std::size_t>(m)][static_cast<std::size_t>(r)];
}

inline void check_konhauser_args(double alpha, double theta, int n) {
    if (!(alpha > -1.0)) throw std::domain_error("alpha must be > -1");
    if (!(theta > 0.0)) throw std::domain_error("theta must be > 0");
    if (n < 0 || n > kMaxKonhauserDegree)
        throw std::domain_error("konhauser polynomials are provided for degree <= " +
                                std::to_string(kMaxKonhauserDegree));
}

} // namespace detail

/// Konhauser polynomial Z_n(x) = sum_j C(n,j) (-1)^j x^j / Gamma(theta j + alpha + 1)
/// (orthonormal normalization).
inline DensePolynomial konhauser_Z(double alpha, double theta, int n) {
    detail::check_konhauser_args(alpha, theta, n);
    DensePolynomial p;
    p.coeffs.resize(static_cast<std::size_t>(n) + 1);
    for (int j = 0; j <= n; ++j)
        p.coeffs[static_cast<std::size_t>(j)] =
            (j % 2 == 0 ? 1.0 : -1.0) * binomial(n, j) * std::exp(-std::lgamma(theta * j + alpha + 1.0));
    return p;
}

/// Konhauser partner Y_n(x) = (1/n!) sum_r (x^r/r!) sum_i (-1)^i C(r,i) ((i+alpha+1)/theta)_n.
/// The alternating inner sum is evaluated without cancellation: expand
/// ((i+alpha+1)/theta)_n in powers of i (all coefficients positive) and use
/// sum_i (-1)^i C(r,i) i^m = (-1)^r r! S2(m,r), so the coefficient of x^r is
/// ((-1)^r/n!) sum_m coef_m S2(m,r), a same-sign sum.
inline DensePolynomial konhauser_Y(double alpha, double theta, int n) {
    detail::check_konhauser_args(alpha, theta, n);
    std::vector<double> poly{1.0}; // coefficients of prod_j ((alpha+1)/theta + j + i/theta) in i
    const double s = 1.0 / theta;
    for (int j = 0; j < n; ++j) {
        const double aj = (alpha + 1.0) / theta + j;
        std::vector<double> next(poly.size() + 1, 0.0);
        for (std::size_t m = 0; m < poly.size(); ++m) {
            next[m] += aj * poly[m];
            next[m + 1] += s * poly[m];
        }
        poly = std::move(next);
    }
    const double inv_nfact = std::exp(-std::lgamma(n + 1.0));
    DensePolynomial p;
    p.coeffs.resize(static_cast<std::size_t>(n) + 1);
    for (int r = 0; r <= n; ++r) {
        double acc = 0.0;
        for (int m = r; m <= n; ++m)
            acc += poly[static_cast<std::size_t>(m)] * detail::stirling2(m, r);
        p.coeffs[static_cast<std::size_t>(r)] = (r % 2 == 0 ? 1.0 : -1.0) * inv_nfact * acc;
    }
    return p;
}

enum class Parity { Even, Odd };

/// A Hermite-type biorthogonal polynomial: parity flag plus the radial
/// polynomial in the squared variable. eval(u) = u^{parity} * radial(u^2).
struct ParityPolynomial {
    Parity parity;
    DensePolynomial radial;

    double eval(double u) const {
        const double r = radial(u * u);
        return parity == Parity::Odd ? u * r : r;
    }
};

/// Hermite-type S_n: S_{2m} = Z_m at (alpha-1)/2, S_{2m+1} = x Z_m at (alpha+theta)/2.
inline ParityPolynomial hermite_S(double alpha, double theta, int n) {
    if (n < 0) throw std::domain_error("hermite_S: n must be >= 0");
    const bool odd = n % 2 != 0;
    const double a = odd ? (alpha + theta) / 2.0 : (alpha - 1.0) / 2.0;
    return {odd ? Parity::Odd : Parity::Even, konhauser_Z(a, theta, n / 2)};
}

/// Hermite-type T_n: same construction with Y in place of Z.
inline ParityPolynomial hermite_T(double alpha, double theta, int n) {
    if (n < 0) throw std::domain_error("hermite_T: n must be >= 0");
    const bool odd = n % 2 != 0;
    const double a = odd ? (alpha + theta) / 2.0 : (alpha - 1.0) / 2.0;
    return {odd ? Parity::Odd : Parity::Even, konhauser_Y(a, theta, n / 2)};
}

/// Kernel as the explicit polynomial sum sum_{i<N} zeta_i(x) psi_i(y):
/// Laguerre uses Z_i(x^theta) Y_i(y), Hermite S_i(x^theta) T_i(y), Jacobi the
/// Gauss-decomposition pair of its Gram matrix. A verification surface for
/// the closed-form kernels, not the scalable path.
inline double kernel_from_polynomials(Family family, double alpha, double theta, int n,
                                      double x, double y) {
    if (n < 1) throw std::domain_error("kernel_from_polynomials: n must be >= 1");
    switch (family) {
        case Family::Laguerre: {
            double s = 0.0;
            const double xt = std::pow(x, theta);
            for (int i = 0; i < n; ++i)
                s += konhauser_Z(alpha, theta, i)(xt) * konhauser_Y(alpha, theta, i)(y);
            return s;
        }
        case Family::Hermite: {
            double s = 0.0;
            const double xt = signed_pow(x, theta);
            for (int i = 0; i < n; ++i)
                s += hermite_S(alpha, theta, i).eval(xt) * hermite_T(alpha, theta, i).eval(y);
            return s;
        }
        case Family::Jacobi: {
            const auto [L, U] = biorthogonalize(jacobi_gram(alpha, theta, n));
            double s = 0.0;
            for (int i = 0; i < n; ++i) {
                double zeta = 0.0, psi = 0.0;
                for (int j = 0; j < n; ++j) {
                    zeta += U(j, i) * std::pow(x, j);
                    psi += L(i, j) * std::pow(y, theta * j);
                }
                s += zeta * psi;
            }
            return s;
        }
    }
    throw std::domain_error("kernel_from_polynomials: unknown family");
}

} // namespace bioen
