#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "bioen/errors.hpp"
#include "bioen/numerics.hpp"
#include "bioen/signed_log.hpp"

namespace bioen {

/// Dense matrix of signed-log entries. Indexing is 0-based.
class SignedLogMatrix {
public:
    SignedLogMatrix() = default;
    explicit SignedLogMatrix(int n) : n_(n), e_(static_cast<std::size_t>(n) * n) {}

    int n() const { return n_; }
    SignedLogValue& operator()(int i, int j) { return e_[static_cast<std::size_t>(i) * n_ + j]; }
    const SignedLogValue& operator()(int i, int j) const { return e_[static_cast<std::size_t>(i) * n_ + j]; }

    /// Plain-double view; entries beyond double range saturate to +/-inf.
    Eigen::MatrixXd to_dense() const {
        Eigen::MatrixXd m(n_, n_);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j)
                m(i, j) = (*this)(i, j).to_real();
        return m;
    }

private:
    int n_ = 0;
    std::vector<SignedLogValue> e_;
};

/// Houses the coefficient matrix C = G^{-1} of a biorthogonal kernel.
using CoefficientMatrix = SignedLogMatrix;

/// The node sequences of a Cauchy matrix M_ij = 1/(A_i + B_j).
struct CauchySystem {
    std::vector<double> A;
    std::vector<double> B;

    CauchySystem(std::vector<double> a, std::vector<double> b) : A(std::move(a)), B(std::move(b)) {
        if (A.size() != B.size() || A.empty())
            throw SingularityError("CauchySystem: A and B must be non-empty and of equal length");
        const int n = static_cast<int>(A.size());
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                if (A[i] == A[j])
                    throw SingularityError("CauchySystem: duplicate A values at indices " +
                                           std::to_string(i) + " and " + std::to_string(j));
                if (B[i] == B[j])
                    throw SingularityError("CauchySystem: duplicate B values at indices " +
                                           std::to_string(i) + " and " + std::to_string(j));
            }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (A[i] + B[j] == 0.0)
                    throw SingularityError("CauchySystem: A[" + std::to_string(i) + "] + B[" +
                                           std::to_string(j) + "] = 0");
    }

    int n() const { return static_cast<int>(A.size()); }
};

/// Closed-form inverse of the Cauchy matrix 1/(A_i + B_j):
///   C_kl = prod_i (B_i+A_l)(A_i+B_k) / [prod_{i!=l}(A_l-A_i) prod_{j!=k}(B_k-B_j) (A_l+B_k)],
/// assembled entirely in signed-log arithmetic from per-row/column prefix sums.
inline CoefficientMatrix cauchy_inverse(const CauchySystem& sys) {
    const int n = sys.n();
    std::vector<SignedLogValue> num_a(n), num_b(n), den_a(n), den_b(n);
    for (int l = 0; l < n; ++l) {
        SignedLogValue pn = SignedLogValue::one(), pd = SignedLogValue::one();
        for (int i = 0; i < n; ++i) {
            pn *= SignedLogValue::from_real(sys.B[i] + sys.A[l]);
            if (i != l) pd *= SignedLogValue::from_real(sys.A[l] - sys.A[i]);
        }
        num_a[l] = pn;
        den_a[l] = pd;
    }
    for (int k = 0; k < n; ++k) {
        SignedLogValue pn = SignedLogValue::one(), pd = SignedLogValue::one();
        for (int i = 0; i < n; ++i) {
            pn *= SignedLogValue::from_real(sys.A[i] + sys.B[k]);
            if (i != k) pd *= SignedLogValue::from_real(sys.B[k] - sys.B[i]);
        }
        num_b[k] = pn;
        den_b[k] = pd;
    }
    CoefficientMatrix C(n);
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
            C(k, l) = num_a[l] * num_b[k] / (den_a[l] * den_b[k] * SignedLogValue::from_real(sys.A[l] + sys.B[k]));
    return C;
}

/// Gram matrix of the Jacobi-type pairing, g_ij = 1/(j + theta(i-1) + alpha),
/// i,j = 1..n.
inline Eigen::MatrixXd jacobi_gram(double alpha, double theta, int n) {
    if (!(alpha > -1.0)) throw std::domain_error("alpha must be > -1");
    if (!(theta > 0.0)) throw std::domain_error("theta must be > 0");
    if (n < 1) throw std::domain_error("n must be >= 1");
    Eigen::MatrixXd g(n, n);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
            g(i - 1, j - 1) = 1.0 / (j + theta * (i - 1) + alpha);
    return g;
}

/// Closed-form inverse of jacobi_gram, entry (k,l), k,l = 1..n:
///   theta * ((k+alpha)/theta)_n / ((k-1)!(n-k)!) * (theta(l-1)+alpha+1)_n /
///   ((l-1)!(n-l)!) * (-1)^{k+l} / (k + theta(l-1) + alpha).
inline CoefficientMatrix jacobi_coeffs(double alpha, double theta, int n) {
    if (!(alpha > -1.0)) throw std::domain_error("alpha must be > -1");
    if (!(theta > 0.0)) throw std::domain_error("theta must be > 0");
    if (n < 1) throw std::domain_error("n must be >= 1");
    std::vector<double> row(n), col(n);
    for (int k = 1; k <= n; ++k)
        row[k - 1] = log_pochhammer((k + alpha) / theta, n).log_mag
                     - std::lgamma(k) - std::lgamma(n - k + 1.0);
    for (int l = 1; l <= n; ++l)
        col[l - 1] = log_pochhammer(theta * (l - 1) + alpha + 1.0, n).log_mag
                     - std::lgamma(l) - std::lgamma(n - l + 1.0);
    CoefficientMatrix C(n);
    const double lt = std::log(theta);
    for (int k = 1; k <= n; ++k)
        for (int l = 1; l <= n; ++l)
            C(k - 1, l - 1) = SignedLogValue::from_log(
                (k + l) % 2 == 0 ? 1 : -1,
                lt + row[k - 1] + col[l - 1] - std::log(k + theta * (l - 1) + alpha));
    return C;
}

/// Gram matrix of the Laguerre-type two-interval pairing,
///   g~_ij = Gamma(1 + alpha + n + theta(j-1)) / (alpha + n + theta(j-1) - (i-1)),
/// stored in signed-log form (the Gamma factor overflows double near n ~ 170).
inline SignedLogMatrix laguerre_gram_tilde(double alpha, double theta, int n) {
    if (!(alpha > -1.0)) throw std::domain_error("alpha must be > -1");
    if (!(theta > 0.0)) throw std::domain_error("theta must be > 0");
    if (n < 1) throw std::domain_error("n must be >= 1");
    SignedLogMatrix g(n);
    for (int j = 1; j <= n; ++j) {
        const double lg = std::lgamma(1.0 + alpha + n + theta * (j - 1));
        for (int i = 1; i <= n; ++i)
            g(i - 1, j - 1) = SignedLogValue::from_log(
                1, lg - std::log(alpha + n + theta * (j - 1) - (i - 1)));
    }
    return g;
}

/// Closed-form inverse of laguerre_gram_tilde, entry (k,l), k,l = 1..n:
///   theta / Gamma(1+alpha+theta(k-1)) / ((k-1)!(n-k)!) *
///   ((alpha+n-(l-1))/theta)_n / ((l-1)!(n-l)!) *
///   (-1)^{n+k+l+1} / (alpha+n+theta(k-1)-(l-1)).
inline CoefficientMatrix laguerre_coeffs(double alpha, double theta, int n) {
    if (!(alpha > -1.0)) throw std::domain_error("alpha must be > -1");
    if (!(theta > 0.0)) throw std::domain_error("theta must be > 0");
    if (n < 1) throw std::domain_error("n must be >= 1");
    std::vector<double> row(n), col(n);
    for (int k = 1; k <= n; ++k)
        row[k - 1] = -std::lgamma(1.0 + alpha + theta * (k - 1))
                     - std::lgamma(k) - std::lgamma(n - k + 1.0);
    for (int l = 1; l <= n; ++l)
        col[l - 1] = log_pochhammer((alpha + n - (l - 1)) / theta, n).log_mag
                     - std::lgamma(l) - std::lgamma(n - l + 1.0);
    CoefficientMatrix C(n);
    const double lt = std::log(theta);
    for (int k = 1; k <= n; ++k)
        for (int l = 1; l <= n; ++l)
            C(k - 1, l - 1) = SignedLogValue::from_log(
                (n + k + l + 1) % 2 == 0 ? 1 : -1,
                lt + row[k - 1] + col[l - 1] - std::log(alpha + n + theta * (k - 1) - (l - 1)));
    return C;
}

/// Gauss decomposition biorthogonalization: triangular L, U with
/// L * G * U = I. Rows of L give the psi coefficients, columns of U the zeta
/// coefficients. No pivoting (pivoting would break the span nesting); a
/// near-zero pivot reports the failing principal-minor order.
inline std::pair<Eigen::MatrixXd, Eigen::MatrixXd> biorthogonalize(const Eigen::MatrixXd& gram) {
    const int n = static_cast<int>(gram.rows());
    if (gram.cols() != n || n < 1)
        throw std::domain_error("biorthogonalize: gram must be square and non-empty");
    const double scale = gram.cwiseAbs().maxCoeff();
    Eigen::MatrixXd A = gram;   // becomes U0 (upper) with unit-lower factors below
    Eigen::MatrixXd L0 = Eigen::MatrixXd::Identity(n, n);
    for (int k = 0; k < n; ++k) {
        if (std::fabs(A(k, k)) <= 1e-13 * scale)
            throw DecompositionError("biorthogonalize: vanishing principal minor of order " +
                                     std::to_string(k + 1), k + 1);
        for (int i = k + 1; i < n; ++i) {
            const double m = A(i, k) / A(k, k);
            L0(i, k) = m;
            A.row(i).tail(n - k) -= m * A.row(k).tail(n - k);
        }
    }
    // G = L0 * U0  =>  L = L0^{-1}, U = U0^{-1}
    const Eigen::MatrixXd L = L0.triangularView<Eigen::UnitLower>().solve(Eigen::MatrixXd::Identity(n, n));
    Eigen::MatrixXd U0 = A.triangularView<Eigen::Upper>();
    const Eigen::MatrixXd U = U0.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(n, n));
    return {L, U};
}

/// max_|kj| |(C*G)_kj - delta_kj| with compensated signed-log accumulation.
inline double identity_residual(const CoefficientMatrix& C, const Eigen::MatrixXd& G) {
    const int n = C.n();
    double r = 0.0;
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) {
            SignedLogSum s;
            for (int l = 0; l < n; ++l)
                s.add(C(k, l) * SignedLogValue::from_real(G(l, j)));
            s.add(SignedLogValue::from_real(k == j ? -1.0 : 0.0));
            r = std::max(r, std::fabs(s.to_real()));
        }
    return r;
}

inline double identity_residual(const CoefficientMatrix& C, const SignedLogMatrix& G) {
    const int n = C.n();
    double r = 0.0;
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j) {
            SignedLogSum s;
            for (int l = 0; l < n; ++l)
                s.add(C(k, l) * G(l, j));
            s.add(SignedLogValue::from_real(k == j ? -1.0 : 0.0));
            r = std::max(r, std::fabs(s.to_real()));
        }
    return r;
}

} // namespace bioen
