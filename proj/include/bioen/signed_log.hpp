#pragma once

#include <cmath>
#include <limits>

namespace bioen {

/// Sign-and-log representation of a real number: sign in {-1,0,+1} and the
/// natural log of the magnitude. Carries products of Gamma functions and
/// factorials that overflow double long before the quantities they combine
/// into do.
struct SignedLogValue {
    int sign = 0;
    double log_mag = -std::numeric_limits<double>::infinity();

    static SignedLogValue zero() { return {}; }
    static SignedLogValue one() { return {1, 0.0}; }

    static SignedLogValue from_log(int sign, double log_mag) {
        if (sign == 0 || log_mag == -std::numeric_limits<double>::infinity())
            return zero();
        return {sign, log_mag};
    }

    static SignedLogValue from_real(double x) {
        if (x == 0.0) return zero();
        return {x > 0.0 ? 1 : -1, std::log(std::fabs(x))};
    }

    /// May overflow to +/-inf when log_mag > ~709.
    double to_real() const {
        if (sign == 0) return 0.0;
        return sign * std::exp(log_mag);
    }

    bool is_zero() const { return sign == 0; }

    SignedLogValue operator-() const { return {-sign, log_mag}; }

    friend SignedLogValue operator*(const SignedLogValue& a, const SignedLogValue& b) {
        if (a.sign == 0 || b.sign == 0) return zero();
        return {a.sign * b.sign, a.log_mag + b.log_mag};
    }

    friend SignedLogValue operator/(const SignedLogValue& a, const SignedLogValue& b) {
        if (a.sign == 0) return zero();
        return {a.sign * b.sign, a.log_mag - b.log_mag};
    }

    SignedLogValue& operator*=(const SignedLogValue& b) { return *this = *this * b; }

    friend SignedLogValue operator+(const SignedLogValue& a, const SignedLogValue& b) {
        if (a.sign == 0) return b;
        if (b.sign == 0) return a;
        const SignedLogValue& big = (a.log_mag >= b.log_mag) ? a : b;
        const SignedLogValue& small = (a.log_mag >= b.log_mag) ? b : a;
        const double d = small.log_mag - big.log_mag; // <= 0
        if (a.sign == b.sign)
            return {big.sign, big.log_mag + std::log1p(std::exp(d))};
        const double m = std::exp(d);
        if (m >= 1.0) return zero(); // equal magnitudes, opposite signs
        return {big.sign, big.log_mag + std::log1p(-m)};
    }
};

/// Compensated accumulator for many signed-log terms. Keeps a running
/// exponent offset at the largest term seen so every exp() argument is <= 0,
/// and sums the rescaled terms with Neumaier compensation.
class SignedLogSum {
public:
    void add(const SignedLogValue& v) {
        if (v.sign == 0) return;
        if (v.log_mag > max_log_) max_log_ = v.log_mag;
        if (scale_ == -std::numeric_limits<double>::infinity()) {
            scale_ = v.log_mag;
        } else if (v.log_mag > scale_) {
            const double f = std::exp(scale_ - v.log_mag);
            sum_ *= f;
            comp_ *= f;
            scale_ = v.log_mag;
        }
        add_compensated(v.sign * std::exp(v.log_mag - scale_));
    }

    SignedLogValue total() const {
        const double s = sum_ + comp_;
        if (s == 0.0 || scale_ == -std::numeric_limits<double>::infinity())
            return SignedLogValue::zero();
        return {s > 0.0 ? 1 : -1, scale_ + std::log(std::fabs(s))};
    }

    double to_real() const { return total().to_real(); }

    /// Ratio of the largest term magnitude to the result magnitude; large
    /// values mean the alternating sum cancelled away that many decades.
    double cancellation() const {
        const SignedLogValue t = total();
        if (t.sign == 0) return std::numeric_limits<double>::infinity();
        return std::exp(max_log_ - t.log_mag);
    }

    double max_term_log() const { return max_log_; }

private:
    void add_compensated(double x) {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }

    double scale_ = -std::numeric_limits<double>::infinity();
    double max_log_ = -std::numeric_limits<double>::infinity();
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// exponent * log(base) with the 0 * log(0) = 0 convention, so that x^0 at
/// x = 0 contributes a unit factor instead of NaN.
inline double log_pow(double base, double exponent) {
    if (exponent == 0.0) return 0.0;
    return exponent * std::log(base);
}

/// sign(x) * |x|^theta, the odd monotone extension of the power map.
inline double signed_pow(double x, double theta) {
    if (x == 0.0) return 0.0;
    return x > 0.0 ? std::pow(x, theta) : -std::pow(-x, theta);
}

} // namespace bioen
