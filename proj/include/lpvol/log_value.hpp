#pragma once

#include <cmath>
#include <limits>
#include <ostream>
#include <utility>

namespace lpvol {

/// Real number stored as sign and natural log of its magnitude.
///
/// Products and powers of quantities raised to exponents of order n (I^j J^{n-j-1} ...)
/// leave the double range long before the final ratio does, so every such chain is
/// carried in this form. Zero is sign 0 with log_abs = -inf.
class LogValue {
public:
    constexpr LogValue() = default;

    static LogValue from_log(double log_abs, int sign = 1) {
        LogValue v;
        if (sign == 0 || log_abs == -std::numeric_limits<double>::infinity()) return v;
        v.sign_ = sign > 0 ? 1 : -1;
        v.log_abs_ = log_abs;
        return v;
    }

    static LogValue from_double(double x) {
        if (x == 0.0) return {};
        return from_log(std::log(std::fabs(x)), x > 0 ? 1 : -1);
    }

    static LogValue zero() { return {}; }
    static LogValue one() { return from_log(0.0); }

    [[nodiscard]] int sign() const { return sign_; }
    [[nodiscard]] double log_abs() const { return log_abs_; }
    [[nodiscard]] bool is_zero() const { return sign_ == 0; }
    [[nodiscard]] double to_double() const { return sign_ == 0 ? 0.0 : sign_ * std::exp(log_abs_); }

    /// log of the value; only meaningful for positive values.
    [[nodiscard]] double log() const { return log_abs_; }

    friend LogValue operator*(LogValue a, LogValue b) {
        if (a.sign_ == 0 || b.sign_ == 0) return {};
        return from_log(a.log_abs_ + b.log_abs_, a.sign_ * b.sign_);
    }

    friend LogValue operator/(LogValue a, LogValue b) {
        if (b.sign_ == 0) {
            return from_log(std::numeric_limits<double>::infinity(), a.sign_ == 0 ? 1 : a.sign_);
        }
        if (a.sign_ == 0) return {};
        return from_log(a.log_abs_ - b.log_abs_, a.sign_ * b.sign_);
    }

    /// Real power; negative bases are only accepted for integer exponents.
    [[nodiscard]] LogValue pow(double e) const {
        if (sign_ == 0) return e == 0.0 ? one() : LogValue{};
        int s = 1;
        if (sign_ < 0) {
            if (std::floor(e) != e) return from_log(std::numeric_limits<double>::quiet_NaN());
            s = std::fmod(std::fabs(e), 2.0) == 1.0 ? -1 : 1;
        }
        return from_log(e * log_abs_, s);
    }

    friend LogValue operator+(LogValue a, LogValue b) {
        if (a.sign_ == 0) return b;
        if (b.sign_ == 0) return a;
        if (a.log_abs_ < b.log_abs_) std::swap(a, b);
        const double d = b.log_abs_ - a.log_abs_;  // <= 0
        if (a.sign_ == b.sign_) return from_log(a.log_abs_ + std::log1p(std::exp(d)), a.sign_);
        if (d == 0.0) return {};
        return from_log(a.log_abs_ + std::log1p(-std::exp(d)), a.sign_);
    }

    friend LogValue operator-(LogValue a) {
        a.sign_ = -a.sign_;
        return a;
    }

    friend LogValue operator-(LogValue a, LogValue b) { return a + (-b); }

    LogValue& operator*=(LogValue o) { return *this = *this * o; }
    LogValue& operator/=(LogValue o) { return *this = *this / o; }
    LogValue& operator+=(LogValue o) { return *this = *this + o; }

    friend std::ostream& operator<<(std::ostream& os, const LogValue& v) {
        return os << (v.sign_ < 0 ? "-" : "") << "exp(" << v.log_abs_ << ")";
    }

private:
    int sign_ = 0;
    double log_abs_ = -std::numeric_limits<double>::infinity();
};

/// log(exp(a) + exp(b)) without overflow.
inline double log_add(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    if (a < b) std::swap(a, b);
    return a + std::log1p(std::exp(b - a));
}

}  // namespace lpvol
