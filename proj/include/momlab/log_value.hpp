#pragma once

#include <cmath>

#include "errors.hpp"

namespace momlab {

/// Signed value stored as sign and natural log of the magnitude.
/// sign == 0 encodes exact zero; log_abs is then meaningless.
struct LogValue {
    int sign = 0;
    double log_abs = 0.0;

    static LogValue zero() { return {0, 0.0}; }
    static LogValue one() { return {1, 0.0}; }

    static LogValue from_double(double x)
    {
        if (x == 0.0) return zero();
        return {x > 0.0 ? 1 : -1, std::log(std::fabs(x))};
    }

    static LogValue from_log(double log_abs, int sign = 1) { return {sign, log_abs}; }

    bool is_zero() const { return sign == 0; }

    double value() const
    {
        if (sign == 0) return 0.0;
        return sign * std::exp(log_abs);
    }

    LogValue& operator*=(const LogValue& o)
    {
        sign *= o.sign;
        log_abs = sign == 0 ? 0.0 : log_abs + o.log_abs;
        return *this;
    }

    LogValue& operator/=(const LogValue& o)
    {
        if (o.sign == 0) throw DomainError("LogValue: division by zero");
        sign *= o.sign;
        log_abs = sign == 0 ? 0.0 : log_abs - o.log_abs;
        return *this;
    }

    /// |x|^p for a non-negative value.
    LogValue pow(double p) const
    {
        if (sign < 0) throw DomainError("LogValue::pow of a negative value");
        if (sign == 0) return p == 0.0 ? one() : zero();
        return {1, log_abs * p};
    }

    friend LogValue operator*(LogValue a, const LogValue& b) { return a *= b; }
    friend LogValue operator/(LogValue a, const LogValue& b) { return a /= b; }
};

} // namespace momlab
