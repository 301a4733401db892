#pragma once

// Log-domain arithmetic for positive magnitudes whose logarithms may reach
// +-2^60.  A log-value is kept as an integer count of ln2 plus a double-double
// residual with |frac| <= ln2/2 + eps, so magnitudes like exp(-2^m) keep full
// residual precision.

#include <cstdint>
#include <stdexcept>

#include "nlab/ddouble.hpp"

namespace nlab {

// value = exp2 * ln2 + frac
struct SignedLog {
    std::int64_t exp2 = 0;
    DD frac{};

    static SignedLog from_dd(DD v) {
        SignedLog l;
        double kd = std::nearbyint(v.hi / DD_LN2.hi);
        l.exp2 = static_cast<std::int64_t>(kd);
        l.frac = dd_sub(v, dd_mul_ln2(l.exp2));
        l.renorm();
        return l;
    }
    static SignedLog from_double(double v) { return from_dd(DD(v)); }

    void renorm() {
        while (frac.hi > 0.5 * DD_LN2.hi + 1e-18) { frac = dd_sub(frac, DD_LN2); ++exp2; }
        while (frac.hi < -0.5 * DD_LN2.hi - 1e-18) { frac = dd_add(frac, DD_LN2); --exp2; }
    }

    DD to_dd() const { return dd_add(dd_mul_ln2(exp2), frac); }
    double to_double() const { return static_cast<double>(exp2) * DD_LN2.hi + frac.to_double(); }

    SignedLog operator+(const SignedLog& o) const {
        SignedLog r;
        r.exp2 = exp2 + o.exp2;
        r.frac = dd_add(frac, o.frac);
        r.renorm();
        return r;
    }
    SignedLog operator-() const {
        SignedLog r;
        r.exp2 = -exp2;
        r.frac = dd_neg(frac);
        return r;
    }
    SignedLog operator-(const SignedLog& o) const { return *this + (-o); }

    SignedLog scaled(double c) const {
        // |exp2| must stay in exact-double range for a non-integer scaling
        SignedLog r = from_dd(dd_mul(frac, c));
        DD e = dd_mul(dd_mul_ln2(exp2), c);
        return r + from_dd(e);
    }
    SignedLog scaled_int(std::int64_t c) const {
        SignedLog r;
        r.exp2 = exp2 * c;
        r.frac = frac;
        for (std::int64_t i = 1; i < c; ++i) r.frac = dd_add(r.frac, frac);
        r.renorm();
        return r;
    }

    int cmp(const SignedLog& o) const {
        SignedLog d = *this - o;
        if (d.exp2 > 0) return 1;
        if (d.exp2 < 0) return -1;
        return dd_cmp(d.frac, DD(0.0));
    }
    bool operator<(const SignedLog& o) const { return cmp(o) < 0; }
    bool operator<=(const SignedLog& o) const { return cmp(o) <= 0; }
    bool operator==(const SignedLog& o) const { return cmp(o) == 0; }
};

// A nonnegative real, either exactly zero or exp(log_).
class LogMagnitude {
public:
    LogMagnitude() : zero_(true) {}
    static LogMagnitude zero() { return LogMagnitude(); }
    static LogMagnitude one() { return from_log(SignedLog{}); }

    static LogMagnitude from_log(SignedLog l) {
        LogMagnitude m;
        m.zero_ = false;
        m.log_ = l;
        return m;
    }
    static LogMagnitude from_log_double(double l) { return from_log(SignedLog::from_double(l)); }
    static LogMagnitude from_double(double x) {
        if (x == 0.0) return zero();
        if (!(x > 0.0)) throw std::invalid_argument("LogMagnitude: negative or NaN value");
        return from_log(SignedLog::from_dd(dd_log(DD(x))));
    }
    // exact 2^k
    static LogMagnitude two_pow(std::int64_t k) {
        SignedLog l;
        l.exp2 = k;
        return from_log(l);
    }

    bool is_zero() const { return zero_; }
    const SignedLog& log() const {
        if (zero_) throw std::domain_error("LogMagnitude: log of zero");
        return log_;
    }
    double log_double() const {
        return zero_ ? -std::numeric_limits<double>::infinity() : log_.to_double();
    }
    double to_double() const {
        if (zero_) return 0.0;
        return dd_exp(log_.to_dd()).to_double();
    }

    LogMagnitude operator*(const LogMagnitude& o) const {
        if (zero_ || o.zero_) return zero();
        return from_log(log_ + o.log_);
    }
    LogMagnitude operator/(const LogMagnitude& o) const {
        if (o.zero_) throw std::domain_error("LogMagnitude: division by zero");
        if (zero_) return zero();
        return from_log(log_ - o.log_);
    }
    LogMagnitude pow_int(std::int64_t k) const {
        if (zero_) {
            if (k <= 0) throw std::domain_error("LogMagnitude: 0^k, k <= 0");
            return zero();
        }
        return from_log(log_.scaled_int(k));
    }

    int cmp(const LogMagnitude& o) const {
        if (zero_ && o.zero_) return 0;
        if (zero_) return -1;
        if (o.zero_) return 1;
        return log_.cmp(o.log_);
    }
    bool operator<(const LogMagnitude& o) const { return cmp(o) < 0; }
    bool operator<=(const LogMagnitude& o) const { return cmp(o) <= 0; }
    bool operator==(const LogMagnitude& o) const { return cmp(o) == 0; }

private:
    bool zero_ = true;
    SignedLog log_{};
};

// a + b as magnitudes
inline LogMagnitude log_add_exp(const LogMagnitude& a, const LogMagnitude& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    const LogMagnitude& hi = (a.cmp(b) >= 0) ? a : b;
    const LogMagnitude& lo = (a.cmp(b) >= 0) ? b : a;
    SignedLog d = lo.log() - hi.log(); // <= 0
    if (d.exp2 < -170) return hi;     // correction below dd resolution
    DD y = dd_exp(d.to_dd());
    DD corr = dd_log1p(y);
    return LogMagnitude::from_log(hi.log() + SignedLog::from_dd(corr));
}

// a - b as magnitudes; requires a >= b
inline LogMagnitude log_sub_exp(const LogMagnitude& a, const LogMagnitude& b) {
    if (b.is_zero()) return a;
    int c = a.cmp(b);
    if (c < 0) throw std::domain_error("log_sub_exp: a < b");
    if (c == 0) return LogMagnitude::zero();
    SignedLog d = b.log() - a.log(); // < 0
    if (d.exp2 < -170) return a;
    DD one_minus = dd_neg(dd_expm1(d.to_dd())); // 1 - e^d in (0,1)
    DD corr = dd_log(one_minus);
    return LogMagnitude::from_log(a.log() + SignedLog::from_dd(corr));
}

// log(1 + e^L) for a signed log-value L; stable over the whole range.
inline double log1p_exp(double L) {
    if (L > 40.0) return L + std::exp(-L);
    if (L < -40.0) return std::exp(L);
    return std::log1p(std::exp(L));
}

inline double log1p_exp(const LogMagnitude& x) {
    if (x.is_zero()) return 0.0;
    return log1p_exp(x.log_double());
}

} // namespace nlab
