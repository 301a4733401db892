#pragma once

// Two-term floating-point expansions (double-double), giving ~32 significant
// decimal digits.  Only the operations needed by the log-domain layer are
// provided: field ops, exp/expm1, log/log1p.

#include <cmath>
#include <cstdint>
#include <limits>

namespace nlab {

struct DD {
    double hi = 0.0;
    double lo = 0.0;

    constexpr DD() = default;
    constexpr DD(double h) : hi(h), lo(0.0) {}
    constexpr DD(double h, double l) : hi(h), lo(l) {}

    double to_double() const { return hi + lo; }
};

namespace dd_detail {

inline DD two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

inline DD quick_two_sum(double a, double b) {
    // requires |a| >= |b|
    double s = a + b;
    return {s, b - (s - a)};
}

inline DD two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

} // namespace dd_detail

inline DD dd_add(DD a, DD b) {
    using namespace dd_detail;
    DD s = two_sum(a.hi, b.hi);
    double lo = s.lo + a.lo + b.lo;
    return quick_two_sum(s.hi, lo);
}

inline DD dd_neg(DD a) { return {-a.hi, -a.lo}; }

inline DD dd_sub(DD a, DD b) { return dd_add(a, dd_neg(b)); }

inline DD dd_mul(DD a, DD b) {
    using namespace dd_detail;
    DD p = two_prod(a.hi, b.hi);
    double lo = p.lo + a.hi * b.lo + a.lo * b.hi;
    return quick_two_sum(p.hi, lo);
}

inline DD dd_mul(DD a, double b) {
    using namespace dd_detail;
    DD p = two_prod(a.hi, b);
    double lo = p.lo + a.lo * b;
    return quick_two_sum(p.hi, lo);
}

inline DD dd_div(DD a, DD b) {
    double q0 = a.hi / b.hi;
    DD r = dd_sub(a, dd_mul(b, q0));
    double q1 = r.hi / b.hi;
    r = dd_sub(r, dd_mul(b, q1));
    double q2 = r.hi / b.hi;
    DD q = dd_detail::quick_two_sum(q0, q1);
    return dd_add(q, DD(q2));
}

inline DD dd_ldexp(DD a, int k) { return {std::ldexp(a.hi, k), std::ldexp(a.lo, k)}; }

inline int dd_cmp(DD a, DD b) {
    if (a.hi < b.hi) return -1;
    if (a.hi > b.hi) return 1;
    if (a.lo < b.lo) return -1;
    if (a.lo > b.lo) return 1;
    return 0;
}

inline DD dd_abs(DD a) { return (a.hi < 0.0 || (a.hi == 0.0 && a.lo < 0.0)) ? dd_neg(a) : a; }

// ln 2 split so that both parts are exact doubles.
inline constexpr DD DD_LN2{6.931471805599453e-01, 2.3190468138462996e-17};

// k * ln2 exactly for any int64 k (k is split so each partial product fits a double).
inline DD dd_mul_ln2(std::int64_t k) {
    double k_hi = static_cast<double>(k >> 32 << 32); // multiple of 2^32, exact
    double k_lo = static_cast<double>(k - (k >> 32 << 32));
    DD a = dd_mul(DD_LN2, k_hi);
    DD b = dd_mul(DD_LN2, k_lo);
    return dd_add(a, b);
}

// exp on a reduced argument |r| <= 0.35, Taylor with dd Horner.
inline DD dd_exp_reduced(DD r) {
    // sum_{n=0}^{26} r^n / n!
    DD p(1.0);
    for (int n = 26; n >= 1; --n)
        p = dd_add(DD(1.0), dd_mul(dd_mul(p, r), 1.0 / n));
    return p;
}

inline DD dd_exp(DD x) {
    if (x.hi > 709.0) return {std::numeric_limits<double>::infinity(), 0.0};
    if (x.hi < -745.0) return {0.0, 0.0};
    double kd = std::nearbyint(x.hi / DD_LN2.hi);
    auto k = static_cast<std::int64_t>(kd);
    DD r = dd_sub(x, dd_mul_ln2(k));
    DD p = dd_exp_reduced(r);
    return dd_ldexp(p, static_cast<int>(k));
}

// expm1, accurate for small arguments.
inline DD dd_expm1(DD x) {
    if (std::abs(x.hi) < 0.5) {
        // x * sum_{m>=0} x^m/(m+1)!
        DD q(1.0);
        for (int n = 27; n >= 2; --n)
            q = dd_add(DD(1.0), dd_mul(dd_mul(q, x), 1.0 / n));
        return dd_mul(q, x);
    }
    return dd_sub(dd_exp(x), DD(1.0));
}

// log1p for y > -1, one Newton step off a double seed.
inline DD dd_log1p(DD y) {
    if (std::abs(y.hi) < 0.5) {
        double l0 = std::log1p(y.hi);
        DD em = dd_expm1(DD(-l0));
        DD e = dd_add(em, DD(1.0));
        // (1+y) e^{-l0} - 1 = em + y e^{-l0}
        DD corr = dd_add(em, dd_mul(y, e));
        return dd_add(DD(l0), corr);
    }
    // fall through to full log
    DD u = dd_add(DD(1.0), y);
    int m = std::ilogb(u.hi);
    DD v = dd_ldexp(u, -m); // v in [1,2)
    if (v.hi >= 1.5) { v = dd_ldexp(v, -1); ++m; } // keep v-1 small
    DD lv = dd_log1p(dd_sub(v, DD(1.0)));
    return dd_add(dd_mul_ln2(m), lv);
}

inline DD dd_log(DD x) {
    int m = std::ilogb(x.hi);
    DD v = dd_ldexp(x, -m);
    if (v.hi >= 1.5) { v = dd_ldexp(v, -1); ++m; } // keep v-1 small
    DD lv = dd_log1p(dd_sub(v, DD(1.0)));
    return dd_add(dd_mul_ln2(m), lv);
}

} // namespace nlab
