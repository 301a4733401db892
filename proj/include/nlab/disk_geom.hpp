#pragma once

// Unit-disk geometry with gap-based radial coordinates.  Points store
// 1-|z| as a LogMagnitude (exact for radii like 1-2^-m) and angles as exact
// dyadic rationals when they come from the dyadic construction.

#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "nlab/lognum.hpp"

namespace nlab {

inline constexpr double TWO_PI = 2.0 * std::numbers::pi;

// Angle on the circle, either an exact dyadic rational in turns or a double
// in radians.
struct Angle {
    bool dyadic = false;
    std::int64_t num = 0; // turns = num / 2^den_exp, 0 <= num < 2^den_exp
    int den_exp = 0;
    double rad = 0.0;

    static Angle from_turns_dyadic(std::int64_t num, int den_exp) {
        if (den_exp < 0 || den_exp > 62) throw std::invalid_argument("Angle: bad den_exp");
        std::int64_t mod = std::int64_t(1) << den_exp;
        num %= mod;
        if (num < 0) num += mod;
        // reduce to lowest terms
        while (den_exp > 0 && (num & 1) == 0) { num >>= 1; --den_exp; }
        Angle a;
        a.dyadic = true;
        a.num = num;
        a.den_exp = den_exp;
        a.rad = TWO_PI * static_cast<double>(num) / static_cast<double>(std::int64_t(1) << den_exp);
        return a;
    }
    static Angle from_radians(double r) {
        Angle a;
        a.rad = std::remainder(r, TWO_PI);
        if (a.rad < 0) a.rad += TWO_PI;
        return a;
    }

    double radians() const { return rad; }

    bool same(const Angle& o) const {
        if (dyadic && o.dyadic) return num == o.num && den_exp == o.den_exp;
        return rad == o.rad;
    }

    // signed angular difference in radians, exact path for dyadic pairs
    double diff(const Angle& o) const {
        if (dyadic && o.dyadic) {
            int d = std::max(den_exp, o.den_exp);
            std::int64_t a = num << (d - den_exp);
            std::int64_t b = o.num << (d - o.den_exp);
            double t = static_cast<double>(a - b) / static_cast<double>(std::int64_t(1) << d);
            t = t - std::nearbyint(t);
            return TWO_PI * t;
        }
        double r = std::remainder(rad - o.rad, TWO_PI);
        return r;
    }
};

struct DiskPoint {
    Angle angle;
    LogMagnitude gap; // 1-|z| in (0,1]

    DiskPoint() = default;
    DiskPoint(Angle a, LogMagnitude g) : angle(a), gap(std::move(g)) {
        if (gap.is_zero() || LogMagnitude::one() < gap)
            throw std::invalid_argument("DiskPoint: gap must be in (0,1]");
    }
    static DiskPoint from_complex(std::complex<double> z) {
        double r = std::abs(z);
        if (r >= 1.0) throw std::invalid_argument("DiskPoint: |z| >= 1");
        return {Angle::from_radians(std::arg(z)), LogMagnitude::from_double(1.0 - r)};
    }

    double gap_double() const { return gap.to_double(); }
    double radius() const { return 1.0 - gap_double(); }
    std::complex<double> to_complex() const {
        return std::polar(radius(), angle.radians());
    }
    bool is_origin() const { return !(gap < LogMagnitude::one()); }
};

struct Arc {
    double center_rad = 0.0;
    double half_width = 0.0; // in (0, pi]

    double length() const { return 2.0 * half_width; }
    double lo() const { return center_rad - half_width; }
    double hi() const { return center_rad + half_width; }
    bool full_circle() const { return half_width >= std::numbers::pi; }
    bool contains(double theta) const {
        if (full_circle()) return true;
        double d = std::remainder(theta - center_rad, TWO_PI);
        return std::abs(d) <= half_width;
    }
};

struct CarlesonBox {
    int n = 0;          // base interval I_{n,k} of length 2^-n turns
    std::int64_t k = 0; // 0 <= k < 2^n

    CarlesonBox(int n_, std::int64_t k_) : n(n_), k(k_) {
        if (n < 0 || n > 62 || k < 0 || k >= (std::int64_t(1) << n))
            throw std::invalid_argument("CarlesonBox: bad index");
    }
};

// |s-t| / (s+t-st) for same-ray points with gaps s, t; all in log domain.
inline LogMagnitude rho_collinear(const LogMagnitude& s, const LogMagnitude& t) {
    int c = s.cmp(t);
    if (c == 0) return LogMagnitude::zero();
    const LogMagnitude& hi = (c > 0) ? s : t;
    const LogMagnitude& lo = (c > 0) ? t : s;
    LogMagnitude num = log_sub_exp(hi, lo);
    // s+t-st = s + t(1-s)
    LogMagnitude den = log_add_exp(s, t * log_sub_exp(LogMagnitude::one(), s));
    return num / den;
}

// Same metric with the radial offset delta = t-s given exactly; this is the
// only way to resolve twin pairs whose gaps agree to 2^m bits.
inline LogMagnitude rho_collinear_delta(const LogMagnitude& s, const LogMagnitude& delta) {
    if (delta.is_zero()) return LogMagnitude::zero();
    // denominator 2s - s^2 + delta(1-s) = s + (s+delta)(1-s)
    LogMagnitude one_minus_s = log_sub_exp(LogMagnitude::one(), s);
    LogMagnitude den = log_add_exp(s, log_add_exp(s, delta) * one_minus_s);
    return delta / den;
}

// Pseudo-hyperbolic distance |(z-w)/(1-conj(z) w)|.
inline LogMagnitude rho(const DiskPoint& z, const DiskPoint& w) {
    if (z.angle.same(w.angle)) return rho_collinear(z.gap, w.gap);
    double delta = z.angle.diff(w.angle);
    const LogMagnitude& s = z.gap;
    const LogMagnitude& t = w.gap;
    LogMagnitude one_minus_s = log_sub_exp(LogMagnitude::one(), s);
    LogMagnitude one_minus_t = log_sub_exp(LogMagnitude::one(), t);
    double sh = std::sin(0.5 * delta);
    // cross = 4(1-s)(1-t) sin^2(delta/2), shared by numerator and denominator
    LogMagnitude cross = LogMagnitude::from_double(4.0 * sh * sh) * one_minus_s * one_minus_t;
    LogMagnitude radial = (s.cmp(t) >= 0) ? log_sub_exp(s, t) : log_sub_exp(t, s);
    LogMagnitude num = log_add_exp(radial.pow_int(2), cross);
    // s+t-st = s + t(1-s)
    LogMagnitude stm = log_add_exp(s, t * one_minus_s);
    LogMagnitude den = log_add_exp(stm.pow_int(2), cross);
    return LogMagnitude::from_log((num / den).log().scaled(0.5));
}

// log|b_pole(z)| as a magnitude (= rho); zero flag means z == pole.
inline LogMagnitude blaschke_factor_mod(const DiskPoint& pole, const DiskPoint& z) {
    return rho(pole, z);
}

// Blaschke factor with phase, double-precision path.
inline std::complex<double> blaschke_factor(std::complex<double> pole, std::complex<double> z) {
    return (z - pole) / (1.0 - std::conj(pole) * z);
}

// Disk automorphism z -> (z-w)/(1 - conj(w) z).
inline std::complex<double> mobius(std::complex<double> w, std::complex<double> z) {
    return (z - w) / (1.0 - std::conj(w) * z);
}

// Privalov shadow: boundary arc at chord distance <= 2(1-|lambda|), clamped
// to the full circle for large gaps.
inline Arc privalov_shadow(const DiskPoint& lambda) {
    if (lambda.is_origin()) throw std::invalid_argument("privalov_shadow: lambda = 0");
    double g = lambda.gap_double();
    double x = g / (1.0 - g);
    double hw;
    if (x >= 1.0)
        hw = std::numbers::pi;
    else if (x < 1e-8)
        hw = 2.0 * x;
    else
        hw = 2.0 * std::asin(x);
    if (hw > std::numbers::pi) hw = std::numbers::pi;
    return {lambda.angle.radians(), hw};
}

inline bool box_contains(const CarlesonBox& box, const DiskPoint& z) {
    if (!(z.gap < LogMagnitude::two_pow(-box.n))) return false; // strict 1-r < |I|
    const Angle& a = z.angle;
    if (a.dyadic) {
        if (a.den_exp <= box.n) {
            return (a.num << (box.n - a.den_exp)) == box.k;
        }
        return (a.num >> (a.den_exp - box.n)) == box.k;
    }
    double turns = a.radians() / TWO_PI;
    auto cell = static_cast<std::int64_t>(std::floor(turns * static_cast<double>(std::int64_t(1) << box.n)));
    return cell == box.k;
}

} // namespace nlab
