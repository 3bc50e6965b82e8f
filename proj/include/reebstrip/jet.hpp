#pragma once

#include <cmath>
#include <limits>

namespace reebstrip {

// Order-2 jet of a scalar function at a point: (value, first, second derivative).
// Arithmetic follows the product/chain rules. The `overflow` flag marks results
// that passed through exp() with an argument above kExpOverflowArg; it propagates
// through any further arithmetic instead of producing NaN traps.
struct Jet2 {
    double v = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
    bool overflow = false;
};

inline constexpr double kExpOverflowArg = 700.0;

inline Jet2 jet_constant(double c) { return {c, 0.0, 0.0, false}; }
inline Jet2 jet_variable(double x) { return {x, 1.0, 0.0, false}; }

inline Jet2 jet_overflow() {
    const double inf = std::numeric_limits<double>::infinity();
    return {inf, inf, inf, true};
}

inline Jet2 operator+(const Jet2& a, const Jet2& b) {
    if (a.overflow || b.overflow) return jet_overflow();
    return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2, false};
}

inline Jet2 operator-(const Jet2& a, const Jet2& b) {
    if (a.overflow || b.overflow) return jet_overflow();
    return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2, false};
}

inline Jet2 operator-(const Jet2& a) {
    if (a.overflow) return jet_overflow();
    return {-a.v, -a.d1, -a.d2, false};
}

inline Jet2 operator*(const Jet2& a, const Jet2& b) {
    if (a.overflow || b.overflow) return jet_overflow();
    return {a.v * b.v,
            a.d1 * b.v + a.v * b.d1,
            a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2,
            false};
}

// Reciprocal; caller must reject b.v == 0 beforehand.
inline Jet2 jet_recip(const Jet2& b) {
    if (b.overflow) return jet_overflow();
    const double iv = 1.0 / b.v;
    const double iv2 = iv * iv;
    return {iv, -b.d1 * iv2, (2.0 * b.d1 * b.d1 * iv - b.d2) * iv2, false};
}

inline Jet2 operator/(const Jet2& a, const Jet2& b) {
    if (a.overflow || b.overflow) return jet_overflow();
    return a * jet_recip(b);
}

// u(f) with u', u'' evaluated at f.v.
inline Jet2 jet_chain(const Jet2& f, double u, double du, double ddu) {
    return {u, du * f.d1, ddu * f.d1 * f.d1 + du * f.d2, false};
}

inline Jet2 jet_sin(const Jet2& f) {
    if (f.overflow) return jet_overflow();
    const double s = std::sin(f.v), c = std::cos(f.v);
    return jet_chain(f, s, c, -s);
}

inline Jet2 jet_cos(const Jet2& f) {
    if (f.overflow) return jet_overflow();
    const double s = std::sin(f.v), c = std::cos(f.v);
    return jet_chain(f, c, -s, -c);
}

inline Jet2 jet_exp(const Jet2& f) {
    if (f.overflow || f.v > kExpOverflowArg) return jet_overflow();
    const double e = std::exp(f.v);
    return jet_chain(f, e, e, e);
}

// Domain (f.v < 0) must be rejected by the caller.
inline Jet2 jet_sqrt(const Jet2& f) {
    if (f.overflow) return jet_overflow();
    const double r = std::sqrt(f.v);
    const double dr = 0.5 / r;
    return jet_chain(f, r, dr, -0.25 / (f.v * r));
}

inline Jet2 jet_atan(const Jet2& f) {
    if (f.overflow) return jet_overflow();
    const double w = 1.0 + f.v * f.v;
    return jet_chain(f, std::atan(f.v), 1.0 / w, -2.0 * f.v / (w * w));
}

// Integer power; n may be negative (f.v != 0 then, caller checks).
inline Jet2 jet_powi(const Jet2& f, long long n) {
    if (f.overflow) return jet_overflow();
    if (n == 0) return jet_constant(1.0);
    const double vn1 = std::pow(f.v, static_cast<double>(n - 1));
    const double vn2 = (n == 1) ? 0.0 : std::pow(f.v, static_cast<double>(n - 2));
    const double dn = static_cast<double>(n);
    return {vn1 * f.v,
            dn * vn1 * f.d1,
            dn * (dn - 1.0) * vn2 * f.d1 * f.d1 + dn * vn1 * f.d2,
            false};
}

}  // namespace reebstrip
