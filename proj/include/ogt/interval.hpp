#pragma once

#include "ogt/numeric.hpp"

#include <algorithm>
#include <optional>

namespace ogt {

// Dyadic rational m * 2^e with arbitrary-precision mantissa.
struct Dyadic {
    cpp_int m;
    long e = 0;

    Dyadic() : m(0) {}
    Dyadic(const cpp_int& mm, long ee) : m(mm), e(ee) { normalize(); }
    explicit Dyadic(const cpp_int& n) : m(n), e(0) { normalize(); }

    void normalize() {
        if (m == 0) { e = 0; return; }
        while ((m & 1) == 0) { m >>= 1; ++e; }
    }

    long bits() const { return m == 0 ? 0 : (long)boost::multiprecision::msb(boost::multiprecision::abs(m)) + 1; }

    int sign() const { return m == 0 ? 0 : (m > 0 ? 1 : -1); }

    cpp_rational to_rational() const {
        if (e >= 0) return cpp_rational(m * pow_int(2, (unsigned long)e));
        return cpp_rational(m, pow_int(2, (unsigned long)(-e)));
    }

    double to_double() const {
        // crude but only used for display
        cpp_rational r = to_rational();
        return (double)num(r) / (double)den(r);
    }
};

inline Dyadic dy_neg(const Dyadic& a) { return Dyadic(-a.m, a.e); }

inline Dyadic dy_add(const Dyadic& a, const Dyadic& b) {
    if (a.m == 0) return b;
    if (b.m == 0) return a;
    long e = std::min(a.e, b.e);
    cpp_int am = a.m << (unsigned long)(a.e - e);
    cpp_int bm = b.m << (unsigned long)(b.e - e);
    return Dyadic(am + bm, e);
}

inline Dyadic dy_mul(const Dyadic& a, const Dyadic& b) { return Dyadic(a.m * b.m, a.e + b.e); }

inline int dy_cmp(const Dyadic& a, const Dyadic& b) {
    Dyadic d = dy_add(a, dy_neg(b));
    return d.sign();
}

// Round to at most `prec` mantissa bits, toward -inf (down) or +inf (up).
inline Dyadic dy_round(const Dyadic& a, long prec, bool up) {
    long b = a.bits();
    if (b <= prec) return a;
    long drop = b - prec;
    cpp_int m = a.m >> (unsigned long)drop;
    cpp_int back = m << (unsigned long)drop;
    bool exact = (back == a.m);
    if (!exact && up) m += 1;  // a.m>>drop is floor for negatives too
    return Dyadic(m, a.e + drop);
}

// Directed-rounding division a/b at prec bits.
inline Dyadic dy_div(const Dyadic& a, const Dyadic& b, long prec, bool up) {
    if (b.m == 0) throw std::domain_error("dyadic division by zero");
    if (a.m == 0) return Dyadic();
    // compute floor/ceil of (a.m << k) / b.m with k chosen to get prec+2 quotient bits
    long k = prec + 2 + b.bits() - a.bits();
    if (k < 0) k = 0;
    cpp_int numr = a.m << (unsigned long)k;
    cpp_int q = numr / b.m;
    cpp_int r = numr - q * b.m;
    bool exact = (r == 0);
    // integer division truncates toward zero; fix to floor
    if (!exact && ((numr < 0) != (b.m < 0))) q -= 1;
    if (!exact && up) q += 1;
    return dy_round(Dyadic(q, a.e - b.e - k), prec, up);
}

inline Dyadic dy_from_rational(const cpp_rational& q, long prec, bool up) {
    return dy_div(Dyadic(num(q)), Dyadic(den(q)), prec, up);
}

// sqrt with directed rounding; a >= 0.
inline Dyadic dy_sqrt(const Dyadic& a, long prec, bool up) {
    if (a.m < 0) throw std::domain_error("dyadic sqrt of negative");
    if (a.m == 0) return Dyadic();
    // scale so exponent even and enough bits
    long k = 2 * prec + 4 - a.bits();
    if (k < 0) k = 0;
    if ((a.e - k) % 2 != 0) ++k;
    cpp_int m = a.m << (unsigned long)k;
    cpp_int r = isqrt(m);
    bool exact = (r * r == m);
    if (!exact && up) r += 1;
    return dy_round(Dyadic(r, (a.e - k) / 2), prec, up);
}

enum class Cmp { less, greater, undecided };

// Closed interval [lo, hi] of dyadics; all operations round outward at
// `prec` mantissa bits, so enclosures are preserved.
struct Interval {
    Dyadic lo, hi;
    long prec = 64;

    Interval() = default;
    Interval(const Dyadic& l, const Dyadic& h, long p) : lo(l), hi(h), prec(p) {
        if (dy_cmp(lo, hi) > 0) throw internal_check_error("interval lo > hi");
    }

    static Interval exact(const cpp_int& n, long p) { return Interval(Dyadic(n), Dyadic(n), p); }
    static Interval from_rational(const cpp_rational& q, long p) {
        return Interval(dy_from_rational(q, p, false), dy_from_rational(q, p, true), p);
    }
    static Interval hull(const cpp_rational& a, const cpp_rational& b, long p) {
        return Interval(dy_from_rational(std::min(a, b), p, false),
                        dy_from_rational(std::max(a, b), p, true), p);
    }

    bool contains(const cpp_rational& q) const {
        cpp_rational l = lo.to_rational(), h = hi.to_rational();
        return l <= q && q <= h;
    }
    cpp_rational width() const { return hi.to_rational() - lo.to_rational(); }
    int sign_lo() const { return lo.sign(); }
    int sign_hi() const { return hi.sign(); }
    double mid_double() const { return (lo.to_double() + hi.to_double()) / 2; }
};

inline Interval iv_neg(const Interval& a) { return Interval(dy_neg(a.hi), dy_neg(a.lo), a.prec); }

inline Interval iv_add(const Interval& a, const Interval& b) {
    long p = std::min(a.prec, b.prec);
    return Interval(dy_round(dy_add(a.lo, b.lo), p, false), dy_round(dy_add(a.hi, b.hi), p, true), p);
}

inline Interval iv_sub(const Interval& a, const Interval& b) { return iv_add(a, iv_neg(b)); }

inline Interval iv_mul(const Interval& a, const Interval& b) {
    long p = std::min(a.prec, b.prec);
    Dyadic c[4] = {dy_mul(a.lo, b.lo), dy_mul(a.lo, b.hi), dy_mul(a.hi, b.lo), dy_mul(a.hi, b.hi)};
    Dyadic mn = c[0], mx = c[0];
    for (int i = 1; i < 4; ++i) {
        if (dy_cmp(c[i], mn) < 0) mn = c[i];
        if (dy_cmp(c[i], mx) > 0) mx = c[i];
    }
    return Interval(dy_round(mn, p, false), dy_round(mx, p, true), p);
}

inline Interval iv_div(const Interval& a, const Interval& b) {
    long p = std::min(a.prec, b.prec);
    if (b.lo.sign() <= 0 && b.hi.sign() >= 0)
        throw std::domain_error("interval division by interval containing 0");
    Dyadic c[4] = {dy_div(a.lo, b.lo, p, false), dy_div(a.lo, b.hi, p, false),
                   dy_div(a.hi, b.lo, p, false), dy_div(a.hi, b.hi, p, false)};
    Dyadic d[4] = {dy_div(a.lo, b.lo, p, true), dy_div(a.lo, b.hi, p, true),
                   dy_div(a.hi, b.lo, p, true), dy_div(a.hi, b.hi, p, true)};
    Dyadic mn = c[0], mx = d[0];
    for (int i = 1; i < 4; ++i) {
        if (dy_cmp(c[i], mn) < 0) mn = c[i];
        if (dy_cmp(d[i], mx) > 0) mx = d[i];
    }
    return Interval(dy_round(mn, p, false), dy_round(mx, p, true), p);
}

inline Interval iv_sqrt(const Interval& a) {
    if (a.lo.sign() < 0) throw std::domain_error("interval sqrt of possibly-negative value");
    return Interval(dy_sqrt(a.lo, a.prec, false), dy_sqrt(a.hi, a.prec, true), a.prec);
}

inline Interval iv_pow(const Interval& a, long k) {
    long p = a.prec;
    if (k == 0) return Interval::exact(1, p);
    if (k < 0) return iv_div(Interval::exact(1, p), iv_pow(a, -k));
    Interval r = Interval::exact(1, p), x = a;
    for (long e = k; e; e >>= 1) {
        if (e & 1) r = iv_mul(r, x);
        x = iv_mul(x, x);
    }
    // even powers of intervals straddling 0 stay nonnegative
    if (k % 2 == 0 && r.lo.sign() < 0 && a.lo.sign() < 0 && a.hi.sign() > 0)
        r = Interval(Dyadic(), r.hi, p);
    return r;
}

inline Interval iv_intersect(const Interval& a, const Interval& b) {
    Dyadic lo = dy_cmp(a.lo, b.lo) > 0 ? a.lo : b.lo;
    Dyadic hi = dy_cmp(a.hi, b.hi) < 0 ? a.hi : b.hi;
    if (dy_cmp(lo, hi) > 0) throw internal_check_error("empty interval intersection");
    return Interval(lo, hi, std::min(a.prec, b.prec));
}

inline Cmp iv_compare(const Interval& a, const Interval& b) {
    if (dy_cmp(a.hi, b.lo) < 0) return Cmp::less;
    if (dy_cmp(a.lo, b.hi) > 0) return Cmp::greater;
    return Cmp::undecided;
}

}  // namespace ogt
