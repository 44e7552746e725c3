#pragma once

#include "ogt/interval.hpp"

namespace ogt {

Interval pi_interval(long prec);

// coeff * pi^(pi_half_exp/2) * sqrt(radicand), with radicand squarefree and
// canonical zero.  Closed under multiplication and division; addition only
// within a fixed (pi_half_exp, radicand) signature.
struct ExactReal {
    cpp_rational coeff;
    long pi_half_exp = 0;
    cpp_int radicand = 1;

    ExactReal() : coeff(0) {}
    ExactReal(const cpp_rational& c) : coeff(c) { canonicalize(); }
    ExactReal(const cpp_rational& c, long phe, const cpp_int& rad) : coeff(c), pi_half_exp(phe), radicand(rad) {
        reduce_radicand();
        canonicalize();
    }

    void reduce_radicand() {
        if (radicand < 1) throw std::domain_error("ExactReal: radicand must be positive");
        if (radicand == 1) return;
        cpp_int s, t;
        squarefree_decompose(radicand, s, t);
        coeff *= cpp_rational(t);
        radicand = s;
    }
    void canonicalize() {
        if (coeff == 0) { pi_half_exp = 0; radicand = 1; }
    }

    bool is_zero() const { return coeff == 0; }
    bool same_signature(const ExactReal& o) const {
        return pi_half_exp == o.pi_half_exp && radicand == o.radicand;
    }

    ExactReal operator*(const ExactReal& o) const {
        if (is_zero() || o.is_zero()) return ExactReal();
        return ExactReal(coeff * o.coeff, pi_half_exp + o.pi_half_exp, radicand * o.radicand);
    }
    ExactReal operator/(const ExactReal& o) const {
        if (o.is_zero()) throw std::domain_error("ExactReal division by zero");
        if (is_zero()) return ExactReal();
        // 1/sqrt(r) = sqrt(r)/r
        return ExactReal(coeff / (o.coeff * o.radicand), pi_half_exp - o.pi_half_exp, radicand * o.radicand);
    }
    ExactReal operator-() const { ExactReal r = *this; r.coeff = -r.coeff; return r; }

    // Addition requires matching signature (mixed sums go through Interval).
    ExactReal add_same(const ExactReal& o) const {
        if (is_zero()) return o;
        if (o.is_zero()) return *this;
        if (!same_signature(o)) throw std::domain_error("ExactReal: mixed-signature addition");
        ExactReal r = *this;
        r.coeff += o.coeff;
        r.canonicalize();
        return r;
    }

    ExactReal pow(long k) const {
        if (k == 0) return ExactReal(cpp_rational(1));
        ExactReal r(cpp_rational(1));
        ExactReal x = *this;
        bool inv = k < 0;
        unsigned long e = (unsigned long)(inv ? -k : k);
        for (; e; e >>= 1) {
            if (e & 1) r = r * x;
            x = x * x;
        }
        if (inv) return ExactReal(cpp_rational(1)) / r;
        return r;
    }

    bool operator==(const ExactReal& o) const {
        return coeff == o.coeff && pi_half_exp == o.pi_half_exp && radicand == o.radicand;
    }

    std::string str() const {
        std::string s = to_string(coeff);
        if (pi_half_exp != 0) {
            s += " * pi^";
            if (pi_half_exp % 2 == 0) s += std::to_string(pi_half_exp / 2);
            else s += "(" + std::to_string(pi_half_exp) + "/2)";
        }
        if (radicand != 1) s += " * sqrt(" + radicand.str() + ")";
        return s;
    }
};

inline ExactReal pow_of_pi(long half_exp) { return ExactReal(cpp_rational(1), half_exp, 1); }

// Containment-correct enclosure.
inline Interval enclose(const ExactReal& x, long prec) {
    long wp = prec + 8;
    Interval r = Interval::from_rational(x.coeff, wp);
    if (x.pi_half_exp != 0) {
        Interval pi = pi_interval(wp);
        long h = x.pi_half_exp;
        Interval pipow = iv_pow(pi, h >= 0 ? h / 2 : -((-h) / 2));
        if (h % 2 != 0) {
            Interval sq = iv_sqrt(pi);
            pipow = (h > 0) ? iv_mul(pipow, sq) : iv_div(pipow, sq);
        }
        r = iv_mul(r, pipow);
    }
    if (x.radicand != 1) r = iv_mul(r, iv_sqrt(Interval::exact(x.radicand, wp)));
    return Interval(dy_round(r.lo, prec, false), dy_round(r.hi, prec, true), prec);
}

inline double approx(const ExactReal& x) { return enclose(x, 64).mid_double(); }

}  // namespace ogt
