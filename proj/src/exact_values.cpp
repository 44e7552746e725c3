#include "ogt/exact_values.hpp"

#include <mutex>
#include <vector>

namespace ogt {

namespace {
std::mutex bern_mutex;
std::vector<cpp_rational> bern_cache;  // guarded by bern_mutex
}

cpp_rational bernoulli(unsigned long k) {
    std::lock_guard<std::mutex> lk(bern_mutex);
    if (bern_cache.empty()) bern_cache = {cpp_rational(1), cpp_rational(-1, 2)};
    while (bern_cache.size() <= k) {
        unsigned long n = bern_cache.size();
        // sum_{j=0}^{n} C(n+1, j) B_j = 0
        cpp_rational s = 0;
        for (unsigned long j = 0; j < n; ++j) s += cpp_rational(binomial(n + 1, j)) * bern_cache[j];
        bern_cache.push_back(-s / cpp_rational(n + 1));
    }
    return bern_cache[k];
}

cpp_rational bernoulli_poly(unsigned long k, const cpp_rational& x) {
    cpp_rational s = 0, xp = 1;
    // B_k(x) = sum_i C(k,i) B_{k-i} x^i
    for (unsigned long i = 0; i <= k; ++i) {
        s += cpp_rational(binomial(k, i)) * bernoulli(k - i) * xp;
        xp *= x;
    }
    return s;
}

cpp_rational generalized_bernoulli(unsigned long k, long D) {
    unsigned long f = (unsigned long)(D < 0 ? -D : D);
    cpp_rational s = 0;
    for (unsigned long a = 1; a <= f; ++a) {
        int chi = kronecker(cpp_int(D), cpp_int(a));
        if (chi) s += cpp_rational(chi) * bernoulli_poly(k, cpp_rational(a, f));
    }
    return pow_rat(cpp_rational(f), (long)k - 1) * s;
}

ExactReal zeta_exact(long s) {
    if (s < 2 || s % 2 != 0) throw std::domain_error("zeta_exact: s must be even >= 2 (use zeta_interval)");
    long k = s / 2;
    cpp_rational b = bernoulli((unsigned long)s);
    cpp_rational c = b * pow_rat(cpp_rational(2), s) / (2 * cpp_rational(factorial((unsigned long)s)));
    if (k % 2 == 0) c = -c;  // (-1)^{k+1}
    return ExactReal(c, 2 * s, 1);
}

Interval zeta_interval(long s, long prec) {
    if (s < 2) throw std::domain_error("zeta_interval: s >= 2 required");
    long wp = prec + 16;
    cpp_rational target(cpp_int(1), pow_int(2, (unsigned long)(prec + 3)));
    long N = 16;
    for (;;) {
        // partial sum over n < N
        Interval sum = Interval::exact(0, wp);
        for (long n = 1; n < N; ++n) {
            Interval t = iv_div(Interval::exact(1, wp), iv_pow(Interval::exact(n, wp), s));
            sum = iv_add(sum, t);
        }
        // Euler-Maclaurin at N: N^{-s}/2 + N^{1-s}/(s-1) + sum_j t_j, with
        // |remainder| <= |first omitted term| (x^{-s} completely monotone).
        Interval Npow = iv_pow(Interval::exact(N, wp), s);
        Interval base = iv_add(iv_div(Interval::exact(1, wp), iv_mul(Interval::exact(2, wp), Npow)),
                               iv_div(Interval::exact(N, wp), iv_mul(Interval::exact(s - 1, wp), Npow)));
        Interval em = iv_add(sum, base);
        cpp_rational rising = s;        // (s)_{2j-1} rising factorial
        cpp_rational prev_abs = -1;
        bool converged = false;
        for (long j = 1; j <= 4 * N; ++j) {
            // t_j = B_{2j}/(2j)! * (s)_{2j-1} * N^{1-s-2j}
            cpp_rational c = bernoulli((unsigned long)(2 * j)) / cpp_rational(factorial((unsigned long)(2 * j)));
            c *= rising;
            cpp_rational npw = pow_rat(cpp_rational(N), 1 - s - 2 * j);
            cpp_rational term = c * npw;
            cpp_rational a = term < 0 ? -term : term;
            if (prev_abs >= 0 && a >= prev_abs) break;  // divergence onset; enlarge N
            if (a <= target) {
                // remainder bound: widen by |t_{j}|-scale bound a
                Interval err = Interval::hull(-a, a, wp);
                em = iv_add(em, err);
                converged = true;
                break;
            }
            em = iv_add(em, Interval::from_rational(term, wp));
            prev_abs = a;
            rising *= cpp_rational(s + 2 * j - 1) * cpp_rational(s + 2 * j);
        }
        if (converged) {
            Interval res(dy_round(em.lo, prec, false), dy_round(em.hi, prec, true), prec);
            if (res.width() <= cpp_rational(cpp_int(2), pow_int(2, (unsigned long)prec)))
                return res;
        }
        N *= 2;
        if (N > (1L << 26)) throw precision_cap_error("zeta_interval: cannot reach requested width");
    }
}

ExactReal l_value_exact(long k, long D) {
    if (!(D == -4 || D == -8 || D == 8)) throw std::domain_error("l_value_exact: D must be in {-4,-8,8}");
    if (k < 1) throw std::domain_error("l_value_exact: k >= 1");
    int delta = D < 0 ? 1 : 0;
    if ((k - delta) % 2 != 0) throw std::domain_error("l_value_exact: parity mismatch between k and D");
    long f = D < 0 ? -D : D;
    cpp_rational B = generalized_bernoulli((unsigned long)k, D);
    // L(k, chi_D) = (-1)^{1+(k-delta)/2} (2 pi / f)^k (sqrt(f)/2) B_{k,chi} / k!
    cpp_rational c = pow_rat(cpp_rational(2, f), k) * B / (2 * cpp_rational(factorial((unsigned long)k)));
    if (((k - delta) / 2) % 2 == 0) c = -c;
    return ExactReal(c, 2 * k, cpp_int(f));
}

ExactReal gamma_half(long k) {
    if (k < 1) throw std::domain_error("gamma_half: k >= 1");
    if (k % 2 == 0) return ExactReal(cpp_rational(factorial((unsigned long)(k / 2 - 1))));
    // Gamma(k/2) = (k-2)!! / 2^{(k-1)/2} * sqrt(pi)
    cpp_int dd = 1;
    for (long i = k - 2; i >= 1; i -= 2) dd *= i;
    cpp_rational c(dd, pow_int(2, (unsigned long)((k - 1) / 2)));
    return ExactReal(c, 1, 1);
}

namespace {
// arctan(1/x) via the alternating series, tail bounded by the next term
Interval atan_inv(long x, long prec) {
    long wp = prec + 8;
    Interval s = Interval::exact(0, wp);
    cpp_int x2 = cpp_int(x) * x;
    cpp_int xp = x;  // x^{2k+1}
    for (long k = 0;; ++k) {
        cpp_rational term(1, cpp_int(2 * k + 1) * xp);
        if (term <= cpp_rational(cpp_int(1), pow_int(2, (unsigned long)(prec + 6)))) {
            Interval tail = Interval::hull(0, term, wp);
            if (k % 2 == 0) s = iv_add(s, tail);
            else s = iv_sub(s, tail);
            return s;
        }
        Interval t = Interval::from_rational(term, wp);
        s = (k % 2 == 0) ? iv_add(s, t) : iv_sub(s, t);
        xp *= x2;
    }
}

std::mutex pi_mutex;
Interval pi_cache;      // guarded
long pi_cache_prec = 0;
}

Interval pi_interval(long prec) {
    {
        std::lock_guard<std::mutex> lk(pi_mutex);
        if (pi_cache_prec >= prec)
            return Interval(dy_round(pi_cache.lo, prec, false), dy_round(pi_cache.hi, prec, true), prec);
    }
    long wp = prec + 8;
    // Machin: pi = 16 atan(1/5) - 4 atan(1/239)
    Interval r = iv_sub(iv_mul(Interval::exact(16, wp), atan_inv(5, wp)),
                        iv_mul(Interval::exact(4, wp), atan_inv(239, wp)));
    Interval res(dy_round(r.lo, prec, false), dy_round(r.hi, prec, true), prec);
    {
        std::lock_guard<std::mutex> lk(pi_mutex);
        if (prec > pi_cache_prec) { pi_cache = res; pi_cache_prec = prec; }
    }
    return res;
}

Cmp decide_compare(const std::function<std::pair<Interval, Interval>(long)>& eval,
                   long start_prec, long cap) {
    for (long p = start_prec; p <= cap; p *= 2) {
        auto [a, b] = eval(p);
        Cmp c = iv_compare(a, b);
        if (c != Cmp::undecided) return c;
    }
    throw precision_cap_error("comparison undecidable at precision cap");
}

}  // namespace ogt
