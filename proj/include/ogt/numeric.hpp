#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ogt {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

// Thrown when a brute-force enumeration exceeds its configured cap.
struct resource_cap_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when an interval comparison stays undecided at the precision cap.
struct precision_cap_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct internal_check_error : std::logic_error {
    using std::logic_error::logic_error;
};

inline cpp_int num(const cpp_rational& q) { return boost::multiprecision::numerator(q); }
inline cpp_int den(const cpp_rational& q) { return boost::multiprecision::denominator(q); }

inline cpp_int gcd(const cpp_int& a, const cpp_int& b) { return boost::multiprecision::gcd(a, b); }
inline cpp_int lcm(const cpp_int& a, const cpp_int& b) { return boost::multiprecision::lcm(a, b); }

inline cpp_int pow_int(const cpp_int& b, unsigned long e) {
    cpp_int r = 1, x = b;
    for (unsigned long k = e; k; k >>= 1) {
        if (k & 1) r *= x;
        x *= x;
    }
    return r;
}

inline cpp_rational pow_rat(const cpp_rational& b, long e) {
    if (e >= 0) return cpp_rational(pow_int(num(b), (unsigned long)e), pow_int(den(b), (unsigned long)e));
    if (b == 0) throw std::domain_error("pow_rat: zero to negative power");
    return cpp_rational(pow_int(den(b), (unsigned long)(-e)), pow_int(num(b), (unsigned long)(-e)));
}

inline cpp_int factorial(unsigned long n) {
    cpp_int r = 1;
    for (unsigned long i = 2; i <= n; ++i) r *= i;
    return r;
}

inline cpp_int binomial(unsigned long n, unsigned long k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    cpp_int r = 1;
    for (unsigned long i = 0; i < k; ++i) {
        r *= (n - i);
        r /= (i + 1);
    }
    return r;
}

// p-adic valuation of n != 0.
inline long valuation(cpp_int n, const cpp_int& p) {
    if (n == 0) throw std::domain_error("valuation of 0");
    long v = 0;
    while (n % p == 0) { n /= p; ++v; }
    return v;
}

// floor of a rational
inline cpp_int floor_rat(const cpp_rational& q) {
    cpp_int n = num(q), d = den(q);
    cpp_int f = n / d;
    if (n < 0 && f * d != n) --f;
    return f;
}

// x mod m reduced to [0, m)
inline cpp_int mod_pos(const cpp_int& x, const cpp_int& m) {
    cpp_int r = x % m;
    if (r < 0) r += m;
    return r;
}

// rational reduced mod 1 to [0,1)
inline cpp_rational mod1(const cpp_rational& q) {
    return q - cpp_rational(floor_rat(q));
}

// rational reduced mod 2 to [0,2)
inline cpp_rational mod2(const cpp_rational& q) {
    cpp_rational r = q - 2 * cpp_rational(floor_rat(q / 2));
    return r;
}

inline cpp_int mod_inverse(const cpp_int& a, const cpp_int& m) {
    cpp_int r0 = m, r1 = mod_pos(a, m), t0 = 0, t1 = 1;
    while (r1 != 0) {
        cpp_int q = r0 / r1;
        cpp_int r2 = r0 - q * r1; r0 = r1; r1 = r2;
        cpp_int t2 = t0 - q * t1; t0 = t1; t1 = t2;
    }
    if (r0 != 1) throw std::domain_error("mod_inverse: not invertible");
    return mod_pos(t0, m);
}

// Kronecker symbol (a/n), n any integer.
inline int kronecker(cpp_int a, cpp_int n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    if (a % 2 == 0 && n % 2 == 0) return 0;
    int res = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) res = -res;
    }
    long v = 0;
    while (n % 2 == 0) { n /= 2; ++v; }
    if (v % 2 == 1) {
        cpp_int am8 = mod_pos(a, 8);
        if (am8 == 3 || am8 == 5) res = -res;
    }
    a = mod_pos(a, n);
    while (a != 0) {
        long va = 0;
        while (a % 2 == 0) { a /= 2; ++va; }
        if (va % 2 == 1) {
            cpp_int nm8 = mod_pos(n, 8);
            if (nm8 == 3 || nm8 == 5) res = -res;
        }
        // quadratic reciprocity for odd a, n
        if (mod_pos(a, 4) == 3 && mod_pos(n, 4) == 3) res = -res;
        cpp_int t = a; a = mod_pos(n, t); n = t;
    }
    return n == 1 ? res : 0;
}

inline cpp_int isqrt(const cpp_int& n) {
    if (n < 0) throw std::domain_error("isqrt of negative");
    return boost::multiprecision::sqrt(n);
}

inline bool is_square(const cpp_int& n, cpp_int* root = nullptr) {
    if (n < 0) return false;
    cpp_int r = isqrt(n);
    if (r * r == n) { if (root) *root = r; return true; }
    return false;
}

// n = s * t^2 with s squarefree.  Trial division up to 10^5; any leftover
// must then be 1, prime, or a perfect square, else we cannot certify.
inline void squarefree_decompose(cpp_int n, cpp_int& s, cpp_int& t) {
    if (n <= 0) throw std::domain_error("squarefree_decompose: need n > 0");
    s = 1; t = 1;
    const long B = 100000;
    for (long p = 2; p <= B && cpp_int(p) * p <= n; ++p) {
        if (n % p != 0) continue;
        long e = 0;
        while (n % p == 0) { n /= p; ++e; }
        for (long i = 0; i < e / 2; ++i) t *= p;
        if (e % 2) s *= p;
    }
    if (n == 1) return;
    cpp_int r;
    if (n < cpp_int(B) * B) { s *= n; return; }  // all factors > B, so squarefree
    if (is_square(n, &r)) { t *= r; return; }
    if (is_square(n * s, &r)) { /* n = s * (r/s)^2 not reachable; keep */ }
    // could still be p^2*q etc.; refuse rather than mislabel
    throw std::domain_error("squarefree_decompose: residual factor too large to certify");
}

// Factor n into primes (trial division, same certification rule as above).
inline std::vector<std::pair<cpp_int, long>> factorize(cpp_int n) {
    if (n < 0) n = -n;
    if (n == 0) throw std::domain_error("factorize(0)");
    std::vector<std::pair<cpp_int, long>> fs;
    const long B = 100000;
    for (long p = 2; p <= B && cpp_int(p) * p <= n; ++p) {
        if (n % p != 0) continue;
        long e = 0;
        while (n % p == 0) { n /= p; ++e; }
        fs.push_back({cpp_int(p), e});
    }
    if (n > 1) {
        if (n >= cpp_int(B) * B) {
            cpp_int r;
            if (is_square(n, &r) && r < cpp_int(B) * B) fs.push_back({r, 2});
            else throw std::domain_error("factorize: residual factor too large to certify prime");
        } else fs.push_back({n, 1});
    }
    return fs;
}

inline std::string to_string(const cpp_rational& q) {
    std::string s = num(q).str();
    if (den(q) != 1) s += "/" + den(q).str();
    return s;
}

}  // namespace ogt
