#include "doctest.h"

#include "ogt/exact_values.hpp"

#include <random>

using namespace ogt;

// Independent oracle: B_k = sum_{i=0}^{k} 1/(i+1) sum_{j=0}^{i} (-1)^j C(i,j) j^k
// (Worpitzky-type double sum; gives the B_1 = -1/2 convention).
static cpp_rational bernoulli_oracle(unsigned long k) {
    cpp_rational b = 0;
    for (unsigned long i = 0; i <= k; ++i) {
        cpp_rational inner = 0;
        for (unsigned long j = 0; j <= i; ++j) {
            cpp_rational t = cpp_rational(binomial(i, j)) * pow_rat(cpp_rational(j), (long)k);
            if (k == 0 && j == 0) t = cpp_rational(binomial(i, j));  // 0^0 = 1
            inner += (j % 2 ? -t : t);
        }
        b += inner / cpp_rational(i + 1);
    }
    return b;
}

TEST_CASE("bernoulli convention and oracle") {
    CHECK(bernoulli(0) == cpp_rational(1));
    CHECK(bernoulli(1) == cpp_rational(-1, 2));  // convention pinned repo-wide
    CHECK(bernoulli(8) == cpp_rational(-1, 30));
    CHECK(bernoulli(12) == cpp_rational(-691, 2730));
    for (unsigned long k = 0; k <= 20; ++k) CHECK(bernoulli(k) == bernoulli_oracle(k));
}

TEST_CASE("zeta_exact small even values") {
    ExactReal z2 = zeta_exact(2);
    CHECK(z2.coeff == cpp_rational(1, 6));
    CHECK(z2.pi_half_exp == 4);
    CHECK(z2.radicand == 1);
    ExactReal z4 = zeta_exact(4);
    CHECK(z4.coeff == cpp_rational(1, 90));
    CHECK_THROWS_AS(zeta_exact(0), std::domain_error);
    CHECK_THROWS_AS(zeta_exact(3), std::domain_error);
}

TEST_CASE("zeta_interval enclosures") {
    Interval z2 = zeta_interval(2, 64);
    Interval z2e = enclose(zeta_exact(2), 80);
    CHECK(z2.contains(z2e.lo.to_rational()));
    CHECK(z2.contains(z2e.hi.to_rational()));

    // oracle for zeta(3): plain partial sum with integral-comparison tail
    long N = 4000;
    Interval acc = Interval::exact(0, 80);
    for (long n = 1; n <= N; ++n)
        acc = iv_add(acc, Interval::from_rational(cpp_rational(1, cpp_int(n) * n * n), 80));
    cpp_rational lo = acc.lo.to_rational() + cpp_rational(1, 2 * cpp_int(N + 1) * (N + 1));
    cpp_rational hi = acc.hi.to_rational() + cpp_rational(1, 2 * cpp_int(N) * N);  // < int_N x^-3
    Interval z3 = zeta_interval(3, 64);
    CHECK(z3.width() <= cpp_rational(cpp_int(2), pow_int(2, 64)));
    CHECK(z3.lo.to_rational() >= lo - cpp_rational(1, 1000000));
    CHECK(z3.hi.to_rational() <= hi + cpp_rational(1, 1000000));
    // 1.2020569031595942853997... : the enclosure must sit inside the bracket
    CHECK(z3.lo.to_rational() >= cpp_rational(cpp_int("120205690315959428528"), cpp_int("100000000000000000000")));
    CHECK(z3.hi.to_rational() <= cpp_rational(cpp_int("120205690315959428551"), cpp_int("100000000000000000000")));
    CHECK(z3.contains(cpp_rational(cpp_int("1202056903159594285399738"), cpp_int("1000000000000000000000000"))));

    Interval z20 = zeta_interval(20, 32);
    CHECK(z20.lo.to_rational() > 1);
    CHECK(z20.hi.to_rational() < cpp_rational(1000002, 1000000));
}

TEST_CASE("zeta_interval refinement narrows") {
    for (long s : {3, 5, 9}) {
        Interval a = zeta_interval(s, 32), b = zeta_interval(s, 64), c = zeta_interval(s, 128);
        CHECK(b.width() <= a.width());
        CHECK(c.width() <= b.width());
        // all contain the truth, so they pairwise intersect
        CHECK(b.lo.to_rational() <= a.hi.to_rational());
        CHECK(a.lo.to_rational() <= b.hi.to_rational());
    }
}

TEST_CASE("consistency zeta_exact vs zeta_interval for even s") {
    for (long s = 2; s <= 40; s += 2) {
        Interval ex = enclose(zeta_exact(s), 64);
        Interval iv = zeta_interval(s, 64);
        // enclosures of the same number must intersect
        CHECK(ex.lo.to_rational() <= iv.hi.to_rational());
        CHECK(iv.lo.to_rational() <= ex.hi.to_rational());
    }
}

TEST_CASE("gamma_half") {
    CHECK(gamma_half(4) == ExactReal(cpp_rational(1)));
    CHECK(gamma_half(1) == ExactReal(cpp_rational(1), 1, 1));
    CHECK(gamma_half(7) == ExactReal(cpp_rational(15, 8), 1, 1));
    for (long k = 1; k <= 30; ++k) {
        ExactReal lhs = gamma_half(k + 2);
        ExactReal rhs = ExactReal(cpp_rational(k, 2)) * gamma_half(k);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("l_value_exact at the supported discriminants") {
    ExactReal l1 = l_value_exact(1, -4);
    CHECK(l1 == ExactReal(cpp_rational(1, 4), 2, 1));  // pi/4
    ExactReal l3 = l_value_exact(3, -4);
    CHECK(l3 == ExactReal(cpp_rational(1, 32), 6, 1));  // pi^3/32
    CHECK_THROWS_AS(l_value_exact(2, -4), std::domain_error);
    CHECK_THROWS_AS(l_value_exact(3, 8), std::domain_error);
    CHECK_THROWS_AS(l_value_exact(1, 5), std::domain_error);
}

TEST_CASE("l_value_exact matches Dirichlet partial sums") {
    for (long D : {-4L, -8L, 8L}) {
        int delta = D < 0 ? 1 : 0;
        for (long k = 1; k <= 15; ++k) {
            if ((k - delta) % 2 != 0) continue;
            long N = (k == 1) ? 100000 : 2000;
            Interval s = Interval::exact(0, 80);
            for (long n = 1; n <= N; ++n) {
                int chi = kronecker(cpp_int(D), cpp_int(n));
                if (chi)
                    s = iv_add(s, Interval::from_rational(cpp_rational(chi) / pow_rat(cpp_rational(n), k), 80));
            }
            // period sums vanish, so Abel summation bounds the tail by 2f * N^{-k}
            cpp_rational tail = 2 * cpp_rational(D < 0 ? -D : D) / pow_rat(cpp_rational(N), k);
            Interval ex = enclose(l_value_exact(k, D), 96);
            cpp_rational mid = (ex.lo.to_rational() + ex.hi.to_rational()) / 2;
            cpp_rational diff = mid - (s.lo.to_rational() + s.hi.to_rational()) / 2;
            if (diff < 0) diff = -diff;
            CHECK(diff <= tail + cpp_rational(1, 1000000));
        }
    }
}

TEST_CASE("enclose and compare") {
    Interval piq = enclose(ExactReal(cpp_rational(1, 4), 2, 1), 32);
    CHECK(piq.lo.to_rational() >= cpp_rational(78539816, 100000000));
    CHECK(piq.hi.to_rational() <= cpp_rational(78539817, 100000000));
    CHECK(compare(Interval::hull(1, 2, 32), Interval::hull(3, 4, 32)) == Cmp::less);
    CHECK(compare(Interval::hull(3, 4, 32), Interval::hull(1, 2, 32)) == Cmp::greater);
    CHECK(compare(Interval::hull(1, 3, 32), Interval::hull(2, 4, 32)) == Cmp::undecided);
}

TEST_CASE("interval arithmetic containment fuzz") {
    std::mt19937 rng(12345);
    auto rand_rat = [&]() {
        long n = (long)(rng() % 2001) - 1000;
        long d = 1 + (long)(rng() % 97);
        return cpp_rational(n, d);
    };
    for (int iter = 0; iter < 300; ++iter) {
        cpp_rational x = rand_rat(), y = rand_rat();
        Interval ix = Interval::from_rational(x, 24), iy = Interval::from_rational(y, 24);
        CHECK(iv_add(ix, iy).contains(x + y));
        CHECK(iv_sub(ix, iy).contains(x - y));
        CHECK(iv_mul(ix, iy).contains(x * y));
        if (y > cpp_rational(1, 50) || y < cpp_rational(-1, 50)) CHECK(iv_div(ix, iy).contains(x / y));
        if (x >= 0) {
            Interval s = iv_sqrt(Interval::from_rational(x, 48));
            Interval s2 = iv_mul(s, s);
            CHECK(s2.hi.to_rational() >= x);
            CHECK(s2.lo.to_rational() <= x);
        }
        CHECK(iv_pow(ix, 3).contains(x * x * x));
    }
}

TEST_CASE("exact real algebra") {
    ExactReal a(cpp_rational(3, 2), 1, 6);
    ExactReal b(cpp_rational(2), 3, 10);
    ExactReal p = a * b;  // 3 pi^2 sqrt(60) = 6 pi^2 sqrt(15)
    CHECK(p.coeff == cpp_rational(6));
    CHECK(p.pi_half_exp == 4);
    CHECK(p.radicand == 15);
    ExactReal q = p / b;
    CHECK(q == a);
    CHECK_THROWS_AS(a.add_same(b), std::domain_error);
    CHECK(a.add_same(a).coeff == cpp_rational(3));
    CHECK(ExactReal(cpp_rational(0), 4, 7).pi_half_exp == 0);  // canonical zero
}

TEST_CASE("decide_compare ladder") {
    // pi vs a rational just below it: decidable
    Cmp c = decide_compare([](long p) {
        return std::make_pair(Interval::from_rational(cpp_rational(314159, 100000), p), pi_interval(p));
    });
    CHECK(c == Cmp::less);
    // equal quantities stay undecided: must throw at the cap
    CHECK_THROWS_AS(decide_compare(
                        [](long p) { return std::make_pair(pi_interval(p), pi_interval(p)); }, 128, 512),
                    precision_cap_error);
}
