#pragma once

#include "ogt/exact_real.hpp"

#include <functional>

namespace ogt {

// Bernoulli number B_k in the convention B_1 = -1/2, so that
// zeta(2k) = (-1)^{k+1} B_{2k} (2 pi)^{2k} / (2 (2k)!).
cpp_rational bernoulli(unsigned long k);

// Bernoulli polynomial value B_k(x).
cpp_rational bernoulli_poly(unsigned long k, const cpp_rational& x);

// Generalized Bernoulli number B_{k,chi} for the Kronecker character chi_D,
// computed by the finite sum f^{k-1} sum_a chi(a) B_k(a/f), f = |D|.
cpp_rational generalized_bernoulli(unsigned long k, long D);

// zeta(s) for even s >= 2 as rational * pi^s.
ExactReal zeta_exact(long s);

// Rigorous enclosure of zeta(s), s >= 2, width <= 2^(1-prec).  Dirichlet
// partial sum with integral-comparison tail, upgraded by Euler-Maclaurin
// correction terms (remainder bounded by the first omitted term).
Interval zeta_interval(long s, long prec);

// L(k, chi_D) for fundamental D in {-4, -8, 8}, parity chi_D(-1) = (-1)^k.
ExactReal l_value_exact(long k, long D);

// Gamma(k/2) exactly, k >= 1.
ExactReal gamma_half(long k);

Interval pi_interval(long prec);

using Cmp_ = Cmp;
inline Cmp compare(const Interval& a, const Interval& b) { return iv_compare(a, b); }

// Precision ladder: evaluate cmp at 128 bits, doubling to 4096; throws
// precision_cap_error when still undecided at the cap.
Cmp decide_compare(const std::function<std::pair<Interval, Interval>(long)>& eval,
                   long start_prec = 128, long cap = 4096);

}  // namespace ogt
