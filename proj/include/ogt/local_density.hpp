#pragma once

#include "ogt/jordan.hpp"

namespace ogt {

// P_p(m) = prod_{k=1}^m (1 - p^{-2k}), P_p(0) = 1
cpp_rational P_p(const cpp_int& p, long m);

// local density alpha_p(L) from the Jordan data (exact)
cpp_rational alpha_p_odd(const JordanDecomposition& jd);
cpp_rational alpha_2(const JordanDecomposition& jd);
cpp_rational alpha_p(const JordanDecomposition& jd);

// Independent congruence-count density: (1/2) p^{-k r(r-1)/2} #{X mod p^k :
// X^T S X = S mod p^k}.  Desk scale only (rank <= 4, p^k <= 625 by default).
cpp_rational alpha_oracle(const IntegralLattice& L, const cpp_int& p, long k,
                          long long node_budget = 400000000LL);

}  // namespace ogt
