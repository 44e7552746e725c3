#pragma once

#include "ogt/lattice.hpp"

namespace ogt {

// One Jordan constituent L_{p,j}(p^j).  For odd p the block is described by
// its rank and chi (Legendre class of det * (-1)^{r/2}; 0 for odd rank).
// For p = 2 we keep a decomposition L_{2,j} = even part + odd part of rank
// <= 2, recording the even rank, chi of the even part and the odd diagonal
// units mod 8.
struct JordanBlock {
    long scale = 0;
    int rank = 0;
    bool odd_type = false;        // p = 2 only: some odd diagonal present
    int chi = 0;                  // odd p: block chi; p = 2: chi of the even part
    int even_rank = 0;            // p = 2: rank of the even part
    std::vector<int> odd_units;   // p = 2: units mod 8, size <= 2
};

struct JordanDecomposition {
    cpp_int p;
    int lattice_rank = 0;
    std::vector<JordanBlock> blocks;  // strictly increasing scales, nonzero ranks

    const JordanBlock* block_at(long j) const {
        for (auto& b : blocks)
            if (b.scale == j) return &b;
        return nullptr;
    }
    int n_pj(long j) const {
        const JordanBlock* b = block_at(j);
        return b ? b->rank : 0;
    }
    bool even_at(long j) const {  // zero blocks count as even
        const JordanBlock* b = block_at(j);
        return !b || !b->odd_type;
    }
    long max_scale() const { return blocks.empty() ? 0 : blocks.back().scale; }
    // v_p(D(L)) = max scale (0 when unimodular)
    long mu() const { return max_scale(); }
};

JordanDecomposition jordan_decompose(const IntegralLattice& L, const cpp_int& p);

// ---- invariants of section 5.1 ----

int s_p(const JordanDecomposition& jd);
cpp_int w_p(const JordanDecomposition& jd);
// q(L) = sum q_j; p = 2 only
cpp_int q_of(const JordanDecomposition& jd);
// number of indices j >= -1 with L_{2,j} = 0 and an odd neighbor
int s2_prime(const JordanDecomposition& jd);
int chi_plus(const JordanDecomposition& jd, long j);
cpp_rational E_2j(const JordanDecomposition& jd, long j);

}  // namespace ogt
