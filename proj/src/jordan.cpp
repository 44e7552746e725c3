#include "ogt/jordan.hpp"

#include <algorithm>
#include <map>

namespace ogt {

namespace {

long val_capped(const cpp_int& x, const cpp_int& p, long cap) {
    if (x == 0) return cap;
    cpp_int y = x;
    long v = 0;
    while (v < cap && y % p == 0) { y /= p; ++v; }
    return v;
}

struct RawPiece {
    long scale;
    bool is_pair;     // 2x2 even pivot (p = 2)
    cpp_int unit;     // 1x1: diagonal unit; 2x2: unit part of the block det
};

// symmetric p-adic elimination mod p^M
std::vector<RawPiece> eliminate(const IntegralLattice& L, const cpp_int& p, long M) {
    int n = L.rank();
    cpp_int q = pow_int(p, (unsigned long)M);
    ZMat a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = mod_pos(L.gram(i, j), q);
    std::vector<int> act;
    for (int i = 0; i < n; ++i) act.push_back(i);
    std::vector<RawPiece> out;

    auto clear_with_1x1 = [&](int i, long v) {
        cpp_int qv = pow_int(p, (unsigned long)(M - v));
        cpp_int u = mod_pos(a(i, i) / pow_int(p, (unsigned long)v), qv);
        cpp_int uinv = mod_inverse(u, qv);
        for (int r : act) {
            if (r == i || a(r, i) == 0) continue;
            cpp_int c = mod_pos((a(r, i) / pow_int(p, (unsigned long)v)) * uinv, qv);
            if (c == 0) continue;
            for (int s = 0; s < n; ++s) a(r, s) = mod_pos(a(r, s) - c * a(i, s), q);
            for (int s = 0; s < n; ++s) a(s, r) = mod_pos(a(s, r) - c * a(s, i), q);
        }
        out.push_back({v, false, mod_pos(u, pow_int(p, (unsigned long)std::min(M - v, 4L)))});
        act.erase(std::find(act.begin(), act.end(), i));
    };

    while (!act.empty()) {
        long vmin = M;
        int pi = -1, pj = -1;
        for (int i : act)
            for (int j : act) {
                long v = val_capped(a(i, j), p, M);
                if (v < vmin) { vmin = v; pi = i; pj = j; }
            }
        if (pi < 0 || vmin >= M) throw internal_check_error("jordan: working precision exhausted");
        if (p != 2) {
            if (pi != pj) {
                if (val_capped(a(pi, pi), p, M) > vmin) {
                    // mix row pj into row pi to surface a diagonal pivot
                    long vplus = val_capped(a(pi, pi) + 2 * a(pi, pj) + a(pj, pj), p, M);
                    cpp_int f = (vplus == vmin) ? 1 : -1;
                    for (int s = 0; s < n; ++s) a(pi, s) = mod_pos(a(pi, s) + f * a(pj, s), q);
                    for (int s = 0; s < n; ++s) a(s, pi) = mod_pos(a(s, pi) + f * a(s, pj), q);
                    if (val_capped(a(pi, pi), p, M) != vmin)
                        throw internal_check_error("jordan: diagonalization step failed");
                }
            }
            int di = -1;
            for (int i : act)
                if (val_capped(a(i, i), p, M) == vmin) { di = i; break; }
            if (di < 0) throw internal_check_error("jordan: no diagonal pivot for odd p");
            clear_with_1x1(di, vmin);
            continue;
        }
        // p = 2
        int di = -1;
        for (int i : act)
            if (val_capped(a(i, i), p, M) == vmin) { di = i; break; }
        if (di >= 0) {
            clear_with_1x1(di, vmin);
            continue;
        }
        // 2x2 even pivot at (pi, pj)
        int i = pi, j = pj;
        cpp_int b11 = a(i, i), b12 = a(i, j), b22 = a(j, j);
        cpp_int detb = b11 * b22 - b12 * b12;
        long vd = val_capped(detb, p, M);
        if (vd != 2 * vmin) throw internal_check_error("jordan: 2x2 pivot determinant valuation");
        cpp_int qv = pow_int(p, (unsigned long)(M - 2 * vmin));
        cpp_int du = mod_pos(detb / pow_int(p, (unsigned long)(2 * vmin)), qv);
        cpp_int duinv = mod_inverse(du, qv);
        cpp_int p2v = pow_int(p, (unsigned long)(2 * vmin));
        for (int r : act) {
            if (r == i || r == j) continue;
            // [ci cj] = [a(r,i) a(r,j)] * adj(B) / det(B)
            cpp_int xi = a(r, i) * b22 - a(r, j) * b12;
            cpp_int xj = -a(r, i) * b12 + a(r, j) * b11;
            if (xi % p2v != 0 || xj % p2v != 0) throw internal_check_error("jordan: 2x2 clearing residue");
            cpp_int ci = mod_pos((xi / p2v) * duinv, qv);
            cpp_int cj = mod_pos((xj / p2v) * duinv, qv);
            if (ci == 0 && cj == 0) continue;
            for (int s = 0; s < n; ++s) a(r, s) = mod_pos(a(r, s) - ci * a(i, s) - cj * a(j, s), q);
            for (int s = 0; s < n; ++s) a(s, r) = mod_pos(a(s, r) - ci * a(s, i) - cj * a(s, j), q);
        }
        out.push_back({vmin, true, mod_pos(du, cpp_int(8))});
        act.erase(std::find(act.begin(), act.end(), std::max(i, j)));
        act.erase(std::find(act.begin(), act.end(), std::min(i, j)));
    }
    return out;
}

int chi_of_even(const cpp_int& det_unit, int rank_even, const cpp_int& p) {
    if (rank_even == 0) return 1;  // zero even part counts as 0*U
    if (p == 2) {
        // chi = +1 iff det_unit * (-1)^{r/2} is 1 mod 8 (the (r/2)U class)
        cpp_int d = mod_pos(det_unit * ((rank_even / 2) % 2 ? -1 : 1), cpp_int(8));
        if (d == 1) return 1;
        if (d == 5) return -1;
        throw internal_check_error("jordan: even 2-adic block determinant class");
    }
    cpp_int d = mod_pos(det_unit * ((rank_even / 2) % 2 ? -1 : 1), p);
    return kronecker(d, p);
}

struct BlockAccum {
    int rank = 0;
    int even_rank = 0;
    cpp_int even_det = 1;
    std::vector<cpp_int> odd_units;
};

JordanDecomposition assemble(const IntegralLattice& L, const cpp_int& p, long M) {
    auto pieces = eliminate(L, p, M);
    std::map<long, BlockAccum> acc;
    for (auto& pc : pieces) {
        BlockAccum& b = acc[pc.scale];
        if (pc.is_pair) {
            b.rank += 2;
            b.even_rank += 2;
            b.even_det = mod_pos(b.even_det * pc.unit, cpp_int(8));
        } else {
            b.rank += 1;
            if (p == 2) b.odd_units.push_back(mod_pos(pc.unit, cpp_int(8)));
            else b.even_det = mod_pos(b.even_det * pc.unit, p);
        }
    }
    JordanDecomposition jd;
    jd.p = p;
    jd.lattice_rank = L.rank();
    for (auto& [scale, b] : acc) {
        JordanBlock blk;
        blk.scale = scale;
        blk.rank = b.rank;
        if (p != 2) {
            blk.chi = (b.rank % 2) ? 0 : chi_of_even(b.even_det, b.rank, p);
            jd.blocks.push_back(blk);
            continue;
        }
        // normalize the odd part to rank <= 2: <a> + <b> + <c> splits off the
        // even 2x2 [[a+b, b], [b, b+c]] with odd complement a*b*c/detE
        auto& odd = b.odd_units;
        while (odd.size() >= 3) {
            cpp_int a1 = odd[0], a2 = odd[1], a3 = odd[2];
            cpp_int detE = mod_pos((a1 + a2) * (a2 + a3) - a2 * a2, cpp_int(8));
            cpp_int d = mod_pos(a1 * a2 * a3 * mod_inverse(detE, cpp_int(8)), cpp_int(8));
            odd.erase(odd.begin(), odd.begin() + 3);
            odd.push_back(d);
            b.even_rank += 2;
            b.even_det = mod_pos(b.even_det * detE, cpp_int(8));
        }
        blk.odd_type = !odd.empty();
        blk.even_rank = b.even_rank;
        blk.chi = chi_of_even(b.even_det, b.even_rank, p);
        for (auto& u : odd) blk.odd_units.push_back((int)(long)u);
        std::sort(blk.odd_units.begin(), blk.odd_units.end());
        jd.blocks.push_back(blk);
    }
    cpp_int vdet = 0;
    for (auto& b : jd.blocks) vdet += cpp_int(b.scale) * b.rank;
    if (vdet != valuation(boost::multiprecision::abs(L.det()), p))
        throw internal_check_error("jordan: determinant valuation mismatch");
    return jd;
}

bool same_invariants(const JordanDecomposition& a, const JordanDecomposition& b) {
    if (a.blocks.size() != b.blocks.size()) return false;
    for (size_t i = 0; i < a.blocks.size(); ++i) {
        const JordanBlock &x = a.blocks[i], &y = b.blocks[i];
        if (x.scale != y.scale || x.rank != y.rank || x.odd_type != y.odd_type || x.chi != y.chi ||
            x.even_rank != y.even_rank || x.odd_units != y.odd_units)
            return false;
    }
    return true;
}

}  // namespace

JordanDecomposition jordan_decompose(const IntegralLattice& L, const cpp_int& p) {
    long vdet = valuation(boost::multiprecision::abs(L.det()), p);
    long M = 2 * vdet + (p == 2 ? 10 : 6);
    JordanDecomposition jd = assemble(L, p, M);
    // stability guard: doubled working precision must reproduce the data
    JordanDecomposition jd2 = assemble(L, p, 2 * M);
    if (!same_invariants(jd, jd2)) throw internal_check_error("jordan: unstable at doubled precision");
    return jd;
}

int s_p(const JordanDecomposition& jd) { return (int)jd.blocks.size(); }

cpp_int w_p(const JordanDecomposition& jd) {
    cpp_int w = 0;
    for (auto& b : jd.blocks) {
        cpp_int tail = 0;
        for (auto& c : jd.blocks)
            if (c.scale > b.scale) tail += c.rank;
        w += cpp_int(b.scale) * (cpp_int(b.rank) * (b.rank + 1) / 2 + cpp_int(b.rank) * tail);
    }
    return w;
}

cpp_int q_of(const JordanDecomposition& jd) {
    if (jd.p != 2) throw std::domain_error("q_of: p = 2 only");
    cpp_int q = 0;
    for (auto& b : jd.blocks) {
        if (!b.odd_type) continue;
        bool next_odd = !jd.even_at(b.scale + 1);
        q += b.rank + (next_odd ? 1 : 0);
    }
    return q;
}

int s2_prime(const JordanDecomposition& jd) {
    if (jd.p != 2) throw std::domain_error("s2_prime: p = 2 only");
    int cnt = 0;
    long top = jd.max_scale() + 1;
    for (long j = -1; j <= top; ++j) {
        if (jd.n_pj(j) != 0) continue;
        if (!jd.even_at(j - 1) || !jd.even_at(j + 1)) ++cnt;
    }
    return cnt;
}

int chi_plus(const JordanDecomposition& jd, long j) {
    const JordanBlock* b = jd.block_at(j);
    return b ? b->chi : 1;
}

cpp_rational E_2j(const JordanDecomposition& jd, long j) {
    if (jd.p != 2) throw std::domain_error("E_2j: p = 2 only");
    const JordanBlock* b = jd.block_at(j);
    if (!b) throw std::domain_error("E_2j: empty block");
    if (!jd.even_at(j - 1) || !jd.even_at(j + 1)) return 1;
    if (b->odd_units.size() == 2) {
        int e1 = b->odd_units[0], e2 = b->odd_units[1];
        if (((e1 - e2) % 4 + 4) % 4 == 0) return 1;  // <e1, e2> with e1 = e2 mod 4
    }
    cpp_rational t(cpp_int(b->chi), pow_int(2, (unsigned long)(b->even_rank / 2)));
    return 1 + t;
}

}  // namespace ogt
