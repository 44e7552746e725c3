#include "ogt/local_density.hpp"

#include <algorithm>
#include <functional>
#include "ogt/matrix.hpp"
#include <unordered_map>

namespace ogt {

cpp_rational P_p(const cpp_int& p, long m) {
    cpp_rational r = 1;
    for (long k = 1; k <= m; ++k) {
        cpp_int pk = pow_int(p, (unsigned long)(2 * k));
        r *= cpp_rational(pk - 1, pk);
    }
    return r;
}

cpp_rational alpha_p_odd(const JordanDecomposition& jd) {
    if (jd.p == 2) throw std::domain_error("alpha_p_odd: odd p only");
    cpp_rational r = pow_rat(cpp_rational(2), s_p(jd) - 1);
    r *= pow_rat(cpp_rational(jd.p), (long)w_p(jd));
    for (auto& b : jd.blocks) {
        r *= P_p(jd.p, b.rank / 2);
        if (b.chi != 0) {
            cpp_int ph = pow_int(jd.p, (unsigned long)(b.rank / 2));
            r /= cpp_rational(ph + b.chi, ph);
        }
    }
    return r;
}

cpp_rational alpha_2(const JordanDecomposition& jd) {
    if (jd.p != 2) throw std::domain_error("alpha_2: p = 2 only");
    // rank-generic exponent r - 1 + w - q + s + s'
    cpp_int expo = cpp_int(jd.lattice_rank - 1) + w_p(jd) - q_of(jd) + s_p(jd) + s2_prime(jd);
    cpp_rational r = pow_rat(cpp_rational(2), (long)expo);
    for (auto& b : jd.blocks) {
        r *= P_p(cpp_int(2), b.even_rank / 2);
        r /= E_2j(jd, b.scale);
    }
    return r;
}

cpp_rational alpha_p(const JordanDecomposition& jd) {
    return jd.p == 2 ? alpha_2(jd) : alpha_p_odd(jd);
}

// ---- congruence-count oracle ----
//
// Counts X mod p^k with X^T S X = S, column by column.  Two reductions keep
// this tractable: the count of completions depends on the placed columns
// only through the rows x_j^T S (memoized), and all constraints factor
// through (Z/p^k)^r / ker(S), so after an SNF change of basis column
// entries are enumerated with per-coordinate moduli.

namespace {

struct OracleCtx {
    int r;
    long long q;  // p^k
    long long p;
    long k;
    long long S[4][4];       // kernel-standard basis, mod q
    long long mod_col[4];    // class modulus per coordinate (q / gcd(d_i, q))
    long long budget;
    int key_bits;            // bits per packed entry; 0 = packing impossible
    std::vector<std::unordered_map<unsigned long long, long long>> memo64;
    std::vector<std::unordered_map<std::string, long long>> memo_s;
    std::vector<long long> row_stack;  // rows x_j^T S of placed columns

    void spend(long long c) {
        budget -= c;
        if (budget < 0) throw resource_cap_error("alpha_oracle: node budget exceeded");
    }
};

long long mod_q(long long x, long long q) {
    long long r = x % q;
    return r < 0 ? r + q : r;
}

long long inv_mod(long long a, long long q) {
    long long r0 = q, r1 = mod_q(a, q), t0 = 0, t1 = 1;
    while (r1) {
        long long d = r0 / r1;
        long long r2 = r0 - d * r1; r0 = r1; r1 = r2;
        long long t2 = t0 - d * t1; t0 = t1; t1 = t2;
    }
    return mod_q(t0, q);
}

long pval(long long x, long long p, long cap) {
    if (x == 0) return cap;
    long v = 0;
    while (v < cap && x % p == 0) { x /= p; ++v; }
    return v;
}

long long count_from(OracleCtx& ctx, int depth);

// Enumerate class representatives (x_i < mod_col) of solutions of the
// placed-row system, recursing one column deeper on each survivor.
long long transitions(OracleCtx& ctx, int depth) {
    int r = ctx.r;
    long long q = ctx.q;
    int m = depth;
    long long target = mod_q(ctx.S[depth][depth], q);
    bool last = (depth == r - 1);
    long long total = 0;
    long long x[4];

    auto handle = [&](const long long* xin) {
        ctx.spend(r);
        long long v = 0;
        for (int i = 0; i < r; ++i) {
            if (!xin[i]) continue;
            long long row = 0;
            for (int j = 0; j < r; ++j) row += ctx.S[i][j] * xin[j];
            v = (v + xin[i] * mod_q(row, q)) % q;
        }
        if (v != target) return;
        if (last) {
            ++total;
            return;
        }
        size_t base = ctx.row_stack.size();
        for (int t = 0; t < r; ++t) {
            long long sv = 0;
            for (int u = 0; u < r; ++u) sv += ctx.S[u][t] * xin[u];
            ctx.row_stack.push_back(mod_q(sv, q));
        }
        long long child = count_from(ctx, depth + 1);
        ctx.row_stack.resize(base);
        if (child > (long long)4e17 - total) throw resource_cap_error("alpha_oracle: count overflow");
        total += child;
    };

    if (m == 0) {
        for (int i = 0; i < r; ++i) x[i] = 0;
        for (;;) {
            ctx.spend(1);
            handle(x);
            int t = r - 1;
            while (t >= 0 && ++x[t] >= ctx.mod_col[t]) x[t--] = 0;
            if (t < 0) break;
        }
        return total;
    }

    // linear system from the placed rows
    long long A[4][4], b[4];
    for (int j = 0; j < m; ++j) {
        for (int t = 0; t < r; ++t) A[j][t] = ctx.row_stack[(size_t)j * r + t];
        b[j] = ctx.S[j][depth];
    }
    int colperm[4] = {0, 1, 2, 3};
    int np = 0;
    long long pivpow[4];
    for (;;) {
        long best = ctx.k;
        int bi = -1, bj = -1;
        for (int i = np; i < m; ++i)
            for (int j = np; j < r; ++j) {
                long v = pval(A[i][j], ctx.p, ctx.k);
                if (v < best) { best = v; bi = i; bj = j; }
            }
        if (bi < 0) break;
        for (int j = 0; j < r; ++j) std::swap(A[bi][j], A[np][j]);
        std::swap(b[bi], b[np]);
        for (int i = 0; i < m; ++i) std::swap(A[i][bj], A[i][np]);
        std::swap(colperm[bj], colperm[np]);
        long long pv = 1;
        for (long t = 0; t < best; ++t) pv *= ctx.p;
        long long qv = q / pv;
        long long uinv = inv_mod(A[np][np] / pv, qv);
        for (int i = np + 1; i < m; ++i) {
            if (A[i][np] == 0) continue;
            long long c = mod_q((A[i][np] / pv) % qv * uinv % qv, qv);
            if (!c) continue;
            for (int j = np; j < r; ++j) A[i][j] = mod_q(A[i][j] - c * A[np][j], q);
            b[i] = mod_q(b[i] - c * b[np], q);
        }
        pivpow[np] = pv;
        ++np;
        if (np == m || np == r) break;
    }
    for (int i = np; i < m; ++i)
        if (mod_q(b[i], q) != 0) return 0;

    long long y[4] = {0, 0, 0, 0};
    // iterate free coordinates (np..r-1) with an odometer; back-substitute
    // pivots recursively (depth <= 3)
    std::function<void(int)> rec_piv = [&](int t) {
        if (t < 0) {
            for (int j = 0; j < r; ++j) x[colperm[j]] = y[j];
            handle(x);
            return;
        }
        long long rhs = b[t];
        for (int j = t + 1; j < r; ++j)
            if (A[t][j] && y[j]) rhs -= A[t][j] * y[j] % q;
        rhs = mod_q(rhs, q);
        long long pv = pivpow[t];
        if (rhs % pv != 0) return;
        long long qv = q / pv;
        long long mcol = ctx.mod_col[colperm[t]];
        long long y0 = mod_q((rhs / pv) % qv * inv_mod(A[t][t] / pv, qv) % qv, qv);
        ctx.spend(mcol / qv + 1);
        for (long long yt = y0; yt < mcol; yt += qv) {
            y[t] = yt;
            rec_piv(t - 1);
        }
    };
    std::function<void(int)> rec_free = [&](int j) {
        if (j < np) {
            rec_piv(np - 1);
            return;
        }
        long long mcol = ctx.mod_col[colperm[j]];
        ctx.spend(mcol);
        for (long long v = 0; v < mcol; ++v) {
            y[j] = v;
            rec_free(j - 1);
        }
    };
    rec_free(r - 1);
    return total;
}

long long count_from(OracleCtx& ctx, int depth) {
    int r = ctx.r;
    if (depth == r) return 1;
    if (depth == 0) return transitions(ctx, 0);
    unsigned long long key64 = 0;
    std::string keys;
    bool packed = ctx.key_bits > 0 && ctx.key_bits * r * depth <= 64;
    if (packed) {
        for (size_t i = 0; i < ctx.row_stack.size(); ++i)
            key64 = (key64 << ctx.key_bits) | (unsigned long long)ctx.row_stack[i];
        auto it = ctx.memo64[depth].find(key64);
        if (it != ctx.memo64[depth].end()) return it->second;
    } else {
        keys.reserve(ctx.row_stack.size() * 2);
        for (auto v : ctx.row_stack) {
            keys.push_back((char)(v & 0xff));
            keys.push_back((char)((v >> 8) & 0xff));
        }
        auto it = ctx.memo_s[depth].find(keys);
        if (it != ctx.memo_s[depth].end()) return it->second;
    }
    long long total = transitions(ctx, depth);
    if (packed) ctx.memo64[depth][key64] = total;
    else ctx.memo_s[depth][keys] = total;
    return total;
}

}  // namespace

cpp_rational alpha_oracle(const IntegralLattice& L, const cpp_int& p, long k, long long node_budget) {
    int r = L.rank();
    if (r > 4) throw resource_cap_error("alpha_oracle: rank <= 4 only");
    cpp_int qq = pow_int(p, (unsigned long)k);
    if (qq > 4096) throw resource_cap_error("alpha_oracle: p^k too large");
    OracleCtx ctx;
    ctx.r = r;
    ctx.q = (long long)qq;
    ctx.p = (long long)p;
    ctx.k = k;
    ctx.budget = node_budget;
    ctx.memo64.resize(r + 1);
    ctx.memo_s.resize(r + 1);
    int bits = 1;
    while ((1LL << bits) < ctx.q) ++bits;
    ctx.key_bits = bits;
    // kernel-standard coordinates: S' = V^T S V with U S V = D
    Snf sn = smith_normal_form(L.gram);
    ZMat Sp = sn.v.transpose() * L.gram * sn.v;
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) ctx.S[i][j] = (long long)mod_pos(Sp(i, j), qq);
    cpp_int kersize = 1;
    for (int i = 0; i < r; ++i) {
        cpp_int g = gcd(sn.d(i, i), qq);
        ctx.mod_col[i] = (long long)(qq / g);
        kersize *= g;
    }
    cpp_int N = cpp_int(count_from(ctx, 0)) * pow_int(kersize, (unsigned long)r);
    // (1/2) * N_k / p^{k r(r-1)/2}
    cpp_int denom = 2 * pow_int(p, (unsigned long)(k * r * (r - 1) / 2));
    return cpp_rational(N, denom);
}

}  // namespace ogt
