#include "ogt/lattice.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace ogt {

IntegralLattice::IntegralLattice(ZMat g) : gram(std::move(g)) {
    if (gram.r != gram.c || gram.r < 1) throw std::domain_error("lattice: square Gram of rank >= 1 required");
    for (int i = 0; i < gram.r; ++i)
        for (int j = 0; j < i; ++j)
            if (gram(i, j) != gram(j, i)) throw std::domain_error("lattice: Gram not symmetric");
    if (ogt::det(gram) == 0) throw std::domain_error("lattice: degenerate Gram");
}

bool IntegralLattice::is_even() const {
    for (int i = 0; i < gram.r; ++i)
        if (gram(i, i) % 2 != 0) return false;
    return true;
}

bool IntegralLattice::is_primitive() const {
    cpp_int g = 0;
    for (auto& x : gram.a) g = gcd(g, x);
    return g == 1;
}

cpp_int IntegralLattice::descale() {
    cpp_int g = 0;
    for (auto& x : gram.a) g = gcd(g, x);
    if (g > 1)
        for (auto& x : gram.a) x /= g;
    return g > 1 ? g : cpp_int(1);
}

IntegralLattice IntegralLattice::scaled(const cpp_int& a) const {
    if (a < 1) throw std::domain_error("scale factor must be >= 1");
    ZMat g = gram;
    for (auto& x : g.a) x *= a;
    return IntegralLattice(g);
}

cpp_int IntegralLattice::pairing(const std::vector<cpp_int>& x, const std::vector<cpp_int>& y) const {
    int n = rank();
    if ((int)x.size() != n || (int)y.size() != n) throw std::domain_error("pairing: dimension mismatch");
    cpp_int s = 0;
    for (int i = 0; i < n; ++i) {
        if (x[i] == 0) continue;
        cpp_int row = 0;
        for (int j = 0; j < n; ++j) row += gram(i, j) * y[j];
        s += x[i] * row;
    }
    return s;
}

std::pair<int, int> signature(const IntegralLattice& L) {
    QMat m = to_q(L.gram);
    int n = m.r, pos = 0, neg = 0;
    for (int k = 0; k < n; ++k) {
        if (m(k, k) == 0) {
            int piv = -1;
            for (int i = k + 1; i < n; ++i)
                if (m(i, i) != 0) { piv = i; break; }
            if (piv >= 0) {
                m.swap_rows(k, piv);
                m.swap_cols(k, piv);
            } else {
                // all remaining diagonal zero; mix in an off-diagonal entry
                int ii = -1, jj = -1;
                for (int i = k; i < n && ii < 0; ++i)
                    for (int j = i + 1; j < n; ++j)
                        if (m(i, j) != 0) { ii = i; jj = j; break; }
                if (ii < 0) throw std::domain_error("signature: degenerate form");
                m.add_row(ii, jj, cpp_rational(1));
                m.add_col(ii, jj, cpp_rational(1));
                if (ii != k) { m.swap_rows(k, ii); m.swap_cols(k, ii); }
            }
        }
        cpp_rational piv = m(k, k);
        (piv > 0 ? pos : neg)++;
        for (int i = k + 1; i < n; ++i) {
            if (m(i, k) == 0) continue;
            cpp_rational f = m(i, k) / piv;
            m.add_row(i, k, -f);
            m.add_col(i, k, -f);
        }
    }
    return {pos, neg};
}

// ---- constructors ----

IntegralLattice hyperbolic_U() {
    ZMat g(2, 2);
    g(0, 1) = g(1, 0) = 1;
    return IntegralLattice(g);
}

IntegralLattice root_A(int n) {
    if (n < 1) throw std::domain_error("root_A: n >= 1");
    ZMat g(n, n);
    for (int i = 0; i < n; ++i) {
        g(i, i) = -2;
        if (i + 1 < n) g(i, i + 1) = g(i + 1, i) = 1;
    }
    return IntegralLattice(g);
}

IntegralLattice root_D(int n) {
    if (n < 1) throw std::domain_error("root_D: n >= 1");
    if (n == 1) return diag_lattice({cpp_int(-4)});
    if (n == 2) return diag_lattice({cpp_int(-2), cpp_int(-2)});
    // root basis with (d1,d2)=0, (d1,d3)=1, (di,di+1)=1 for i>=2
    ZMat g(n, n);
    for (int i = 0; i < n; ++i) g(i, i) = -2;
    g(0, 2) = g(2, 0) = 1;
    for (int i = 1; i + 1 < n; ++i) g(i, i + 1) = g(i + 1, i) = 1;
    return IntegralLattice(g);
}

IntegralLattice root_E8() {
    int adj[][2] = {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {2, 7}};
    ZMat g(8, 8);
    for (int i = 0; i < 8; ++i) g(i, i) = -2;
    for (auto& e : adj) g(e[0], e[1]) = g(e[1], e[0]) = 1;
    return IntegralLattice(g);
}

IntegralLattice diag_lattice(const std::vector<cpp_int>& d) {
    ZMat g((int)d.size(), (int)d.size());
    for (int i = 0; i < (int)d.size(); ++i) g(i, i) = d[i];
    return IntegralLattice(g);
}

IntegralLattice odd_unimodular(int p, int q) {
    std::vector<cpp_int> d;
    for (int i = 0; i < p; ++i) d.push_back(1);
    for (int i = 0; i < q; ++i) d.push_back(-1);
    return diag_lattice(d);
}

IntegralLattice direct_sum(const IntegralLattice& a, const IntegralLattice& b) {
    int n = a.rank() + b.rank();
    ZMat g(n, n);
    for (int i = 0; i < a.rank(); ++i)
        for (int j = 0; j < a.rank(); ++j) g(i, j) = a.gram(i, j);
    for (int i = 0; i < b.rank(); ++i)
        for (int j = 0; j < b.rank(); ++j) g(a.rank() + i, a.rank() + j) = b.gram(i, j);
    return IntegralLattice(g);
}

// ---- expression grammar ----

namespace {
struct Parser {
    const std::string& s;
    size_t i = 0;
    explicit Parser(const std::string& str) : s(str) {}

    void skip() {
        while (i < s.size() && std::isspace((unsigned char)s[i])) ++i;
    }
    bool eat(char ch) {
        skip();
        if (i < s.size() && s[i] == ch) { ++i; return true; }
        return false;
    }
    long parse_int() {
        skip();
        size_t j = i;
        if (j < s.size() && (s[j] == '-' || s[j] == '+')) ++j;
        size_t k = j;
        while (k < s.size() && std::isdigit((unsigned char)s[k])) ++k;
        if (k == j) throw std::domain_error("lattice expr: expected integer at position " + std::to_string(i));
        long v = std::stol(s.substr(i, k - i));
        i = k;
        return v;
    }

    IntegralLattice parse_base() {
        skip();
        if (i >= s.size()) throw std::domain_error("lattice expr: unexpected end");
        char ch = s[i];
        if (ch == 'U') { ++i; return hyperbolic_U(); }
        if (ch == 'A') { ++i; return root_A((int)parse_int()); }
        if (ch == 'D') { ++i; return root_D((int)parse_int()); }
        if (ch == 'E') {
            ++i;
            long v = parse_int();
            if (v != 8) throw std::domain_error("lattice expr: only E8 is supported");
            return root_E8();
        }
        if (ch == 'I') {
            ++i;
            long p = parse_int();
            if (!eat(',')) throw std::domain_error("lattice expr: expected I<p>,<q>");
            long q = parse_int();
            return odd_unimodular((int)p, (int)q);
        }
        if (ch == '<') {
            ++i;
            long k = parse_int();
            if (!eat('>')) throw std::domain_error("lattice expr: expected '>'");
            return diag_lattice({cpp_int(k)});
        }
        if (ch == '-' || std::isdigit((unsigned char)ch)) return diag_lattice({cpp_int(parse_int())});
        throw std::domain_error(std::string("lattice expr: unexpected character '") + ch + "'");
    }

    IntegralLattice parse_term() {
        skip();
        long mult = 1;
        // a digit run directly followed by a letter or '<' is a multiplicity
        size_t save = i;
        if (i < s.size() && std::isdigit((unsigned char)s[i])) {
            size_t k = i;
            while (k < s.size() && std::isdigit((unsigned char)s[k])) ++k;
            if (k < s.size() && (std::isalpha((unsigned char)s[k]) || s[k] == '<')) {
                mult = std::stol(s.substr(i, k - i));
                if (mult < 1) throw std::domain_error("lattice expr: multiplicity must be >= 1");
                i = k;
            } else {
                i = save;
            }
        }
        IntegralLattice base = parse_base();
        skip();
        if (i < s.size() && s[i] == '(') {
            ++i;
            long a = parse_int();
            if (!eat(')')) throw std::domain_error("lattice expr: expected ')'");
            if (a < 1) throw std::domain_error("lattice expr: scaling must be >= 1");
            base = base.scaled(cpp_int(a));
        }
        IntegralLattice r = base;
        for (long m = 1; m < mult; ++m) r = direct_sum(r, base);
        return r;
    }

    IntegralLattice parse_sum() {
        IntegralLattice r = parse_term();
        for (;;) {
            skip();
            if (i < s.size() && s[i] == '+') {
                ++i;
                r = direct_sum(r, parse_term());
            } else
                break;
        }
        skip();
        if (i != s.size())
            throw std::domain_error("lattice expr: trailing input at position " + std::to_string(i));
        return r;
    }
};
}  // namespace

IntegralLattice parse_lattice(const std::string& expr) { return Parser(expr).parse_sum(); }

// ---- finite quadratic modules ----

bool FqmElem::is_zero() const {
    for (auto& x : c)
        if (x != 0) return false;
    return true;
}

cpp_int FiniteQuadraticModule::order() const {
    cpp_int o = 1;
    for (auto& d : orders) o *= d;
    return o;
}

cpp_int FiniteQuadraticModule::exponent() const { return orders.empty() ? cpp_int(1) : orders.back(); }

FqmElem FiniteQuadraticModule::zero() const { return {std::vector<cpp_int>(orders.size(), cpp_int(0))}; }

FqmElem FiniteQuadraticModule::reduce(std::vector<cpp_int> c) const {
    for (size_t i = 0; i < c.size(); ++i) c[i] = mod_pos(c[i], orders[i]);
    return {c};
}

FqmElem FiniteQuadraticModule::add(const FqmElem& x, const FqmElem& y) const {
    std::vector<cpp_int> c(orders.size());
    for (size_t i = 0; i < c.size(); ++i) c[i] = mod_pos(x.c[i] + y.c[i], orders[i]);
    return {c};
}

FqmElem FiniteQuadraticModule::neg(const FqmElem& x) const {
    std::vector<cpp_int> c(orders.size());
    for (size_t i = 0; i < c.size(); ++i) c[i] = mod_pos(-x.c[i], orders[i]);
    return {c};
}

FqmElem FiniteQuadraticModule::smul(const cpp_int& k, const FqmElem& x) const {
    std::vector<cpp_int> c(orders.size());
    for (size_t i = 0; i < c.size(); ++i) c[i] = mod_pos(k * x.c[i], orders[i]);
    return {c};
}

cpp_int FiniteQuadraticModule::elem_order(const FqmElem& x) const {
    cpp_int o = 1;
    for (size_t i = 0; i < orders.size(); ++i) {
        cpp_int d = orders[i] / gcd(orders[i], x.c[i] == 0 ? orders[i] : x.c[i]);
        o = lcm(o, d);
    }
    return o;
}

cpp_rational FiniteQuadraticModule::b(const FqmElem& x, const FqmElem& y) const {
    cpp_rational s = 0;
    for (int i = 0; i < ngens(); ++i) {
        if (x.c[i] == 0) continue;
        for (int j = 0; j < ngens(); ++j) {
            if (y.c[j] == 0) continue;
            s += cpp_rational(x.c[i] * y.c[j]) * bil(i, j);
        }
    }
    return mod1(s);
}

cpp_rational FiniteQuadraticModule::q(const FqmElem& x) const {
    if (!has_quadratic) throw std::domain_error("q on an odd-lattice discriminant module");
    cpp_rational s = 0;
    for (int i = 0; i < ngens(); ++i) {
        if (x.c[i] == 0) continue;
        s += cpp_rational(x.c[i] * x.c[i]) * quad[i];
        for (int j = i + 1; j < ngens(); ++j) {
            if (x.c[j] == 0) continue;
            s += 2 * cpp_rational(x.c[i] * x.c[j]) * bil(i, j);
        }
    }
    return mod2(s);
}

std::vector<FqmElem> FiniteQuadraticModule::elements(const cpp_int& cap) const {
    if (order() > cap) throw resource_cap_error("module enumeration exceeds cap");
    std::vector<FqmElem> out;
    FqmElem cur = zero();
    out.push_back(cur);
    size_t total = (size_t)(unsigned long)order();
    while (out.size() < total) {
        size_t i = 0;
        for (;;) {
            cur.c[i] += 1;
            if (cur.c[i] < orders[i]) break;
            cur.c[i] = 0;
            ++i;
        }
        out.push_back(cur);
    }
    return out;
}

std::vector<FqmElem> FiniteQuadraticModule::span(const std::vector<FqmElem>& gens_in, const cpp_int& cap) const {
    std::set<FqmElem> seen;
    std::vector<FqmElem> queue{zero()};
    seen.insert(zero());
    for (size_t h = 0; h < queue.size(); ++h) {
        for (auto& g : gens_in) {
            FqmElem nx = add(queue[h], g);
            if (seen.insert(nx).second) {
                queue.push_back(nx);
                if ((long)queue.size() > (long)cap) throw resource_cap_error("span exceeds cap");
            }
        }
    }
    return queue;
}

FiniteQuadraticModule FiniteQuadraticModule::p_part(const cpp_int& p) const {
    FiniteQuadraticModule r;
    r.has_quadratic = has_quadratic;
    std::vector<int> idx;
    std::vector<cpp_int> mult;
    for (int i = 0; i < ngens(); ++i) {
        cpp_int d = orders[i], pa = 1;
        while (d % p == 0) { d /= p; pa *= p; }
        if (pa == 1) continue;
        idx.push_back(i);
        mult.push_back(orders[i] / pa);  // h_i = (d_i / p^{a_i}) g_i, order p^{a_i}
        r.orders.push_back(pa);
    }
    int k = (int)idx.size();
    r.bil = QMat(k, k);
    if (has_quadratic) r.quad.resize(k);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) r.bil(i, j) = mod1(cpp_rational(mult[i] * mult[j]) * bil(idx[i], idx[j]));
        if (has_quadratic) r.quad[i] = mod2(cpp_rational(mult[i] * mult[i]) * quad[idx[i]]);
    }
    if (gens.r > 0) {
        r.gens = QMat(k, gens.c);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < gens.c; ++j) r.gens(i, j) = cpp_rational(mult[i]) * gens(idx[i], j);
    }
    return r;
}

std::vector<cpp_rational> FiniteQuadraticModule::lift(const FqmElem& x) const {
    if (gens.r != ngens()) throw std::domain_error("lift: module has no parent coordinates");
    std::vector<cpp_rational> v(gens.c, cpp_rational(0));
    for (int i = 0; i < ngens(); ++i)
        for (int j = 0; j < gens.c; ++j) v[j] += cpp_rational(x.c[i]) * gens(i, j);
    return v;
}

DiscriminantData discriminant_data(const IntegralLattice& L) {
    int n = L.rank();
    Snf s = smith_normal_form(L.gram);
    DiscriminantData dd;
    dd.snf_u = s.u;
    dd.gram = L.gram;
    FiniteQuadraticModule& A = dd.A;
    A.has_quadratic = L.is_even();
    for (int k = 0; k < n; ++k) {
        if (s.d(k, k) <= 1) continue;
        dd.positions.push_back(k);
        A.orders.push_back(s.d(k, k));
    }
    int m = (int)A.orders.size();
    A.gens = QMat(m, n);
    for (int t = 0; t < m; ++t) {
        int k = dd.positions[t];
        for (int i = 0; i < n; ++i) A.gens(t, i) = cpp_rational(s.v(i, k), s.d(k, k));
    }
    A.bil = QMat(m, m);
    if (A.has_quadratic) A.quad.resize(m);
    QMat gq = to_q(L.gram);
    for (int t = 0; t < m; ++t) {
        for (int u = 0; u < m; ++u) {
            cpp_rational v = 0;
            for (int i = 0; i < n; ++i) {
                if (A.gens(t, i) == 0) continue;
                for (int j = 0; j < n; ++j) v += A.gens(t, i) * gq(i, j) * A.gens(u, j);
            }
            if (t == u && A.has_quadratic) A.quad[t] = mod2(v);
            A.bil(t, u) = mod1(v);
        }
    }
    return dd;
}

FqmElem DiscriminantData::class_of(const std::vector<cpp_rational>& y) const {
    int n = gram.r;
    if ((int)y.size() != n) throw std::domain_error("class_of: dimension mismatch");
    std::vector<cpp_int> x(n);
    for (int i = 0; i < n; ++i) {
        cpp_rational v = 0;
        for (int j = 0; j < n; ++j) v += cpp_rational(gram(i, j)) * y[j];
        if (den(v) != 1) throw std::domain_error("class_of: vector not in the dual lattice");
        x[i] = num(v);
    }
    std::vector<cpp_int> c;
    for (size_t t = 0; t < positions.size(); ++t) {
        int k = positions[t];
        cpp_int s = 0;
        for (int j = 0; j < n; ++j) s += snf_u(k, j) * x[j];
        c.push_back(mod_pos(s, A.orders[t]));
    }
    return {c};
}

// ---- vector ops ----

bool is_primitive_vector(const std::vector<cpp_int>& v) {
    cpp_int g = 0;
    for (auto& x : v) g = gcd(g, x);
    return g == 1;
}

cpp_int divisor(const IntegralLattice& L, const std::vector<cpp_int>& l) {
    if (!is_primitive_vector(l)) throw std::domain_error("divisor: vector not primitive");
    cpp_int g = 0;
    for (int i = 0; i < L.rank(); ++i) {
        cpp_int s = 0;
        for (int j = 0; j < L.rank(); ++j) s += L.gram(i, j) * l[j];
        g = gcd(g, s);
    }
    return g;
}

ComplementResult orthogonal_complement(const IntegralLattice& L, const std::vector<cpp_int>& l) {
    if (!is_primitive_vector(l)) throw std::domain_error("orthogonal_complement: vector not primitive");
    if (L.norm_of(l) == 0) throw std::domain_error("orthogonal_complement: isotropic vector");
    int n = L.rank();
    ZMat col(n, 1);
    for (int i = 0; i < n; ++i) {
        cpp_int s = 0;
        for (int j = 0; j < n; ++j) s += L.gram(i, j) * l[j];
        col(i, 0) = s;
    }
    ZMat ker = left_kernel(col);
    if (ker.r != n - 1) throw internal_check_error("complement rank drop != 1");
    ZMat g(n - 1, n - 1);
    for (int i = 0; i < n - 1; ++i)
        for (int j = 0; j < n - 1; ++j) {
            std::vector<cpp_int> vi(n), vj(n);
            for (int t = 0; t < n; ++t) {
                vi[t] = ker(i, t);
                vj[t] = ker(j, t);
            }
            g(i, j) = L.pairing(vi, vj);
        }
    return {IntegralLattice(g), ker};
}

std::vector<std::vector<cpp_int>> enumerate_vectors(const IntegralLattice& L, const cpp_int& norm,
                                                    long max_height, long box_cap) {
    int n = L.rank();
    double boxd = 1;
    for (int i = 0; i < n; ++i) {
        boxd *= (2.0 * max_height + 1);
        if (boxd > (double)box_cap) throw resource_cap_error("enumerate_vectors: box exceeds cap");
    }
    std::vector<std::vector<cpp_int>> out;
    std::vector<cpp_int> v(n, -max_height);
    for (;;) {
        if (L.norm_of(v) == norm) {
            bool zero = true;
            for (auto& x : v)
                if (x != 0) {
                    zero = false;
                    break;
                }
            if (!zero) out.push_back(v);
        }
        int i = 0;
        for (; i < n; ++i) {
            v[i] += 1;
            if (v[i] <= max_height) break;
            v[i] = -max_height;
        }
        if (i == n) break;
    }
    return out;
}

// ---- overlattices ----

Overlattice overlattice_from_isotropic(const IntegralLattice& L, const std::vector<FqmElem>& gens_in,
                                       const cpp_int& cap) {
    if (!L.is_even()) throw std::domain_error("overlattice_from_isotropic: even lattice required");
    DiscriminantData dd = discriminant_data(L);
    const FiniteQuadraticModule& A = dd.A;
    std::vector<FqmElem> sub = A.span(gens_in, cap);
    for (auto& x : sub)
        if (A.q(x) != 0) throw std::domain_error("overlattice_from_isotropic: subgroup not isotropic");
    int n = L.rank();
    QMat rows((int)gens_in.size() + n, n);
    for (int i = 0; i < n; ++i) rows(i, i) = 1;
    for (size_t t = 0; t < gens_in.size(); ++t) {
        auto v = A.lift(gens_in[t]);
        for (int j = 0; j < n; ++j) rows(n + (int)t, j) = v[j];
    }
    QMat basis = lattice_canonical(rows);
    if (basis.r != n) throw internal_check_error("overlattice basis rank");
    ZMat g(n, n);
    QMat gq = to_q(L.gram);
    QMat big = basis * gq * basis.transpose();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (den(big(i, j)) != 1) throw internal_check_error("overlattice Gram not integral");
            g(i, j) = num(big(i, j));
        }
    IntegralLattice Lp{g};
    if (!Lp.is_even()) throw internal_check_error("overlattice not even");
    cpp_int aL = boost::multiprecision::abs(L.det());
    cpp_int aLp = boost::multiprecision::abs(Lp.det());
    cpp_int gsize((long)sub.size());
    if (aLp * gsize * gsize != aL) throw internal_check_error("overlattice index relation violated");
    return {Lp, basis};
}

namespace {
bool subgroup_nondegenerate(const FiniteQuadraticModule& A, const std::vector<FqmElem>& sub) {
    for (auto& x : sub) {
        if (x.is_zero()) continue;
        bool ok = false;
        for (auto& y : sub)
            if (A.b(x, y) != 0) {
                ok = true;
                break;
            }
        if (!ok) return false;
    }
    return true;
}
}  // namespace

Overlattice find_overlattice_with_2U(const IntegralLattice& L, const cpp_int& cap) {
    if (!L.is_even()) throw std::domain_error("find_overlattice_with_2U: even lattice required");
    auto [sp, sn] = signature(L);
    if (sp != 2 || sn < 8) throw std::domain_error("find_overlattice_with_2U: signature (2,n), n >= 8 required");
    int n = sn;
    DiscriminantData dd = discriminant_data(L);
    const FiniteQuadraticModule& A = dd.A;
    if ((int)A.orders.size() <= n - 3) return {L, to_q(ZMat::identity(L.rank()))};
    std::vector<std::vector<cpp_rational>> glue_rows;
    auto primes = factorize(A.order());
    for (auto& [p, e] : primes) {
        (void)e;
        FiniteQuadraticModule Ap = A.p_part(p);
        std::vector<FqmElem> elems = Ap.elements(cap);
        cpp_int expAp = Ap.exponent();
        // nondegenerate core of full exponent, length <= 2
        std::vector<FqmElem> core;
        for (auto& x : elems)
            if (Ap.elem_order(x) == expAp && subgroup_nondegenerate(Ap, Ap.span({x}, cap))) {
                core = {x};
                break;
            }
        if (core.empty()) {
            for (auto& x : elems) {
                if (Ap.elem_order(x) != expAp) continue;
                for (auto& y : elems) {
                    if (y.is_zero()) continue;
                    if (subgroup_nondegenerate(Ap, Ap.span({x, y}, cap))) {
                        core = {x, y};
                        break;
                    }
                }
                if (!core.empty()) break;
            }
        }
        if (core.empty()) throw std::domain_error("find_overlattice_with_2U: no nondegenerate core found");
        std::vector<FqmElem> comp;
        for (auto& z : elems) {
            bool ok = true;
            for (auto& g : core)
                if (Ap.b(z, g) != 0) {
                    ok = false;
                    break;
                }
            if (ok) comp.push_back(z);
        }
        // greedy maximal isotropic subgroup of the complement
        std::vector<FqmElem> gp;
        std::vector<FqmElem> gp_span{Ap.zero()};
        for (auto& z : comp) {
            if (z.is_zero() || Ap.q(z) != 0) continue;
            bool ok = true;
            for (auto& w : gp_span)
                if (Ap.b(z, w) != 0) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            bool have = false;
            for (auto& w : gp_span)
                if (w == z) {
                    have = true;
                    break;
                }
            if (have) continue;
            gp.push_back(z);
            gp_span = Ap.span(gp, cap);
        }
        for (auto& z : gp) glue_rows.push_back(Ap.lift(z));
    }
    std::vector<FqmElem> glue_classes;
    for (auto& row : glue_rows) glue_classes.push_back(dd.class_of(row));
    Overlattice ol = overlattice_from_isotropic(L, glue_classes, cap * cap);
    FiniteQuadraticModule Ap2 = discriminant_module(ol.L);
    if (Ap2.exponent() != A.exponent())
        throw std::domain_error("find_overlattice_with_2U: exponent not preserved");
    if ((int)Ap2.orders.size() > n - 3)
        throw std::domain_error("find_overlattice_with_2U: length condition not reached");
    return ol;
}

// ---- Vinberg reduction ----

namespace {
QMat form_dual_rows(const QMat& B, const QMat& G0) {
    // rows D with D * G0 * B^T = I
    QMat X = B * G0;
    return inverse_q(X.transpose());
}
}  // namespace

IntegralLattice vinberg_reduce(const IntegralLattice& Lin) {
    IntegralLattice L = Lin;
    L.descale();
    int n = L.rank();
    QMat G0 = to_q(L.gram);
    QMat B = lattice_canonical(to_q(ZMat::identity(n)));
    auto primes = factorize(boost::multiprecision::abs(L.det()));
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto& [p, e] : primes) {
            (void)e;
            QMat dual = form_dual_rows(B, G0);
            QMat p2dual = dual;
            for (auto& x : p2dual.a) x *= cpp_rational(p * p);
            QMat M = lattice_intersect(B, p2dual);
            for (auto& x : M.a) x /= cpp_rational(p);
            QMat sum = lattice_sum(B, M);
            if (!(sum == B)) {
                B = sum;
                changed = true;
            }
        }
    }
    QMat g = B * G0 * B.transpose();
    ZMat gz(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (den(g(i, j)) != 1) throw internal_check_error("vinberg: non-integral intermediate Gram");
            gz(i, j) = num(g(i, j));
        }
    IntegralLattice Lmid{gz};
    Lmid.descale();
    // swap the roles of the scale-0 / scale-1 parts where the elementary
    // discriminant part is longer than half the rank
    G0 = to_q(Lmid.gram);
    B = lattice_canonical(to_q(ZMat::identity(n)));
    FiniteQuadraticModule A = discriminant_module(Lmid);
    cpp_int a = 1;
    for (auto& [p, e] : factorize(boost::multiprecision::abs(Lmid.det()))) {
        (void)e;
        int lp = (int)A.p_part(p).orders.size();
        if (2 * lp > n) a *= p;
    }
    if (a > 1) {
        QMat dual = form_dual_rows(B, G0);
        for (auto& x : dual.a) x *= cpp_rational(a);
        B = lattice_intersect(B, dual);
    }
    QMat gf = B * G0 * B.transpose();
    ZMat out(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (den(gf(i, j)) != 1) throw internal_check_error("vinberg: non-integral output Gram");
            out(i, j) = num(gf(i, j));
        }
    return IntegralLattice(out);
}

// ---- orthogonal group of a module ----

namespace {
struct AutSearch {
    const FiniteQuadraticModule& A;
    std::vector<FqmElem> elems;
    std::vector<FqmAutomorphism> found;
    std::vector<FqmElem> images;
    cpp_int cap;

    AutSearch(const FiniteQuadraticModule& a, const cpp_int& c) : A(a), cap(c) {}

    bool consistent(int i, const FqmElem& cand) const {
        if (A.elem_order(cand) != A.orders[i]) return false;
        if (A.has_quadratic) {
            if (A.q(cand) != A.quad[i]) return false;
        } else {
            if (A.b(cand, cand) != mod1(A.bil(i, i))) return false;
        }
        for (int j = 0; j < i; ++j)
            if (A.b(cand, images[j]) != mod1(A.bil(i, j))) return false;
        return true;
    }

    void dfs(int i) {
        if (i == A.ngens()) {
            std::vector<FqmElem> sp = A.span(images, cap);
            if (cpp_int((long)sp.size()) == A.order()) found.push_back({images});
            return;
        }
        for (auto& cand : elems) {
            if (!consistent(i, cand)) continue;
            images.push_back(cand);
            dfs(i + 1);
            images.pop_back();
        }
    }
};
}  // namespace

std::vector<FqmAutomorphism> orthogonal_group_of_module(const FiniteQuadraticModule& A, const cpp_int& cap) {
    if (A.order() > cap) throw resource_cap_error("orthogonal_group_of_module: |A| exceeds cap");
    if (A.ngens() == 0) return {FqmAutomorphism{}};
    AutSearch s(A, cap);
    s.elems = A.elements(cap);
    s.dfs(0);
    return s.found;
}

FqmElem apply_aut(const FiniteQuadraticModule& A, const FqmAutomorphism& g, const FqmElem& x) {
    FqmElem r = A.zero();
    for (int i = 0; i < A.ngens(); ++i)
        if (x.c[i] != 0) r = A.add(r, A.smul(x.c[i], g.images[i]));
    return r;
}

std::vector<FqmElem> orbit(const FiniteQuadraticModule& A, const std::vector<FqmAutomorphism>& G,
                           const FqmElem& x) {
    std::set<FqmElem> s;
    for (auto& g : G) s.insert(apply_aut(A, g, x));
    return std::vector<FqmElem>(s.begin(), s.end());
}

}  // namespace ogt
