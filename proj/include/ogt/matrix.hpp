#pragma once

#include "ogt/numeric.hpp"

#include <cassert>

namespace ogt {

template <class T>
struct Mat {
    int r = 0, c = 0;
    std::vector<T> a;

    Mat() = default;
    Mat(int rr, int cc) : r(rr), c(cc), a((size_t)rr * cc, T(0)) {}
    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }
    T& operator()(int i, int j) { return a[(size_t)i * c + j]; }
    const T& operator()(int i, int j) const { return a[(size_t)i * c + j]; }

    Mat transpose() const {
        Mat m(c, r);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j) m(j, i) = (*this)(i, j);
        return m;
    }
    bool operator==(const Mat& o) const { return r == o.r && c == o.c && a == o.a; }

    void swap_rows(int i, int j) { for (int k = 0; k < c; ++k) std::swap((*this)(i, k), (*this)(j, k)); }
    void swap_cols(int i, int j) { for (int k = 0; k < r; ++k) std::swap((*this)(k, i), (*this)(k, j)); }
    // row i += f * row j
    void add_row(int i, int j, const T& f) { for (int k = 0; k < c; ++k) (*this)(i, k) += f * (*this)(j, k); }
    void add_col(int i, int j, const T& f) { for (int k = 0; k < r; ++k) (*this)(k, i) += f * (*this)(k, j); }
    void scale_row(int i, const T& f) { for (int k = 0; k < c; ++k) (*this)(i, k) *= f; }
};

template <class T>
Mat<T> operator*(const Mat<T>& x, const Mat<T>& y) {
    assert(x.c == y.r);
    Mat<T> z(x.r, y.c);
    for (int i = 0; i < x.r; ++i)
        for (int k = 0; k < x.c; ++k) {
            const T& v = x(i, k);
            if (v == T(0)) continue;
            for (int j = 0; j < y.c; ++j) z(i, j) += v * y(k, j);
        }
    return z;
}

using ZMat = Mat<cpp_int>;
using QMat = Mat<cpp_rational>;

inline QMat to_q(const ZMat& m) {
    QMat q(m.r, m.c);
    for (int i = 0; i < m.r; ++i)
        for (int j = 0; j < m.c; ++j) q(i, j) = cpp_rational(m(i, j));
    return q;
}

// Fraction-free determinant (Bareiss).
inline cpp_int det(const ZMat& m0) {
    assert(m0.r == m0.c);
    int n = m0.r;
    if (n == 0) return 1;
    ZMat m = m0;
    cpp_int prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (m(k, k) == 0) {
            int piv = -1;
            for (int i = k + 1; i < n; ++i)
                if (m(i, k) != 0) { piv = i; break; }
            if (piv < 0) return 0;
            m.swap_rows(k, piv);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) {
                m(i, j) = m(k, k) * m(i, j) - m(i, k) * m(k, j);
                m(i, j) /= prev;
            }
        prev = m(k, k);
    }
    return sign > 0 ? m(n - 1, n - 1) : -m(n - 1, n - 1);
}

inline cpp_rational det_q(const QMat& m0) {
    assert(m0.r == m0.c);
    int n = m0.r;
    QMat m = m0;
    cpp_rational d = 1;
    for (int k = 0; k < n; ++k) {
        int piv = -1;
        for (int i = k; i < n; ++i)
            if (m(i, k) != 0) { piv = i; break; }
        if (piv < 0) return 0;
        if (piv != k) { m.swap_rows(k, piv); d = -d; }
        d *= m(k, k);
        cpp_rational inv = 1 / m(k, k);
        for (int i = k + 1; i < n; ++i) {
            cpp_rational f = m(i, k) * inv;
            if (f != 0)
                for (int j = k; j < n; ++j) m(i, j) -= f * m(k, j);
        }
    }
    return d;
}

inline QMat inverse_q(const QMat& m0) {
    assert(m0.r == m0.c);
    int n = m0.r;
    QMat m = m0, inv = QMat::identity(n);
    for (int k = 0; k < n; ++k) {
        int piv = -1;
        for (int i = k; i < n; ++i)
            if (m(i, k) != 0) { piv = i; break; }
        if (piv < 0) throw std::domain_error("inverse_q: singular matrix");
        if (piv != k) { m.swap_rows(k, piv); inv.swap_rows(k, piv); }
        cpp_rational f = 1 / m(k, k);
        m.scale_row(k, f);
        inv.scale_row(k, f);
        for (int i = 0; i < n; ++i) {
            if (i == k || m(i, k) == 0) continue;
            cpp_rational g = -m(i, k);
            m.add_row(i, k, g);
            inv.add_row(i, k, g);
        }
    }
    return inv;
}

// Smith normal form: U*A*V = D diagonal with d_1 | d_2 | ..., U,V unimodular.
struct Snf {
    ZMat d, u, v;
};

inline Snf smith_normal_form(const ZMat& a0) {
    ZMat a = a0;
    int r = a.r, c = a.c;
    ZMat u = ZMat::identity(r), v = ZMat::identity(c);
    int n = std::min(r, c);
    for (int k = 0; k < n; ++k) {
        for (;;) {
            // find pivot: nonzero entry of minimal abs value in submatrix
            int pi = -1, pj = -1;
            cpp_int best = 0;
            for (int i = k; i < r; ++i)
                for (int j = k; j < c; ++j) {
                    cpp_int v0 = boost::multiprecision::abs(a(i, j));
                    if (v0 != 0 && (pi < 0 || v0 < best)) { best = v0; pi = i; pj = j; }
                }
            if (pi < 0) goto done;  // rest is zero
            if (pi != k) { a.swap_rows(k, pi); u.swap_rows(k, pi); }
            if (pj != k) { a.swap_cols(k, pj); v.swap_cols(k, pj); }
            bool again = false;
            for (int i = k + 1; i < r; ++i) {
                if (a(i, k) == 0) continue;
                cpp_int q = a(i, k) / a(k, k);
                if (q != 0) { a.add_row(i, k, -q); u.add_row(i, k, -q); }
                if (a(i, k) != 0) again = true;
            }
            for (int j = k + 1; j < c; ++j) {
                if (a(k, j) == 0) continue;
                cpp_int q = a(k, j) / a(k, k);
                if (q != 0) { a.add_col(j, k, -q); v.add_col(j, k, -q); }
                if (a(k, j) != 0) again = true;
            }
            if (again) continue;
            // pivot must divide remaining submatrix for the divisibility chain
            bool fixed = true;
            for (int i = k + 1; i < r && fixed; ++i)
                for (int j = k + 1; j < c && fixed; ++j)
                    if (a(i, j) % a(k, k) != 0) {
                        a.add_row(k, i, cpp_int(1));
                        u.add_row(k, i, cpp_int(1));
                        fixed = false;
                    }
            if (fixed) break;
        }
    }
done:
    for (int k = 0; k < n; ++k)
        if (a(k, k) < 0) { a.scale_row(k, cpp_int(-1)); u.scale_row(k, cpp_int(-1)); }
    return {a, u, v};
}

// Basis (rows) of the integer kernel {x : x * A = 0} of A (acting on row
// vectors).  The result is saturated.
inline ZMat left_kernel(const ZMat& a) {
    Snf s = smith_normal_form(a);
    int n = std::min(a.r, a.c);
    int rank = 0;
    for (int k = 0; k < n; ++k)
        if (s.d(k, k) != 0) ++rank;
    // x A = 0  <=>  (x U^{-1}) D = 0: kernel spanned by rows rank..r-1 of U
    ZMat ker(a.r - rank, a.r);
    for (int i = rank; i < a.r; ++i)
        for (int j = 0; j < a.r; ++j) ker(i - rank, j) = s.u(i, j);
    return ker;
}

// Row Hermite normal form (returns only nonzero rows; row-style, pivots
// positive, entries above pivots reduced).
inline ZMat hnf_rows(const ZMat& a0) {
    ZMat a = a0;
    int r = a.r, c = a.c;
    int row = 0;
    for (int col = 0; col < c && row < r; ++col) {
        // euclidean elimination in this column below `row`
        for (;;) {
            int piv = -1;
            cpp_int best = 0;
            for (int i = row; i < r; ++i) {
                cpp_int v = boost::multiprecision::abs(a(i, col));
                if (v != 0 && (piv < 0 || v < best)) { best = v; piv = i; }
            }
            if (piv < 0) break;
            if (piv != row) a.swap_rows(row, piv);
            bool done = true;
            for (int i = row + 1; i < r; ++i) {
                if (a(i, col) == 0) continue;
                cpp_int q = a(i, col) / a(row, col);
                a.add_row(i, row, -q);
                if (a(i, col) != 0) done = false;
            }
            if (done) break;
        }
        if (row < r && a(row, col) != 0) {
            if (a(row, col) < 0) a.scale_row(row, cpp_int(-1));
            for (int i = 0; i < row; ++i) {
                cpp_int q = a(i, col) / a(row, col);
                if (a(i, col) - q * a(row, col) < 0) q -= 1;  // reduce into [0, pivot)
                if (q != 0) a.add_row(i, row, -q);
            }
            ++row;
        }
    }
    ZMat h(row, c);
    for (int i = 0; i < row; ++i)
        for (int j = 0; j < c; ++j) h(i, j) = a(i, j);
    return h;
}

// ---- full-rank rational lattices in Q^n, basis vectors as rows ----

// canonical form: HNF of (den * B) / den with minimal common denominator
inline QMat lattice_canonical(const QMat& b) {
    cpp_int d = 1;
    for (auto& x : b.a) d = lcm(d, den(x));
    ZMat zb(b.r, b.c);
    for (int i = 0; i < b.r; ++i)
        for (int j = 0; j < b.c; ++j) zb(i, j) = num(b(i, j) * cpp_rational(d));
    ZMat h = hnf_rows(zb);
    QMat out(h.r, h.c);
    for (int i = 0; i < h.r; ++i)
        for (int j = 0; j < h.c; ++j) out(i, j) = cpp_rational(h(i, j), d);
    return out;
}

inline QMat lattice_sum(const QMat& a, const QMat& b) {
    assert(a.c == b.c);
    QMat st(a.r + b.r, a.c);
    for (int i = 0; i < a.r; ++i)
        for (int j = 0; j < a.c; ++j) st(i, j) = a(i, j);
    for (int i = 0; i < b.r; ++i)
        for (int j = 0; j < a.c; ++j) st(a.r + i, j) = b(i, j);
    return lattice_canonical(st);
}

// module dual w.r.t. the standard pairing (full-rank square basis)
inline QMat lattice_module_dual(const QMat& b) {
    assert(b.r == b.c);
    return inverse_q(b).transpose();
}

inline QMat lattice_intersect(const QMat& a, const QMat& b) {
    QMat da = lattice_module_dual(lattice_canonical(a));
    QMat db = lattice_module_dual(lattice_canonical(b));
    return lattice_module_dual(lattice_sum(da, db));
}

// index [B : A] for sublattice A of B (both full rank, rows)
inline cpp_rational lattice_index(const QMat& sub, const QMat& sup) {
    return boost::multiprecision::abs(det_q(sub) / det_q(sup));
}

}  // namespace ogt
