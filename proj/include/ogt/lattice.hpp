#pragma once

#include "ogt/matrix.hpp"

#include <map>
#include <optional>
#include <string>

namespace ogt {

struct IntegralLattice {
    ZMat gram;  // symmetric, nondegenerate

    IntegralLattice() = default;
    explicit IntegralLattice(ZMat g);

    int rank() const { return gram.r; }
    cpp_int det() const { return ogt::det(gram); }
    bool is_even() const;
    // gcd of all Gram entries is 1
    bool is_primitive() const;
    // divide the Gram matrix by the gcd of its entries; returns the factor
    cpp_int descale();

    IntegralLattice scaled(const cpp_int& a) const;
    cpp_int pairing(const std::vector<cpp_int>& x, const std::vector<cpp_int>& y) const;
    cpp_int norm_of(const std::vector<cpp_int>& x) const { return pairing(x, x); }
};

// signature as (#positive, #negative) eigenvalues, exact
std::pair<int, int> signature(const IntegralLattice& L);

// ---- constructors ----
IntegralLattice hyperbolic_U();
IntegralLattice root_A(int n);    // negative definite A_n
IntegralLattice root_D(int n);    // negative definite D_n; D_1 = <-4>, D_2 = 2A_1
IntegralLattice root_E8();        // negative definite, det 1
IntegralLattice diag_lattice(const std::vector<cpp_int>& d);
IntegralLattice odd_unimodular(int p, int q);  // I_{p,q}
IntegralLattice direct_sum(const IntegralLattice& a, const IntegralLattice& b);

// lattice expression grammar: terms U, A<n>, D<n>, E8, <k> or bare integer
// (rank-1 diag k), I<p>,<q>; '+' direct sum, '(a)' scaling, 'mT' multiplicity
IntegralLattice parse_lattice(const std::string& expr);

// ---- discriminant machinery ----

struct FqmElem {
    std::vector<cpp_int> c;  // coefficients mod orders
    bool operator==(const FqmElem& o) const { return c == o.c; }
    bool operator<(const FqmElem& o) const { return c < o.c; }
    bool is_zero() const;
};

struct FiniteQuadraticModule {
    std::vector<cpp_int> orders;         // d_1 | d_2 | ..., all > 1
    QMat bil;                            // bilinear values of generators, mod 1
    std::vector<cpp_rational> quad;      // q(g_i) mod 2; present iff has_quadratic
    bool has_quadratic = false;
    QMat gens;                           // rows: rational coords in the parent basis (may be 0x0)

    int ngens() const { return (int)orders.size(); }
    cpp_int order() const;
    cpp_int exponent() const;            // D(L)
    int length() const { return ngens(); }

    FqmElem zero() const;
    FqmElem reduce(std::vector<cpp_int> c) const;
    FqmElem add(const FqmElem& x, const FqmElem& y) const;
    FqmElem neg(const FqmElem& x) const;
    FqmElem smul(const cpp_int& k, const FqmElem& x) const;
    cpp_int elem_order(const FqmElem& x) const;
    cpp_rational b(const FqmElem& x, const FqmElem& y) const;  // in [0,1)
    cpp_rational q(const FqmElem& x) const;                    // in [0,2)

    std::vector<FqmElem> elements(const cpp_int& cap) const;
    // subgroup generated by the given elements (cap on size)
    std::vector<FqmElem> span(const std::vector<FqmElem>& gens_in, const cpp_int& cap) const;
    FiniteQuadraticModule p_part(const cpp_int& p) const;
    // rational coords of x in the parent basis (needs gens)
    std::vector<cpp_rational> lift(const FqmElem& x) const;
};

// discriminant form A_L = L^dual / L; carries the SNF data needed to map
// dual vectors back to classes
struct DiscriminantData {
    FiniteQuadraticModule A;
    ZMat snf_u;                 // U with U*G*V = D
    std::vector<int> positions; // indices k with d_k > 1, in generator order
    ZMat gram;

    FqmElem class_of(const std::vector<cpp_rational>& dual_vec) const;
};

DiscriminantData discriminant_data(const IntegralLattice& L);
inline FiniteQuadraticModule discriminant_module(const IntegralLattice& L) {
    return discriminant_data(L).A;
}

// ---- vector-level operations ----

bool is_primitive_vector(const std::vector<cpp_int>& v);
// positive generator of the ideal (l, L); l primitive
cpp_int divisor(const IntegralLattice& L, const std::vector<cpp_int>& l);

struct ComplementResult {
    IntegralLattice K;
    ZMat basis;  // rows: coords of the K-basis inside L
};
ComplementResult orthogonal_complement(const IntegralLattice& L, const std::vector<cpp_int>& l);

// all nonzero vectors of the given norm with |coords| <= max_height
std::vector<std::vector<cpp_int>> enumerate_vectors(const IntegralLattice& L, const cpp_int& norm,
                                                    long max_height, long box_cap = 1 << 24);

// ---- overlattices ----

struct Overlattice {
    IntegralLattice L;
    QMat basis;  // rows: coords in the original basis
};

// even overlattice from an isotropic subgroup (given by generators) of A_L
Overlattice overlattice_from_isotropic(const IntegralLattice& L, const std::vector<FqmElem>& isotropic_gens,
                                       const cpp_int& cap = 4096);

// even overlattice L' with D(L') = D(L) and l(A_{L'}) <= n-3 (so L'
// contains 2U); signature (2,n), n >= 8
Overlattice find_overlattice_with_2U(const IntegralLattice& L, const cpp_int& cap = 4096);

// reduction to (a scaling of) a lattice whose discriminant p-parts are
// p-elementary of length <= n/2+1, preserving O^+(L)
IntegralLattice vinberg_reduce(const IntegralLattice& L);

// ---- orthogonal group of a finite quadratic module ----

struct FqmAutomorphism {
    std::vector<FqmElem> images;  // images of the generators
};

std::vector<FqmAutomorphism> orthogonal_group_of_module(const FiniteQuadraticModule& A,
                                                        const cpp_int& cap = 4096);
FqmElem apply_aut(const FiniteQuadraticModule& A, const FqmAutomorphism& g, const FqmElem& x);
std::vector<FqmElem> orbit(const FiniteQuadraticModule& A, const std::vector<FqmAutomorphism>& G,
                           const FqmElem& x);

}  // namespace ogt
