#include "doctest.h"

#include "ogt/lattice.hpp"

#include <random>
#include <set>

using namespace ogt;

namespace {
IntegralLattice random_lattice(std::mt19937& rng, int n, int spread = 4) {
    for (;;) {
        ZMat g(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= i; ++j) {
                long v = (long)(rng() % (2 * spread + 1)) - spread;
                g(i, j) = g(j, i) = v;
            }
        if (det(g) != 0) return IntegralLattice(g);
    }
}
}  // namespace

TEST_CASE("constructors and basic invariants") {
    CHECK(root_D(2).gram == diag_lattice({cpp_int(-2), cpp_int(-2)}).gram);
    CHECK(root_D(1).gram == diag_lattice({cpp_int(-4)}).gram);
    CHECK(hyperbolic_U().scaled(2).det() == -4);
    CHECK(root_E8().det() == 1);
    CHECK(boost::multiprecision::abs(root_D(4).det()) == 4);
    CHECK(boost::multiprecision::abs(root_A(2).det()) == 3);
    auto sigE8 = signature(root_E8());
    CHECK(sigE8.first == 0);
    CHECK(sigE8.second == 8);
}

TEST_CASE("signature") {
    CHECK(signature(hyperbolic_U()) == std::make_pair(1, 1));
    IntegralLattice ii210 = parse_lattice("2U + E8");
    CHECK(signature(ii210) == std::make_pair(2, 10));
    CHECK(ii210.det() == 1);
    CHECK(signature(diag_lattice({cpp_int(-4)})) == std::make_pair(0, 1));
    CHECK(signature(parse_lattice("I2,3")) == std::make_pair(2, 3));
}

TEST_CASE("parse_lattice grammar") {
    IntegralLattice l = parse_lattice("2U + 2E8 + D4(1)");
    CHECK(l.rank() == 24);
    CHECK(signature(l) == std::make_pair(2, 22));
    CHECK(parse_lattice("U(2)").det() == -4);
    CHECK(parse_lattice("-2").gram(0, 0) == -2);
    CHECK(parse_lattice("<-4>").gram(0, 0) == -4);
    CHECK(parse_lattice("3<-2>").rank() == 3);
    CHECK_THROWS_AS(parse_lattice("E7"), std::domain_error);
    CHECK_THROWS_AS(parse_lattice("2U + "), std::domain_error);
    CHECK_THROWS_AS(parse_lattice("Q"), std::domain_error);
}

TEST_CASE("discriminant module of D_4 and friends") {
    FiniteQuadraticModule A = discriminant_module(root_D(4));
    REQUIRE(A.orders == std::vector<cpp_int>{2, 2});
    CHECK(A.has_quadratic);
    FqmElem x1 = A.reduce({1, 0}), x2 = A.reduce({0, 1});
    CHECK(A.q(x1) == 1);
    CHECK(A.q(x2) == 1);
    CHECK(A.q(A.add(x1, x2)) == 1);
    CHECK(A.b(x1, x2) == cpp_rational(1, 2));

    CHECK(discriminant_module(parse_lattice("2U + E8")).order() == 1);

    FiniteQuadraticModule A3 = discriminant_module(root_D(3));
    REQUIRE(A3.orders == std::vector<cpp_int>{4});
    // q(generator) = -3/4 mod 2 for a generator of Z/4
    FqmElem g = A3.reduce({1});
    bool ok = A3.q(g) == mod2(cpp_rational(-3, 4)) || A3.q(A3.smul(3, g)) == mod2(cpp_rational(-3, 4));
    CHECK(ok);

    FiniteQuadraticModule A5 = discriminant_module(root_D(5));
    REQUIRE(A5.orders == std::vector<cpp_int>{4});
    FiniteQuadraticModule A6 = discriminant_module(root_D(6));
    REQUIRE(A6.orders == std::vector<cpp_int>{2, 2});
    // D_6 = -2 mod 8: form <1/2> + <1/2>, so nonzero q-values are {1/2, 1/2, 1}
    std::multiset<cpp_rational> qs;
    for (auto& x : A6.elements(16))
        if (!x.is_zero()) qs.insert(A6.q(x));
    CHECK(qs == std::multiset<cpp_rational>{cpp_rational(1, 2), cpp_rational(1, 2), cpp_rational(1)});
}

TEST_CASE("exponent length p_part") {
    FiniteQuadraticModule A = discriminant_module(root_D(4));
    CHECK(A.exponent() == 2);
    CHECK(A.length() == 2);
    IntegralLattice l = parse_lattice("U + A2 + <-4>");
    FiniteQuadraticModule B = discriminant_module(l);
    CHECK(B.exponent() == 12);
    CHECK(B.p_part(2).order() == 4);
    CHECK(B.p_part(3).order() == 3);
    CHECK(B.p_part(2).exponent() == 4);
    CHECK(discriminant_module(parse_lattice("2U + D4")).exponent() == 2);
}

TEST_CASE("divisor") {
    IntegralLattice U = hyperbolic_U();
    CHECK(divisor(U, {1, 0}) == 1);
    IntegralLattice D4 = root_D(4);
    CHECK(divisor(D4, {1, -1, 0, 0}) == 2);  // delta_1 - delta_2
    CHECK_THROWS_AS(divisor(U, {2, 0}), std::domain_error);
}

TEST_CASE("orthogonal complement") {
    IntegralLattice L = parse_lattice("-2 + U");
    auto C = orthogonal_complement(L, {1, 0, 0});
    CHECK(C.K.rank() == 2);
    CHECK(C.K.det() == -1);
    CHECK(C.K.is_even());

    // K_2 for the family 2U + mE8 + D_N with l2 = d1 - d2 in D_N
    IntegralLattice Lf = parse_lattice("2U + E8 + D4");
    std::vector<cpp_int> l2(Lf.rank(), 0);
    l2[12] = 1;
    l2[13] = -1;
    auto C2 = orthogonal_complement(Lf, l2);
    IntegralLattice K2exp = parse_lattice("2U + E8 + D3");
    CHECK(boost::multiprecision::abs(C2.K.det()) == boost::multiprecision::abs(K2exp.det()));
    CHECK(signature(C2.K) == signature(K2exp));
    FiniteQuadraticModule a = discriminant_module(C2.K), b = discriminant_module(K2exp);
    CHECK(a.orders == b.orders);

    // K_1: l1 = e - f in the first U
    std::vector<cpp_int> l1(Lf.rank(), 0);
    l1[0] = 1;
    l1[1] = -1;
    auto C1 = orthogonal_complement(Lf, l1);
    IntegralLattice K1exp = parse_lattice("2 + U + D4 + E8");
    CHECK(boost::multiprecision::abs(C1.K.det()) == boost::multiprecision::abs(K1exp.det()));
    CHECK(signature(C1.K) == signature(K1exp));

    // [L : Zl + K] = |(l,l)|/div(l)
    cpp_int nrm = -Lf.norm_of(l1);
    cpp_int dv = divisor(Lf, l1);
    ZMat stack(Lf.rank(), Lf.rank());
    for (int j = 0; j < Lf.rank(); ++j) stack(0, j) = l1[j];
    for (int i = 0; i < C1.basis.r; ++i)
        for (int j = 0; j < Lf.rank(); ++j) stack(i + 1, j) = C1.basis(i, j);
    CHECK(boost::multiprecision::abs(det(stack)) == nrm / dv);
}

TEST_CASE("primitivity and evenness") {
    CHECK(!diag_lattice({cpp_int(-2)}).is_primitive());
    CHECK(hyperbolic_U().is_primitive());
    CHECK(hyperbolic_U().is_even());
    CHECK(parse_lattice("I2,3").is_primitive());
    CHECK(!parse_lattice("I2,3").is_even());
}

TEST_CASE("discriminant order equals |det| on random lattices") {
    std::mt19937 rng(777);
    for (int it = 0; it < 200; ++it) {
        int n = 1 + (int)(rng() % 6);
        IntegralLattice L = random_lattice(rng, n, 4);
        FiniteQuadraticModule A = discriminant_module(L);
        CHECK(A.order() == boost::multiprecision::abs(L.det()));
    }
}

TEST_CASE("scaled bilinear form against dual-quotient oracle") {
    std::mt19937 rng(999);
    for (long a : {2L, 3L, 5L}) {
        for (int it = 0; it < 20; ++it) {
            IntegralLattice L = random_lattice(rng, 2 + (int)(rng() % 3), 3);
            IntegralLattice La = L.scaled(a);
            FiniteQuadraticModule A = discriminant_module(La);
            QMat G = to_q(La.gram);
            for (int i = 0; i < A.ngens(); ++i)
                for (int j = 0; j < A.ngens(); ++j) {
                    cpp_rational v = 0;
                    for (int s = 0; s < G.r; ++s)
                        for (int t = 0; t < G.r; ++t) v += A.gens(i, s) * G(s, t) * A.gens(j, t);
                    CHECK(A.bil(i, j) == mod1(v));
                }
        }
    }
}

TEST_CASE("overlattice from isotropic subgroup") {
    IntegralLattice L = parse_lattice("U(2) + A1");
    Overlattice o = overlattice_from_isotropic(L, {});
    CHECK(o.L.gram == L.gram);

    // U(2): the isotropic order-2 class recovers U
    IntegralLattice u2 = parse_lattice("U(2)");
    DiscriminantData dd = discriminant_data(u2);
    FqmElem iso;
    bool found = false;
    for (auto& x : dd.A.elements(256)) {
        if (!x.is_zero() && dd.A.q(x) == 0 && dd.A.elem_order(x) == 2) {
            iso = x;
            found = true;
            break;
        }
    }
    REQUIRE(found);
    Overlattice o2 = overlattice_from_isotropic(u2, {iso});
    CHECK(boost::multiprecision::abs(o2.L.det()) == 1);
    CHECK(o2.L.is_even());
    CHECK(signature(o2.L) == std::make_pair(1, 1));
}

TEST_CASE("find_overlattice_with_2U") {
    IntegralLattice L0 = parse_lattice("2U + E8 + D4");
    Overlattice o0 = find_overlattice_with_2U(L0);
    CHECK(o0.L.gram == L0.gram);

    IntegralLattice L1 = parse_lattice("2U + D4 + 5A1(2)");
    auto [s2, sn] = signature(L1);
    REQUIRE(s2 == 2);
    REQUIRE(sn >= 8);
    FiniteQuadraticModule A1m = discriminant_module(L1);
    Overlattice o1 = find_overlattice_with_2U(L1);
    FiniteQuadraticModule A2m = discriminant_module(o1.L);
    CHECK(A2m.exponent() == A1m.exponent());
    CHECK((int)A2m.orders.size() <= sn - 3);
    CHECK(o1.L.is_even());
}

TEST_CASE("vinberg_reduce") {
    IntegralLattice L0 = parse_lattice("2U + E8");
    IntegralLattice r0 = vinberg_reduce(L0);
    CHECK(boost::multiprecision::abs(r0.det()) == 1);

    IntegralLattice L1 = parse_lattice("2U + A1(4)");
    IntegralLattice r1 = vinberg_reduce(L1);
    IntegralLattice r1p = r1;
    r1p.descale();
    auto sig1 = signature(L1);
    int n = sig1.second;
    FiniteQuadraticModule A = discriminant_module(r1p);
    for (auto& [p, e] : factorize(boost::multiprecision::abs(r1p.det()))) {
        (void)e;
        FiniteQuadraticModule Ap = A.p_part(p);
        CHECK(Ap.exponent() == p);  // p-elementary
        CHECK(2 * (int)Ap.orders.size() <= n + 2);
    }

    std::mt19937 rng(4242);
    for (int it = 0; it < 6; ++it) {
        std::vector<cpp_int> diag;
        for (int i = 0; i < 5; ++i) diag.push_back(-(1 + (long)(rng() % 8)));
        IntegralLattice L = direct_sum(direct_sum(hyperbolic_U(), hyperbolic_U()), diag_lattice(diag));
        IntegralLattice r = vinberg_reduce(L);
        IntegralLattice rp = r;
        rp.descale();
        auto sig = signature(L);
        FiniteQuadraticModule Ar = discriminant_module(rp);
        for (auto& [p, e] : factorize(boost::multiprecision::abs(rp.det()))) {
            (void)e;
            FiniteQuadraticModule App = Ar.p_part(p);
            CHECK(App.exponent() == p);
            CHECK(2 * (int)App.orders.size() <= sig.second + 2);
        }
    }
}

TEST_CASE("orthogonal group of a module") {
    FiniteQuadraticModule A = discriminant_module(root_A(1));
    CHECK(orthogonal_group_of_module(A).size() == 1);

    FiniteQuadraticModule B = discriminant_module(root_D(4));
    auto G = orthogonal_group_of_module(B);
    CHECK(G.size() == 6);
    CHECK(orbit(B, G, B.zero()).size() == 1);
    CHECK(orbit(B, G, B.reduce({1, 0})).size() == 3);

    // U(2)-form has q-values {0,0,1}: only the swap of the two q=0 classes
    FiniteQuadraticModule C = discriminant_module(parse_lattice("U(2)"));
    auto GC = orthogonal_group_of_module(C);
    CHECK(GC.size() == 2);
}

TEST_CASE("enumerate_vectors") {
    IntegralLattice U = hyperbolic_U();
    auto iso = enumerate_vectors(U, 0, 1);
    CHECK(iso.size() == 4);  // e, f, -e, -f

    IntegralLattice L = parse_lattice("-2 + U");
    auto roots = enumerate_vectors(L, -2, 2);
    bool has_basis = false;
    for (auto& v : roots)
        if (v == std::vector<cpp_int>{1, 0, 0}) has_basis = true;
    CHECK(has_basis);

    CHECK(enumerate_vectors(hyperbolic_U(), 1, 2).empty());  // odd norm, even lattice
    CHECK_THROWS_AS(enumerate_vectors(parse_lattice("2U + 2E8"), -2, 30), resource_cap_error);
}
