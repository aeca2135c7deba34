#include "doctest.h"
#include "numfield/galois.hpp"
#include "numfield/roots.hpp"
#include "exactmath/errors.hpp"

#include <algorithm>

using namespace msel;

namespace {

NumberField make_gaussian() { return NumberField(IntPoly({Int(1), Int(0), Int(1)})); }

/* degree six field with group S3, unramified outside 59 */
NumberField make_sextic() {
    return NumberField(IntPoly({Int(4), Int(-14), Int(21), Int(-15), Int(10), Int(-3), Int(1)}));
}

long elt_order(const GaloisGroup& G, long g) {
    long k = 1, h = g;
    while (h != G.id) {
        h = G.mult[g][h];
        k++;
        REQUIRE(k <= G.order());
    }
    return k;
}

long filtration_disc_exponent(const std::vector<std::vector<long>>& filt) {
    long s = 0;
    for (auto& gi : filt) s += (long)gi.size() - 1;
    return s;
}

} // namespace

TEST_CASE("automorphism group of the gaussian field") {
    NumberField K = make_gaussian();
    GaloisGroup G = automorphism_group(K);
    CHECK(G.order() == 2);

    long c = 1 - G.id; /* the non-identity element */
    CHECK(elt_order(G, c) == 2);
    CHECK(G.inv[c] == c);
    /* conjugation sends theta = i to -i and fixes rationals */
    CHECK(G.apply(c, K.theta()) == K.neg(K.theta()));
    CHECK(G.apply(c, K.from_rational(Rat(7, 3))) == K.from_rational(Rat(7, 3)));

    /* a cubic with one real root has no nontrivial automorphisms */
    NumberField K3(IntPoly({Int(-2), Int(0), Int(0), Int(1)}));
    CHECK_THROWS_AS(automorphism_group(K3), math_error);
}

TEST_CASE("decomposition and ramification in the gaussian field") {
    NumberField K = make_gaussian();
    GaloisGroup G = automorphism_group(K);

    /* 2 ramifies: full decomposition and inertia, wild filtration G_0 = G_1 */
    auto p2 = factor_prime(K, Int(2));
    REQUIRE(p2.size() == 1);
    auto d2 = decomposition_at(G, p2[0]);
    CHECK(d2.dgroup.size() == 2);
    CHECK(d2.igroup.size() == 2);
    auto f2 = ramification_filtration(G, p2[0]);
    REQUIRE(f2.size() == 2);
    CHECK(f2[0].size() == 2);
    CHECK(f2[1].size() == 2);
    /* discriminant exponent sum_i (|G_i| - 1) matches v_2(disc) = 2 */
    CHECK(filtration_disc_exponent(f2) == 2);

    /* 3 is inert: decomposition is everything, inertia trivial, frobenius moves theta */
    auto p3 = factor_prime(K, Int(3));
    REQUIRE(p3.size() == 1);
    auto d3 = decomposition_at(G, p3[0]);
    CHECK(d3.dgroup.size() == 2);
    CHECK(d3.igroup.size() == 1);
    CHECK(d3.frobenius != G.id);
    CHECK(ramification_filtration(G, p3[0]).empty());

    /* 5 splits: decomposition trivial */
    auto p5 = factor_prime(K, Int(5));
    REQUIRE(p5.size() == 2);
    for (auto& P : p5) {
        auto d = decomposition_at(G, P);
        CHECK(d.dgroup.size() == 1);
        CHECK(d.igroup.size() == 1);
        CHECK(d.frobenius == G.id);
    }
}

TEST_CASE("sextic automorphism group is S3") {
    NumberField K = make_sextic();
    GaloisGroup G = automorphism_group(K);
    REQUIRE(G.order() == 6);

    bool abelian = true;
    long n2 = 0, n3 = 0;
    for (long a = 0; a < 6; a++) {
        for (long b = 0; b < 6; b++)
            if (G.mult[a][b] != G.mult[b][a]) abelian = false;
        long o = elt_order(G, a);
        if (o == 2) n2++;
        if (o == 3) n3++;
    }
    CHECK_FALSE(abelian);
    /* S3 has three involutions and two elements of order three */
    CHECK(n2 == 3);
    CHECK(n3 == 2);

    /* the automorphisms permute the six roots of f faithfully */
    auto roots = poly_roots_in_field(K, K.f);
    REQUIRE(roots.size() == 6);
    for (long g = 0; g < 6; g++) {
        auto pm = perm_action(G, g, roots);
        if (g == G.id) {
            for (long j = 0; j < 6; j++) CHECK(pm[j] == j);
        } else {
            bool moves = false;
            for (long j = 0; j < 6; j++)
                if (pm[j] != j) moves = true;
            CHECK(moves);
        }
    }
}

TEST_CASE("sextic decomposition groups and tame ramification at 59") {
    NumberField K = make_sextic();
    GaloisGroup G = automorphism_group(K);

    /* 2 is unramified with residue degree 2 */
    auto p2 = factor_prime(K, Int(2));
    REQUIRE(p2.size() == 3);
    for (auto& P : p2) {
        auto d = decomposition_at(G, P);
        CHECK(d.dgroup.size() == 2);
        CHECK(d.igroup.size() == 1);
        CHECK(elt_order(G, d.frobenius) == 2);
        CHECK(ramification_filtration(G, P).empty());
    }

    /* 3 is unramified with residue degree 3 */
    auto p3 = factor_prime(K, Int(3));
    REQUIRE(p3.size() == 2);
    for (auto& P : p3) {
        auto d = decomposition_at(G, P);
        CHECK(d.dgroup.size() == 3);
        CHECK(d.igroup.size() == 1);
        CHECK(elt_order(G, d.frobenius) == 3);
    }

    /* 59 is tamely ramified with e = 2: filtration stops after G_0 */
    auto p59 = factor_prime(K, Int(59));
    REQUIRE(p59.size() == 3);
    long disc_exp = 0;
    for (auto& P : p59) {
        CHECK(P.e == 2);
        CHECK(P.fdeg == 1);
        auto d = decomposition_at(G, P);
        CHECK(d.dgroup.size() == 2);
        CHECK(d.igroup.size() == 2);
        auto filt = ramification_filtration(G, P);
        REQUIRE(filt.size() == 1);
        CHECK(filt[0].size() == 2);
        disc_exp += P.fdeg * filtration_disc_exponent(filt);
    }
    /* conductor-discriminant: sum of exponents recovers |disc| = 59^3 */
    CHECK(disc_exp == 3);
    CHECK(K.disc == -pow_int(Int(59), 3));
}

TEST_CASE("mod 2 representation from a division cubic has conductor 59") {
    NumberField K = make_sextic();
    GaloisGroup G = automorphism_group(K);

    /* division cubic of the rank-one curve of conductor 236 = 4 * 59 */
    IntPoly cubic({Int(128), Int(-16), Int(-4), Int(1)});
    auto roots3 = poly_roots_in_field(K, cubic);
    REQUIRE(roots3.size() == 3);

    /* label the roots with the nonzero vectors of F_2^2 */
    std::vector<std::vector<u64>> vecs = {{1, 0}, {0, 1}, {1, 1}};
    std::vector<FpMat> rho;
    for (long g = 0; g < G.order(); g++) {
        auto pm = perm_action(G, g, roots3);
        FpMat m(2, 2, 2);
        for (long j = 0; j < 2; j++) {
            m.at(0, j) = vecs[pm[j]][0];
            m.at(1, j) = vecs[pm[j]][1];
        }
        rho.push_back(m);
    }
    /* rho is a group homomorphism and is faithful */
    for (long a = 0; a < 6; a++)
        for (long b = 0; b < 6; b++)
            CHECK(fp_mul(rho[a], rho[b]).a == rho[G.mult[a][b]].a);
    for (long a = 0; a < 6; a++)
        for (long b = 0; b < a; b++) CHECK(rho[a].a != rho[b].a);

    CHECK(serre_conductor(G, rho, 2) == 59);

    /* independent route: the conductor of the cubic resolvent field equals the
       odd part of its discriminant, which is squarefree here */
    NumberField Kc(cubic);
    CHECK(Kc.disc == -59);
}

TEST_CASE("matrix group closure") {
    FpMat s(3, 2, 2), t(3, 2, 2);
    s.a = {1, 1, 0, 1};
    t.a = {2, 0, 0, 1};
    auto grp = close_matrix_group({s, t}, 100);
    CHECK(grp.size() == 6);
    /* closure respects the cap */
    CHECK_THROWS_AS(close_matrix_group({s, t}, 4), ceiling_error);

    /* the two generators of GL2(F2) give the whole group */
    FpMat u(2, 2, 2), v(2, 2, 2);
    u.a = {0, 1, 1, 1};
    v.a = {0, 1, 1, 0};
    CHECK(close_matrix_group({u, v}, 100).size() == 6);

    FpMat w(3, 2, 2);
    w.a = {0, 1, 1, 0};
    CHECK(close_matrix_group({w}, 10).size() == 2);
}

TEST_CASE("cohomology of small matrix groups") {
    /* S3 inside GL2(F3), twist where the involution negates the line fixed by
       the unipotent: the only case in our range with obstructed H^2 */
    {
        FpMat s(3, 2, 2), t(3, 2, 2);
        s.a = {1, 1, 0, 1};
        t.a = {2, 0, 0, 1};
        auto dims = cohomology_dims(close_matrix_group({s, t}, 100));
        CHECK(dims.h0 == 0);
        CHECK(dims.h1 == 0);
        CHECK(dims.h2 == 1);
    }
    /* the other twist: the involution fixes that line, so invariants and H^1
       appear instead and H^2 vanishes */
    {
        FpMat s(3, 2, 2), t(3, 2, 2);
        s.a = {1, 1, 0, 1};
        t.a = {1, 0, 0, 2};
        auto dims = cohomology_dims(close_matrix_group({s, t}, 100));
        CHECK(dims.h0 == 1);
        CHECK(dims.h1 == 1);
        CHECK(dims.h2 == 0);
    }
    /* GL2(F2) on F_2^2: everything vanishes */
    {
        FpMat u(2, 2, 2), v(2, 2, 2);
        u.a = {0, 1, 1, 1};
        v.a = {0, 1, 1, 0};
        auto dims = cohomology_dims(close_matrix_group({u, v}, 100));
        CHECK(dims.h0 == 0);
        CHECK(dims.h1 == 0);
        CHECK(dims.h2 == 0);
    }
    /* order coprime to the characteristic kills higher cohomology */
    {
        FpMat w(3, 2, 2);
        w.a = {0, 1, 1, 0};
        auto dims = cohomology_dims(close_matrix_group({w}, 10));
        CHECK(dims.h0 == 1);
        CHECK(dims.h1 == 0);
        CHECK(dims.h2 == 0);
    }
}
