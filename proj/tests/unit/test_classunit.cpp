#include "doctest.h"
#include "classunit/classunit.hpp"
#include "numfield/roots.hpp"
#include "numfield/embeddings.hpp"
#include "exactmath/lll.hpp"
#include "exactmath/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

using namespace msel;

namespace {

NumberField make_gaussian() { return NumberField(IntPoly({Int(1), Int(0), Int(1)})); }
NumberField make_sqrt5() { return NumberField(IntPoly({Int(-5), Int(0), Int(1)})); }
NumberField make_qm5() { return NumberField(IntPoly({Int(5), Int(0), Int(1)})); }
NumberField make_qm3() { return NumberField(IntPoly({Int(3), Int(0), Int(1)})); }

NumberField make_sextic() {
    return NumberField(IntPoly({Int(4), Int(-14), Int(21), Int(-15), Int(10), Int(-3), Int(1)}));
}

/* the sextic class group is expensive; share one copy across cases */
const NumberField& sextic_field() {
    static NumberField K = make_sextic();
    return K;
}
const ClassGroup& sextic_class_group() {
    static ClassGroup cg = class_group(sextic_field());
    return cg;
}

/* oracle: class number of an imaginary quadratic order by counting reduced
   binary quadratic forms ax^2 + bxy + cy^2 of discriminant D < 0 */
long reduced_form_count(long D) {
    long count = 0;
    for (long a = 1; 3 * a * a <= -D; a++)
        for (long b = -a; b <= a; b++) {
            if ((b * b - D) % (4 * a) != 0) continue;
            long c = (b * b - D) / (4 * a);
            if (c < a) continue;
            if (b < 0 && (a == -b || a == c)) continue;
            count++;
        }
    return count;
}

/* oracle: prove an ideal principal by a direct short-vector search over its
   own lattice, independent of the relation-harvest machinery */
bool directly_principal(const NumberField& K, const IntMat& ideal, const IntMat& gramO) {
    Int N = ideal_norm(ideal);
    auto red = lll_reduce(ideal, gramO);
    for (long i = 0; i < K.n; i++) {
        std::vector<Int> r(K.n);
        for (long j = 0; j < K.n; j++) r[j] = red.basis.at(i, j);
        if (abs(K.norm(NFElem{r, Int(1)}).get_num()) == N) return true;
    }
    double c0 = 8.0 * K.n * std::pow(N.get_d(), 2.0 / K.n);
    for (double cap = c0; cap < c0 * 200; cap *= 2) {
        Int bnd = Int(std::ceil(cap)) << 48;
        IntMat G = mat_mul(mat_mul(ideal, gramO), transpose(ideal));
        std::vector<std::vector<Int>> xs;
        try {
            xs = enumerate_short_vectors(RatMat::from_int(G), make_rat(bnd, Int(1)), 600000);
        } catch (const ceiling_error&) {
            return false;
        }
        for (auto& x : xs) {
            NFElem g{mat_vec(transpose(ideal), x), Int(1)};
            if (abs(K.norm(g).get_num()) == N) return true;
        }
    }
    return false;
}

/* oracle: all square classes of S-supported elements of a small imaginary
   quadratic order, by brute-force box enumeration and exact square tests */
long square_class_count(const NumberField& K, long s_prime, long box) {
    std::vector<NFElem> reps;
    for (long a = -box; a <= box; a++)
        for (long b = -box; b <= box; b++) {
            if (a == 0 && b == 0) continue;
            NFElem g = K.from_power({Rat(a), Rat(b)});
            if (!g.is_integral()) continue;
            Int N = abs(K.norm(g).get_num());
            while (fdiv_r(N, Int(s_prime)) == 0) N /= s_prime;
            if (N != 1) continue;
            bool fresh = true;
            for (auto& r : reps)
                if (pth_root_in_field(K, K.div(g, r), 2)) fresh = false;
            if (fresh) reps.push_back(g);
        }
    return (long)reps.size();
}

} // namespace

TEST_CASE("class group of imaginary quadratic fields against form reduction") {
    /* the form-count oracle itself, on classical discriminants */
    CHECK(reduced_form_count(-4) == 1);
    CHECK(reduced_form_count(-20) == 2);
    CHECK(reduced_form_count(-23) == 3);

    NumberField K = make_qm5();
    ClassGroup cg = class_group(K);
    CHECK(cg.h() == reduced_form_count(-20));
    REQUIRE(cg.invariants.size() == 1);
    CHECK(cg.invariants[0] == 2);
    CHECK(cg.w == 2);
    CHECK(cg.units.empty());
    CHECK_FALSE(cg.grh);

    /* generator^order is principal with the stored witness */
    REQUIRE(cg.gen_witness.size() == 1);
    IntMat A = IntMat::identity(K.n);
    for (size_t j = 0; j < cg.fb.size(); j++) {
        long e = (long)(cg.gen_exps[0][j].get_si() * cg.invariants[0].get_si());
        if (e > 0) A = ideal_mul(K, A, ideal_pow(K, cg.fb[j].h, e));
    }
    CHECK(principal_ideal(K, cg.gen_witness[0]) == A);

    NumberField Ki = make_gaussian();
    ClassGroup cgi = class_group(Ki);
    CHECK(cgi.h() == reduced_form_count(-4));
    CHECK(cgi.invariants.empty());
    CHECK(cgi.w == 4);
    CHECK(K.norm(cg.zeta) == Rat(1));
    CHECK(Ki.pow(cgi.zeta, Int(2)) == Ki.from_rational(Rat(-1)));
}

TEST_CASE("class group discrete log") {
    NumberField K = make_qm5();
    ClassGroup cg = class_group(K);

    /* 2 ramifies: (2) = P2^2 with P2 non-principal; 3 and 7 split likewise */
    auto p2 = factor_prime(K, Int(2));
    auto p3 = factor_prime(K, Int(3));
    auto p7 = factor_prime(K, Int(7)); /* norm 7 is outside the factor base */
    REQUIRE(p2.size() == 1);
    CHECK(p2[0].e == 2);
    CHECK(cg.dlog(p2[0].h) == std::vector<Int>{Int(1)});
    CHECK(cg.dlog(p3[0].h) == std::vector<Int>{Int(1)});
    CHECK(cg.dlog(p7[0].h) == std::vector<Int>{Int(1)});

    /* dlog is additive and kills principal ideals */
    CHECK(cg.dlog(ideal_mul(K, p3[0].h, p7[0].h)) == std::vector<Int>{Int(0)});
    NFElem x = K.add(K.from_rational(Rat(3)), K.theta()); /* 3 + sqrt(-5), norm 14 */
    CHECK(cg.dlog(principal_ideal(K, x)) == std::vector<Int>{Int(0)});
}

TEST_CASE("class group bound options") {
    NumberField K = make_sextic();
    ClassGroupOptions opt;
    opt.disc_ceiling = 10;
    CHECK_THROWS_AS(class_group(K, opt), std::invalid_argument);
    try {
        class_group(K, opt);
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("assume-grh") != std::string::npos);
    }

    /* GRH runs record the flag; on a tiny field both bounds give the group */
    NumberField Kq = make_qm5();
    ClassGroupOptions grh;
    grh.assume_grh = true;
    ClassGroup cg = class_group(Kq, grh);
    CHECK(cg.grh);
    CHECK(cg.h() == 2);
}

TEST_CASE("units of a real quadratic field") {
    NumberField K = make_sqrt5();
    ClassGroup cg = class_group(K);
    CHECK(cg.invariants.empty());
    CHECK(cg.w == 2);
    REQUIRE(cg.units.size() == 1);

    /* the fundamental unit is (1+sqrt5)/2 up to inversion and sign */
    NFElem phi = K.from_power({Rat(1, 2), Rat(1, 2)});
    NFElem u = cg.units[0];
    bool matches = false;
    for (const NFElem& c : {phi, K.inv(phi), K.neg(phi), K.neg(K.inv(phi))})
        if (u == c) matches = true;
    CHECK(matches);

    /* regulator cross-check */
    Embeddings emb = make_embeddings(K, 128);
    double reg = std::abs(hp_to_double(emb.log_abs(u)[0], 128));
    CHECK(reg == doctest::Approx(0.4812118250596035).epsilon(1e-12));
}

TEST_CASE("s-unit groups") {
    /* Q with S = {2}: torsion -1 and fundamental S-unit 2 */
    NumberField Kq(IntPoly({Int(0), Int(1)}));
    ClassGroup cgq = class_group(Kq);
    auto S2 = factor_prime(Kq, Int(2));
    SUnitGroup Uq = s_unit_group(Kq, S2, cgq);
    CHECK(Uq.w == 2);
    CHECK(Uq.zeta == Kq.from_rational(Rat(-1)));
    REQUIRE(Uq.fund.size() == 1);
    CHECK(Uq.urank == 0);
    CHECK(Uq.fund[0] == Kq.from_rational(Rat(2)));
    CHECK(Uq.val.at(0, 0) == 1);
    CHECK(sunit_dlog(Kq.from_rational(Rat(-8)), Uq) == std::vector<Int>{Int(1), Int(3)});

    /* x^2-5 with S = {}: rank 1, the fundamental unit */
    NumberField K5 = make_sqrt5();
    ClassGroup cg5 = class_group(K5);
    SUnitGroup U5 = s_unit_group(K5, {}, cg5);
    CHECK(U5.fund.size() == 1);
    CHECK(U5.urank == 1);
    CHECK(abs(K5.norm(U5.fund[0]).get_num()) == 1);

    /* valuation profile is exact: claimed values at S, nothing elsewhere */
    NumberField Km = make_qm5();
    ClassGroup cgm = class_group(Km);
    auto Sm = factor_prime(Km, Int(2));
    SUnitGroup Um = s_unit_group(Km, Sm, cgm);
    REQUIRE(Um.fund.size() == 1);
    long v = valuation(Km, Sm[0], Um.fund[0]);
    CHECK(v == Um.val.at(0, 0).get_si());
    CHECK(abs(Km.norm(Um.fund[0]).get_num()) == pow_int(Int(2), (unsigned long)v));
}

TEST_CASE("s-unit discrete logs") {
    NumberField K = make_qm5();
    ClassGroup cg = class_group(K);
    auto S = factor_prime(K, Int(2));
    SUnitGroup U = s_unit_group(K, S, cg);
    REQUIRE(U.fund.size() == 1);

    CHECK(sunit_dlog(U.fund[0], U) == std::vector<Int>{Int(0), Int(1)});
    NFElem g = K.mul(U.zeta, K.mul(U.fund[0], U.fund[0]));
    CHECK(sunit_dlog(g, U) == std::vector<Int>{Int(1), Int(2)});

    /* non-S-units are rejected */
    CHECK_THROWS_AS(sunit_dlog(K.from_rational(Rat(3)), U), std::invalid_argument);
    CHECK_THROWS_AS(sunit_dlog(K.add(K.from_rational(Rat(1)), K.theta()), U),
                    std::invalid_argument);
}

TEST_CASE("s-unit dlog round trip with random exponents") {
    const NumberField& K = sextic_field();
    const ClassGroup& cg = sextic_class_group();
    auto S = factor_prime(K, Int(2));
    SUnitGroup U = s_unit_group(K, S, cg);
    REQUIRE(U.fund.size() == 5);
    REQUIRE(U.urank == 2);

    std::mt19937 rng(12345);
    std::uniform_int_distribution<long> d(-3, 3);
    for (int trial = 0; trial < 4; trial++) {
        std::vector<Int> want;
        want.push_back(Int((long)(rng() % 2)));
        NFElem g = K.pow(U.zeta, want[0]);
        for (size_t i = 0; i < U.fund.size(); i++) {
            long e = d(rng);
            want.push_back(Int(e));
            g = K.mul(g, K.pow(U.fund[i], Int(e)));
        }
        CHECK(sunit_dlog(g, U) == want);
    }
}

TEST_CASE("sextic class group and unit rank") {
    const NumberField& K = sextic_field();
    const ClassGroup& cg = sextic_class_group();

    /* every class contains an ideal of norm <= 15, hence a product of prime
       ideals of norm <= 15; prove each such prime principal directly */
    CHECK(cg.bound == 15);
    CHECK(cg.fb.size() == 15);
    Embeddings emb = make_embeddings(K, 256);
    IntMat gramO = emb.t2_gram(48);
    long proved = 0;
    for (long q : {2, 3, 5, 7, 11, 13})
        for (auto& P : factor_prime(K, Int(q))) {
            if (ideal_norm(P.h) > 15) continue;
            CHECK(directly_principal(K, P.h, gramO));
            proved++;
        }
    CHECK(proved >= 3);
    CHECK(cg.invariants.empty());
    CHECK(cg.h() == 1);

    /* signature (0,3): unit rank 2, torsion just -1 */
    CHECK(cg.w == 2);
    REQUIRE(cg.units.size() == 2);
    for (auto& u : cg.units) CHECK(abs(K.norm(u).get_num()) == 1);

    /* the two units are multiplicatively independent: log rank 2 */
    IntMat lg(2, K.n);
    for (long i = 0; i < 2; i++) {
        auto la = emb.log_abs(cg.units[i]);
        for (long j = 0; j < K.n; j++) lg.at(i, j) = rdiv_q(la[j], Int(1) << (256 - 48));
    }
    CHECK(rank_rat(RatMat::from_int(lg)) == 2);
}

TEST_CASE("field selmer group of Q at 2") {
    NumberField K(IntPoly({Int(0), Int(1)}));
    auto S = factor_prime(K, Int(2));
    FieldSelmerGroup F = field_selmer_group(K, 2, S);
    REQUIRE(F.basis.size() == 2);
    CHECK(F.basis[0] == K.from_rational(Rat(-1)));
    CHECK(F.basis[1] == K.from_rational(Rat(2)));
    REQUIRE(F.action.size() == 1);
    CHECK(F.action[0].is_identity());
}

TEST_CASE("field selmer group of the gaussian field at 2") {
    NumberField K = make_gaussian();
    auto S = factor_prime(K, Int(2));
    FieldSelmerGroup F = field_selmer_group(K, 2, S);
    REQUIRE(F.basis.size() == 2);

    /* brute-force Kummer oracle: square classes of {2}-supported elements */
    CHECK(square_class_count(K, 2, 6) == 4);

    /* basis is the torsion generator -i and the uniformizer 1+i */
    NFElem i = K.from_power({Rat(0), Rat(1)});
    CHECK(F.basis[0] == K.neg(i));
    CHECK(F.basis[1] == K.add(K.one(), i));

    /* each basis element is even outside S at every prime of its norm */
    for (auto& b : F.basis) {
        Int N = abs(K.norm(b).get_num());
        for (auto& [q, e] : factor_int(N)) {
            (void)e;
            for (auto& P : factor_prime(K, q)) {
                bool in_s = false;
                for (auto& Q : S) in_s = in_s || (P.q == Q.q && P.h == Q.h);
                if (!in_s) CHECK(valuation(K, P, b) % 2 == 0);
            }
        }
    }

    /* the action of conjugation: conj(-i) = (-i)^3 is trivial mod squares,
       conj(1+i) = 1-i = (1+i)(-i) */
    REQUIRE(F.action.size() == 2);
    long conj = F.action[0].is_identity() ? 1 : 0;
    CHECK(F.action[1 - conj].is_identity());
    const FpMat& M = F.action[conj];
    CHECK(M.at(0, 0) == 1);
    CHECK(M.at(0, 1) == 1);
    CHECK(M.at(1, 0) == 0);
    CHECK(M.at(1, 1) == 1);
    CHECK(fp_mul(M, M).is_identity());
}

TEST_CASE("field selmer group with nontrivial class contribution") {
    NumberField K = make_qm5();
    auto S = factor_prime(K, Int(2));
    FieldSelmerGroup F = field_selmer_group(K, 2, S);

    /* rank 0 + |S| = 1 S-units, torsion 1, Cl_S[2] = 0 since [P2] generates */
    CHECK(F.basis.size() == 2);
    CHECK(F.usp.S.size() > S.size()); /* enlarged S' picks up class generators */
    CHECK(square_class_count(K, 2, 8) == 4);
}

TEST_CASE("field selmer group at p = 3") {
    NumberField K = make_qm3();
    auto S = factor_prime(K, Int(3));
    REQUIRE(S.size() == 1);
    CHECK(S[0].e == 2);
    FieldSelmerGroup F = field_selmer_group(K, 3, S);

    REQUIRE(F.basis.size() == 2);
    /* basis: the sixth root of unity and a uniformizer of the ramified prime */
    CHECK(K.pow(F.basis[0], Int(6)) == K.one());
    CHECK(K.pow(F.basis[0], Int(3)) == K.from_rational(Rat(-1)));
    CHECK(abs(K.norm(F.basis[1]).get_num()) == 3);
    CHECK(valuation(K, S[0], F.basis[1]) == 1);

    REQUIRE(F.action.size() == 2);
    long conj = F.action[0].is_identity() ? 1 : 0;
    const FpMat& A = F.action[conj];
    CHECK(fp_mul(A, A).is_identity());
    /* conjugation inverts roots of unity and sends the uniformizer to its
       conjugate, which is zeta^5 times it modulo cubes */
    CHECK(A.at(0, 0) == 2);
    CHECK(A.at(1, 0) == 0);
    CHECK(A.at(0, 1) == 2);
    CHECK(A.at(1, 1) == 1);

    /* independent verification of every matrix entry: sigma(b_i) divided by
       the claimed basis product must be an exact cube */
    GaloisGroup G = automorphism_group(K);
    for (long g = 0; g < G.order(); g++)
        for (long i = 0; i < 2; i++) {
            NFElem want = G.apply(g, F.basis[i]);
            NFElem have = K.one();
            for (long j = 0; j < 2; j++)
                have = K.mul(have, K.pow(F.basis[j], Int((long)F.action[g].at(j, i))));
            CHECK(pth_root_in_field(K, K.div(want, have), 3).has_value());
        }
}

TEST_CASE("field selmer group preconditions") {
    NumberField Kq(IntPoly({Int(0), Int(1)}));
    auto S3 = factor_prime(Kq, Int(3));
    CHECK_THROWS_AS(field_selmer_group(Kq, 3, S3), std::invalid_argument); /* no mu_3 */
    CHECK_THROWS_AS(field_selmer_group(Kq, 2, {}), std::invalid_argument); /* S too small */

    NumberField Ki = make_gaussian();
    auto S5 = factor_prime(Ki, Int(5));
    CHECK_THROWS_AS(field_selmer_group(Ki, 2, S5), std::invalid_argument); /* wrong primes */
}

TEST_CASE("field selmer group of the sextic at 2") {
    const NumberField& K = sextic_field();
    auto S = factor_prime(K, Int(2));
    REQUIRE(S.size() == 3);
    FieldSelmerGroup F = field_selmer_group(K, 2, S);

    /* the 2-Selmer group of the field is (Z/2)^6 */
    CHECK(F.basis.size() == 6);

    /* all of Gal = S3 acts; matrices are invertible and give a homomorphism
       with a nonabelian image */
    REQUIRE(F.action.size() == 6);
    GaloisGroup G = automorphism_group(K);
    CHECK(F.action[G.id].is_identity());
    bool nonabelian = false;
    for (long a = 0; a < 6; a++)
        for (long b = 0; b < 6; b++) {
            CHECK(fp_mul(F.action[a], F.action[b]) == F.action[G.mult[a][b]]);
            if (!(fp_mul(F.action[a], F.action[b]) == fp_mul(F.action[b], F.action[a])))
                nonabelian = true;
        }
    CHECK(nonabelian);
    for (long a = 0; a < 6; a++) CHECK(fp_rank(F.action[a]) == 6);

    /* basis elements have even valuation at every prime outside S dividing
       their norms */
    for (auto& b : F.basis) {
        Int N = abs(K.norm(b).get_num());
        for (auto& [q, e] : factor_int(N)) {
            (void)e;
            if (q == 2) continue;
            for (auto& P : factor_prime(K, q)) CHECK(valuation(K, P, b) % 2 == 0);
        }
    }
}

TEST_CASE("pth roots inside a field") {
    NumberField K5 = make_sqrt5();
    NFElem sqrt5 = K5.from_power({Rat(0), Rat(1)});
    auto r = pth_root_in_field(K5, K5.mul(sqrt5, sqrt5), 2);
    REQUIRE(r.has_value());
    CHECK((*r == sqrt5 || *r == K5.neg(sqrt5)));
    CHECK_FALSE(pth_root_in_field(K5, K5.from_rational(Rat(2)), 2).has_value());

    NFElem phi = K5.from_power({Rat(1, 2), Rat(1, 2)});
    auto c = pth_root_in_field(K5, K5.pow(phi, Int(3)), 3);
    REQUIRE(c.has_value());
    CHECK(*c == phi);
    CHECK_FALSE(pth_root_in_field(K5, phi, 3).has_value());

    /* rational radicands with denominators */
    auto h = pth_root_in_field(K5, K5.from_rational(Rat(9, 4)), 2);
    REQUIRE(h.has_value());
    CHECK((K5.mul(*h, *h) == K5.from_rational(Rat(9, 4))));

    NumberField Ki = make_gaussian();
    NFElem i = Ki.from_power({Rat(0), Rat(1)});
    auto s = pth_root_in_field(Ki, Ki.from_rational(Rat(-1)), 2);
    REQUIRE(s.has_value());
    CHECK((*s == i || *s == Ki.neg(i)));
    CHECK_FALSE(pth_root_in_field(Ki, i, 2).has_value());
    CHECK_THROWS_AS(pth_root_in_field(Ki, i, 4), math_error);
}
