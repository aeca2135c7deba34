#include "doctest.h"
#include "numfield/embeddings.hpp"
#include "numfield/roots.hpp"
#include "exactmath/errors.hpp"

#include <algorithm>

using namespace msel;

namespace {

NumberField make_sqrt5() { return NumberField(IntPoly({Int(-5), Int(0), Int(1)})); }

/* degree six field with group S3, unramified outside 59 */
NumberField make_sextic() {
    return NumberField(IntPoly({Int(4), Int(-14), Int(21), Int(-15), Int(10), Int(-3), Int(1)}));
}

double dd(const Int& a, long prec) { return hp_to_double(a, prec); }

} // namespace

TEST_CASE("fixed point constants and function identities") {
    const long P = 128;
    CHECK(dd(hp_pi(P), P) == doctest::Approx(3.14159265358979324).epsilon(1e-15));
    CHECK(dd(hp_ln2(P), P) == doctest::Approx(0.69314718055994531).epsilon(1e-15));
    CHECK(dd(hp_sqrt(Int(2) << P, P), P) == doctest::Approx(1.41421356237309505).epsilon(1e-15));
    CHECK(dd(hp_exp(Int(1) << P, P), P) == doctest::Approx(2.71828182845904524).epsilon(1e-15));
    CHECK(dd(hp_ln(Int(3) << P, P), P) == doctest::Approx(1.09861228866810969).epsilon(1e-15));

    /* ln agrees with the cached ln 2 */
    Int l2 = hp_ln(Int(2) << P, P);
    CHECK(abs(l2 - hp_ln2(P)) <= 4);

    /* high precision round trips keep nearly all bits */
    const long Q = 256;
    Int three = Int(3) << Q;
    CHECK(abs(hp_exp(hp_ln(three, Q), Q) - three) <= Int(1) << 20);
    Int s2 = hp_sqrt(Int(2) << Q, Q);
    CHECK(abs(hp_mul(s2, s2, Q) - (Int(2) << Q)) <= Int(1) << 8);
    /* ln(a*b) = ln a + ln b */
    Int l6 = hp_ln(Int(6) << Q, Q);
    CHECK(abs(l6 - hp_ln(Int(2) << Q, Q) - hp_ln(three, Q)) <= 8);

    CHECK_THROWS_AS(hp_ln(Int(0), P), math_error);
    CHECK_THROWS_AS(hp_sqrt(Int(-1), P), math_error);
}

TEST_CASE("complex arithmetic") {
    const long P = 64;
    CF a{Int(3) << P, Int(4) << P};
    CHECK(cf_abs2(a, P) == Int(25) << P);
    CHECK(cf_abs(a, P) == Int(5) << P);
    CF b{Int(1) << P, Int(2) << P};
    CF q = cf_div(cf_mul(a, b, P), b, P);
    CHECK(abs(q.re - a.re) <= 4);
    CHECK(abs(q.im - a.im) <= 4);
    CF c = cf_mul(a, cf_conj(a), P);
    CHECK(c.re == Int(25) << P);
    CHECK(c.im == 0);
}

TEST_CASE("complex roots: layout and certification") {
    const long P = 128;
    {
        auto r = complex_roots(IntPoly({Int(-5), Int(0), Int(1)}), P);
        REQUIRE(r.size() == 2);
        /* two real roots, ascending, exact zero imaginary parts */
        CHECK(r[0].im == 0);
        CHECK(r[1].im == 0);
        CHECK(r[0].re < r[1].re);
        CHECK(r[0].re == -r[1].re);
        CHECK(dd(r[1].re, P) == doctest::Approx(2.2360679774997897).epsilon(1e-15));
    }
    {
        auto r = complex_roots(IntPoly({Int(1), Int(0), Int(1)}), P);
        REQUIRE(r.size() == 2);
        /* conjugate pair, positive imaginary part first */
        CHECK(r[0].re == 0);
        CHECK(r[0].im > 0);
        CHECK(r[1].re == r[0].re);
        CHECK(r[1].im == -r[0].im);
        CHECK(dd(r[0].im, P) == doctest::Approx(1.0).epsilon(1e-15));
    }
    {
        /* x^3 - 2: one real root then the pair */
        auto r = complex_roots(IntPoly({Int(-2), Int(0), Int(0), Int(1)}), P);
        REQUIRE(r.size() == 3);
        CHECK(r[0].im == 0);
        CHECK(dd(r[0].re, P) == doctest::Approx(1.2599210498948732).epsilon(1e-15));
        CHECK(r[1].im > 0);
        CHECK(r[2].im == -r[1].im);
        /* sum of roots is zero (no quadratic term) */
        CHECK(abs(r[0].re + r[1].re + r[2].re) <= 8);
        CHECK(abs(r[1].im + r[2].im) == 0);
    }
    /* non-squarefree and non-monic inputs are rejected */
    CHECK_THROWS(complex_roots(IntPoly({Int(1), Int(2), Int(1)}), P));
    CHECK_THROWS(complex_roots(IntPoly({Int(1), Int(0), Int(2)}), P));
}

TEST_CASE("embeddings of a real quadratic field") {
    NumberField K = make_sqrt5();
    auto emb = make_embeddings(K, 128);

    /* exact trace form of the integral basis {(1+sqrt5)/2, sqrt5} */
    auto G = emb.t2_gram(16);
    Int sc = Int(1) << 16;
    CHECK(G.at(0, 0) == 3 * sc);
    CHECK(G.at(0, 1) == 5 * sc);
    CHECK(G.at(1, 0) == 5 * sc);
    CHECK(G.at(1, 1) == 10 * sc);

    /* logs of a rational are equal at every embedding */
    auto la = emb.log_abs(K.from_rational(Rat(8)));
    REQUIRE(la.size() == 2);
    CHECK(dd(la[0], 128) == doctest::Approx(2.0794415416798359).epsilon(1e-14));
    CHECK(la[0] == la[1]);

    /* the fundamental unit has log vector summing to zero */
    NFElem phi = K.from_power({Rat(1, 2), Rat(1, 2)});
    auto lu = emb.log_abs(phi);
    CHECK(abs(lu[0] + lu[1]) <= 16);
    CHECK(dd(lu[0], 128) + dd(lu[1], 128) == doctest::Approx(0.0).epsilon(1e-20));
    CHECK(std::max(dd(lu[0], 128), dd(lu[1], 128)) ==
          doctest::Approx(0.4812118250596035).epsilon(1e-14));

    CHECK_THROWS_AS(emb.log_abs(K.zero()), math_error);
}

TEST_CASE("roots of polynomials inside a field") {
    NumberField K = make_sqrt5();
    {
        auto r = poly_roots_in_field(K, K.f);
        REQUIRE(r.size() == 2);
        CHECK(K.add(r[0], r[1]).is_zero());
        for (auto& b : r) CHECK(K.eval_poly(K.f, b).is_zero());
        CHECK(r[0] == K.neg(K.theta()));
        CHECK(r[1] == K.theta());
    }
    {
        /* golden ratio and its conjugate */
        IntPoly g({Int(-1), Int(-1), Int(1)});
        auto r = poly_roots_in_field(K, g);
        REQUIRE(r.size() == 2);
        NFElem phi = K.from_power({Rat(1, 2), Rat(1, 2)});
        CHECK(std::count(r.begin(), r.end(), phi) == 1);
        CHECK(std::count(r.begin(), r.end(), K.sub(K.one(), phi)) == 1);
    }
    /* no fourth root of -1 in a real field */
    CHECK(poly_roots_in_field(K, IntPoly({Int(1), Int(0), Int(1)})).empty());
}

TEST_CASE("sextic field is normal: all six roots recognized") {
    NumberField K = make_sextic();
    auto r = poly_roots_in_field(K, K.f);
    REQUIRE(r.size() == 6);
    CHECK(std::count(r.begin(), r.end(), K.theta()) == 1);
    for (auto& b : r) CHECK(K.eval_poly(K.f, b).is_zero());
    /* distinct */
    for (size_t i = 0; i < r.size(); i++)
        for (size_t j = 0; j < i; j++) CHECK_FALSE(r[i] == r[j]);
    /* roots sum to -a5 = 3 */
    NFElem s = K.zero();
    for (auto& b : r) s = K.add(s, b);
    CHECK(s == K.from_rational(Rat(3)));

    /* trace form diagonal begins with T2(1) = n at the stated scale */
    auto emb = make_embeddings(K, 256);
    auto G = emb.t2_gram(32);
    CHECK(G.at(0, 0) == Int(6) << 32);
    /* symmetric positive diagonal */
    for (long i = 0; i < 6; i++) {
        CHECK(G.at(i, i) > 0);
        for (long j = 0; j < i; j++) CHECK(G.at(i, j) == G.at(j, i));
    }
}
