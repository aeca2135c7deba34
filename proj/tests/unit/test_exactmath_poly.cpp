#include "doctest.h"
#include "exactmath/fp_poly.hpp"
#include "exactmath/int_poly.hpp"
#include "exactmath/errors.hpp"

#include <algorithm>

using namespace msel;

TEST_CASE("fp polynomial arithmetic and gcd") {
    FpPoly a(5, {1, 0, 1});      /* x^2 + 1 */
    FpPoly b(5, {2, 1});         /* x + 2 */
    auto [q, r] = fpp_divrem(a, b);
    CHECK(fpp_add(fpp_mul(q, b), r) == a);
    CHECK(r.deg() <= 0);

    /* gcd((x^2-1)(x+3), (x-1)(x+4)) = x-1 over F_7 */
    FpPoly f = fpp_mul(FpPoly(7, {6, 0, 1}), FpPoly(7, {3, 1}));
    FpPoly g = fpp_mul(FpPoly(7, {6, 1}), FpPoly(7, {4, 1}));
    CHECK(fpp_gcd(f, g) == FpPoly(7, {6, 1}));

    auto xg = fpp_xgcd(f, g);
    CHECK(fpp_add(fpp_mul(xg.s, f), fpp_mul(xg.t, g)) == xg.g);
    CHECK(xg.g == FpPoly(7, {6, 1}));

    CHECK(fpp_eval(FpPoly(11, {3, 2, 1}), 4) == (16 + 8 + 3) % 11);
    CHECK(fpp_powmod(FpPoly(5, {0, 1}), Int(5), FpPoly(5, {3, 0, 1})).deg() == 1);
}

TEST_CASE("fp factorization: fixed small cases") {
    /* x^2 + 1 = (x+1)^2 over F_2 */
    auto f1 = fpp_factor(FpPoly(2, {1, 0, 1}));
    REQUIRE(f1.size() == 1);
    CHECK(f1[0].first == FpPoly(2, {1, 1}));
    CHECK(f1[0].second == 2);

    /* x^2 + 1 = (x+2)(x+3) over F_5 */
    auto f2 = fpp_factor(FpPoly(5, {1, 0, 1}));
    REQUIRE(f2.size() == 2);
    CHECK(f2[0].second == 1);
    CHECK(f2[1].second == 1);
    CHECK(fpp_mul(f2[0].first, f2[1].first) == FpPoly(5, {1, 0, 1}));

    /* reassembly property on a bigger product over F_3 */
    FpPoly big = fpp_mul(fpp_mul(FpPoly(3, {1, 1}), FpPoly(3, {1, 1})),
                         FpPoly(3, {1, 2, 0, 1})); /* (x+1)^2 (x^3+2x+1) */
    auto f3 = fpp_factor(big);
    FpPoly prod = FpPoly::constant(3, 1);
    for (auto& [fac, e] : f3) {
        CHECK(fpp_is_irreducible(fac));
        for (int i = 0; i < e; i++) prod = fpp_mul(prod, fac);
    }
    CHECK(prod == fpp_monic(big));

    CHECK(fpp_is_irreducible(FpPoly(2, {1, 1, 1})));
    CHECK(!fpp_is_irreducible(FpPoly(2, {1, 0, 1})));
    CHECK(fpp_is_squarefree(FpPoly(5, {1, 0, 1})));
    CHECK(!fpp_is_squarefree(FpPoly(2, {1, 0, 1})));
}

TEST_CASE("fp roots") {
    /* x^3 - x has roots 0,1,2 over F_3 */
    auto rts = fpp_roots(FpPoly(3, {0, 2, 0, 1}));
    CHECK(rts == std::vector<u64>({0, 1, 2}));
    CHECK(fpp_roots(FpPoly(7, {1, 0, 1})).empty()); /* -1 not a square mod 7 */
    auto r13 = fpp_roots(FpPoly(13, {1, 0, 1}));    /* -1 = 5^2 = 8^2 mod 13 */
    CHECK(r13 == std::vector<u64>({5, 8}));
}

TEST_CASE("finite field contexts") {
    auto F4 = FqCtx::make(2, 2);
    CHECK(F4.modulus == FpPoly(2, {1, 1, 1})); /* only irreducible quadratic mod 2 */
    FpPoly w(2, {0, 1});
    /* w^2 = w + 1, w^3 = 1 */
    CHECK(F4.mul(w, w) == FpPoly(2, {1, 1}));
    CHECK(F4.pow(w, Int(3)) == F4.one());
    CHECK(F4.mul(w, F4.inv(w)) == F4.one());
    /* frobenius is an involution fixing exactly F_2 */
    CHECK(F4.frobenius(F4.frobenius(w)) == w);
    CHECK(F4.frobenius(F4.one()) == F4.one());
    CHECK(F4.frobenius(w) != w);
    CHECK(F4.pth_root(F4.frobenius(w)) == w);

    /* t^2 + t = 1 has the two non-rational solutions in F_4 */
    auto sols = F4.solve_artin_schreier(F4.one(), F4.one());
    REQUIRE(sols.size() == 2);
    for (auto& t : sols) CHECK(F4.add(F4.mul(t, t), t) == F4.one());
    /* and no solution to t^2 + t = x over the subfield test: c=1,d=w */
    for (auto& t : F4.solve_artin_schreier(F4.one(), w))
        CHECK(F4.add(F4.mul(t, t), t) == w);

    auto F27 = FqCtx::make(3, 3);
    CHECK(fpp_is_irreducible(F27.modulus));
    FpPoly z(3, {0, 1});
    auto zr = F27.reduce(z);
    CHECK(F27.pow(zr, Int(26)) == F27.one());      /* group order 26 */
    CHECK(F27.pth_root(F27.pow(zr, Int(3))) == zr);
    auto co = F27.coords(F27.pow(zr, Int(5)));
    CHECK(F27.from_coords(co) == F27.pow(zr, Int(5)));
}

TEST_CASE("integer polynomial arithmetic") {
    IntPoly f = IntPoly::from_long({2, 0, 1});  /* x^2 + 2 */
    IntPoly g = IntPoly::from_long({1, 1});     /* x + 1 */
    CHECK(ip_mul(f, g) == IntPoly::from_long({2, 2, 1, 1}));
    auto [q, r] = ip_divrem_monic(ip_mul(f, g), g);
    CHECK(q == f);
    CHECK(r.is_zero());
    CHECK(ip_divides(g, ip_mul(f, g)));
    CHECK(!ip_divides(IntPoly::from_long({5, 1}), f));
    CHECK(ip_eval(f, Int(3)) == 11);
    CHECK(ip_eval(f, Rat(1, 2)) == Rat(9, 4));
    CHECK(ip_content(IntPoly::from_long({6, -9, 3})) == 3);
}

TEST_CASE("resultant and discriminant against closed forms") {
    /* disc(x^2 + b x + c) = b^2 - 4c */
    for (long b = -3; b <= 3; b++)
        for (long c = -3; c <= 3; c++)
            CHECK(ip_discriminant(IntPoly::from_long({c, b, 1})) == b * b - 4 * c);
    /* disc(x^3 + a x + b) = -4a^3 - 27 b^2 */
    for (long a = -2; a <= 2; a++)
        for (long b = -2; b <= 2; b++)
            CHECK(ip_discriminant(IntPoly::from_long({b, a, 0, 1})) ==
                  -4 * a * a * a - 27 * b * b);
    /* res(x-2, x-3) = 2-3 up to sign convention: res = prod (a_i - b_j) */
    CHECK(abs(ip_resultant(IntPoly::from_long({-2, 1}), IntPoly::from_long({-3, 1}))) == 1);
    CHECK(ip_resultant(IntPoly::from_long({1, 0, 1}), IntPoly::from_long({-1, 1})) == 2);
}

TEST_CASE("real root counts by Sturm chains") {
    CHECK(ip_count_real_roots(IntPoly::from_long({0, -2, 0, 1})) == 3);  /* x^3-2x */
    CHECK(ip_count_real_roots(IntPoly::from_long({1, 0, 1})) == 0);     /* x^2+1 */
    CHECK(ip_count_real_roots(IntPoly::from_long({4, 0, -5, 0, 1})) == 4);
    CHECK(ip_count_real_roots(IntPoly::from_long({-2, 1})) == 1);
}

TEST_CASE("integer factorization of monic polynomials") {
    /* x^4 - 1 = (x-1)(x+1)(x^2+1) */
    auto f = ip_factor_monic(IntPoly::from_long({-1, 0, 0, 0, 1}));
    REQUIRE(f.size() == 3);
    IntPoly prod = IntPoly::from_long({1});
    for (auto& [fac, e] : f) {
        CHECK(e == 1);
        CHECK(fac.is_monic());
        prod = ip_mul(prod, fac);
    }
    CHECK(prod == IntPoly::from_long({-1, 0, 0, 0, 1}));

    CHECK(ip_is_irreducible_monic(IntPoly::from_long({1, 0, 0, 0, 1}))); /* x^4+1 */
    CHECK(!ip_is_irreducible_monic(IntPoly::from_long({-1, 0, 0, 0, 1})));

    /* repeated factor: (x^2+1)^2 (x^3+x+1) */
    IntPoly sq = ip_mul(ip_mul(IntPoly::from_long({1, 0, 1}), IntPoly::from_long({1, 0, 1})),
                        IntPoly::from_long({1, 1, 0, 1}));
    auto fs = ip_factor_monic(sq);
    REQUIRE(fs.size() == 2);
    std::sort(fs.begin(), fs.end(), [](auto& a, auto& b) { return a.second > b.second; });
    CHECK(fs[0].first == IntPoly::from_long({1, 0, 1}));
    CHECK(fs[0].second == 2);
    CHECK(fs[1].first == IntPoly::from_long({1, 1, 0, 1}));
    CHECK(fs[1].second == 1);
}

TEST_CASE("integer roots of monic polynomials") {
    /* (x-2)(x-3)(x^2+1) */
    IntPoly f = ip_mul(ip_mul(IntPoly::from_long({-2, 1}), IntPoly::from_long({-3, 1})),
                       IntPoly::from_long({1, 0, 1}));
    auto rts = ip_integer_roots_monic(f);
    CHECK(rts == std::vector<Int>({2, 3}));
    CHECK(ip_integer_roots_monic(IntPoly::from_long({1, 0, 1})).empty());
    /* root zero */
    auto rz = ip_integer_roots_monic(IntPoly::from_long({0, 0, 1}));
    CHECK(rz == std::vector<Int>({0}));
}

TEST_CASE("a totally complex sextic") {
    /* irreducible, no real embeddings, negative discriminant with odd square part */
    IntPoly f = IntPoly::from_long({4, -14, 21, -15, 10, -3, 1});
    CHECK(ip_is_irreducible_monic(f));
    CHECK(ip_count_real_roots(f) == 0);
    Int d = ip_discriminant(f);
    CHECK(d < 0);
    CHECK(fdiv_r(abs(d), Int(59)) == 0);
}

TEST_CASE("reduction mod p bridges integer and fp polynomials") {
    IntPoly f = IntPoly::from_long({-7, 3, 10, 1});
    auto fb = ip_mod_p(f, 5);
    CHECK(fb == FpPoly(5, {3, 3, 0, 1}));
    CHECK(ip_mod_p(IntPoly::from_long({5, 10}), 5).is_zero());
}
