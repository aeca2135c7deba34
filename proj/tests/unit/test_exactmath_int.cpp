#include "doctest.h"
#include "exactmath/int_types.hpp"
#include "exactmath/int_mat.hpp"
#include "exactmath/fp_mat.hpp"
#include "exactmath/lll.hpp"
#include "exactmath/errors.hpp"

#include <algorithm>
#include <functional>
#include <set>

using namespace msel;

namespace {

IntMat make_mat(long r, long c, std::vector<long> v) {
    IntMat m(r, c);
    for (long i = 0; i < r * c; i++) m.a[i] = v[i];
    return m;
}

FpMat make_fp(u64 p, long r, long c, std::vector<u64> v) {
    FpMat m(p, r, c);
    m.a = std::move(v);
    return m;
}

/* independent oracle: gcd of all k-by-k minors of m (0 if all vanish) */
Int minor_gcd(const IntMat& m, long k) {
    std::vector<long> rows(k), cols(k);
    Int g = 0;
    std::function<void(long, long)> pick_cols = [&](long start, long idx) {
        if (idx == k) {
            IntMat sub(k, k);
            for (long i = 0; i < k; i++)
                for (long j = 0; j < k; j++) sub.at(i, j) = m.at(rows[i], cols[j]);
            g = gcd(g, det_int(sub));
            return;
        }
        for (long c = start; c < m.ncols; c++) { cols[idx] = c; pick_cols(c + 1, idx + 1); }
    };
    std::function<void(long, long)> pick_rows = [&](long start, long idx) {
        if (idx == k) { pick_cols(0, 0); return; }
        for (long r = start; r < m.nrows; r++) { rows[idx] = r; pick_rows(r + 1, idx + 1); }
    };
    pick_rows(0, 0);
    return g;
}

bool is_hnf_shape(const IntMat& h) {
    long last_pivot = -1;
    for (long i = 0; i < h.nrows; i++) {
        long j = 0;
        while (j < h.ncols && h.at(i, j) == 0) j++;
        if (j == h.ncols) {
            /* zero rows only at the bottom */
            for (long i2 = i; i2 < h.nrows; i2++)
                for (long j2 = 0; j2 < h.ncols; j2++)
                    if (h.at(i2, j2) != 0) return false;
            return true;
        }
        if (j <= last_pivot) return false;
        if (h.at(i, j) <= 0) return false;
        for (long i2 = 0; i2 < i; i2++)
            if (h.at(i2, j) < 0 || h.at(i2, j) >= h.at(i, j)) return false;
        last_pivot = j;
    }
    return true;
}

} // namespace

TEST_CASE("factor_int recovers prime powers") {
    auto f = factor_int(Int(1200));
    REQUIRE(f.size() == 3);
    CHECK(f[0] == std::pair<Int, int>(Int(2), 4));
    CHECK(f[1] == std::pair<Int, int>(Int(3), 1));
    CHECK(f[2] == std::pair<Int, int>(Int(5), 2));

    /* product of two 10-digit primes */
    Int p("1000000007"), q("1000000009");
    auto g = factor_int(p * q);
    REQUIRE(g.size() == 2);
    CHECK(g[0].first == p);
    CHECK(g[1].first == q);

    Int n = 1;
    for (auto& [pr, e] : factor_int(Int(-987654312))) {
        CHECK(is_probable_prime(pr));
        for (int i = 0; i < e; i++) n *= pr;
    }
    CHECK(n == 987654312);
}

TEST_CASE("integer helpers") {
    CHECK(fdiv_q(Int(-7), Int(2)) == -4);
    CHECK(fdiv_r(Int(-7), Int(2)) == 1);
    CHECK(rdiv_q(Int(7), Int(2)) == 3);   /* ties toward zero */
    CHECK(rdiv_q(Int(9), Int(4)) == 2);
    CHECK(rdiv_q(Int(-9), Int(4)) == -2);
    CHECK(invert_mod(Int(3), Int(7)) == 5);
    CHECK_THROWS_AS(invert_mod(Int(2), Int(4)), std::domain_error);
    Int r;
    CHECK(iroot_exact(Int(27), 3, r));
    CHECK(r == 3);
    CHECK(!iroot_exact(Int(28), 3, r));
    auto ps = primes_up_to(20);
    CHECK(ps == std::vector<long>({2, 3, 5, 7, 11, 13, 17, 19}));
}

TEST_CASE("hnf: fixed example and full verification") {
    auto m = make_mat(2, 2, {2, 0, 1, 1});
    auto res = hnf(m);
    CHECK(res.h == make_mat(2, 2, {1, 1, 0, 2}));
    /* u*m = h with u unimodular proves lattice equality */
    CHECK(mat_mul(res.u, m) == res.h);
    CHECK(abs(det_int(res.u)) == 1);
    CHECK(is_hnf_shape(res.h));
    /* idempotent on already-reduced input */
    CHECK(hnf(res.h).h == res.h);
}

TEST_CASE("hnf: rectangular, rank deficient, negative entries") {
    auto m = make_mat(3, 2, {4, -6, 2, 2, -2, 10});
    auto res = hnf(m);
    CHECK(mat_mul(res.u, m) == res.h);
    CHECK(abs(det_int(res.u)) == 1);
    CHECK(is_hnf_shape(res.h));

    auto lat = hnf_lattice(make_mat(3, 3, {1, 2, 3, 2, 4, 6, 0, 0, 5}));
    CHECK(lat.nrows == 2); /* rank 2: second row dependent */
    CHECK(is_hnf_shape(lat));
    CHECK(lattice_contains(lat, {1, 2, 3}));
    CHECK(lattice_contains(lat, {3, 6, 14}));
    CHECK(!lattice_contains(lat, {0, 1, 0}));
}

TEST_CASE("snf: invariants match gcd-of-minors oracle") {
    auto m = make_mat(2, 2, {2, 4, 6, 8});
    auto res = snf(m);
    /* oracle: d_1 = gcd of entries, d_1*d_2 = gcd of 2x2 minors */
    Int g1 = minor_gcd(m, 1), g2 = minor_gcd(m, 2);
    REQUIRE(res.invariants.size() == 2);
    CHECK(res.invariants[0] == g1);
    CHECK(res.invariants[1] * res.invariants[0] == abs(g2));
    CHECK(res.invariants == std::vector<Int>({2, 4}));
    CHECK(mat_mul(mat_mul(res.u, m), res.v) == res.d);
    CHECK(abs(det_int(res.u)) == 1);
    CHECK(abs(det_int(res.v)) == 1);
}

TEST_CASE("snf: rectangular with zero invariant") {
    auto m = make_mat(2, 3, {2, 4, 6, 10, 6, 2});
    auto res = snf(m);
    CHECK(mat_mul(mat_mul(res.u, m), res.v) == res.d);
    CHECK(abs(det_int(res.u)) == 1);
    CHECK(abs(det_int(res.v)) == 1);
    for (size_t i = 0; i + 1 < res.elem_div.size(); i++) {
        if (res.elem_div[i + 1] != 0)
            CHECK(fdiv_r(res.elem_div[i + 1], res.elem_div[i] == 0 ? Int(1) : res.elem_div[i]) == 0);
    }
    /* rank 2, so exactly 2 nonzero elementary divisors */
    long nonzero = 0;
    for (auto& d : res.elem_div) if (d != 0) nonzero++;
    CHECK(nonzero == 2);
    CHECK(minor_gcd(m, 1) == res.elem_div[0]);
}

TEST_CASE("int_kernel is saturated") {
    auto k = int_kernel(make_mat(1, 2, {2, 4}));
    REQUIRE(k.nrows == 1);
    /* saturated: (2,-1) up to sign, not (4,-2) */
    CHECK(abs(k.at(0, 0)) == 2);
    CHECK(abs(k.at(0, 1)) == 1);

    auto m = make_mat(2, 3, {1, 2, 3, 2, 4, 6});
    auto k2 = int_kernel(m);
    REQUIRE(k2.nrows == 2);
    for (long i = 0; i < k2.nrows; i++) {
        std::vector<Int> v(3);
        for (long j = 0; j < 3; j++) v[j] = k2.at(i, j);
        auto mv = mat_vec(m, v);
        for (auto& x : mv) CHECK(x == 0);
    }
}

TEST_CASE("lattice_mod_kernel and lattice indices") {
    /* {(x,y) : x + y = 0 mod 2} has index 2 in Z^2 */
    auto lat = lattice_mod_kernel(make_mat(1, 2, {1, 1}), Int(2));
    REQUIRE(lat.nrows == 2);
    CHECK(det_int(lat) != 0);
    CHECK(abs(det_int(lat)) == 2);
    CHECK(lattice_contains(lat, {1, 1}));
    CHECK(lattice_contains(lat, {2, 0}));
    CHECK(!lattice_contains(lat, {1, 0}));
    CHECK(lattice_index(IntMat::identity(2), lat) == 2);

    auto coords = lattice_coords(lat, {3, 1});
    REQUIRE(coords.has_value());
    auto back = mat_vec(transpose(lat), *coords);
    CHECK(back == std::vector<Int>({3, 1}));
    CHECK(!lattice_coords(lat, {1, 2}).has_value());
}

TEST_CASE("determinants agree between exact integer and rational elimination") {
    auto m = make_mat(3, 3, {2, -1, 0, 3, 4, 5, 1, 1, -2});
    Int di = det_int(m);
    Rat dr = det_rat(RatMat::from_int(m));
    CHECK(Rat(di) == dr);
    CHECK(di == -37);

    auto sing = make_mat(2, 2, {1, 2, 2, 4});
    CHECK(det_int(sing) == 0);
    CHECK(rank_rat(RatMat::from_int(sing)) == 1);
}

TEST_CASE("solve_rat and inverse_rat") {
    RatMat a(2, 2);
    a.at(0, 0) = 1; a.at(0, 1) = 2; a.at(1, 0) = 3; a.at(1, 1) = 5;
    auto x = solve_rat(a, {Rat(1), Rat(2)});
    CHECK(x[0] == Rat(-1));
    CHECK(x[1] == Rat(1));
    auto inv = inverse_rat(a);
    auto prod = mat_mul(a, inv);
    CHECK(prod.at(0, 0) == 1);
    CHECK(prod.at(0, 1) == 0);
    CHECK(prod.at(1, 1) == 1);
    RatMat s(2, 2);
    s.at(0, 0) = 1; s.at(0, 1) = 2; s.at(1, 0) = 2; s.at(1, 1) = 4;
    CHECK_THROWS_AS(inverse_rat(s), math_error);
}

TEST_CASE("fp arithmetic scalars") {
    CHECK(powmod_u64(2, 10, 1000003) == 1024);
    CHECK(mulmod_u64(1000002, 1000002, 1000003) == 1);
    CHECK(invmod_u64(3, 7) == 5);
    for (u64 a = 1; a < 13; a++) CHECK(mulmod_u64(a, invmod_u64(a, 13), 13) == 1);
}

TEST_CASE("fp_kernel of the all-ones 2x2 matrix mod 2") {
    auto k = fp_kernel(make_fp(2, 2, 2, {1, 1, 1, 1}));
    REQUIRE(k.nrows == 1);
    CHECK(k.at(0, 0) == 1);
    CHECK(k.at(0, 1) == 1);
}

TEST_CASE("fp_rref, rank, solve, inverse") {
    auto a = make_fp(5, 3, 3, {1, 2, 3, 4, 0, 1, 2, 4, 2}); /* det = 32 = 2 mod 5 */
    CHECK(fp_rank(a) == 3);
    auto inv = fp_inverse(a);
    CHECK(fp_mul(a, inv).is_identity());

    auto sol = fp_solve(a, {1, 2, 3});
    REQUIRE(sol.has_value());
    auto chk = fp_mat_vec(a, *sol);
    CHECK(chk == std::vector<u64>({1, 2, 3}));

    auto reg = make_fp(3, 2, 2, {1, 2, 2, 2}); /* det = -2 = 1 mod 3 */
    CHECK(fp_rank(reg) == 2);
    auto bad = make_fp(3, 2, 2, {1, 2, 2, 1}); /* det = -3 = 0 mod 3 */
    CHECK(fp_rank(bad) == 1);
    CHECK(!fp_solve(bad, {0, 1}).has_value());
    CHECK_THROWS_AS(fp_inverse(bad), math_error);
}

TEST_CASE("fp row spaces, annihilator, intersection") {
    auto a = make_fp(5, 2, 3, {1, 2, 3, 0, 1, 4});
    auto ann = fp_annihilator(a);
    CHECK(ann.nrows + fp_rank(a) == 3);
    /* every annihilator row is orthogonal to every row of a */
    for (long i = 0; i < ann.nrows; i++)
        for (long r = 0; r < a.nrows; r++) {
            u64 dot = 0;
            for (long j = 0; j < 3; j++) dot = (dot + mulmod_u64(ann.at(i, j), a.at(r, j), 5)) % 5;
            CHECK(dot == 0);
        }

    auto b = make_fp(5, 2, 3, {1, 0, 0, 0, 1, 0});
    auto c = make_fp(5, 2, 3, {0, 1, 0, 0, 0, 1});
    auto meet = fp_row_space_intersect(b, c);
    REQUIRE(meet.nrows == 1);
    CHECK(meet.at(0, 0) == 0);
    CHECK(meet.at(0, 2) == 0);
    CHECK(meet.at(0, 1) != 0);

    CHECK(fp_same_row_space(a, fp_row_space(a)));
    CHECK(!fp_same_row_space(a, b));
}

TEST_CASE("fp_pow by repeated squaring") {
    auto a = make_fp(7, 2, 2, {1, 1, 0, 1});
    auto a7 = fp_pow(a, 7);
    CHECK(a7.at(0, 1) == 0); /* (1 1;0 1)^7 = (1 7;0 1) = identity mod 7 */
    CHECK(a7.is_identity());
    CHECK(fp_pow(a, 0).is_identity());
}

TEST_CASE("lll preserves the lattice and shrinks the basis") {
    auto m = make_mat(3, 3, {1, 0, 0, 4, 1, 0, 27, 9, 1});
    auto res = lll_reduce(m);
    CHECK(mat_mul(res.u, m) == res.basis);
    CHECK(abs(det_int(res.u)) == 1);
    CHECK(abs(det_int(res.basis)) == abs(det_int(m)));
    CHECK(hnf_lattice(res.basis) == hnf_lattice(m));
    /* first reduced vector no longer than the shortest input row */
    auto norm2 = [](const IntMat& b, long i) {
        Int s = 0;
        for (long j = 0; j < b.ncols; j++) s += b.at(i, j) * b.at(i, j);
        return s;
    };
    Int best_in = norm2(m, 0);
    for (long i = 1; i < 3; i++) best_in = std::min(best_in, norm2(m, i));
    CHECK(norm2(res.basis, 0) <= best_in);

    /* with an explicit positive definite form */
    auto form = make_mat(2, 2, {2, 1, 1, 2});
    auto res2 = lll_reduce(make_mat(2, 2, {5, 3, 7, 4}), form);
    CHECK(mat_mul(res2.u, make_mat(2, 2, {5, 3, 7, 4})) == res2.basis);
    CHECK(abs(det_int(res2.u)) == 1);

    CHECK_THROWS_AS(lll_reduce(make_mat(2, 2, {1, 2, 2, 4})), math_error);
}

TEST_CASE("short vector enumeration in the square lattice") {
    RatMat q = RatMat::identity(2);
    auto vs = enumerate_short_vectors(q, Rat(4), 100);
    /* up to sign: (1,0),(0,1),(1,1),(1,-1),(2,0),(0,2) */
    CHECK(vs.size() == 6);
    std::set<std::pair<long, long>> seen;
    for (auto& v : vs) {
        Int n2 = v[0] * v[0] + v[1] * v[1];
        CHECK(n2 >= 1);
        CHECK(n2 <= 4);
        seen.insert({v[0].get_si(), v[1].get_si()});
    }
    CHECK(seen.size() == 6);
    CHECK_THROWS_AS(enumerate_short_vectors(q, Rat(4), 3), ceiling_error);
}
