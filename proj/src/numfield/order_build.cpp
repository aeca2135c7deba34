#include "numfield/number_field.hpp"
#include "exactmath/fp_mat.hpp"
#include "exactmath/fp_poly.hpp"
#include "exactmath/errors.hpp"

namespace msel {

namespace {

u64 to_u64_prime(const Int& q) {
    if (!q.fits_ulong_p()) throw ceiling_error("maximal_order: prime exceeds word size");
    return q.get_ui();
}

/* lift a monic F_q polynomial to Z with coefficients in [0, q) */
IntPoly lift_monic(const FpPoly& a) {
    std::vector<Int> c(a.c.size());
    for (size_t i = 0; i < a.c.size(); i++) c[i] = Int((unsigned long)a.c[i]);
    return IntPoly(std::move(c));
}

/* z = x * y in the order with rep matrices, coordinates mod q */
std::vector<u64> mult_vec_mod(const std::vector<IntMat>& rep, const std::vector<u64>& x,
                              const std::vector<u64>& y, u64 q) {
    long n = (long)x.size();
    std::vector<u64> z(n, 0);
    for (long i = 0; i < n; i++) {
        if (x[i] == 0) continue;
        for (long j = 0; j < n; j++) {
            if (y[j] == 0) continue;
            u64 c = mulmod_u64(x[i], y[j], q);
            for (long k = 0; k < n; k++) {
                u64 r = (u64)fdiv_r(rep[i].at(j, k), Int((unsigned long)q)).get_ui();
                z[k] = (z[k] + mulmod_u64(c, r, q)) % q;
            }
        }
    }
    return z;
}

struct OrderStep {
    IntMat num;
    Int den;
};

OrderStep canonical_order(IntMat lat, Int den) {
    IntMat h = hnf_lattice(lat);
    Int g = den;
    for (auto& x : h.a) g = gcd(g, x);
    if (g > 1) {
        for (auto& x : h.a) x /= g;
        den /= g;
    }
    return {h, den};
}

/* one Pohst-Zassenhaus enlargement of the order (B, d) at q; returns canonical basis */
OrderStep enlarge_once(const IntPoly& f, const IntMat& B, const Int& d, const Int& qz) {
    long n = f.deg();
    u64 q = to_u64_prime(qz);
    auto rep = order_rep_matrices(f, B, d);

    /* coordinates of 1 in the current basis */
    RatMat br(n, n);
    for (long i = 0; i < n; i++)
        for (long j = 0; j < n; j++) br.at(i, j) = make_rat(B.at(i, j), d);
    RatMat binv = inverse_rat(br);
    std::vector<u64> one_mod(n);
    for (long k = 0; k < n; k++) {
        if (binv.at(0, k).get_den() != 1) throw math_error("enlarge_once: 1 outside order");
        one_mod[k] = (u64)fdiv_r(binv.at(0, k).get_num(), qz).get_ui();
    }

    /* q-power Frobenius matrix on O/qO, then iterate to reach q^m >= n */
    FpMat frob(q, n, n);
    for (long i = 0; i < n; i++) {
        std::vector<u64> e(n, 0);
        e[i] = 1;
        std::vector<u64> acc = one_mod;
        u64 k = q;
        std::vector<u64> base = e;
        while (k > 0) {
            if (k & 1) acc = mult_vec_mod(rep, acc, base, q);
            base = mult_vec_mod(rep, base, base, q);
            k >>= 1;
        }
        for (long j = 0; j < n; j++) frob.at(i, j) = acc[j];
    }
    long m = 0;
    Int qa(1);
    while (qa < n) { qa *= qz; m++; }
    FpMat fm = fp_pow(frob, (u64)m);

    /* radical mod q: row vectors x with x * fm = 0 */
    FpMat rad = fp_kernel(fp_transpose(fm));

    IntMat jgens(rad.nrows + n, n);
    for (long i = 0; i < rad.nrows; i++)
        for (long j = 0; j < n; j++) jgens.at(i, j) = Int((unsigned long)rad.at(i, j));
    for (long i = 0; i < n; i++) jgens.at(rad.nrows + i, i) = qz;
    IntMat J = hnf_lattice(jgens);

    /* idealizer: y with y*J <= q*J, i.e. J-coordinates of y*b_k vanish mod q */
    FpMat C(q, n * n, n);
    for (long i = 0; i < n; i++) {
        for (long k = 0; k < n; k++) {
            std::vector<Int> prod(n, 0);
            for (long t = 0; t < n; t++) {
                if (J.at(k, t) == 0) continue;
                for (long s = 0; s < n; s++) prod[s] += J.at(k, t) * rep[i].at(t, s);
            }
            auto coords = lattice_coords(J, prod);
            if (!coords) throw math_error("maximal_order: radical is not an ideal");
            for (long t = 0; t < n; t++)
                C.at(k * n + t, i) = (u64)fdiv_r((*coords)[t], qz).get_ui();
        }
    }
    FpMat ker = fp_kernel(C);

    IntMat ygens(ker.nrows + n, n);
    for (long i = 0; i < ker.nrows; i++)
        for (long j = 0; j < n; j++) ygens.at(i, j) = Int((unsigned long)ker.at(i, j));
    for (long i = 0; i < n; i++) ygens.at(ker.nrows + i, i) = qz;
    IntMat Y = hnf_lattice(ygens);

    return canonical_order(mat_mul(Y, B), d * qz);
}

} // namespace

bool equation_order_q_maximal(const IntPoly& f, const Int& qz) {
    u64 q = to_u64_prime(qz);
    FpPoly fbar = ip_mod_p(f, q);
    auto fac = fpp_factor(fbar);
    FpPoly gstar = FpPoly::constant(q, 1);
    for (auto& [g, e] : fac) gstar = fpp_mul(gstar, g);
    auto [hstar, hrem] = fpp_divrem(fbar, gstar);
    if (!hrem.is_zero()) throw math_error("equation_order_q_maximal: radical division");
    IntPoly gl = lift_monic(gstar), hl = lift_monic(hstar);
    IntPoly prod = ip_mul(gl, hl);
    IntPoly diff = ip_sub(prod, f);
    std::vector<Int> fc(diff.c.size());
    for (size_t i = 0; i < diff.c.size(); i++) {
        if (fdiv_r(diff.c[i], qz) != 0) throw math_error("equation_order_q_maximal: lift");
        fc[i] = diff.c[i] / qz;
    }
    FpPoly Fbar = ip_mod_p(IntPoly(std::move(fc)), q);
    FpPoly g1 = fpp_gcd(gstar, hstar);
    FpPoly g2 = fpp_gcd(g1, Fbar);
    return g2.deg() == 0;
}

OrderBasis maximal_order(const IntPoly& f) {
    long n = f.deg();
    IntMat B = IntMat::identity(n);
    Int d(1);
    if (n == 1) return {B, d};
    Int D = ip_discriminant(f);
    if (D == 0) throw math_error("maximal_order: zero discriminant");
    auto fac = factor_int(D);
    for (auto& [q, e] : fac) {
        if (e < 2) continue;
        if (B == IntMat::identity(n) && d == 1 && equation_order_q_maximal(f, q)) continue;
        while (true) {
            auto next = enlarge_once(f, B, d, q);
            if (next.num == B && next.den == d) break;
            B = next.num;
            d = next.den;
        }
    }
    return {B, d};
}

} // namespace msel
