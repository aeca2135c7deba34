#include "numfield/ideals.hpp"
#include "exactmath/fp_mat.hpp"
#include "exactmath/errors.hpp"

#include <algorithm>

namespace msel {

IntMat ideal_from_elements(const NumberField& K, const std::vector<NFElem>& gens,
                           const Int& rational_gen) {
    long n = K.n;
    IntMat rows((long)gens.size() * n + (rational_gen != 0 ? n : 0), n);
    long r = 0;
    for (auto& g : gens) {
        if (!g.is_integral()) throw math_error("ideal_from_elements: integral generators required");
        IntMat m = K.mul_matrix(g);
        for (long j = 0; j < n; j++, r++)
            for (long k = 0; k < n; k++) rows.at(r, k) = m.at(j, k);
    }
    if (rational_gen != 0)
        for (long j = 0; j < n; j++, r++) rows.at(r, j) = rational_gen;
    IntMat h = hnf_lattice(rows);
    if (h.nrows != n) throw math_error("ideal_from_elements: not full rank");
    return h;
}

IntMat principal_ideal(const NumberField& K, const NFElem& x) {
    return ideal_from_elements(K, {x}, Int(0));
}

IntMat ideal_mul(const NumberField& K, const IntMat& a, const IntMat& b) {
    long n = K.n;
    IntMat rows(n * n, n);
    for (long i = 0; i < n; i++) {
        NFElem ai(std::vector<Int>(a.a.begin() + i * n, a.a.begin() + (i + 1) * n));
        IntMat m = K.mul_matrix(ai);
        /* rows of b times mult-by-ai */
        for (long j = 0; j < n; j++)
            for (long k = 0; k < n; k++) {
                Int s(0);
                for (long t = 0; t < n; t++) s += b.at(j, t) * m.at(t, k);
                rows.at(i * n + j, k) = s;
            }
    }
    IntMat h = hnf_lattice(rows);
    if (h.nrows != n) throw math_error("ideal_mul: not full rank");
    return h;
}

IntMat ideal_pow(const NumberField& K, const IntMat& a, long k) {
    IntMat r = IntMat::identity(K.n);
    for (long i = 0; i < k; i++) r = (i == 0) ? a : ideal_mul(K, r, a);
    return r;
}

IntMat ideal_add(const IntMat& a, const IntMat& b) {
    IntMat h = hnf_lattice(vstack(a, b));
    return h;
}

Int ideal_norm(const IntMat& a) { return abs(det_int(a)); }

bool ideal_contains(const IntMat& a, const NFElem& x) {
    if (!x.is_integral()) throw math_error("ideal_contains: integral element required");
    return lattice_contains(a, x.v);
}

bool ideal_subset(const IntMat& a, const IntMat& b) {
    for (long i = 0; i < a.nrows; i++) {
        std::vector<Int> v(a.ncols);
        for (long j = 0; j < a.ncols; j++) v[j] = a.at(i, j);
        if (!lattice_contains(b, v)) return false;
    }
    return true;
}

std::vector<Int> reduce_mod_hnf(const IntMat& h, std::vector<Int> v) {
    /* rows are upper triangular: row i has pivot h(i,i) and entries at j >= i,
       so ascending order leaves each reduced coordinate untouched afterwards */
    long n = h.nrows;
    for (long i = 0; i < n; i++) {
        if (h.at(i, i) == 0) throw math_error("reduce_mod_hnf: singular lattice");
        Int t = fdiv_q(v[i], h.at(i, i));
        if (t != 0)
            for (long j = i; j < h.ncols; j++) v[j] -= t * h.at(i, j);
    }
    return v;
}

std::optional<std::vector<Int>> solve_mul_congruence(const IntMat& mt, const std::vector<Int>& a,
                                                     const IntMat& lambda) {
    long n = mt.ncols;
    IntMat M = vstack(mt, lambda);
    auto hr = hnf(M);
    long r = 0;
    for (long i = 0; i < hr.h.nrows; i++) {
        bool nz = false;
        for (long j = 0; j < n; j++) if (hr.h.at(i, j) != 0) { nz = true; break; }
        if (nz) r = i + 1;
    }
    IntMat hb(r, n);
    for (long i = 0; i < r; i++)
        for (long j = 0; j < n; j++) hb.at(i, j) = hr.h.at(i, j);
    auto c = lattice_coords(hb, a);
    if (!c) return std::nullopt;
    std::vector<Int> z(mt.nrows, 0);
    for (long k = 0; k < mt.nrows; k++)
        for (long i = 0; i < r; i++) z[k] += (*c)[i] * hr.u.at(i, k);
    return z;
}

std::vector<Int> crt_elements(const std::vector<std::vector<Int>>& as,
                              const std::vector<IntMat>& lambdas, const NumberField& K) {
    if (as.empty() || as.size() != lambdas.size()) throw math_error("crt_elements: shape");
    std::vector<Int> x = as[0];
    IntMat mod = lambdas[0];
    for (size_t i = 1; i < as.size(); i++) {
        /* x + y*mod = as[i] (mod lambdas[i]) */
        std::vector<Int> rhs(K.n);
        for (long j = 0; j < K.n; j++) rhs[j] = as[i][j] - x[j];
        auto y = solve_mul_congruence(mod, rhs, lambdas[i]);
        if (!y) throw math_error("crt_elements: moduli not comaximal");
        for (long k = 0; k < K.n; k++)
            for (long j = 0; j < K.n; j++) x[j] += (*y)[k] * mod.at(k, j);
        mod = ideal_mul(K, mod, lambdas[i]);
        x = reduce_mod_hnf(mod, std::move(x));
    }
    return x;
}

std::vector<u64> ResidueField::qcoords(const NFElem& x) const {
    if (!x.is_integral()) throw math_error("qcoords: integral element required");
    auto v = reduce_mod_hnf(plat, x.v);
    std::vector<u64> out(free_pos.size());
    for (size_t i = 0; i < free_pos.size(); i++) {
        out[i] = (u64)v[free_pos[i]].get_ui() % q;
        v[free_pos[i]] = 0;
    }
    for (auto& t : v)
        if (t != 0) throw math_error("qcoords: reduction left non-free residue");
    return out;
}

FpPoly ResidueField::to_fq(const NFElem& x) const {
    auto qc = qcoords(x);
    /* solve c * zpow = qc */
    auto c = fp_solve(fp_transpose(zpow), qc);
    if (!c) throw math_error("to_fq: power basis solve failed");
    return FpPoly(q, *c);
}

NFElem ResidueField::lift(const NumberField& K, const FpPoly& a) const {
    std::vector<u64> c(fdeg, 0);
    for (long i = 0; i <= a.deg(); i++) c[i] = a.c[i];
    std::vector<Int> v(K.n, 0);
    for (long i = 0; i < fdeg; i++) {
        u64 s = 0;
        for (long k = 0; k < fdeg; k++) s = (s + mulmod_u64(c[k], zpow.at(k, i), q)) % q;
        v[free_pos[i]] = Int((unsigned long)s);
    }
    return NFElem(std::move(v));
}

namespace {

/* quotient helper for O modulo a lattice with diagonal entries 1 or q */
struct QuotCtx {
    const NumberField* K;
    u64 q;
    IntMat lat;
    std::vector<long> pos; /* free coordinates */

    long dim() const { return (long)pos.size(); }

    std::vector<u64> project(const std::vector<Int>& w) const {
        auto v = reduce_mod_hnf(lat, w);
        std::vector<u64> out(pos.size());
        for (size_t i = 0; i < pos.size(); i++) out[i] = (u64)v[pos[i]].get_ui() % q;
        return out;
    }

    std::vector<Int> lift(const std::vector<u64>& c) const {
        std::vector<Int> v(K->n, 0);
        for (size_t i = 0; i < pos.size(); i++) v[pos[i]] = Int((unsigned long)c[i]);
        return v;
    }

    std::vector<u64> mul(const std::vector<u64>& a, const std::vector<u64>& b) const {
        NFElem x(lift(a)), y(lift(b));
        return project(K->mul(x, y).v);
    }

    std::vector<u64> one() const { return project(K->one().v); }
};

QuotCtx make_quot(const NumberField& K, u64 q, const IntMat& lat) {
    QuotCtx Q{&K, q, lat, {}};
    for (long i = 0; i < K.n; i++) {
        if (lat.at(i, i) == 1) continue;
        if (lat.at(i, i) != Int((unsigned long)q))
            throw math_error("make_quot: lattice not elementary over q");
        Q.pos.push_back(i);
    }
    return Q;
}

/* minimal polynomial of the quotient element z over F_q */
FpPoly quot_min_poly(const QuotCtx& Q, const std::vector<u64>& z) {
    long d = Q.dim();
    std::vector<std::vector<u64>> pows;
    pows.push_back(Q.one());
    for (long k = 1; k <= d; k++) pows.push_back(Q.mul(pows.back(), z));
    for (long k = 1; k <= d; k++) {
        /* is z^k dependent on lower powers? */
        FpMat m(Q.q, k, d);
        for (long i = 0; i < k; i++)
            for (long j = 0; j < d; j++) m.at(i, j) = pows[i][j];
        auto sol = fp_solve(fp_transpose(m), pows[k]);
        if (sol) {
            std::vector<u64> c(k + 1, 0);
            for (long i = 0; i < k; i++) c[i] = (Q.q - (*sol)[i]) % Q.q;
            c[k] = 1;
            return FpPoly(Q.q, c);
        }
    }
    throw math_error("quot_min_poly: no dependency found");
}

ResidueField build_residue_field(const NumberField& K, u64 q, const IntMat& plat) {
    ResidueField rf;
    rf.q = q;
    rf.plat = plat;
    QuotCtx Q = make_quot(K, q, plat);
    rf.free_pos = Q.pos;
    rf.fdeg = Q.dim();
    long f = rf.fdeg;

    /* deterministic sweep for a primitive element */
    std::vector<std::vector<u64>> cands;
    for (long i = 0; i < f; i++) {
        std::vector<u64> c(f, 0);
        c[i] = 1;
        cands.push_back(c);
    }
    for (long i = 0; i < f; i++)
        for (long j = i + 1; j < f; j++)
            for (u64 s = 1; s < q && s < 8; s++) {
                std::vector<u64> c(f, 0);
                c[i] = 1;
                c[j] = s;
                cands.push_back(c);
            }
    /* exhaustive fallback */
    if (f >= 2) {
        std::vector<u64> ctr(f, 0);
        while (true) {
            long i = 0;
            while (i < f && ctr[i] + 1 == q) { ctr[i] = 0; i++; }
            if (i == f) break;
            ctr[i]++;
            cands.push_back(ctr);
        }
    }
    for (auto& zc : cands) {
        FpPoly mp = quot_min_poly(Q, zc);
        if (mp.deg() != f) continue;
        rf.zmin = mp;
        rf.zpow = FpMat(q, f, f);
        std::vector<u64> pw = Q.one();
        for (long k = 0; k < f; k++) {
            for (long j = 0; j < f; j++) rf.zpow.at(k, j) = pw[j];
            pw = Q.mul(pw, zc);
        }
        rf.zpow_inv = fp_inverse(rf.zpow);
        return rf;
    }
    throw math_error("build_residue_field: no primitive element found");
}

long rational_val(Int x, const Int& q) {
    long v = 0;
    while (x != 0 && fdiv_r(x, q) == 0) { x /= q; v++; }
    return v;
}

/* v_P(x) for integral nonzero x using the anti-uniformizer */
long valuation_integral(const NumberField& K, const PrimeIdeal& P, NFElem x) {
    long v = 0;
    while (true) {
        NFElem y = K.mul(x, P.tau);
        bool divisible = true;
        for (auto& c : y.v)
            if (fdiv_r(c, P.q * y.den) != 0) { divisible = false; break; }
        if (!divisible) return v;
        for (auto& c : y.v) c /= P.q * y.den;
        y.den = 1;
        x = std::move(y);
        v++;
    }
}

} // namespace

std::vector<PrimeIdeal> factor_prime(const NumberField& K, const Int& qz) {
    if (!is_probable_prime(qz)) throw math_error("factor_prime: composite modulus");
    if (!qz.fits_ulong_p()) throw ceiling_error("factor_prime: prime exceeds word size");
    u64 q = qz.get_ui();
    long n = K.n;
    std::vector<PrimeIdeal> out;

    if (fdiv_r(K.index, qz) != 0) {
        /* unramified-index case: factor f mod q */
        FpPoly fbar = ip_mod_p(K.f, q);
        NFElem th = K.theta();
        for (auto& [g, e] : fpp_factor(fbar)) {
            std::vector<Int> gl(g.c.size());
            for (size_t i = 0; i < g.c.size(); i++) gl[i] = Int((unsigned long)g.c[i]);
            NFElem gt = K.eval_poly(IntPoly(std::move(gl)), th);
            PrimeIdeal P;
            P.q = qz;
            P.e = e;
            P.fdeg = g.deg();
            P.h = ideal_from_elements(K, {gt}, qz);
            out.push_back(std::move(P));
        }
    } else {
        /* radical of qO via Frobenius kernel */
        std::vector<u64> onec(n);
        {
            NFElem o = K.one();
            for (long i = 0; i < n; i++) onec[i] = (u64)fdiv_r(o.v[i], qz).get_ui();
        }
        FpMat frob(q, n, n);
        for (long i = 0; i < n; i++) {
            std::vector<u64> acc = onec, base(n, 0);
            base[i] = 1;
            u64 k = q;
            auto mulv = [&](const std::vector<u64>& x, const std::vector<u64>& y) {
                std::vector<u64> z(n, 0);
                for (long a = 0; a < n; a++) {
                    if (x[a] == 0) continue;
                    for (long b = 0; b < n; b++) {
                        if (y[b] == 0) continue;
                        u64 c = mulmod_u64(x[a], y[b], q);
                        for (long t = 0; t < n; t++) {
                            u64 r = (u64)fdiv_r(K.rep[a].at(b, t), qz).get_ui();
                            z[t] = (z[t] + mulmod_u64(c, r, q)) % q;
                        }
                    }
                }
                return z;
            };
            while (k > 0) {
                if (k & 1) acc = mulv(acc, base);
                base = mulv(base, base);
                k >>= 1;
            }
            for (long j = 0; j < n; j++) frob.at(i, j) = acc[j];
        }
        long m = 0;
        {
            Int qa(1);
            while (qa < n) { qa *= qz; m++; }
        }
        FpMat fm = fp_pow(frob, (u64)m);
        FpMat rad = fp_kernel(fp_transpose(fm));
        IntMat jg(rad.nrows + n, n);
        for (long i = 0; i < rad.nrows; i++)
            for (long j = 0; j < n; j++) jg.at(i, j) = Int((unsigned long)rad.at(i, j));
        for (long i = 0; i < n; i++) jg.at(rad.nrows + i, i) = qz;
        IntMat J = hnf_lattice(jg);

        QuotCtx A = make_quot(K, q, J);
        long dA = A.dim();
        /* Frobenius on the semisimple quotient A */
        FpMat FA(q, dA, dA);
        for (long i = 0; i < dA; i++) {
            std::vector<u64> e(dA, 0);
            e[i] = 1;
            auto x = e;
            /* x^q by repeated multiplication via square-and-multiply */
            std::vector<u64> acc = A.one(), base = x;
            u64 k = q;
            while (k > 0) {
                if (k & 1) acc = A.mul(acc, base);
                base = A.mul(base, base);
                k >>= 1;
            }
            for (long j = 0; j < dA; j++) FA.at(i, j) = acc[j];
        }
        /* fixed space of Frobenius: x with x*FA = x */
        FpMat fmi = FA;
        for (long i = 0; i < dA; i++)
            fmi.at(i, i) = (fmi.at(i, i) + q - 1) % q;
        FpMat fixed = fp_kernel(fp_transpose(fmi)); /* rows span ker */
        long s = fixed.nrows;

        /* split the fixed algebra R = F_q^s into primitive idempotents */
        auto mul_R = [&](const std::vector<u64>& x, const std::vector<u64>& y) {
            /* x, y in R coords; product back in R coords */
            std::vector<u64> xa(dA, 0), ya(dA, 0);
            for (long i = 0; i < s; i++)
                for (long j = 0; j < dA; j++) {
                    xa[j] = (xa[j] + mulmod_u64(x[i], fixed.at(i, j), q)) % q;
                    ya[j] = (ya[j] + mulmod_u64(y[i], fixed.at(i, j), q)) % q;
                }
            auto za = A.mul(xa, ya);
            auto c = fp_solve(fp_transpose(fixed), za);
            if (!c) throw math_error("factor_prime: fixed algebra not closed");
            return *c;
        };

        std::vector<std::vector<u64>> idems; /* in A coords */
        std::vector<FpMat> stack;
        {
            FpMat full = FpMat::identity(q, s);
            stack.push_back(full);
        }
        while (!stack.empty()) {
            FpMat V = stack.back();
            stack.pop_back();
            long dv = V.nrows;
            if (dv == 1) {
                std::vector<u64> u(s);
                for (long j = 0; j < s; j++) u[j] = V.at(0, j);
                auto u2 = mul_R(u, u);
                /* u^2 = mu * u; normalize to the idempotent u/mu */
                u64 mu = 0;
                for (long j = 0; j < s; j++)
                    if (u[j] != 0) { mu = mulmod_u64(u2[j], invmod_u64(u[j], q), q); break; }
                if (mu == 0) throw math_error("factor_prime: nilpotent in fixed algebra");
                for (long j = 0; j < s; j++) {
                    if (mulmod_u64(mu, u[j], q) != u2[j])
                        throw math_error("factor_prime: idempotent normalization");
                }
                u64 mi = invmod_u64(mu, q);
                std::vector<u64> ea(dA, 0);
                for (long i = 0; i < s; i++) {
                    u64 c = mulmod_u64(u[i], mi, q);
                    for (long j = 0; j < dA; j++)
                        ea[j] = (ea[j] + mulmod_u64(c, fixed.at(i, j), q)) % q;
                }
                idems.push_back(ea);
                continue;
            }
            /* find a basis vector of V acting on V with >= 2 eigenvalues */
            bool split_done = false;
            for (long bi = 0; bi < dv && !split_done; bi++) {
                std::vector<u64> a(s);
                for (long j = 0; j < s; j++) a[j] = V.at(bi, j);
                /* matrix of mult-by-a restricted to V (rows: images of V basis in V coords) */
                FpMat MV(q, dv, dv);
                for (long r = 0; r < dv; r++) {
                    std::vector<u64> b(s);
                    for (long j = 0; j < s; j++) b[j] = V.at(r, j);
                    auto ab = mul_R(a, b);
                    auto c = fp_solve(fp_transpose(V), ab);
                    if (!c) throw math_error("factor_prime: subspace not closed");
                    for (long j = 0; j < dv; j++) MV.at(r, j) = (*c)[j];
                }
                /* minimal polynomial of MV (acting on row vectors) */
                FpPoly mp = FpPoly::constant(q, 1);
                for (long r = 0; r < dv; r++) {
                    std::vector<std::vector<u64>> kry;
                    std::vector<u64> v(dv, 0);
                    v[r] = 1;
                    kry.push_back(v);
                    FpPoly mv;
                    for (long k = 1; k <= dv; k++) {
                        auto w = fp_mat_vec(fp_transpose(MV), kry.back());
                        FpMat m(q, k, dv);
                        for (long i2 = 0; i2 < k; i2++)
                            for (long j2 = 0; j2 < dv; j2++) m.at(i2, j2) = kry[i2][j2];
                        auto sol = fp_solve(fp_transpose(m), w);
                        if (sol) {
                            std::vector<u64> c(k + 1, 0);
                            for (long i2 = 0; i2 < k; i2++) c[i2] = (q - (*sol)[i2]) % q;
                            c[k] = 1;
                            mv = FpPoly(q, c);
                            break;
                        }
                        kry.push_back(w);
                    }
                    /* lcm accumulate */
                    FpPoly g = fpp_gcd(mp, mv);
                    mp = fpp_mul(fpp_divrem(mp, g).first, mv);
                }
                auto roots = fpp_roots(mp);
                if (roots.size() < 2) continue;
                for (u64 r0 : roots) {
                    FpMat shifted = MV;
                    for (long i2 = 0; i2 < dv; i2++)
                        shifted.at(i2, i2) = (shifted.at(i2, i2) + q - r0) % q;
                    FpMat kerV = fp_kernel(fp_transpose(shifted)); /* row vectors */
                    /* map back to R coords */
                    FpMat sub(q, kerV.nrows, s);
                    for (long i2 = 0; i2 < kerV.nrows; i2++)
                        for (long j2 = 0; j2 < s; j2++) {
                            u64 acc2 = 0;
                            for (long t = 0; t < dv; t++)
                                acc2 = (acc2 + mulmod_u64(kerV.at(i2, t), V.at(t, j2), q)) % q;
                            sub.at(i2, j2) = acc2;
                        }
                    stack.push_back(sub);
                }
                split_done = true;
            }
            if (!split_done) throw math_error("factor_prime: could not split fixed algebra");
        }

        for (auto& ea : idems) {
            /* prime = lift of ann(e) = {x in A : e*x = 0}, plus J */
            FpMat me(q, dA, dA);
            for (long i = 0; i < dA; i++) {
                std::vector<u64> b(dA, 0);
                b[i] = 1;
                auto eb = A.mul(ea, b);
                for (long j = 0; j < dA; j++) me.at(i, j) = eb[j];
            }
            FpMat ker = fp_kernel(fp_transpose(me)); /* rows x with x*me = 0 */
            IntMat rows(ker.nrows + J.nrows, n);
            for (long i = 0; i < ker.nrows; i++) {
                auto lifted = A.lift(std::vector<u64>(ker.a.begin() + i * dA,
                                                      ker.a.begin() + (i + 1) * dA));
                for (long j = 0; j < n; j++) rows.at(i, j) = lifted[j];
            }
            for (long i = 0; i < J.nrows; i++)
                for (long j = 0; j < n; j++) rows.at(ker.nrows + i, j) = J.at(i, j);
            PrimeIdeal P;
            P.q = qz;
            P.fdeg = dA - ker.nrows;
            P.h = hnf_lattice(rows);
            if (P.h.nrows != n) throw math_error("factor_prime: prime lattice rank");
            /* ramification: largest k with qO inside P^k */
            long e = 0;
            IntMat pk = IntMat::identity(n);
            while (true) {
                pk = (e == 0) ? P.h : ideal_mul(K, pk, P.h);
                bool contains = true;
                for (long j = 0; j < n && contains; j++) {
                    std::vector<Int> v(n, 0);
                    v[j] = qz;
                    contains = lattice_contains(pk, v);
                }
                if (!contains) break;
                e++;
            }
            P.e = e;
            out.push_back(std::move(P));
        }
    }

    std::sort(out.begin(), out.end(),
              [](const PrimeIdeal& a, const PrimeIdeal& b) { return a.h.a < b.h.a; });

    long efsum = 0;
    for (auto& P : out) efsum += P.e * P.fdeg;
    if (efsum != n) throw math_error("factor_prime: ef sum mismatch");

    /* residue fields, anti-uniformizers, uniformizers */
    for (size_t i = 0; i < out.size(); i++) {
        PrimeIdeal& P = out[i];
        P.rf = build_residue_field(K, q, P.h);

        IntMat B = ideal_pow(K, P.h, P.e - 1);
        for (size_t j = 0; j < out.size(); j++)
            if (j != i) B = ideal_mul(K, B, ideal_pow(K, out[j].h, out[j].e));
        IntMat pe = ideal_pow(K, P.h, P.e);
        bool found = false;
        for (long r = 0; r < n && !found; r++) {
            std::vector<Int> v(n);
            for (long c = 0; c < n; c++) v[c] = B.at(r, c);
            if (!lattice_contains(pe, v)) {
                P.tau = NFElem(std::move(v));
                found = true;
            }
        }
        if (!found) throw math_error("factor_prime: no anti-uniformizer");

        /* pi = tau' mod P^2, 1 mod siblings, where tau' in P minus P^2 */
        IntMat p2 = ideal_mul(K, P.h, P.h);
        std::vector<Int> tp;
        for (long r = 0; r < n && tp.empty(); r++) {
            std::vector<Int> v(n);
            for (long c = 0; c < n; c++) v[c] = P.h.at(r, c);
            if (!lattice_contains(p2, v)) tp = std::move(v);
        }
        if (tp.empty()) throw math_error("factor_prime: P = P^2");
        if (out.size() == 1) {
            P.pi = NFElem(std::move(tp));
        } else {
            std::vector<std::vector<Int>> as;
            std::vector<IntMat> mods;
            as.push_back(tp);
            mods.push_back(p2);
            for (size_t j = 0; j < out.size(); j++) {
                if (j == i) continue;
                as.push_back(K.one().v);
                mods.push_back(out[j].h);
            }
            P.pi = NFElem(crt_elements(as, mods, K));
        }
    }
    return out;
}

long valuation(const NumberField& K, const PrimeIdeal& P, const NFElem& x) {
    if (x.is_zero()) throw math_error("valuation of zero");
    NFElem num(x.v);
    long vd = rational_val(x.den, P.q);
    return valuation_integral(K, P, num) - (long)P.e * vd;
}

FpPoly residue_image(const NumberField& K, const PrimeIdeal& P, const NFElem& x) {
    long t = rational_val(x.den, P.q);
    if (t == 0) {
        FqCtx fq = P.rf.fq();
        FpPoly a = P.rf.to_fq(NFElem(x.v));
        u64 dmod = (u64)fdiv_r(x.den, P.q).get_ui();
        return fq.mul(a, fq.inv(fq.embed(dmod)));
    }
    if (valuation(K, P, x) < 0) throw math_error("residue_image: negative valuation");
    IntMat lam = ideal_pow(K, P.h, (long)P.e * t + 1);
    IntMat dm = scalar_mat(K.n, x.den);
    auto z = solve_mul_congruence(dm, x.v, lam);
    if (!z) throw math_error("residue_image: congruence unsolvable");
    return P.rf.to_fq(NFElem(std::move(*z)));
}

} // namespace msel
