#include "selmer/selmer.hpp"
#include "exactmath/errors.hpp"
#include <algorithm>
#include <set>
#include <string>

namespace msel {

long compute_modulus_bound(long p, long e) {
    if (p < 2 || e < 1) throw std::invalid_argument("compute_modulus_bound: need p >= 2, e >= 1");
    return (2 * p * e) / (p - 1) + 1;
}

namespace {

/* little-endian-last odometer over 0 <= v[i] < p; false once exhausted */
bool bump_vec(std::vector<u64>& v, u64 p) {
    for (long i = (long)v.size() - 1; i >= 0; i--) {
        if (++v[i] < p) return true;
        v[i] = 0;
    }
    return false;
}

/* canonical line representatives of F_p^r (first nonzero coordinate 1), lex order */
std::vector<std::vector<u64>> canonical_lines(u64 p, long r) {
    std::vector<std::vector<u64>> out;
    if (r == 0) return out;
    std::vector<u64> v(r, 0);
    while (bump_vec(v, p)) {
        long lead = 0;
        while (v[lead] == 0) lead++;
        if (v[lead] == 1) out.push_back(v);
    }
    return out;
}

/* do all rows of `space` lie on the given line? */
bool inside_line(const FpMat& space, const std::vector<u64>& line) {
    FpMat A(space.p, space.nrows + 1, (long)line.size());
    for (long j = 0; j < A.ncols; j++) A.at(0, j) = line[j];
    for (long i = 0; i < space.nrows; i++)
        for (long j = 0; j < space.ncols; j++) A.at(i + 1, j) = space.at(i, j);
    return fp_rank(A) <= 1;
}

/* count of lines satisfying a linear condition -> dimension of the subspace */
long rank_from_count(long cnt, u64 p) {
    long size = 1 + cnt * ((long)p - 1);
    long s = 1, rank = 0;
    while (s < size) { s *= (long)p; rank++; }
    if (s != size) throw math_error("selmer: satisfying classes do not form a subspace");
    return rank;
}

/* does inertia act trivially on V / line? */
bool quotient_unramified(const GaloisRep& rho, const std::vector<long>& igroup,
                         const std::vector<u64>& line) {
    u64 p = rho.p;
    for (long g : igroup) {
        const FpMat& R = rho.mats[g];
        FpMat cols(p, rho.m, rho.m); /* rows: (rho(g) - 1) e_j */
        for (long j = 0; j < rho.m; j++)
            for (long i = 0; i < rho.m; i++)
                cols.at(j, i) = (R.at(i, j) + (i == j ? p - 1 : 0)) % p;
        if (!inside_line(cols, line)) return false;
    }
    return true;
}

bool hnf_box_bump(std::vector<Int>& c, const IntMat& H) {
    for (long i = (long)c.size() - 1; i >= 0; i--) {
        c[i] += 1;
        if (c[i] < H.at(i, i)) return true;
        c[i] = 0;
    }
    return false;
}

} // namespace

bool kummer_unramified(const NumberField& K, long p, const PrimeIdeal& Q, const NFElem& beta) {
    if (beta.is_zero()) throw std::invalid_argument("kummer_unramified: zero class");
    if (Q.q != Int(p)) throw std::invalid_argument("kummer_unramified: prime must lie over p");
    if (Q.e % (p - 1) != 0) throw math_error("kummer_unramified: completion lacks mu_p");

    /* beta * den^p is integral in the same class modulo p-th powers */
    NFElem b = beta;
    if (b.den != 1) b = K.mul_rational(b, Rat(pow_int(b.den, (unsigned long)p)));

    long v = valuation(K, Q, b);
    if (v % p) return false; /* fractional valuation of the p-th root */

    long s = Q.e / (p - 1), t = p * s;
    if (Int(Q.fdeg) * s * (p == 2 ? 1 : 2) > 40 ||
        pow_int(Int(p), (unsigned long)(Q.fdeg * s)) > (Int(1) << 20))
        throw ceiling_error("kummer_unramified: residue enumeration too large");

    /* unramified iff x^p pi^v = b (mod Q^{t+v}) is solvable; the left side
       mod Q^{t+v} only depends on x mod Q^s, so the HNF box of Q^s is a
       complete list of candidates */
    IntMat Hs = ideal_pow(K, Q.h, s);
    IntMat M = ideal_pow(K, Q.h, t + v);
    NFElem piv = K.pow(Q.pi, Int(v));
    std::vector<Int> c(K.n, 0);
    do {
        NFElem x = K.from_w(std::vector<Int>(c));
        NFElem diff = K.sub(K.mul(K.pow(x, Int(p)), piv), b);
        auto r = reduce_mod_hnf(M, diff.v);
        bool zero = true;
        for (auto& y : r)
            if (y != 0) { zero = false; break; }
        if (zero) return true;
    } while (hnf_box_bump(c, Hs));
    return false;
}

HomSpace relaxed_selmer(const FieldSelmerGroup& W, const GaloisRep& rho) {
    if (!W.K) throw std::invalid_argument("relaxed_selmer: empty field Selmer group");
    if (W.action.empty())
        throw std::invalid_argument("relaxed_selmer: no Galois action on the field Selmer group");
    if (rho.p != (u64)W.p) throw std::invalid_argument("relaxed_selmer: characteristic mismatch");
    if (rho.m < 1) throw std::invalid_argument("relaxed_selmer: empty target");

    HomSpace H;
    H.W = &W;
    H.G = automorphism_group(*W.K);
    long N = H.G.order();
    if ((long)rho.mats.size() != N || (long)W.action.size() != N)
        throw std::invalid_argument("relaxed_selmer: representation does not match the group");
    H.rho = rho;

    u64 p = rho.p;
    long d = (long)W.basis.size();
    long m = rho.m;
    const NumberField& K = *W.K;

    /* mod-p cyclotomic character from the action on a primitive p-th root */
    std::vector<u64> chi(N, 1);
    if (p > 2) {
        NFElem zp = K.pow(W.usp.zeta, Int(W.usp.w / (long)p));
        for (long g = 0; g < N; g++) {
            NFElem img = H.G.apply(g, zp);
            u64 c = 0;
            for (u64 k = 1; k < p && !c; k++)
                if (img == K.pow(zp, Int((long)k))) c = k;
            if (!c) throw math_error("relaxed_selmer: cyclotomic character undefined");
            chi[g] = c;
        }
    }

    /* Galois action on Hom(W, mu_p): pairing <g h, b> = g<h, g^{-1} b> */
    H.dual.reserve(N);
    for (long g = 0; g < N; g++)
        H.dual.push_back(fp_scale(fp_transpose(fp_inverse(W.action[g])), chi[g]));

    /* Phi dual[g] = rho[g] Phi for every g, linear in the m*d entries of Phi */
    FpMat sys(p, N * m * d, m * d);
    for (long g = 0; g < N; g++)
        for (long i = 0; i < m; i++)
            for (long j = 0; j < d; j++) {
                long row = (g * m + i) * d + j;
                for (long b = 0; b < d; b++) {
                    long col = i * d + b;
                    sys.at(row, col) = (sys.at(row, col) + H.dual[g].at(b, j)) % p;
                }
                for (long a = 0; a < m; a++) {
                    long col = a * d + j;
                    sys.at(row, col) = (sys.at(row, col) + p - rho.mats[g].at(i, a)) % p;
                }
            }
    FpMat ker = fp_kernel(sys);
    for (long r = 0; r < ker.nrows; r++) {
        FpMat Phi(p, m, d);
        for (long i = 0; i < m; i++)
            for (long j = 0; j < d; j++) Phi.at(i, j) = ker.at(r, i * d + j);
        H.basis.push_back(Phi);
    }

    /* the Hom space equals the relaxed Selmer group only when inflation and
       restriction leave nothing behind: H^1 and H^2 of the image must vanish */
    std::vector<FpMat> image;
    for (auto& Mg : rho.mats) {
        bool seen = false;
        for (auto& U : image)
            if (U == Mg) { seen = true; break; }
        if (!seen) image.push_back(Mg);
    }
    auto dims = cohomology_dims(image);
    H.exact = (dims.h1 == 0 && dims.h2 == 0);
    return H;
}

std::vector<KummerExtension> enumerate_extensions(const HomSpace& H) {
    const FieldSelmerGroup& W = *H.W;
    const NumberField& K = *W.K;
    u64 p = H.rho.p;
    long m = H.rho.m, d = (long)W.basis.size();

    std::vector<KummerExtension> out;
    for (auto& c : canonical_lines(p, H.rank())) {
        FpMat Phi(p, m, d);
        for (long k = 0; k < H.rank(); k++)
            if (c[k]) Phi = fp_add(Phi, fp_scale(H.basis[k], c[k]));
        KummerExtension E;
        E.f = Phi;
        E.surjective = (fp_rank(Phi) == m);
        for (long i = 0; i < m; i++) {
            NFElem b = K.one();
            for (long j = 0; j < d; j++)
                if (Phi.at(i, j)) b = K.mul(b, K.pow(W.basis[j], Int((long)Phi.at(i, j))));
            E.bgens.push_back(b);
        }
        out.push_back(std::move(E));
    }
    return out;
}

SubmoduleCensus submodule_census(const HomSpace& H) {
    u64 p = H.rho.p;
    long d = (long)H.W->basis.size();
    long m = H.rho.m;
    if (m != 2) throw std::invalid_argument("submodule_census: rank-2 targets only");
    if (pow_int(Int(p), (unsigned long)d) > 1024)
        throw ceiling_error("submodule_census: module too large to enumerate");

    /* codimension-m stable submodules N, via their annihilators: m-dimensional
       spaces of functionals stable under the transposed action */
    std::vector<std::vector<u64>> vecs;
    {
        std::vector<u64> v(d, 0);
        while (bump_vec(v, p)) vecs.push_back(v);
    }
    std::vector<FpMat> dualT;
    dualT.reserve(H.dual.size());
    for (auto& B : H.dual) dualT.push_back(fp_transpose(B));

    /* invertible m x m candidates for the module isomorphism with rho */
    std::vector<FpMat> glm;
    {
        std::vector<u64> t(m * m, 0);
        while (bump_vec(t, p)) {
            FpMat T(p, m, m);
            for (long i = 0; i < m * m; i++) T.a[i] = t[i];
            if (fp_rank(T) == m) glm.push_back(T);
        }
    }

    SubmoduleCensus cen;
    std::set<std::string> seen;
    for (size_t i = 0; i < vecs.size(); i++)
        for (size_t j = i + 1; j < vecs.size(); j++) {
            FpMat S(p, 2, d);
            for (long k = 0; k < d; k++) {
                S.at(0, k) = vecs[i][k];
                S.at(1, k) = vecs[j][k];
            }
            if (fp_rref(S) != 2) continue;
            std::string key;
            key.reserve(2 * d);
            for (u64 x : S.a) key.push_back((char)('0' + x));
            if (!seen.insert(key).second) continue;

            /* stability of the span under every transposed action matrix,
               recording the coordinate matrix on the way */
            FpMat cols(p, d, 2); /* basis functionals as columns */
            for (long k = 0; k < d; k++) {
                cols.at(k, 0) = S.at(0, k);
                cols.at(k, 1) = S.at(1, k);
            }
            bool stable = true;
            std::vector<FpMat> quo; /* quotient action, column convention */
            for (auto& T : dualT) {
                FpMat D(p, 2, 2);
                for (long b = 0; b < 2 && stable; b++) {
                    std::vector<u64> phi(d), img;
                    for (long k = 0; k < d; k++) phi[k] = S.at(b, k);
                    img = fp_mat_vec(T, phi);
                    auto sol = fp_solve(cols, img);
                    if (!sol) { stable = false; break; }
                    D.at(0, b) = (*sol)[0];
                    D.at(1, b) = (*sol)[1];
                }
                if (!stable) break;
                quo.push_back(fp_transpose(D));
            }
            if (!stable) continue;
            cen.total++;

            for (auto& T : glm) {
                bool match = true;
                for (size_t g = 0; g < quo.size() && match; g++)
                    if (!(fp_mul(T, quo[g]) == fp_mul(H.rho.mats[g], T))) match = false;
                if (match) { cen.via_rho++; break; }
            }
        }
    return cen;
}

InertiaImage inertia_image(const HomSpace& H, const KummerExtension& E, const PrimeIdeal& Q) {
    const FieldSelmerGroup& W = *H.W;
    const NumberField& K = *W.K;
    u64 p = H.rho.p;
    long m = H.rho.m, d = (long)W.basis.size();
    if (Q.q != Int(W.p)) throw std::invalid_argument("inertia_image: prime must lie over p");

    /* members of B = row space of f that stay unramified at Q; coefficient
       vectors with the same row-space element share one verdict */
    std::vector<std::vector<u64>> unr;
    std::vector<u64> c(m, 0);
    while (bump_vec(c, p)) {
        std::vector<u64> x(d, 0);
        for (long k = 0; k < m; k++)
            for (long j = 0; j < d; j++) x[j] = (x[j] + c[k] * E.f.at(k, j)) % p;
        bool nz = false;
        for (u64 y : x)
            if (y) { nz = true; break; }
        if (!nz) { unr.push_back(c); continue; } /* trivial class */
        NFElem b = K.one();
        for (long j = 0; j < d; j++)
            if (x[j]) b = K.mul(b, K.pow(W.basis[j], Int((long)x[j])));
        if (kummer_unramified(K, W.p, Q, b)) unr.push_back(c);
    }

    /* the unramified members together with 0 must form a subgroup */
    std::set<std::vector<u64>> uset(unr.begin(), unr.end());
    for (auto& a : unr)
        for (auto& b : unr) {
            std::vector<u64> sum(m);
            bool nz = false;
            for (long k = 0; k < m; k++) {
                sum[k] = (a[k] + b[k]) % p;
                if (sum[k]) nz = true;
            }
            if (nz && !uset.count(sum))
                throw math_error("inertia_image: unramified classes not closed");
        }

    /* inertia = annihilator of the unramified subgroup under the pairing,
       inside Gal(M/L) = the column space of f */
    FpMat stack(p, std::max<long>(1, (long)unr.size()), m);
    for (size_t i = 0; i < unr.size(); i++)
        for (long k = 0; k < m; k++) stack.at((long)i, k) = unr[i][k];
    InertiaImage out;
    out.space = fp_row_space_intersect(fp_kernel(stack), fp_row_space(fp_transpose(E.f)));
    out.dim = out.space.nrows;
    return out;
}

long rank_no_at(const HomSpace& H, const std::vector<KummerExtension>& exts,
                const PrimeIdeal& Q, const std::vector<u64>& line) {
    long cnt = 0;
    for (auto& E : exts)
        if (inside_line(inertia_image(H, E, Q).space, line)) cnt++;
    return rank_from_count(cnt, H.rho.p);
}

SelmerRankReport selmer_ranks(const FieldSelmerGroup& W, const GaloisRep& rho) {
    HomSpace H = relaxed_selmer(W, rho);
    if (W.S.empty()) throw std::invalid_argument("selmer_ranks: no primes over p");
    auto exts = enumerate_extensions(H);
    u64 p = rho.p;

    SelmerRankReport rep;
    rep.p = W.p;
    rep.exact = H.exact;
    rep.rank_rel = H.rank();
    rep.extensions = (long)exts.size();
    if (!exts.empty()) rep.witness_rel = exts[0].bgens;

    /* inertia of every class at every prime over p */
    std::vector<std::vector<InertiaImage>> inert(exts.size());
    for (size_t i = 0; i < exts.size(); i++)
        for (auto& Qp : W.S) inert[i].push_back(inertia_image(H, exts[i], Qp));

    /* nearly-ordinary conditions at the lex-smallest prime over p */
    const PrimeIdeal& Q = W.S[0];
    rep.chosen_prime = Q.h;
    auto D = decomposition_at(H.G, Q);
    for (auto& ln : stable_lines(rho, D.dgroup)) {
        LineRank lr;
        lr.line = ln;
        lr.unramified_quotient = quotient_unramified(rho, D.igroup, ln);
        long cnt = 0, wit = -1;
        for (size_t i = 0; i < exts.size(); i++)
            if (inside_line(inert[i][0].space, ln)) {
                cnt++;
                if (wit < 0) wit = (long)i;
            }
        lr.rank_no = rank_from_count(cnt, p);
        if (wit >= 0) lr.witness = exts[wit].bgens;
        rep.lines.push_back(std::move(lr));
    }

    /* unramified at every prime over p at once */
    long cnt = 0, wit = -1;
    for (size_t i = 0; i < exts.size(); i++) {
        bool everywhere = true;
        for (auto& I : inert[i])
            if (I.dim != 0) { everywhere = false; break; }
        if (everywhere) {
            cnt++;
            if (wit < 0) wit = (long)i;
        }
    }
    rep.rank_unr = rank_from_count(cnt, p);
    if (wit >= 0) rep.witness_unr = exts[wit].bgens;

    if (rep.rank_unr > rep.rank_rel) throw math_error("selmer_ranks: chain violated");
    for (auto& lr : rep.lines)
        if (lr.rank_no > rep.rank_rel || rep.rank_unr > lr.rank_no)
            throw math_error("selmer_ranks: chain violated");
    return rep;
}

bool choice_independence_audit(const HomSpace& H) {
    const FieldSelmerGroup& W = *H.W;
    auto exts = enumerate_extensions(H);
    std::vector<std::vector<std::pair<int, long>>> profiles;
    for (auto& Qp : W.S) {
        auto D = decomposition_at(H.G, Qp);
        std::vector<std::pair<int, long>> prof;
        for (auto& ln : stable_lines(H.rho, D.dgroup))
            prof.emplace_back(quotient_unramified(H.rho, D.igroup, ln) ? 1 : 0,
                              rank_no_at(H, exts, Qp, ln));
        std::sort(prof.begin(), prof.end());
        profiles.push_back(std::move(prof));
    }
    for (size_t i = 1; i < profiles.size(); i++)
        if (profiles[i] != profiles[0]) return false;
    return true;
}

} // namespace msel
