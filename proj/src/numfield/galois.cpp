#include "numfield/galois.hpp"
#include "numfield/roots.hpp"
#include "exactmath/errors.hpp"

#include <algorithm>

namespace msel {

namespace {

bool same_mat(const IntMat& a, const IntMat& b) {
    return a.nrows == b.nrows && a.ncols == b.ncols && a.a == b.a;
}

bool same_fp(const FpMat& a, const FpMat& b) {
    return a.p == b.p && a.nrows == b.nrows && a.ncols == b.ncols && a.a == b.a;
}

long find_fp(const std::vector<FpMat>& v, const FpMat& m) {
    for (size_t i = 0; i < v.size(); i++)
        if (same_fp(v[i], m)) return (long)i;
    return -1;
}

} // namespace

NFElem GaloisGroup::apply(long g, const NFElem& x) const { return K->apply_matrix(mats[g], x); }

GaloisGroup automorphism_group(const NumberField& K) {
    auto roots = poly_roots_in_field(K, K.f);
    if ((long)roots.size() != K.n) throw math_error("automorphism_group: field is not normal");

    GaloisGroup G;
    G.K = &K;
    NFElem th = K.theta();
    for (auto& beta : roots) {
        /* image of the basis under theta -> beta */
        std::vector<NFElem> pw(K.n);
        pw[0] = K.one();
        for (long j = 1; j < K.n; j++) pw[j] = K.mul(pw[j - 1], beta);
        IntMat m(K.n, K.n);
        for (long i = 0; i < K.n; i++) {
            NFElem acc = K.zero();
            for (long j = 0; j < K.n; j++)
                if (K.basis_num.at(i, j) != 0)
                    acc = K.add(acc, K.mul_rational(pw[j], Rat(K.basis_num.at(i, j))));
            acc = K.mul_rational(acc, make_rat(Int(1), K.basis_den));
            if (!acc.is_integral()) throw math_error("automorphism_group: basis image not integral");
            for (long j = 0; j < K.n; j++) m.at(i, j) = acc.v[j];
        }
        if (beta == th) G.id = (long)G.mats.size();
        G.mats.push_back(std::move(m));
    }

    long n = G.order();
    G.mult.assign(n, std::vector<long>(n, -1));
    for (long a = 0; a < n; a++)
        for (long b = 0; b < n; b++) {
            IntMat prod = mat_mul(G.mats[b], G.mats[a]); /* x (M_b M_a) = a(b(x)) */
            long idx = -1;
            for (long t = 0; t < n; t++)
                if (same_mat(G.mats[t], prod)) { idx = t; break; }
            if (idx < 0) throw math_error("automorphism_group: composition escaped the root set");
            G.mult[a][b] = idx;
        }
    G.inv.assign(n, -1);
    for (long a = 0; a < n; a++)
        for (long b = 0; b < n; b++)
            if (G.mult[a][b] == G.id) G.inv[a] = b;
    return G;
}

std::vector<long> perm_action(const GaloisGroup& G, long g, const std::vector<NFElem>& pts) {
    std::vector<long> out(pts.size(), -1);
    for (size_t i = 0; i < pts.size(); i++) {
        NFElem y = G.apply(g, pts[i]);
        for (size_t j = 0; j < pts.size(); j++)
            if (pts[j] == y) { out[i] = (long)j; break; }
        if (out[i] < 0) throw math_error("perm_action: image left the point set");
    }
    return out;
}

DecompInfo decomposition_at(const GaloisGroup& G, const PrimeIdeal& P) {
    const NumberField& K = *G.K;
    long n = K.n;
    DecompInfo info;
    std::vector<NFElem> wb(n);
    for (long i = 0; i < n; i++) {
        std::vector<Int> v(n, 0);
        v[i] = 1;
        wb[i] = NFElem(std::move(v));
    }
    FqCtx fq = P.rf.fq();
    std::vector<FpPoly> wres(n);
    for (long i = 0; i < n; i++) wres[i] = P.rf.to_fq(wb[i]);

    for (long g = 0; g < G.order(); g++) {
        IntMat moved(n, n);
        for (long i = 0; i < n; i++) {
            std::vector<Int> row(n);
            for (long j = 0; j < n; j++) row[j] = P.h.at(i, j);
            NFElem img = K.apply_matrix(G.mats[g], NFElem(std::move(row)));
            for (long j = 0; j < n; j++) moved.at(i, j) = img.v[j];
        }
        IntMat h = hnf_lattice(moved);
        if (!same_mat(h, P.h)) continue;
        info.dgroup.push_back(g);

        bool trivial = true, frob = true;
        for (long i = 0; i < n && (trivial || frob); i++) {
            FpPoly gi = P.rf.to_fq(G.apply(g, wb[i]));
            if (gi != wres[i]) trivial = false;
            if (gi != fq.pow(wres[i], P.q)) frob = false;
        }
        if (trivial) info.igroup.push_back(g);
        if (frob) info.frobenius = g;
    }
    return info;
}

std::vector<std::vector<long>> ramification_filtration(const GaloisGroup& G, const PrimeIdeal& P) {
    const NumberField& K = *G.K;
    long n = K.n;
    DecompInfo d = decomposition_at(G, P);
    std::vector<NFElem> wb(n);
    for (long i = 0; i < n; i++) {
        std::vector<Int> v(n, 0);
        v[i] = 1;
        wb[i] = NFElem(std::move(v));
    }
    /* i_G(sigma) = min_j v_P(sigma w_j - w_j) for sigma in inertia */
    std::vector<std::pair<long, long>> depth; /* (element, i_G) */
    for (long g : d.igroup) {
        if (g == G.id) continue;
        long best = -1;
        for (long j = 0; j < n; j++) {
            NFElem diff = K.sub(G.apply(g, wb[j]), wb[j]);
            if (diff.is_zero()) continue;
            long v = valuation(K, P, diff);
            if (best < 0 || v < best) best = v;
        }
        if (best < 1) throw math_error("ramification_filtration: inertia element with depth zero");
        depth.push_back({g, best});
    }
    std::vector<std::vector<long>> out;
    for (long i = 0;; i++) {
        std::vector<long> gi = {G.id};
        for (auto& [g, v] : depth)
            if (v >= i + 1) gi.push_back(g);
        if ((long)gi.size() == 1) break;
        std::sort(gi.begin(), gi.end());
        out.push_back(std::move(gi));
    }
    return out;
}

std::vector<FpMat> close_matrix_group(const std::vector<FpMat>& gens, long cap) {
    if (gens.empty()) throw math_error("close_matrix_group: no generators");
    long d = gens[0].nrows;
    std::vector<FpMat> out = {FpMat::identity(gens[0].p, d)};
    std::vector<long> fresh = {0};
    while (!fresh.empty()) {
        std::vector<long> next;
        for (long i : fresh)
            for (auto& g : gens) {
                FpMat prod = fp_mul(out[i], g);
                if (find_fp(out, prod) < 0) {
                    out.push_back(prod);
                    next.push_back((long)out.size() - 1);
                    if ((long)out.size() > cap)
                        throw ceiling_error("close_matrix_group: cap exceeded");
                }
            }
        fresh = std::move(next);
    }
    return out;
}

CohomologyDims cohomology_dims(const std::vector<FpMat>& grp) {
    long N = (long)grp.size();
    if (N == 0) throw math_error("cohomology_dims: empty group");
    u64 p = grp[0].p;
    long d = grp[0].nrows;
    long id = find_fp(grp, FpMat::identity(p, d));
    if (id < 0) throw math_error("cohomology_dims: identity missing");
    std::vector<std::vector<long>> mult(N, std::vector<long>(N));
    for (long a = 0; a < N; a++)
        for (long b = 0; b < N; b++) {
            long t = find_fp(grp, fp_mul(grp[a], grp[b]));
            if (t < 0) throw math_error("cohomology_dims: group not closed");
            mult[a][b] = t;
        }

    CohomologyDims res;
    /* H^0: common fixed space */
    {
        FpMat stack(p, N * d, d);
        for (long g = 0; g < N; g++)
            for (long r = 0; r < d; r++)
                for (long c = 0; c < d; c++) {
                    u64 v = grp[g].at(r, c);
                    if (r == c) v = (v + p - 1) % p;
                    stack.at(g * d + r, c) = v;
                }
        res.h0 = fp_kernel(stack).nrows;
    }

    /* non-identity indexing */
    std::vector<long> pos(N, -1);
    long ng = 0;
    for (long g = 0; g < N; g++)
        if (g != id) pos[g] = ng++;

    /* H^1 via f(ab) = f(a) + a f(b), f(id) = 0 */
    {
        long vars = ng * d;
        FpMat sys(p, N * N * d, vars);
        long r = 0;
        for (long a = 0; a < N; a++)
            for (long b = 0; b < N; b++) {
                long ab = mult[a][b];
                for (long k = 0; k < d; k++, r++) {
                    if (ab != id) sys.at(r, pos[ab] * d + k) = (sys.at(r, pos[ab] * d + k) + 1) % p;
                    if (a != id)
                        sys.at(r, pos[a] * d + k) = (sys.at(r, pos[a] * d + k) + p - 1) % p;
                    if (b != id)
                        for (long c = 0; c < d; c++)
                            sys.at(r, pos[b] * d + c) =
                                (sys.at(r, pos[b] * d + c) + p - grp[a].at(k, c)) % p;
                }
            }
        long z1 = vars - fp_rank(sys);
        res.h1 = z1 - (d - res.h0);
    }

    /* H^2 on normalized cochains c(a,b), zero when a or b is the identity */
    {
        long vars = ng * ng * d;
        auto vidx = [&](long a, long b, long k) { return (pos[a] * ng + pos[b]) * d + k; };
        FpMat sys(p, N * N * N * d, vars);
        long r = 0;
        for (long a = 0; a < N; a++)
            for (long b = 0; b < N; b++)
                for (long c = 0; c < N; c++) {
                    long ab = mult[a][b], bc = mult[b][c];
                    for (long k = 0; k < d; k++, r++) {
                        /* a c(b,c) - c(ab,c) + c(a,bc) - c(a,b) = 0 */
                        if (b != id && c != id)
                            for (long t = 0; t < d; t++)
                                sys.at(r, vidx(b, c, t)) =
                                    (sys.at(r, vidx(b, c, t)) + grp[a].at(k, t)) % p;
                        if (ab != id && c != id)
                            sys.at(r, vidx(ab, c, k)) = (sys.at(r, vidx(ab, c, k)) + p - 1) % p;
                        if (a != id && bc != id)
                            sys.at(r, vidx(a, bc, k)) = (sys.at(r, vidx(a, bc, k)) + 1) % p;
                        if (a != id && b != id)
                            sys.at(r, vidx(a, b, k)) = (sys.at(r, vidx(a, b, k)) + p - 1) % p;
                    }
                }
        long z2 = vars - fp_rank(sys);

        /* coboundaries of normalized 1-cochains */
        FpMat db(p, ng * d, vars);
        for (long g = 0; g < N; g++) {
            if (g == id) continue;
            for (long k = 0; k < d; k++) {
                long row = pos[g] * d + k;
                for (long a = 0; a < N; a++)
                    for (long b = 0; b < N; b++) {
                        if (a == id || b == id) continue;
                        long ab = mult[a][b];
                        /* delta f(a,b) = a f(b) - f(ab) + f(a) */
                        for (long t = 0; t < d; t++) {
                            u64 coef = 0;
                            if (b == g) coef = (coef + grp[a].at(t, k)) % p;
                            if (ab == g && t == k) coef = (coef + p - 1) % p;
                            if (a == g && t == k) coef = (coef + 1) % p;
                            if (coef)
                                db.at(row, vidx(a, b, t)) = (db.at(row, vidx(a, b, t)) + coef) % p;
                        }
                    }
            }
        }
        res.h2 = z2 - fp_rank(db);
    }
    return res;
}

Int serre_conductor(const GaloisGroup& G, const std::vector<FpMat>& rho, u64 p) {
    const NumberField& K = *G.K;
    if ((long)rho.size() != G.order()) throw math_error("serre_conductor: shape");
    long d = rho[G.id].nrows;
    u64 pp = rho[G.id].p;

    auto fixed_dim = [&](const std::vector<long>& elems) {
        FpMat stack(pp, (long)elems.size() * d, d);
        long r = 0;
        for (long g : elems)
            for (long i = 0; i < d; i++, r++)
                for (long j = 0; j < d; j++) {
                    u64 v = rho[g].at(i, j);
                    if (i == j) v = (v + pp - 1) % pp;
                    stack.at(r, j) = v;
                }
        return (long)fp_kernel(stack).nrows;
    };

    Int N(1);
    for (auto& [l, e] : factor_int(abs(K.disc))) {
        (void)e;
        if (l == Int((unsigned long)p)) continue;
        auto P = factor_prime(K, l)[0];
        auto filt = ramification_filtration(G, P);
        if (filt.empty()) continue;
        Int num = 0;
        Int g0 = Int((long)filt[0].size());
        for (auto& gi : filt) num += Int((long)gi.size()) * (d - fixed_dim(gi));
        if (fdiv_r(num, g0) != 0) throw math_error("serre_conductor: non-integral exponent");
        Int expn = num / g0;
        N *= pow_int(l, expn.get_ui());
    }
    return N;
}

GaloisRep match_representation(const GaloisGroup& G,
                               const std::vector<std::pair<long, FpMat>>& gen_images) {
    if (gen_images.empty()) throw std::invalid_argument("match_representation: no generators");
    u64 p = gen_images[0].second.p;
    long m = gen_images[0].second.nrows;
    long N = G.order();

    GaloisRep rep;
    rep.p = p;
    rep.m = m;
    rep.mats.assign(N, FpMat());
    std::vector<char> known(N, 0);
    rep.mats[G.id] = FpMat::identity(p, m);
    known[G.id] = 1;

    for (auto& [g, M] : gen_images) {
        if (g < 0 || g >= N) throw std::invalid_argument("match_representation: element index");
        if (M.p != p || M.nrows != m || M.ncols != m)
            throw std::invalid_argument("match_representation: image shape");
        if (fp_rank(M) != m) throw std::invalid_argument("match_representation: singular image");
        if (known[g] && !(rep.mats[g] == M))
            throw std::invalid_argument("match_representation: images violate a relation");
        rep.mats[g] = M;
        known[g] = 1;
    }

    /* close under multiplication; any conflict is a violated relation */
    bool grew = true;
    while (grew) {
        grew = false;
        for (long a = 0; a < N; a++) {
            if (!known[a]) continue;
            for (long b = 0; b < N; b++) {
                if (!known[b]) continue;
                long ab = G.mult[a][b];
                FpMat M = fp_mul(rep.mats[a], rep.mats[b]);
                if (!known[ab]) {
                    rep.mats[ab] = M;
                    known[ab] = 1;
                    grew = true;
                } else if (!(rep.mats[ab] == M)) {
                    throw std::invalid_argument("match_representation: images violate a relation");
                }
            }
        }
    }
    for (long g = 0; g < N; g++)
        if (!known[g]) throw std::invalid_argument("match_representation: elements do not generate");
    return rep;
}

std::vector<std::vector<u64>> stable_lines(const GaloisRep& rho,
                                           const std::vector<long>& elements) {
    u64 p = rho.p;
    long m = rho.m;
    /* canonical line representatives: first nonzero coordinate equals 1 */
    std::vector<std::vector<u64>> reps;
    std::vector<u64> v(m, 0);
    auto bump = [&]() {
        for (long i = m - 1; i >= 0; i--) {
            if (++v[i] < p) return true;
            v[i] = 0;
        }
        return false;
    };
    while (bump()) {
        long lead = 0;
        while (lead < m && v[lead] == 0) lead++;
        if (v[lead] != 1) continue;
        reps.push_back(v);
    }

    auto on_line = [&](const std::vector<u64>& w, const std::vector<u64>& rep) {
        /* w in span(rep): w = c * rep with c = leading coordinate of w */
        long lead = 0;
        while (lead < m && rep[lead] == 0) lead++;
        u64 c = w[lead];
        for (long i = 0; i < m; i++)
            if (w[i] != mulmod_u64(c, rep[i], p)) return false;
        return true;
    };

    std::vector<std::vector<u64>> out;
    for (auto& rep : reps) {
        bool ok = true;
        for (long g : elements) {
            auto w = fp_mat_vec(rho.mats[g], rep);
            bool zero = true;
            for (u64 x : w) if (x) zero = false;
            if (zero || !on_line(w, rep)) { ok = false; break; }
        }
        if (ok) out.push_back(rep);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace msel
