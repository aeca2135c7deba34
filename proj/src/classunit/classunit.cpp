#include "classunit/classunit.hpp"
#include "numfield/embeddings.hpp"
#include "numfield/roots.hpp"
#include "exactmath/lll.hpp"
#include "exactmath/errors.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace msel {

namespace {

constexpr long LOG_SCALE = 48;   /* fixed-point scale for logarithmic embeddings */
constexpr long EMB_PREC = 256;

IntPoly cyclotomic_poly(long m) {
    static std::map<long, IntPoly> memo;
    auto it = memo.find(m);
    if (it != memo.end()) return it->second;
    /* x^m - 1 divided by the cyclotomics of the proper divisors */
    std::vector<Int> xm(m + 1, Int(0));
    xm[0] = -1;
    xm[m] = 1;
    IntPoly num(xm);
    for (long d = 1; d < m; d++) {
        if (m % d != 0) continue;
        auto [q, rem] = ip_divrem_monic(num, cyclotomic_poly(d));
        if (!rem.c.empty() && rem.deg() >= 0)
            for (auto& c : rem.c)
                if (c != 0) throw math_error("cyclotomic_poly: division failed");
        num = q;
    }
    memo.emplace(m, num);
    return num;
}

/* largest root of unity in K: for each prime l collect the largest l-power m
   with a primitive m-th root present; the product over distinct l is a
   generator, since the prime-power orders are coprime */
std::pair<NFElem, long> torsion_root(const NumberField& K) {
    NFElem zeta = K.from_rational(Rat(-1));
    long w = 2;
    if (K.r1 > 0) return {zeta, w};
    for (long l = 2; l <= K.n + 1; l++) {
        if (!is_probable_prime(Int(l))) continue;
        long best = 1;
        NFElem zl = K.one();
        for (long m = (l == 2 ? 4 : l); ; m *= l) {
            long phi = m / l * (l - 1);
            if (K.n % phi != 0) break;
            auto roots = poly_roots_in_field(K, cyclotomic_poly(m));
            if (roots.empty()) break;
            best = m;
            zl = roots[0];
        }
        if (best > 1) {
            if (l == 2) {
                zeta = zl; /* -1 is the square of any 4th root's square chain */
                w = w / 2 * best;
            } else {
                zeta = K.mul(zeta, zl);
                w = w * best;
            }
        }
    }
    /* exact order checks */
    if (!(K.pow(zeta, Int(w)) == K.one())) throw math_error("torsion_root: order check failed");
    for (long l = 2; l <= w; l++)
        if (w % l == 0 && is_probable_prime(Int(l)) && K.pow(zeta, Int(w / l)) == K.one())
            throw math_error("torsion_root: order not maximal");
    return {zeta, w};
}

/* ceil of (n!/n^n) (4/pi)^{r2} sqrt|disc|; an over-estimate is harmless */
Int minkowski_bound(const NumberField& K) {
    const long P = 96;
    Int sq = hp_sqrt(abs(K.disc) << P, P);
    Int fourpi = hp_div(Int(4) << P, hp_pi(P), P);
    Int factor = Int(1) << P;
    for (long i = 0; i < K.r2; i++) factor = hp_mul(factor, fourpi, P);
    Int t = hp_mul(sq, factor, P);
    Int nfact = 1, npow = 1;
    for (long i = 1; i <= K.n; i++) {
        nfact *= i;
        npow *= K.n;
    }
    t = t * nfact / npow;
    return (t >> P) + 1;
}

/* ceil of 12 (ln|disc|)^2, the GRH generation bound */
Int grh_bound(const NumberField& K) {
    const long P = 96;
    if (abs(K.disc) <= 1) return Int(1);
    Int l = hp_ln(abs(K.disc) << P, P);
    Int t = hp_mul(l, l, P) * 12;
    return (t >> P) + 1;
}

/* fixed-point rows log|sigma_j(x_i)| at LOG_SCALE, one column per embedding */
IntMat log_rows(const Embeddings& emb, const std::vector<NFElem>& xs) {
    long places = emb.K->n;
    IntMat m((long)xs.size(), places);
    for (size_t i = 0; i < xs.size(); i++) {
        auto la = emb.log_abs(xs[i]);
        for (long j = 0; j < places; j++)
            m.at((long)i, j) = rdiv_q(la[j], Int(1) << (emb.prec - LOG_SCALE));
    }
    return m;
}

double log_fixed_to_double(const Int& v) { return v.get_d() / std::pow(2.0, (double)LOG_SCALE); }

/* covering-radius style bound: half the root of the summed squared lengths */
double unit_cover_radius(const IntMat& ulogs) {
    double s = 0;
    for (long i = 0; i < ulogs.nrows; i++) {
        double row = 0;
        for (long j = 0; j < ulogs.ncols; j++) {
            double e = log_fixed_to_double(ulogs.at(i, j));
            row += e * e;
        }
        s += row;
    }
    return 0.5 * std::sqrt(s);
}

/* all x with x gram x^T <= cap (gram at scale 2^LOG_SCALE, cap in plain units) */
std::vector<std::vector<Int>> short_coords(const IntMat& gram, double cap, long limit) {
    if (!(cap < 1e270)) throw ceiling_error("short_coords: bound overflow");
    Int bnd = Int(std::ceil(cap * 1.01) + 2.0) << LOG_SCALE;
    RatMat q = RatMat::from_int(gram);
    return enumerate_short_vectors(q, Rat(bnd), limit);
}

/* complete search for a generator of the integral ideal A (HNF rows); the
   bound folds in the unit covering radius, so a miss proves non-principality */
std::optional<NFElem> principal_generator(const NumberField& K, const IntMat& gramO,
                                          double mu2, const IntMat& A) {
    Int NA = ideal_norm(A);
    if (NA == 1) return K.one();
    double nd = NA.get_d();
    double cap = (double)K.n * std::pow(nd, 2.0 / (double)K.n) * std::exp(2.0 * mu2) * 1.05 + 2.0;
    IntMat G = mat_mul(mat_mul(A, gramO), transpose(A));
    for (auto& x : short_coords(G, cap, 4000000)) {
        std::vector<Int> coords = mat_vec(transpose(A), x);
        NFElem g{std::move(coords), Int(1)};
        if (abs(K.norm(g).get_num()) == NA) return g;
    }
    return std::nullopt;
}

/* propose exponents of x over us by solving the normal equations of the
   logarithmic embedding, then verify exactly; a0 is the torsion exponent */
std::optional<std::pair<long, std::vector<Int>>> unit_part_dlog(
    const NumberField& K, const Embeddings& emb, const std::vector<NFElem>& us,
    const IntMat& ulogs, const NFElem& zeta, long w, const NFElem& x) {
    long k = (long)us.size();
    std::vector<Int> c(k, Int(0));
    if (k > 0) {
        IntMat lx = log_rows(emb, {x});
        IntMat G = mat_mul(ulogs, transpose(ulogs));
        std::vector<Int> rhs = mat_vec(ulogs, std::vector<Int>(lx.a.begin(), lx.a.end()));
        RatMat Gr = RatMat::from_int(G);
        std::vector<Rat> rr(k);
        for (long i = 0; i < k; i++) rr[i] = Rat(rhs[i]);
        std::vector<Rat> sol = solve_rat(Gr, rr);
        for (long i = 0; i < k; i++) c[i] = rdiv_q(sol[i].get_num(), sol[i].get_den());
    }
    NFElem d = x;
    for (long i = 0; i < k; i++) d = K.mul(d, K.pow(us[i], -c[i]));
    NFElem zp = K.one();
    for (long a = 0; a < w; a++) {
        if (d == zp) return std::make_pair(a, c);
        zp = K.mul(zp, zeta);
    }
    return std::nullopt;
}

struct HarvestResult {
    std::vector<NFElem> gens;
    IntMat val; /* gens x fb valuations */
};

/* deterministic search for factor-base-smooth elements: enumerate by growing
   trace-form radius until the relation lattice is full rank and stable and
   the kernel carries the full unit rank */
HarvestResult harvest_relations(const NumberField& K, const Embeddings& emb, const IntMat& gramO,
                                const std::vector<PrimeIdeal>& fb) {
    long n = K.n;
    long r = K.r1 + K.r2 - 1;
    std::vector<Int> qs;
    for (auto& P : fb)
        if (qs.empty() || qs.back() != P.q) qs.push_back(P.q);

    HarvestResult out;
    out.val = IntMat(0, (long)fb.size());
    std::set<std::vector<Int>> seen;
    IntMat prev_h(0, 0);
    long stable = 0;

    for (double cap = 4.0 * n + 4.0; cap < 1e18; cap *= 2) {
        auto vecs = short_coords(gramO, cap, 600000);
        for (auto& x : vecs) {
            if (seen.count(x)) continue;
            NFElem g{std::vector<Int>(x), Int(1)};
            Int N = abs(K.norm(g).get_num());
            if (N == 0) continue;
            Int rem = N;
            for (auto& q : qs)
                while (fdiv_r(rem, q) == 0) rem /= q;
            if (rem != 1) continue;
            seen.insert(x);
            std::vector<Int> row(fb.size(), Int(0));
            Int check = 1;
            for (size_t j = 0; j < fb.size(); j++) {
                if (fdiv_r(N, fb[j].q) != 0) continue;
                long v = valuation(K, fb[j], g);
                row[j] = v;
                if (v != 0) check *= pow_int(pow_int(fb[j].q, (unsigned long)fb[j].fdeg),
                                             (unsigned long)v);
            }
            if (check != N) throw math_error("harvest: valuation bookkeeping failed");
            out.gens.push_back(g);
            IntMat nv(out.val.nrows + 1, (long)fb.size());
            nv.a = out.val.a;
            nv.a.insert(nv.a.end(), row.begin(), row.end());
            out.val = std::move(nv);
        }

        bool rank_ok = fb.empty();
        if (!fb.empty() && out.val.nrows > 0) {
            IntMat h = hnf_lattice(out.val);
            rank_ok = h.nrows == (long)fb.size();
            if (rank_ok && h == prev_h)
                stable++;
            else
                stable = 0;
            prev_h = h;
        } else if (fb.empty()) {
            stable++;
        }

        bool units_ok = r == 0;
        if (!units_ok && out.val.nrows > 0) {
            /* rank of the kernel image under the log embedding, with small
               entries zeroed: they are rounding residue from torsion rows */
            IntMat ker = int_kernel(transpose(out.val));
            if (ker.nrows >= r) {
                IntMat lg = log_rows(emb, out.gens);
                IntMat kl = mat_mul(ker, lg);
                for (auto& e : kl.a)
                    if (abs(e) < (Int(1) << (LOG_SCALE / 2))) e = 0;
                units_ok = rank_rat(RatMat::from_int(kl)) >= r;
            }
        }

        if (rank_ok && stable >= 2 && units_ok) return out;
    }
    throw math_error("harvest: relation search exhausted");
}

/* multiplicative basis of the unit part: combinations of gens with zero
   valuation everywhere, picked greedily so the log images stay independent */
std::vector<NFElem> extract_units(const NumberField& K, const Embeddings& emb,
                                  const HarvestResult& hv) {
    long r = K.r1 + K.r2 - 1;
    if (r == 0) return {};
    IntMat ker = int_kernel(transpose(hv.val));
    if (ker.nrows < r) throw math_error("extract_units: kernel too small");

    IntMat lg = log_rows(emb, hv.gens);
    IntMat kl = mat_mul(ker, lg);
    /* snap rounding residue of torsion combinations to exact zero */
    for (auto& e : kl.a)
        if (abs(e) < (Int(1) << (LOG_SCALE / 2))) e = 0;

    std::vector<NFElem> us;
    IntMat chosen(0, kl.ncols);
    for (long i = 0; i < ker.nrows && (long)us.size() < r; i++) {
        IntMat row(1, kl.ncols);
        for (long j = 0; j < kl.ncols; j++) row.at(0, j) = kl.at(i, j);
        IntMat cand = chosen.nrows == 0 ? row : vstack(chosen, row);
        if (rank_rat(RatMat::from_int(cand)) != cand.nrows) continue;
        NFElem u = K.one();
        for (long j = 0; j < ker.ncols; j++)
            if (ker.at(i, j) != 0) u = K.mul(u, K.pow(hv.gens[j], ker.at(i, j)));
        us.push_back(u);
        chosen = std::move(cand);
    }
    if ((long)us.size() != r) throw math_error("extract_units: rank not reached");
    return us;
}

/* enlarge the unit lattice until no product of generators is a p-th power,
   for p = 2, 3, 5, 7; each hit divides the index by p */
void saturate_units(const NumberField& K, std::vector<NFElem>& us, const NFElem& zeta, long w) {
    long r = (long)us.size();
    const std::vector<long> ps = {2, 3, 5, 7};
    bool changed = true;
    while (changed) {
        changed = false;
        for (long p : ps) {
            /* projective exponent tuples (a, e_1..e_r), first nonzero entry 1 */
            std::vector<std::vector<long>> tuples;
            std::vector<long> cur(r + 1, 0);
            for (long head = 0; head <= r; head++) {
                std::fill(cur.begin(), cur.end(), 0);
                cur[head] = 1;
                /* vary positions after head over [0,p) */
                long tail = r - head;
                long total = 1;
                for (long i = 0; i < tail; i++) total *= p;
                for (long t = 0; t < total; t++) {
                    long v = t;
                    for (long i = 0; i < tail; i++) {
                        cur[head + 1 + i] = v % p;
                        v /= p;
                    }
                    tuples.push_back(cur);
                }
            }
            for (auto& tu : tuples) {
                NFElem x = K.pow(zeta, Int(tu[0]));
                for (long i = 0; i < r; i++)
                    if (tu[i + 1] != 0) x = K.mul(x, K.pow(us[i], Int(tu[i + 1])));
                auto root = pth_root_in_field(K, x, p);
                if (!root) continue;
                bool has_unit_part = false;
                for (long i = 0; i < r; i++)
                    if (tu[i + 1] != 0) has_unit_part = true;
                if (!has_unit_part) {
                    /* a root of zeta itself: harmless when p is prime to the
                       torsion order (the root is a power of zeta), impossible
                       otherwise */
                    if (w % p == 0)
                        throw math_error("saturate_units: torsion order was not maximal");
                    continue;
                }

                /* rebuild a basis of <us, root>: the relation lattice of the
                   r+1 generators is spanned by (e_1..e_r, -p), which is
                   primitive, so the complement rows of the Smith transform
                   give the new basis */
                IntMat v0(1, r + 1);
                for (long i = 0; i < r; i++) v0.at(0, i) = tu[i + 1];
                v0.at(0, r) = -p;
                auto sr = snf(v0);
                RatMat vi = inverse_rat(RatMat::from_int(sr.v));
                std::vector<NFElem> gens2 = us;
                gens2.push_back(*root);
                std::vector<NFElem> nu;
                for (long i = 1; i <= r; i++) {
                    NFElem u = K.one();
                    for (long j = 0; j <= r; j++) {
                        const Rat& e = vi.at(i, j);
                        if (e.get_den() != 1)
                            throw math_error("saturate_units: transform not integral");
                        if (e.get_num() != 0) u = K.mul(u, K.pow(gens2[j], e.get_num()));
                    }
                    nu.push_back(u);
                }
                us = nu;
                changed = true;
                break;
            }
            if (changed) break;
        }
    }
}

long ideal_valuation(const NumberField& K, const PrimeIdeal& P, const IntMat& I) {
    long m = LONG_MAX;
    for (long i = 0; i < I.nrows; i++) {
        std::vector<Int> row(I.ncols);
        for (long j = 0; j < I.ncols; j++) row[j] = I.at(i, j);
        NFElem x{std::move(row), Int(1)};
        if (x.is_zero()) continue;
        m = std::min(m, valuation(K, P, x));
    }
    if (m == LONG_MAX) throw math_error("ideal_valuation: zero ideal");
    return m;
}

IntMat ideal_from_exps(const NumberField& K, const std::vector<PrimeIdeal>& fb,
                       const std::vector<Int>& e) {
    IntMat A = IntMat::identity(K.n);
    for (size_t j = 0; j < fb.size(); j++) {
        if (e[j] == 0) continue;
        if (e[j] < 0 || !e[j].fits_slong_p())
            throw math_error("ideal_from_exps: exponent out of range");
        A = ideal_mul(K, A, ideal_pow(K, fb[j].h, e[j].get_si()));
    }
    return A;
}

/* invariant coordinates: the positions of snf elem_div != 1 */
std::vector<long> nontrivial_positions(const std::vector<Int>& elem_div) {
    std::vector<long> pos;
    for (size_t i = 0; i < elem_div.size(); i++)
        if (elem_div[i] != 1) pos.push_back((long)i);
    return pos;
}

IntMat int_from_rat_exact(const RatMat& m) {
    IntMat r(m.nrows, m.ncols);
    for (long i = 0; i < m.nrows; i++)
        for (long j = 0; j < m.ncols; j++) {
            if (m.at(i, j).get_den() != 1) throw math_error("transform not integral");
            r.at(i, j) = m.at(i, j).get_num();
        }
    return r;
}

} // namespace

Int ClassGroup::h() const {
    Int t = 1;
    for (auto& d : invariants) t *= d;
    return t;
}

std::vector<Int> ClassGroup::dlog(const IntMat& ideal_hnf) const {
    if (invariants.empty()) return {};
    Int NI = ideal_norm(ideal_hnf);
    auto klass = [&](const std::vector<Int>& exps, int sign) {
        std::vector<Int> out(invariants.size(), Int(0));
        for (size_t j = 0; j < fb.size(); j++)
            for (size_t i = 0; i < invariants.size(); i++)
                out[i] += sign * exps[j] * fb_dlog.at((long)j, (long)i);
        for (size_t i = 0; i < invariants.size(); i++) out[i] = fdiv_r(out[i], invariants[i]);
        return out;
    };

    /* direct factorization when the support is inside the factor base */
    std::vector<Int> vp(fb.size(), Int(0));
    Int rem = NI;
    for (size_t j = 0; j < fb.size(); j++) {
        if (fdiv_r(NI, fb[j].q) != 0) continue;
        long v = ideal_valuation(*K, fb[j], ideal_hnf);
        vp[j] = v;
        for (long t = 0; t < v * fb[j].fdeg; t++) rem /= fb[j].q;
    }
    if (rem == 1) return klass(vp, +1);

    /* reduce: find gamma in I whose cofactor (gamma)/I is factor-base smooth */
    Embeddings emb = make_embeddings(*K, EMB_PREC);
    IntMat gramO = emb.t2_gram(LOG_SCALE);
    IntMat ulogs = log_rows(emb, units);
    double mu2 = unit_cover_radius(ulogs);
    double base = (double)K->n * std::pow(NI.get_d(), 2.0 / (double)K->n) * std::exp(2.0 * mu2);
    IntMat G = mat_mul(mat_mul(ideal_hnf, gramO), transpose(ideal_hnf));
    for (long attempt = 0; attempt < 10; attempt++) {
        for (auto& x : short_coords(G, base * 1.05 + 2.0, 2000000)) {
            std::vector<Int> coords = mat_vec(transpose(ideal_hnf), x);
            NFElem g{std::move(coords), Int(1)};
            Int N = abs(K->norm(g).get_num());
            if (N == 0 || fdiv_r(N, NI) != 0) continue;
            Int cof = N / NI;
            std::vector<Int> cexp(fb.size(), Int(0));
            Int check = 1;
            for (size_t j = 0; j < fb.size(); j++) {
                if (fdiv_r(cof, fb[j].q) != 0 && fdiv_r(NI, fb[j].q) != 0) continue;
                long v = valuation(*K, fb[j], g) - ideal_valuation(*K, fb[j], ideal_hnf);
                if (v < 0) throw math_error("dlog: negative cofactor valuation");
                cexp[j] = v;
                if (v != 0)
                    check *= pow_int(pow_int(fb[j].q, (unsigned long)fb[j].fdeg),
                                     (unsigned long)v);
            }
            if (check != cof) continue; /* cofactor not smooth */
            return klass(cexp, -1);
        }
        base *= 2;
    }
    throw ceiling_error("dlog: reduction search exhausted");
}

ClassGroup class_group(const NumberField& K, const ClassGroupOptions& opt) {
    ClassGroup cg;
    cg.K = &K;
    cg.grh = opt.assume_grh;
    if (!opt.assume_grh && abs(K.disc) > opt.disc_ceiling)
        throw std::invalid_argument(
            "class_group: |disc| exceeds the ceiling for the unconditional bound; "
            "pass --assume-grh to use the GRH bound at your own risk");
    Int b = minkowski_bound(K);
    if (opt.assume_grh) b = std::min(b, grh_bound(K));
    cg.bound = b;
    if (b > 1000000) throw ceiling_error("class_group: generation bound too large");

    for (long q : primes_up_to(b.get_si()))
        for (auto& P : factor_prime(K, Int(q))) cg.fb.push_back(P);

    Embeddings emb = make_embeddings(K, EMB_PREC);
    IntMat gramO = emb.t2_gram(LOG_SCALE);

    auto [zeta, w] = torsion_root(K);
    cg.zeta = zeta;
    cg.w = w;

    HarvestResult hv = harvest_relations(K, emb, gramO, cg.fb);
    cg.units = extract_units(K, emb, hv);
    saturate_units(K, cg.units, zeta, w);
    IntMat ulogs = log_rows(emb, cg.units);
    double mu2 = unit_cover_radius(ulogs);

    long k = (long)cg.fb.size();
    if (k == 0) {
        cg.rel_hnf = IntMat(0, 0);
        cg.fb_dlog = IntMat(0, 0);
        return cg;
    }

    IntMat H = hnf_lattice(hv.val);
    if (H.nrows != k) throw math_error("class_group: relation lattice rank deficient");

    /* saturate at every prime dividing the candidate order: each surviving
       torsion class is certified non-principal by a complete search */
    for (;;) {
        auto sr = snf(H);
        auto pos = nontrivial_positions(sr.elem_div);
        Int h0 = 1;
        for (auto& d : sr.elem_div) h0 *= d;
        if (h0 == 0) throw math_error("class_group: degenerate relation lattice");
        IntMat vinv = int_from_rat_exact(inverse_rat(RatMat::from_int(sr.v)));

        bool shrunk = false;
        for (auto& [p, mult] : factor_int(h0)) {
            (void)mult;
            std::vector<long> ip; /* invariant positions with p | d_i */
            for (auto j : pos)
                if (fdiv_r(sr.elem_div[j], p) == 0) ip.push_back(j);
            long t = (long)ip.size();
            if (t == 0) continue;
            if (!p.fits_slong_p() || pow_int(p, (unsigned long)t) > 4096)
                throw ceiling_error("class_group: torsion subgroup too large to certify");
            long pl = p.get_si();
            /* projective tuples over the p-torsion coordinates */
            std::vector<long> cur(t, 0);
            std::vector<std::vector<long>> tuples;
            for (long head = 0; head < t; head++) {
                std::fill(cur.begin(), cur.end(), 0);
                cur[head] = 1;
                long tail = t - head - 1, total = 1;
                for (long i = 0; i < tail; i++) total *= pl;
                for (long tt = 0; tt < total; tt++) {
                    long v = tt;
                    for (long i = 0; i < tail; i++) {
                        cur[head + 1 + i] = v % pl;
                        v /= pl;
                    }
                    tuples.push_back(cur);
                }
            }
            for (auto& tu : tuples) {
                std::vector<Int> y(k, Int(0));
                for (long i = 0; i < t; i++)
                    y[ip[i]] = Int(tu[i]) * (sr.elem_div[ip[i]] / p);
                std::vector<Int> x = mat_vec(transpose(vinv), y);
                std::vector<Int> xr = reduce_mod_hnf(H, x);
                IntMat A = ideal_from_exps(K, cg.fb, xr);
                auto g = principal_generator(K, gramO, mu2, A);
                if (!g) continue;
                /* proven relation: fold it in and start over */
                std::vector<Int> grow(k, Int(0));
                for (long j = 0; j < k; j++) grow[j] = valuation(K, cg.fb[j], *g);
                if (grow != xr) throw math_error("class_group: witness profile mismatch");
                IntMat add(1, k);
                for (long j = 0; j < k; j++) add.at(0, j) = grow[j];
                H = hnf_lattice(vstack(H, add));
                shrunk = true;
                break;
            }
            if (shrunk) break;
        }
        if (shrunk) continue;

        /* proven: assemble the presentation */
        cg.rel_hnf = H;
        for (auto j : pos) cg.invariants.push_back(sr.elem_div[j]);
        cg.fb_dlog = IntMat(k, (long)pos.size());
        for (long j = 0; j < k; j++)
            for (size_t i = 0; i < pos.size(); i++)
                cg.fb_dlog.at(j, (long)i) =
                    fdiv_r(sr.v.at(j, pos[i]), sr.elem_div[pos[i]]);
        for (size_t i = 0; i < pos.size(); i++) {
            std::vector<Int> x(k, Int(0));
            for (long j = 0; j < k; j++) x[j] = vinv.at(pos[i], j);
            std::vector<Int> xr = reduce_mod_hnf(H, x);
            cg.gen_exps.push_back(xr);
            /* witness that gen^d is principal */
            std::vector<Int> xe(k);
            for (long j = 0; j < k; j++) xe[j] = xr[j] * sr.elem_div[pos[i]];
            IntMat A = ideal_from_exps(K, cg.fb, xe);
            auto gw = principal_generator(K, gramO, mu2, A);
            if (!gw) throw math_error("class_group: generator power witness missing");
            cg.gen_witness.push_back(*gw);
        }
        return cg;
    }
}

SUnitGroup s_unit_group(const NumberField& K, const std::vector<PrimeIdeal>& S,
                        const ClassGroup& cl) {
    SUnitGroup U;
    U.K = &K;
    U.S = S;
    U.zeta = cl.zeta;
    U.w = cl.w;
    U.fund = cl.units;
    U.urank = (long)cl.units.size();
    long s = (long)S.size();
    U.val = IntMat((long)U.fund.size(), s);
    if (s == 0) return U;

    Embeddings emb = make_embeddings(K, EMB_PREC);
    IntMat gramO = emb.t2_gram(LOG_SCALE);
    IntMat ulogs = log_rows(emb, cl.units);
    double mu2 = unit_cover_radius(ulogs);

    long ninv = (long)cl.invariants.size();
    std::vector<std::vector<Int>> sdlog(s);
    for (long i = 0; i < s; i++) sdlog[i] = cl.dlog(S[i].h);

    /* the valuation lattice: exponent vectors whose ideal product is principal */
    IntMat B;
    if (ninv == 0) {
        B = IntMat::identity(s);
    } else {
        IntMat M(ninv, s + ninv);
        for (long i = 0; i < ninv; i++) {
            for (long j = 0; j < s; j++) M.at(i, j) = sdlog[j][i];
            M.at(i, s + i) = -cl.invariants[i];
        }
        IntMat ker = int_kernel(M);
        IntMat proj(ker.nrows, s);
        for (long i = 0; i < ker.nrows; i++)
            for (long j = 0; j < s; j++) proj.at(i, j) = ker.at(i, j);
        B = hnf_lattice(proj);
    }
    if (B.nrows != s) throw math_error("s_unit_group: valuation lattice rank deficient");

    /* order of each class [P] and a generator of P^order, for exponent shifts */
    std::vector<long> ord(s, 1);
    std::vector<NFElem> pgen(s);
    for (long i = 0; i < s; i++) {
        Int o = 1;
        for (long t = 0; t < ninv; t++) {
            Int d = cl.invariants[t];
            Int g = gcd(d, sdlog[i][t]);
            o = lcm(o, d / g);
        }
        if (!o.fits_slong_p()) throw ceiling_error("s_unit_group: class order too large");
        ord[i] = o.get_si();
        auto g = principal_generator(K, gramO, mu2, ideal_pow(K, S[i].h, ord[i]));
        if (!g) throw math_error("s_unit_group: principal power has no generator");
        pgen[i] = *g;
    }

    for (long bi = 0; bi < s; bi++) {
        std::vector<Int> b(s);
        for (long j = 0; j < s; j++) b[j] = B.at(bi, j);
        /* shift to nonnegative exponents by multiples of the class orders */
        std::vector<Int> kshift(s, Int(0));
        std::vector<Int> bp = b;
        for (long j = 0; j < s; j++)
            while (bp[j] < 0) {
                bp[j] += ord[j];
                kshift[j] += 1;
            }
        IntMat A = IntMat::identity(K.n);
        for (long j = 0; j < s; j++)
            if (bp[j] > 0) A = ideal_mul(K, A, ideal_pow(K, S[j].h, bp[j].get_si()));
        auto g = principal_generator(K, gramO, mu2, A);
        if (!g) throw math_error("s_unit_group: lattice vector not principal");
        NFElem gb = *g;
        for (long j = 0; j < s; j++)
            if (kshift[j] != 0) gb = K.mul(gb, K.pow(pgen[j], -kshift[j]));
        /* exact checks: valuations on S and nothing outside */
        Rat nexp(1);
        for (long j = 0; j < s; j++) {
            if (valuation(K, S[j], gb) != b[j])
                throw math_error("s_unit_group: valuation mismatch");
            Rat np(pow_int(S[j].q, (unsigned long)S[j].fdeg));
            Int e = b[j];
            while (e > 0) { nexp *= np; e -= 1; }
            while (e < 0) { nexp /= np; e += 1; }
        }
        Rat ng = K.norm(gb);
        if (!(ng == nexp || ng == -nexp))
            throw math_error("s_unit_group: support outside S");
        U.fund.push_back(gb);
    }

    U.val = IntMat((long)U.fund.size(), s);
    for (long i = 0; i < s; i++)
        for (long j = 0; j < s; j++) U.val.at(U.urank + i, j) = B.at(i, j);
    if ((long)U.fund.size() != K.r1 + K.r2 - 1 + s)
        throw math_error("s_unit_group: rank mismatch");
    return U;
}

std::vector<Int> sunit_dlog(const NFElem& gamma, const SUnitGroup& U) {
    const NumberField& K = *U.K;
    if (gamma.is_zero()) throw std::invalid_argument("sunit_dlog: zero element");
    long s = (long)U.S.size();

    std::vector<Int> vg(s);
    Rat nexp(1);
    for (long j = 0; j < s; j++) {
        vg[j] = valuation(K, U.S[j], gamma);
        Rat np(pow_int(U.S[j].q, (unsigned long)U.S[j].fdeg));
        Int e = vg[j];
        while (e > 0) { nexp *= np; e -= 1; }
        while (e < 0) { nexp /= np; e += 1; }
    }
    Rat ng = K.norm(gamma);
    if (!(ng == nexp || ng == -nexp))
        throw std::invalid_argument("sunit_dlog: not an S-unit");

    std::vector<Int> e;
    if (s > 0) {
        IntMat B(s, s);
        for (long i = 0; i < s; i++)
            for (long j = 0; j < s; j++) B.at(i, j) = U.val.at(U.urank + i, j);
        auto sol = lattice_coords(B, vg);
        if (!sol) throw math_error("sunit_dlog: valuation outside the lattice");
        e = *sol;
    }

    NFElem x = gamma;
    for (long i = 0; i < s; i++)
        if (e[i] != 0) x = K.mul(x, K.pow(U.fund[U.urank + i], -e[i]));

    Embeddings emb = make_embeddings(K, EMB_PREC);
    std::vector<NFElem> us(U.fund.begin(), U.fund.begin() + U.urank);
    IntMat ulogs = log_rows(emb, us);
    auto up = unit_part_dlog(K, emb, us, ulogs, U.zeta, U.w, x);
    if (!up) throw math_error("sunit_dlog: unit part not recognized");

    std::vector<Int> out;
    out.push_back(Int(up->first));
    for (auto& c : up->second) out.push_back(c);
    for (auto& c : e) out.push_back(c);
    return out;
}

FieldSelmerGroup field_selmer_group(const NumberField& K, long p,
                                    const std::vector<PrimeIdeal>& S,
                                    const ClassGroupOptions& opt) {
    if (p < 2 || !is_probable_prime(Int(p)))
        throw std::invalid_argument("field_selmer_group: p must be prime");
    auto sp = factor_prime(K, Int(p));
    auto same_prime = [](const PrimeIdeal& a, const PrimeIdeal& b) {
        return a.q == b.q && a.h == b.h;
    };
    if (sp.size() != S.size())
        throw std::invalid_argument("field_selmer_group: S must be all primes over p");
    for (auto& P : sp) {
        bool found = false;
        for (auto& Q : S)
            if (same_prime(P, Q)) found = true;
        if (!found)
            throw std::invalid_argument("field_selmer_group: S must be all primes over p");
    }
    if (p > 2 && poly_roots_in_field(K, cyclotomic_poly(p)).empty())
        throw std::invalid_argument(
            "field_selmer_group: the p-th roots of unity must lie in the field");

    FieldSelmerGroup F;
    F.K = &K;
    F.p = p;
    F.S = S;

    ClassGroup cl = class_group(K, opt);

    /* S' = S plus the supports of the p-part generators, closed under the
       automorphism group when the field is normal */
    std::vector<PrimeIdeal> sprime = S;
    auto add_prime = [&](const PrimeIdeal& P) {
        for (auto& Q : sprime)
            if (same_prime(P, Q)) return;
        sprime.push_back(P);
    };
    for (size_t i = 0; i < cl.invariants.size(); i++) {
        if (fdiv_r(cl.invariants[i], Int(p)) != 0) continue;
        for (size_t j = 0; j < cl.fb.size(); j++)
            if (cl.gen_exps[i][j] != 0) add_prime(cl.fb[j]);
    }

    bool normal = true;
    GaloisGroup G;
    try {
        G = automorphism_group(K);
    } catch (const math_error&) {
        normal = false;
    }
    if (normal) {
        std::map<std::string, std::vector<PrimeIdeal>> above;
        for (bool grew = true; grew;) {
            grew = false;
            size_t before = sprime.size();
            std::vector<PrimeIdeal> snapshot = sprime;
            for (auto& P : snapshot) {
                auto key = P.q.get_str();
                if (!above.count(key)) above[key] = factor_prime(K, P.q);
                for (long g = 0; g < G.order(); g++) {
                    IntMat rows(K.n, K.n);
                    for (long i = 0; i < K.n; i++) {
                        std::vector<Int> row(K.n);
                        for (long j = 0; j < K.n; j++) row[j] = P.h.at(i, j);
                        NFElem y = G.apply(g, NFElem{std::move(row), Int(1)});
                        if (y.den != 1)
                            throw math_error("field_selmer_group: image not integral");
                        for (long j = 0; j < K.n; j++) rows.at(i, j) = y.v[j];
                    }
                    IntMat img = hnf_lattice(rows);
                    bool matched = false;
                    for (auto& Q : above[key])
                        if (Q.h == img) {
                            add_prime(Q);
                            matched = true;
                        }
                    if (!matched) throw math_error("field_selmer_group: image prime not found");
                }
            }
            grew = sprime.size() > before;
        }
    }

    F.usp = s_unit_group(K, sprime, cl);

    /* quotient generators: torsion (when p divides its order), then fund */
    bool tors = F.usp.w % p == 0;
    long m = (tors ? 1 : 0) + (long)F.usp.fund.size();
    std::vector<NFElem> qgens;
    if (tors) qgens.push_back(F.usp.zeta);
    for (auto& u : F.usp.fund) qgens.push_back(u);

    /* kernel of the valuations at S' \ S, mod p */
    std::vector<long> extra; /* indices into sprime */
    for (size_t i = 0; i < sprime.size(); i++) {
        bool in_s = false;
        for (auto& Q : S)
            if (same_prime(sprime[i], Q)) in_s = true;
        if (!in_s) extra.push_back((long)i);
    }
    long shift = tors ? 1 : 0;
    FpMat E;
    if (extra.empty()) {
        E = FpMat::identity((u64)p, m);
    } else {
        FpMat D((u64)p, m, (long)extra.size());
        for (long i = shift; i < m; i++)
            for (size_t j = 0; j < extra.size(); j++)
                D.at(i, (long)j) =
                    (u64)fdiv_r(F.usp.val.at(i - shift, extra[j]), Int(p)).get_si();
        E = fp_kernel(fp_transpose(D));
    }

    for (long i = 0; i < E.nrows; i++) {
        NFElem b = K.one();
        for (long j = 0; j < m; j++)
            if (E.at(i, j) != 0) b = K.mul(b, K.pow(qgens[j], Int((long)E.at(i, j))));
        F.basis.push_back(b);
    }
    long d = (long)F.basis.size();

    /* dimension formula: rank of the S-unit group, the torsion contribution,
       and the p-torsion of the S-class group must add up */
    long dim_cls_p = 0;
    long ninv = (long)cl.invariants.size();
    if (ninv > 0) {
        IntMat M((long)S.size() + ninv, ninv);
        for (size_t i = 0; i < S.size(); i++) {
            auto dl = cl.dlog(S[i].h);
            for (long j = 0; j < ninv; j++) M.at((long)i, j) = dl[j];
        }
        for (long j = 0; j < ninv; j++) M.at((long)S.size() + j, j) = cl.invariants[j];
        auto sq = snf(hnf_lattice(M));
        for (auto& dd : sq.elem_div)
            if (dd != 0 && fdiv_r(dd, Int(p)) == 0) dim_cls_p++;
    }
    if (d != shift + (K.r1 + K.r2 - 1) + (long)S.size() + dim_cls_p)
        throw math_error("field_selmer_group: dimension formula failed");

    if (normal) {
        FpMat Et = fp_transpose(E); /* m x d, full column rank */
        for (long g = 0; g < G.order(); g++) {
            FpMat A((u64)p, d, d);
            for (long i = 0; i < d; i++) {
                auto dl = sunit_dlog(G.apply(g, F.basis[i]), F.usp);
                std::vector<u64> eps(m, 0);
                if (tors) eps[0] = (u64)fdiv_r(dl[0], Int(p)).get_si();
                for (size_t j = 0; j < F.usp.fund.size(); j++)
                    eps[shift + (long)j] = (u64)fdiv_r(dl[1 + (long)j], Int(p)).get_si();
                auto x = fp_solve(Et, eps);
                if (!x) throw math_error("field_selmer_group: image escapes the group");
                for (long j = 0; j < d; j++) A.at(j, i) = (*x)[j];
            }
            F.action.push_back(A);
        }
        if (!F.action[G.id].is_identity())
            throw math_error("field_selmer_group: identity does not act trivially");
        for (long a = 0; a < G.order(); a++)
            for (long b = 0; b < G.order(); b++)
                if (!(fp_mul(F.action[a], F.action[b]) == F.action[G.mult[a][b]]))
                    throw math_error("field_selmer_group: action is not a homomorphism");
    }

    return F;
}

} // namespace msel
