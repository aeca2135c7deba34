#include "numfield/local.hpp"
#include "exactmath/errors.hpp"

#include <algorithm>

namespace msel {

long local_precision_exponent(long p, long e) {
    return (2 * p * e) / (p - 1) + 1;
}

namespace {

/* y with y * m = v mod lattice; throws when unsolvable */
std::vector<Int> must_solve(const IntMat& m, const std::vector<Int>& v, const IntMat& lam,
                            const char* what) {
    auto z = solve_mul_congruence(m, v, lam);
    if (!z) throw math_error(std::string("local_kummer_at: ") + what);
    return *z;
}

} // namespace

LocalKummer local_kummer_at(const NumberField& K, const PrimeIdeal& P, const NFElem& u) {
    long p = (long)P.q.get_ui();
    long e = P.e;
    if ((e % (p - 1)) != 0)
        throw math_error("local_kummer_at: (p-1) must divide e; mu_p not in the completion");
    long j0 = e * p / (p - 1);
    long N = local_precision_exponent(p, e);
    long n = K.n;

    if (valuation(K, P, u) != 0) throw math_error("local_kummer_at: u must be a unit at P");

    /* lattice powers P^0..P^N */
    std::vector<IntMat> pk(N + 1);
    pk[0] = IntMat::identity(n);
    for (long k = 1; k <= N; k++) pk[k] = (k == 1) ? P.h : ideal_mul(K, pk[k - 1], P.h);
    const IntMat& LN = pk[N];

    /* move u into O/P^N: z * den = num mod P^{N + e*t} */
    std::vector<Int> ucur;
    {
        Int d = u.den;
        long t = 0;
        Int dd = d;
        while (fdiv_r(dd, P.q) == 0) { dd /= P.q; t++; }
        IntMat lam = (t == 0) ? LN : ideal_pow(K, P.h, N + e * t);
        ucur = must_solve(scalar_mat(n, d), u.v, lam, "unit reduction");
        ucur = reduce_mod_hnf(LN, std::move(ucur));
    }

    FqCtx fq = P.rf.fq();
    NFElem one = K.one();

    /* epsilon = coefficient of p at level e: solve pi^e * y = p mod P^{e+1} */
    NFElem pie = K.pow(P.pi, Int(e));
    std::vector<Int> pel(n);
    for (long i = 0; i < n; i++) pel[i] = one.v[i] * P.q;
    FpPoly eps = P.rf.to_fq(NFElem(must_solve(K.mul_matrix(pie), pel, pk[e + 1], "epsilon")));

    LocalKummer out;
    long iterations = 0;
    while (true) {
        if (++iterations > 4 * N + 8) throw math_error("local_kummer_at: no progress");
        std::vector<Int> diff(n);
        for (long i = 0; i < n; i++) diff[i] = ucur[i] - one.v[i];
        diff = reduce_mod_hnf(LN, std::move(diff));
        bool zero = true;
        for (auto& x : diff) if (x != 0) { zero = false; break; }
        if (zero) { out.pth_power = true; out.unram_class = true; return out; }

        NFElem w(diff);
        long j = valuation(K, P, w);
        if (j > j0) { out.pth_power = true; out.unram_class = true; return out; }

        FpPoly c;
        {
            NFElem pij = K.pow(P.pi, Int(j));
            c = P.rf.to_fq(NFElem(must_solve(K.mul_matrix(pij), w.v, pk[j + 1], "coefficient")));
        }

        FpPoly s0;
        long step; /* valuation of t - 1 */
        if (j == j0) {
            out.unram_class = true;
            auto sols = fq.solve_artin_schreier(eps, c);
            if (sols.empty()) { out.pth_power = false; return out; }
            std::sort(sols.begin(), sols.end(),
                      [](const FpPoly& a, const FpPoly& b) { return a.c < b.c; });
            s0 = sols[0];
            step = e / (p - 1);
        } else if (j % p == 0) {
            s0 = fq.pth_root(c);
            step = j / p;
        } else {
            out.pth_power = false;
            out.unram_class = false;
            return out;
        }

        /* t = 1 + lift(s0) * pi^step; replace u by u / t^p inside O/P^N */
        NFElem t = K.add(one, K.mul(P.rf.lift(K, s0), K.pow(P.pi, Int(step))));
        std::vector<Int> tinv = must_solve(K.mul_matrix(t), one.v, LN, "unit inverse");
        NFElem acc(ucur);
        NFElem ti(tinv);
        for (long i = 0; i < p; i++) {
            acc = K.mul(acc, ti);
            acc = NFElem(reduce_mod_hnf(LN, acc.v));
        }
        ucur = acc.v;
    }
}

} // namespace msel
