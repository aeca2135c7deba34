#include "exactmath/int_poly.hpp"
#include "exactmath/errors.hpp"
#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

namespace msel {

IntPoly IntPoly::from_long(const std::vector<long>& v) {
    std::vector<Int> c(v.size());
    for (size_t i = 0; i < v.size(); i++) c[i] = v[i];
    return IntPoly(std::move(c));
}

std::string IntPoly::str() const {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < c.size(); i++) os << (i ? "," : "") << c[i].get_str();
    os << "]";
    return os.str();
}

IntPoly ip_add(const IntPoly& a, const IntPoly& b) {
    std::vector<Int> c(std::max(a.c.size(), b.c.size()));
    for (size_t i = 0; i < c.size(); i++) c[i] = a.coeff(i) + b.coeff(i);
    return IntPoly(std::move(c));
}

IntPoly ip_sub(const IntPoly& a, const IntPoly& b) {
    std::vector<Int> c(std::max(a.c.size(), b.c.size()));
    for (size_t i = 0; i < c.size(); i++) c[i] = a.coeff(i) - b.coeff(i);
    return IntPoly(std::move(c));
}

IntPoly ip_mul(const IntPoly& a, const IntPoly& b) {
    if (a.is_zero() || b.is_zero()) return IntPoly();
    std::vector<Int> c(a.c.size() + b.c.size() - 1);
    for (size_t i = 0; i < a.c.size(); i++) {
        if (a.c[i] == 0) continue;
        for (size_t j = 0; j < b.c.size(); j++) c[i + j] += a.c[i] * b.c[j];
    }
    return IntPoly(std::move(c));
}

IntPoly ip_scale(const IntPoly& a, const Int& s) {
    std::vector<Int> c = a.c;
    for (auto& x : c) x *= s;
    return IntPoly(std::move(c));
}

std::pair<IntPoly, IntPoly> ip_divrem_monic(const IntPoly& a, const IntPoly& b) {
    if (!b.is_monic()) throw math_error("ip_divrem_monic: divisor not monic");
    IntPoly q, r = a;
    if (r.deg() < b.deg()) return {q, r};
    q.c.assign(r.deg() - b.deg() + 1, Int(0));
    while (!r.is_zero() && r.deg() >= b.deg()) {
        long d = r.deg() - b.deg();
        Int f = r.lead();
        q.c[d] = f;
        for (long i = 0; i <= b.deg(); i++) r.c[i + d] -= f * b.c[i];
        r.normalize();
    }
    q.normalize();
    return {q, r};
}

bool ip_divides(const IntPoly& g, const IntPoly& f) {
    /* exact division test, g not necessarily monic: pseudo-division guard */
    if (g.is_zero()) return f.is_zero();
    if (f.is_zero()) return true;
    if (g.deg() > f.deg()) return false;
    /* work over Q */
    std::vector<Rat> r(f.c.size());
    for (size_t i = 0; i < f.c.size(); i++) r[i] = Rat(f.c[i]);
    long dg = g.deg();
    Rat lg = Rat(g.lead());
    long dr = f.deg();
    while (dr >= dg) {
        Rat coef = r[dr] / lg;
        for (long i = 0; i <= dg; i++) r[dr - dg + i] -= coef * Rat(g.c[i]);
        dr--;
        while (dr >= 0 && r[dr] == 0 && dr >= dg) {
            /* keep scanning down */
            if (r[dr] != 0) break;
            dr--;
        }
        while (dr >= dg && r[dr] == 0) dr--;
    }
    for (auto& x : r)
        if (x != 0) return false;
    return true;
}

IntPoly ip_derivative(const IntPoly& a) {
    if (a.deg() < 1) return IntPoly();
    std::vector<Int> c(a.deg());
    for (long i = 1; i <= a.deg(); i++) c[i - 1] = a.c[i] * i;
    return IntPoly(std::move(c));
}

Int ip_eval(const IntPoly& a, const Int& x) {
    Int r = 0;
    for (long i = a.deg(); i >= 0; i--) r = r * x + a.c[i];
    return r;
}

Rat ip_eval(const IntPoly& a, const Rat& x) {
    Rat r = 0;
    for (long i = a.deg(); i >= 0; i--) r = r * x + Rat(a.c[i]);
    return r;
}

Int ip_content(const IntPoly& a) {
    Int g = 0;
    for (auto& x : a.c) g = gcd(g, x);
    return g;
}

IntPoly ip_primitive(const IntPoly& a) {
    Int g = ip_content(a);
    if (g == 0 || g == 1) return a;
    std::vector<Int> c = a.c;
    for (auto& x : c) x /= g;
    return IntPoly(std::move(c));
}

FpPoly ip_mod_p(const IntPoly& a, u64 p) {
    FpPoly r(p);
    r.c.resize(a.c.size());
    for (size_t i = 0; i < a.c.size(); i++) {
        Int v = fdiv_r(a.c[i], Int((unsigned long)p));
        r.c[i] = v.get_ui();
    }
    r.normalize();
    return r;
}

Int ip_resultant(const IntPoly& f, const IntPoly& g) {
    long m = f.deg(), n = g.deg();
    if (m < 0 || n < 0) return 0;
    if (m == 0) return pow_int(f.c[0], n);
    if (n == 0) return pow_int(g.c[0], m);
    IntMat s(m + n, m + n);
    for (long i = 0; i < n; i++)
        for (long j = 0; j <= m; j++) s.at(i, i + j) = f.c[m - j];
    for (long i = 0; i < m; i++)
        for (long j = 0; j <= n; j++) s.at(n + i, i + j) = g.c[n - j];
    return det_int(s);
}

Int ip_discriminant(const IntPoly& f) {
    if (!f.is_monic()) throw math_error("ip_discriminant: not monic");
    long n = f.deg();
    Int r = ip_resultant(f, ip_derivative(f));
    return ((n * (n - 1) / 2) % 2 == 0) ? r : -r;
}

long ip_count_real_roots(const IntPoly& f) {
    /* Sturm: sign variations at -inf minus at +inf */
    std::vector<IntPoly> chain;
    chain.push_back(ip_primitive(f));
    chain.push_back(ip_primitive(ip_derivative(f)));
    while (!chain.back().is_zero() && chain.back().deg() > 0) {
        /* pseudo-remainder of the previous two, sign-corrected */
        const IntPoly& a = chain[chain.size() - 2];
        const IntPoly& b = chain.back();
        /* multiply a by lead(b)^(deg a - deg b + 1) for integer division */
        Int lb = b.lead();
        long k = a.deg() - b.deg() + 1;
        IntPoly r = ip_scale(a, pow_int(lb, (unsigned long)k));
        while (!r.is_zero() && r.deg() >= b.deg()) {
            long d = r.deg() - b.deg();
            Int coef = r.lead() / lb;
            for (long i = 0; i <= b.deg(); i++) r.c[i + d] -= coef * b.c[i];
            r.normalize();
        }
        /* ensure positive pseudo-remainder scaling did not flip sign parity: we
           multiplied by lb^k; if lb < 0 and k odd the remainder sign flipped */
        if (lb < 0 && k % 2 == 1) r = ip_scale(r, Int(-1));
        chain.push_back(ip_primitive(ip_scale(r, Int(-1))));
    }
    auto sign_at_inf = [&](int dir) {
        /* dir=+1 for +inf, -1 for -inf */
        std::vector<int> signs;
        for (auto& p : chain) {
            if (p.is_zero()) continue;
            int s = sgn(p.lead());
            if (dir < 0 && p.deg() % 2 == 1) s = -s;
            signs.push_back(s);
        }
        int var = 0;
        for (size_t i = 1; i < signs.size(); i++)
            if (signs[i] != signs[i - 1]) var++;
        return var;
    };
    return sign_at_inf(-1) - sign_at_inf(+1);
}

namespace {

/* lift factorization f = prod(g_i) mod q to mod q^e (f monic, g_i pairwise coprime mod q) */
std::vector<IntPoly> hensel_lift_factors(const IntPoly& f, std::vector<FpPoly> gs, u64 q,
                                         long e) {
    /* binary split: f = G * H, lift pair, recurse */
    std::function<std::vector<IntPoly>(const IntPoly&, std::vector<FpPoly>)> rec =
        [&](const IntPoly& target, std::vector<FpPoly> parts) -> std::vector<IntPoly> {
        if (parts.size() == 1) {
            /* target itself reduced mod q^e, made monic-consistent: target is monic */
            return {target};
        }
        size_t half = parts.size() / 2;
        FpPoly G0(q), H0(q);
        G0 = FpPoly::constant(q, 1);
        H0 = FpPoly::constant(q, 1);
        std::vector<FpPoly> l(parts.begin(), parts.begin() + half),
            r(parts.begin() + half, parts.end());
        for (auto& x : l) G0 = fpp_mul(G0, x);
        for (auto& x : r) H0 = fpp_mul(H0, x);
        /* Hensel: lift G0,H0 with G0*H0 = target mod q to mod q^e (linear steps) */
        FppXgcd bez = fpp_xgcd(G0, H0);
        if (bez.g.deg() != 0) throw math_error("hensel: factors not coprime");
        /* s*G0 + t*H0 = 1 mod q */
        FpPoly s = bez.s, t = bez.t;
        Int qk(1);
        Int qe = pow_int(Int(q), (unsigned long)e);
        /* integer lifts with coefficients in symmetric range */
        auto lift_sym = [&](const FpPoly& a) {
            std::vector<Int> c(a.c.size());
            for (size_t i = 0; i < a.c.size(); i++) {
                Int v((unsigned long)a.c[i]);
                if (2 * v > Int((unsigned long)q)) v -= Int((unsigned long)q);
                c[i] = v;
            }
            return IntPoly(std::move(c));
        };
        IntPoly G = lift_sym(G0), H = lift_sym(H0);
        /* force monic leading coefficients working mod q^e */
        Int modulus(q);
        while (modulus < qe) {
            /* error E = target - G*H; coefficientwise divisible by modulus */
            IntPoly E = ip_sub(target, ip_mul(G, H));
            bool zero = true;
            for (auto& x : E.c)
                if (fdiv_r(x, qe) != 0) { zero = false; break; }
            if (zero) break;
            IntPoly Ediv;
            Ediv.c.resize(E.c.size());
            for (size_t i = 0; i < E.c.size(); i++) Ediv.c[i] = E.c[i] / modulus;
            Ediv.normalize();
            /* corrections: dG = t*Ediv mod G (mod q), dH = s*Ediv mod H */
            FpPoly ebar = ip_mod_p(Ediv, q);
            FpPoly dg = fpp_mod(fpp_mul(t, ebar), ip_mod_p(G, q));
            FpPoly dh = fpp_mod(fpp_mul(s, ebar), ip_mod_p(H, q));
            G = ip_add(G, ip_scale(lift_sym(dg), modulus));
            H = ip_add(H, ip_scale(lift_sym(dh), modulus));
            /* re-reduce coefficients into symmetric range mod modulus*q */
            modulus *= q;
            auto resym = [&](IntPoly& P) {
                Int m2 = modulus;
                for (auto& x : P.c) {
                    x = fdiv_r(x, m2);
                    if (2 * x > m2) x -= m2;
                }
                P.normalize();
            };
            resym(G);
            resym(H);
        }
        std::vector<IntPoly> L = rec(G, l), R = rec(H, r);
        L.insert(L.end(), R.begin(), R.end());
        return L;
    };
    return rec(f, std::move(gs));
}

} // namespace

std::vector<std::pair<IntPoly, int>> ip_factor_monic(const IntPoly& f0) {
    if (!f0.is_monic()) throw math_error("ip_factor_monic: not monic");
    std::vector<std::pair<IntPoly, int>> out;
    IntPoly f = f0;
    if (f.deg() <= 0) return out;
    /* squarefree reduction over Z: f / gcd(f, f') via repeated exact division */
    IntPoly fp_ = ip_derivative(f);
    /* gcd over Q via subresultant-free approach: use factor multiplicities later.
       Simple route: find squarefree part by dividing out repeated irreducible factors
       discovered at the end.  First factor the squarefree part of f. */
    /* detect squarefree: disc != 0 */
    Int disc = ip_discriminant(f);
    if (disc == 0) {
        /* peel: g = gcd(f, f') computed over Q by Euclid with rational arithmetic */
        /* rational gcd: convert to monic rational polys */
        std::vector<Rat> a(f.c.size()), b(fp_.c.size());
        for (size_t i = 0; i < f.c.size(); i++) a[i] = Rat(f.c[i]);
        for (size_t i = 0; i < fp_.c.size(); i++) b[i] = Rat(fp_.c[i]);
        auto rdeg = [](const std::vector<Rat>& v) {
            long d = (long)v.size() - 1;
            while (d >= 0 && v[d] == 0) d--;
            return d;
        };
        std::vector<Rat> A = a, B = b;
        while (rdeg(B) >= 0) {
            long db = rdeg(B);
            while (rdeg(A) >= db) {
                long da = rdeg(A);
                Rat coef = A[da] / B[db];
                for (long i = 0; i <= db; i++) A[da - db + i] -= coef * B[i];
            }
            std::swap(A, B);
        }
        long dg = rdeg(A);
        /* normalize to primitive integer poly */
        Int den(1);
        for (long i = 0; i <= dg; i++) den = lcm(den, A[i].get_den());
        std::vector<Int> gc(dg + 1);
        for (long i = 0; i <= dg; i++) gc[i] = Int(A[i] * Rat(den));
        IntPoly g = ip_primitive(IntPoly(std::move(gc)));
        if (g.lead() < 0) g = ip_scale(g, Int(-1));
        /* f = g * h; factor h (squarefree-ish) and g recursively, merge */
        if (g.deg() >= 1) {
            /* make g monic: it divides monic f so it is +-monic after primitive part */
            if (!g.is_monic()) throw math_error("ip_factor_monic: gcd not monic");
            IntPoly h = ip_divrem_monic(f, g).first;
            auto fg = ip_factor_monic(g);
            auto fh = ip_factor_monic(h);
            std::map<std::string, std::pair<IntPoly, int>> merge;
            for (auto& [pg, m] : fg) merge[pg.str()].first = pg, merge[pg.str()].second += m;
            for (auto& [ph, m] : fh) merge[ph.str()].first = ph, merge[ph.str()].second += m;
            for (auto& [k, v] : merge) out.push_back(v);
            return out;
        }
    }
    /* f squarefree here; pick q with f mod q squarefree */
    u64 q = 0;
    for (long cand : primes_up_to(10000)) {
        FpPoly fq = ip_mod_p(f, (u64)cand);
        if (fq.deg() != f.deg()) continue;
        if (fpp_is_squarefree(fq)) { q = (u64)cand; break; }
    }
    if (!q) throw math_error("ip_factor_monic: no good prime found");
    FpPoly fq = ip_mod_p(f, q);
    auto modfac = fpp_factor(fq);
    std::vector<FpPoly> parts;
    for (auto& [g, m] : modfac) {
        if (m != 1) throw math_error("ip_factor_monic: unexpected multiplicity");
        parts.push_back(g);
    }
    if (parts.size() == 1) { out.push_back({f, 1}); return out; }
    /* coefficient bound and lifting exponent */
    Int maxc(0);
    for (auto& x : f.c) maxc = std::max(maxc, Int(abs(x)));
    Int bound = (maxc + 1) * pow_int(Int(2), (unsigned long)(f.deg() + 2)) * Int(f.deg() + 1);
    long e = 1;
    Int qe(q);
    while (qe < 2 * bound) { qe *= q; e++; }
    std::vector<IntPoly> lifted = hensel_lift_factors(f, parts, q, e);
    /* subset recombination */
    long r = (long)lifted.size();
    std::vector<bool> used(r, false);
    IntPoly rem = f;
    auto sym = [&](Int v) {
        v = fdiv_r(v, qe);
        if (2 * v > qe) v -= qe;
        return v;
    };
    for (long card = 1; card <= r; card++) {
        bool progress = true;
        while (progress) {
            progress = false;
            /* iterate subsets of given cardinality over unused indices */
            std::vector<long> avail;
            for (long i = 0; i < r; i++)
                if (!used[i]) avail.push_back(i);
            if ((long)avail.size() < card) break;
            std::vector<long> idx(card);
            for (long i = 0; i < card; i++) idx[i] = i;
            for (;;) {
                /* candidate = product of chosen, coefficients symmetric mod q^e */
                IntPoly cand({Int(1)});
                for (long i = 0; i < card; i++) cand = ip_mul(cand, lifted[avail[idx[i]]]);
                for (auto& x : cand.c) x = sym(x);
                cand.normalize();
                if (cand.is_monic() && !cand.is_zero()) {
                    auto [quo, remp] = ip_divrem_monic(rem, cand);
                    if (remp.is_zero()) {
                        out.push_back({cand, 1});
                        for (long i = 0; i < card; i++) used[avail[idx[i]]] = true;
                        rem = quo;
                        progress = true;
                        break;
                    }
                }
                /* next subset */
                long i = card - 1;
                while (i >= 0 && idx[i] == (long)avail.size() - card + i) i--;
                if (i < 0) break;
                idx[i]++;
                for (long j = i + 1; j < card; j++) idx[j] = idx[j - 1] + 1;
            }
        }
    }
    if (rem.deg() > 0) out.push_back({rem, 1});
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
        if (x.first.deg() != y.first.deg()) return x.first.deg() < y.first.deg();
        return x.first.c < y.first.c;
    });
    return out;
}

bool ip_is_irreducible_monic(const IntPoly& f) {
    if (f.deg() <= 0) return false;
    if (f.deg() == 1) return true;
    if (ip_discriminant(f) == 0) return false;
    auto fac = ip_factor_monic(f);
    return fac.size() == 1 && fac[0].second == 1;
}

std::vector<Int> ip_integer_roots_monic(const IntPoly& f) {
    std::vector<Int> out;
    if (f.deg() < 1) return out;
    Int c0 = f.c[0];
    if (c0 == 0) {
        out.push_back(0);
        /* divide out x and recurse */
        IntPoly g(std::vector<Int>(f.c.begin() + 1, f.c.end()));
        for (auto& r : ip_integer_roots_monic(g))
            if (r != 0) out.push_back(r);
        std::sort(out.begin(), out.end());
        return out;
    }
    /* enumerate divisors of |c0| */
    auto fac = factor_int(c0);
    std::vector<Int> divs{Int(1)};
    for (auto& [pr, e] : fac) {
        size_t base = divs.size();
        Int pk(1);
        for (int k = 1; k <= e; k++) {
            pk *= pr;
            for (size_t i = 0; i < base; i++) divs.push_back(divs[i] * pk);
        }
    }
    for (auto& d : divs) {
        if (ip_eval(f, d) == 0) out.push_back(d);
        if (ip_eval(f, Int(-d)) == 0) out.push_back(Int(-d));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace msel
