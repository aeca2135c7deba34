#include "exactmath/fp_poly.hpp"
#include "exactmath/errors.hpp"
#include <algorithm>
#include <functional>
#include <sstream>

namespace msel {

void FpPoly::normalize() {
    for (auto& x : c) x %= p;
    while (!c.empty() && c.back() == 0) c.pop_back();
}

std::string FpPoly::str() const {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < c.size(); i++) os << (i ? "," : "") << c[i];
    os << "]_" << p;
    return os.str();
}

FpPoly FpPoly::xpow(u64 p, long n) {
    FpPoly r(p);
    r.c.assign(n + 1, 0);
    r.c[n] = 1;
    return r;
}

FpPoly FpPoly::constant(u64 p, u64 v) {
    FpPoly r(p);
    r.c = {v % p};
    r.normalize();
    return r;
}

FpPoly fpp_add(const FpPoly& a, const FpPoly& b) {
    FpPoly r(a.p);
    r.c.resize(std::max(a.c.size(), b.c.size()), 0);
    for (size_t i = 0; i < r.c.size(); i++) r.c[i] = (a.coeff(i) + b.coeff(i)) % a.p;
    r.normalize();
    return r;
}

FpPoly fpp_sub(const FpPoly& a, const FpPoly& b) {
    FpPoly r(a.p);
    r.c.resize(std::max(a.c.size(), b.c.size()), 0);
    for (size_t i = 0; i < r.c.size(); i++)
        r.c[i] = (a.coeff(i) + a.p - b.coeff(i) % a.p) % a.p;
    r.normalize();
    return r;
}

FpPoly fpp_mul(const FpPoly& a, const FpPoly& b) {
    if (a.is_zero() || b.is_zero()) return FpPoly(a.p);
    FpPoly r(a.p);
    r.c.assign(a.c.size() + b.c.size() - 1, 0);
    for (size_t i = 0; i < a.c.size(); i++) {
        if (!a.c[i]) continue;
        for (size_t j = 0; j < b.c.size(); j++)
            r.c[i + j] = (r.c[i + j] + mulmod_u64(a.c[i], b.c[j], a.p)) % a.p;
    }
    r.normalize();
    return r;
}

FpPoly fpp_scale(const FpPoly& a, u64 s) {
    FpPoly r = a;
    for (auto& x : r.c) x = mulmod_u64(x, s % a.p, a.p);
    r.normalize();
    return r;
}

std::pair<FpPoly, FpPoly> fpp_divrem(const FpPoly& a, const FpPoly& b) {
    if (b.is_zero()) throw math_error("fpp_divrem: division by zero");
    FpPoly q(a.p), r = a;
    if (r.deg() < b.deg()) return {q, r};
    q.c.assign(r.deg() - b.deg() + 1, 0);
    u64 linv = invmod_u64(b.lead(), a.p);
    while (!r.is_zero() && r.deg() >= b.deg()) {
        long d = r.deg() - b.deg();
        u64 f = mulmod_u64(r.lead(), linv, a.p);
        q.c[d] = f;
        for (long i = 0; i <= b.deg(); i++)
            r.c[i + d] = (r.c[i + d] + a.p - mulmod_u64(f, b.c[i], a.p)) % a.p;
        r.normalize();
    }
    q.normalize();
    return {q, r};
}

FpPoly fpp_mod(const FpPoly& a, const FpPoly& b) { return fpp_divrem(a, b).second; }

FpPoly fpp_monic(const FpPoly& a) {
    if (a.is_zero()) return a;
    return fpp_scale(a, invmod_u64(a.lead(), a.p));
}

FpPoly fpp_gcd(FpPoly a, FpPoly b) {
    while (!b.is_zero()) {
        FpPoly r = fpp_mod(a, b);
        a = b;
        b = r;
    }
    return fpp_monic(a);
}

FppXgcd fpp_xgcd(const FpPoly& a, const FpPoly& b) {
    FpPoly r0 = a, r1 = b;
    FpPoly s0 = FpPoly::constant(a.p, 1), s1(a.p);
    FpPoly t0(a.p), t1 = FpPoly::constant(a.p, 1);
    while (!r1.is_zero()) {
        auto [q, r] = fpp_divrem(r0, r1);
        r0 = r1; r1 = r;
        FpPoly ns = fpp_sub(s0, fpp_mul(q, s1)); s0 = s1; s1 = ns;
        FpPoly nt = fpp_sub(t0, fpp_mul(q, t1)); t0 = t1; t1 = nt;
    }
    if (!r0.is_zero()) {
        u64 inv = invmod_u64(r0.lead(), a.p);
        r0 = fpp_scale(r0, inv);
        s0 = fpp_scale(s0, inv);
        t0 = fpp_scale(t0, inv);
    }
    return {r0, s0, t0};
}

FpPoly fpp_derivative(const FpPoly& a) {
    FpPoly r(a.p);
    if (a.deg() < 1) return r;
    r.c.assign(a.deg(), 0);
    for (long i = 1; i <= a.deg(); i++) r.c[i - 1] = mulmod_u64(a.c[i], i % a.p, a.p);
    r.normalize();
    return r;
}

FpPoly fpp_powmod(const FpPoly& a, const Int& e, const FpPoly& m) {
    FpPoly r = FpPoly::constant(a.p, 1), b = fpp_mod(a, m);
    Int k = e;
    while (k > 0) {
        if (mpz_odd_p(k.get_mpz_t())) r = fpp_mod(fpp_mul(r, b), m);
        b = fpp_mod(fpp_mul(b, b), m);
        k >>= 1;
    }
    return r;
}

u64 fpp_eval(const FpPoly& a, u64 x) {
    u64 r = 0;
    for (long i = a.deg(); i >= 0; i--) r = (mulmod_u64(r, x, a.p) + a.c[i]) % a.p;
    return r;
}

bool fpp_is_squarefree(const FpPoly& a) {
    if (a.deg() <= 0) return true;
    return fpp_gcd(a, fpp_derivative(a)).deg() == 0;
}

namespace {

/* distinct-degree: list of (product of irreducibles of degree d, d) */
std::vector<std::pair<FpPoly, long>> ddf(const FpPoly& f) {
    std::vector<std::pair<FpPoly, long>> out;
    FpPoly g = fpp_monic(f);
    FpPoly h = FpPoly::xpow(f.p, 1); /* x^(p^d) mod g, updated */
    long d = 0;
    while (g.deg() >= 1) {
        d++;
        if (2 * d > g.deg()) { out.push_back({g, g.deg()}); break; }
        h = fpp_powmod(h, Int((unsigned long)f.p), g);
        FpPoly t = fpp_gcd(fpp_sub(h, FpPoly::xpow(f.p, 1)), g);
        if (t.deg() > 0) {
            out.push_back({t, d});
            g = fpp_divrem(g, t).first;
            h = fpp_mod(h, g);
        }
    }
    return out;
}

/* equal-degree splitting, Cantor-Zassenhaus; f squarefree, all factors of degree d */
void edf(const FpPoly& f, long d, std::vector<FpPoly>& out, std::mt19937_64& rng) {
    if (f.deg() == d) { out.push_back(fpp_monic(f)); return; }
    u64 p = f.p;
    for (;;) {
        FpPoly a(p);
        a.c.resize(f.deg());
        for (auto& x : a.c) x = rng() % p;
        a.normalize();
        if (a.deg() < 1) continue;
        FpPoly g = fpp_gcd(a, f);
        if (g.deg() > 0 && g.deg() < f.deg()) {
            edf(g, d, out, rng);
            edf(fpp_divrem(f, g).first, d, out, rng);
            return;
        }
        FpPoly b;
        if (p == 2) {
            /* trace map over F_{2^d}: a + a^2 + a^4 + ... */
            b = FpPoly(p);
            FpPoly t = a;
            for (long i = 0; i < d; i++) {
                b = fpp_add(b, t);
                t = fpp_mod(fpp_mul(t, t), f);
            }
        } else {
            Int e = (pow_int(Int((unsigned long)p), (unsigned long)d) - 1) / 2;
            b = fpp_sub(fpp_powmod(a, e, f), FpPoly::constant(p, 1));
        }
        g = fpp_gcd(b, f);
        if (g.deg() > 0 && g.deg() < f.deg()) {
            edf(g, d, out, rng);
            edf(fpp_divrem(f, g).first, d, out, rng);
            return;
        }
    }
}

} // namespace

std::vector<std::pair<FpPoly, int>> fpp_factor(const FpPoly& a) {
    if (a.deg() < 0) throw math_error("fpp_factor: zero polynomial");
    std::vector<std::pair<FpPoly, int>> out;
    if (a.deg() == 0) return out;
    /* squarefree decomposition by repeated gcd with derivative (handles p-th powers) */
    std::mt19937_64 rng(0x5e1f5eed);
    FpPoly f = fpp_monic(a);
    int mult_scale = 1;
    std::vector<std::pair<FpPoly, int>> square_free_parts; /* (squarefree poly, multiplicity) */
    std::function<void(FpPoly, int)> sqf = [&](FpPoly g, int m) {
        FpPoly gp = fpp_derivative(g);
        if (gp.is_zero()) {
            /* g = h(x^p); take p-th root of coefficients (F_p: identity) */
            FpPoly h(g.p);
            h.c.resize(g.deg() / g.p + 1);
            for (size_t i = 0; i < h.c.size(); i++) h.c[i] = g.coeff(i * g.p);
            h.normalize();
            sqf(h, m * (int)g.p);
            return;
        }
        FpPoly c0 = fpp_gcd(g, gp);
        FpPoly w = fpp_divrem(g, c0).first; /* product of factors with mult not div by p */
        int i = 1;
        while (w.deg() > 0) {
            FpPoly y = fpp_gcd(w, c0);
            FpPoly z = fpp_divrem(w, y).first; /* factors of exact multiplicity i */
            if (z.deg() > 0) square_free_parts.push_back({z, m * i});
            w = y;
            c0 = fpp_divrem(c0, y).first;
            i++;
        }
        if (c0.deg() > 0) sqf(c0, m);
    };
    sqf(f, mult_scale);
    for (auto& [sf, mult] : square_free_parts) {
        for (auto& [prod, d] : ddf(sf)) {
            std::vector<FpPoly> irr;
            edf(prod, d, irr, rng);
            for (auto& g : irr) out.push_back({g, mult});
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
        if (x.first.deg() != y.first.deg()) return x.first.deg() < y.first.deg();
        return x.first.c < y.first.c;
    });
    return out;
}

bool fpp_is_irreducible(const FpPoly& a) {
    if (a.deg() <= 0) return false;
    if (a.deg() == 1) return true;
    if (!fpp_is_squarefree(a)) return false;
    auto dd = ddf(fpp_monic(a));
    return dd.size() == 1 && dd[0].second == a.deg();
}

std::vector<u64> fpp_roots(const FpPoly& a) {
    std::vector<u64> out;
    if (a.deg() < 1) return out;
    /* gcd with x^p - x isolates the linear part */
    FpPoly xp = fpp_powmod(FpPoly::xpow(a.p, 1), Int((unsigned long)a.p), a);
    FpPoly lin = fpp_gcd(fpp_sub(xp, FpPoly::xpow(a.p, 1)), a);
    if (a.p <= 4096) {
        for (u64 x = 0; x < a.p; x++)
            if (fpp_eval(lin, x) == 0) out.push_back(x);
    } else {
        for (auto& [g, m] : fpp_factor(lin))
            if (g.deg() == 1) out.push_back((g.p - g.c[0] % g.p) % g.p);
        std::sort(out.begin(), out.end());
    }
    return out;
}

FqCtx FqCtx::make(u64 p, long f) {
    if (f == 1) return FqCtx(FpPoly(p, {0, 1}));
    /* deterministic scan for a monic irreducible of degree f */
    std::vector<u64> c(f + 1, 0);
    c[f] = 1;
    for (;;) {
        FpPoly m(p, c);
        if (m.deg() == f && fpp_is_irreducible(m)) return FqCtx(m);
        /* increment base-p counter over the low coefficients */
        long i = 0;
        while (i < f) {
            c[i] = (c[i] + 1) % p;
            if (c[i] != 0) break;
            i++;
        }
        if (i == f) throw math_error("FqCtx::make: no irreducible found");
    }
}

FpPoly FqCtx::inv(const FpPoly& a) const {
    FpPoly r = reduce(a);
    if (r.is_zero()) throw math_error("FqCtx::inv: zero");
    FppXgcd x = fpp_xgcd(r, modulus);
    if (x.g.deg() != 0) throw math_error("FqCtx::inv: modulus not irreducible?");
    return reduce(x.s);
}

FpPoly FqCtx::pow(const FpPoly& a, const Int& e) const {
    if (e < 0) return pow(inv(a), -e);
    return fpp_powmod(a, e, modulus);
}

FpPoly FqCtx::pth_root(const FpPoly& a) const {
    /* Frobenius has order f; inverse = power p^(f-1) */
    Int e = pow_int(Int((unsigned long)p), (unsigned long)(f - 1));
    return pow(a, e);
}

std::vector<u64> FqCtx::coords(const FpPoly& a) const {
    std::vector<u64> v(f, 0);
    for (long i = 0; i <= a.deg() && i < f; i++) v[i] = a.c[i];
    return v;
}

FpPoly FqCtx::from_coords(const std::vector<u64>& v) const {
    return FpPoly(p, v);
}

std::vector<FpPoly> FqCtx::solve_artin_schreier(const FpPoly& c, const FpPoly& d) const {
    /* t^p + c t = d: F_p-linear in t; build the f x f matrix on the power basis */
    FpMat M(p, f, f);
    for (long j = 0; j < f; j++) {
        FpPoly bj = reduce(FpPoly::xpow(p, j));
        FpPoly img = add(pow(bj, Int((unsigned long)p)), mul(c, bj));
        auto v = coords(img);
        for (long i = 0; i < f; i++) M.at(i, j) = v[i];
    }
    auto part = fp_solve(M, coords(reduce(d)));
    std::vector<FpPoly> sols;
    if (!part) return sols;
    FpMat K = fp_kernel(M);
    /* enumerate particular + kernel span (kernel dim <= 1 here, but stay general) */
    long kd = K.nrows;
    long total = 1;
    for (long i = 0; i < kd; i++) total *= (long)p;
    for (long idx = 0; idx < total; idx++) {
        std::vector<u64> v = *part;
        long t = idx;
        for (long i = 0; i < kd; i++) {
            u64 coef = t % p;
            t /= p;
            for (long j = 0; j < f; j++) v[j] = (v[j] + mulmod_u64(coef, K.at(i, j), p)) % p;
        }
        sols.push_back(from_coords(v));
    }
    return sols;
}

} // namespace msel
