#include "numfield/embeddings.hpp"
#include "exactmath/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace msel {

Int hp_mul(const Int& a, const Int& b, long prec) { return rdiv_q(a * b, Int(1) << prec); }

Int hp_div(const Int& a, const Int& b, long prec) {
    if (b == 0) throw math_error("hp_div: zero divisor");
    return rdiv_q(a << prec, b);
}

Int hp_sqrt(const Int& a, long prec) {
    if (a < 0) throw math_error("hp_sqrt: negative");
    return isqrt(a << prec);
}

double hp_to_double(const Int& a, long prec) { return a.get_d() * std::ldexp(1.0, (int)-prec); }

namespace {

/* atanh(1/q) * 2^prec for integer q >= 2, by the odd series */
Int atanh_inv(long q, long prec) {
    Int one = Int(1) << prec;
    Int s = 0, pw(q);
    Int q2 = Int(q) * q;
    for (long i = 1;; i += 2) {
        Int term = rdiv_q(one, pw * i);
        if (term == 0) break;
        s += term;
        pw *= q2;
    }
    return s;
}

/* atan(1/q) * 2^prec, alternating odd series */
Int atan_inv(long q, long prec) {
    Int one = Int(1) << prec;
    Int s = 0, pw(q);
    Int q2 = Int(q) * q;
    for (long i = 1;; i += 2) {
        Int term = rdiv_q(one, pw * i);
        if (term == 0) break;
        if ((i / 2) % 2 == 0) s += term;
        else s -= term;
        pw *= q2;
    }
    return s;
}

constexpr long GUARD = 64;

} // namespace

Int hp_ln2(long prec) { return rdiv_q(2 * atanh_inv(3, prec + GUARD), Int(1) << GUARD); }

Int hp_pi(long prec) {
    long wp = prec + GUARD;
    Int v = 16 * atan_inv(5, wp) - 4 * atan_inv(239, wp);
    return rdiv_q(v, Int(1) << GUARD);
}

Int hp_ln(const Int& a, long prec) {
    if (a <= 0) throw math_error("hp_ln: nonpositive");
    long wp = prec + GUARD;
    Int x = a << GUARD;
    /* reduce to x in [1/sqrt2, sqrt2) * 2^wp, collecting the exponent k */
    long k = (long)mpz_sizeinbase(x.get_mpz_t(), 2) - wp;
    if (k > 0) x = rdiv_q(x, Int(1) << k);
    else if (k < 0) x <<= -k;
    /* now x in [2^(wp-1), 2^wp); double it when below 1/sqrt2 */
    if (hp_mul(x, x, wp) < (Int(1) << (wp - 1))) {
        x <<= 1;
        k -= 1;
    }
    Int one = Int(1) << wp;
    Int t = hp_div(x - one, x + one, wp); /* |t| <= 0.172 */
    Int t2 = hp_mul(t, t, wp);
    Int s = 0, term = t;
    for (long i = 1;; i += 2) {
        Int add = rdiv_q(term, i);
        if (add == 0 && i > 1) break;
        s += add;
        term = hp_mul(term, t2, wp);
        if (term == 0 && add == 0) break;
    }
    Int res = 2 * s + Int(k) * (2 * atanh_inv(3, wp));
    return rdiv_q(res, Int(1) << GUARD);
}

Int hp_exp(const Int& a, long prec) {
    long wp = prec + GUARD;
    Int aa = a << GUARD;
    Int l2 = 2 * atanh_inv(3, wp);
    Int k = rdiv_q(aa, l2);
    if (abs(k) > 1 << 24) throw ceiling_error("hp_exp: magnitude out of range");
    Int r = aa - k * l2; /* |r| <= ln2/2 */
    Int s = Int(1) << wp, term = s;
    for (long i = 1;; i++) {
        term = rdiv_q(hp_mul(term, r, wp), i);
        if (term == 0) break;
        s += term;
    }
    long ks = (long)k.get_si();
    if (ks >= 0) s <<= ks;
    else s = rdiv_q(s, Int(1) << (-ks));
    return rdiv_q(s, Int(1) << GUARD);
}

CF cf_add(const CF& a, const CF& b) { return {a.re + b.re, a.im + b.im}; }
CF cf_sub(const CF& a, const CF& b) { return {a.re - b.re, a.im - b.im}; }
CF cf_neg(const CF& a) { return {-a.re, -a.im}; }
CF cf_conj(const CF& a) { return {a.re, -a.im}; }

CF cf_mul(const CF& a, const CF& b, long prec) {
    Int sc = Int(1) << prec;
    return {rdiv_q(a.re * b.re - a.im * b.im, sc), rdiv_q(a.re * b.im + a.im * b.re, sc)};
}

CF cf_div(const CF& a, const CF& b, long prec) {
    Int den = b.re * b.re + b.im * b.im; /* scale 2^(2 prec) */
    if (den == 0) throw math_error("cf_div: zero divisor");
    return {rdiv_q((a.re * b.re + a.im * b.im) << prec, den),
            rdiv_q((a.im * b.re - a.re * b.im) << prec, den)};
}

Int cf_abs2(const CF& a, long prec) { return rdiv_q(a.re * a.re + a.im * a.im, Int(1) << prec); }

Int cf_abs(const CF& a, long prec) {
    (void)prec;
    return isqrt(a.re * a.re + a.im * a.im);
}

namespace {

/* Horner evaluation of f (integer coefficients) at z; result at scale prec */
CF eval_poly_cf(const IntPoly& f, const CF& z, long prec) {
    CF acc{Int(0), Int(0)};
    for (long i = f.deg(); i >= 0; i--) {
        acc = cf_mul(acc, z, prec);
        acc.re += f.c[i] << prec;
    }
    return acc;
}

/* one Newton correction; throws when the derivative collapses */
CF newton_step(const IntPoly& f, const IntPoly& fp, const CF& z, long prec) {
    CF num = eval_poly_cf(f, z, prec);
    CF den = eval_poly_cf(fp, z, prec);
    if (den.re == 0 && den.im == 0) throw math_error("complex_roots: derivative vanished");
    return cf_div(num, den, prec);
}

} // namespace

std::vector<CF> complex_roots(const IntPoly& f, long prec) {
    long n = f.deg();
    if (n < 1 || f.c[n] != 1) throw math_error("complex_roots: monic polynomial required");
    if (ip_discriminant(f) == 0) throw math_error("complex_roots: squarefree polynomial required");
    if (n == 1) return {CF{-(f.c[0] << prec), Int(0)}};

    /* stage one: double-precision simultaneous iteration */
    std::vector<std::complex<double>> cs(n + 1), z(n);
    for (long i = 0; i <= n; i++) {
        double d = f.c[i].get_d();
        if (std::abs(d) > 1e250) throw ceiling_error("complex_roots: coefficient overflow");
        cs[i] = d;
    }
    double radius = 0.0;
    for (long i = 0; i < n; i++)
        radius = std::max(radius, 2.0 * std::pow(std::abs(cs[i].real()), 1.0 / (n - i)));
    radius = std::max(radius, 0.5);
    for (long i = 0; i < n; i++) {
        double ang = 2.0 * 3.14159265358979324 * i / n + 0.35;
        z[i] = std::polar(radius, ang);
    }
    auto evald = [&](std::complex<double> x) {
        std::complex<double> acc = 0.0;
        for (long i = n; i >= 0; i--) acc = acc * x + cs[i];
        return acc;
    };
    bool settled = false;
    for (long it = 0; it < 500 && !settled; it++) {
        settled = true;
        for (long i = 0; i < n; i++) {
            std::complex<double> d = evald(z[i]);
            for (long j = 0; j < n; j++)
                if (j != i) d /= (z[i] - z[j]);
            z[i] -= d;
            if (std::abs(d) > 1e-13 * (1.0 + std::abs(z[i]))) settled = false;
        }
    }
    if (!settled) throw math_error("complex_roots: initial iteration did not settle");

    /* stage two: lift each root by Newton, doubling the working precision */
    long target = prec + GUARD;
    IntPoly fp = ip_derivative(f);
    std::vector<CF> roots(n);
    for (long i = 0; i < n; i++) {
        long wp = 60;
        CF cur{Int(std::ldexp(z[i].real(), 60)), Int(std::ldexp(z[i].imag(), 60))};
        while (wp < target) {
            long nwp = std::min(2 * wp, target);
            cur.re <<= (nwp - wp);
            cur.im <<= (nwp - wp);
            wp = nwp;
            for (int rep = 0; rep < 3; rep++) cur = cf_sub(cur, newton_step(f, fp, cur, wp));
        }
        CF d = newton_step(f, fp, cur, wp);
        cur = cf_sub(cur, d);
        /* convergence certificate: the final correction must be far below scale */
        Int tol = Int(1) << (target - (7 * prec) / 8);
        if (abs(d.re) > tol || abs(d.im) > tol)
            throw math_error("complex_roots: refinement did not certify");
        roots[i] = cur;
    }

    /* classify: certified real count from sign variations */
    long r1 = ip_count_real_roots(f);
    Int imtol = Int(1) << (target - prec / 2);
    std::vector<CF> reals, upper;
    std::vector<bool> used(n, false);
    for (long i = 0; i < n; i++) {
        if (abs(roots[i].im) <= imtol) {
            reals.push_back({roots[i].re, Int(0)});
            used[i] = true;
        }
    }
    if ((long)reals.size() != r1) throw math_error("complex_roots: real count mismatch");
    for (long i = 0; i < n; i++) {
        if (used[i] || roots[i].im < 0) continue;
        long match = -1;
        for (long j = 0; j < n; j++) {
            if (used[j] || j == i || roots[j].im > 0) continue;
            if (abs(roots[j].re - roots[i].re) <= imtol && abs(roots[j].im + roots[i].im) <= imtol) {
                match = j;
                break;
            }
        }
        if (match < 0) throw math_error("complex_roots: conjugate pairing failed");
        used[i] = used[match] = true;
        upper.push_back(roots[i]);
    }
    for (long i = 0; i < n; i++)
        if (!used[i]) throw math_error("complex_roots: unpaired root");

    auto lower_scale = [&](CF c) {
        return CF{rdiv_q(c.re, Int(1) << GUARD), rdiv_q(c.im, Int(1) << GUARD)};
    };
    std::sort(reals.begin(), reals.end(), [](const CF& a, const CF& b) { return a.re < b.re; });
    std::sort(upper.begin(), upper.end(), [](const CF& a, const CF& b) {
        return a.re != b.re ? a.re < b.re : a.im < b.im;
    });
    std::vector<CF> out;
    for (auto& r : reals) out.push_back(lower_scale(r));
    for (auto& u : upper) {
        out.push_back(lower_scale(u));
        out.push_back(lower_scale(cf_conj(u)));
    }
    return out;
}

std::vector<CF> Embeddings::of(const NFElem& x) const {
    auto pc = K->to_power(x);
    long n = K->n;
    std::vector<CF> coef(n);
    for (long i = 0; i < n; i++)
        coef[i] = CF{rdiv_q(pc[i].get_num() << prec, pc[i].get_den()), Int(0)};
    std::vector<CF> out(n);
    for (long s = 0; s < n; s++) {
        CF acc{Int(0), Int(0)};
        for (long i = n - 1; i >= 0; i--) {
            acc = cf_mul(acc, th[s], prec);
            acc = cf_add(acc, coef[i]);
        }
        out[s] = acc;
    }
    return out;
}

std::vector<Int> Embeddings::log_abs(const NFElem& x) const {
    auto vals = of(x);
    std::vector<Int> out(vals.size());
    for (size_t i = 0; i < vals.size(); i++) {
        Int a2 = cf_abs2(vals[i], prec);
        if (a2 <= 0) throw math_error("log_abs: embedding too close to zero at this precision");
        out[i] = rdiv_q(hp_ln(a2, prec), 2);
    }
    return out;
}

IntMat Embeddings::t2_gram(long scale) const {
    long n = K->n;
    if (scale >= prec) throw math_error("t2_gram: scale must be below the working precision");
    std::vector<std::vector<CF>> ew(n);
    for (long i = 0; i < n; i++) {
        std::vector<Int> v(n, 0);
        v[i] = 1;
        ew[i] = of(NFElem(std::move(v)));
    }
    IntMat g(n, n);
    for (long i = 0; i < n; i++)
        for (long j = i; j < n; j++) {
            Int re = 0, im = 0;
            for (long s = 0; s < n; s++) {
                CF t = cf_mul(ew[i][s], cf_conj(ew[j][s]), prec);
                re += t.re;
                im += t.im;
            }
            /* the sum over all embeddings is real */
            if (abs(im) > (Int(1) << (prec - scale)))
                throw math_error("t2_gram: imaginary residue too large");
            Int r = rdiv_q(re, Int(1) << (prec - scale));
            g.at(i, j) = r;
            g.at(j, i) = r;
        }
    return g;
}

Embeddings make_embeddings(const NumberField& K, long prec) {
    Embeddings e;
    e.K = &K;
    e.prec = prec;
    e.th = complex_roots(K.f, prec);
    return e;
}

} // namespace msel
