#include "numfield/roots.hpp"
#include "numfield/embeddings.hpp"
#include "exactmath/fp_poly.hpp"
#include "exactmath/lll.hpp"
#include "exactmath/errors.hpp"

#include <algorithm>
#include <cmath>

namespace msel {

namespace {

/* lift a simple root r of h mod q to a root mod q^m' with m' >= m */
Int hensel_root(const IntPoly& h, Int r, const Int& q, long m) {
    IntPoly hp = ip_derivative(h);
    Int mod = q;
    long got = 1;
    while (got < m) {
        mod = mod * mod;
        got *= 2;
        Int val = fdiv_r(ip_eval(h, r), mod);
        Int der = fdiv_r(ip_eval(hp, r), mod);
        r = fdiv_r(r - val * invert_mod(der, mod), mod);
    }
    return r;
}

/* Recognition frame at an auxiliary degree-one prime: an integral element is
   pinned down by its image in Z/q^m followed by nearest-lattice rounding of
   any preimage into the congruence kernel. */
struct QadicFrame {
    const NumberField* K = nullptr;
    long m = 0;
    Int M;       /* q^m */
    IntMat arow; /* 1 x n images of the integral basis */
    IntMat red;  /* reduced congruence kernel for the rounding step */
    const IntMat* gram = nullptr;

    Int image(const NFElem& x) const {
        Int acc = 0;
        for (long i = 0; i < K->n; i++) acc = fdiv_r(acc + x.v[i] * arow.at(0, i), M);
        if (x.den != 1) acc = fdiv_r(acc * invert_mod(x.den, M), M);
        return acc;
    }

    /* integral coordinates with the given image, smallest under the form */
    std::vector<Int> recognize(const Int& s) const {
        long n = K->n;
        std::vector<Int> c0(n);
        for (long i = 0; i < n; i++) c0[i] = s * K->w_one[i];
        auto v = babai_nearest(red, *gram, c0);
        for (long i = 0; i < n; i++) c0[i] -= v[i];
        return c0;
    }
};

QadicFrame make_frame(const NumberField& K, const IntMat& gram, long q0, u64 froot, long bits) {
    QadicFrame fr;
    fr.K = &K;
    fr.gram = &gram;
    long n = K.n;
    Int qz(q0);
    fr.m = (long)(bits / std::max(1.0, std::log2((double)q0))) + 1;
    fr.M = pow_int(qz, (unsigned long)fr.m);
    Int rho = fdiv_r(hensel_root(K.f, Int(froot), qz, fr.m), fr.M);
    Int deninv = invert_mod(K.basis_den, fr.M);
    fr.arow = IntMat(1, n);
    for (long i = 0; i < n; i++) {
        Int acc = 0, pw = 1;
        for (long j = 0; j < n; j++) {
            acc = fdiv_r(acc + K.basis_num.at(i, j) * pw, fr.M);
            pw = fdiv_r(pw * rho, fr.M);
        }
        fr.arow.at(0, i) = fdiv_r(acc * deninv, fr.M);
    }
    IntMat ker = lattice_mod_kernel(fr.arow, fr.M);
    fr.red = lll_reduce(ker, gram).basis;
    return fr;
}

const std::vector<long> bit_targets = {192, 768, 1536};

} // namespace

std::vector<NFElem> poly_roots_in_field(const NumberField& K, const IntPoly& g) {
    if (g.deg() < 1) return {};
    if (g.c[g.deg()] != 1) throw math_error("poly_roots_in_field: monic polynomial required");
    Int dg = ip_discriminant(g);
    if (dg == 0) throw math_error("poly_roots_in_field: squarefree polynomial required");
    Int df = ip_discriminant(K.f);

    /* auxiliary prime: residue degree one in K, good reduction for f and g */
    long q0 = 0;
    u64 froot = 0;
    for (long q : primes_up_to(100000)) {
        Int qz(q);
        if (fdiv_r(df, qz) == 0 || fdiv_r(dg, qz) == 0) continue;
        auto rs = fpp_roots(ip_mod_p(K.f, (u64)q));
        if (rs.empty()) continue;
        q0 = q;
        froot = rs[0];
        break;
    }
    if (q0 == 0) throw math_error("poly_roots_in_field: no auxiliary prime found");
    Int qz(q0);

    Embeddings emb = make_embeddings(K, 512);
    IntMat gram = emb.t2_gram(64);

    auto sbar = fpp_roots(ip_mod_p(g, (u64)q0));
    std::vector<NFElem> found;
    std::vector<std::optional<QadicFrame>> frames(bit_targets.size());

    for (u64 s0 : sbar) {
        for (size_t li = 0; li < bit_targets.size(); li++) {
            if (!frames[li]) frames[li] = make_frame(K, gram, q0, froot, bit_targets[li]);
            const QadicFrame& fr = *frames[li];
            Int s = fdiv_r(hensel_root(g, Int(s0), qz, fr.m), fr.M);
            NFElem beta{fr.recognize(s), Int(1)};
            if (K.eval_poly(g, beta).is_zero()) {
                found.push_back(beta);
                break;
            }
        }
    }

    std::sort(found.begin(), found.end(),
              [](const NFElem& a, const NFElem& b) { return a.v < b.v; });
    found.erase(std::unique(found.begin(), found.end()), found.end());
    return found;
}

std::optional<NFElem> pth_root_in_field(const NumberField& K, const NFElem& x, long p) {
    if (p < 2 || !is_probable_prime(Int(p)))
        throw math_error("pth_root_in_field: p must be prime");
    if (x.is_zero()) return K.zero();

    /* scale the denominator away: x * den^p = (root * den)^p */
    Int den = x.den;
    NFElem y = den == 1 ? x : K.mul_rational(x, Rat(pow_int(den, (unsigned long)p)));
    if (y.den != 1) throw math_error("pth_root_in_field: scaling failed");
    Int ny = K.norm(y).get_num();
    Int df = ip_discriminant(K.f);

    /* residue image of integral z at a degree-one prime (q, theta -> froot) */
    auto residue_u64 = [&K](const NFElem& z, u64 uq, u64 froot) {
        Int qz((long)uq);
        u64 deninv = invmod_u64((u64)fdiv_r(K.basis_den, qz).get_ui(), uq);
        u64 img = 0;
        for (long i = 0; i < K.n; i++) {
            u64 bi = 0, pw = 1;
            for (long j = 0; j < K.n; j++) {
                bi = (bi + mulmod_u64((u64)fdiv_r(K.basis_num.at(i, j), qz).get_ui(), pw, uq)) % uq;
                pw = mulmod_u64(pw, froot, uq);
            }
            bi = mulmod_u64(bi, deninv, uq);
            img = (img + mulmod_u64((u64)fdiv_r(z.v[i], qz).get_ui(), bi, uq)) % uq;
        }
        return img;
    };

    /* cheap certified rejections: at a degree-one prime with q = 1 mod p and
       y a unit there, a global root makes the image a p-th power in F_q^* */
    long screens = 0;
    for (long q : primes_up_to(200000)) {
        if (screens >= 24) break;
        if (q == p || (q - 1) % p != 0) continue;
        Int qz(q);
        if (fdiv_r(df, qz) == 0 || fdiv_r(ny, qz) == 0) continue;
        auto rs = fpp_roots(ip_mod_p(K.f, (u64)q));
        if (rs.empty()) continue;
        u64 img = residue_u64(y, (u64)q, rs[0]);
        if (img == 0) continue;
        if (powmod_u64(img, (u64)((q - 1) / p), (u64)q) != 1) return std::nullopt;
        screens++;
    }

    /* auxiliary prime: degree one, good reduction, y a unit at it, away from p */
    long q0 = 0;
    u64 froot = 0;
    for (long q : primes_up_to(100000)) {
        if (q == p) continue;
        Int qz(q);
        if (fdiv_r(df, qz) == 0 || fdiv_r(ny, qz) == 0) continue;
        auto rs = fpp_roots(ip_mod_p(K.f, (u64)q));
        if (rs.empty()) continue;
        q0 = q;
        froot = rs[0];
        break;
    }
    if (q0 == 0) throw math_error("pth_root_in_field: no auxiliary prime found");
    u64 uq = (u64)q0;

    u64 img = residue_u64(y, uq, froot);

    /* an integral root would reduce to a p-th root of the image */
    std::vector<u64> pc((size_t)p + 1, 0);
    pc[0] = (uq - img) % uq;
    pc[(size_t)p] = 1;
    auto yroots = fpp_roots(FpPoly(uq, pc));
    if (yroots.empty()) return std::nullopt;

    Embeddings emb = make_embeddings(K, 512);
    IntMat gram = emb.t2_gram(64);

    for (long bits : bit_targets) {
        QadicFrame fr = make_frame(K, gram, q0, froot, bits);
        Int Y = fr.image(y);
        for (u64 y0 : yroots) {
            /* Newton on t^p - Y from the residue root */
            Int t(y0);
            for (long it = 0; it < 64; it++) {
                Int tp1 = 1;
                for (long e = 0; e < p - 1; e++) tp1 = fdiv_r(tp1 * t, fr.M);
                Int val = fdiv_r(tp1 * t - Y, fr.M);
                if (val == 0) break;
                t = fdiv_r(t - val * invert_mod(fdiv_r(Int(p) * tp1, fr.M), fr.M), fr.M);
            }
            NFElem beta{fr.recognize(t), Int(1)};
            if (K.pow(beta, Int(p)) == y) {
                if (den != 1) {
                    beta.den = den;
                    beta.normalize();
                }
                return beta;
            }
        }
    }
    return std::nullopt;
}

} // namespace msel
