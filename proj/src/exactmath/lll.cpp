#include "exactmath/lll.hpp"
#include "exactmath/errors.hpp"

namespace msel {

namespace {

struct GsState {
    /* mu[i][j] for j < i, B[i] = |b_i*|^2, all rational, w.r.t. form Q */
    std::vector<std::vector<Rat>> mu;
    std::vector<Rat> B;
};

Rat form_ip(const IntMat& basis, const IntMat& q, long i, long k) {
    /* <b_i, b_k> under Q */
    Rat s = 0;
    for (long a = 0; a < basis.ncols; a++) {
        if (basis.at(i, a) == 0) continue;
        Int t = 0;
        for (long b = 0; b < basis.ncols; b++)
            if (basis.at(k, b) != 0) t += q.at(a, b) * basis.at(k, b);
        s += Rat(basis.at(i, a) * t);
    }
    return s;
}

GsState gram_schmidt(const IntMat& basis, const IntMat& q) {
    long n = basis.nrows;
    GsState st;
    st.mu.assign(n, std::vector<Rat>(n, Rat(0)));
    st.B.assign(n, Rat(0));
    for (long i = 0; i < n; i++) {
        /* b_i* = b_i - sum_{j<i} mu_ij b_j*;  <b_i, b_j*> computed via expansion */
        std::vector<Rat> ip(i + 1);
        for (long j = 0; j <= i; j++) ip[j] = form_ip(basis, q, i, j);
        for (long j = 0; j < i; j++) {
            Rat s = ip[j];
            for (long k = 0; k < j; k++) s -= st.mu[j][k] * st.mu[i][k] * st.B[k];
            if (st.B[j] == 0) throw math_error("lll: dependent rows");
            st.mu[i][j] = s / st.B[j];
        }
        Rat s = ip[i];
        for (long k = 0; k < i; k++) s -= st.mu[i][k] * st.mu[i][k] * st.B[k];
        st.B[i] = s;
        if (st.B[i] == 0) throw math_error("lll: dependent rows");
        if (st.B[i] < 0) throw math_error("lll: form not positive definite");
    }
    return st;
}

} // namespace

LllResult lll_reduce(const IntMat& basis, const IntMat& form) {
    LllResult res{basis, IntMat::identity(basis.nrows)};
    IntMat& b = res.basis;
    IntMat& u = res.u;
    long n = b.nrows;
    if (n <= 1) return res;
    GsState st = gram_schmidt(b, form);
    auto size_reduce = [&](long i, long j) {
        if (2 * abs(st.mu[i][j]) <= 1) return;
        Rat r = st.mu[i][j];
        Int q_ = fdiv_q(r.get_num() * 2 + r.get_den(), 2 * r.get_den()); /* round nearest */
        for (long c = 0; c < b.ncols; c++) b.at(i, c) -= q_ * b.at(j, c);
        for (long c = 0; c < n; c++) u.at(i, c) -= q_ * u.at(j, c);
        for (long k = 0; k < j; k++) st.mu[i][k] -= Rat(q_) * st.mu[j][k];
        st.mu[i][j] -= Rat(q_);
    };
    long k = 1;
    const Rat delta(3, 4);
    while (k < n) {
        size_reduce(k, k - 1);
        if (st.B[k] < (delta - st.mu[k][k - 1] * st.mu[k][k - 1]) * st.B[k - 1]) {
            for (long c = 0; c < b.ncols; c++) std::swap(b.at(k, c), b.at(k - 1, c));
            for (long c = 0; c < n; c++) std::swap(u.at(k, c), u.at(k - 1, c));
            st = gram_schmidt(b, form); /* desk scale: recompute */
            k = std::max(1L, k - 1);
        } else {
            for (long j = k - 2; j >= 0; j--) size_reduce(k, j);
            k++;
        }
    }
    return res;
}

LllResult lll_reduce(const IntMat& basis) {
    return lll_reduce(basis, IntMat::identity(basis.ncols));
}

std::vector<Int> babai_nearest(const IntMat& basis, const IntMat& form,
                               const std::vector<Int>& target) {
    long n = basis.nrows, m = basis.ncols;
    if ((long)target.size() != m) throw math_error("babai_nearest: shape");
    GsState st = gram_schmidt(basis, form);
    /* a[j] = <t, b_j*> / B_j via <t, b_j*> = <t, b_j> - sum_{k<j} mu_jk <t, b_k*> */
    std::vector<Rat> a(n), tbs(n);
    for (long j = 0; j < n; j++) {
        Int ip = 0;
        for (long x = 0; x < m; x++) {
            if (target[x] == 0) continue;
            Int t = 0;
            for (long y = 0; y < m; y++)
                if (basis.at(j, y) != 0) t += form.at(x, y) * basis.at(j, y);
            ip += target[x] * t;
        }
        Rat s(ip);
        for (long k = 0; k < j; k++) s -= st.mu[j][k] * tbs[k];
        tbs[j] = s;
        a[j] = s / st.B[j];
    }
    std::vector<Int> v(m, 0);
    for (long i = n - 1; i >= 0; i--) {
        Rat r = a[i];
        Int c = fdiv_q(r.get_num() * 2 + r.get_den(), 2 * r.get_den()); /* round nearest */
        if (c == 0) continue;
        for (long x = 0; x < m; x++) v[x] += c * basis.at(i, x);
        for (long j = 0; j < i; j++) a[j] -= Rat(c) * st.mu[i][j];
    }
    return v;
}

std::vector<std::vector<Int>> enumerate_short_vectors(const RatMat& q, const Rat& bound,
                                                      long cap) {
    long n = q.nrows;
    /* rational Cholesky: q = R^T diag(d) R with unit upper-triangular R */
    RatMat r = RatMat::identity(n);
    std::vector<Rat> d(n);
    RatMat w = q;
    for (long i = 0; i < n; i++) {
        d[i] = w.at(i, i);
        if (d[i] <= 0) throw math_error("enumerate_short_vectors: form not positive definite");
        for (long j = i + 1; j < n; j++) r.at(i, j) = w.at(i, j) / d[i];
        for (long k = i + 1; k < n; k++)
            for (long l = k; l < n; l++) {
                Rat t = w.at(k, l) - r.at(i, k) * r.at(i, l) * d[i];
                w.at(k, l) = t;
                w.at(l, k) = t;
            }
    }
    /* Q(x) = sum_i d_i (x_i + sum_{j>i} r_ij x_j)^2; recurse from the last coord */
    std::vector<std::vector<Int>> out;
    std::vector<Int> x(n, Int(0));
    std::function<void(long, Rat)> rec = [&](long i, Rat remaining) {
        if (i < 0) {
            bool nz = false;
            for (auto& c : x)
                if (c != 0) { nz = true; break; }
            if (!nz) return;
            /* canonical sign: first nonzero from the end is positive */
            for (long j = n - 1; j >= 0; j--) {
                if (x[j] == 0) continue;
                if (x[j] < 0) return; /* mirror copy, skip */
                break;
            }
            if ((long)out.size() >= cap)
                throw ceiling_error("enumerate_short_vectors: cap exceeded");
            out.push_back(x);
            return;
        }
        Rat center = 0;
        for (long j = i + 1; j < n; j++) center += r.at(i, j) * Rat(x[j]);
        /* d_i (x_i + center)^2 <= remaining */
        Rat lim2 = remaining / d[i];
        /* |x_i + center| <= sqrt(lim2): integer bounds via ceil/floor of +-sqrt */
        Int lo, hi;
        {
            /* sqrt upper bound: smallest s with s^2 >= lim2 (work with num/den) */
            Int num = lim2.get_num(), den = lim2.get_den();
            Int s = isqrt(num / den) + 2;
            Rat c = center;
            /* x_i in [-c - s, -c + s], integer */
            Rat lo_r = -c - Rat(s), hi_r = -c + Rat(s);
            lo = fdiv_q(lo_r.get_num(), lo_r.get_den());
            hi = fdiv_q(hi_r.get_num() + hi_r.get_den() - 1, hi_r.get_den());
        }
        for (Int v = lo; v <= hi; v++) {
            Rat t = Rat(v) + center;
            Rat cost = d[i] * t * t;
            if (cost > remaining) continue;
            x[i] = v;
            rec(i - 1, remaining - cost);
        }
        x[i] = 0;
    };
    rec(n - 1, bound);
    return out;
}

} // namespace msel
