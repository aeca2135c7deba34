#include "exactmath/fp_mat.hpp"
#include "exactmath/errors.hpp"
#include <sstream>

namespace msel {

u64 powmod_u64(u64 a, u64 e, u64 p) {
    u64 r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, p);
        a = mulmod_u64(a, a, p);
        e >>= 1;
    }
    return r;
}

u64 invmod_u64(u64 a, u64 p) {
    a %= p;
    if (a == 0) throw math_error("invmod_u64: zero");
    return powmod_u64(a, p - 2, p); /* p prime */
}

FpMat FpMat::identity(u64 p, long n) {
    FpMat m(p, n, n);
    for (long i = 0; i < n; i++) m.at(i, i) = 1 % p;
    return m;
}

FpMat FpMat::from_int(u64 p, const IntMat& m) {
    FpMat r(p, m.nrows, m.ncols);
    for (long i = 0; i < m.nrows * m.ncols; i++) {
        Int v = fdiv_r(m.a[i], Int((unsigned long)p));
        r.a[i] = v.get_ui();
    }
    return r;
}

bool FpMat::is_identity() const {
    if (nrows != ncols) return false;
    for (long i = 0; i < nrows; i++)
        for (long j = 0; j < ncols; j++)
            if (at(i, j) != (u64)(i == j ? 1 % p : 0)) return false;
    return true;
}

std::string FpMat::str() const {
    std::ostringstream os;
    os << "[";
    for (long i = 0; i < nrows; i++) {
        os << (i ? "; " : "");
        for (long j = 0; j < ncols; j++) os << (j ? "," : "") << at(i, j);
    }
    os << "]";
    return os.str();
}

FpMat fp_mul(const FpMat& A, const FpMat& B) {
    if (A.ncols != B.nrows || A.p != B.p) throw math_error("fp_mul: shape/modulus");
    FpMat C(A.p, A.nrows, B.ncols);
    for (long i = 0; i < A.nrows; i++)
        for (long k = 0; k < A.ncols; k++) {
            u64 x = A.at(i, k);
            if (!x) continue;
            for (long j = 0; j < B.ncols; j++)
                C.at(i, j) = (C.at(i, j) + mulmod_u64(x, B.at(k, j), A.p)) % A.p;
        }
    return C;
}

FpMat fp_add(const FpMat& A, const FpMat& B) {
    if (A.nrows != B.nrows || A.ncols != B.ncols || A.p != B.p) throw math_error("fp_add: shape");
    FpMat C = A;
    for (size_t i = 0; i < C.a.size(); i++) C.a[i] = (C.a[i] + B.a[i]) % A.p;
    return C;
}

FpMat fp_scale(const FpMat& A, u64 c) {
    FpMat C = A;
    for (auto& x : C.a) x = mulmod_u64(x, c, A.p);
    return C;
}

FpMat fp_transpose(const FpMat& A) {
    FpMat T(A.p, A.ncols, A.nrows);
    for (long i = 0; i < A.nrows; i++)
        for (long j = 0; j < A.ncols; j++) T.at(j, i) = A.at(i, j);
    return T;
}

std::vector<u64> fp_mat_vec(const FpMat& A, const std::vector<u64>& v) {
    if ((long)v.size() != A.ncols) throw math_error("fp_mat_vec: shape");
    std::vector<u64> out(A.nrows, 0);
    for (long i = 0; i < A.nrows; i++) {
        u64 s = 0;
        for (long j = 0; j < A.ncols; j++) s = (s + mulmod_u64(A.at(i, j), v[j], A.p)) % A.p;
        out[i] = s;
    }
    return out;
}

FpMat fp_pow(const FpMat& A, u64 e) {
    if (A.nrows != A.ncols) throw math_error("fp_pow: not square");
    FpMat r = FpMat::identity(A.p, A.nrows), b = A;
    while (e) {
        if (e & 1) r = fp_mul(r, b);
        b = fp_mul(b, b);
        e >>= 1;
    }
    return r;
}

long fp_rref(FpMat& A, std::vector<long>* pivots) {
    long r = 0;
    for (long c = 0; c < A.ncols && r < A.nrows; c++) {
        long piv = -1;
        for (long i = r; i < A.nrows; i++)
            if (A.at(i, c)) { piv = i; break; }
        if (piv < 0) continue;
        if (piv != r)
            for (long j = 0; j < A.ncols; j++) std::swap(A.at(r, j), A.at(piv, j));
        u64 inv = invmod_u64(A.at(r, c), A.p);
        for (long j = c; j < A.ncols; j++) A.at(r, j) = mulmod_u64(A.at(r, j), inv, A.p);
        for (long i = 0; i < A.nrows; i++) {
            if (i == r || !A.at(i, c)) continue;
            u64 f = A.at(i, c);
            for (long j = c; j < A.ncols; j++)
                A.at(i, j) = (A.at(i, j) + (A.p - mulmod_u64(f, A.at(r, j), A.p))) % A.p;
        }
        if (pivots) pivots->push_back(c);
        r++;
    }
    return r;
}

long fp_rank(const FpMat& A) {
    FpMat B = A;
    return fp_rref(B);
}

FpMat fp_kernel(const FpMat& A) {
    FpMat B = A;
    std::vector<long> piv;
    long r = fp_rref(B, &piv);
    std::vector<bool> is_piv(A.ncols, false);
    for (long c : piv) is_piv[c] = true;
    std::vector<long> freec;
    for (long c = 0; c < A.ncols; c++)
        if (!is_piv[c]) freec.push_back(c);
    FpMat K(A.p, (long)freec.size(), A.ncols);
    for (long k = 0; k < (long)freec.size(); k++) {
        long fc = freec[k];
        K.at(k, fc) = 1 % A.p;
        for (long i = 0; i < r; i++) {
            /* pivot row i has pivot at piv[i]; kernel coord = -B[i][fc] */
            u64 v = B.at(i, fc);
            if (v) K.at(k, piv[i]) = A.p - v;
        }
    }
    return K;
}

FpMat fp_inverse(const FpMat& A) {
    if (A.nrows != A.ncols) throw math_error("fp_inverse: not square");
    long n = A.nrows;
    FpMat W(A.p, n, 2 * n);
    for (long i = 0; i < n; i++) {
        for (long j = 0; j < n; j++) W.at(i, j) = A.at(i, j);
        W.at(i, n + i) = 1 % A.p;
    }
    std::vector<long> piv;
    long r = fp_rref(W, &piv);
    /* pivots drifting into the identity block mean A itself is rank deficient */
    if (r != n || (!piv.empty() && piv.back() >= n))
        throw math_error("fp_inverse: singular");
    FpMat inv(A.p, n, n);
    for (long i = 0; i < n; i++)
        for (long j = 0; j < n; j++) inv.at(i, j) = W.at(i, n + j);
    return inv;
}

std::optional<std::vector<u64>> fp_solve(const FpMat& A, const std::vector<u64>& b) {
    if ((long)b.size() != A.nrows) throw math_error("fp_solve: shape");
    FpMat W(A.p, A.nrows, A.ncols + 1);
    for (long i = 0; i < A.nrows; i++) {
        for (long j = 0; j < A.ncols; j++) W.at(i, j) = A.at(i, j);
        W.at(i, A.ncols) = b[i] % A.p;
    }
    std::vector<long> piv;
    fp_rref(W, &piv);
    std::vector<u64> x(A.ncols, 0);
    for (long i = 0; i < (long)piv.size(); i++) {
        if (piv[i] == A.ncols) return std::nullopt; /* pivot in the constant column */
        x[piv[i]] = W.at(i, A.ncols);
    }
    return x;
}

FpMat fp_row_space(const FpMat& A) {
    FpMat B = A;
    long r = fp_rref(B);
    FpMat out(A.p, r, A.ncols);
    std::copy(B.a.begin(), B.a.begin() + r * A.ncols, out.a.begin());
    return out;
}

bool fp_same_row_space(const FpMat& A, const FpMat& B) {
    FpMat ra = fp_row_space(A), rb = fp_row_space(B);
    return ra == rb; /* rref is canonical */
}

FpMat fp_row_space_intersect(const FpMat& A, const FpMat& B) {
    /* x in <A> and <B>  <=>  x ⊥ Ann(A) ∪ Ann(B) */
    FpMat annA = fp_annihilator(A), annB = fp_annihilator(B);
    FpMat stack(A.p, annA.nrows + annB.nrows, A.ncols);
    std::copy(annA.a.begin(), annA.a.end(), stack.a.begin());
    std::copy(annB.a.begin(), annB.a.end(), stack.a.begin() + annA.a.size());
    return fp_kernel(stack);
}

FpMat fp_annihilator(const FpMat& A) {
    return fp_kernel(A); /* rows of A as equations on x */
}

} // namespace msel
