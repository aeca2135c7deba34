#include "exactmath/int_mat.hpp"
#include "exactmath/errors.hpp"
#include <algorithm>
#include <sstream>

namespace msel {

IntMat IntMat::identity(long n) {
    IntMat m(n, n);
    for (long i = 0; i < n; i++) m.at(i, i) = 1;
    return m;
}

std::string IntMat::str() const {
    std::ostringstream os;
    os << "[";
    for (long i = 0; i < nrows; i++) {
        os << (i ? "; " : "");
        for (long j = 0; j < ncols; j++) os << (j ? "," : "") << at(i, j).get_str();
    }
    os << "]";
    return os.str();
}

IntMat mat_mul(const IntMat& A, const IntMat& B) {
    if (A.ncols != B.nrows) throw math_error("mat_mul: shape");
    IntMat C(A.nrows, B.ncols);
    for (long i = 0; i < A.nrows; i++)
        for (long k = 0; k < A.ncols; k++) {
            const Int& x = A.at(i, k);
            if (x == 0) continue;
            for (long j = 0; j < B.ncols; j++) C.at(i, j) += x * B.at(k, j);
        }
    return C;
}

std::vector<Int> mat_vec(const IntMat& A, const std::vector<Int>& v) {
    if ((long)v.size() != A.ncols) throw math_error("mat_vec: shape");
    std::vector<Int> out(A.nrows);
    for (long i = 0; i < A.nrows; i++)
        for (long j = 0; j < A.ncols; j++) out[i] += A.at(i, j) * v[j];
    return out;
}

IntMat transpose(const IntMat& A) {
    IntMat T(A.ncols, A.nrows);
    for (long i = 0; i < A.nrows; i++)
        for (long j = 0; j < A.ncols; j++) T.at(j, i) = A.at(i, j);
    return T;
}

IntMat vstack(const IntMat& A, const IntMat& B) {
    if (A.ncols != B.ncols) throw math_error("vstack: shape");
    IntMat C(A.nrows + B.nrows, A.ncols);
    std::copy(A.a.begin(), A.a.end(), C.a.begin());
    std::copy(B.a.begin(), B.a.end(), C.a.begin() + A.a.size());
    return C;
}

IntMat scalar_mat(long n, const Int& c) {
    IntMat m(n, n);
    for (long i = 0; i < n; i++) m.at(i, i) = c;
    return m;
}

Int det_int(const IntMat& A) {
    if (A.nrows != A.ncols) throw math_error("det_int: not square");
    long n = A.nrows;
    if (n == 0) return 1;
    IntMat M = A;
    Int prev = 1;
    int sign = 1;
    for (long k = 0; k < n - 1; k++) {
        if (M.at(k, k) == 0) {
            long piv = -1;
            for (long i = k + 1; i < n; i++)
                if (M.at(i, k) != 0) { piv = i; break; }
            if (piv < 0) return 0;
            for (long j = 0; j < n; j++) std::swap(M.at(k, j), M.at(piv, j));
            sign = -sign;
        }
        for (long i = k + 1; i < n; i++)
            for (long j = k + 1; j < n; j++) {
                Int t = M.at(i, j) * M.at(k, k) - M.at(i, k) * M.at(k, j);
                M.at(i, j) = t / prev; /* exact by Bareiss */
            }
        prev = M.at(k, k);
    }
    return sign > 0 ? M.at(n - 1, n - 1) : -M.at(n - 1, n - 1);
}

HnfResult hnf(const IntMat& m) {
    long R = m.nrows, C = m.ncols;
    HnfResult res{m, IntMat::identity(R)};
    IntMat& H = res.h;
    IntMat& U = res.u;
    auto row_sub = [&](long dst, long src, const Int& q) {
        if (q == 0) return;
        for (long j = 0; j < C; j++) H.at(dst, j) -= q * H.at(src, j);
        for (long j = 0; j < R; j++) U.at(dst, j) -= q * U.at(src, j);
    };
    auto row_swap = [&](long i, long k) {
        if (i == k) return;
        for (long j = 0; j < C; j++) std::swap(H.at(i, j), H.at(k, j));
        for (long j = 0; j < R; j++) std::swap(U.at(i, j), U.at(k, j));
    };
    auto row_neg = [&](long i) {
        for (long j = 0; j < C; j++) H.at(i, j) = -H.at(i, j);
        for (long j = 0; j < R; j++) U.at(i, j) = -U.at(i, j);
    };
    long row = 0;
    for (long col = 0; col < C && row < R; col++) {
        /* gcd-chain the entries in this column at rows >= row into one pivot */
        for (;;) {
            long best = -1;
            for (long i = row; i < R; i++)
                if (H.at(i, col) != 0 && (best < 0 || abs(H.at(i, col)) < abs(H.at(best, col))))
                    best = i;
            if (best < 0) break;
            row_swap(row, best);
            bool clean = true;
            for (long i = row + 1; i < R; i++)
                if (H.at(i, col) != 0) {
                    row_sub(i, row, rdiv_q(H.at(i, col), H.at(row, col)));
                    if (H.at(i, col) != 0) clean = false;
                }
            if (clean) break;
        }
        if (H.at(row, col) == 0) continue;
        if (H.at(row, col) < 0) row_neg(row);
        for (long i = 0; i < row; i++)
            row_sub(i, row, fdiv_q(H.at(i, col), H.at(row, col)));
        row++;
    }
    return res;
}

IntMat hnf_lattice(const IntMat& m) {
    IntMat H = hnf(m).h;
    long r = 0;
    for (long i = 0; i < H.nrows; i++) {
        bool nz = false;
        for (long j = 0; j < H.ncols; j++)
            if (H.at(i, j) != 0) { nz = true; break; }
        if (nz) r++;
        else break; /* zero rows sink to the bottom */
    }
    IntMat out(r, H.ncols);
    std::copy(H.a.begin(), H.a.begin() + r * H.ncols, out.a.begin());
    return out;
}

SnfResult snf(const IntMat& m) {
    long R = m.nrows, C = m.ncols;
    SnfResult res{m, IntMat::identity(R), IntMat::identity(C), {}, {}};
    IntMat& D = res.d;
    IntMat& U = res.u;
    IntMat& V = res.v;
    auto row_sub = [&](long dst, long src, const Int& q) {
        if (q == 0) return;
        for (long j = 0; j < C; j++) D.at(dst, j) -= q * D.at(src, j);
        for (long j = 0; j < R; j++) U.at(dst, j) -= q * U.at(src, j);
    };
    auto col_sub = [&](long dst, long src, const Int& q) {
        if (q == 0) return;
        for (long i = 0; i < R; i++) D.at(i, dst) -= q * D.at(i, src);
        for (long i = 0; i < C; i++) V.at(i, dst) -= q * V.at(i, src);
    };
    auto row_swap = [&](long i, long k) {
        if (i == k) return;
        for (long j = 0; j < C; j++) std::swap(D.at(i, j), D.at(k, j));
        for (long j = 0; j < R; j++) std::swap(U.at(i, j), U.at(k, j));
    };
    auto col_swap = [&](long j, long k) {
        if (j == k) return;
        for (long i = 0; i < R; i++) std::swap(D.at(i, j), D.at(i, k));
        for (long i = 0; i < C; i++) std::swap(V.at(i, j), V.at(i, k));
    };
    long n = std::min(R, C);
    for (long k = 0; k < n; k++) {
        /* move a nonzero (smallest) entry of the trailing block to (k,k) */
        for (;;) {
            long bi = -1, bj = -1;
            for (long i = k; i < R; i++)
                for (long j = k; j < C; j++)
                    if (D.at(i, j) != 0 &&
                        (bi < 0 || abs(D.at(i, j)) < abs(D.at(bi, bj)))) { bi = i; bj = j; }
            if (bi < 0) goto diag_done;
            row_swap(k, bi);
            col_swap(k, bj);
            bool clean = true;
            for (long i = k + 1; i < R; i++)
                if (D.at(i, k) != 0) {
                    row_sub(i, k, rdiv_q(D.at(i, k), D.at(k, k)));
                    if (D.at(i, k) != 0) clean = false;
                }
            for (long j = k + 1; j < C; j++)
                if (D.at(k, j) != 0) {
                    col_sub(j, k, rdiv_q(D.at(k, j), D.at(k, k)));
                    if (D.at(k, j) != 0) clean = false;
                }
            if (!clean) continue;
            /* divisibility sweep: pivot must divide the whole trailing block */
            bool fixed = false;
            for (long i = k + 1; i < R && !fixed; i++)
                for (long j = k + 1; j < C && !fixed; j++)
                    if (D.at(i, j) % D.at(k, k) != 0) {
                        row_sub(k, i, Int(-1)); /* add row i to row k */
                        fixed = true;
                    }
            if (!fixed) break;
        }
    }
diag_done:
    for (long k = 0; k < n; k++)
        if (D.at(k, k) < 0) {
            for (long j = 0; j < C; j++) D.at(k, j) = -D.at(k, j);
            for (long j = 0; j < R; j++) U.at(k, j) = -U.at(k, j);
        }
    for (long k = 0; k < n; k++) res.elem_div.push_back(D.at(k, k));
    /* invariant check: chain divisibility holds by construction */
    for (const Int& d : res.elem_div)
        if (d != 1 && d != 0) res.invariants.push_back(d);
    for (const Int& d : res.elem_div)
        if (d == 0) res.invariants.push_back(d);
    return res;
}

IntMat int_kernel(const IntMat& m) {
    /* rows u of U with u * (m^T) = 0  <=>  m * u^T = 0 */
    HnfResult r = hnf(transpose(m));
    std::vector<long> zrows;
    for (long i = 0; i < r.h.nrows; i++) {
        bool z = true;
        for (long j = 0; j < r.h.ncols; j++)
            if (r.h.at(i, j) != 0) { z = false; break; }
        if (z) zrows.push_back(i);
    }
    IntMat out((long)zrows.size(), r.u.ncols);
    for (long i = 0; i < (long)zrows.size(); i++)
        for (long j = 0; j < r.u.ncols; j++) out.at(i, j) = r.u.at(zrows[i], j);
    return out;
}

IntMat lattice_mod_kernel(const IntMat& a, const Int& d) {
    /* solutions (y, z): a y + d z = 0; project to y */
    long m = a.nrows, n = a.ncols;
    IntMat blk(m, n + m);
    for (long i = 0; i < m; i++) {
        for (long j = 0; j < n; j++) blk.at(i, j) = a.at(i, j);
        blk.at(i, n + i) = d;
    }
    IntMat K = int_kernel(blk);
    IntMat Y(K.nrows, n);
    for (long i = 0; i < K.nrows; i++)
        for (long j = 0; j < n; j++) Y.at(i, j) = K.at(i, j);
    return hnf_lattice(Y);
}

std::optional<std::vector<Int>> lattice_coords(const IntMat& hnf_basis, const std::vector<Int>& v) {
    /* back-substitute against echelon rows */
    std::vector<Int> w = v, x(hnf_basis.nrows);
    long C = hnf_basis.ncols;
    if ((long)v.size() != C) throw math_error("lattice_coords: shape");
    for (long i = 0; i < hnf_basis.nrows; i++) {
        long piv = -1;
        for (long j = 0; j < C; j++)
            if (hnf_basis.at(i, j) != 0) { piv = j; break; }
        if (piv < 0) continue;
        Int q = w[piv] / hnf_basis.at(i, piv);
        if (w[piv] % hnf_basis.at(i, piv) != 0) return std::nullopt;
        x[i] = q;
        if (q != 0)
            for (long j = piv; j < C; j++) w[j] -= q * hnf_basis.at(i, j);
    }
    for (long j = 0; j < C; j++)
        if (w[j] != 0) return std::nullopt;
    return x;
}

bool lattice_contains(const IntMat& hnf_basis, const std::vector<Int>& v) {
    return lattice_coords(hnf_basis, v).has_value();
}

Int lattice_index(const IntMat& sup, const IntMat& sub) {
    Int a = det_int(sup), b = det_int(sub);
    if (a == 0) throw math_error("lattice_index: degenerate");
    if (b % a != 0) throw math_error("lattice_index: not a sublattice");
    return abs(b / a);
}

RatMat RatMat::from_int(const IntMat& m) {
    RatMat r(m.nrows, m.ncols);
    for (long i = 0; i < m.nrows * m.ncols; i++) r.a[i] = Rat(m.a[i]);
    return r;
}

RatMat RatMat::identity(long n) {
    RatMat m(n, n);
    for (long i = 0; i < n; i++) m.at(i, i) = 1;
    return m;
}

RatMat mat_mul(const RatMat& A, const RatMat& B) {
    if (A.ncols != B.nrows) throw math_error("mat_mul: shape");
    RatMat C(A.nrows, B.ncols);
    for (long i = 0; i < A.nrows; i++)
        for (long k = 0; k < A.ncols; k++) {
            const Rat& x = A.at(i, k);
            if (x == 0) continue;
            for (long j = 0; j < B.ncols; j++) C.at(i, j) += x * B.at(k, j);
        }
    return C;
}

std::vector<Rat> mat_vec(const RatMat& A, const std::vector<Rat>& v) {
    if ((long)v.size() != A.ncols) throw math_error("mat_vec: shape");
    std::vector<Rat> out(A.nrows);
    for (long i = 0; i < A.nrows; i++)
        for (long j = 0; j < A.ncols; j++) out[i] += A.at(i, j) * v[j];
    return out;
}

std::vector<Rat> solve_rat(RatMat A, std::vector<Rat> b) {
    long n = A.nrows;
    if (A.ncols != n || (long)b.size() != n) throw math_error("solve_rat: shape");
    for (long k = 0; k < n; k++) {
        long piv = -1;
        for (long i = k; i < n; i++)
            if (A.at(i, k) != 0) { piv = i; break; }
        if (piv < 0) throw math_error("solve_rat: singular");
        if (piv != k) {
            for (long j = 0; j < n; j++) std::swap(A.at(k, j), A.at(piv, j));
            std::swap(b[k], b[piv]);
        }
        for (long i = k + 1; i < n; i++) {
            if (A.at(i, k) == 0) continue;
            Rat f = A.at(i, k) / A.at(k, k);
            for (long j = k; j < n; j++) A.at(i, j) -= f * A.at(k, j);
            b[i] -= f * b[k];
        }
    }
    std::vector<Rat> x(n);
    for (long i = n - 1; i >= 0; i--) {
        Rat s = b[i];
        for (long j = i + 1; j < n; j++) s -= A.at(i, j) * x[j];
        x[i] = s / A.at(i, i);
    }
    return x;
}

RatMat inverse_rat(const RatMat& A) {
    long n = A.nrows;
    RatMat inv(n, n);
    for (long c = 0; c < n; c++) {
        std::vector<Rat> e(n);
        e[c] = 1;
        std::vector<Rat> x = solve_rat(A, e);
        for (long i = 0; i < n; i++) inv.at(i, c) = x[i];
    }
    return inv;
}

Rat det_rat(RatMat A) {
    long n = A.nrows;
    Rat det = 1;
    for (long k = 0; k < n; k++) {
        long piv = -1;
        for (long i = k; i < n; i++)
            if (A.at(i, k) != 0) { piv = i; break; }
        if (piv < 0) return 0;
        if (piv != k) {
            for (long j = 0; j < n; j++) std::swap(A.at(k, j), A.at(piv, j));
            det = -det;
        }
        det *= A.at(k, k);
        for (long i = k + 1; i < n; i++) {
            if (A.at(i, k) == 0) continue;
            Rat f = A.at(i, k) / A.at(k, k);
            for (long j = k; j < n; j++) A.at(i, j) -= f * A.at(k, j);
        }
    }
    return det;
}

long rank_rat(RatMat A) {
    long r = 0;
    for (long c = 0; c < A.ncols && r < A.nrows; c++) {
        long piv = -1;
        for (long i = r; i < A.nrows; i++)
            if (A.at(i, c) != 0) { piv = i; break; }
        if (piv < 0) continue;
        if (piv != r)
            for (long j = 0; j < A.ncols; j++) std::swap(A.at(r, j), A.at(piv, j));
        for (long i = r + 1; i < A.nrows; i++) {
            if (A.at(i, c) == 0) continue;
            Rat f = A.at(i, c) / A.at(r, c);
            for (long j = c; j < A.ncols; j++) A.at(i, j) -= f * A.at(r, j);
        }
        r++;
    }
    return r;
}

} // namespace msel
