#pragma once
#include "exactmath/int_mat.hpp"
#include <cstdint>
#include <optional>

namespace msel {

using u64 = std::uint64_t;

inline u64 mulmod_u64(u64 a, u64 b, u64 p) {
    return (u64)((unsigned __int128)a * b % p);
}

u64 powmod_u64(u64 a, u64 e, u64 p);
u64 invmod_u64(u64 a, u64 p);

/* Dense matrix over F_p, p a small prime (fits u64). */
struct FpMat {
    u64 p = 2;
    long nrows = 0, ncols = 0;
    std::vector<u64> a;

    FpMat() = default;
    FpMat(u64 p_, long r, long c) : p(p_), nrows(r), ncols(c), a(r * c, 0) {}
    static FpMat identity(u64 p, long n);
    static FpMat from_int(u64 p, const IntMat& m);

    u64& at(long i, long j) { return a[i * ncols + j]; }
    const u64& at(long i, long j) const { return a[i * ncols + j]; }

    bool operator==(const FpMat& o) const = default;
    bool is_identity() const;
    std::string str() const;
};

FpMat fp_mul(const FpMat& A, const FpMat& B);
FpMat fp_add(const FpMat& A, const FpMat& B);
FpMat fp_scale(const FpMat& A, u64 c);
FpMat fp_transpose(const FpMat& A);
std::vector<u64> fp_mat_vec(const FpMat& A, const std::vector<u64>& v);
FpMat fp_pow(const FpMat& A, u64 e);

/* reduced row echelon form in place; returns rank, records pivot columns */
long fp_rref(FpMat& A, std::vector<long>* pivots = nullptr);
long fp_rank(const FpMat& A);

/* basis of {v : A v = 0}, rows of the result */
FpMat fp_kernel(const FpMat& A);

FpMat fp_inverse(const FpMat& A); /* throws math_error if singular */

/* solve A x = b; nullopt if inconsistent; A arbitrary shape (least solution via rref) */
std::optional<std::vector<u64>> fp_solve(const FpMat& A, const std::vector<u64>& b);

/* row space basis (rref nonzero rows) */
FpMat fp_row_space(const FpMat& A);

/* do the two row spaces coincide? */
bool fp_same_row_space(const FpMat& A, const FpMat& B);

/* intersection of two row spaces */
FpMat fp_row_space_intersect(const FpMat& A, const FpMat& B);

/* annihilator {x : x . r = 0 for all rows r of A}, rows of result */
FpMat fp_annihilator(const FpMat& A);

} // namespace msel
