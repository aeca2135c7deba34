#pragma once
#include "exactmath/int_types.hpp"
#include <optional>

namespace msel {

/* Dense integer matrix, row major.  Lattices are given by rows. */
struct IntMat {
    long nrows = 0, ncols = 0;
    std::vector<Int> a;

    IntMat() = default;
    IntMat(long r, long c) : nrows(r), ncols(c), a(r * c) {}
    static IntMat identity(long n);

    Int& at(long i, long j) { return a[i * ncols + j]; }
    const Int& at(long i, long j) const { return a[i * ncols + j]; }

    bool operator==(const IntMat& o) const = default;
    std::string str() const;
};

IntMat mat_mul(const IntMat& A, const IntMat& B);
std::vector<Int> mat_vec(const IntMat& A, const std::vector<Int>& v);
IntMat transpose(const IntMat& A);
IntMat vstack(const IntMat& A, const IntMat& B);
IntMat scalar_mat(long n, const Int& c);

/* exact determinant (square), Bareiss fraction-free elimination */
Int det_int(const IntMat& A);

struct HnfResult {
    IntMat h; /* row HNF: echelon, positive pivots, entries above pivot in [0, pivot) */
    IntMat u; /* unimodular, h = u * m */
};

HnfResult hnf(const IntMat& m);

/* HNF of the lattice spanned by the rows; zero rows dropped */
IntMat hnf_lattice(const IntMat& m);

struct SnfResult {
    IntMat d;                   /* diagonal, d = u * m * v */
    IntMat u, v;                /* unimodular transforms */
    std::vector<Int> elem_div;  /* all diagonal divisors d_1 | d_2 | ..., nonneg */
    std::vector<Int> invariants;/* the nontrivial ones (!= 1), zeros last */
};

SnfResult snf(const IntMat& m);

/* basis of {v : M v = 0}, returned as rows; saturated (a Z-basis of the kernel) */
IntMat int_kernel(const IntMat& m);

/* lattice {y in Z^n : A y = 0 mod d}, rows of result form a basis */
IntMat lattice_mod_kernel(const IntMat& a, const Int& d);

/* is row vector v in the lattice spanned by rows of hnf_basis (HNF, full column count)? */
bool lattice_contains(const IntMat& hnf_basis, const std::vector<Int>& v);

/* solve x * H = v over Z for HNF-basis rows H; nullopt if v outside the lattice */
std::optional<std::vector<Int>> lattice_coords(const IntMat& hnf_basis, const std::vector<Int>& v);

/* index of sublattice: det ratio; both full-rank square HNFs */
Int lattice_index(const IntMat& sup, const IntMat& sub);

/* Rational matrices: only what the tower above needs (solve / inverse / det). */
struct RatMat {
    long nrows = 0, ncols = 0;
    std::vector<Rat> a;

    RatMat() = default;
    RatMat(long r, long c) : nrows(r), ncols(c), a(r * c) {}
    static RatMat from_int(const IntMat& m);
    static RatMat identity(long n);

    Rat& at(long i, long j) { return a[i * ncols + j]; }
    const Rat& at(long i, long j) const { return a[i * ncols + j]; }
};

RatMat mat_mul(const RatMat& A, const RatMat& B);
std::vector<Rat> mat_vec(const RatMat& A, const std::vector<Rat>& v);

/* solve A x = b, A square nonsingular; throws math_error if singular */
std::vector<Rat> solve_rat(RatMat A, std::vector<Rat> b);
RatMat inverse_rat(const RatMat& A);
Rat det_rat(RatMat A);
long rank_rat(RatMat A);

} // namespace msel
