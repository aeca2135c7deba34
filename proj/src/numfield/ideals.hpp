#pragma once
#include "numfield/number_field.hpp"
#include "exactmath/fp_poly.hpp"
#include <optional>

namespace msel {

/* Integral ideals are full-rank sublattices of O in w coordinates, rows = HNF basis. */

IntMat ideal_from_elements(const NumberField& K, const std::vector<NFElem>& gens,
                           const Int& rational_gen);
IntMat principal_ideal(const NumberField& K, const NFElem& x);
IntMat ideal_mul(const NumberField& K, const IntMat& a, const IntMat& b);
IntMat ideal_pow(const NumberField& K, const IntMat& a, long k);
IntMat ideal_add(const IntMat& a, const IntMat& b);
Int ideal_norm(const IntMat& a);
bool ideal_contains(const IntMat& a, const NFElem& x); /* x must be integral */
bool ideal_subset(const IntMat& a, const IntMat& b);   /* a subset of b */

/* canonical coset representative of v modulo the full-rank HNF lattice h */
std::vector<Int> reduce_mod_hnf(const IntMat& h, std::vector<Int> v);

/* solve z * mt = a (mod lambda) for z integral; mt is n x n, lambda full rank */
std::optional<std::vector<Int>> solve_mul_congruence(const IntMat& mt, const std::vector<Int>& a,
                                                     const IntMat& lambda);

/* x = a (mod lambda) simultaneously, for pairwise comaximal lattices */
std::vector<Int> crt_elements(const std::vector<std::vector<Int>>& as,
                              const std::vector<IntMat>& lambdas, const NumberField& K);

/* residue field O/P as F_{q^fdeg} via a primitive element */
struct ResidueField {
    u64 q = 2;
    long fdeg = 1;
    IntMat plat;                 /* the prime's HNF lattice */
    std::vector<long> free_pos;  /* coordinates carrying the quotient */
    FpPoly zmin;                 /* minimal polynomial of the primitive element */
    FpMat zpow;                  /* rows: quotient coords of z^0..z^{fdeg-1} */
    FpMat zpow_inv;

    FqCtx fq() const { return FqCtx(zmin); }

    std::vector<u64> qcoords(const NFElem& x) const; /* integral x -> quotient coords */
    FpPoly to_fq(const NFElem& x) const;             /* integral x -> F_{q^f} element */
    NFElem lift(const NumberField& K, const FpPoly& a) const;
};

struct PrimeIdeal {
    Int q;       /* rational prime below */
    long e = 1;  /* ramification index */
    long fdeg = 1;
    IntMat h;    /* HNF lattice */
    NFElem tau;  /* v_P(tau) = e-1, v_P'(tau) >= e' at siblings: anti-uniformizer numerator */
    NFElem pi;   /* v_P(pi) = 1 and v_P'(pi) = 0 at siblings */
    ResidueField rf;
};

/* all primes above q, sorted by HNF basis lexicographically */
std::vector<PrimeIdeal> factor_prime(const NumberField& K, const Int& q);

/* v_P(x) for nonzero x (denominators allowed) */
long valuation(const NumberField& K, const PrimeIdeal& P, const NFElem& x);

/* image in O/P of x with v_P(x) >= 0, denominators allowed; throws on v_P(x) < 0 */
FpPoly residue_image(const NumberField& K, const PrimeIdeal& P, const NFElem& x);

} // namespace msel
