#pragma once
#include "numfield/ideals.hpp"
#include "exactmath/fp_mat.hpp"

namespace msel {

/* Automorphism group of a Galois number field.  Element g acts on row
   coordinate vectors by x -> x * mats[g]; composition mult[a][b] is the
   element acting as "apply b, then a" (matrix mats[b] * mats[a]). */
struct GaloisGroup {
    const NumberField* K = nullptr;
    std::vector<IntMat> mats;
    std::vector<std::vector<long>> mult;
    std::vector<long> inv;
    long id = 0;

    long order() const { return (long)mats.size(); }
    NFElem apply(long g, const NFElem& x) const;
};

/* throws math_error when K is not normal over Q */
GaloisGroup automorphism_group(const NumberField& K);

/* permutation induced by g on a list of distinct elements stable under g */
std::vector<long> perm_action(const GaloisGroup& G, long g, const std::vector<NFElem>& pts);

struct DecompInfo {
    std::vector<long> dgroup; /* stabilizer of P */
    std::vector<long> igroup; /* trivial action on O/P */
    long frobenius = 0;       /* acts as x -> x^q on O/P (any representative) */
};
DecompInfo decomposition_at(const GaloisGroup& G, const PrimeIdeal& P);

/* lower-numbering ramification groups G_0 >= G_1 >= ... down to the first
   trivial group (exclusive); result[0] is the inertia group */
std::vector<std::vector<long>> ramification_filtration(const GaloisGroup& G, const PrimeIdeal& P);

/* group closure of matrix generators over F_p; throws ceiling_error on blowup */
std::vector<FpMat> close_matrix_group(const std::vector<FpMat>& gens, long cap);

/* dimensions of H^0, H^1, H^2 of a closed matrix group acting on column
   vectors of F_p^d, by normalized-cochain linear algebra */
struct CohomologyDims {
    long h0 = 0, h1 = 0, h2 = 0;
};
CohomologyDims cohomology_dims(const std::vector<FpMat>& grp);

/* prime-to-p Artin conductor of the representation rho (one matrix per group
   element, column action, rho[mult[a][b]] = rho[a] * rho[b]) from the
   ramification filtrations of K */
Int serre_conductor(const GaloisGroup& G, const std::vector<FpMat>& rho, u64 p);

/* mod-p representation of the full automorphism group: one invertible m x m
   matrix per element, column action, mats[mult[a][b]] = mats[a] * mats[b] */
struct GaloisRep {
    u64 p = 2;
    long m = 2;
    std::vector<FpMat> mats;
};

/* extend images of a generating set to the whole group through the
   multiplication table; throws invalid_argument when an image is singular,
   the given elements do not generate, or the images violate a relation */
GaloisRep match_representation(const GaloisGroup& G,
                               const std::vector<std::pair<long, FpMat>>& gen_images);

/* lines of F_p^m fixed setwise by rho(g) for every g in the list; each line
   is returned by its first-nonzero-coordinate-1 representative, sorted lex */
std::vector<std::vector<u64>> stable_lines(const GaloisRep& rho,
                                           const std::vector<long>& elements);

} // namespace msel
