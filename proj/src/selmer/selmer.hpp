#pragma once
#include "classunit/classunit.hpp"

namespace msel {

/* Exponent m with: every cyclic degree-p extension of a local field with
   absolute ramification index e has conductor dividing P^m.  Working modulus
   for ray-class style computations at a prime over p. */
long compute_modulus_bound(long p, long e);

/* Does L(beta^{1/p})/L stay unramified at Q?  Q must lie over p and the
   completion at Q must contain the p-th roots of unity.  Exact test: with
   v = v_Q(beta) (ramified unless p | v), s = e/(p-1) and t = p*s, the
   extension is unramified iff x^p * pi^v = beta (mod Q^{t+v}) has a solution,
   and x^p * pi^v mod Q^{t+v} only depends on x mod Q^s, so all q^s residues
   are tried.  Throws ceiling_error when q^s is out of reach. */
bool kummer_unramified(const NumberField& K, long p, const PrimeIdeal& Q, const NFElem& beta);

/* Solutions Phi of Phi * dual[g] = rho[g] * Phi: the homomorphisms from the
   Galois group of the compositum of all degree-p Kummer extensions cut out by
   W (an F_p[G]-module via dual[g] = chi(g) * (A_g^{-1})^T, chi the mod-p
   cyclotomic character) into F_p^m carrying the action rho.  Each solution is
   one mod-p Galois cohomology class with no local condition imposed. */
struct HomSpace {
    const FieldSelmerGroup* W = nullptr;
    GaloisGroup G;
    GaloisRep rho;
    std::vector<FpMat> dual;  /* action on Hom(W, mu_p), indexed like G */
    std::vector<FpMat> basis; /* m x d solutions Phi */
    bool exact = true;        /* H^1 and H^2 of im(rho) both vanish */

    long rank() const { return (long)basis.size(); }
};

HomSpace relaxed_selmer(const FieldSelmerGroup& W, const GaloisRep& rho);

/* The abelian extension M/L attached to a line of the Hom space: M is the
   compositum of L(beta^{1/p}) over the Kummer generators below, Gal(M/L) is
   identified with F_p^m by pairing against them, and the outer Galois action
   on Gal(M/L) is rho.  M is never constructed as a number field: bgens[k] is
   the product of W basis elements by row k of f, so Gal(M/L) = Hom(B, mu_p)
   for B the row space of f, and row k pairs to the k-th coordinate. */
struct KummerExtension {
    FpMat f;                   /* m x d representative of the line */
    std::vector<NFElem> bgens; /* Kummer generators, one per row of f */
    bool surjective = true;    /* rank f = m, i.e. Gal(M/L) is all of F_p^m */
};

/* one extension per line of the Hom space, lines in lex order of their
   canonical coefficient vectors */
std::vector<KummerExtension> enumerate_extensions(const HomSpace& H);

/* Diagnostic census of the stable submodules behind enumerate_extensions:
   codimension-m submodules N of Hom(W, mu_p) stable under the Galois action
   (every quotient by such an N is (Z/p)^m as a group, i.e. a candidate
   Gal(M/L)), and how many of the quotient actions are isomorphic to rho. */
struct SubmoduleCensus {
    long total = 0;
    long via_rho = 0;
};
SubmoduleCensus submodule_census(const HomSpace& H);

/* image of the inertia group at Q inside Gal(M/L) = F_p^m */
struct InertiaImage {
    FpMat space; /* rows span the image */
    long dim = 0;
};

/* Inertia at Q of the extension attached to E: the annihilator, under the
   Kummer pairing, of the subgroup of unramified-at-Q elements of B, cut down
   to Gal(M/L) = the column space of f (all of F_p^m in the surjective case).
   Throws invalid_argument when Q does not lie over p. */
InertiaImage inertia_image(const HomSpace& H, const KummerExtension& E, const PrimeIdeal& Q);

/* dimension of the subspace of the Hom space whose classes have inertia at Q
   contained in the given line of F_p^m (the nearly-ordinary condition) */
long rank_no_at(const HomSpace& H, const std::vector<KummerExtension>& exts,
                const PrimeIdeal& Q, const std::vector<u64>& line);

struct LineRank {
    std::vector<u64> line;           /* canonical spanning vector */
    bool unramified_quotient = true; /* inertia below acts trivially on V/line */
    long rank_no = 0;
    std::vector<NFElem> witness;     /* Kummer generators of one class realizing it */
};

struct SelmerRankReport {
    long p = 2;
    bool exact = true;      /* inherited from the Hom space */
    long rank_rel = 0;
    std::vector<NFElem> witness_rel;
    std::vector<LineRank> lines; /* one per rho(D)-stable line at the chosen prime */
    long rank_unr = 0;
    std::vector<NFElem> witness_unr;
    IntMat chosen_prime;    /* HNF of the prime over p used for the line conditions */
    long extensions = 0;    /* number of lines of the Hom space */
};

/* Ranks of the relaxed / nearly-ordinary / unramified Selmer groups of rho.
   The nearly-ordinary condition is evaluated at the lex-smallest prime over p
   (one line report per stable line of rho on its decomposition group); the
   unramified condition is imposed at every prime over p at once. */
SelmerRankReport selmer_ranks(const FieldSelmerGroup& W, const GaloisRep& rho);

/* Recompute every nearly-ordinary rank at every prime over p with that
   prime's own stable lines and check the (tag, rank) multisets agree, as the
   theory demands.  Returns false when any prime disagrees. */
bool choice_independence_audit(const HomSpace& H);

} // namespace msel
