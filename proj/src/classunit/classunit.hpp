#pragma once
#include "numfield/galois.hpp"
#include "numfield/ideals.hpp"

namespace msel {

struct ClassGroupOptions {
    bool assume_grh = false;          /* allow the smaller GRH generation bound */
    Int disc_ceiling = Int(1) << 40;  /* refuse unconditional runs above this |disc| */
};

/* Class group on a proven generating set of prime ideals.  The relation
   lattice is saturated at every prime dividing the candidate order by
   complete principality searches, so the presented group is exact, not just
   a quotient.  The unit group data produced along the way rides along. */
struct ClassGroup {
    const NumberField* K = nullptr;
    bool grh = false;                /* which generation bound was used */
    Int bound;                       /* ideals of norm <= bound generate */
    std::vector<PrimeIdeal> fb;      /* all primes above rational primes <= bound */
    IntMat rel_hnf;                  /* HNF of the proven relation lattice over fb */
    std::vector<Int> invariants;     /* cyclic orders d_1 | d_2 | ... (nontrivial) */
    std::vector<std::vector<Int>> gen_exps; /* cyclic generators as fb exponents >= 0 */
    std::vector<NFElem> gen_witness; /* explicit generator of gen_i ^ d_i */
    IntMat fb_dlog;                  /* row per fb prime: its class in invariant coords */

    /* torsion root of unity and fundamental units, saturated at primes <= 7 */
    NFElem zeta;
    long w = 2;
    std::vector<NFElem> units;

    Int h() const;
    /* class of a nonzero integral ideal (HNF rows) in invariant coordinates */
    std::vector<Int> dlog(const IntMat& ideal_hnf) const;
};

ClassGroup class_group(const NumberField& K, const ClassGroupOptions& opt = {});

/* O_{L,S}^* presented by a torsion root and fund.size() = r1 + r2 - 1 + |S|
   fundamental S-units; the first urank of them are units, the rest carry an
   HNF basis of the valuation lattice at S. */
struct SUnitGroup {
    const NumberField* K = nullptr;
    std::vector<PrimeIdeal> S;
    NFElem zeta;
    long w = 2;
    std::vector<NFElem> fund;
    long urank = 0;
    IntMat val; /* fund.size() x S.size() valuations; zero rows first */
};

SUnitGroup s_unit_group(const NumberField& K, const std::vector<PrimeIdeal>& S,
                        const ClassGroup& cl);

/* exponents (a_0; a_1..a_k) with gamma = zeta^{a_0} * prod fund_i^{a_i}.
   Logarithmic embeddings only propose; the result is verified by exact
   division.  Throws std::invalid_argument when gamma is not an S-unit. */
std::vector<Int> sunit_dlog(const NFElem& gamma, const SUnitGroup& U);

/* The p-Selmer group of the field: classes of beta modulo p-th powers with
   v_q(beta) = 0 mod p at every q outside S, for S = the full set of primes
   over p, together with the Galois action on a basis. */
struct FieldSelmerGroup {
    const NumberField* K = nullptr;
    long p = 2;
    std::vector<PrimeIdeal> S;
    SUnitGroup usp;            /* the S'-unit group the basis lives in */
    std::vector<NFElem> basis; /* b_1..b_d, exact elements */
    std::vector<FpMat> action; /* one d x d matrix per element of automorphism_group(K),
                                  column convention: column i of action[g] expresses
                                  g(b_i); empty when K is not normal over Q */
};

FieldSelmerGroup field_selmer_group(const NumberField& K, long p,
                                    const std::vector<PrimeIdeal>& S,
                                    const ClassGroupOptions& opt = {});

} // namespace msel
