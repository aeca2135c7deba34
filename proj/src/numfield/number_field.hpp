#pragma once
#include "exactmath/int_poly.hpp"
#include "exactmath/int_mat.hpp"

namespace msel {

/* Field element: integer coordinates over the integral basis, divided by den.
   Canonical: den > 0 and gcd(den, content(v)) = 1. */
struct NFElem {
    std::vector<Int> v;
    Int den = 1;

    NFElem() = default;
    NFElem(std::vector<Int> v_, Int d) : v(std::move(v_)), den(std::move(d)) { normalize(); }
    explicit NFElem(std::vector<Int> v_) : v(std::move(v_)), den(1) {}

    void normalize();
    bool is_integral() const { return den == 1; }
    bool is_zero() const;
    bool operator==(const NFElem& o) const = default;
    std::string str() const;
};

/* Number field Q[x]/(f), f monic irreducible, with its maximal order.
   The integral basis w_0..w_{n-1} is HNF over the power basis; 1 need not be
   a basis vector (its coordinates are w_one). */
struct NumberField {
    IntPoly f;
    long n = 0;
    long r1 = 0, r2 = 0;
    Int disc;       /* field discriminant */
    Int index;      /* [O : Z[theta]] */
    IntMat basis_num; /* rows: integral basis in power coordinates, over basis_den */
    Int basis_den = 1;
    RatMat basis_rat;  /* basis_num / basis_den */
    RatMat basis_inv;  /* power coords -> w coords */
    std::vector<IntMat> rep; /* rep[i]: row j = w coords of w_i * w_j */
    std::vector<Int> trace_w;
    std::vector<Int> w_one; /* coordinates of 1 over the integral basis */

    explicit NumberField(const IntPoly& poly);

    NFElem zero() const { return NFElem(std::vector<Int>(n, 0)); }
    NFElem one() const;
    NFElem theta() const; /* the class of x */
    NFElem from_rational(const Rat& r) const;
    NFElem from_w(std::vector<Int> w) const { return NFElem(std::move(w)); }

    /* element given by rational coordinates in the power basis 1, x, ..., x^{n-1} */
    NFElem from_power(const std::vector<Rat>& c) const;
    std::vector<Rat> to_power(const NFElem& a) const;

    NFElem add(const NFElem& a, const NFElem& b) const;
    NFElem sub(const NFElem& a, const NFElem& b) const;
    NFElem neg(const NFElem& a) const;
    NFElem mul(const NFElem& a, const NFElem& b) const;
    NFElem mul_rational(const NFElem& a, const Rat& c) const;
    NFElem inv(const NFElem& a) const;  /* throws math_error on zero */
    NFElem div(const NFElem& a, const NFElem& b) const;
    NFElem pow(const NFElem& a, const Int& e) const; /* e < 0 uses inv */

    Rat trace(const NFElem& a) const;
    Rat norm(const NFElem& a) const;

    /* matrix of multiplication by integral a on the w basis (row convention:
       coords of a*w_j form row j) */
    IntMat mul_matrix(const NFElem& a) const;

    /* apply an integer matrix (e.g. an automorphism on the w basis) to an element */
    NFElem apply_matrix(const IntMat& m, const NFElem& a) const;

    bool is_rational(const NFElem& a, Rat* out = nullptr) const;

    /* evaluate an integer polynomial at a */
    NFElem eval_poly(const IntPoly& g, const NFElem& a) const;
};

/* Dedekind test: is Z[x]/(f) already maximal at q?  Exposed for cross-checks. */
bool equation_order_q_maximal(const IntPoly& f, const Int& q);

/* Round-2 maximal order computation: returns basis over the power basis.
   basis rows are HNF with denominator den. */
struct OrderBasis {
    IntMat num;
    Int den;
};
OrderBasis maximal_order(const IntPoly& f);

/* rep matrices of an order given by a basis over the power basis:
   out[i] row j = coords of w_i * w_j over the same basis.  Throws if not closed. */
std::vector<IntMat> order_rep_matrices(const IntPoly& f, const IntMat& basis_num,
                                       const Int& basis_den);

} // namespace msel
