#pragma once
#include "numfield/number_field.hpp"

namespace msel {

/* Fixed-point reals: a value x is carried as the integer round(x * 2^prec).
   Every function below takes the shared scale exponent prec. */
Int hp_mul(const Int& a, const Int& b, long prec);
Int hp_div(const Int& a, const Int& b, long prec);
Int hp_sqrt(const Int& a, long prec); /* a >= 0 */
Int hp_ln(const Int& a, long prec);   /* a > 0 */
Int hp_exp(const Int& a, long prec);
Int hp_ln2(long prec);
Int hp_pi(long prec);
double hp_to_double(const Int& a, long prec);

/* complex value, both parts at the shared scale */
struct CF {
    Int re, im;
};
CF cf_add(const CF& a, const CF& b);
CF cf_sub(const CF& a, const CF& b);
CF cf_neg(const CF& a);
CF cf_conj(const CF& a);
CF cf_mul(const CF& a, const CF& b, long prec);
CF cf_div(const CF& a, const CF& b, long prec);
Int cf_abs2(const CF& a, long prec);
Int cf_abs(const CF& a, long prec);

/* All complex roots of a squarefree monic integer polynomial at the given
   precision.  Layout: real roots first in ascending order with im = 0, then
   conjugate pairs adjacent, positive imaginary part first, pairs ordered by
   real part.  The real-root count is certified against the sign-variation
   count; throws math_error when the configuration cannot be certified. */
std::vector<CF> complex_roots(const IntPoly& f, long prec);

/* archimedean embeddings of a number field at a working precision */
struct Embeddings {
    const NumberField* K = nullptr;
    long prec = 0;
    std::vector<CF> th; /* the n images of theta, ordered as complex_roots */

    std::vector<CF> of(const NFElem& x) const; /* all n embedding values */

    /* log |sigma(x)| for every embedding; x must be nonzero */
    std::vector<Int> log_abs(const NFElem& x) const;

    /* integer Gram matrix round(2^scale * sum_sigma sigma(w_i) conj(sigma(w_j)))
       of the integral basis; symmetric positive definite for reasonable scale */
    IntMat t2_gram(long scale) const;
};

Embeddings make_embeddings(const NumberField& K, long prec);

} // namespace msel
