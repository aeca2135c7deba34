#pragma once
#include "exactmath/int_mat.hpp"
#include <functional>

namespace msel {

/* LLL with delta = 3/4 on the rows of basis, inner product x Q y^T.
   Q must be symmetric positive definite on the row span (integer entries).
   Throws math_error on dependent rows.  Returns reduced basis and the
   unimodular transform U with reduced = U * basis. */
struct LllResult {
    IntMat basis;
    IntMat u;
};

LllResult lll_reduce(const IntMat& basis, const IntMat& form);

/* standard inner product */
LllResult lll_reduce(const IntMat& basis);

/* Nearest-plane approximation to the lattice vector closest to target under
   the form; approximation quality depends on how reduced the basis is.
   Returns the lattice vector itself. */
std::vector<Int> babai_nearest(const IntMat& basis, const IntMat& form,
                               const std::vector<Int>& target);

/* All nonzero integer vectors x with x Q x^T <= bound (up to sign: one of x/-x).
   Q positive definite rational Gram.  Throws ceiling_error when more than
   `cap` vectors would be produced. */
std::vector<std::vector<Int>> enumerate_short_vectors(const RatMat& q, const Rat& bound,
                                                      long cap);

} // namespace msel
