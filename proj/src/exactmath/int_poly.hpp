#pragma once
#include "exactmath/int_mat.hpp"
#include "exactmath/fp_poly.hpp"

namespace msel {

/* Integer polynomials, little-endian coefficients, normalized. */
struct IntPoly {
    std::vector<Int> c;

    IntPoly() = default;
    explicit IntPoly(std::vector<Int> cs) : c(std::move(cs)) { normalize(); }
    static IntPoly from_long(const std::vector<long>& v);

    void normalize() { while (!c.empty() && c.back() == 0) c.pop_back(); }
    long deg() const { return (long)c.size() - 1; }
    bool is_zero() const { return c.empty(); }
    const Int& lead() const { return c.back(); }
    Int coeff(long i) const { return (i >= 0 && i < (long)c.size()) ? c[i] : Int(0); }
    bool is_monic() const { return !c.empty() && c.back() == 1; }
    bool operator==(const IntPoly& o) const = default;
    std::string str() const;
};

IntPoly ip_add(const IntPoly& a, const IntPoly& b);
IntPoly ip_sub(const IntPoly& a, const IntPoly& b);
IntPoly ip_mul(const IntPoly& a, const IntPoly& b);
IntPoly ip_scale(const IntPoly& a, const Int& s);
/* division when divisor monic (or divides exactly); throws if remainder sought is nonzero */
std::pair<IntPoly, IntPoly> ip_divrem_monic(const IntPoly& a, const IntPoly& b);
bool ip_divides(const IntPoly& g, const IntPoly& f); /* exact division test over Z */
IntPoly ip_derivative(const IntPoly& a);
Int ip_eval(const IntPoly& a, const Int& x);
Rat ip_eval(const IntPoly& a, const Rat& x);
Int ip_content(const IntPoly& a);
IntPoly ip_primitive(const IntPoly& a);

FpPoly ip_mod_p(const IntPoly& a, u64 p);

Int ip_resultant(const IntPoly& f, const IntPoly& g);
Int ip_discriminant(const IntPoly& f); /* requires monic f */

/* number of real roots (f squarefree), Sturm chain over Q */
long ip_count_real_roots(const IntPoly& f);

/* monic integer factorization (Zassenhaus); input must be monic squarefree-or-not */
std::vector<std::pair<IntPoly, int>> ip_factor_monic(const IntPoly& f);
bool ip_is_irreducible_monic(const IntPoly& f);

/* rational roots of a monic integer polynomial are integers dividing c0 */
std::vector<Int> ip_integer_roots_monic(const IntPoly& f);

} // namespace msel
