#pragma once
#include "exactmath/fp_mat.hpp"
#include <random>

namespace msel {

/* Polynomials over F_p, little-endian coefficients, normalized. */
struct FpPoly {
    u64 p = 2;
    std::vector<u64> c; /* c[i]: coefficient of x^i; empty = zero poly */

    FpPoly() = default;
    explicit FpPoly(u64 p_) : p(p_) {}
    FpPoly(u64 p_, std::vector<u64> cs) : p(p_), c(std::move(cs)) { normalize(); }

    void normalize();
    long deg() const { return (long)c.size() - 1; } /* -1 for zero */
    bool is_zero() const { return c.empty(); }
    u64 lead() const { return c.back(); }
    u64 coeff(long i) const { return (i >= 0 && i < (long)c.size()) ? c[i] : 0; }
    bool operator==(const FpPoly& o) const = default;
    std::string str() const;

    static FpPoly xpow(u64 p, long n);
    static FpPoly constant(u64 p, u64 v);
};

FpPoly fpp_add(const FpPoly& a, const FpPoly& b);
FpPoly fpp_sub(const FpPoly& a, const FpPoly& b);
FpPoly fpp_mul(const FpPoly& a, const FpPoly& b);
FpPoly fpp_scale(const FpPoly& a, u64 s);
std::pair<FpPoly, FpPoly> fpp_divrem(const FpPoly& a, const FpPoly& b);
FpPoly fpp_mod(const FpPoly& a, const FpPoly& b);
FpPoly fpp_gcd(FpPoly a, FpPoly b);          /* monic gcd */
FpPoly fpp_monic(const FpPoly& a);
FpPoly fpp_derivative(const FpPoly& a);
FpPoly fpp_powmod(const FpPoly& a, const Int& e, const FpPoly& m);
u64 fpp_eval(const FpPoly& a, u64 x);

/* g, h with g*a + h*b = gcd(a,b) (monic) */
struct FppXgcd { FpPoly g, s, t; };
FppXgcd fpp_xgcd(const FpPoly& a, const FpPoly& b);

bool fpp_is_squarefree(const FpPoly& a);
bool fpp_is_irreducible(const FpPoly& a);

/* full factorization: list of (irreducible monic factor, multiplicity).
   Deterministic: splitting randomness comes from a fixed-seed generator. */
std::vector<std::pair<FpPoly, int>> fpp_factor(const FpPoly& a);

/* roots in F_p, sorted */
std::vector<u64> fpp_roots(const FpPoly& a);

/* Finite field F_q, q = p^f, as F_p[x]/(modulus); elements are reduced FpPoly. */
struct FqCtx {
    u64 p;
    long f;
    FpPoly modulus; /* monic irreducible of degree f */

    explicit FqCtx(FpPoly m) : p(m.p), f(m.deg()), modulus(std::move(m)) {}
    static FqCtx make(u64 p, long f); /* deterministic irreducible modulus */

    FpPoly zero() const { return FpPoly(p); }
    FpPoly one() const { return FpPoly::constant(p, 1); }
    FpPoly embed(u64 v) const { return FpPoly::constant(p, v % p); }
    FpPoly reduce(const FpPoly& a) const { return fpp_mod(a, modulus); }
    FpPoly mul(const FpPoly& a, const FpPoly& b) const { return reduce(fpp_mul(a, b)); }
    FpPoly add(const FpPoly& a, const FpPoly& b) const { return fpp_add(a, b); }
    FpPoly sub(const FpPoly& a, const FpPoly& b) const { return fpp_sub(a, b); }
    FpPoly inv(const FpPoly& a) const;
    FpPoly pow(const FpPoly& a, const Int& e) const;
    FpPoly frobenius(const FpPoly& a) const { return pow(a, Int((unsigned long)p)); }
    FpPoly pth_root(const FpPoly& a) const;  /* inverse of Frobenius */
    bool is_pth_power_mult(const FpPoly& a) const { return true; } /* char p */

    /* all t with t^p + c*t = d (possibly empty); F_p-linear system on coords */
    std::vector<FpPoly> solve_artin_schreier(const FpPoly& c, const FpPoly& d) const;

    std::vector<u64> coords(const FpPoly& a) const; /* length f */
    FpPoly from_coords(const std::vector<u64>& v) const;
};

} // namespace msel
