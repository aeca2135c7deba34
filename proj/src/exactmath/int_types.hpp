#pragma once
#include <gmpxx.h>
#include <cstdint>
#include <stdexcept>
#include <vector>
#include <string>

namespace msel {

using Int = mpz_class;
using Rat = mpq_class;

/* mpq_class(a, b) does not canonicalize; always build fractions through this */
inline Rat make_rat(const Int& num, const Int& den) {
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline Int gcd(const Int& a, const Int& b) {
    Int r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline Int lcm(const Int& a, const Int& b) {
    Int r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

/* floor division; remainder in [0, |b|) */
inline Int fdiv_q(const Int& a, const Int& b) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline Int fdiv_r(const Int& a, const Int& b) {
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

/* quotient rounded to nearest (ties toward zero); keeps HNF/gcd loops shrinking */
inline Int rdiv_q(const Int& a, const Int& b) {
    Int q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    Int babs = abs(b);
    if (2 * r > babs) q += 1;
    return q;
}

inline Int pow_int(const Int& a, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), a.get_mpz_t(), e);
    return r;
}

inline Int invert_mod(const Int& a, const Int& m) {
    Int r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
        throw std::domain_error("invert_mod: not invertible");
    return r;
}

inline Int powmod(const Int& a, const Int& e, const Int& m) {
    Int r;
    mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
    return r;
}

inline bool is_probable_prime(const Int& n) {
    return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

inline bool is_square(const Int& n) {
    return mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

inline Int isqrt(const Int& n) {
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

/* exact k-th root if n is a perfect k-th power, else nullopt-like flag via bool */
inline bool iroot_exact(const Int& n, unsigned long k, Int& out) {
    Int r;
    int exact = mpz_root(r.get_mpz_t(), n.get_mpz_t(), k);
    out = r;
    return exact != 0;
}

/* factorization of |n| into prime -> exponent, trial division then Pollard rho.
   Deterministic; throws ceiling_error if a cofactor resists the budget. */
std::vector<std::pair<Int, int>> factor_int(Int n);

/* primes q <= bound, simple sieve */
std::vector<long> primes_up_to(long bound);

} // namespace msel
