#include "exactmath/int_types.hpp"
#include "exactmath/errors.hpp"
#include <algorithm>
#include <map>

namespace msel {

std::vector<long> primes_up_to(long bound) {
    std::vector<long> out;
    if (bound < 2) return out;
    std::vector<bool> comp(bound + 1, false);
    for (long i = 2; i <= bound; i++) {
        if (comp[i]) continue;
        out.push_back(i);
        for (long j = 2 * i; j <= bound; j += i) comp[j] = true;
    }
    return out;
}

namespace {

Int pollard_rho(const Int& n) {
    /* Brent variant, deterministic constant sequence */
    for (unsigned long c = 1; c < 64; c++) {
        Int x = 2, y = 2, d = 1;
        long iter = 0;
        while (d == 1 && iter < 1 << 22) {
            x = (x * x + c) % n;
            y = (y * y + c) % n;
            y = (y * y + c) % n;
            d = gcd(abs(x - y), n);
            iter++;
        }
        if (d != 1 && d != n) return d;
    }
    throw ceiling_error("factor_int: cofactor resists factorization budget");
}

void factor_rec(const Int& n, std::map<Int, int>& acc) {
    if (n == 1) return;
    if (is_probable_prime(n)) { acc[n]++; return; }
    Int d = pollard_rho(n);
    factor_rec(d, acc);
    factor_rec(n / d, acc);
}

} // namespace

std::vector<std::pair<Int, int>> factor_int(Int n) {
    std::map<Int, int> acc;
    if (n < 0) n = -n;
    if (n == 0) throw math_error("factor_int: zero");
    for (long q : primes_up_to(20000)) {
        while (n % q == 0) { acc[Int(q)]++; n /= q; }
        if (n == 1) break;
    }
    if (n > 1) factor_rec(n, acc);
    return std::vector<std::pair<Int, int>>(acc.begin(), acc.end());
}

} // namespace msel
