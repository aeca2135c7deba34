#pragma once
#include "numfield/ideals.hpp"

namespace msel {

/* Local behavior of the Kummer extension L_P(u^{1/p})/L_P for a unit u at P | p.
   Requires mu_p inside the field (caller's responsibility globally); this needs
   (p-1) | e(P).  pth_power: u is a p-th power locally.  unram_class: the
   extension is unramified (trivial extensions count as unramified). */
struct LocalKummer {
    bool pth_power = false;
    bool unram_class = false;
};

LocalKummer local_kummer_at(const NumberField& K, const PrimeIdeal& P, const NFElem& u);

/* working precision exponent: everything happens in O/P^N */
long local_precision_exponent(long p, long e);

} // namespace msel
