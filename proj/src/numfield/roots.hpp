#pragma once
#include "numfield/number_field.hpp"
#include <optional>

namespace msel {

/* All roots in K of a squarefree monic integer polynomial, sorted by
   coordinate vector.  Roots are located by lifting residue roots at an
   auxiliary degree-one prime and recognizing coordinates by lattice
   reduction; every candidate is verified exactly, so no false positives. */
std::vector<NFElem> poly_roots_in_field(const NumberField& K, const IntPoly& g);

/* A root of y^p = x in K if one exists, located the same way and verified
   exactly by powering.  p must be a positive prime. */
std::optional<NFElem> pth_root_in_field(const NumberField& K, const NFElem& x, long p);

} // namespace msel
