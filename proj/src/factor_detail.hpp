#ifndef CMCIRCUITS_FACTOR_DETAIL_HPP
#define CMCIRCUITS_FACTOR_DETAIL_HPP

#include <cstdint>
#include <vector>

#include "cmcircuits/poly.hpp"

namespace cmc::detail {

// Dense univariate polynomial over the integers, coefficients ascending.
using UPoly = std::vector<Int>;

int udeg(const UPoly& f);
void utrim(UPoly& f);
UPoly umul(const UPoly& a, const UPoly& b);
UPoly uadd(const UPoly& a, const UPoly& b);
UPoly usub(const UPoly& a, const UPoly& b);
UPoly uderiv(const UPoly& f);
Int ucontent(const UPoly& f);           // nonnegative
UPoly uprimitive(const UPoly& f);       // positive leading coefficient
bool udiv_exact(const UPoly& f, const UPoly& d, UPoly* q);
UPoly ugcd(const UPoly& a, const UPoly& b);  // primitive, positive lc

// Yun squarefree decomposition of a primitive polynomial with positive
// leading coefficient: result[i] = squarefree factor of multiplicity i+1.
std::vector<UPoly> usquarefree(const UPoly& f);

// Irreducible factors over the integers of a primitive squarefree input
// (Zassenhaus: modular factorization, Hensel lifting, subset recombination).
std::vector<UPoly> uzassenhaus(const UPoly& f, int max_modular_factors, unsigned seed);

bool uis_squarefree(const UPoly& f);

}  // namespace cmc::detail

#endif
