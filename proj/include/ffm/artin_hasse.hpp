#pragma once

#include <cstdint>
#include <vector>

#include "ffm/fields.hpp"
#include "ffm/truncated_unit.hpp"

namespace ffm {

/// Coefficients mod p of exp(-(1/m) * sum_{k>=0} y^{p^k}/p^k) up to y^N,
/// for m prime to p. The exact rational coefficients are p-integral (Dwork);
/// a p in any denominator after reduction signals an implementation bug and
/// throws. result[e] is the coefficient of y^e. m = 1 is the Artin-Hasse
/// exponential itself; general m is its m-th root, the block generator of the
/// one-unit decomposition.
std::vector<uint32_t> artin_hasse_series_mod_p(uint32_t p, uint32_t m, uint32_t N);

/// Coordinates of the unique factorization of a one-unit u mod x^{n+1} as
///   u = prod_{j=1..n} AH(a_j x^j)^{1/m(j)},   m(j) = prime-to-p part of j.
/// result[j-1] = a_j. Solved by triangular elimination: the factor at level j
/// is the first one to touch the x^j coefficient.
std::vector<uint32_t> ah_decompose(const PrimeField& F, const TruncatedUnit& u);

/// Rebuild the unit from its coordinates (round-trip partner of ah_decompose).
TruncatedUnit ah_recompose(const PrimeField& F, uint32_t n, const std::vector<uint32_t>& a);

}  // namespace ffm
