#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "ffm/lfam.hpp"
#include "ffm/tensor.hpp"

namespace ffm {

using BigInt = boost::multiprecision::cpp_int;

/// Irreducible label: sorted degrees 0 <= d_1 <= ... <= d_{r+rt} <= n-1 with
/// the split (first r slots plain, last rt slots det^{-1}-twisted). The
/// shifted exponents e_i = d_i + i - 1 are strictly increasing.
struct HighestWeight {
    std::vector<int> d;
    uint32_t r = 0, rt = 0, n = 0;

    HighestWeight(std::vector<int> degrees, uint32_t r_, uint32_t rt_, uint32_t n_);
    uint32_t arity() const { return r + rt; }
    int64_t degree_sum() const;
    /// e_i = d_i + i - 1 (1-based i), strictly increasing.
    std::vector<int> shifted() const;
};

/// All sorted weights in [0, n-1]^{r+rt}, in lexicographic order.
std::vector<HighestWeight> enumerate_sorted_weights(uint32_t n, uint32_t r, uint32_t rt);

/// Wedge-power expansion of V_w: terms (sgn sigma, tuple d_i + i - sigma(i))
/// over permutations sigma keeping every entry in [0, n-1].
std::vector<std::pair<int, std::vector<int>>> jacobi_trudi_terms(const HighestWeight& w);

/// F(V_w) from the moment tensor M (unnormalized, sign-free family sums):
///   F(V_w) = (-1)^{sum d} sum_terms sgn * M(tuple).
/// Absent sparse entries inside [0, n-1]^{r+rt} are exact zeros.
HalfPowerScalar F_of_irreducible(const LaurentTensor& M, const HighestWeight& w);

/// Numeric trace of one character at the weight: the Jacobi-Trudi determinant
/// det(e_{d_i + i - j}) in the elementary symmetric functions of the
/// unitarized inverse roots, e_a = (-1)^a lambda_a, times the raw twist
/// epsilon^{-rt}. Summed over the family this equals F_of_irreducible. (The
/// det^{-rt} twist of the zeros differs from epsilon^{-rt} by the global
/// constant (-1)^{rt(n-1)}; the raw-epsilon convention matches the moment
/// tensor and is used consistently on both sides.)
std::complex<double> schur_at_zeros(const LFunctionRecord& rec, const HighestWeight& w,
                                    uint32_t p);

/// True iff some split point k has sum_{i<=k} d_i <= n-1,
/// sum_{i>k} (n-1-d_i) <= n-1, and k == r mod m: the weight appears in a
/// tensor power of the standard representation and its dual within range.
bool is_major_arc(const HighestWeight& w, uint32_t m);

/// GL_{r+rt} Weyl dimension prod_{i<j}(e_j - e_i) / prod_i (i-1)!; the
/// multiplicity of V_w in the full wedge-tuple direct sum. Division is exact.
BigInt multiplicity(const HighestWeight& w);

/// Evaluable cohomology budget: bound(d) = 4 (2+max(r,rt))^{n + sum d} and
/// the constant C = (2+max(r,rt))^{max(r,rt)+1}; error_reference renders
/// q^{(w-n)/2} C^n n^{r+rt} with constant 1.
struct BettiBudget {
    uint32_t n, r, rt;
    BettiBudget(uint32_t n_, uint32_t r_, uint32_t rt_) : n(n_), r(r_), rt(rt_) {}
    BigInt C() const;
    BigInt bound(const std::vector<int>& d) const;
    double error_reference(double q, double w) const;
};

}  // namespace ffm
