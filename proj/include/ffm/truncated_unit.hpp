#pragma once

#include <cstdint>
#include <vector>

#include "ffm/poly.hpp"

namespace ffm {

/// One-unit in F_p[[x]]/x^{n+1}: an element 1 + c_1 x + ... + c_n x^n.
/// Coefficient c_j is stored at index j-1. Multiplication truncates at x^n.
struct TruncatedUnit {
    uint32_t n = 0;
    std::vector<uint32_t> c;  // c[j-1] = coefficient of x^j

    TruncatedUnit() = default;
    explicit TruncatedUnit(uint32_t order) : n(order), c(order, 0) {}
    TruncatedUnit(uint32_t order, std::vector<uint32_t> coeffs) : n(order), c(std::move(coeffs)) {}

    static TruncatedUnit one(uint32_t order) { return TruncatedUnit(order); }
    uint32_t coeff(uint32_t j) const { return (j >= 1 && j <= n) ? c[j - 1] : (j == 0 ? 1u : 0u); }
    bool is_one() const {
        for (uint32_t v : c)
            if (v) return false;
        return true;
    }
    bool operator==(const TruncatedUnit& o) const { return n == o.n && c == o.c; }

    /// Index in [0, p^n): base-p digits c_1..c_n, c_1 least significant.
    uint64_t dense_index(uint32_t p) const;
    static TruncatedUnit from_dense_index(uint32_t p, uint32_t order, uint64_t idx);
};

TruncatedUnit unit_mul(const PrimeField& F, const TruncatedUnit& a, const TruncatedUnit& b);
TruncatedUnit unit_inverse(const PrimeField& F, const TruncatedUnit& a);

/// x^{deg f} f(1/x) truncated mod x^{n+1}: the reversal of a monic polynomial,
/// a one-unit whose x^j coefficient is the coefficient of T^{deg f - j} in f.
/// Depends only on the top n+1 coefficients of f. Multiplicative in f.
TruncatedUnit reverse_unit(const PrimeField& F, const FpPoly& f, uint32_t n);

}  // namespace ffm
