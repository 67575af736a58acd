#pragma once

#include <cstdint>
#include <vector>

#include "ffm/fields.hpp"

namespace ffm {

/// Dense polynomial over F_p, coefficients lowest-degree first with no
/// trailing zeros. The zero polynomial is the empty vector; degree() returns
/// the sentinel kZeroDegree for it (standing in for "degree -infinity").
struct FpPoly {
    static constexpr int kZeroDegree = -1;

    std::vector<uint32_t> c;

    FpPoly() = default;
    explicit FpPoly(std::vector<uint32_t> coeffs) : c(std::move(coeffs)) { trim(); }

    int degree() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    bool is_monic() const { return !c.empty() && c.back() == 1; }
    uint32_t coeff(int i) const {
        return (i < 0 || i >= static_cast<int>(c.size())) ? 0u : c[static_cast<size_t>(i)];
    }
    void trim() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }
    bool operator==(const FpPoly& o) const { return c == o.c; }
    bool operator<(const FpPoly& o) const;  // degree, then coefficient tuple from top

    static FpPoly one() { return FpPoly({1}); }
    static FpPoly x_power(int d, uint32_t lead = 1);
};

FpPoly poly_add(const PrimeField& F, const FpPoly& a, const FpPoly& b);
FpPoly poly_sub(const PrimeField& F, const FpPoly& a, const FpPoly& b);
FpPoly poly_mul(const PrimeField& F, const FpPoly& a, const FpPoly& b);
/// Quotient and remainder; b must be nonzero.
std::pair<FpPoly, FpPoly> poly_divmod(const PrimeField& F, const FpPoly& a, const FpPoly& b);
bool poly_divides(const PrimeField& F, const FpPoly& d, const FpPoly& a);
uint32_t poly_eval(const PrimeField& F, const FpPoly& a, uint32_t x);
std::string poly_to_string(const FpPoly& a);

/// The monic polynomials of degree d over F_p, addressable by index.
///
/// Index k in [0, p^d) maps to the polynomial whose coefficient of T^i
/// (i < d) is the base-p digit of k at position i; index order is therefore
/// lexicographic on the coefficient tuple read from the top coefficient down.
/// Index 0 is T^d, index p^d - 1 is T^d + (p-1)(T^{d-1} + ... + 1).
class MonicRange {
  public:
    MonicRange(const PrimeField& F, int d);
    uint64_t size() const { return size_; }
    FpPoly at(uint64_t k) const;

  private:
    uint32_t p_;
    int d_;
    uint64_t size_;
};

/// All monic irreducibles of degree 1..d_max, grouped by degree
/// (result[d] lists degree-d irreducibles in MonicRange order).
/// Irreducibility is decided by trial division against the lower-degree
/// irreducibles already enumerated.
std::vector<std::vector<FpPoly>> enumerate_irreducible(const PrimeField& F, int d_max);

/// Count of monic irreducibles of degree d over F_p (divisor-Moebius form);
/// used as the cross-check oracle for enumerate_irreducible.
uint64_t irreducible_count(uint32_t p, int d);

}  // namespace ffm
