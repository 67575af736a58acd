#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ffm {

/// Arithmetic context for the prime field F_p.
///
/// Elements are canonical residues 0..p-1 stored in uint32_t. The constructor
/// rejects composite p and primes above the configured maximum: every
/// downstream table (cyclotomic bases, Witt blocks, enumeration budgets) is
/// sized for small p, and silently accepting a large prime would turn the
/// exact paths into memory bombs.
class PrimeField {
  public:
    explicit PrimeField(uint32_t p, uint32_t max_p = 13) : p_(p) {
        if (p < 2 || p > max_p) throw std::invalid_argument("PrimeField: p out of range: " + std::to_string(p));
        for (uint32_t d = 2; d * d <= p; ++d)
            if (p % d == 0) throw std::invalid_argument("PrimeField: p not prime: " + std::to_string(p));
    }

    uint32_t p() const { return p_; }

    uint32_t reduce(int64_t a) const {
        int64_t r = a % static_cast<int64_t>(p_);
        return static_cast<uint32_t>(r < 0 ? r + p_ : r);
    }
    uint32_t add(uint32_t a, uint32_t b) const { return (a + b) % p_; }
    uint32_t sub(uint32_t a, uint32_t b) const { return (a + p_ - b) % p_; }
    uint32_t neg(uint32_t a) const { return a == 0 ? 0 : p_ - a; }
    uint32_t mul(uint32_t a, uint32_t b) const {
        return static_cast<uint32_t>((static_cast<uint64_t>(a) * b) % p_);
    }
    uint32_t pow(uint32_t a, uint64_t e) const {
        uint64_t base = a % p_, acc = 1;
        while (e) {
            if (e & 1) acc = acc * base % p_;
            base = base * base % p_;
            e >>= 1;
        }
        return static_cast<uint32_t>(acc);
    }
    uint32_t inv(uint32_t a) const {
        if (a == 0) throw std::domain_error("PrimeField: division by zero");
        return pow(a, p_ - 2);
    }

  private:
    uint32_t p_;
};

}  // namespace ffm
