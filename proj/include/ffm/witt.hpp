#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace ffm {

/// Least l >= 0 with m * p^l > n. For m <= n this is always >= 1.
inline uint32_t witt_length(uint32_t p, uint32_t m, uint32_t n) {
    uint32_t l = 0;
    uint64_t v = m;
    while (v <= n) {
        v *= p;
        ++l;
    }
    return l;
}

/// Coordinate blocks of the truncated Witt parameterization at level n:
/// one block per m <= n prime to p, carrying the indices m, mp, ..., mp^{l-1}
/// with l = witt_length(p, m, n). The index sets partition {1, ..., n}.
struct WittBlock {
    uint32_t m;        // prime-to-p part
    uint32_t length;   // l(m, n)
    uint64_t modulus;  // p^length
    std::vector<uint32_t> indices;  // m * p^i for i < length
};

inline std::vector<WittBlock> witt_blocks(uint32_t p, uint32_t n) {
    std::vector<WittBlock> blocks;
    for (uint32_t m = 1; m <= n; ++m) {
        if (m % p == 0) continue;
        WittBlock b;
        b.m = m;
        b.length = witt_length(p, m, n);
        b.modulus = 1;
        uint64_t idx = m;
        for (uint32_t i = 0; i < b.length; ++i) {
            b.modulus *= p;
            b.indices.push_back(static_cast<uint32_t>(idx));
            idx *= p;
        }
        blocks.push_back(std::move(b));
    }
    return blocks;
}

inline uint64_t pow_u64(uint64_t base, uint32_t e) {
    uint64_t r = 1;
    while (e--) r *= base;
    return r;
}

/// Teichmueller lift of a mod p^l: the unique (p-1)-st root of unity (or 0)
/// in Z/p^l congruent to a mod p, computed as a^{p^{l-1}} mod p^l.
inline uint64_t teichmuller(uint32_t p, uint32_t l, uint32_t a) {
    uint64_t mod = pow_u64(p, l);
    uint64_t acc = a % mod;
    for (uint32_t i = 1; i < l; ++i) {
        // repeated p-th power; exponent p fits easily at desk scale
        uint64_t base = acc, r = 1;
        for (uint32_t j = 0; j < p; ++j) r = r * base % mod;
        acc = r;
    }
    return acc;
}

/// Ring isomorphism W_l(F_p) -> Z/p^l for the prime field:
/// (w_0, ..., w_{l-1}) -> sum tau(w_i) p^i. Frobenius is the identity on F_p,
/// so the Teichmueller digits carry no twist.
inline uint64_t witt_zmod_iso(uint32_t p, uint32_t l, const std::vector<uint32_t>& w) {
    if (w.size() != l) throw std::invalid_argument("witt_zmod_iso: length mismatch");
    uint64_t mod = pow_u64(p, l);
    uint64_t acc = 0, pi = 1;
    for (uint32_t i = 0; i < l; ++i) {
        acc = (acc + teichmuller(p, l, w[i]) % mod * pi) % mod;
        pi *= p;
    }
    return acc;
}

/// Inverse of witt_zmod_iso: peel Teichmueller digits.
inline std::vector<uint32_t> witt_zmod_iso_inv(uint32_t p, uint32_t l, uint64_t t) {
    uint64_t mod = pow_u64(p, l);
    t %= mod;
    std::vector<uint32_t> w(l, 0);
    for (uint32_t i = 0; i < l; ++i) {
        uint32_t digit = static_cast<uint32_t>(t % p);
        w[i] = digit;
        uint64_t tau = teichmuller(p, l, digit);
        t = (t + mod - tau % mod) % mod;
        if (t % p != 0) throw std::logic_error("witt_zmod_iso_inv: digit removal failed");
        t /= p;
        mod /= p;  // remaining digits live mod p^{l-1-i}
    }
    return w;
}

}  // namespace ffm
