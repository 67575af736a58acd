#include "ffm/truncated_unit.hpp"

#include <stdexcept>

namespace ffm {

uint64_t TruncatedUnit::dense_index(uint32_t p) const {
    uint64_t idx = 0;
    for (uint32_t j = n; j >= 1; --j) idx = idx * p + c[j - 1];
    return idx;
}

TruncatedUnit TruncatedUnit::from_dense_index(uint32_t p, uint32_t order, uint64_t idx) {
    TruncatedUnit u(order);
    for (uint32_t j = 1; j <= order; ++j) {
        u.c[j - 1] = static_cast<uint32_t>(idx % p);
        idx /= p;
    }
    return u;
}

TruncatedUnit unit_mul(const PrimeField& F, const TruncatedUnit& a, const TruncatedUnit& b) {
    if (a.n != b.n) throw std::invalid_argument("unit_mul: mismatched truncation orders");
    TruncatedUnit r(a.n);
    for (uint32_t j = 1; j <= a.n; ++j) {
        uint64_t acc = a.c[j - 1] + b.c[j - 1];  // cross terms with the leading 1s
        for (uint32_t i = 1; i < j; ++i) acc += static_cast<uint64_t>(a.c[i - 1]) * b.c[j - i - 1];
        r.c[j - 1] = static_cast<uint32_t>(acc % F.p());
    }
    return r;
}

TruncatedUnit unit_inverse(const PrimeField& F, const TruncatedUnit& a) {
    // coefficient-by-coefficient solve of a * r = 1
    TruncatedUnit r(a.n);
    for (uint32_t j = 1; j <= a.n; ++j) {
        uint64_t acc = a.c[j - 1];  // a_j * r_0
        for (uint32_t i = 1; i < j; ++i) acc += static_cast<uint64_t>(a.c[i - 1]) * r.c[j - i - 1];
        r.c[j - 1] = F.neg(static_cast<uint32_t>(acc % F.p()));
    }
    return r;
}

TruncatedUnit reverse_unit(const PrimeField& F, const FpPoly& f, uint32_t n) {
    (void)F;
    if (!f.is_monic()) throw std::invalid_argument("reverse_unit: polynomial must be monic");
    TruncatedUnit u(n);
    int d = f.degree();
    for (uint32_t j = 1; j <= n; ++j) u.c[j - 1] = f.coeff(d - static_cast<int>(j));
    return u;
}

}  // namespace ffm
