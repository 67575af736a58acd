#include "ffm/tensor.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace ffm {

void LaurentTensor::add(const Key& d, const HalfPowerScalar& v) {
    if (d.size() != arity_) throw std::invalid_argument("tensor key arity mismatch");
    if (v.is_zero()) return;
    auto it = m_.find(d);
    if (it == m_.end()) {
        m_.emplace(d, v);
        return;
    }
    it->second = it->second + v;
    if (it->second.is_zero()) m_.erase(it);
}

HalfPowerScalar LaurentTensor::at(const Key& d) const {
    auto it = m_.find(d);
    if (it != m_.end()) return it->second;
    return HalfPowerScalar::zero(F_);
}

bool LaurentTensor::operator==(const LaurentTensor& o) const {
    if (arity_ != o.arity_) return false;
    // Keys may differ in half-exponent bookkeeping only through values, and
    // zero entries are never stored, so keys must match exactly.
    if (m_.size() != o.m_.size()) return false;
    auto it = m_.begin(), jt = o.m_.begin();
    for (; it != m_.end(); ++it, ++jt) {
        if (it->first != jt->first) return false;
        if (!(it->second == jt->second)) return false;
    }
    return true;
}

int permutation_sign(const std::vector<uint32_t>& perm) {
    int inv = 0;
    for (size_t i = 0; i < perm.size(); ++i)
        for (size_t j = i + 1; j < perm.size(); ++j)
            if (perm[i] > perm[j]) ++inv;
    return (inv % 2 == 0) ? 1 : -1;
}

LaurentTensor vandermonde_multiply(const LaurentTensor& t) {
    uint32_t k = t.arity();
    LaurentTensor out(t.field(), k);
    std::vector<uint32_t> perm(k);
    std::iota(perm.begin(), perm.end(), 0u);
    int global = ((uint64_t(k) * (k - 1) / 2) % 2 == 0) ? 1 : -1;
    do {
        int s = global * permutation_sign(perm);
        for (const auto& [d, v] : t.entries()) {
            LaurentTensor::Key e(k);
            for (uint32_t i = 0; i < k; ++i) e[i] = d[i] + static_cast<int>(perm[i]);
            out.add(e, s > 0 ? v : -v);
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

}  // namespace ffm
