#pragma once

#include <map>
#include <vector>

#include "ffm/cyclo.hpp"

namespace ffm {

/// Sparse tensor indexed by integer exponent tuples of fixed arity, with
/// exact half-power cyclotomic values. Entries with zero value are dropped.
class LaurentTensor {
  public:
    using Key = std::vector<int>;

    LaurentTensor(std::shared_ptr<const CycloField> fld, uint32_t arity)
        : F_(std::move(fld)), arity_(arity) {}

    uint32_t arity() const { return arity_; }
    const std::shared_ptr<const CycloField>& field() const { return F_; }
    const std::map<Key, HalfPowerScalar>& entries() const { return m_; }
    bool empty() const { return m_.empty(); }

    void add(const Key& d, const HalfPowerScalar& v);
    /// Value at d; exact zero if absent.
    HalfPowerScalar at(const Key& d) const;
    bool operator==(const LaurentTensor& o) const;

  private:
    std::shared_ptr<const CycloField> F_;
    uint32_t arity_;
    std::map<Key, HalfPowerScalar> m_;
};

/// Sign of a permutation given as 0-based images, by inversion count.
int permutation_sign(const std::vector<uint32_t>& perm);

/// Antisymmetrizing convolution: for input t of arity k,
///   out(e) = (-1)^{k(k-1)/2} * sum_{sigma} sgn(sigma) t(e - (sigma - 1))
/// where (sigma - 1)_i = sigma(i) - 1 over permutations of {1..k}. This is
/// multiplication by the Vandermonde determinant in the exponent variables:
/// prod_{i<j}(x_i - x_j) = (-1)^{k(k-1)/2} sum_sigma sgn(sigma) prod_i x_i^{sigma(i)-1}.
LaurentTensor vandermonde_multiply(const LaurentTensor& t);

}  // namespace ffm
