#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ffm {

using Int128 = __int128;

std::string int128_to_string(Int128 v);
/// Throws if v does not fit in int64 (serialization guard).
int64_t int128_to_int64(Int128 v);

/// Shared tables for Z[zeta] with zeta a primitive p^L-th root of unity:
/// power-basis reduction rows and the conjugation permutation. Instances are
/// interned per (p, L); scalars hold shared ownership.
class CycloField {
  public:
    static std::shared_ptr<const CycloField> get(uint32_t p, uint32_t L);

    uint32_t p() const { return p_; }
    uint32_t L() const { return L_; }
    uint64_t order() const { return pL_; }        // p^L
    uint32_t phi() const { return phi_; }         // (p-1) p^{L-1}, basis size
    /// Reduction of zeta^t (0 <= t < p^L) into the power basis 1..zeta^{phi-1}.
    const std::vector<std::pair<uint32_t, int>>& reduce_row(uint64_t t) const {
        return rows_[static_cast<size_t>(t)];
    }

  private:
    CycloField(uint32_t p, uint32_t L);
    uint32_t p_, L_, phi_;
    uint64_t pL_;
    std::vector<std::vector<std::pair<uint32_t, int>>> rows_;
};

/// Element of Z[zeta_{p^L}] in the power basis, exact integer coefficients.
/// Coefficients use 128-bit integers; desk-scale family sums and tensor
/// products stay far below the 2^127 ceiling.
class CycloScalar {
  public:
    CycloScalar() = default;
    explicit CycloScalar(std::shared_ptr<const CycloField> fld)
        : F_(std::move(fld)), a_(F_->phi(), 0) {}

    static CycloScalar from_int(std::shared_ptr<const CycloField> fld, Int128 v);
    static CycloScalar zeta_power(std::shared_ptr<const CycloField> fld, uint64_t expo);

    const std::shared_ptr<const CycloField>& field() const { return F_; }
    const std::vector<Int128>& coeffs() const { return a_; }
    bool is_zero() const;
    /// The rational integer this equals, if it lies in Z.
    std::optional<Int128> as_integer() const;

    CycloScalar& operator+=(const CycloScalar& o);
    CycloScalar& operator-=(const CycloScalar& o);
    friend CycloScalar operator+(CycloScalar a, const CycloScalar& b) { return a += b; }
    friend CycloScalar operator-(CycloScalar a, const CycloScalar& b) { return a -= b; }
    friend CycloScalar operator*(const CycloScalar& a, const CycloScalar& b);
    CycloScalar operator-() const;
    CycloScalar& scale(Int128 k);
    bool operator==(const CycloScalar& o) const;

    /// Complex conjugate: zeta -> zeta^{-1}.
    CycloScalar conj() const;
    /// a * conj(a) when it is a rational integer; nullopt otherwise
    /// (it always is for these abelian fields; the check guards table bugs).
    std::optional<Int128> norm_check() const;
    /// Exact division of every coefficient, or nullopt if any remainder.
    std::optional<CycloScalar> divide_exact(Int128 d) const;

    std::complex<double> embed() const;
    /// Add zeta^expo (expo taken mod p^L) scaled by w.
    void add_root(uint64_t expo, Int128 w = 1);

  private:
    std::shared_ptr<const CycloField> F_;
    std::vector<Int128> a_;
};

/// CycloScalar times q^{half/2} with q = p and the square root kept symbolic.
/// Addition demands matching parity of `half` (integer-power rescaling is done
/// internally); mismatched parity with both sides nonzero throws, because the
/// exact engine never expands sqrt(q) numerically.
class HalfPowerScalar {
  public:
    HalfPowerScalar() = default;
    HalfPowerScalar(CycloScalar v, int64_t half) : v_(std::move(v)), half_(half) {}

    static HalfPowerScalar zero(std::shared_ptr<const CycloField> fld) {
        return HalfPowerScalar(CycloScalar(std::move(fld)), 0);
    }
    static HalfPowerScalar from_int(std::shared_ptr<const CycloField> fld, Int128 n,
                                    int64_t half = 0) {
        return HalfPowerScalar(CycloScalar::from_int(std::move(fld), n), half);
    }

    const CycloScalar& value() const { return v_; }
    int64_t half_exponent() const { return half_; }
    bool is_zero() const { return v_.is_zero(); }

    HalfPowerScalar operator*(const HalfPowerScalar& o) const {
        return HalfPowerScalar(v_ * o.v_, half_ + o.half_);
    }
    HalfPowerScalar operator-() const { return HalfPowerScalar(-v_, half_); }
    HalfPowerScalar conj() const { return HalfPowerScalar(v_.conj(), half_); }
    HalfPowerScalar scaled(Int128 k) const {
        HalfPowerScalar r = *this;
        r.v_.scale(k);
        return r;
    }
    HalfPowerScalar pow(uint32_t e) const;

    HalfPowerScalar operator+(const HalfPowerScalar& o) const;
    HalfPowerScalar operator-(const HalfPowerScalar& o) const { return *this + (-o); }
    bool operator==(const HalfPowerScalar& o) const;

    std::complex<double> embed() const;

  private:
    CycloScalar v_;
    int64_t half_ = 0;
};

}  // namespace ffm
