#pragma once

#include <cstdint>
#include <vector>

#include "ffm/artin_hasse.hpp"
#include "ffm/fields.hpp"
#include "ffm/truncated_unit.hpp"
#include "ffm/witt.hpp"

namespace ffm {

/// Shared data for evaluating the even characters of (F_p[x]/x^{n+1})^* at a
/// fixed (p, n): the Witt block layout and the additive-character choice.
///
/// Character values are exponents of the fixed primitive root zeta_{p^L},
/// L = witt_length(p, 1, n). The block at m contributes through the embedding
/// Z/p^{l(m,n)} -> Z/p^L, t -> t * p^{L - l(m,n)}. psi_tag is an exponent
/// multiplier prime to p (tag 1 is the reference choice; any other tag
/// reparameterizes the same character family).
class CharacterContext {
  public:
    CharacterContext(uint32_t p, uint32_t n, uint32_t psi_tag = 1);

    const PrimeField& field() const { return F_; }
    uint32_t p() const { return F_.p(); }
    uint32_t n() const { return n_; }
    uint32_t L() const { return L_; }
    uint64_t zeta_modulus() const { return pL_; }  // p^L
    uint32_t psi_tag() const { return psi_tag_; }
    const std::vector<WittBlock>& blocks() const { return blocks_; }

    /// Per-block Witt values iso(a_m, a_{pm}, ...) of a one-unit's
    /// Artin-Hasse coordinates. Computing this once per unit lets a family
    /// build pair one unit against many characters cheaply.
    std::vector<uint64_t> unit_profile(const TruncatedUnit& u) const;

  private:
    PrimeField F_;
    uint32_t n_, L_, psi_tag_;
    uint64_t pL_;
    std::vector<WittBlock> blocks_;
};

/// A point b in F_p^n labeling one even character.
///
/// Block m pairs through the Witt value of the tuple read from the top index
/// down: X_m = iso(b_{m p^{l-1}}, ..., b_{pm}, b_m). With this orientation
/// the character is primitive exactly when b_n != 0, for every n (including
/// p | n, where the top index of the block at the prime-to-p part of n is n
/// itself); the b_n law is still cross-checked against the direct test.
struct CharacterPoint {
    std::vector<uint32_t> b;       // b[j-1] = b_j
    std::vector<uint64_t> pairing;  // X_m per context block

    CharacterPoint() = default;
    CharacterPoint(const CharacterContext& ctx, std::vector<uint32_t> b_coords);

    uint32_t b_top() const { return b.empty() ? 0 : b.back(); }
};

/// chi_b(u) as an exponent in Z/p^L.
uint64_t character_eval(const CharacterContext& ctx, const CharacterPoint& pt,
                        const TruncatedUnit& u);
/// Same, with the unit's Witt profile precomputed.
uint64_t character_eval_profile(const CharacterContext& ctx, const CharacterPoint& pt,
                                const std::vector<uint64_t>& profile);

/// chi_b(f) for monic f: the character of the reversal x^{deg f} f(1/x).
uint64_t chi_on_monic(const CharacterContext& ctx, const CharacterPoint& pt, const FpPoly& f);

/// Primitivity: the character moves some 1 + a x^n. Computed directly and
/// compared with the b_n != 0 criterion; a mismatch means the coordinate
/// conventions are inconsistent and throws rather than returning.
bool is_primitive(const CharacterContext& ctx, const CharacterPoint& pt);

/// The point whose character is the product chi_b * chi_b2 (per-block Witt
/// addition transported through the pairing orientation).
CharacterPoint character_compose(const CharacterContext& ctx, const CharacterPoint& a,
                                 const CharacterPoint& b);

}  // namespace ffm
