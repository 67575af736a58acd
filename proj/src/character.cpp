#include "ffm/character.hpp"

#include <stdexcept>
#include <string>

namespace ffm {

CharacterContext::CharacterContext(uint32_t p, uint32_t n, uint32_t psi_tag)
    : F_(p), n_(n), psi_tag_(psi_tag) {
    if (n < 2) throw std::invalid_argument("CharacterContext: n must be at least 2");
    if (psi_tag == 0 || psi_tag % p == 0)
        throw std::invalid_argument("CharacterContext: psi_tag must be prime to p");
    L_ = witt_length(p, 1, n);
    pL_ = pow_u64(p, L_);
    blocks_ = witt_blocks(p, n);
    // block lengths partition {1..n}
    uint64_t total = 0;
    for (const auto& b : blocks_) total += b.length;
    if (total != n) throw std::logic_error("CharacterContext: block lengths do not partition 1..n");
}

std::vector<uint64_t> CharacterContext::unit_profile(const TruncatedUnit& u) const {
    if (u.n != n_) throw std::invalid_argument("unit_profile: truncation order mismatch");
    std::vector<uint32_t> a = ah_decompose(F_, u);
    std::vector<uint64_t> profile(blocks_.size());
    std::vector<uint32_t> tuple;
    for (size_t bi = 0; bi < blocks_.size(); ++bi) {
        const WittBlock& blk = blocks_[bi];
        tuple.clear();
        for (uint32_t idx : blk.indices) tuple.push_back(a[idx - 1]);
        profile[bi] = witt_zmod_iso(F_.p(), blk.length, tuple);
    }
    return profile;
}

CharacterPoint::CharacterPoint(const CharacterContext& ctx, std::vector<uint32_t> b_coords)
    : b(std::move(b_coords)) {
    if (b.size() != ctx.n()) throw std::invalid_argument("CharacterPoint: need n coordinates");
    for (uint32_t v : b)
        if (v >= ctx.p()) throw std::invalid_argument("CharacterPoint: coordinate out of range");
    pairing.resize(ctx.blocks().size());
    std::vector<uint32_t> tuple;
    for (size_t bi = 0; bi < ctx.blocks().size(); ++bi) {
        const WittBlock& blk = ctx.blocks()[bi];
        tuple.clear();
        for (size_t i = blk.indices.size(); i-- > 0;) tuple.push_back(b[blk.indices[i] - 1]);
        pairing[bi] = witt_zmod_iso(ctx.p(), blk.length, tuple);
    }
}

uint64_t character_eval_profile(const CharacterContext& ctx, const CharacterPoint& pt,
                                const std::vector<uint64_t>& profile) {
    const auto& blocks = ctx.blocks();
    uint64_t pL = ctx.zeta_modulus();
    uint64_t expo = 0;
    for (size_t bi = 0; bi < blocks.size(); ++bi) {
        uint64_t t = profile[bi] * pt.pairing[bi] % blocks[bi].modulus;
        expo = (expo + t * (pL / blocks[bi].modulus)) % pL;
    }
    return expo * ctx.psi_tag() % pL;
}

uint64_t character_eval(const CharacterContext& ctx, const CharacterPoint& pt,
                        const TruncatedUnit& u) {
    return character_eval_profile(ctx, pt, ctx.unit_profile(u));
}

uint64_t chi_on_monic(const CharacterContext& ctx, const CharacterPoint& pt, const FpPoly& f) {
    return character_eval(ctx, pt, reverse_unit(ctx.field(), f, ctx.n()));
}

bool is_primitive(const CharacterContext& ctx, const CharacterPoint& pt) {
    bool direct = false;
    for (uint32_t a = 1; a < ctx.p() && !direct; ++a) {
        TruncatedUnit u = TruncatedUnit::one(ctx.n());
        u.c[ctx.n() - 1] = a;
        direct = character_eval(ctx, pt, u) != 0;
    }
    bool top = pt.b_top() != 0;
    if (direct != top) {
        std::string bs;
        for (uint32_t v : pt.b) bs += std::to_string(v) + ",";
        throw std::logic_error("is_primitive: b_n criterion disagrees with direct test at b=(" + bs +
                               ") -- coordinate convention broken");
    }
    return direct;
}

CharacterPoint character_compose(const CharacterContext& ctx, const CharacterPoint& a,
                                 const CharacterPoint& b) {
    std::vector<uint32_t> coords(ctx.n(), 0);
    for (size_t bi = 0; bi < ctx.blocks().size(); ++bi) {
        const WittBlock& blk = ctx.blocks()[bi];
        uint64_t sum = (a.pairing[bi] + b.pairing[bi]) % blk.modulus;
        std::vector<uint32_t> digits = witt_zmod_iso_inv(ctx.p(), blk.length, sum);
        // digits are in pairing orientation: digit i belongs to index m p^{l-1-i}
        for (size_t i = 0; i < digits.size(); ++i)
            coords[blk.indices[blk.indices.size() - 1 - i] - 1] = digits[i];
    }
    return CharacterPoint(ctx, std::move(coords));
}

}  // namespace ffm
