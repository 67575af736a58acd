#include "ffm/poly.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace ffm {

bool FpPoly::operator<(const FpPoly& o) const {
    if (c.size() != o.c.size()) return c.size() < o.c.size();
    for (size_t i = c.size(); i-- > 0;)
        if (c[i] != o.c[i]) return c[i] < o.c[i];
    return false;
}

FpPoly FpPoly::x_power(int d, uint32_t lead) {
    if (d < 0) throw std::invalid_argument("x_power: negative degree");
    std::vector<uint32_t> v(static_cast<size_t>(d) + 1, 0);
    v.back() = lead;
    return FpPoly(std::move(v));
}

FpPoly poly_add(const PrimeField& F, const FpPoly& a, const FpPoly& b) {
    std::vector<uint32_t> r(std::max(a.c.size(), b.c.size()), 0);
    for (size_t i = 0; i < r.size(); ++i) r[i] = F.add(a.coeff(static_cast<int>(i)), b.coeff(static_cast<int>(i)));
    return FpPoly(std::move(r));
}

FpPoly poly_sub(const PrimeField& F, const FpPoly& a, const FpPoly& b) {
    std::vector<uint32_t> r(std::max(a.c.size(), b.c.size()), 0);
    for (size_t i = 0; i < r.size(); ++i) r[i] = F.sub(a.coeff(static_cast<int>(i)), b.coeff(static_cast<int>(i)));
    return FpPoly(std::move(r));
}

FpPoly poly_mul(const PrimeField& F, const FpPoly& a, const FpPoly& b) {
    if (a.is_zero() || b.is_zero()) return FpPoly();
    std::vector<uint32_t> r(a.c.size() + b.c.size() - 1, 0);
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i] == 0) continue;
        for (size_t j = 0; j < b.c.size(); ++j)
            r[i + j] = F.add(r[i + j], F.mul(a.c[i], b.c[j]));
    }
    return FpPoly(std::move(r));
}

std::pair<FpPoly, FpPoly> poly_divmod(const PrimeField& F, const FpPoly& a, const FpPoly& b) {
    if (b.is_zero()) throw std::domain_error("poly_divmod: division by zero polynomial");
    FpPoly rem = a;
    if (a.degree() < b.degree()) return {FpPoly(), rem};
    std::vector<uint32_t> q(static_cast<size_t>(a.degree() - b.degree()) + 1, 0);
    uint32_t lead_inv = F.inv(b.c.back());
    while (!rem.is_zero() && rem.degree() >= b.degree()) {
        int shift = rem.degree() - b.degree();
        uint32_t factor = F.mul(rem.c.back(), lead_inv);
        q[static_cast<size_t>(shift)] = factor;
        for (int i = 0; i <= b.degree(); ++i) {
            size_t k = static_cast<size_t>(i + shift);
            rem.c[k] = F.sub(rem.c[k], F.mul(factor, b.c[static_cast<size_t>(i)]));
        }
        rem.trim();
    }
    return {FpPoly(std::move(q)), rem};
}

bool poly_divides(const PrimeField& F, const FpPoly& d, const FpPoly& a) {
    return poly_divmod(F, a, d).second.is_zero();
}

uint32_t poly_eval(const PrimeField& F, const FpPoly& a, uint32_t x) {
    uint32_t acc = 0;
    for (size_t i = a.c.size(); i-- > 0;) acc = F.add(F.mul(acc, x), a.c[i]);
    return acc;
}

std::string poly_to_string(const FpPoly& a) {
    if (a.is_zero()) return "0";
    std::string s;
    for (int i = a.degree(); i >= 0; --i) {
        uint32_t ci = a.coeff(i);
        if (ci == 0) continue;
        if (!s.empty()) s += " + ";
        if (i == 0 || ci != 1) s += std::to_string(ci);
        if (i > 0) {
            if (ci != 1) s += "*";
            s += "T";
            if (i > 1) s += "^" + std::to_string(i);
        }
    }
    return s;
}

MonicRange::MonicRange(const PrimeField& F, int d) : p_(F.p()), d_(d) {
    if (d < 0) throw std::invalid_argument("MonicRange: negative degree");
    size_ = 1;
    for (int i = 0; i < d; ++i) {
        if (size_ > UINT64_MAX / p_) throw std::overflow_error("MonicRange: p^d overflows");
        size_ *= p_;
    }
}

FpPoly MonicRange::at(uint64_t k) const {
    if (k >= size_) throw std::out_of_range("MonicRange: index past end");
    std::vector<uint32_t> v(static_cast<size_t>(d_) + 1, 0);
    for (int i = 0; i < d_; ++i) {
        v[static_cast<size_t>(i)] = static_cast<uint32_t>(k % p_);
        k /= p_;
    }
    v.back() = 1;
    return FpPoly(std::move(v));
}

std::vector<std::vector<FpPoly>> enumerate_irreducible(const PrimeField& F, int d_max) {
    std::vector<std::vector<FpPoly>> table(static_cast<size_t>(d_max) + 1);
    for (int d = 1; d <= d_max; ++d) {
        MonicRange range(F, d);
        for (uint64_t k = 0; k < range.size(); ++k) {
            FpPoly f = range.at(k);
            bool irred = true;
            for (int e = 1; irred && 2 * e <= d; ++e)
                for (const FpPoly& g : table[static_cast<size_t>(e)])
                    if (poly_divides(F, g, f)) {
                        irred = false;
                        break;
                    }
            if (irred) table[static_cast<size_t>(d)].push_back(std::move(f));
        }
    }
    return table;
}

uint64_t irreducible_count(uint32_t p, int d) {
    if (d < 1) throw std::invalid_argument("irreducible_count: degree must be positive");
    // (1/d) sum_{e | d} mu(e) p^{d/e}
    auto mobius = [](uint32_t m) -> int {
        int mu = 1;
        for (uint32_t q = 2; q * q <= m; ++q) {
            if (m % q == 0) {
                m /= q;
                if (m % q == 0) return 0;
                mu = -mu;
            }
        }
        if (m > 1) mu = -mu;
        return mu;
    };
    int64_t total = 0;
    for (uint32_t e = 1; e <= static_cast<uint32_t>(d); ++e) {
        if (static_cast<uint32_t>(d) % e != 0) continue;
        int mu = mobius(e);
        if (mu == 0) continue;
        uint64_t pw = 1;
        for (uint32_t i = 0; i < static_cast<uint32_t>(d) / e; ++i) pw *= p;
        total += mu * static_cast<int64_t>(pw);
    }
    return static_cast<uint64_t>(total / d);
}

}  // namespace ffm
