#include "ffm/cyclo.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace ffm {

std::string int128_to_string(Int128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    // Peel digits from the absolute value; negate digit-wise to dodge
    // overflow at INT128_MIN.
    std::string s;
    Int128 w = v;
    while (w != 0) {
        int d = static_cast<int>(w % 10);
        if (d < 0) d = -d;
        s.push_back(static_cast<char>('0' + d));
        w /= 10;
    }
    if (neg) s.push_back('-');
    return std::string(s.rbegin(), s.rend());
}

int64_t int128_to_int64(Int128 v) {
    if (v > Int128(INT64_MAX) || v < Int128(INT64_MIN))
        throw std::overflow_error("integer too large for 64-bit serialization: " +
                                  int128_to_string(v));
    return static_cast<int64_t>(v);
}

CycloField::CycloField(uint32_t p, uint32_t L) : p_(p), L_(L) {
    if (p < 2 || L < 1) throw std::invalid_argument("cyclotomic order needs p >= 2, L >= 1");
    pL_ = 1;
    for (uint32_t i = 0; i < L; ++i) pL_ *= p;
    uint64_t pLm1 = pL_ / p;
    phi_ = static_cast<uint32_t>((p - 1) * pLm1);
    rows_.resize(pL_);
    for (uint64_t t = 0; t < pL_; ++t) {
        if (t < phi_) {
            rows_[t] = {{static_cast<uint32_t>(t), 1}};
        } else {
            // zeta^{(p-1)p^{L-1}} = -(1 + zeta^{p^{L-1}} + ... + zeta^{(p-2)p^{L-1}})
            uint64_t b = t - phi_;
            for (uint32_t j = 0; j + 1 < p; ++j)
                rows_[t].push_back({static_cast<uint32_t>(j * pLm1 + b), -1});
        }
    }
}

std::shared_ptr<const CycloField> CycloField::get(uint32_t p, uint32_t L) {
    static std::mutex mtx;
    static std::map<std::pair<uint32_t, uint32_t>, std::shared_ptr<const CycloField>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto& slot = cache[{p, L}];
    if (!slot) slot = std::shared_ptr<const CycloField>(new CycloField(p, L));
    return slot;
}

CycloScalar CycloScalar::from_int(std::shared_ptr<const CycloField> fld, Int128 v) {
    CycloScalar r(std::move(fld));
    r.a_[0] = v;
    return r;
}

CycloScalar CycloScalar::zeta_power(std::shared_ptr<const CycloField> fld, uint64_t expo) {
    CycloScalar r(std::move(fld));
    r.add_root(expo);
    return r;
}

void CycloScalar::add_root(uint64_t expo, Int128 w) {
    for (auto [idx, sgn] : F_->reduce_row(expo % F_->order())) a_[idx] += sgn * w;
}

bool CycloScalar::is_zero() const {
    for (Int128 c : a_)
        if (c != 0) return false;
    return true;
}

std::optional<Int128> CycloScalar::as_integer() const {
    for (size_t i = 1; i < a_.size(); ++i)
        if (a_[i] != 0) return std::nullopt;
    return a_[0];
}

static void check_same_field(const CycloScalar& a, const CycloScalar& b) {
    if (a.field().get() != b.field().get())
        throw std::logic_error("cyclotomic scalars from different fields");
}

CycloScalar& CycloScalar::operator+=(const CycloScalar& o) {
    check_same_field(*this, o);
    for (size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
}

CycloScalar& CycloScalar::operator-=(const CycloScalar& o) {
    check_same_field(*this, o);
    for (size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
}

CycloScalar operator*(const CycloScalar& a, const CycloScalar& b) {
    check_same_field(a, b);
    const auto& F = a.field();
    uint64_t n = F->order();
    uint32_t phi = F->phi();
    std::vector<Int128> tmp(n, 0);
    for (uint32_t i = 0; i < phi; ++i) {
        if (a.coeffs()[i] == 0) continue;
        for (uint32_t j = 0; j < phi; ++j) {
            if (b.coeffs()[j] == 0) continue;
            uint64_t e = i + j;
            if (e >= n) e -= n;
            tmp[e] += a.coeffs()[i] * b.coeffs()[j];
        }
    }
    CycloScalar r(F);
    for (uint64_t t = 0; t < n; ++t) {
        if (tmp[t] == 0) continue;
        for (auto [idx, sgn] : F->reduce_row(t)) r.a_[idx] += sgn * tmp[t];
    }
    return r;
}

CycloScalar CycloScalar::operator-() const {
    CycloScalar r = *this;
    for (auto& c : r.a_) c = -c;
    return r;
}

CycloScalar& CycloScalar::scale(Int128 k) {
    for (auto& c : a_) c *= k;
    return *this;
}

bool CycloScalar::operator==(const CycloScalar& o) const {
    check_same_field(*this, o);
    return a_ == o.a_;
}

CycloScalar CycloScalar::conj() const {
    CycloScalar r(F_);
    uint64_t n = F_->order();
    for (uint32_t i = 0; i < F_->phi(); ++i) {
        if (a_[i] == 0) continue;
        r.add_root(i == 0 ? 0 : n - i, a_[i]);
    }
    return r;
}

std::optional<Int128> CycloScalar::norm_check() const {
    return (*this * conj()).as_integer();
}

std::optional<CycloScalar> CycloScalar::divide_exact(Int128 d) const {
    if (d == 0) throw std::invalid_argument("division by zero");
    CycloScalar r(F_);
    for (size_t i = 0; i < a_.size(); ++i) {
        if (a_[i] % d != 0) return std::nullopt;
        r.a_[i] = a_[i] / d;
    }
    return r;
}

std::complex<double> CycloScalar::embed() const {
    const double tau = 8.0 * std::atan(1.0);
    std::complex<double> z = 0;
    for (uint32_t i = 0; i < F_->phi(); ++i) {
        if (a_[i] == 0) continue;
        double c = static_cast<double>(a_[i]);
        z += c * std::polar(1.0, tau * static_cast<double>(i) /
                                     static_cast<double>(F_->order()));
    }
    return z;
}

HalfPowerScalar HalfPowerScalar::pow(uint32_t e) const {
    HalfPowerScalar acc = from_int(v_.field(), 1);
    HalfPowerScalar base = *this;
    while (e > 0) {
        if (e & 1u) acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc;
}

HalfPowerScalar HalfPowerScalar::operator+(const HalfPowerScalar& o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    if (((half_ - o.half_) & 1) != 0)
        throw std::domain_error("half-power parity mismatch in exact addition");
    // Rescale the larger exponent down to the smaller: c q^{h/2} =
    // (c q^{(h-hmin)/2}) q^{hmin/2} with an integer power of q.
    int64_t hmin = std::min(half_, o.half_);
    Int128 q = v_.field()->p();
    auto lift = [&](const HalfPowerScalar& s) {
        CycloScalar c = s.v_;
        for (int64_t k = 0; k < (s.half_ - hmin) / 2; ++k) c.scale(q);
        return c;
    };
    return HalfPowerScalar(lift(*this) + lift(o), hmin);
}

bool HalfPowerScalar::operator==(const HalfPowerScalar& o) const {
    return (*this - o).is_zero();
}

std::complex<double> HalfPowerScalar::embed() const {
    return v_.embed() *
           std::pow(static_cast<double>(v_.field()->p()), static_cast<double>(half_) / 2.0);
}

}  // namespace ffm
