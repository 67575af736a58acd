#include "ffm/artin_hasse.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace ffm {

namespace {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// exp of a rational power series F with F(0) = 0, up to degree N:
// G_0 = 1, i G_i = sum_{j=1..i} j F_j G_{i-j}.
std::vector<BigRat> series_exp(const std::vector<BigRat>& f, uint32_t N) {
    std::vector<BigRat> g(N + 1);
    g[0] = 1;
    for (uint32_t i = 1; i <= N; ++i) {
        BigRat s = 0;
        for (uint32_t j = 1; j <= i; ++j) {
            if (f[j] == 0) continue;
            s += BigRat(j) * f[j] * g[i - j];
        }
        g[i] = s / BigRat(i);
    }
    return g;
}

uint32_t reduce_rational_mod_p(const BigRat& r, uint32_t p) {
    BigInt num = boost::multiprecision::numerator(r);
    BigInt den = boost::multiprecision::denominator(r);
    if (den % p == 0) throw std::logic_error("artin_hasse: non-p-integral coefficient");
    auto mod_p = [&](BigInt v) -> uint32_t {
        BigInt m = v % p;
        if (m < 0) m += p;
        return static_cast<uint32_t>(m);
    };
    uint32_t n = mod_p(num), d = mod_p(den);
    // d^{-1} mod p by Fermat
    uint64_t inv = 1, base = d, e = p - 2;
    while (e) {
        if (e & 1) inv = inv * base % p;
        base = base * base % p;
        e >>= 1;
    }
    return static_cast<uint32_t>(static_cast<uint64_t>(n) * inv % p);
}

}  // namespace

std::vector<uint32_t> artin_hasse_series_mod_p(uint32_t p, uint32_t m, uint32_t N) {
    if (m == 0 || m % p == 0) throw std::invalid_argument("artin_hasse_series_mod_p: m must be prime to p");
    static std::map<std::tuple<uint32_t, uint32_t, uint32_t>, std::vector<uint32_t>> cache;
    static std::mutex cache_mutex;
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto it = cache.find({p, m, N});
        if (it != cache.end()) return it->second;
    }
    std::vector<BigRat> f(N + 1);
    uint64_t pk = 1;
    while (pk <= N) {
        f[static_cast<uint32_t>(pk)] -= BigRat(1) / (BigRat(m) * BigRat(pk));
        pk *= p;
    }
    std::vector<BigRat> g = series_exp(f, N);
    std::vector<uint32_t> out(N + 1);
    for (uint32_t i = 0; i <= N; ++i) out[i] = reduce_rational_mod_p(g[i], p);
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        cache[{p, m, N}] = out;
    }
    return out;
}

namespace {

uint32_t prime_to_p_part(uint32_t j, uint32_t p) {
    while (j % p == 0) j /= p;
    return j;
}

// AH(a x^j)^{1/m(j)} truncated mod x^{n+1}: substitute y = a x^j in the
// series for exp(-(1/m) sum y^{p^k}/p^k) reduced mod p.
TruncatedUnit block_factor(const PrimeField& F, uint32_t n, uint32_t j, uint32_t a) {
    uint32_t m = prime_to_p_part(j, F.p());
    std::vector<uint32_t> series = artin_hasse_series_mod_p(F.p(), m, n / j);
    TruncatedUnit u(n);
    uint32_t apow = 1;
    for (uint32_t e = 1; e * j <= n; ++e) {
        apow = F.mul(apow, a);
        u.c[e * j - 1] = F.mul(series[e], apow);
    }
    return u;
}

}  // namespace

std::vector<uint32_t> ah_decompose(const PrimeField& F, const TruncatedUnit& u) {
    uint32_t n = u.n;
    std::vector<uint32_t> a(n, 0);
    TruncatedUnit residual = u;  // u * (partial product)^{-1}
    for (uint32_t j = 1; j <= n; ++j) {
        uint32_t cj = residual.c[j - 1];
        if (cj == 0) continue;
        uint32_t m = prime_to_p_part(j, F.p());
        // factor opens as 1 - (a_j / m) x^j + higher order
        a[j - 1] = F.neg(F.mul(m % F.p(), cj));
        TruncatedUnit factor = block_factor(F, n, j, a[j - 1]);
        residual = unit_mul(F, residual, unit_inverse(F, factor));
        if (residual.c[j - 1] != 0) throw std::logic_error("ah_decompose: elimination failed");
    }
    if (!residual.is_one()) throw std::logic_error("ah_decompose: nonunit residual");
    return a;
}

TruncatedUnit ah_recompose(const PrimeField& F, uint32_t n, const std::vector<uint32_t>& a) {
    if (a.size() != n) throw std::invalid_argument("ah_recompose: coordinate count mismatch");
    TruncatedUnit u = TruncatedUnit::one(n);
    for (uint32_t j = 1; j <= n; ++j) {
        if (a[j - 1] == 0) continue;
        u = unit_mul(F, u, block_factor(F, n, j, a[j - 1]));
    }
    return u;
}

}  // namespace ffm
