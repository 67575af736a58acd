#include "ffm/schur.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ffm {

HighestWeight::HighestWeight(std::vector<int> degrees, uint32_t r_, uint32_t rt_, uint32_t n_)
    : d(std::move(degrees)), r(r_), rt(rt_), n(n_) {
    if (d.size() != r + rt || d.empty()) throw std::invalid_argument("weight arity mismatch");
    for (size_t i = 0; i < d.size(); ++i) {
        if (d[i] < 0 || d[i] > int(n) - 1) throw std::invalid_argument("weight entry out of range");
        if (i > 0 && d[i] < d[i - 1]) throw std::invalid_argument("weight not sorted");
    }
}

int64_t HighestWeight::degree_sum() const {
    return std::accumulate(d.begin(), d.end(), int64_t{0});
}

std::vector<int> HighestWeight::shifted() const {
    std::vector<int> e(d.size());
    for (size_t i = 0; i < d.size(); ++i) e[i] = d[i] + int(i);
    return e;
}

std::vector<HighestWeight> enumerate_sorted_weights(uint32_t n, uint32_t r, uint32_t rt) {
    uint32_t k = r + rt;
    std::vector<HighestWeight> out;
    std::vector<int> d(k, 0);
    for (;;) {
        out.emplace_back(d, r, rt, n);
        // next sorted tuple: increment the last slot that can grow, then
        // level everything after it
        size_t i = k;
        while (i > 0 && d[i - 1] == int(n) - 1) --i;
        if (i == 0) break;
        ++d[i - 1];
        for (size_t j = i; j < k; ++j) d[j] = d[i - 1];
    }
    return out;
}

std::vector<std::pair<int, std::vector<int>>> jacobi_trudi_terms(const HighestWeight& w) {
    uint32_t k = w.arity();
    std::vector<uint32_t> perm(k);
    std::iota(perm.begin(), perm.end(), 0u);
    std::vector<std::pair<int, std::vector<int>>> terms;
    do {
        std::vector<int> t(k);
        bool ok = true;
        for (uint32_t i = 0; i < k && ok; ++i) {
            t[i] = w.d[i] + int(i) - int(perm[i]);
            if (t[i] < 0 || t[i] > int(w.n) - 1) ok = false;
        }
        if (ok) terms.emplace_back(permutation_sign(perm), std::move(t));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return terms;
}

HalfPowerScalar F_of_irreducible(const LaurentTensor& M, const HighestWeight& w) {
    if (M.arity() != w.arity()) throw std::invalid_argument("tensor/weight arity mismatch");
    HalfPowerScalar acc = HalfPowerScalar::zero(M.field());
    for (const auto& [sgn, t] : jacobi_trudi_terms(w)) {
        HalfPowerScalar v = M.at(t);
        acc = acc + (sgn > 0 ? v : -v);
    }
    return (w.degree_sum() % 2 != 0) ? -acc : acc;
}

std::complex<double> schur_at_zeros(const LFunctionRecord& rec, const HighestWeight& w,
                                    uint32_t p) {
    uint32_t n = w.n, k = w.arity();
    // e_a = (-1)^a lambda_a for 0 <= a <= n-1, zero outside.
    std::vector<std::complex<double>> e(n);
    for (uint32_t a = 0; a < n; ++a) {
        double scale = std::pow(double(p), -double(a) / 2.0);
        e[a] = rec.c[a].embed() * scale * ((a % 2 == 1) ? -1.0 : 1.0);
    }
    auto e_at = [&](int a) -> std::complex<double> {
        if (a < 0 || a >= int(n)) return 0.0;
        return e[size_t(a)];
    };
    std::vector<uint32_t> perm(k);
    std::iota(perm.begin(), perm.end(), 0u);
    std::complex<double> det = 0.0;
    do {
        std::complex<double> prod = double(permutation_sign(perm));
        for (uint32_t i = 0; i < k; ++i) prod *= e_at(w.d[i] + int(i) - int(perm[i]));
        det += prod;
    } while (std::next_permutation(perm.begin(), perm.end()));

    std::complex<double> eps = rec.c[n - 1].embed() * std::pow(double(p), -double(n - 1) / 2.0);
    std::complex<double> twist = 1.0;
    for (uint32_t j = 0; j < w.rt; ++j) twist *= std::conj(eps);
    return det * twist;
}

bool is_major_arc(const HighestWeight& w, uint32_t m) {
    if (m == 0) throw std::invalid_argument("monodromy order must be positive");
    uint32_t kk = w.arity();
    int64_t nm1 = int64_t(w.n) - 1;
    for (uint32_t k = 0; k <= kk; ++k) {
        if ((int64_t(k) - int64_t(w.r)) % int64_t(m) != 0) continue;
        int64_t head = 0, tail = 0;
        for (uint32_t i = 0; i < k; ++i) head += w.d[i];
        for (uint32_t i = k; i < kk; ++i) tail += nm1 - w.d[i];
        if (head <= nm1 && tail <= nm1) return true;
    }
    return false;
}

BigInt multiplicity(const HighestWeight& w) {
    std::vector<int> e = w.shifted();
    BigInt num = 1, den = 1;
    for (size_t i = 0; i < e.size(); ++i)
        for (size_t j = i + 1; j < e.size(); ++j) num *= e[j] - e[i];
    for (size_t i = 1; i < e.size(); ++i)
        for (size_t f = 2; f <= i; ++f) den *= BigInt(f);
    if (num % den != 0) throw std::logic_error("Weyl dimension division not exact");
    return num / den;
}

BigInt BettiBudget::C() const {
    uint32_t mx = std::max(r, rt);
    BigInt c = 1;
    for (uint32_t i = 0; i <= mx; ++i) c *= mx + 2;
    return c;
}

BigInt BettiBudget::bound(const std::vector<int>& d) const {
    int64_t s = std::accumulate(d.begin(), d.end(), int64_t{0});
    uint32_t mx = std::max(r, rt);
    BigInt b = 4;
    for (int64_t i = 0; i < int64_t(n) + s; ++i) b *= mx + 2;
    return b;
}

double BettiBudget::error_reference(double q, double w) const {
    double c = std::pow(2.0 + std::max(r, rt), double(std::max(r, rt)) + 1.0);
    return std::pow(q, (w - double(n)) / 2.0) * std::pow(c, double(n)) *
           std::pow(double(n), double(r + rt));
}

}  // namespace ffm
