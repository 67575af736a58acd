#include "ffm/mainterm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "ffm/budget.hpp"
#include "ffm/poly.hpp"

namespace ffm {

SlotSubset::SlotSubset(uint32_t arity_, std::vector<uint32_t> members_)
    : arity(arity_), members(std::move(members_)) {
    if (arity == 0) throw std::invalid_argument("SlotSubset: arity must be positive");
    for (size_t i = 0; i < members.size(); ++i) {
        if (members[i] >= arity) throw std::invalid_argument("SlotSubset: slot out of range");
        if (i > 0 && members[i] <= members[i - 1])
            throw std::invalid_argument("SlotSubset: slots must be strictly increasing");
    }
}

bool SlotSubset::contains(uint32_t slot) const {
    return std::binary_search(members.begin(), members.end(), slot);
}

std::vector<uint32_t> SlotSubset::complement() const {
    std::vector<uint32_t> out;
    for (uint32_t i = 0; i < arity; ++i)
        if (!contains(i)) out.push_back(i);
    return out;
}

std::string SlotSubset::to_string() const {
    std::ostringstream os;
    os << '{';
    for (size_t i = 0; i < members.size(); ++i) os << (i ? "," : "") << members[i];
    os << '}';
    return os.str();
}

Int128 bigint_to_int128(const BigInt& v) {
    static const BigInt limit = BigInt(1) << 126;
    if (v >= limit || v <= -limit) throw std::overflow_error("bigint_to_int128: out of range");
    BigInt a = v < 0 ? BigInt(-v) : v;
    const auto lo = static_cast<uint64_t>(a & 0xFFFFFFFFFFFFFFFFull);
    const auto hi = static_cast<uint64_t>(a >> 64);
    Int128 r = (static_cast<Int128>(hi) << 64) + static_cast<Int128>(lo);
    return v < 0 ? -r : r;
}

namespace {

void check_degrees(const SlotSubset& S, const std::vector<int>& degrees, const char* who) {
    if (degrees.size() != S.arity)
        throw std::invalid_argument(std::string(who) + ": degree tuple arity mismatch");
    for (int d : degrees)
        if (d < 0) throw std::invalid_argument(std::string(who) + ": negative degree");
}

/// Number of monic degree-d polynomials over F_p with T-adic valuation
/// exactly v.
BigInt valuation_count(uint32_t p, int d, int v) {
    if (v < 0 || v > d) return 0;
    if (v == d) return 1;
    BigInt top = boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(d - v));
    return top - top / p;
}

Int128 family_size_128(uint32_t p, uint32_t n) {
    if (n == 0) throw std::invalid_argument("family_size: n must be positive");
    const Int128 cap = (static_cast<Int128>(1) << 120);
    Int128 pw = 1;
    for (uint32_t i = 0; i + 1 < n; ++i) {
        if (pw > cap / p) throw std::overflow_error("family_size: p^{n-1} out of range");
        pw *= p;
    }
    return pw * p - pw;
}

}  // namespace

BigInt count_ratio_tuples(uint32_t p, const SlotSubset& S, const std::vector<int>& degrees,
                          double budget, bool force) {
    check_degrees(S, degrees, "count_ratio_tuples");
    const uint32_t k = S.arity;

    // Solving for the largest-degree slot minimizes the enumeration cost.
    uint32_t det = 0;
    for (uint32_t i = 1; i < k; ++i)
        if (degrees[i] > degrees[det]) det = i;
    double cost = 1;
    for (uint32_t i = 0; i < k; ++i)
        if (i != det) cost *= std::pow(static_cast<double>(p), degrees[i]);
    if (cost > budget && !force) {
        std::ostringstream os;
        os << "count_ratio_tuples: enumeration cost " << cost << " above budget " << budget;
        throw BudgetError(os.str(), cost);
    }

    int64_t kappa = 0;
    for (uint32_t i = 0; i < k; ++i) kappa += S.contains(i) ? degrees[i] : -degrees[i];

    // The ratio condition as an equality of monic polynomials:
    //   prod_{i in S} f_i * T^{max(0,-kappa)} = prod_{j notin S} f_j * T^{max(0,kappa)}.
    // The determined slot's side is the divisor; the other side the dividend.
    const bool det_in_S = S.contains(det);
    const int t_den = static_cast<int>(det_in_S ? std::max<int64_t>(0, -kappa)
                                                : std::max<int64_t>(0, kappa));
    const int t_num = static_cast<int>(det_in_S ? std::max<int64_t>(0, kappa)
                                                : std::max<int64_t>(0, -kappa));

    const PrimeField F(p);
    std::vector<uint32_t> slots;
    std::vector<MonicRange> ranges;
    std::vector<uint64_t> idx;
    for (uint32_t i = 0; i < k; ++i) {
        if (i == det) continue;
        slots.push_back(i);
        ranges.emplace_back(F, degrees[i]);
        idx.push_back(0);
    }

    BigInt count = 0;
    while (true) {
        FpPoly num = FpPoly::x_power(t_num);
        FpPoly den = FpPoly::x_power(t_den);
        for (size_t s = 0; s < slots.size(); ++s) {
            const FpPoly f = ranges[s].at(idx[s]);
            if (S.contains(slots[s]) == det_in_S)
                den = poly_mul(F, den, f);
            else
                num = poly_mul(F, num, f);
        }
        auto [quot, rem] = poly_divmod(F, num, den);
        if (rem.is_zero() && quot.degree() == degrees[det] && quot.is_monic()) ++count;

        size_t s = 0;
        for (; s < idx.size(); ++s) {
            if (++idx[s] < ranges[s].size()) break;
            idx[s] = 0;
        }
        if (s == idx.size()) break;
    }
    return count;
}

BigInt count_ratio_tuples_closed(uint32_t p, const SlotSubset& S,
                                 const std::vector<int>& degrees) {
    check_degrees(S, degrees, "count_ratio_tuples_closed");
    const std::vector<uint32_t> inside = S.members;
    const std::vector<uint32_t> outside = S.complement();
    const std::vector<uint32_t>* many = nullptr;
    const std::vector<uint32_t>* single = nullptr;
    if (outside.size() <= 1) {
        many = &inside;
        single = &outside;
    } else if (inside.size() <= 1) {
        many = &outside;
        single = &inside;
    } else {
        throw std::invalid_argument(
            "count_ratio_tuples_closed: one side of the partition must have at most one slot");
    }

    // With no slot to absorb the ratio, the product itself must be a power of
    // T, which by unique factorization forces every factor to be one.
    if (single->empty()) return 1;

    const int e = degrees[single->front()];
    int64_t kappa = -static_cast<int64_t>(e);
    for (uint32_t i : *many) kappa += degrees[i];
    if (kappa <= 0) {
        // The determined polynomial T^{-kappa} * prod g_i is always monic of
        // the right degree; every tuple on the free side counts.
        BigInt total = 1;
        for (uint32_t i : *many)
            total *= boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(degrees[i]));
        return total;
    }

    // prod g_i / T^kappa is a polynomial iff the total T-valuation of the
    // free side reaches kappa; convolve per-slot valuation counts with the
    // running total capped at kappa.
    const auto cap = static_cast<size_t>(kappa);
    std::vector<BigInt> dp(cap + 1, 0);
    dp[0] = 1;
    for (uint32_t i : *many) {
        std::vector<BigInt> next(cap + 1, 0);
        for (size_t c = 0; c <= cap; ++c) {
            if (dp[c] == 0) continue;
            for (int v = 0; v <= degrees[i]; ++v)
                next[std::min(cap, c + static_cast<size_t>(v))] +=
                    dp[c] * valuation_count(p, degrees[i], v);
        }
        dp = std::move(next);
    }
    return dp[cap];
}

CountTable::CountTable(uint32_t p, SlotSubset S, Mode mode, double budget)
    : p_(p), S_(std::move(S)), mode_(mode), budget_(budget) {}

const BigInt& CountTable::count(const std::vector<int>& degrees) {
    check_degrees(S_, degrees, "CountTable");
    // The count depends only on the degree multiset on each side of the
    // partition; sorting within sides lets permuted lookups share one result.
    std::vector<int> key = degrees;
    auto sort_side = [&](const std::vector<uint32_t>& side) {
        std::vector<int> vals;
        vals.reserve(side.size());
        for (uint32_t i : side) vals.push_back(degrees[i]);
        std::sort(vals.begin(), vals.end());
        size_t t = 0;
        for (uint32_t i : side) key[i] = vals[t++];
    };
    sort_side(S_.members);
    sort_side(S_.complement());

    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    BigInt n = mode_ == Mode::brute ? count_ratio_tuples(p_, S_, key, budget_)
                                    : count_ratio_tuples_closed(p_, S_, key);
    return memo_.emplace(std::move(key), std::move(n)).first->second;
}

HalfPowerScalar ms_coefficient(const std::shared_ptr<const CycloField>& fld, CountTable& counts,
                               const std::vector<int>& dvec) {
    const SlotSubset& S = counts.subset();
    const uint32_t k = S.arity;
    if (dvec.size() != k) throw std::invalid_argument("ms_coefficient: arity mismatch");

    HalfPowerScalar acc = HalfPowerScalar::zero(fld);
    std::vector<uint32_t> perm(k);
    std::iota(perm.begin(), perm.end(), 0u);
    std::vector<int> deg(k);
    do {
        bool in_cone = true;
        int64_t sum_abs = 0;
        for (uint32_t i = 0; i < k; ++i) {
            const int u = dvec[i] - static_cast<int>(perm[i]);
            if (S.contains(i) ? u < 0 : u > 0) {
                in_cone = false;
                break;
            }
            deg[i] = std::abs(u);
            sum_abs += deg[i];
        }
        if (!in_cone) continue;
        Int128 c = bigint_to_int128(counts.count(deg));
        if (c == 0) continue;
        if (permutation_sign(perm) < 0) c = -c;
        acc = acc + HalfPowerScalar::from_int(fld, c, -sum_abs);
    } while (std::next_permutation(perm.begin(), perm.end()));

    return (k * (k - 1) / 2) % 2 != 0 ? -acc : acc;
}

bool matched_predicate(const std::vector<int>& d, const SlotSubset& S, uint32_t n) {
    if (d.size() != S.arity) throw std::invalid_argument("matched_predicate: arity mismatch");
    const int64_t k = S.arity;
    const int64_t s = S.size();
    int64_t A = -s * (s - 1) / 2;
    int64_t B = k * (k - 1) / 2 - s * (s - 1) / 2;
    for (uint32_t i = 0; i < S.arity; ++i) {
        if (S.contains(i))
            A += d[i];
        else
            B += static_cast<int64_t>(n) - 1 - d[i];
    }
    const auto top = static_cast<int64_t>(n) - 1;
    return 0 <= A && A <= top && 0 <= B && B <= top;
}

namespace {

/// Strictly increasing size-k subsets of {lo..hi}, lexicographic.
std::vector<std::vector<int>> combinations(int lo, int hi, uint32_t k) {
    std::vector<std::vector<int>> out;
    if (hi - lo + 1 < static_cast<int>(k)) return out;
    std::vector<int> cur(k);
    std::iota(cur.begin(), cur.end(), lo);
    if (k == 0) {
        out.push_back({});
        return out;
    }
    while (true) {
        out.push_back(cur);
        int i = static_cast<int>(k) - 1;
        while (i >= 0 && cur[i] == hi - (static_cast<int>(k) - 1 - i)) --i;
        if (i < 0) break;
        ++cur[i];
        for (int j = i + 1; j < static_cast<int>(k); ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

}  // namespace

std::vector<std::vector<int>> window_tuples(uint32_t n, uint32_t k) {
    return combinations(0, static_cast<int>(n) + static_cast<int>(k) - 2, k);
}

std::vector<SlotSubset> admissible_subsets(uint32_t r, uint32_t rt, uint32_t m) {
    if (m == 0) throw std::invalid_argument("admissible_subsets: m must be positive");
    const uint32_t k = r + rt;
    std::vector<SlotSubset> out;
    for (uint32_t size = 0; size <= k; ++size) {
        const int64_t t = static_cast<int64_t>(r) - size;
        if (((t % m) + m) % m != 0) continue;
        for (const auto& c : combinations(0, static_cast<int>(k) - 1, size))
            out.emplace_back(k, std::vector<uint32_t>(c.begin(), c.end()));
    }
    return out;
}

HalfPowerScalar r_s_coefficient(const std::shared_ptr<const CycloField>& fld, CountTable& counts,
                                uint32_t n, uint32_t r, uint32_t m, const HalfPowerScalar& mu,
                                const std::vector<int>& dvec) {
    const SlotSubset& S = counts.subset();
    if (m == 0) throw std::invalid_argument("r_s_coefficient: m must be positive");
    const int64_t diff = static_cast<int64_t>(r) - S.size();
    if (diff % static_cast<int64_t>(m) != 0)
        throw std::invalid_argument("r_s_coefficient: subset size not admissible");
    const int64_t t = diff / static_cast<int64_t>(m);

    std::vector<int> shifted = dvec;
    for (uint32_t j : S.complement()) shifted[j] -= static_cast<int>(n) - 1;

    HalfPowerScalar val = ms_coefficient(fld, counts, shifted);
    val = val.scaled(family_size_128(counts.p(), n));
    if (t > 0)
        val = val * mu.pow(static_cast<uint32_t>(t));
    else if (t < 0)
        val = val * mu.conj().pow(static_cast<uint32_t>(-t));
    return val;
}

LaurentTensor r_tensor(const std::shared_ptr<const CycloField>& fld, uint32_t p, uint32_t n,
                       uint32_t r, uint32_t rt, uint32_t m, const HalfPowerScalar& mu,
                       CountTable::Mode mode, double budget) {
    const uint32_t k = r + rt;
    LaurentTensor out(fld, k);
    for (const SlotSubset& S : admissible_subsets(r, rt, m)) {
        CountTable counts(p, S, mode, budget);
        for (const auto& d : window_tuples(n, k)) {
            HalfPowerScalar v = r_s_coefficient(fld, counts, n, r, m, mu, d);
            if (!v.is_zero()) out.add(d, v);
        }
    }
    return out;
}

QSqrt qs_add(const QSqrt& x, const QSqrt& y) { return {x.a + y.a, x.b + y.b}; }

QSqrt qs_mul(const QSqrt& x, const QSqrt& y, uint32_t q) {
    return {x.a * y.a + x.b * y.b * q, x.a * y.b + x.b * y.a};
}

QSqrt qs_scale(const QSqrt& x, const BigRational& c) { return {c * x.a, c * x.b}; }

QSqrt qs_half_power(const BigInt& n, int64_t half, uint32_t q) {
    const int64_t t = half >= 0 ? half / 2 : -((-half + 1) / 2);  // floor(half / 2)
    const int rem = static_cast<int>(half - 2 * t);
    BigRational scale =
        t >= 0 ? BigRational(boost::multiprecision::pow(BigInt(q), static_cast<unsigned>(t)))
               : BigRational(1, boost::multiprecision::pow(BigInt(q), static_cast<unsigned>(-t)));
    scale *= n;
    return rem == 0 ? QSqrt{scale, 0} : QSqrt{0, scale};
}

double qs_to_double(const QSqrt& x, uint32_t q) {
    return x.a.convert_to<double>() + x.b.convert_to<double>() * std::sqrt(double(q));
}

namespace {

using QSeries = std::map<std::vector<int>, QSqrt>;

int cone_norm(const std::vector<int>& w) {
    int s = 0;
    for (int x : w) s += std::abs(x);
    return s;
}

/// Convolution truncated to cone norm <= radius. All inputs are supported in
/// the same orthant cone, on which the norm is additive, so truncation is
/// exact: no discarded pair could contribute to a kept exponent.
QSeries qs_convolve(const QSeries& A, const QSeries& B, int radius, uint32_t q) {
    QSeries out;
    std::vector<int> w;
    for (const auto& [wa, va] : A) {
        const int na = cone_norm(wa);
        for (const auto& [wb, vb] : B) {
            if (na + cone_norm(wb) > radius) continue;
            w.resize(wa.size());
            for (size_t i = 0; i < w.size(); ++i) w[i] = wa[i] + wb[i];
            const QSqrt prod = qs_mul(va, vb, q);
            auto [it, fresh] = out.emplace(w, prod);
            if (!fresh) it->second = qs_add(it->second, prod);
        }
    }
    return out;
}

}  // namespace

std::map<std::vector<int>, QSqrt> fourth_moment_series(uint32_t p, const SlotSubset& S,
                                                       int radius) {
    if (S.arity != 4 || S.size() != 2)
        throw std::invalid_argument("fourth_moment_series: needs a 2-subset of 4 slots");
    if (radius < 0) throw std::invalid_argument("fourth_moment_series: negative radius");
    const uint32_t q = p;
    const std::vector<int> zero(4, 0);
    auto monomial = [](std::initializer_list<std::pair<int, int>> parts) {
        std::vector<int> w(4, 0);
        for (auto [slot, e] : parts) w[static_cast<size_t>(slot)] = e;
        return w;
    };

    std::vector<QSeries> factors;
    for (uint32_t i : S.members) {
        QSeries g;
        for (int e = 0; e <= radius; ++e)
            g[monomial({{static_cast<int>(i), e}})] = qs_half_power(1, -e, q);
        factors.push_back(std::move(g));
    }
    for (uint32_t j : S.complement()) {
        QSeries g;
        for (int e = 0; e <= radius; ++e)
            g[monomial({{static_cast<int>(j), -e}})] = qs_half_power(1, -e, q);
        factors.push_back(std::move(g));
    }
    for (uint32_t i : S.members)
        for (uint32_t j : S.complement()) {
            QSeries lin;
            lin[zero] = qs_half_power(1, 0, q);
            lin[monomial({{static_cast<int>(i), 1}, {static_cast<int>(j), -1}})] =
                qs_half_power(-1, -2, q);
            QSeries geo;
            for (int e = 0; 2 * e <= radius; ++e)
                geo[monomial({{static_cast<int>(i), e}, {static_cast<int>(j), -e}})] =
                    qs_half_power(1, 0, q);
            factors.push_back(qs_convolve(lin, geo, radius, q));
        }
    {
        std::vector<int> X(4);
        for (uint32_t i = 0; i < 4; ++i) X[i] = S.contains(i) ? 1 : -1;
        QSeries lin;
        lin[zero] = qs_half_power(1, 0, q);
        lin[X] = qs_half_power(-1, -2, q);
        QSeries geo;
        for (int e = 0; 4 * e <= radius; ++e) {
            std::vector<int> w(4);
            for (uint32_t i = 0; i < 4; ++i) w[i] = X[i] * e;
            geo[std::move(w)] = qs_half_power(1, -4 * e, q);
        }
        factors.push_back(qs_convolve(lin, geo, radius, q));
    }

    QSeries acc;
    acc[zero] = qs_half_power(1, 0, q);
    for (const auto& f : factors) acc = qs_convolve(acc, f, radius, q);
    return acc;
}

std::complex<double> fourth_moment_s_term(const std::array<std::complex<double>, 4>& x,
                                          const SlotSubset& S, uint32_t q) {
    if (S.arity != 4 || S.size() != 2)
        throw std::invalid_argument("fourth_moment_s_term: needs a 2-subset of 4 slots");
    const double rq = std::sqrt(static_cast<double>(q));
    auto guard = [](std::complex<double> den, const char* what) {
        if (std::abs(den) < 1e-9)
            throw std::domain_error(std::string("fourth_moment_s_term: pole in factor ") + what);
        return den;
    };
    std::complex<double> val = 1;
    std::complex<double> X = 1;
    for (uint32_t i : S.members) {
        val /= guard(1.0 - x[i] / rq, "1 - x_i q^{-1/2}");
        X *= x[i];
    }
    for (uint32_t j : S.complement()) {
        val /= guard(1.0 - 1.0 / (x[j] * rq), "1 - q^{-1/2}/x_j");
        X /= x[j];
    }
    for (uint32_t i : S.members)
        for (uint32_t j : S.complement())
            val *= (1.0 - x[i] / (static_cast<double>(q) * x[j])) /
                   guard(1.0 - x[i] / x[j], "1 - x_i/x_j");
    val *= (1.0 - X / static_cast<double>(q)) /
           guard(1.0 - X / static_cast<double>(q * q), "1 - X q^{-2}");
    return val;
}

std::complex<double> fourth_moment_closed_form(const std::array<std::complex<double>, 4>& x,
                                               uint32_t q) {
    std::complex<double> total = 0;
    for (const auto& c : combinations(0, 3, 2))
        total += fourth_moment_s_term(x, SlotSubset(4, {static_cast<uint32_t>(c[0]),
                                                        static_cast<uint32_t>(c[1])}),
                                      q);
    return total;
}

std::complex<double> first_moment_closed_form(const std::vector<std::complex<double>>& alphas,
                                              uint32_t q, uint32_t n, int prefactor_sign) {
    const size_t k = alphas.size();
    if (k < 2) throw std::invalid_argument("first_moment_closed_form: needs at least two shifts");
    if (prefactor_sign != 1 && prefactor_sign != -1)
        throw std::invalid_argument("first_moment_closed_form: sign must be +1 or -1");
    const double lq = std::log(static_cast<double>(q));
    auto qp = [&](std::complex<double> e) { return std::exp(e * lq); };
    auto guard = [](std::complex<double> den, const char* what) {
        if (std::abs(den) < 1e-12)
            throw std::domain_error(std::string("first_moment_closed_form: ") + what);
        return den;
    };

    std::complex<double> total = 0;
    for (size_t j = 0; j < k; ++j) {
        std::complex<double> term =
            qp(static_cast<double>(prefactor_sign) * alphas[j] * static_cast<double>(n - 1));
        term /= guard(1.0 - qp(-0.5 - alphas[j]), "pole at the dual boundary");
        for (size_t i = 0; i < k; ++i) {
            if (i == j) continue;
            term *= 1.0 - qp(-1.0 + alphas[i] - alphas[j]);
            term /= guard(1.0 - qp(-0.5 + alphas[i]), "pole at the direct boundary");
            term /= guard(1.0 - qp(alphas[i] - alphas[j]), "coincident shifts");
        }
        total += term;
    }
    return total;
}

namespace {

/// Memoized double-precision count of free-side tuples whose total
/// T-valuation reaches kappa = sum(deg) - e, for one or two free slots.
class PairCountMemo {
  public:
    PairCountMemo(uint32_t p, int max_deg) : p_(p), dim_(max_deg + 1) {
        pw_.resize(2 * static_cast<size_t>(max_deg) + 2);
        pw_[0] = 1;
        for (size_t i = 1; i < pw_.size(); ++i) pw_[i] = pw_[i - 1] * p;
        table_.assign(static_cast<size_t>(dim_) * dim_ * dim_, -1.0);
    }

    /// Tuples of monic (g_1, g_2) of degrees (d1, d2) with
    /// v_T(g_1) + v_T(g_2) >= d1 + d2 - e. A one-slot count is the d2 = 0 case.
    double count(int d1, int d2, int e) {
        if (d1 > d2) std::swap(d1, d2);
        size_t key = (static_cast<size_t>(d1) * dim_ + d2) * dim_ + e;
        double& slot = table_[key];
        if (slot >= 0) return slot;
        const int64_t kappa = static_cast<int64_t>(d1) + d2 - e;
        double total;
        if (kappa <= 0) {
            total = pw_[static_cast<size_t>(d1 + d2)];
        } else {
            total = 0;
            for (int v = 0; v <= d1; ++v) {
                const int64_t rem = kappa - v;  // valuation still needed from slot 2
                if (rem > d2) continue;
                const double tail = pw_[static_cast<size_t>(d2 - std::max<int64_t>(rem, 0))];
                const double exact =
                    v == d1 ? 1.0
                            : pw_[static_cast<size_t>(d1 - v)] - pw_[static_cast<size_t>(d1 - v - 1)];
                total += exact * tail;
            }
        }
        slot = total;
        return total;
    }

  private:
    uint32_t p_;
    int dim_;
    std::vector<double> pw_;
    std::vector<double> table_;
};

}  // namespace

MainTermEval first_moment_tensor_eval(uint32_t p, uint32_t n, uint32_t r,
                                      const std::vector<std::complex<double>>& alphas) {
    const uint32_t k = r + 1;
    if (r < 1 || r > 2)
        throw std::invalid_argument("first_moment_tensor_eval: supported for one or two slots");
    if (alphas.size() != k)
        throw std::invalid_argument("first_moment_tensor_eval: shift tuple arity mismatch");

    const double lq = std::log(static_cast<double>(p));
    auto qp = [&](std::complex<double> e) { return std::exp(e * lq); };
    std::vector<std::complex<double>> x(k);
    for (uint32_t i = 0; i < k; ++i) x[i] = qp(alphas[i]);

    std::complex<double> vdm = 1;
    for (uint32_t i = 0; i < k; ++i)
        for (uint32_t j = i + 1; j < k; ++j) vdm *= x[i] - x[j];
    if (std::abs(vdm) < 1e-12)
        throw std::domain_error("first_moment_tensor_eval: coincident shifts");

    std::vector<std::pair<int, std::vector<uint32_t>>> perms;
    {
        std::vector<uint32_t> perm(k);
        std::iota(perm.begin(), perm.end(), 0u);
        do
            perms.emplace_back(permutation_sign(perm), perm);
        while (std::next_permutation(perm.begin(), perm.end()));
    }
    const double gsign = (k * (k - 1) / 2) % 2 != 0 ? -1.0 : 1.0;

    const int v_start = static_cast<int>(n) + static_cast<int>(k) + 40;
    const int v_max = 120;
    PairCountMemo counts(p, v_max + static_cast<int>(k) + 1);
    std::vector<double> qhalf(static_cast<size_t>(k) * (v_max + k + 1) + 1);
    for (size_t t = 0; t < qhalf.size(); ++t)
        qhalf[t] = std::pow(static_cast<double>(p), -0.5 * static_cast<double>(t));

    // x_i^t for t in [-V-k, V+k], per slot.
    const int off = v_max + static_cast<int>(k);
    std::vector<std::vector<std::complex<double>>> powx(k);
    for (uint32_t i = 0; i < k; ++i) {
        auto& row = powx[i];
        row.assign(2 * static_cast<size_t>(off) + 1, 1.0);
        for (int t = 1; t <= off; ++t) {
            row[static_cast<size_t>(off + t)] = row[static_cast<size_t>(off + t - 1)] * x[i];
            row[static_cast<size_t>(off - t)] = row[static_cast<size_t>(off - t + 1)] / x[i];
        }
    }

    std::vector<int> w(k), deg(k);
    auto eval_subset = [&](uint32_t skip, int V) {
        // Slots other than `skip` range over [0, V], slot `skip` over
        // [-V, k-1]; the cone checks inside zero everything outside support.
        std::complex<double> sum = 0;
        for (uint32_t i = 0; i < k; ++i) w[i] = i == skip ? -V : 0;
        while (true) {
            double coeff = 0;
            for (const auto& [sg, perm] : perms) {
                bool in_cone = true;
                int sum_abs = 0;
                int e = 0;
                int d_free[2] = {0, 0};
                int nfree = 0;
                for (uint32_t i = 0; i < k; ++i) {
                    const int u = w[i] - static_cast<int>(perm[i]);
                    if (i == skip) {
                        if (u > 0) {
                            in_cone = false;
                            break;
                        }
                        e = -u;
                        sum_abs += e;
                    } else {
                        if (u < 0) {
                            in_cone = false;
                            break;
                        }
                        sum_abs += u;
                        d_free[nfree++] = u;
                    }
                }
                if (!in_cone) continue;
                coeff += sg * counts.count(d_free[0], d_free[1], e) *
                         qhalf[static_cast<size_t>(sum_abs)];
            }
            if (coeff != 0) {
                std::complex<double> mono = 1;
                for (uint32_t i = 0; i < k; ++i)
                    mono *= powx[i][static_cast<size_t>(off + w[i])];
                sum += coeff * mono;
            }
            uint32_t i = 0;
            for (; i < k; ++i) {
                const int hi = i == skip ? static_cast<int>(k) - 1 : V;
                if (++w[i] <= hi) break;
                w[i] = i == skip ? -V : 0;
            }
            if (i == k) break;
        }
        return gsign * sum;
    };

    int V = std::min(v_start, v_max);
    std::complex<double> prev = 0, total = 0;
    bool have_prev = false;
    double last_shell = 0;
    while (true) {
        total = 0;
        for (uint32_t j = 0; j < k; ++j)
            total += qp(alphas[j] * static_cast<double>(n - 1)) * eval_subset(j, V);
        total /= vdm;
        if (have_prev) {
            last_shell = std::abs(total - prev);
            if (last_shell <= 1e-10 * std::max(1.0, std::abs(total))) break;
        }
        if (V >= v_max) break;
        prev = total;
        have_prev = true;
        V = std::min(V + 10, v_max);
    }
    return {total, V, last_shell};
}

ArithmeticFactor arithmetic_factor(uint32_t p, uint32_t r, uint32_t rt, uint32_t D,
                                   bool boundary_reciprocal) {
    const double q = p;
    const double rr = static_cast<double>(r) * rt;
    const double direct = std::pow(1.0 - 1.0 / q, rr);
    const double half = std::pow(1.0 - 1.0 / std::sqrt(q), static_cast<double>(r) + rt);
    const double boundary = boundary_reciprocal ? direct / half : direct * half;

    auto binom_shift = [](uint32_t e, uint32_t parts) {
        // C(e + parts - 1, parts - 1); the empty-product convention at
        // parts = 0 is [e == 0].
        if (parts == 0) return e == 0 ? 1.0 : 0.0;
        double c = 1;
        for (uint32_t i = 1; i < parts; ++i)
            c *= static_cast<double>(e + i) / static_cast<double>(i);
        return c;
    };

    double value = boundary;
    for (uint32_t d = 1; d <= D; ++d) {
        uint64_t cnt = irreducible_count(p, static_cast<int>(d));
        if (d == 1) cnt -= 1;  // the distinguished linear prime is the boundary factor
        if (cnt == 0) continue;
        const double xd = std::pow(q, -static_cast<double>(d));
        double s = 0;
        for (uint32_t e = 0; e <= 600; ++e) {
            const double term = binom_shift(e, r) * binom_shift(e, rt) * std::pow(xd, e);
            s += term;
            if (e > 0 && term < 1e-18 * std::max(1.0, s)) break;
        }
        value *= std::pow(std::pow(1.0 - xd, rr) * s, static_cast<double>(cnt));
    }

    const double tail = std::pow(4.0, rr + r + rt) * std::pow(q, -(static_cast<double>(D) + 1.0));
    return {value, tail, boundary};
}

BigRational rm_factor(uint32_t r, uint32_t rt) {
    auto fact = [](uint32_t n) {
        BigInt f = 1;
        for (uint32_t i = 2; i <= n; ++i) f *= i;
        return f;
    };
    BigRational g(fact(r * rt));
    for (uint32_t j = 0; j < r; ++j) g *= BigRational(fact(j), fact(j + rt));
    return g;
}

BigInt weyl_dimension(uint32_t n, uint32_t r, uint32_t rt) {
    std::vector<int> d(r, 0);
    d.insert(d.end(), rt, static_cast<int>(n) - 1);
    return multiplicity(HighestWeight(std::move(d), r, rt, n));
}

std::complex<double> weyl_sum_mainterm(const std::vector<std::complex<double>>& alphas,
                                       uint32_t q, uint32_t n, uint32_t r, uint32_t rt) {
    const uint32_t k = r + rt;
    if (alphas.size() != k) throw std::invalid_argument("weyl_sum_mainterm: arity mismatch");
    const bool all_zero = std::all_of(alphas.begin(), alphas.end(), [](std::complex<double> a) {
        return a == std::complex<double>(0.0);
    });
    if (all_zero) return {weyl_dimension(n, r, rt).convert_to<double>(), 0.0};

    const double lq = std::log(static_cast<double>(q));
    auto qp = [&](std::complex<double> e) { return std::exp(e * lq); };
    std::complex<double> total = 0;
    for (const auto& c : combinations(0, static_cast<int>(k) - 1, r)) {
        std::vector<bool> in(k, false);
        for (int i : c) in[static_cast<size_t>(i)] = true;
        std::complex<double> term = 1;
        for (uint32_t j = 0; j < k; ++j)
            if (!in[j]) term *= qp(alphas[j] * static_cast<double>(n - 1));
        for (uint32_t i = 0; i < k; ++i) {
            if (!in[i]) continue;
            for (uint32_t j = 0; j < k; ++j) {
                if (in[j]) continue;
                const std::complex<double> den = 1.0 - qp(alphas[i] - alphas[j]);
                if (std::abs(den) < 1e-12)
                    throw std::domain_error("weyl_sum_mainterm: coincident shifts");
                term /= den;
            }
        }
        total += term;
    }
    return total;
}

std::complex<double> richardson_limit(const std::function<std::complex<double>(double)>& f,
                                      double t0, uint32_t levels) {
    if (levels == 0 || t0 <= 0)
        throw std::invalid_argument("richardson_limit: needs t0 > 0 and at least one level");
    std::vector<double> t(levels);
    std::vector<std::complex<double>> v(levels);
    for (uint32_t j = 0; j < levels; ++j) {
        t[j] = t0 / std::pow(2.0, static_cast<double>(j));
        v[j] = f(t[j]);
    }
    for (uint32_t m = 1; m < levels; ++m)
        for (uint32_t j = levels - 1; j >= m; --j)
            v[j] = (t[j - m] * v[j] - t[j] * v[j - 1]) / (t[j - m] - t[j]);
    return v[levels - 1];
}

}  // namespace ffm
