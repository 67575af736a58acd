#include "ffm/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "ffm/budget.hpp"
#include "ffm/character.hpp"
#include "ffm/truncated_unit.hpp"

namespace ffm {

namespace {

std::string scalar_brief(const HalfPowerScalar& v) {
    std::ostringstream os;
    const auto z = v.embed();
    os << "(" << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag())
       << "i, half=" << v.half_exponent() << ")";
    return os.str();
}

std::string tuple_brief(const std::vector<int>& d) {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < d.size(); ++i) os << (i ? "," : "") << d[i];
    os << ")";
    return os.str();
}

MonodromyReport require_monodromy(const FamilyData& fam) {
    MonodromyReport mono = empirical_m_mu(fam, 4 * fam.p * fam.p);
    if (!mono.found)
        throw std::logic_error("harness: no constant epsilon power within 4 p^2 for p=" +
                               std::to_string(fam.p) + ", n=" + std::to_string(fam.n));
    return mono;
}

std::vector<std::pair<int, std::vector<uint32_t>>> signed_permutations(uint32_t k) {
    std::vector<std::pair<int, std::vector<uint32_t>>> out;
    std::vector<uint32_t> perm(k);
    std::iota(perm.begin(), perm.end(), 0u);
    do
        out.emplace_back(permutation_sign(perm), perm);
    while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

double power_savings_w(uint32_t p, uint32_t n, uint32_t r, uint32_t rt) {
    if (rt != 1 || p <= 2 * r) return std::numeric_limits<double>::quiet_NaN();
    return static_cast<double>(n) + 1.0 -
           static_cast<double>(p - 2 * r) * n / (static_cast<double>(p) * r);
}

}  // namespace

MatchedRegionReport verify_matched(const FamilyData& fam, uint32_t r, uint32_t rt,
                                   unsigned threads, double budget, bool throw_on_mismatch) {
    const uint32_t k = r + rt;
    if (k == 0) throw std::invalid_argument("verify_matched: r + rt must be positive");
    const auto fld = fam.field();
    const MonodromyReport mono = require_monodromy(fam);
    const LaurentTensor T = vandermonde_multiply(moment_tensor(fam, r, rt, threads));
    const auto window = window_tuples(fam.n, k);
    const auto subsets = admissible_subsets(r, rt, mono.m);

    MatchedRegionReport rep;
    rep.p = fam.p;
    rep.n = fam.n;
    rep.r = r;
    rep.rt = rt;
    rep.m = mono.m;
    rep.window_size = static_cast<uint32_t>(window.size());
    rep.subset_count = static_cast<uint32_t>(subsets.size());

    std::vector<uint32_t> matched_count(window.size(), 0);
    std::string first_failure;
    for (const SlotSubset& S : subsets) {
        CountTable counts(fam.p, S, CountTable::Mode::brute, budget);
        for (size_t t = 0; t < window.size(); ++t) {
            const auto& d = window[t];
            MatchedPairRow row;
            row.d = d;
            row.subset = S.to_string();
            row.matched = matched_predicate(d, S, fam.n);
            const HalfPowerScalar rs =
                r_s_coefficient(fld, counts, fam.n, r, mono.m, mono.mu_raw, d);
            row.r_nonzero = !rs.is_zero();
            if (row.matched) {
                ++rep.matched_pairs;
                ++matched_count[t];
                row.equal = T.at(d) == rs;
                if (row.equal) {
                    ++rep.equal_pairs;
                } else if (first_failure.empty()) {
                    first_failure = "verify_matched: matched pair disagrees at d=" +
                                    tuple_brief(d) + ", S=" + S.to_string() +
                                    ": T=" + scalar_brief(T.at(d)) + ", R_S=" + scalar_brief(rs);
                }
            } else if (row.r_nonzero) {
                ++rep.tail_pairs;
            }
            rep.rows.push_back(std::move(row));
        }
    }

    for (uint32_t c : matched_count) {
        if (c == 0)
            ++rep.tuples_unmatched;
        else if (c == 1)
            ++rep.tuples_unique;
        else
            ++rep.tuples_multiple;
    }
    rep.all_matched_equal = rep.matched_pairs == rep.equal_pairs;
    if (!rep.all_matched_equal && throw_on_mismatch) throw std::logic_error(first_failure);
    return rep;
}

HypothesisReport hypothesis_report(const FamilyData& fam, uint32_t r, uint32_t rt,
                                   unsigned threads) {
    const MonodromyReport mono = require_monodromy(fam);
    const LaurentTensor M = moment_tensor(fam, r, rt, threads);
    const double lq = std::log(static_cast<double>(fam.p));

    HypothesisReport rep;
    rep.p = fam.p;
    rep.n = fam.n;
    rep.r = r;
    rep.rt = rt;
    rep.m = mono.m;
    rep.w_duality = static_cast<double>(fam.n) - 1.0;
    rep.w_power_savings = power_savings_w(fam.p, fam.n, r, rt);
    rep.max_omega = -std::numeric_limits<double>::infinity();
    const BettiBudget betti(fam.n, r, rt);

    for (const HighestWeight& w : enumerate_sorted_weights(fam.n, r, rt)) {
        if (is_major_arc(w, mono.m)) continue;
        ++rep.minor_count;
        WeightRow row;
        row.d = w.d;
        const HalfPowerScalar F = F_of_irreducible(M, w);
        row.f_zero = F.is_zero();
        const std::complex<double> fe = F.embed();
        row.abs_f = std::abs(fe);

        std::complex<double> schur_sum = 0;
        for (const LFunctionRecord& rec : fam.records) schur_sum += schur_at_zeros(rec, w, fam.p);
        row.cross_rel = std::abs(fe - schur_sum) / std::max(1.0, row.abs_f);

        row.multiplicity = multiplicity(w).str();
        row.betti_bound = betti.bound(w.d).convert_to<double>();
        if (row.f_zero) {
            ++rep.zero_count;
            row.omega = std::numeric_limits<double>::quiet_NaN();
        } else {
            row.omega = 2.0 * std::log(row.abs_f) / lq - static_cast<double>(fam.n);
            rep.any_nonzero = true;
            rep.max_omega = std::max(rep.max_omega, row.omega);
        }
        rep.rows.push_back(std::move(row));
    }
    rep.escape_hatch = rep.any_nonzero && rep.max_omega >= static_cast<double>(fam.n) - 1.0;
    return rep;
}

MomentComparison moment_compare(const FamilyData& fam, uint32_t r, uint32_t rt,
                                const std::vector<std::complex<double>>& alphas,
                                unsigned threads, double budget) {
    const uint32_t k = r + rt;
    if (alphas.size() != k) throw std::invalid_argument("moment_compare: shift arity mismatch");
    const double q = fam.p;
    const double lq = std::log(q);
    auto qp = [&](std::complex<double> e) { return std::exp(e * lq); };

    std::vector<std::complex<double>> x(k);
    for (uint32_t i = 0; i < k; ++i) x[i] = qp(alphas[i]);
    std::complex<double> vdm = 1;
    for (uint32_t i = 0; i < k; ++i)
        for (uint32_t j = i + 1; j < k; ++j) {
            vdm *= x[i] - x[j];
            if (std::abs(x[i] - x[j]) < 1e-12)
                throw std::domain_error("moment_compare: coincident shifts");
        }

    const double famsize =
        std::pow(q, static_cast<double>(fam.n)) - std::pow(q, static_cast<double>(fam.n) - 1);

    // Family side: epsilon^{-rt} prod_i L(1/2 - alpha_i), averaged.
    std::complex<double> lhs = 0;
    for (const LFunctionRecord& rec : fam.records) {
        std::complex<double> term = std::pow(std::conj(rec.epsilon().embed()), rt);
        for (uint32_t i = 0; i < k; ++i) {
            std::complex<double> L = 0;
            std::complex<double> xp = 1;
            for (uint32_t d = 0; d < fam.n; ++d) {
                L += rec.c[d].embed() * std::pow(q, -0.5 * d) * xp;
                xp *= x[i];
            }
            term *= L;
        }
        lhs += term;
    }
    lhs /= famsize;

    // Ratio side on the window, plus exact per-tuple differences.
    const auto fld = fam.field();
    const MonodromyReport mono = require_monodromy(fam);
    const LaurentTensor T = vandermonde_multiply(moment_tensor(fam, r, rt, threads));
    const auto window = window_tuples(fam.n, k);
    const auto subsets = admissible_subsets(r, rt, mono.m);
    const auto perms = signed_permutations(k);

    MomentComparison cmp;
    cmp.window_size = static_cast<uint32_t>(window.size());

    std::vector<HalfPowerScalar> rsum(window.size(), HalfPowerScalar::zero(fld));
    std::vector<uint32_t> matched_count(window.size(), 0);
    for (const SlotSubset& S : subsets) {
        CountTable counts(fam.p, S, CountTable::Mode::brute, budget);
        for (size_t t = 0; t < window.size(); ++t) {
            const HalfPowerScalar rs =
                r_s_coefficient(fld, counts, fam.n, r, mono.m, mono.mu_raw, window[t]);
            if (matched_predicate(window[t], S, fam.n))
                ++matched_count[t];
            else if (!rs.is_zero())
                ++cmp.tail_pairs;
            rsum[t] = rsum[t] + rs;
        }
    }

    std::complex<double> rhs = 0, recon = 0;
    for (size_t t = 0; t < window.size(); ++t) {
        const auto& d = window[t];
        std::complex<double> det = 0;
        for (const auto& [sg, perm] : perms) {
            std::complex<double> mono_term = 1;
            for (uint32_t i = 0; i < k; ++i)
                mono_term *= std::pow(x[i], d[perm[i]]);
            det += static_cast<double>(sg) * mono_term;
        }
        rhs += rsum[t].embed() * det;
        const HalfPowerScalar diff = T.at(d) - rsum[t];
        if (matched_count[t] == 0)
            recon += diff.embed() * det;
        else if (!diff.is_zero())
            ++cmp.support_violations;
    }
    rhs /= famsize * vdm;
    recon /= famsize * vdm;

    cmp.lhs = lhs;
    cmp.rhs = rhs;
    cmp.abs_diff = std::abs(lhs - rhs);
    cmp.reconstruction_gap = std::abs((lhs - rhs) - recon);
    const BettiBudget betti(fam.n, r, rt);
    cmp.budget_duality = betti.error_reference(q, static_cast<double>(fam.n) - 1.0);
    const double wps = power_savings_w(fam.p, fam.n, r, rt);
    cmp.budget_power_savings =
        std::isnan(wps) ? wps : betti.error_reference(q, wps);
    return cmp;
}

PointCountResult z_point_count(uint32_t p, uint32_t n, uint32_t m1, uint32_t m2, double budget,
                               bool force) {
    const double cost = std::pow(static_cast<double>(p), static_cast<double>(m1 + m2));
    if (cost > budget && !force) {
        std::ostringstream os;
        os << "z_point_count: enumeration cost " << cost << " above budget " << budget;
        throw BudgetError(os.str(), cost);
    }

    const PrimeField F(p);
    // prod (1 - a_i x) over one side, as a one-unit mod x^{n+1}.
    auto side_product = [&](const std::vector<uint32_t>& vals) {
        TruncatedUnit u = TruncatedUnit::one(n);
        for (uint32_t a : vals) {
            TruncatedUnit lin(n);
            if (n >= 1) lin.c[0] = F.neg(a);
            u = unit_mul(F, u, lin);
        }
        return u;
    };

    PointCountResult res;
    {
        std::vector<uint32_t> vals(m1 + m2, 0);
        while (true) {
            const TruncatedUnit left =
                side_product(std::vector<uint32_t>(vals.begin(), vals.begin() + m1));
            const TruncatedUnit right =
                side_product(std::vector<uint32_t>(vals.begin() + m1, vals.end()));
            if (left == right) ++res.brute;
            size_t i = 0;
            for (; i < vals.size(); ++i) {
                if (++vals[i] < p) break;
                vals[i] = 0;
            }
            if (i == vals.size()) break;
        }
    }

    // Fourier route: average over the full dual group of one-units.
    const CharacterContext ctx(p, n, 1);
    const auto fld = CycloField::get(p, ctx.L());
    std::vector<std::vector<uint64_t>> profiles(p);
    for (uint32_t a = 0; a < p; ++a) {
        TruncatedUnit lin(n);
        if (n >= 1) lin.c[0] = F.neg(a);
        profiles[a] = ctx.unit_profile(lin);
    }

    CycloScalar acc(fld);
    std::vector<uint32_t> b(n, 0);
    while (true) {
        const CharacterPoint pt(ctx, b);
        CycloScalar g(fld);
        for (uint32_t a = 0; a < p; ++a) g.add_root(character_eval_profile(ctx, pt, profiles[a]));
        CycloScalar term = CycloScalar::from_int(fld, 1);
        for (uint32_t i = 0; i < m1; ++i) term = term * g;
        const CycloScalar gc = g.conj();
        for (uint32_t i = 0; i < m2; ++i) term = term * gc;
        acc += term;

        size_t i = 0;
        for (; i < b.size(); ++i) {
            if (++b[i] < p) break;
            b[i] = 0;
        }
        if (i == b.size()) break;
    }

    Int128 pn = 1;
    for (uint32_t i = 0; i < n; ++i) pn *= p;
    const auto divided = acc.divide_exact(pn);
    if (!divided)
        throw std::logic_error("z_point_count: character average is not divisible by p^n");
    const auto as_int = divided->as_integer();
    if (!as_int)
        throw std::logic_error("z_point_count: character average is not a rational integer");
    res.fourier = BigInt(int128_to_int64(*as_int));
    res.equal = res.brute == res.fourier;
    return res;
}

KloostermanResult kloosterman_check(const FamilyData& fam, const MonodromyReport& mono,
                                    double budget, bool force) {
    const uint32_t p = fam.p;
    const uint32_t n = fam.n;
    const uint32_t m = mono.m;
    if (!mono.found) throw std::invalid_argument("kloosterman_check: monodromy order unknown");
    if (m < 2) throw std::invalid_argument("kloosterman_check: needs m >= 2");

    KloostermanResult res;
    res.m = m;
    res.budget_estimate =
        std::pow(static_cast<double>(p), static_cast<double>(n) * static_cast<double>(m));
    if (res.budget_estimate > budget && !force) {
        std::ostringstream os;
        os << "kloosterman_check: enumeration cost " << res.budget_estimate << " above budget "
           << budget;
        throw BudgetError(os.str(), res.budget_estimate);
    }

    const PrimeField F(p);
    const CharacterContext ctx = fam.context();
    const auto fld = fam.field();
    uint64_t zeta_step = ctx.psi_tag();  // additive character: zeta_{p^L}^{p^{L-1} tag a}
    for (uint32_t i = 0; i + 1 < ctx.L(); ++i) zeta_step *= p;

    CycloScalar lhs(fld);
    uint64_t control_count = 0;
    std::vector<uint64_t> idx(m - 1, 0);
    const uint64_t slot_size = [&] {
        uint64_t s = 1;
        for (uint32_t i = 0; i < n; ++i) s *= p;
        return s;
    }();
    while (true) {
        TruncatedUnit prod = TruncatedUnit::one(n);
        uint64_t top_sum = 0;
        for (uint32_t j = 0; j + 1 < m; ++j) {
            const TruncatedUnit u = TruncatedUnit::from_dense_index(p, n, idx[j]);
            top_sum += u.coeff(n);
            prod = unit_mul(F, prod, u);
        }
        const TruncatedUnit last = unit_inverse(F, prod);
        top_sum += last.coeff(n);
        lhs.add_root((top_sum % p) * zeta_step);
        ++control_count;

        size_t j = 0;
        for (; j < idx.size(); ++j) {
            if (++idx[j] < slot_size) break;
            idx[j] = 0;
        }
        if (j == idx.size()) break;
    }

    {
        std::ostringstream os;
        const auto z = lhs.embed();
        os << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
        res.lhs = os.str();
    }

    // Modulus identity: LHS conj(LHS) = p^{m(n+1)-2}.
    const uint64_t mod_exp = static_cast<uint64_t>(m) * (n + 1) - 2;
    Int128 expected = 1;
    for (uint64_t i = 0; i < mod_exp; ++i) expected *= p;
    const auto norm = (lhs * lhs.conj()).as_integer();
    res.modulus_ok = norm && *norm == expected;

    // Trivial additive character: the weight collapses to the solution count,
    // whose squared modulus p^{2n(m-1)} differs from p^{m(n+1)-2} unless m = 2.
    {
        const Int128 csq = static_cast<Int128>(control_count) * static_cast<Int128>(control_count);
        res.control_breaks = csq != expected;
    }

    // Ratio against mu: LHS should be a sign form of q^{(m(n+1)-2)/2} mu.
    const HalfPowerScalar lhs_hp(lhs, 0);
    const HalfPowerScalar scale =
        HalfPowerScalar::from_int(fld, 1, static_cast<int64_t>(mod_exp));
    const std::vector<std::pair<std::string, HalfPowerScalar>> forms = {
        {"+mu", mono.mu_raw * scale},
        {"-mu", -(mono.mu_raw * scale)},
        {"+conj(mu)", mono.mu_raw.conj() * scale},
        {"-conj(mu)", -(mono.mu_raw.conj() * scale)},
    };
    for (const auto& [name, form] : forms) {
        if (lhs_hp == form) {
            res.mu_matched = true;
            res.match_form = name;
            break;
        }
    }
    return res;
}

}  // namespace ffm
