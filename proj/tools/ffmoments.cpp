#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ffm/budget.hpp"
#include "ffm/fields.hpp"
#include "ffm/harness.hpp"
#include "ffm/json_io.hpp"
#include "ffm/lfam.hpp"
#include "ffm/mainterm.hpp"
#include "ffm/schur.hpp"

namespace {

using namespace ffm;

struct RunConfig {
    uint32_t p = 3;
    uint32_t n = 4;
    uint32_t r = 1;
    uint32_t rt = 1;
    uint32_t m1 = 2;
    uint32_t m2 = 2;
    uint32_t psi_tag = 1;
    unsigned threads = 0;  // 0 = all cores
    std::vector<double> shifts;
    bool real_shift = false;
    uint32_t trunc = 10;
    int window = -1;
    double budget_family = 1e9;
    double budget_count = 1e7;
    std::string out;
    std::string format = "json";
    std::string subset;
    bool all_subsets = false;
    bool force = false;

    void validate_core() const {
        PrimeField probe(p);  // rejects composite p
        if (n < 2) throw std::invalid_argument("n must be >= 2");
    }
    void validate_moment() const {
        validate_core();
        if (r + rt == 0) throw std::invalid_argument("r + rt must be >= 1");
    }
    /// Shifts are imaginary by default: alpha_j = i t_j.
    std::vector<std::complex<double>> alphas() const {
        if (shifts.size() != r + rt)
            throw std::invalid_argument("need exactly r + rt values of --shift, got " +
                                        std::to_string(shifts.size()));
        std::vector<std::complex<double>> a;
        for (double t : shifts)
            a.push_back(real_shift ? std::complex<double>(t, 0) : std::complex<double>(0, t));
        return a;
    }
};

std::string param_tag(const RunConfig& cfg, bool with_moments) {
    std::ostringstream os;
    os << "p" << cfg.p << "-n" << cfg.n;
    if (with_moments) os << "-r" << cfg.r << "-rt" << cfg.rt;
    return os.str();
}

void emit(const RunConfig& cfg, const std::string& name, const Json& j,
          const std::string& csv = "") {
    if (cfg.out.empty()) return;
    const std::string base = cfg.out + "/" + name;
    if (cfg.format == "csv" && !csv.empty()) {
        write_text_file(base + ".csv", csv);
        std::cout << "wrote " << base << ".csv\n";
    } else {
        write_text_file(base + ".json", j.dump(2) + "\n");
        std::cout << "wrote " << base << ".json\n";
    }
}

FamilyData family_for(const RunConfig& cfg) {
    return load_or_build_family(cfg.p, cfg.n, cfg.psi_tag, cfg.threads, cfg.budget_family,
                                cfg.force);
}

std::string rational_str(const BigRational& x) {
    std::ostringstream os;
    os << boost::multiprecision::numerator(x);
    if (boost::multiprecision::denominator(x) != 1)
        os << "/" << boost::multiprecision::denominator(x);
    return os.str();
}

int cmd_family(const RunConfig& cfg) {
    cfg.validate_core();
    const FamilyData fam = family_for(cfg);
    const RecordDiagnostics diag = check_family(fam);
    std::cout << "|S_{" << cfg.n << "," << cfg.p << "}| = " << fam.records.size() << "\n";
    emit(cfg, "family-" + param_tag(cfg, false), family_summary_json(fam, diag));
    return fam.records.size() == fam.expected_size() ? 0 : 1;
}

int cmd_lfun_check(const RunConfig& cfg) {
    cfg.validate_core();
    const FamilyData fam = family_for(cfg);
    const RecordDiagnostics diag = check_family(fam);
    std::cout << "family p=" << cfg.p << " n=" << cfg.n << ": " << fam.records.size()
              << " records, exact invariants hold, max root deviation " << diag.max_root_deviation
              << "\n";
    const MonodromyReport mono = empirical_m_mu(fam, 4 * cfg.p * cfg.p);
    bool mu_unit = false;
    if (mono.found) {
        const auto one = HalfPowerScalar::from_int(fam.field(), 1, 0);
        mu_unit = (mono.mu_raw * mono.mu_raw.conj()) == one;
        std::cout << "epsilon^m constant at m=" << mono.m << ", |mu|=1 exact: "
                  << (mu_unit ? "yes" : "NO") << ", p-power floor " << mono.p_power_floor
                  << (mono.floor_divides ? " divides m" : " DOES NOT divide m") << "\n";
    } else {
        std::cout << "no constant epsilon power found up to 4p^2\n";
    }
    Json j = family_summary_json(fam, diag);
    j["monodromy"] = monodromy_json(fam, mono);
    emit(cfg, "lfun-check-" + param_tag(cfg, false), j);
    return (mono.found && mu_unit && mono.floor_divides) ? 0 : 1;
}

int cmd_moments(const RunConfig& cfg) {
    cfg.validate_moment();
    const FamilyData fam = family_for(cfg);
    const LaurentTensor M = moment_tensor(fam, cfg.r, cfg.rt, cfg.threads);
    std::cout << "moment tensor at (r,rt)=(" << cfg.r << "," << cfg.rt << "): "
              << M.entries().size() << " entries on [0," << cfg.n - 1 << "]^" << cfg.r + cfg.rt
              << "\n";
    Json j;
    j["schema"] = "ffmoments-moments-v1";
    j["p"] = cfg.p;
    j["n"] = cfg.n;
    j["r"] = cfg.r;
    j["rt"] = cfg.rt;
    j["tensor"] = tensor_to_json(M);
    std::vector<CoefficientRow> rows;
    for (const auto& [d, v] : M.entries()) {
        CoefficientRow row;
        row.d = d;
        row.subset = "*";
        row.half_exp = v.half_exponent();
        const auto z = v.embed();
        row.re = z.real();
        row.im = z.imag();
        rows.push_back(std::move(row));
    }
    emit(cfg, "moments-" + param_tag(cfg, true), j, coefficient_csv(cfg.r + cfg.rt, rows));
    return 0;
}

int cmd_schur(const RunConfig& cfg) {
    cfg.validate_moment();
    const FamilyData fam = family_for(cfg);
    const MonodromyReport mono = empirical_m_mu(fam, 4 * cfg.p * cfg.p);
    if (!mono.found) {
        std::cerr << "no empirical m; cannot split arcs\n";
        return 1;
    }
    const LaurentTensor M = moment_tensor(fam, cfg.r, cfg.rt, cfg.threads);
    Json rows = Json::array();
    uint32_t major = 0, minor = 0;
    for (const HighestWeight& w : enumerate_sorted_weights(cfg.n, cfg.r, cfg.rt)) {
        const bool arc = is_major_arc(w, mono.m);
        (arc ? major : minor)++;
        const HalfPowerScalar F = F_of_irreducible(M, w);
        Json row;
        row["d"] = w.d;
        row["major_arc"] = arc;
        row["multiplicity"] = multiplicity(w).str();
        row["F"] = half_power_to_json(F);
        rows.push_back(std::move(row));
    }
    std::cout << "sorted weights: " << major + minor << " (" << major << " major-arc, " << minor
              << " minor-arc) at m=" << mono.m << "\n";
    Json j;
    j["schema"] = "ffmoments-schur-v1";
    j["p"] = cfg.p;
    j["n"] = cfg.n;
    j["r"] = cfg.r;
    j["rt"] = cfg.rt;
    j["m"] = mono.m;
    j["rows"] = std::move(rows);
    emit(cfg, "schur-" + param_tag(cfg, true), j);
    return 0;
}

int cmd_mainterm(const RunConfig& cfg) {
    cfg.validate_moment();
    const uint32_t k = cfg.r + cfg.rt;
    std::vector<SlotSubset> subsets;
    if (!cfg.subset.empty()) {
        std::vector<uint32_t> members;
        std::stringstream ss(cfg.subset);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) members.push_back(static_cast<uint32_t>(std::stoul(item)));
        subsets.emplace_back(k, std::move(members));
    } else {
        for (const SlotSubset& S : admissible_subsets(cfg.r, cfg.rt, 1))
            if (cfg.all_subsets || S.size() == cfg.r) subsets.push_back(S);
    }

    const int W = cfg.window >= 0 ? cfg.window : static_cast<int>(cfg.n) - 1;
    const auto fld = CycloField::get(cfg.p, 1);
    std::vector<CoefficientRow> rows;
    for (const SlotSubset& S : subsets) {
        CountTable counts(cfg.p, S, CountTable::Mode::brute, cfg.budget_count);
        std::vector<int> e(k);
        for (uint32_t i = 0; i < k; ++i) e[i] = S.contains(i) ? 0 : -W;
        while (true) {
            const HalfPowerScalar v = ms_coefficient(fld, counts, e);
            if (!v.is_zero()) {
                CoefficientRow row;
                row.d = e;
                row.subset = S.to_string();
                std::vector<int> degrees(k);
                for (uint32_t i = 0; i < k; ++i) degrees[i] = std::abs(e[i]);
                row.count = counts.count(degrees).str();
                row.half_exp = v.half_exponent();
                const auto z = v.embed();
                row.re = z.real();
                row.im = z.imag();
                rows.push_back(std::move(row));
            }
            uint32_t i = 0;
            for (; i < k; ++i) {
                const int hi = S.contains(i) ? W : 0;
                if (++e[i] <= hi) break;
                e[i] = S.contains(i) ? 0 : -W;
            }
            if (i == k) break;
        }
    }
    std::cout << "main-term coefficient table: " << rows.size() << " nonzero entries, "
              << subsets.size() << " subsets, box radius " << W << "\n";
    Json j;
    j["schema"] = "ffmoments-mainterm-v1";
    j["p"] = cfg.p;
    j["r"] = cfg.r;
    j["rt"] = cfg.rt;
    j["window"] = W;
    Json jrows = Json::array();
    for (const CoefficientRow& row : rows) {
        Json rj;
        rj["d"] = row.d;
        rj["S"] = row.subset;
        rj["count"] = row.count;
        rj["half_exp"] = row.half_exp;
        rj["value"] = Json::array({row.re, row.im});
        jrows.push_back(std::move(rj));
    }
    j["rows"] = std::move(jrows);
    emit(cfg, "mainterm-" + param_tag(cfg, true), j, coefficient_csv(k, rows));
    return 0;
}

int cmd_verify_matched(const RunConfig& cfg) {
    cfg.validate_moment();
    const FamilyData fam = family_for(cfg);
    const MatchedRegionReport rep =
        verify_matched(fam, cfg.r, cfg.rt, cfg.threads, cfg.budget_count, false);
    std::cout << "matched-region check at (p,n,r,rt)=(" << cfg.p << "," << cfg.n << "," << cfg.r
              << "," << cfg.rt << "), m=" << rep.m << ":\n"
              << "  window " << rep.window_size << " tuples x " << rep.subset_count
              << " subsets; matched pairs " << rep.matched_pairs << ", equal " << rep.equal_pairs
              << "\n"
              << "  tuple classes: " << rep.tuples_unmatched << " unmatched, " << rep.tuples_unique
              << " unique, " << rep.tuples_multiple << " multiple; tail rows " << rep.tail_pairs
              << "\n"
              << "  all matched pairs equal exactly: " << (rep.all_matched_equal ? "yes" : "NO")
              << "\n";
    emit(cfg, "verify-matched-" + param_tag(cfg, true), matched_report_json(rep),
         matched_report_csv(rep));
    return rep.all_matched_equal ? 0 : 1;
}

int cmd_hypothesis(const RunConfig& cfg) {
    cfg.validate_moment();
    const FamilyData fam = family_for(cfg);
    const HypothesisReport rep = hypothesis_report(fam, cfg.r, cfg.rt, cfg.threads);
    std::cout << "minor-arc cancellation report at (p,n,r,rt)=(" << cfg.p << "," << cfg.n << ","
              << cfg.r << "," << cfg.rt << "), m=" << rep.m << ":\n"
              << "  " << rep.minor_count << " minor-arc weights, " << rep.zero_count
              << " with F = 0 exactly\n";
    if (rep.any_nonzero)
        std::cout << "  max observed omega = " << rep.max_omega << " (|F| = q^{(n+omega)/2})\n";
    std::cout << "  reference lines: duality w = " << rep.w_duality << ", power-savings w = ";
    if (std::isnan(rep.w_power_savings))
        std::cout << "n/a";
    else
        std::cout << rep.w_power_savings;
    std::cout << "\n  escape hatch (max omega >= n-1): " << (rep.escape_hatch ? "RAISED" : "clear")
              << "\n";

    std::vector<double> omegas;
    for (const WeightRow& row : rep.rows)
        if (!row.f_zero) omegas.push_back(row.omega);
    if (!omegas.empty()) {
        const double lo0 = std::floor(*std::min_element(omegas.begin(), omegas.end()) * 2) / 2;
        const double hi0 = *std::max_element(omegas.begin(), omegas.end());
        std::cout << "  omega histogram (bin width 0.5):\n";
        for (double lo = lo0; lo <= hi0; lo += 0.5) {
            size_t cnt = 0;
            for (double w : omegas)
                if (w >= lo && w < lo + 0.5) ++cnt;
            if (cnt) {
                std::cout << "    [" << lo << "," << lo + 0.5 << "): ";
                for (size_t i = 0; i < cnt; ++i) std::cout << '#';
                std::cout << " " << cnt << "\n";
            }
        }
    }
    double worst_rel = 0;
    for (const WeightRow& row : rep.rows) worst_rel = std::max(worst_rel, row.cross_rel);
    std::cout << "  F vs family Schur sum, worst relative gap: " << worst_rel << "\n";
    emit(cfg, "hypothesis-" + param_tag(cfg, true), hypothesis_json(rep), hypothesis_csv(rep));
    return worst_rel <= 1e-6 ? 0 : 1;
}

int cmd_compare(const RunConfig& cfg) {
    cfg.validate_moment();
    const auto alphas = cfg.alphas();
    const FamilyData fam = family_for(cfg);
    const MomentComparison cmp =
        moment_compare(fam, cfg.r, cfg.rt, alphas, cfg.threads, cfg.budget_count);
    std::cout << "moment comparison: LHS = " << cmp.lhs << ", RHS = " << cmp.rhs << "\n"
              << "  |LHS - RHS| = " << cmp.abs_diff << "\n"
              << "  reference budgets: duality " << cmp.budget_duality << ", power-savings ";
    if (std::isnan(cmp.budget_power_savings))
        std::cout << "n/a";
    else
        std::cout << cmp.budget_power_savings;
    std::cout << " (informational; can exceed the terms at desk scale)\n"
              << "  unmatched-coefficient reconstruction gap = " << cmp.reconstruction_gap
              << ", support violations = " << cmp.support_violations << "\n";
    emit(cfg, "compare-" + param_tag(cfg, true),
         comparison_json(cmp, cfg.p, cfg.n, cfg.r, cfg.rt, alphas));
    const double tol = 1e-8 * std::max(1.0, std::abs(cmp.lhs) + std::abs(cmp.rhs));
    if (cfg.real_shift) return 0;  // exploratory mode, excluded from assertions
    return (cmp.support_violations == 0 && cmp.reconstruction_gap <= tol) ? 0 : 1;
}

int cmd_pointcount(const RunConfig& cfg) {
    cfg.validate_core();
    const PointCountResult res =
        z_point_count(cfg.p, cfg.n, cfg.m1, cfg.m2, cfg.budget_count, cfg.force);
    std::cout << "Z point count at (p,n,m1,m2)=(" << cfg.p << "," << cfg.n << "," << cfg.m1 << ","
              << cfg.m2 << "): brute " << res.brute.str() << ", character route "
              << res.fourier.str() << (res.equal ? " (equal)" : " (MISMATCH)") << "\n";
    emit(cfg, "pointcount-" + param_tag(cfg, false) + "-m" + std::to_string(cfg.m1) + "x" +
                  std::to_string(cfg.m2),
         pointcount_json(res, cfg.p, cfg.n, cfg.m1, cfg.m2));
    return res.equal ? 0 : 1;
}

int cmd_kloosterman(const RunConfig& cfg) {
    cfg.validate_core();
    const FamilyData fam = family_for(cfg);
    const MonodromyReport mono = empirical_m_mu(fam, 4 * cfg.p * cfg.p);
    if (!mono.found) {
        std::cerr << "no empirical m\n";
        return 1;
    }
    const KloostermanResult res = kloosterman_check(fam, mono, cfg.budget_count, cfg.force);
    std::cout << "complete-sum check at (p,n,m)=(" << cfg.p << "," << cfg.n << "," << res.m
              << "): LHS = " << res.lhs << "\n"
              << "  modulus identity q^{m(n+1)-2}: " << (res.modulus_ok ? "exact" : "FAILED")
              << "\n"
              << "  mu form: " << (res.mu_matched ? res.match_form : "NO MATCH") << "\n"
              << "  trivial-character control breaks modulus: "
              << (res.control_breaks ? "yes" : "NO") << "\n";
    emit(cfg, "kloosterman-" + param_tag(cfg, false), kloosterman_json(res, cfg.p, cfg.n));
    return (res.modulus_ok && res.mu_matched && res.control_breaks) ? 0 : 1;
}

int cmd_constants(const RunConfig& cfg) {
    if (cfg.r + cfg.rt == 0) throw std::invalid_argument("r + rt must be >= 1");
    PrimeField probe(cfg.p);
    const BigRational g = rm_factor(cfg.r, cfg.rt);
    const BettiBudget betti(2, cfg.r, cfg.rt);
    const ArithmeticFactor a = arithmetic_factor(cfg.p, cfg.r, cfg.rt, cfg.trunc);
    const std::string sub = std::to_string(cfg.r) + "," + std::to_string(cfg.rt);
    std::cout << "g_{" << sub << "} = " << rational_str(g) << "\n"
              << "C_{" << sub << "} = " << betti.C().str() << "\n"
              << "a_{" << sub << "}(D=" << cfg.trunc << ") = " << a.value << " (tail bound "
              << a.tail_bound << ", q = " << cfg.p << ")\n";
    Json j;
    j["schema"] = "ffmoments-constants-v1";
    j["p"] = cfg.p;
    j["r"] = cfg.r;
    j["rt"] = cfg.rt;
    j["D"] = cfg.trunc;
    j["g"] = rational_str(g);
    j["C"] = betti.C().str();
    j["a"] = a.value;
    j["a_tail_bound"] = a.tail_bound;
    j["boundary_reciprocal"] = true;
    emit(cfg, "constants-r" + std::to_string(cfg.r) + "-rt" + std::to_string(cfg.rt), j);
    return 0;
}

void add_common(CLI::App* sub, RunConfig& cfg, bool moments) {
    sub->add_option("--p", cfg.p, "prime field size");
    sub->add_option("--n", cfg.n, "conductor exponent minus one (modulus x^{n+1})");
    if (moments) {
        sub->add_option("--r", cfg.r, "holomorphic factor count");
        sub->add_option("--rt", cfg.rt, "conjugate factor count");
    }
    sub->add_option("--psi-tag", cfg.psi_tag, "additive character choice (1..p-1)");
    sub->add_option("--threads", cfg.threads, "worker threads (0 = all cores)");
    sub->add_option("--budget", cfg.budget_count, "enumeration budget for counting jobs");
    sub->add_option("--family-budget", cfg.budget_family, "character-evaluation budget");
    sub->add_flag("--force", cfg.force, "run past the budget");
    sub->add_option("--out", cfg.out, "output directory for reports");
    sub->add_option("--format", cfg.format, "report format")
        ->check(CLI::IsMember({"json", "csv"}));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact moments of Dirichlet L-functions in short intervals over F_p[T]"};
    app.require_subcommand(1);
    RunConfig cfg;
    int rc = 0;

    auto* fam = app.add_subcommand("family", "build or load the character family");
    add_common(fam, cfg, false);
    fam->callback([&] { rc = cmd_family(cfg); });

    auto* chk = app.add_subcommand("lfun-check", "record invariants, RH roots, monodromy");
    add_common(chk, cfg, false);
    chk->callback([&] { rc = cmd_lfun_check(cfg); });

    auto* mom = app.add_subcommand("moments", "exact moment tensor over the family");
    add_common(mom, cfg, true);
    mom->callback([&] { rc = cmd_moments(cfg); });

    auto* sch = app.add_subcommand("schur", "irreducible decomposition F(V) per sorted weight");
    add_common(sch, cfg, true);
    sch->callback([&] { rc = cmd_schur(cfg); });

    auto* mai = app.add_subcommand("mainterm", "main-term coefficient tables per subset");
    add_common(mai, cfg, true);
    mai->add_option("--subset", cfg.subset, "emit one subset, e.g. 0,2");
    mai->add_flag("--all-subsets", cfg.all_subsets, "emit every subset, not just |S| = r");
    mai->add_option("--window", cfg.window, "box radius (default n-1)");
    mai->callback([&] { rc = cmd_mainterm(cfg); });

    auto* ver = app.add_subcommand("verify-matched", "exact matched-region identity check");
    add_common(ver, cfg, true);
    ver->callback([&] { rc = cmd_verify_matched(cfg); });

    auto* hyp = app.add_subcommand("hypothesis", "minor-arc cancellation report");
    add_common(hyp, cfg, true);
    hyp->callback([&] { rc = cmd_hypothesis(cfg); });

    auto* cmp = app.add_subcommand("compare", "family moment vs truncated ratio side at shifts");
    add_common(cmp, cfg, true);
    cmp->add_option("--shift", cfg.shifts, "imaginary parts t_j of the shifts (repeat r+rt times)");
    cmp->add_flag("--real-shift", cfg.real_shift,
                  "treat shifts as real (exploratory; excluded from assertions)");
    cmp->callback([&] { rc = cmd_compare(cfg); });

    auto* ptc = app.add_subcommand("pointcount", "truncated-product variety point counts");
    add_common(ptc, cfg, false);
    ptc->add_option("--m1", cfg.m1, "left tuple length");
    ptc->add_option("--m2", cfg.m2, "right tuple length");
    ptc->callback([&] { rc = cmd_pointcount(cfg); });

    auto* klo = app.add_subcommand("kloosterman", "complete-sum modulus identity at empirical m");
    add_common(klo, cfg, false);
    klo->callback([&] { rc = cmd_kloosterman(cfg); });

    auto* con = app.add_subcommand("constants", "leading-term constants g, C, a");
    con->add_option("--p", cfg.p, "prime (for the arithmetic factor)");
    con->add_option("--r", cfg.r, "holomorphic factor count");
    con->add_option("--rt", cfg.rt, "conjugate factor count");
    con->add_option("-D,--trunc", cfg.trunc, "Euler truncation degree");
    con->add_option("--out", cfg.out, "output directory for reports");
    con->callback([&] { rc = cmd_constants(cfg); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ffm::BudgetError& e) {
        std::cerr << "budget refusal: " << e.what() << " (estimate " << e.estimate()
                  << "; pass --force to run anyway)\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return rc;
}
