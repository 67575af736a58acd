#include "ffm/json_io.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace ffm {

namespace {

std::string fmt_double(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

Json complex_json(std::complex<double> z) { return Json::array({z.real(), z.imag()}); }

void append_tuple(std::ostringstream& os, const std::vector<int>& d) {
    for (int v : d) os << v << ",";
}

void require(bool ok, const std::string& what) {
    if (!ok) throw std::runtime_error("cache parse: " + what);
}

}  // namespace

std::string cache_dir_from_env() {
    const char* v = std::getenv("FFMOMENTS_CACHE_DIR");
    return v ? std::string(v) : std::string();
}

std::string family_cache_path(const std::string& dir, uint32_t p, uint32_t n, uint32_t psi_tag) {
    std::ostringstream os;
    os << dir << "/family-p" << p << "-n" << n << "-psi" << psi_tag << ".json";
    return os.str();
}

Json family_to_cache_json(const FamilyData& fam) {
    Json j;
    j["schema"] = "ffmoments-cache-v1";
    j["p"] = fam.p;
    j["n"] = fam.n;
    j["psi_tag"] = fam.psi_tag;
    j["created"] = fam.created;
    j["size"] = fam.records.size();
    Json recs = Json::array();
    for (const LFunctionRecord& rec : fam.records) {
        Json r;
        r["b"] = rec.b;
        Json cs = Json::array();
        for (const CycloScalar& c : rec.c) {
            Json row = Json::array();
            for (Int128 a : c.coeffs()) row.push_back(int128_to_int64(a));
            cs.push_back(std::move(row));
        }
        r["c"] = std::move(cs);
        recs.push_back(std::move(r));
    }
    j["records"] = std::move(recs);
    return j;
}

FamilyData family_from_cache_json(const Json& j) {
    require(j.value("schema", "") == "ffmoments-cache-v1", "unknown schema");
    FamilyData fam;
    fam.p = j.at("p").get<uint32_t>();
    fam.n = j.at("n").get<uint32_t>();
    fam.psi_tag = j.at("psi_tag").get<uint32_t>();
    fam.created = j.value("created", "");
    const auto fld = fam.field();
    const auto& recs = j.at("records");
    require(recs.is_array() && recs.size() == fam.expected_size(), "wrong record count");
    for (const auto& r : recs) {
        LFunctionRecord rec;
        rec.b = r.at("b").get<std::vector<uint32_t>>();
        require(rec.b.size() == fam.n, "wrong b length");
        const auto& cs = r.at("c");
        require(cs.is_array() && cs.size() == fam.n, "wrong coefficient count");
        for (const auto& row : cs) {
            require(row.is_array() && row.size() == fld->phi(), "wrong basis length");
            CycloScalar c(fld);
            for (size_t t = 0; t < row.size(); ++t) {
                const int64_t w = row[t].get<int64_t>();
                if (w != 0) c.add_root(t, w);
            }
            rec.c.push_back(std::move(c));
        }
        fam.records.push_back(std::move(rec));
    }
    return fam;
}

FamilyData load_or_build_family(uint32_t p, uint32_t n, uint32_t psi_tag, unsigned threads,
                                double budget, bool force, std::string cache_dir) {
    if (cache_dir.empty()) cache_dir = cache_dir_from_env();
    std::string path;
    if (!cache_dir.empty()) {
        path = family_cache_path(cache_dir, p, n, psi_tag);
        if (std::filesystem::exists(path))
            return family_from_cache_json(Json::parse(read_text_file(path)));
    }
    FamilyData fam = build_family(p, n, psi_tag, threads, budget, force);
    if (!path.empty()) write_text_file(path, family_to_cache_json(fam).dump(2) + "\n");
    return fam;
}

void write_text_file(const std::string& path, const std::string& text) {
    const std::filesystem::path fp(path);
    if (fp.has_parent_path()) std::filesystem::create_directories(fp.parent_path());
    std::ofstream os(fp, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    os << text;
    if (!os) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open: " + path);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

Json half_power_to_json(const HalfPowerScalar& v) {
    Json j;
    j["half_exp"] = v.half_exponent();
    Json coeffs = Json::array();
    for (Int128 a : v.value().coeffs()) coeffs.push_back(int128_to_int64(a));
    j["zeta_coeffs"] = std::move(coeffs);
    j["value"] = complex_json(v.embed());
    return j;
}

Json tensor_to_json(const LaurentTensor& t) {
    Json j;
    j["schema"] = "ffmoments-tensor-v1";
    j["arity"] = t.arity();
    Json entries = Json::array();
    for (const auto& [d, v] : t.entries()) {
        Json e;
        e["d"] = d;
        e["half_exp"] = v.half_exponent();
        Json coeffs = Json::array();
        for (Int128 a : v.value().coeffs()) coeffs.push_back(int128_to_int64(a));
        e["zeta_coeffs"] = std::move(coeffs);
        e["value"] = complex_json(v.embed());
        entries.push_back(std::move(e));
    }
    j["entries"] = std::move(entries);
    return j;
}

std::string coefficient_csv(uint32_t k, const std::vector<CoefficientRow>& rows) {
    std::ostringstream os;
    for (uint32_t i = 1; i <= k; ++i) os << "d_" << i << ",";
    os << "S,count,half_exp,value_re,value_im\n";
    for (const CoefficientRow& row : rows) {
        append_tuple(os, row.d);
        os << "\"" << row.subset << "\"," << row.count << "," << row.half_exp << ","
           << fmt_double(row.re) << "," << fmt_double(row.im) << "\n";
    }
    return os.str();
}

Json family_summary_json(const FamilyData& fam, const RecordDiagnostics& diag) {
    Json j;
    j["schema"] = "ffmoments-family-v1";
    j["p"] = fam.p;
    j["n"] = fam.n;
    j["psi_tag"] = fam.psi_tag;
    j["family_size"] = fam.records.size();
    j["expected_size"] = fam.expected_size();
    j["exact_invariants"] = true;  // check_family throws otherwise
    j["max_root_deviation"] = diag.max_root_deviation;
    return j;
}

Json monodromy_json(const FamilyData& fam, const MonodromyReport& mono) {
    Json j;
    j["schema"] = "ffmoments-monodromy-v1";
    j["p"] = fam.p;
    j["n"] = fam.n;
    j["found"] = mono.found;
    j["m"] = mono.m;
    if (mono.found) {
        j["mu_raw"] = half_power_to_json(mono.mu_raw);
        j["mu_signed"] = half_power_to_json(mono.mu_signed);
    }
    j["p_power_floor"] = mono.p_power_floor;
    j["floor_divides"] = mono.floor_divides;
    j["note"] = mono.note;
    return j;
}

Json matched_report_json(const MatchedRegionReport& rep) {
    Json j;
    j["schema"] = "ffmoments-verify-matched-v1";
    j["p"] = rep.p;
    j["n"] = rep.n;
    j["r"] = rep.r;
    j["rt"] = rep.rt;
    j["m"] = rep.m;
    j["convention"] = kSubsetConventionNote;
    j["window_size"] = rep.window_size;
    j["subset_count"] = rep.subset_count;
    j["matched_pairs"] = rep.matched_pairs;
    j["equal_pairs"] = rep.equal_pairs;
    j["tail_pairs"] = rep.tail_pairs;
    j["tuples_unmatched"] = rep.tuples_unmatched;
    j["tuples_unique"] = rep.tuples_unique;
    j["tuples_multiple"] = rep.tuples_multiple;
    j["all_matched_equal"] = rep.all_matched_equal;
    Json rows = Json::array();
    for (const MatchedPairRow& row : rep.rows) {
        Json r;
        r["d"] = row.d;
        r["S"] = row.subset;
        r["matched"] = row.matched;
        r["equal"] = row.equal;
        r["r_nonzero"] = row.r_nonzero;
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    return j;
}

std::string matched_report_csv(const MatchedRegionReport& rep) {
    std::ostringstream os;
    for (uint32_t i = 1; i <= rep.r + rep.rt; ++i) os << "d_" << i << ",";
    os << "S,matched,equal,r_nonzero\n";
    for (const MatchedPairRow& row : rep.rows) {
        append_tuple(os, row.d);
        os << "\"" << row.subset << "\"," << (row.matched ? 1 : 0) << "," << (row.equal ? 1 : 0)
           << "," << (row.r_nonzero ? 1 : 0) << "\n";
    }
    return os.str();
}

Json hypothesis_json(const HypothesisReport& rep) {
    Json j;
    j["schema"] = "ffmoments-hypothesis-v1";
    j["p"] = rep.p;
    j["n"] = rep.n;
    j["r"] = rep.r;
    j["rt"] = rep.rt;
    j["m"] = rep.m;
    j["minor_count"] = rep.minor_count;
    j["zero_count"] = rep.zero_count;
    j["any_nonzero"] = rep.any_nonzero;
    j["max_omega"] = rep.any_nonzero ? Json(rep.max_omega) : Json(nullptr);
    j["w_duality"] = rep.w_duality;
    j["w_power_savings"] =
        std::isnan(rep.w_power_savings) ? Json(nullptr) : Json(rep.w_power_savings);
    j["escape_hatch"] = rep.escape_hatch;
    Json rows = Json::array();
    for (const WeightRow& row : rep.rows) {
        Json r;
        r["d"] = row.d;
        r["abs_f"] = row.abs_f;
        r["f_zero"] = row.f_zero;
        r["omega"] = row.f_zero ? Json(nullptr) : Json(row.omega);
        r["multiplicity"] = row.multiplicity;
        r["betti_bound"] = row.betti_bound;
        r["cross_rel"] = row.cross_rel;
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    return j;
}

std::string hypothesis_csv(const HypothesisReport& rep) {
    std::ostringstream os;
    for (uint32_t i = 1; i <= rep.r + rep.rt; ++i) os << "d_" << i << ",";
    os << "abs_f,omega,multiplicity,betti_bound,cross_rel\n";
    for (const WeightRow& row : rep.rows) {
        append_tuple(os, row.d);
        os << fmt_double(row.abs_f) << "," << (row.f_zero ? "" : fmt_double(row.omega)) << ","
           << row.multiplicity << "," << fmt_double(row.betti_bound) << ","
           << fmt_double(row.cross_rel) << "\n";
    }
    return os.str();
}

Json comparison_json(const MomentComparison& cmp, uint32_t p, uint32_t n, uint32_t r,
                     uint32_t rt, const std::vector<std::complex<double>>& alphas) {
    Json j;
    j["schema"] = "ffmoments-compare-v1";
    j["p"] = p;
    j["n"] = n;
    j["r"] = r;
    j["rt"] = rt;
    Json sh = Json::array();
    for (auto a : alphas) sh.push_back(complex_json(a));
    j["alphas"] = std::move(sh);
    j["lhs"] = complex_json(cmp.lhs);
    j["rhs"] = complex_json(cmp.rhs);
    j["abs_diff"] = cmp.abs_diff;
    j["reconstruction_gap"] = cmp.reconstruction_gap;
    j["support_violations"] = cmp.support_violations;
    j["window_size"] = cmp.window_size;
    j["tail_pairs"] = cmp.tail_pairs;
    j["budget_duality"] = cmp.budget_duality;
    j["budget_power_savings"] =
        std::isnan(cmp.budget_power_savings) ? Json(nullptr) : Json(cmp.budget_power_savings);
    return j;
}

Json pointcount_json(const PointCountResult& res, uint32_t p, uint32_t n, uint32_t m1,
                     uint32_t m2) {
    Json j;
    j["schema"] = "ffmoments-pointcount-v1";
    j["p"] = p;
    j["n"] = n;
    j["m1"] = m1;
    j["m2"] = m2;
    j["brute"] = res.brute.str();
    j["fourier"] = res.fourier.str();
    j["equal"] = res.equal;
    return j;
}

Json kloosterman_json(const KloostermanResult& res, uint32_t p, uint32_t n) {
    Json j;
    j["schema"] = "ffmoments-kloosterman-v1";
    j["p"] = p;
    j["n"] = n;
    j["m"] = res.m;
    j["lhs"] = res.lhs;
    j["modulus_ok"] = res.modulus_ok;
    j["mu_matched"] = res.mu_matched;
    j["match_form"] = res.match_form;
    j["control_breaks"] = res.control_breaks;
    j["budget_estimate"] = res.budget_estimate;
    return j;
}

}  // namespace ffm
