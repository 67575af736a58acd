#pragma once

#include <complex>
#include <string>
#include <vector>

#include "json.hpp"

#include "ffm/harness.hpp"
#include "ffm/lfam.hpp"
#include "ffm/mainterm.hpp"
#include "ffm/tensor.hpp"

namespace ffm {

using Json = nlohmann::ordered_json;

/// FFMOMENTS_CACHE_DIR, or "" when unset.
std::string cache_dir_from_env();
std::string family_cache_path(const std::string& dir, uint32_t p, uint32_t n, uint32_t psi_tag);

/// Cache schema "ffmoments-cache-v1": parameters plus per-record b-vector and
/// exact power-basis coefficient rows for each c_d.
Json family_to_cache_json(const FamilyData& fam);
FamilyData family_from_cache_json(const Json& j);

/// Reads the cache when present, builds (and writes back) otherwise. An empty
/// cache_dir falls back to the environment; "" after that disables caching.
FamilyData load_or_build_family(uint32_t p, uint32_t n, uint32_t psi_tag = 1,
                                unsigned threads = 0, double budget = 1e9, bool force = false,
                                std::string cache_dir = "");

/// Creates parent directories as needed.
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

Json half_power_to_json(const HalfPowerScalar& v);
Json tensor_to_json(const LaurentTensor& t);

/// One row of a coefficient table: degree tuple, subset label, exact count
/// (empty when not applicable), and the value split as half exponent plus
/// embedded real/imaginary parts.
struct CoefficientRow {
    std::vector<int> d;
    std::string subset;
    std::string count;
    int64_t half_exp = 0;
    double re = 0, im = 0;
};

/// Columns d_1..d_k, S, count, half_exp, value_re, value_im.
std::string coefficient_csv(uint32_t k, const std::vector<CoefficientRow>& rows);

Json family_summary_json(const FamilyData& fam, const RecordDiagnostics& diag);
Json monodromy_json(const FamilyData& fam, const MonodromyReport& mono);
Json matched_report_json(const MatchedRegionReport& rep);
std::string matched_report_csv(const MatchedRegionReport& rep);
Json hypothesis_json(const HypothesisReport& rep);
std::string hypothesis_csv(const HypothesisReport& rep);
Json comparison_json(const MomentComparison& cmp, uint32_t p, uint32_t n, uint32_t r,
                     uint32_t rt, const std::vector<std::complex<double>>& alphas);
Json pointcount_json(const PointCountResult& res, uint32_t p, uint32_t n, uint32_t m1,
                     uint32_t m2);
Json kloosterman_json(const KloostermanResult& res, uint32_t p, uint32_t n);

}  // namespace ffm
