#pragma once

#include <string>
#include <vector>

#include "ffm/character.hpp"
#include "ffm/cyclo.hpp"
#include "ffm/tensor.hpp"

namespace ffm {

/// One L-function of the family: the parameter point b and the exact
/// coefficients c_d = sum over monic f of degree d of chi(f), for d < n.
/// The normalized coefficients are lambda_d = c_d q^{-d/2} and the root
/// number is epsilon = lambda_{n-1}.
struct LFunctionRecord {
    std::vector<uint32_t> b;
    std::vector<CycloScalar> c;

    HalfPowerScalar epsilon() const {
        return HalfPowerScalar(c.back(), -static_cast<int64_t>(c.size() - 1));
    }
};

/// The full family for one (p, n, psi_tag): all p^n - p^{n-1} primitive
/// points in lexicographic b-order with their exact L-coefficients.
struct FamilyData {
    uint32_t p = 0;
    uint32_t n = 0;
    uint32_t psi_tag = 1;
    std::string created;  // ISO-8601 UTC build time
    std::vector<LFunctionRecord> records;

    CharacterContext context() const { return CharacterContext(p, n, psi_tag); }
    std::shared_ptr<const CycloField> field() const;
    size_t expected_size() const;
};

/// Character evaluations needed to build the family: one per (record, monic
/// of degree < n). The CLI refuses above `budget` unless forced.
double build_cost(uint32_t p, uint32_t n);

std::string build_timestamp();

FamilyData build_family(uint32_t p, uint32_t n, uint32_t psi_tag = 1, unsigned threads = 0,
                        double budget = 1e9, bool force = false);

struct RecordDiagnostics {
    double max_root_deviation = 0.0;  // max | |u| - q^{-1/2} | over roots
};

/// Asserts the exact record invariants (c_0 = 1, |c_{n-1}|^2 = q^{n-1},
/// functional equation c_{n-1-d} q^d = c_{n-1} conj(c_d)) and checks all
/// roots of sum c_d u^d lie on |u| = q^{-1/2} within tol. Throws
/// logic_error naming the b-vector on any violation.
RecordDiagnostics check_record(const LFunctionRecord& rec, uint32_t p, uint32_t n,
                               double tol = 1e-9);

/// Runs check_record over the whole family; returns the worst root deviation.
RecordDiagnostics check_family(const FamilyData& fam, double tol = 1e-9);

/// Unnormalized moment tensor: entry at (d_1,...,d_{r+rt}) in [0,n-1]^{r+rt}
/// equals sum over records of epsilon^{-rt} prod_i lambda_{d_i}, stored
/// exactly as [sum conj(c_{n-1})^{rt} prod c_{d_i}] q^{-(rt(n-1)+sum d)/2}.
/// No division by family size and no (-1)^{sum d} sign: sign bookkeeping is
/// owned by the representation layer.
LaurentTensor moment_tensor(const FamilyData& fam, uint32_t r, uint32_t rt,
                            unsigned threads = 0);

struct MonodromyReport {
    bool found = false;
    uint32_t m = 0;                // least m with epsilon^m constant, if found
    HalfPowerScalar mu_raw;        // the common value epsilon^m
    HalfPowerScalar mu_signed;     // (-1)^{m(n-1)} times mu_raw
    uint64_t p_power_floor = 1;    // least power of p with 2 p^j >= n-1
    bool floor_divides = false;    // p_power_floor | m
    std::string note;
};

/// Loops m = 1..m_max testing exact constancy of epsilon^m across records.
MonodromyReport empirical_m_mu(const FamilyData& fam, uint32_t m_max);

}  // namespace ffm
