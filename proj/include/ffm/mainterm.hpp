#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ffm/cyclo.hpp"
#include "ffm/schur.hpp"
#include "ffm/tensor.hpp"

namespace ffm {

using BigRational = boost::multiprecision::cpp_rational;

/// A subset of the tensor slots {0, ..., arity-1}. Slots in the subset carry
/// the positive shift exponent in the ratio sum; slots outside carry the
/// negative one and receive the q^{alpha (n-1)} prefactor.
struct SlotSubset {
    uint32_t arity;
    std::vector<uint32_t> members;  // strictly increasing

    SlotSubset(uint32_t arity, std::vector<uint32_t> members);
    bool contains(uint32_t slot) const;
    std::vector<uint32_t> complement() const;
    uint32_t size() const { return static_cast<uint32_t>(members.size()); }
    std::string to_string() const;  // e.g. "{0,2}"
};

/// Exact count of tuples of monic polynomials over F_p with the prescribed
/// per-slot degrees whose subset-ratio prod_{i in S} f_i / prod_{j not in S} f_j
/// is a power of T. Ground truth by enumeration: all slots but one are
/// enumerated and the last is solved for by exact division. The enumeration
/// cost p^{sum of enumerated degrees} is refused above `budget` unless forced.
BigInt count_ratio_tuples(uint32_t p, const SlotSubset& S, const std::vector<int>& degrees,
                          double budget = 1e7, bool force = false);

/// Same count via T-adic valuation convolution, valid whenever one side of the
/// partition has at most one slot (the single polynomial is determined by the
/// rest, which are constrained only through their total T-valuation).
/// Throws invalid_argument when both sides have two or more slots.
BigInt count_ratio_tuples_closed(uint32_t p, const SlotSubset& S, const std::vector<int>& degrees);

/// Memoized count lookup for a fixed subset. Mode `brute` is the enumeration
/// ground truth (budget-guarded); `closed` is the valuation route.
class CountTable {
  public:
    enum class Mode { brute, closed };

    CountTable(uint32_t p, SlotSubset S, Mode mode = Mode::brute, double budget = 1e7);
    uint32_t p() const { return p_; }
    const SlotSubset& subset() const { return S_; }
    const BigInt& count(const std::vector<int>& degrees);

  private:
    uint32_t p_;
    SlotSubset S_;
    Mode mode_;
    double budget_;
    std::map<std::vector<int>, BigInt> memo_;
};

/// Coefficient of prod_i x_i^{d_i} in the subset ratio sum with the
/// Vandermonde prod_{i<j} (x_i - x_j) multiplied in. The underlying series
/// coefficient at exponent w is count(degrees) * q^{-sum |w_i| / 2} and is
/// supported on w_i >= 0 for slots in S, w_i <= 0 outside; the convolution
/// shifts by sigma(i)-1 with the permutation sign. Exponents d may be any
/// integers; entries off the support are exact zeros. Antisymmetric under
/// exchanging two slots on the same side of the partition.
HalfPowerScalar ms_coefficient(const std::shared_ptr<const CycloField>& fld, CountTable& counts,
                               const std::vector<int>& dvec);

/// The matched-region predicate: with A = sum_{i in S} d_i - C(|S|,2) and
/// B = sum_{i not in S} (n-1-d_i) + C(k,2) - C(|S|,2), both A and B must lie
/// in [0, n-1]. Where this holds, the moment-side and ratio-side tensors
/// agree exactly coefficient by coefficient.
bool matched_predicate(const std::vector<int>& d, const SlotSubset& S, uint32_t n);

/// Strictly increasing exponent tuples 0 <= d_1 < ... < d_k <= n+k-2,
/// the comparison window for the matched-region identity.
std::vector<std::vector<int>> window_tuples(uint32_t n, uint32_t k);

/// All subsets S of {0..r+rt-1} with |S| = r (mod m), ordered by size then
/// lexicographically; these are the terms appearing on the ratio side.
std::vector<SlotSubset> admissible_subsets(uint32_t r, uint32_t rt, uint32_t m);

/// Coefficient of prod x_i^{d_i} in the single-subset ratio-side term
///   (p^n - p^{n-1}) mu^{(r-|S|)/m} prod_{i not in S} x_i^{n-1} M_S.
/// The prefactor shift moves the lookup to d - (n-1) on slots outside S.
HalfPowerScalar r_s_coefficient(const std::shared_ptr<const CycloField>& fld, CountTable& counts,
                                uint32_t n, uint32_t r, uint32_t m, const HalfPowerScalar& mu,
                                const std::vector<int>& dvec);

/// Full ratio-side tensor on the comparison window: sum of r_s_coefficient
/// over all admissible subsets at every window tuple.
LaurentTensor r_tensor(const std::shared_ptr<const CycloField>& fld, uint32_t p, uint32_t n,
                       uint32_t r, uint32_t rt, uint32_t m, const HalfPowerScalar& mu,
                       CountTable::Mode mode = CountTable::Mode::brute, double budget = 1e7);

/// Exact element of Z[sqrt(q)] with rational coordinates: value a + b sqrt(q).
struct QSqrt {
    BigRational a;
    BigRational b;

    bool operator==(const QSqrt& o) const { return a == o.a && b == o.b; }
};
QSqrt qs_add(const QSqrt& x, const QSqrt& y);
QSqrt qs_mul(const QSqrt& x, const QSqrt& y, uint32_t q);
QSqrt qs_scale(const QSqrt& x, const BigRational& c);
/// N * q^{half/2} as an exact QSqrt (half may be negative).
QSqrt qs_half_power(const BigInt& n, int64_t half, uint32_t q);
double qs_to_double(const QSqrt& x, uint32_t q);

/// Exact Laurent expansion of one |S|=2 term of the four-slot ratio sum
/// (no Vandermonde, no prefactors), over the cone of its support, for all
/// monomials with sum_i |d_i| <= radius. Keys are exponent 4-tuples.
std::map<std::vector<int>, QSqrt> fourth_moment_series(uint32_t p, const SlotSubset& S,
                                                       int radius);

/// Numeric evaluation of one |S|=2 term at unit-modulus points x_1..x_4:
///   (1 - X/q) / (1 - X/q^2) *
///   prod_{i in S} 1/(1 - x_i/sqrt(q)) * prod_{j notin S} 1/(1 - 1/(x_j sqrt(q))) *
///   prod_{i in S, j notin S} (1 - x_i/(q x_j)) / (1 - x_i/x_j)
/// with X = prod_{i in S} x_i / prod_{j notin S} x_j. Throws domain_error
/// naming the factor when a denominator is within 1e-9 of zero.
std::complex<double> fourth_moment_s_term(const std::array<std::complex<double>, 4>& x,
                                          const SlotSubset& S, uint32_t q);

/// The six-term |S|=2 sum of fourth_moment_s_term.
std::complex<double> fourth_moment_closed_form(const std::array<std::complex<double>, 4>& x,
                                               uint32_t q);

/// Closed form of the one-conjugate main term (r slots plus one dual slot),
/// normalized by family size and Vandermonde:
///   sum_j q^{sign * alpha_j (n-1)} / (1 - q^{-1/2 - alpha_j}) *
///   prod_{i != j} (1 - q^{-1 + alpha_i - alpha_j}) /
///                 ((1 - q^{-1/2 + alpha_i}) (1 - q^{alpha_i - alpha_j}))
/// over j = 0..r. The prefactor exponent sign is parameterized because the
/// two source displays disagree; +1 is the convention under which the
/// matched-region identity holds and is the default.
std::complex<double> first_moment_closed_form(const std::vector<std::complex<double>>& alphas,
                                              uint32_t q, uint32_t n, int prefactor_sign = +1);

/// Numeric evaluation of the same quantity from the coefficient side: each
/// singleton-complement subset term is summed as a Vandermonde-convolved
/// coefficient series over an adaptive box (entries decay geometrically away
/// from the support spine), then divided by the numeric Vandermonde. Family
/// size is left out on both routes.
struct MainTermEval {
    std::complex<double> value;
    int radius;            // box radius that met the tail target
    double last_shell;     // absolute sum of the final shell (tail monitor)
};
MainTermEval first_moment_tensor_eval(uint32_t p, uint32_t n, uint32_t r,
                                      const std::vector<std::complex<double>>& alphas);

/// Partial Euler product for the arithmetic constant: the boundary factor at
/// the distinguished linear prime times factors over monic irreducibles of
/// degree <= D. The inner sum per prime is sum_e C(e+r-1,r-1) C(e+rt-1,rt-1)
/// |pi|^{-e}. The boundary factor enters as
///   (1-q^{-1})^{r rt} / (1-q^{-1/2})^{r+rt}   (boundary_reciprocal = true)
/// which is the convention fixed by the leading-coefficient cross-check; the
/// alternate sign of the exponent is kept available because the source
/// display uses it. tail_bound = 4^{r rt + r + rt} q^{-(D+1)}.
struct ArithmeticFactor {
    double value;
    double tail_bound;
    double boundary_factor;
};
ArithmeticFactor arithmetic_factor(uint32_t p, uint32_t r, uint32_t rt, uint32_t D,
                                   bool boundary_reciprocal = true);

/// (r rt)! prod_{j=0}^{r-1} j! / (j+rt)! as an exact rational.
BigRational rm_factor(uint32_t r, uint32_t rt);

/// Weyl dimension of the GL_{r+rt} weight (0 repeated r times, n-1 repeated
/// rt times): the alpha = 0 value of weyl_sum_mainterm.
BigInt weyl_dimension(uint32_t n, uint32_t r, uint32_t rt);

/// sum_{|S|=r} prod_{i notin S} q^{alpha_i (n-1)} /
///             prod_{i1 in S, i2 notin S} (1 - q^{alpha_{i1} - alpha_{i2}}).
/// Numeric; requires distinct alphas unless all are exactly zero, in which
/// case the exact Weyl dimension is returned.
std::complex<double> weyl_sum_mainterm(const std::vector<std::complex<double>>& alphas,
                                       uint32_t q, uint32_t n, uint32_t r, uint32_t rt);

/// Polynomial extrapolation of f(t) to t = 0 through the Neville table at
/// nodes t0 / 2^j, j = 0..levels-1.
std::complex<double> richardson_limit(const std::function<std::complex<double>(double)>& f,
                                      double t0, uint32_t levels);

/// Range-checked conversion for serialization and scalar construction.
Int128 bigint_to_int128(const BigInt& v);

}  // namespace ffm
