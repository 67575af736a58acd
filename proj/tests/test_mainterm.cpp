#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <random>
#include <vector>

#include "ffm/budget.hpp"
#include "ffm/mainterm.hpp"

using namespace ffm;
using cplx = std::complex<double>;

namespace {

std::shared_ptr<const CycloField> fld3() { return CycloField::get(3, 1); }

int brute_transport_count(int e1, int e2, int e3, int e4) {
    int count = 0;
    for (int a = 0; a <= e1; ++a)
        for (int c = 0; c <= e2; ++c)
            if (a + c == e3 && (e1 - a) + (e2 - c) == e4) ++count;
    return count;
}

}  // namespace

TEST_CASE("ratio-tuple counts: anchors and closed-form agreement") {
    SlotSubset S(2, {0});
    CHECK(S.to_string() == "{0}");
    CHECK(S.complement() == std::vector<uint32_t>{1});
    CHECK(count_ratio_tuples(3, S, {0, 0}) == BigInt(1));
    CHECK(count_ratio_tuples(3, S, {1, 1}) == BigInt(3));
    CHECK(count_ratio_tuples(5, S, {1, 1}) == BigInt(5));

    SlotSubset S01(4, {0, 1});
    CHECK(count_ratio_tuples(3, S01, {1, 1, 1, 1}) == BigInt(15));
    CHECK(count_ratio_tuples(5, S01, {1, 1, 1, 1}) == BigInt(45));
    CHECK(count_ratio_tuples(3, S01, {2, 1, 1, 2}) == BigInt(45));
    CHECK(count_ratio_tuples(5, S01, {2, 1, 1, 2}) == BigInt(225));

    // valuation route is only defined with a singleton side
    CHECK_THROWS_AS(count_ratio_tuples_closed(3, S01, {1, 1, 1, 1}), std::invalid_argument);
    for (int d0 = 0; d0 <= 3; ++d0)
        for (int d1 = 0; d1 <= 3; ++d1)
            CHECK(count_ratio_tuples_closed(3, S, {d0, d1}) ==
                  count_ratio_tuples(3, S, {d0, d1}));
    SlotSubset S012(4, {0, 1, 2});
    for (std::vector<int> deg : {std::vector<int>{1, 1, 0, 2},
                                 {2, 0, 1, 3},
                                 {0, 0, 0, 0},
                                 {1, 2, 3, 2}})
        CHECK(count_ratio_tuples_closed(3, S012, deg) == count_ratio_tuples(3, S012, deg));
}

TEST_CASE("oversized enumerations refuse with the cost estimate") {
    SlotSubset S(2, {0});
    try {
        count_ratio_tuples(3, S, {12, 12}, 1e3);
        FAIL("expected a budget refusal");
    } catch (const BudgetError& e) {
        CHECK(e.estimate() == doctest::Approx(531441.0));
    }
}

TEST_CASE("memoized tables agree across modes") {
    SlotSubset S(2, {0});
    CountTable brute(3, S), closed(3, S, CountTable::Mode::closed);
    for (int d0 = 0; d0 <= 3; ++d0)
        for (int d1 = 0; d1 <= 3; ++d1) {
            std::vector<int> deg = {d0, d1};
            CHECK(brute.count(deg) == closed.count(deg));
            CHECK(brute.count(deg) == brute.count(deg));
        }
}

TEST_CASE("subset-ratio coefficients: frozen values and the unit example") {
    auto fld = fld3();
    CountTable ct(3, SlotSubset(2, {0}));
    CHECK(ms_coefficient(fld, ct, {0, 0}) == HalfPowerScalar::from_int(fld, -1, -1));
    CHECK(ms_coefficient(fld, ct, {0, -1}) == HalfPowerScalar::from_int(fld, -1, -2));
    CHECK(ms_coefficient(fld, ct, {1, -1}).is_zero());
    CHECK(ms_coefficient(fld, ct, {1, 0}).is_zero());
    CHECK(ms_coefficient(fld, ct, {2, -1}).is_zero());

    // count p at degrees (1,1) scaled by q^{-1} is exactly 1
    CHECK(ct.count({1, 1}) == BigInt(3));
    CHECK(HalfPowerScalar::from_int(fld, 3, -2).embed().real() == doctest::Approx(1.0));
}

TEST_CASE("coefficient support obeys the ordered-exponent criterion") {
    auto fld = fld3();
    CountTable ct(3, SlotSubset(4, {0, 1}));
    int nonzero = 0;
    std::map<std::vector<int>, HalfPowerScalar> seen;
    for (int d0 = -1; d0 <= 3; ++d0)
        for (int d1 = -1; d1 <= 3; ++d1)
            for (int d2 = -3; d2 <= 1; ++d2)
                for (int d3 = -3; d3 <= 1; ++d3) {
                    std::vector<int> d = {d0, d1, d2, d3};
                    HalfPowerScalar v = ms_coefficient(fld, ct, d);
                    seen.emplace(d, v);
                    if (v.is_zero()) continue;
                    ++nonzero;
                    // some ordering of the positive-side slots has
                    // exponents >= 0, 1 in turn
                    int lo = std::min(d0, d1), hi = std::max(d0, d1);
                    CHECK(lo >= 0);
                    CHECK(hi >= 1);
                }
    CHECK(nonzero > 0);
    CHECK(seen.at({1, 2, 0, 1}) == HalfPowerScalar::from_int(fld, 1, -6));
    CHECK(seen.at({2, 1, 0, 1}) == -HalfPowerScalar::from_int(fld, 1, -6));
    // antisymmetry under same-side slot exchange
    for (const auto& [d, v] : seen) {
        auto it = seen.find({d[1], d[0], d[2], d[3]});
        if (it != seen.end()) CHECK(it->second == -v);
        it = seen.find({d[0], d[1], d[3], d[2]});
        if (it != seen.end()) CHECK(it->second == -v);
    }
}

TEST_CASE("matched-region predicate on boundary tuples") {
    SlotSubset S(2, {0});
    CHECK(matched_predicate({3, 4}, S, 4));        // both sums land on the edge
    CHECK_FALSE(matched_predicate({4, 4}, S, 4));  // positive side overflows
    CHECK_FALSE(matched_predicate({3, 5}, S, 4));  // negative side underflows
    CHECK(matched_predicate({0, 1}, SlotSubset(2, {0, 1}), 4));
}

TEST_CASE("comparison windows and admissible subsets") {
    auto w = window_tuples(4, 2);
    CHECK(w.size() == 10);
    CHECK(w.front() == std::vector<int>{0, 1});
    CHECK(w.back() == std::vector<int>{3, 4});
    for (const auto& d : w) CHECK(d[0] < d[1]);
    CHECK(window_tuples(4, 3).size() == 20);

    auto singles = admissible_subsets(1, 1, 18);
    REQUIRE(singles.size() == 2);
    CHECK(singles[0].members == std::vector<uint32_t>{0});
    CHECK(singles[1].members == std::vector<uint32_t>{1});
    auto pairs = admissible_subsets(2, 1, 18);
    REQUIRE(pairs.size() == 3);
    CHECK(pairs[0].members == std::vector<uint32_t>{0, 1});
    CHECK(pairs[1].members == std::vector<uint32_t>{0, 2});
    CHECK(admissible_subsets(1, 0, 9).size() == 1);
    CHECK(admissible_subsets(2, 2, 1).size() == 16);
}

TEST_CASE("single-subset ratio term carries the family prefactor and shift") {
    auto fld = fld3();
    CountTable ct(3, SlotSubset(2, {0}));
    HalfPowerScalar mu = HalfPowerScalar::from_int(fld, 1, 0);
    HalfPowerScalar term = r_s_coefficient(fld, ct, 4, 1, 18, mu, {0, 3});
    CHECK(term == ms_coefficient(fld, ct, {0, 0}).scaled(54));
}

TEST_CASE("transportation count behind the two-pair term") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 60; ++trial) {
        int e1 = static_cast<int>(rng() % 7), e2 = static_cast<int>(rng() % 7);
        int e3 = static_cast<int>(rng() % (e1 + e2 + 1)), e4 = e1 + e2 - e3;
        int expect = std::min(std::min(e1, e2), std::min(e3, e4)) + 1;
        CHECK(brute_transport_count(e1, e2, e3, e4) == expect);
    }
}

TEST_CASE("two-pair term series equals the enumeration counts exactly") {
    SlotSubset S01(4, {0, 1});
    auto series = fourth_moment_series(3, S01, 4);
    CountTable ct(3, S01);
    int checked = 0;
    for (int a = 0; a <= 4; ++a)
        for (int b = 0; b <= 4 - a; ++b)
            for (int c = 0; c <= 4 - a - b; ++c)
                for (int d = 0; d + a + b + c <= 4; ++d) {
                    std::vector<int> key = {a, b, -c, -d};
                    auto it = series.find(key);
                    REQUIRE(it != series.end());
                    QSqrt expect =
                        qs_half_power(ct.count({a, b, c, d}), -(a + b + c + d), 3);
                    CHECK(it->second == expect);
                    ++checked;
                }
    CHECK(checked == 70);  // all cone monomials with |d| summing to <= 4
    // nothing outside the cone
    for (const auto& [key, val] : series) {
        CHECK(key[0] >= 0);
        CHECK(key[1] >= 0);
        CHECK(key[2] <= 0);
        CHECK(key[3] <= 0);
    }
}

TEST_CASE("numeric two-pair sum: symmetry and pole reporting") {
    auto at = [](double t) { return std::polar(1.0, t); };
    std::array<cplx, 4> x = {at(0.3), at(-0.8), at(1.1), at(2.0)};
    std::array<cplx, 4> swapped = {x[1], x[0], x[3], x[2]};
    cplx lhs = fourth_moment_closed_form(x, 3);
    CHECK(std::abs(lhs - fourth_moment_closed_form(swapped, 3)) < 1e-12);

    std::array<cplx, 4> collide = {at(0.3), at(-0.8), at(0.3), at(2.0)};
    CHECK_THROWS_AS(fourth_moment_s_term(collide, SlotSubset(4, {0, 1}), 3),
                    std::domain_error);
}

TEST_CASE("one-conjugate closed form: goldens, symmetry, convention") {
    std::vector<cplx> alphas = {cplx(0, 0.3), cplx(0, -0.45)};
    cplx closed = first_moment_closed_form(alphas, 3, 4);
    cplx golden(6.1878022575900546, -1.5614824417144553);
    CHECK(std::abs(closed - golden) < 1e-12);

    std::vector<cplx> swapped = {alphas[1], alphas[0]};
    CHECK(std::abs(closed - first_moment_closed_form(swapped, 3, 4)) < 1e-12);
    std::vector<cplx> three = {cplx(0, 0.2), cplx(0, -0.35), cplx(0, 0.5)};
    std::vector<cplx> rotated = {three[2], three[0], three[1]};
    CHECK(std::abs(first_moment_closed_form(three, 3, 4) -
                   first_moment_closed_form(rotated, 3, 4)) < 1e-12);

    // the two source sign conventions are far apart; only one matches the
    // coefficient route
    cplx flipped = first_moment_closed_form(alphas, 3, 4, -1);
    CHECK(std::abs(closed - flipped) > 1e-2);
    MainTermEval ev = first_moment_tensor_eval(3, 4, 1, alphas);
    CHECK(std::abs(ev.value - closed) <= 1e-8 * std::abs(closed));
    CHECK(std::abs(ev.value - flipped) > 1e-2);
    CHECK(ev.last_shell < 1e-8);
}

TEST_CASE("closed form stays bounded as the shifts coalesce") {
    auto f = [](double t) {
        return first_moment_closed_form({cplx(0, t), cplx(0, 1.61803398874989 * t)}, 3, 4);
    };
    cplx lim = richardson_limit(f, 1e-2, 5);
    CHECK(std::abs(lim - 8.46410161127971) < 1e-6);
    double err_prev = 1e9;
    for (double t : {1e-2, 1e-3, 1e-4}) {
        cplx v = f(t);
        CHECK(std::abs(v) < 50.0);
        double err = std::abs(v - lim);
        CHECK(err < err_prev);
        err_prev = err;
    }
}

TEST_CASE("polynomial extrapolation recovers exact limits") {
    auto f = [](double t) { return cplx(1.0 + t * t + t * t * t, -2.0 * t); };
    cplx lim = richardson_limit(f, 0.1, 5);
    CHECK(std::abs(lim - cplx(1.0, 0.0)) < 1e-9);
}

TEST_CASE("arithmetic constant: boundary conventions and tail bounds") {
    CHECK(arithmetic_factor(3, 0, 0, 4).value == doctest::Approx(1.0).epsilon(1e-12));

    ArithmeticFactor a8 = arithmetic_factor(3, 1, 1, 8);
    ArithmeticFactor a12 = arithmetic_factor(3, 1, 1, 12);
    CHECK(std::abs(a8.value - a12.value) <= a8.tail_bound);
    CHECK(a8.tail_bound == doctest::Approx(64.0 * std::pow(3.0, -9.0)));

    // at one conjugate pair every non-boundary factor is exactly 1, so the
    // constant collapses to the boundary value (sqrt q + 1)/(sqrt q - 1);
    // the product accumulates ~D*p^D factors, so allow float drift
    double sq = std::sqrt(3.0);
    CHECK(std::abs(a12.value - (sq + 1) / (sq - 1)) < 1e-10);
    CHECK(std::abs(a12.boundary_factor - (1 - 1.0 / 3) / std::pow(1 - 1 / sq, 2)) < 1e-12);

    ArithmeticFactor flip = arithmetic_factor(3, 1, 1, 12, /*boundary_reciprocal=*/false);
    CHECK(std::abs(flip.boundary_factor - (1 - 1.0 / 3) * std::pow(1 - 1 / sq, 2)) < 1e-12);

    ArithmeticFactor a22 = arithmetic_factor(3, 2, 2, 10);
    CHECK(a22.value == doctest::Approx(4.64274).epsilon(1e-4));
    CHECK(a22.tail_bound == doctest::Approx(std::pow(4.0, 8) * std::pow(3.0, -11.0)));
}

TEST_CASE("combinatorial main-term constants") {
    CHECK(rm_factor(1, 1) == BigRational(1));
    CHECK(rm_factor(2, 2) == BigRational(2));
    CHECK(rm_factor(2, 1) == BigRational(1));
    CHECK(rm_factor(3, 0) == BigRational(1));

    for (uint32_t n = 3; n <= 8; ++n) {
        CHECK(weyl_dimension(n, 1, 1) == BigInt(n));
        CHECK(weyl_dimension(n, 2, 1) == BigInt(n * (n + 1) / 2));
    }
}

TEST_CASE("subset sum over shifts recovers the dimension as shifts shrink") {
    CHECK(std::abs(weyl_sum_mainterm({cplx(0, 0), cplx(0, 0)}, 3, 5, 1, 1) - 5.0) < 1e-15);
    double err_prev = 1e9;
    for (double t : {1e-2, 5e-3, 2.5e-3}) {
        cplx v = weyl_sum_mainterm({cplx(0, t), cplx(0, 2.3 * t)}, 3, 5, 1, 1);
        double err = std::abs(v - 5.0);
        CHECK(err < err_prev);
        err_prev = err;
    }
}
