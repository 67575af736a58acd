#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <vector>

#include "ffm/schur.hpp"

using namespace ffm;

namespace {

const FamilyData& fam34() {
    static FamilyData f = build_family(3, 4);
    return f;
}

/// Weights of wedge^e(C^2) as GL_2 weights.
std::vector<std::array<int, 2>> wedge2_weights(int e) {
    if (e == 0) return {{0, 0}};
    if (e == 1) return {{1, 0}, {0, 1}};
    return {{1, 1}};
}

}  // namespace

TEST_CASE("weight labels: validation, shifting, degree sums") {
    HighestWeight w({1, 1}, 1, 1, 4);
    CHECK(w.arity() == 2);
    CHECK(w.degree_sum() == 2);
    CHECK(w.shifted() == std::vector<int>{1, 2});
    CHECK_THROWS_AS(HighestWeight({2, 1}, 1, 1, 4), std::invalid_argument);
    CHECK_THROWS_AS(HighestWeight({0, 4}, 1, 1, 4), std::invalid_argument);
    CHECK_THROWS_AS(HighestWeight({0}, 1, 1, 4), std::invalid_argument);
}

TEST_CASE("sorted weight enumeration is complete and ordered") {
    auto w41 = enumerate_sorted_weights(4, 1, 1);
    CHECK(w41.size() == 10);  // multisets of size 2 from {0..3}
    auto w31 = enumerate_sorted_weights(3, 1, 1);
    CHECK(w31.size() == 6);
    for (size_t i = 0; i + 1 < w41.size(); ++i) CHECK(w41[i].d < w41[i + 1].d);
    for (const auto& w : w41) {
        CHECK(w.d.front() >= 0);
        CHECK(w.d.back() <= 3);
        CHECK(w.d[0] <= w.d[1]);
    }
}

TEST_CASE("wedge expansion of a weight keeps in-range terms with signs") {
    HighestWeight w({1, 1}, 1, 1, 4);
    auto terms = jacobi_trudi_terms(w);
    std::sort(terms.begin(), terms.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });
    REQUIRE(terms.size() == 2);
    CHECK(terms[0] == std::pair<int, std::vector<int>>{-1, {0, 2}});
    CHECK(terms[1] == std::pair<int, std::vector<int>>{1, {1, 1}});
}

TEST_CASE("determinantal and alternating routes agree up to the fixed sign") {
    // For T = vandermonde * M: T at the shifted exponents equals
    // (-1)^{C(k,2) + sum d} F(V_w), for every weight at both arities.
    for (auto [r, rt] : {std::pair<uint32_t, uint32_t>{1, 1}, {2, 1}}) {
        LaurentTensor M = moment_tensor(fam34(), r, rt);
        LaurentTensor T = vandermonde_multiply(M);
        uint32_t k = r + rt;
        int checked = 0;
        for (const auto& w : enumerate_sorted_weights(4, r, rt)) {
            HalfPowerScalar f = F_of_irreducible(M, w);
            int64_t s = static_cast<int64_t>(k) * (k - 1) / 2 + w.degree_sum();
            HalfPowerScalar expect = (s % 2 == 0) ? f : -f;
            CHECK(T.at(w.shifted()) == expect);
            ++checked;
        }
        CHECK(checked == (k == 2 ? 10 : 20));
    }
}

TEST_CASE("family sums of numeric traces match the exact route") {
    LaurentTensor M = moment_tensor(fam34(), 1, 1);
    for (const auto& w : enumerate_sorted_weights(4, 1, 1)) {
        std::complex<double> num(0.0, 0.0);
        for (const auto& rec : fam34().records) num += schur_at_zeros(rec, w, 3);
        std::complex<double> exact = F_of_irreducible(M, w).embed();
        double scale = std::max(1.0, std::abs(exact));
        CHECK(std::abs(num - exact) <= 1e-6 * scale);
    }
}

TEST_CASE("multiplicities against a brute-force character decomposition") {
    CHECK(multiplicity(HighestWeight({0, 0}, 1, 1, 4)) == BigInt(1));
    CHECK(multiplicity(HighestWeight({0, 2}, 1, 1, 4)) == BigInt(3));
    for (const auto& w : enumerate_sorted_weights(4, 2, 1)) CHECK(multiplicity(w) >= 1);

    // n = 3: decompose the full twisted wedge-pair sum over GL_2 by greedy
    // highest-weight peeling and compare each label's multiplicity
    using W2 = std::array<int, 2>;
    std::map<W2, int> weights;
    for (int e1 = 0; e1 <= 2; ++e1)
        for (int e2 = 0; e2 <= 2; ++e2)
            for (const W2& a : wedge2_weights(e1))
                for (const W2& b : wedge2_weights(2 - e2))  // dual slot, det^{-1} twist
                    ++weights[{a[0] + b[0] - 1, a[1] + b[1] - 1}];

    std::map<W2, int> irreps;
    while (!weights.empty()) {
        W2 top = weights.rbegin()->first;
        REQUIRE(top[0] >= top[1]);
        ++irreps[top];
        for (int j = 0; j <= top[0] - top[1]; ++j) {
            W2 mu = {top[0] - j, top[1] + j};
            auto it = weights.find(mu);
            REQUIRE(it != weights.end());
            if (--it->second == 0) weights.erase(it);
        }
    }

    int total_dim = 0;
    for (const auto& [hw, c] : irreps) total_dim += c * (hw[0] - hw[1] + 1);
    CHECK(total_dim == 16);

    for (const auto& w : enumerate_sorted_weights(3, 1, 1)) {
        // transpose the reversed label, then shift by the twist
        int a = (w.d[0] >= 1 ? 1 : 0) + (w.d[1] >= 1 ? 1 : 0);
        int b = (w.d[0] >= 2 ? 1 : 0) + (w.d[1] >= 2 ? 1 : 0);
        W2 mu = {a - 1, b - 1};
        auto it = irreps.find(mu);
        REQUIRE(it != irreps.end());
        CHECK(BigInt(it->second) == multiplicity(w));
    }
}

TEST_CASE("range classification of weights") {
    CHECK(is_major_arc(HighestWeight({0, 0, 0}, 2, 1, 4), 18));
    CHECK(is_major_arc(HighestWeight({2, 2}, 1, 1, 4), 18));
    CHECK(is_major_arc(HighestWeight({0, 3}, 1, 1, 4), 3));
    CHECK_THROWS_AS(is_major_arc(HighestWeight({0, 0}, 1, 1, 4), 0), std::invalid_argument);

    int minor = 0;
    for (const auto& w : enumerate_sorted_weights(4, 2, 1))
        if (!is_major_arc(w, 18)) ++minor;
    CHECK(minor == 5);

    // every weight is in range when a lone plain slot is admissible
    for (const auto& w : enumerate_sorted_weights(4, 1, 1)) CHECK(is_major_arc(w, 18));
}

TEST_CASE("cohomology budget constants") {
    BettiBudget b11(4, 1, 1);
    CHECK(b11.C() == BigInt(9));
    CHECK(b11.bound({0, 0}) == BigInt(324));
    BettiBudget b22(4, 2, 2);
    CHECK(b22.C() == BigInt(64));
    CHECK(b11.error_reference(3.0, 2.0) < b11.error_reference(3.0, 4.0));
}
