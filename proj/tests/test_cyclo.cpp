#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "ffm/cyclo.hpp"
#include "ffm/tensor.hpp"

using namespace ffm;

namespace {

CycloScalar random_scalar(std::mt19937_64& rng, const std::shared_ptr<const CycloField>& fld,
                          int spread = 20) {
    CycloScalar s(fld);
    for (uint32_t i = 0; i < fld->phi(); ++i)
        s.add_root(i, static_cast<Int128>(rng() % (2 * spread + 1)) - spread);
    return s;
}

}  // namespace

TEST_CASE("power-basis reduction at the cyclotomic relation") {
    auto fld = CycloField::get(3, 1);  // Z[zeta_3], phi = 2
    CHECK(fld->phi() == 2);
    // zeta^2 = -1 - zeta
    CycloScalar z2 = CycloScalar::zeta_power(fld, 2);
    CycloScalar expect(fld);
    expect.add_root(0, -1);
    expect.add_root(1, -1);
    CHECK(z2 == expect);
    // (1 + zeta)(1 + zeta^2) = 1
    CycloScalar a = CycloScalar::from_int(fld, 1) + CycloScalar::zeta_power(fld, 1);
    CycloScalar b = CycloScalar::from_int(fld, 1) + z2;
    CHECK((a * b).as_integer() == Int128(1));
    // identity element
    std::mt19937_64 rng(3);
    CycloScalar r = random_scalar(rng, fld);
    CHECK(r * CycloScalar::from_int(fld, 1) == r);
}

TEST_CASE("zeta powers wrap modulo the root order") {
    auto fld = CycloField::get(3, 2);  // zeta_9
    CHECK(fld->order() == 9);
    CHECK(fld->phi() == 6);
    CHECK(CycloScalar::zeta_power(fld, 9) == CycloScalar::from_int(fld, 1));
    CHECK(CycloScalar::zeta_power(fld, 10) == CycloScalar::zeta_power(fld, 1));
    CHECK(CycloScalar::zeta_power(fld, 1).as_integer() == std::nullopt);
    // sum over all p^L-th roots vanishes
    CycloScalar acc(fld);
    for (uint64_t t = 0; t < 9; ++t) acc.add_root(t);
    CHECK(acc.is_zero());
}

TEST_CASE("ring axioms and conjugation on random scalars") {
    std::mt19937_64 rng(11);
    for (auto [p, L] : {std::pair<uint32_t, uint32_t>{3, 2}, {5, 1}, {2, 3}}) {
        auto fld = CycloField::get(p, L);
        for (int trial = 0; trial < 40; ++trial) {
            CycloScalar a = random_scalar(rng, fld), b = random_scalar(rng, fld),
                        c = random_scalar(rng, fld);
            CHECK(a * b == b * a);
            CHECK((a * b) * c == a * (b * c));
            CHECK(a * (b + c) == a * b + a * c);
            CHECK(a.conj().conj() == a);
            CHECK((a * b).conj() == a.conj() * b.conj());
            CHECK((a + b).conj() == a.conj() + b.conj());
        }
    }
}

TEST_CASE("norm_check certifies unit modulus and integer norms") {
    auto fld = CycloField::get(3, 1);
    for (uint64_t k = 0; k < 3; ++k)
        CHECK(CycloScalar::zeta_power(fld, k).norm_check() == Int128(1));
    CycloScalar a = CycloScalar::from_int(fld, 1) + CycloScalar::zeta_power(fld, 1);
    CHECK(a.norm_check() == Int128(1));
    CHECK(CycloScalar::from_int(fld, 2).norm_check() == Int128(4));

    auto f9 = CycloField::get(3, 2);
    for (uint64_t k = 0; k < 9; ++k)
        CHECK(CycloScalar::zeta_power(f9, k).norm_check() == Int128(1));
}

TEST_CASE("exact division by rational integers") {
    auto fld = CycloField::get(3, 1);
    CycloScalar z = CycloScalar::zeta_power(fld, 1);
    CycloScalar z3 = z;
    z3.scale(3);
    auto q = z3.divide_exact(3);
    REQUIRE(q.has_value());
    CHECK(*q == z);
    CHECK(z.divide_exact(2) == std::nullopt);
}

TEST_CASE("complex embedding is a ring homomorphism numerically") {
    auto fld = CycloField::get(3, 1);
    std::complex<double> z = CycloScalar::zeta_power(fld, 1).embed();
    CHECK(std::abs(z - std::complex<double>(-0.5, 0.8660254037844386)) < 1e-12);

    std::mt19937_64 rng(23);
    for (auto [p, L] : {std::pair<uint32_t, uint32_t>{3, 2}, {5, 1}}) {
        auto f = CycloField::get(p, L);
        for (int trial = 0; trial < 20; ++trial) {
            CycloScalar prod = CycloScalar::from_int(f, 1);
            std::complex<double> num(1.0, 0.0);
            int nf = 2 + static_cast<int>(rng() % 9);
            for (int i = 0; i < nf; ++i) {
                CycloScalar s = random_scalar(rng, f, 3);
                prod = prod * s;
                num *= s.embed();
            }
            CHECK(std::abs(prod.embed() - num) <= 1e-10 * std::max(1.0, std::abs(num)));
        }
    }
}

TEST_CASE("half-power scalars: parity discipline and rescaling") {
    auto fld = CycloField::get(3, 1);
    HalfPowerScalar one = HalfPowerScalar::from_int(fld, 1, 0);
    HalfPowerScalar q = HalfPowerScalar::from_int(fld, 1, 2);
    HalfPowerScalar rootq = HalfPowerScalar::from_int(fld, 1, 1);

    CHECK(std::abs(q.embed() - 3.0) < 1e-14);
    CHECK(std::abs((one + q).embed() - 4.0) < 1e-14);
    CHECK((q * rootq).half_exponent() == 3);
    CHECK_THROWS_AS((void)(one + rootq), std::domain_error);
    // zero absorbs either parity
    HalfPowerScalar zero = HalfPowerScalar::zero(fld);
    CHECK((zero + rootq) == rootq);
    CHECK((one + zero) == one);
    // equal values in different normalizations compare equal
    HalfPowerScalar three_a = HalfPowerScalar::from_int(fld, 3, 0);
    HalfPowerScalar three_b = HalfPowerScalar::from_int(fld, 1, 2);
    CHECK(three_a == three_b);
    CHECK(three_a.pow(3) == HalfPowerScalar::from_int(fld, 27, 0));
    CHECK((-three_a) == HalfPowerScalar::from_int(fld, -3, 0));
}

TEST_CASE("laurent tensors drop zeros and report absent entries as exact zeros") {
    auto fld = CycloField::get(3, 1);
    LaurentTensor t(fld, 2);
    CHECK(t.empty());
    t.add({0, 0}, HalfPowerScalar::from_int(fld, 5, 0));
    t.add({0, 0}, HalfPowerScalar::from_int(fld, -5, 0));
    CHECK(t.empty());
    CHECK(t.at({3, -2}).is_zero());
    t.add({1, -1}, HalfPowerScalar::from_int(fld, 2, -2));
    CHECK(t.at({1, -1}) == HalfPowerScalar::from_int(fld, 2, -2));
}

TEST_CASE("vandermonde multiplication: frozen example and antisymmetry") {
    auto fld = CycloField::get(3, 1);
    LaurentTensor t(fld, 2);
    t.add({0, 0}, HalfPowerScalar::from_int(fld, 1, 0));
    LaurentTensor v = vandermonde_multiply(t);
    CHECK(v.at({1, 0}) == HalfPowerScalar::from_int(fld, 1, 0));
    CHECK(v.at({0, 1}) == HalfPowerScalar::from_int(fld, -1, 0));
    CHECK(v.entries().size() == 2);

    // multiplying a symmetric tensor: output negates under slot exchange
    std::mt19937_64 rng(37);
    LaurentTensor s(fld, 2);
    for (int trial = 0; trial < 6; ++trial) {
        int a = static_cast<int>(rng() % 4), b = static_cast<int>(rng() % 4);
        HalfPowerScalar v1 = HalfPowerScalar::from_int(fld, static_cast<int>(rng() % 9) - 4,
                                                       2 * ((a + b) % 2));
        s.add({a, b}, v1);
        s.add({b, a}, v1);
    }
    LaurentTensor vs = vandermonde_multiply(s);
    for (const auto& [key, val] : vs.entries()) {
        std::vector<int> swapped = {key[1], key[0]};
        CHECK(vs.at(swapped) == -val);
    }

    // empty input stays empty
    LaurentTensor zero(fld, 3);
    CHECK(vandermonde_multiply(zero).empty());
}

TEST_CASE("permutation sign by inversion count") {
    CHECK(permutation_sign({0, 1, 2}) == 1);
    CHECK(permutation_sign({1, 0, 2}) == -1);
    CHECK(permutation_sign({2, 0, 1}) == 1);
}
