#include "psd_oracle.hpp"
#include "turan/error.hpp"
#include "turan/ldlt.hpp"

#include <doctest.h>

using namespace turan;
using namespace turan::testing;

namespace {

FieldMatrix from_ints(const std::vector<std::vector<long>>& rows) {
    FieldMatrix m;
    for (const auto& r : rows) {
        m.emplace_back();
        for (long x : r) m.back().emplace_back(x);
    }
    return m;
}

}  // namespace

TEST_SUITE("certificate-ldlt") {

TEST_CASE("small examples") {
    CHECK(is_positive_semidefinite(from_ints({{2, 1}, {1, 2}})));
    CHECK_FALSE(is_positive_semidefinite(from_ints({{1, 2}, {2, 1}})));
    CHECK(is_positive_semidefinite(from_ints({{0, 0}, {0, 1}})));
    CHECK(is_positive_semidefinite(from_ints({{0, 0}, {0, 0}})));
    CHECK(is_positive_semidefinite({}));

    const LdltResult zero_pivot = ldlt(from_ints({{0, 1}, {1, 0}}));
    CHECK_FALSE(zero_pivot.positive_semidefinite);
    CHECK(zero_pivot.failed_step == 0);
    CHECK(zero_pivot.failed_value == FieldElement(1));

    const LdltResult negative = ldlt(from_ints({{1, 2, 0}, {2, 1, 0}, {0, 0, 1}}));
    CHECK_FALSE(negative.positive_semidefinite);
    CHECK(negative.failed_step == 1);
    CHECK(negative.failed_value == FieldElement(-3));
}

TEST_CASE("malformed input") {
    CHECK_THROWS_AS(ldlt(from_ints({{1, 2}, {3, 1}})), DomainError);
    CHECK_THROWS_AS(ldlt(from_ints({{1, 2}})), DomainError);
}

TEST_CASE("quadratic-field pivots are signed exactly") {
    const FieldElement r5(Rational(0), Rational(1), 5);
    // det = sqrt5 - 1 > 0
    CHECK(is_positive_semidefinite({{r5, FieldElement(1)}, {FieldElement(1), FieldElement(1)}}));
    // det = sqrt5 - 3 < 0
    CHECK_FALSE(is_positive_semidefinite({{r5 - FieldElement(2), FieldElement(1)}, {FieldElement(1), FieldElement(1)}}));
    // (1, phi) (1, phi)^T with phi = (1 + sqrt5)/2 is singular PSD
    const FieldElement phi(Rational(1, 2), Rational(1, 2), 5);
    const FieldMatrix rank1{{FieldElement(1), phi}, {phi, phi * phi}};
    const LdltResult f = ldlt(rank1);
    CHECK(f.positive_semidefinite);
    CHECK(f.diagonal[1].is_zero());
    CHECK(reassemble(f) == rank1);
}

TEST_CASE("reassembly reproduces PSD input exactly") {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 300; ++t) {
        const int n = 1 + static_cast<int>(rng() % 7);
        FieldMatrix m = random_gram(rng, n, 1 + static_cast<int>(rng() % n));
        if (t % 2) {
            // scale by a positive element of Q[sqrt 5]
            const FieldElement c(Rational(1, 3), Rational(1, 7), 5);
            for (auto& row : m)
                for (auto& x : row) x *= c;
        }
        const LdltResult f = ldlt(m);
        REQUIRE(f.positive_semidefinite);
        CHECK(reassemble(f) == m);
        for (const FieldElement& d : f.diagonal) CHECK(d.sign() >= 0);
        for (std::size_t i = 0; i < f.lower.size(); ++i) CHECK(f.lower[i][i] == FieldElement(1));
    }
}

TEST_CASE("PSD verdicts match a numeric eigenvalue oracle") {
    const OracleTally t = run_psd_oracle(22, 1000);
    CHECK(t.agree == 1000);
    CHECK(t.psd > 250);
    CHECK(t.psd < 1000);
}

}  // TEST_SUITE
