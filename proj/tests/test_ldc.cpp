#include <doctest.h>

#include "core/ldc.hpp"
#include "support/helpers.hpp"

using namespace cotypelab;
using testsupport::sv;

TEST_CASE("hadamard encoding follows the canonical subset order") {
    auto [code, dec] = ldc::hadamard_code(2);
    CHECK(code.n == 4);
    // eps = (1,-1): coordinates for masks {}, {1}, {2}, {1,2}.
    auto w = code.encode(sv({1, -1}));
    CHECK(w == testsupport::signs({1, 1, -1, -1}));
    CHECK(code.encode(sv({-1, -1})) == testsupport::signs({1, -1, -1, 1}));
    CHECK(code.encode(sv({1, 1})) == testsupport::signs({1, 1, 1, 1}));
    CHECK_THROWS_AS(code.encode(sv({1, 1, 1})), PreconditionError);

    SUBCASE("explicit codes are row lookups") {
        auto [one, onedec] = testsupport::one_bit_code();
        CHECK(one.encode(sv({1})) == testsupport::signs({1}));
        CHECK(one.encode(sv({-1})) == testsupport::signs({-1}));
    }
}

TEST_CASE("hadamard decoding succeeds on clean codewords") {
    for (int m : {1, 2, 3}) {
        auto [code, dec] = ldc::hadamard_code(m);
        for (std::uint64_t msg = 0; msg < (std::uint64_t(1) << m); ++msg) {
            SignVector eps = SignVector::from_index(m, msg);
            auto w = code.encode(eps);
            for (int t = 1; t <= m; ++t)
                CHECK(ldc::decode_success_prob(dec, t, w, eps.at1(t)) == 1);
        }
    }
}

TEST_CASE("corrupt flips exactly the named coordinates") {
    ldc::Word w = testsupport::signs({1, 1, -1});
    CHECK(ldc::corrupt(w, {}) == w);
    CHECK(ldc::corrupt(w, {1}) == testsupport::signs({-1, 1, -1}));
    CHECK(ldc::corrupt(ldc::corrupt(w, {1, 3}), {1, 3}) == w);
    CHECK_THROWS_AS(ldc::corrupt(w, {4}), PreconditionError);
}

TEST_CASE("decode_success_prob is an exact rational") {
    auto [code, dec] = ldc::hadamard_code(2);

    SUBCASE("one corrupted coordinate halves the success probability") {
        auto w = code.encode(sv({1, 1}));
        auto bad = ldc::corrupt(w, {2});
        CHECK(ldc::decode_success_prob(dec, 1, bad, 1) == Rational(1, 2));
    }

    SUBCASE("a constant decoder never hits the opposite target") {
        ldc::LocalDecoder constant;
        constant.m = 1;
        constant.n = 2;
        ldc::DecodingQuery q;
        q.i = q.j = q.k = 1;
        q.g.fill(Sign(1));
        constant.per_bit = {{{q, Rational(1)}}};
        ldc::Word w = testsupport::signs({1, 1});
        CHECK(ldc::decode_success_prob(constant, 1, w, -1) == 0);
        CHECK(ldc::decode_success_prob(constant, 1, w, 1) == 1);
    }

    SUBCASE("probabilities of opposite targets sum to one") {
        Rng rng(5);
        auto w = code.encode(sv({1, -1}));
        for (int trial = 0; trial < 8; ++trial) {
            std::set<int> flips;
            for (int i = 1; i <= code.n; ++i)
                if (rng.below(2)) flips.insert(i);
            auto bad = ldc::corrupt(w, flips);
            for (int t = 1; t <= 2; ++t) {
                Rational plus = ldc::decode_success_prob(dec, t, bad, 1);
                Rational minus = ldc::decode_success_prob(dec, t, bad, -1);
                CHECK(plus + minus == 1);
            }
        }
    }
}

TEST_CASE("exhaustive quality matches the brute-force oracle") {
    auto [code3, dec3] = ldc::hadamard_code(3);
    auto rep = ldc::evaluate_quality(code3, dec3, Rational(1, 8), ldc::QualityMode::Exhaustive,
                                     1u << 24, 0);
    CHECK(rep.theta_margin == Rational(1, 4));
    CHECK(rep.regime == ldc::QualityReport::Regime::Exhaustive);
    CHECK(rep.theta_margin == testsupport::brute_quality_margin(code3, dec3, Rational(1, 8)));

    auto [code2, dec2] = ldc::hadamard_code(2);
    auto rep2 = ldc::evaluate_quality(code2, dec2, Rational(1, 4), ldc::QualityMode::Exhaustive,
                                      1u << 24, 0);
    CHECK(rep2.theta_margin == 0);
    CHECK(rep2.theta_margin == testsupport::brute_quality_margin(code2, dec2, Rational(1, 4)));

    SUBCASE("phi = 0 tests only the clean codewords") {
        auto clean = ldc::evaluate_quality(code2, dec2, Rational(0), ldc::QualityMode::Exhaustive,
                                           1u << 20, 0);
        CHECK(clean.theta_margin == Rational(1, 2));
    }
}

TEST_CASE("quality margins follow the closed form 1/2 - 2w/n on small weights") {
    for (int m : {2, 3, 4}) {
        auto [code, dec] = ldc::hadamard_code(m);
        const int n = code.n;
        for (int w = 0; 4 * w <= n; ++w) {
            Rational phi(w, n);
            auto rep =
                ldc::evaluate_quality(code, dec, phi, ldc::QualityMode::Exhaustive, 1u << 26, 0);
            CHECK(rep.theta_margin == Rational(1, 2) - Rational(2 * w, n));
        }
    }
}

TEST_CASE("quality margin is monotone in phi") {
    auto [code, dec] = ldc::hadamard_code(3);
    Rational prev;
    bool first = true;
    for (int w = 0; w <= 2; ++w) {
        auto rep = ldc::evaluate_quality(code, dec, Rational(w, 8), ldc::QualityMode::Exhaustive,
                                         1u << 26, 0);
        if (!first) CHECK(rep.theta_margin <= prev);
        prev = rep.theta_margin;
        first = false;
    }
}

TEST_CASE("exhaustive refusals name the required budget") {
    auto [code, dec] = ldc::hadamard_code(4);
    try {
        ldc::evaluate_quality(code, dec, Rational(1, 4), ldc::QualityMode::Exhaustive, 10, 0);
        FAIL("expected a budget refusal");
    } catch (const BudgetError& e) {
        CHECK(std::string(e.what()).find("budget") != std::string::npos);
    }
}

TEST_CASE("sampled mode reports an upper bound with provenance") {
    auto [code, dec] = ldc::hadamard_code(3);
    auto exact = ldc::evaluate_quality(code, dec, Rational(1, 8), ldc::QualityMode::Exhaustive,
                                       1u << 24, 0);
    auto sampled = ldc::evaluate_quality(code, dec, Rational(1, 8), ldc::QualityMode::Sampled, 0,
                                         /*seed=*/99, /*samples=*/500);
    CHECK(sampled.regime == ldc::QualityReport::Regime::Sampled);
    CHECK(sampled.tested_count == 500);
    CHECK(sampled.seed == 99);
    // The sampled minimum can only overestimate the true worst case.
    CHECK(sampled.theta_margin >= exact.theta_margin);

    auto again = ldc::evaluate_quality(code, dec, Rational(1, 8), ldc::QualityMode::Sampled, 0, 99,
                                       500);
    CHECK(again.theta_margin == sampled.theta_margin);
}

TEST_CASE("quality preconditions") {
    auto [code, dec] = ldc::hadamard_code(2);
    CHECK_THROWS_AS(ldc::evaluate_quality(code, dec, Rational(1, 2), ldc::QualityMode::Exhaustive,
                                          1u << 20, 0),
                    PreconditionError);
    CHECK_THROWS_AS(ldc::hadamard_code(0), PreconditionError);
    CHECK_THROWS_AS(ldc::hadamard_code(17), PreconditionError);

    ldc::LocalDecoder bad = dec;
    bad.per_bit[0][0].weight = Rational(1, 3);  // weights no longer sum to 1
    CHECK_THROWS_AS(bad.validate(), PreconditionError);
}
