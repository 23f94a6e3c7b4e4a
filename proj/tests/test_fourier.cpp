#include <doctest.h>

#include "core/fourier.hpp"
#include "core/rng.hpp"
#include "support/helpers.hpp"

using namespace cotypelab;
using fourier::CubeFunction;
using testsupport::sv;

namespace {

CubeFunction<Rational> constant_fn(int m, const std::vector<Rational>& v) {
    auto f = CubeFunction<Rational>::zero(m, static_cast<int>(v.size()));
    for (std::uint64_t idx = 0; idx < f.rows(); ++idx)
        for (int c = 0; c < f.d; ++c) f.row(idx)[c] = v[c];
    return f;
}

CubeFunction<Rational> random_fn(Rng& rng, int m, int d) {
    auto f = CubeFunction<Rational>::zero(m, d);
    for (auto& v : f.table) v = rng.rational(9, 6);
    return f;
}

}  // namespace

TEST_CASE("walsh_eval basic characters") {
    CHECK(fourier::walsh_eval(0, sv({1, -1, 1}), 3) == 1);  // empty product
    CHECK(fourier::walsh_eval(0b101, sv({-1, 1, -1}), 3) == 1);
    CHECK(fourier::walsh_eval(0b10, sv({1, -1}), 2) == -1);
    CHECK_THROWS_AS(fourier::walsh_eval(0b100, sv({1, -1}), 2), PreconditionError);
}

TEST_CASE("fourier_coefficient on constants and characters") {
    std::vector<Rational> v{Rational(2), Rational(-3, 2)};
    auto f = constant_fn(3, v);
    CHECK(fourier::fourier_coefficient(f, 0) == v);
    auto zero = fourier::fourier_coefficient(f, 0b1);
    CHECK(zero == std::vector<Rational>{Rational(0), Rational(0)});

    // f(eps) = eps1*eps2*v on m=2.
    auto g = CubeFunction<Rational>::zero(2, 2);
    for (std::uint64_t idx = 0; idx < 4; ++idx) {
        int w = walsh_sign(0b11, idx);
        for (int c = 0; c < 2; ++c) g.row(idx)[c] = v[c] * w;
    }
    CHECK(fourier::fourier_coefficient(g, 0b11) == v);
    CHECK(fourier::fourier_coefficient(g, 0b01) == std::vector<Rational>{Rational(0), Rational(0)});
}

TEST_CASE("level_one matches direct four-point sums") {
    // f(eps) = (eps1 + eps2) * v, m=2, d=1.
    auto f = CubeFunction<Rational>::zero(2, 1);
    for (std::uint64_t idx = 0; idx < 4; ++idx) {
        SignVector e = SignVector::from_index(2, idx);
        f.row(idx)[0] = Rational(e.at1(1) + e.at1(2)) * Rational(5, 3);
    }
    auto lv = fourier::level_one(f);
    REQUIRE(lv.size() == 2);

    // Independent oracle: the plain four-point average.
    for (int i = 1; i <= 2; ++i) {
        Rational acc(0);
        for (std::uint64_t idx = 0; idx < 4; ++idx) {
            SignVector e = SignVector::from_index(2, idx);
            acc += Rational(e.at1(i)) * f.row(idx)[0];
        }
        acc /= 4;
        CHECK(lv[i - 1][0] == acc);
        CHECK(acc == Rational(5, 3));
    }

    // f(eps) = eps1 * v -> [v, 0]; constants -> zero.
    auto g = CubeFunction<Rational>::zero(2, 1);
    for (std::uint64_t idx = 0; idx < 4; ++idx)
        g.row(idx)[0] = Rational(SignVector::from_index(2, idx).at1(1)) * 7;
    auto lg = fourier::level_one(g);
    CHECK(lg[0][0] == 7);
    CHECK(lg[1][0] == 0);
}

TEST_CASE("rademacher projection filters to degree one") {
    Rng rng(11);
    // f(eps) = eps1*v + eps1*eps2*w  ->  Rad(f)(eps) = eps1*v.
    auto f = CubeFunction<Rational>::zero(2, 1);
    for (std::uint64_t idx = 0; idx < 4; ++idx) {
        SignVector e = SignVector::from_index(2, idx);
        f.row(idx)[0] = Rational(e.at1(1)) * 3 + Rational(e.at1(1) * e.at1(2)) * 5;
    }
    auto rad = fourier::rademacher_projection(f);
    for (std::uint64_t idx = 0; idx < 4; ++idx) {
        SignVector e = SignVector::from_index(2, idx);
        CHECK(rad.row(idx)[0] == Rational(e.at1(1)) * 3);
    }

    SUBCASE("idempotent and linear on random functions") {
        for (int trial = 0; trial < 10; ++trial) {
            auto a = random_fn(rng, 4, 2);
            auto b = random_fn(rng, 4, 2);
            auto ra = fourier::rademacher_projection(a);
            CHECK(fourier::rademacher_projection(ra).table == ra.table);

            Rational ca = rng.rational(5, 3), cb = rng.rational(5, 3);
            auto combo = CubeFunction<Rational>::zero(4, 2);
            for (std::size_t i = 0; i < combo.table.size(); ++i)
                combo.table[i] = ca * a.table[i] + cb * b.table[i];
            auto rc = fourier::rademacher_projection(combo);
            auto rb = fourier::rademacher_projection(b);
            for (std::size_t i = 0; i < combo.table.size(); ++i)
                CHECK(rc.table[i] == ca * ra.table[i] + cb * rb.table[i]);
        }
    }
}

TEST_CASE("reconstruct inverts the full transform") {
    Rng rng(23);
    auto f = random_fn(rng, 4, 3);
    auto table = fourier::full_transform(f);
    auto back = fourier::reconstruct(table);
    CHECK(back.table == f.table);

    SUBCASE("single-coefficient tables") {
        fourier::FourierTable<Rational> t;
        t.m = 3;
        t.d = 1;
        t.coefficients[0] = {Rational(9, 2)};
        auto constant = fourier::reconstruct(t);
        for (std::uint64_t idx = 0; idx < 8; ++idx) CHECK(constant.row(idx)[0] == Rational(9, 2));

        fourier::FourierTable<Rational> u;
        u.m = 3;
        u.d = 1;
        u.coefficients[0b1] = {Rational(4)};
        auto ch = fourier::reconstruct(u);
        for (std::uint64_t idx = 0; idx < 8; ++idx)
            CHECK(ch.row(idx)[0] == Rational(4) * SignVector::from_index(3, idx).at1(1));
    }

    SUBCASE("level-capped tables are refused") {
        auto capped = fourier::transform_up_to_level(f, 1);
        CHECK_THROWS_AS(fourier::reconstruct(capped), PreconditionError);
    }
}

TEST_CASE("butterfly agrees with direct summation coefficient by coefficient") {
    Rng rng(37);
    auto f = random_fn(rng, 5, 2);
    auto table = fourier::full_transform(f);
    for (std::uint64_t mask = 0; mask < 32; mask += 7)
        CHECK(table.coefficients.at(mask) == fourier::fourier_coefficient(f, mask));
}

TEST_CASE("parseval holds exactly per output coordinate") {
    Rng rng(41);
    for (int trial = 0; trial < 5; ++trial) {
        int m = 2 + static_cast<int>(rng.below(4));
        int d = 1 + static_cast<int>(rng.below(3));
        auto f = random_fn(rng, m, d);
        auto table = fourier::full_transform(f);
        for (int c = 0; c < d; ++c) {
            Rational lhs(0), rhs(0);
            for (const auto& [mask, coeff] : table.coefficients) lhs += coeff[c] * coeff[c];
            for (std::uint64_t idx = 0; idx < f.rows(); ++idx)
                rhs += f.row(idx)[c] * f.row(idx)[c];
            rhs /= rational_pow(Rational(2), m);
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("rademacher ratio is a contraction in ell2 and exact on degree one") {
    Rng rng(53);
    auto f = random_fn(rng, 4, 3);
    double r = fourier::rademacher_ratio(f);
    CHECK(r <= 1.0 + 1e-12);

    auto g = CubeFunction<Rational>::zero(3, 1);
    for (std::uint64_t idx = 0; idx < 8; ++idx)
        g.row(idx)[0] = Rational(SignVector::from_index(3, idx).at1(2));
    CHECK(fourier::rademacher_ratio(g) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("float mode mirrors the exact API") {
    auto f = CubeFunction<double>::zero(3, 2);
    Rng rng(67);
    for (auto& v : f.table) v = rng.unit() - 0.5;
    auto table = fourier::full_transform(f);
    auto back = fourier::reconstruct(table);
    for (std::size_t i = 0; i < f.table.size(); ++i)
        CHECK(back.table[i] == doctest::Approx(f.table[i]).epsilon(1e-12));
}
