#include <doctest.h>

#include "core/values.hpp"

using namespace cotypelab;
using num::Cmp;
using num::ExactValue;
using num::PowerValue;

TEST_CASE("power values canonicalize rationals through prime factors") {
    PowerValue a = PowerValue::from_rational(Rational(8)).pow(Rational(1, 3));
    CHECK(a.compare(PowerValue::from_int(2)) == Cmp::EQ);
    CHECK(a.is_rational());
    CHECK(a.to_rational() == 2);

    PowerValue half = PowerValue::from_rational(Rational(3, 2));
    CHECK(half.to_rational() == Rational(3, 2));
}

TEST_CASE("composite bases merge across representations") {
    // 6^{1/2} built from the composite base must equal 2^{1/2} * 3^{1/2}.
    PowerValue six = PowerValue::from_int(6).pow(Rational(1, 2));
    PowerValue split =
        PowerValue::from_int(2).pow(Rational(1, 2)) * PowerValue::from_int(3).pow(Rational(1, 2));
    CHECK(six.compare(split) == Cmp::EQ);
    CHECK(six.canonical_key() == split.canonical_key());
}

TEST_CASE("power value ordering is exact") {
    PowerValue r2 = PowerValue::from_int(2).pow(Rational(1, 2));
    PowerValue r3 = PowerValue::from_int(3).pow(Rational(1, 2));
    CHECK(r2.compare(r3) == Cmp::LT);
    CHECK(r3.compare(PowerValue::from_int(2)) == Cmp::LT);
    // 2^{1/2} vs 2^{0.4999...}: tiny exponent gaps still decide exactly.
    PowerValue close = PowerValue::from_int(2).pow(Rational(4999, 10000));
    CHECK(close.compare(r2) == Cmp::LT);
    CHECK(PowerValue::zero().compare(r2) == Cmp::LT);
}

TEST_CASE("split separates rational and fractional parts") {
    PowerValue v = PowerValue::from_int(2).pow(Rational(5, 3));
    Rational rat;
    PowerValue unit;
    v.split(rat, unit);
    CHECK(rat == 2);
    CHECK(unit.compare(PowerValue::from_int(2).pow(Rational(2, 3))) == Cmp::EQ);

    PowerValue w = PowerValue::from_int(2).pow(Rational(-1, 3));
    w.split(rat, unit);
    CHECK(rat == Rational(1, 2));
    CHECK(unit.compare(PowerValue::from_int(2).pow(Rational(2, 3))) == Cmp::EQ);
}

TEST_CASE("exact values merge similar radicals") {
    ExactValue r2(PowerValue::from_int(2).pow(Rational(1, 2)));
    ExactValue sum = r2 + r2;
    CHECK(sum.term_count() == 1);
    ExactValue two_r2 = r2;
    two_r2 *= Rational(2);
    CHECK(sum.compare(two_r2) == Cmp::EQ);

    ExactValue r8(PowerValue::from_int(8).pow(Rational(1, 2)));
    // sqrt(8) = 2*sqrt(2): same radical class.
    CHECK((r2 + r8).term_count() == 1);
}

TEST_CASE("exact value arithmetic: (1 + sqrt 2)^2 = 3 + 2 sqrt 2") {
    ExactValue v = ExactValue(Rational(1)) + ExactValue(PowerValue::from_int(2).pow(Rational(1, 2)));
    ExactValue sq = v.pow_int(2);
    ExactValue expect = ExactValue(Rational(3));
    ExactValue r2(PowerValue::from_int(2).pow(Rational(1, 2)));
    r2 *= Rational(2);
    expect += r2;
    CHECK(sq.compare(expect) == Cmp::EQ);
    CHECK(sq.term_count() == 2);
    CHECK_FALSE(sq.is_rational());
}

TEST_CASE("two-term differences compare exactly") {
    ExactValue a(PowerValue::from_int(2).pow(Rational(1, 2)));  // 1.41421...
    ExactValue b(Rational(141421356, 100000000));
    CHECK(a.compare(b) == Cmp::GT);  // sqrt(2) > 1.41421356
    ExactValue c(Rational(141421357, 100000000));
    CHECK(a.compare(c) == Cmp::LT);
}

TEST_CASE("zero and negatives behave") {
    ExactValue z;
    CHECK(z.is_zero());
    CHECK(z.is_rational());
    CHECK(z.to_rational() == 0);
    ExactValue a(Rational(5, 3));
    CHECK((a - a).is_zero());
    CHECK((-a).compare(z) == Cmp::LT);
    CHECK((a - a).compare(z) == Cmp::EQ);
}

TEST_CASE("directed roots bracket the true value") {
    ExactValue v(Rational(2));
    double lo = num::root_lower(v, Rational(2));
    double hi = num::root_upper(v, Rational(2));
    double truth = 1.4142135623730951;
    CHECK(lo <= truth);
    CHECK(hi >= truth);
    CHECK(hi - lo < 1e-9);
}

TEST_CASE("interval encloses the value") {
    ExactValue v(PowerValue::from_int(7).pow(Rational(1, 3)));
    v *= Rational(22, 7);
    auto iv = v.interval();
    double truth = 22.0 / 7.0 * std::cbrt(7.0);
    CHECK(iv.lo <= truth);
    CHECK(iv.hi >= truth);
}

TEST_CASE("to_string is readable") {
    ExactValue v(PowerValue::from_int(24).pow(Rational(1, 3)));
    v *= Rational(3, 2);
    CHECK(v.to_string().find("^") != std::string::npos);
}
