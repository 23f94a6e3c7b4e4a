#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/rational.hpp"

namespace cotypelab::num {

using cotypelab::Int;
using cotypelab::Rational;

/// Directed enclosure of a nonnegative real in doubles.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

enum class Cmp { LT, EQ, GT, INDET };

/// A nonnegative real of the form prod_i b_i^{e_i} with integer bases b_i >= 2
/// kept pairwise coprime and rational exponents e_i != 0 (or exactly zero).
///
/// This domain is closed under multiplication, division and rational powers,
/// and admits an exact total order: the ratio of two values is (A/B)^{1/D}
/// for integers A, B once exponents are put over a common denominator D, so
/// comparison reduces to big-integer comparison. Values such as lp norms of
/// rational vectors with integer p live here exactly.
class PowerValue {
public:
    PowerValue() : zero_(true) {}

    static PowerValue zero() { return PowerValue(); }
    static PowerValue one();
    /// Requires r >= 0.
    static PowerValue from_rational(const Rational& r);
    static PowerValue from_int(long v) { return from_rational(Rational(v)); }

    bool is_zero() const { return zero_; }
    bool is_rational() const;
    /// Only valid when is_rational().
    Rational to_rational() const;

    PowerValue& operator*=(const PowerValue& rhs);
    friend PowerValue operator*(PowerValue a, const PowerValue& b) { return a *= b; }
    PowerValue inverse() const;
    /// this^e; 0^e requires e > 0.
    PowerValue pow(const Rational& e) const;

    Cmp compare(const PowerValue& rhs) const;

    /// Splits into (rational part, unit with all exponents in (0,1)).
    void split(Rational& rational_part, PowerValue& unit) const;

    /// Canonical serialization of the factor map; equal strings imply equal
    /// values (the converse can fail only for bases too large to factor).
    std::string canonical_key() const;

    double to_double() const;
    Interval interval() const;
    std::string to_string() const;

private:
    void insert_base(Int base, Rational exp);
    void prune();

    bool zero_ = false;
    std::map<Int, Rational> f_;
};

/// A signed finite sum of rational multiples of PowerValue units.  Closed
/// under ring operations; comparison is exact when term structure permits
/// (identical units, or a two-term difference) and falls back to certified
/// interval separation otherwise.
class ExactValue {
public:
    ExactValue() = default;
    explicit ExactValue(const Rational& r) { add_term(r, PowerValue::one()); }
    explicit ExactValue(const PowerValue& v) { add_term(Rational(1), v); }

    static ExactValue zero() { return ExactValue(); }
    static ExactValue from_int(long v) { return ExactValue(Rational(v)); }

    void add_term(const Rational& coeff, const PowerValue& unit);

    ExactValue& operator+=(const ExactValue& rhs);
    ExactValue& operator-=(const ExactValue& rhs);
    friend ExactValue operator+(ExactValue a, const ExactValue& b) { return a += b; }
    friend ExactValue operator-(ExactValue a, const ExactValue& b) { return a -= b; }
    ExactValue operator-() const;

    ExactValue& operator*=(const Rational& c);
    ExactValue& operator*=(const PowerValue& v);
    ExactValue& operator*=(const ExactValue& rhs);
    friend ExactValue operator*(ExactValue a, const ExactValue& b) { return a *= b; }
    friend ExactValue operator*(ExactValue a, const Rational& c) { return a *= c; }

    ExactValue pow_int(unsigned k) const;
    /// Requires a single term with positive coefficient.
    ExactValue pow_rational(const Rational& e) const;

    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }
    bool is_rational() const;
    Rational to_rational() const;
    /// Single nonnegative term as a PowerValue; throws otherwise.
    PowerValue as_power() const;

    Cmp compare(const ExactValue& rhs) const;
    bool equals(const ExactValue& rhs) const { return compare(rhs) == Cmp::EQ; }

    double to_double() const;
    Interval interval() const;
    std::string to_string() const;

private:
    struct Term {
        Rational coeff;
        PowerValue unit;  // exponents in (0,1); one() for the rational class
    };
    std::map<std::string, Term> terms_;
};

/// v^(1/q) rounded toward zero / away from zero; v must be nonnegative.
double root_lower(const ExactValue& v, const Rational& q);
double root_upper(const ExactValue& v, const Rational& q);

}  // namespace cotypelab::num
