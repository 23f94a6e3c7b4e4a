#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "core/errors.hpp"

namespace cotypelab {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& r) { return static_cast<double>(r); }

/// Parses "p/q" or "p" (optionally signed). Throws SchemaError on garbage.
inline Rational parse_rational(const std::string& s, const std::string& path = "rational") {
    try {
        auto slash = s.find('/');
        if (slash == std::string::npos) return Rational(Int(s));
        Int num(s.substr(0, slash));
        Int den(s.substr(slash + 1));
        if (den == 0) throw SchemaError(path, "zero denominator in '" + s + "'");
        return Rational(num, den);
    } catch (const SchemaError&) {
        throw;
    } catch (const std::exception&) {
        throw SchemaError(path, "not a rational: '" + s + "'");
    }
}

/// Canonical "p/q" form, denominator always present and positive.
inline std::string format_rational(const Rational& r) {
    return numerator(r).str() + "/" + denominator(r).str();
}

inline Rational rational_abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

/// r^e for integer e (e may be negative; r must be nonzero then).
inline Rational rational_pow(const Rational& r, long e) {
    if (e == 0) return Rational(1);
    bool inv = e < 0;
    unsigned long k = inv ? static_cast<unsigned long>(-e) : static_cast<unsigned long>(e);
    Rational acc(1), base(r);
    while (k) {
        if (k & 1) acc *= base;
        base *= base;
        k >>= 1;
    }
    if (inv) {
        if (acc == 0) throw PreconditionError("rational", "0 raised to negative power");
        acc = 1 / acc;
    }
    return acc;
}

inline Int rational_floor(const Rational& r) {
    Int q = numerator(r) / denominator(r);
    if (numerator(r) < 0 && q * denominator(r) != numerator(r)) q -= 1;
    return q;
}

inline Int rational_ceil(const Rational& r) {
    Int q = numerator(r) / denominator(r);
    if (numerator(r) > 0 && q * denominator(r) != numerator(r)) q += 1;
    return q;
}

inline Int binomial(int n, int k) {
    if (k < 0 || k > n) return Int(0);
    Int r(1);
    for (int i = 1; i <= k; ++i) {
        r *= (n - k + i);
        r /= i;
    }
    return r;
}

}  // namespace cotypelab
