#include "core/values.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "core/errors.hpp"

namespace cotypelab::num {

namespace {

constexpr double kRelPad = 1e-11;
// Bit budget for materializing integer power products during exact compare.
constexpr long kCompareBitBudget = 1 << 22;

double log_int(const Int& v) {
    if (v <= 0) throw InvariantViolation("values.log_int", "nonpositive base");
    if (v < Int(1) << 900) return std::log(static_cast<double>(v));
    long bits = static_cast<long>(msb(v));
    Int top = v >> (bits - 64);
    return std::log(static_cast<double>(top)) + static_cast<double>(bits - 64) * std::log(2.0);
}

Int int_pow(Int b, unsigned long e) {
    Int acc(1);
    while (e) {
        if (e & 1) acc *= b;
        b *= b;
        e >>= 1;
    }
    return acc;
}

// Trial division by small primes; remainder (possibly composite) is returned.
void factor_small(Int v, std::map<Int, long>& out, Int& remainder) {
    for (Int d : {Int(2), Int(3), Int(5)}) {
        while (v % d == 0) {
            ++out[d];
            v /= d;
        }
    }
    Int d(7);
    static const int wheel[8] = {4, 2, 4, 2, 4, 6, 2, 6};
    int w = 0;
    while (d * d <= v && d < 100000) {
        while (v % d == 0) {
            ++out[d];
            v /= d;
        }
        d += wheel[w];
        w = (w + 1) & 7;
    }
    if (v > 1 && Int(d) * d > v) {
        ++out[v];  // remaining cofactor is prime
        v = 1;
    }
    remainder = v;
}

}  // namespace

PowerValue PowerValue::one() {
    PowerValue v;
    v.zero_ = false;
    return v;
}

PowerValue PowerValue::from_rational(const Rational& r) {
    if (r < 0) throw PreconditionError("values", "PowerValue requires a nonnegative rational");
    if (r == 0) return zero();
    PowerValue v = one();
    std::map<Int, long> fac;
    Int rem_num, rem_den;
    factor_small(numerator(r), fac, rem_num);
    for (const auto& [p, e] : fac) v.insert_base(p, Rational(e));
    fac.clear();
    factor_small(denominator(r), fac, rem_den);
    for (const auto& [p, e] : fac) v.insert_base(p, Rational(-e));
    if (rem_num > 1) v.insert_base(rem_num, Rational(1));
    if (rem_den > 1) v.insert_base(rem_den, Rational(-1));
    v.prune();
    return v;
}

void PowerValue::insert_base(Int base, Rational exp) {
    if (exp == 0 || base == 1) return;
    if (base < 1) throw InvariantViolation("values.insert_base", "base must be positive");
    std::vector<std::pair<Int, Rational>> work{{std::move(base), std::move(exp)}};
    while (!work.empty()) {
        auto [x, ex] = std::move(work.back());
        work.pop_back();
        if (x == 1 || ex == 0) continue;
        bool handled = false;
        for (auto it = f_.begin(); it != f_.end(); ++it) {
            Int g = gcd(x, it->first);
            if (g == 1) continue;
            if (g == it->first) {
                it->second += ex;
                work.emplace_back(x / g, ex);
            } else {
                // Split the existing base along the common factor and retry.
                Int b0 = it->first;
                Rational e0 = it->second;
                f_.erase(it);
                work.emplace_back(g, e0);
                work.emplace_back(b0 / g, e0);
                work.emplace_back(std::move(x), ex);
            }
            handled = true;
            break;
        }
        if (!handled) f_.emplace(std::move(x), ex);
    }
}

void PowerValue::prune() {
    for (auto it = f_.begin(); it != f_.end();) {
        if (it->second == 0)
            it = f_.erase(it);
        else
            ++it;
    }
}

bool PowerValue::is_rational() const {
    if (zero_) return true;
    return std::all_of(f_.begin(), f_.end(),
                       [](const auto& kv) { return denominator(kv.second) == 1; });
}

Rational PowerValue::to_rational() const {
    if (zero_) return Rational(0);
    Rational r(1);
    for (const auto& [b, e] : f_) {
        if (denominator(e) != 1)
            throw InvariantViolation("values.to_rational", "value has an irrational factor");
        long k = static_cast<long>(numerator(e));
        r *= rational_pow(Rational(b), k);
    }
    return r;
}

PowerValue& PowerValue::operator*=(const PowerValue& rhs) {
    if (zero_ || rhs.zero_) {
        *this = zero();
        return *this;
    }
    for (const auto& [b, e] : rhs.f_) insert_base(b, e);
    prune();
    return *this;
}

PowerValue PowerValue::inverse() const {
    if (zero_) throw PreconditionError("values", "inverse of zero");
    PowerValue v = one();
    for (const auto& [b, e] : f_) v.f_[b] = -e;
    return v;
}

PowerValue PowerValue::pow(const Rational& e) const {
    if (zero_) {
        if (e > 0) return zero();
        if (e == 0) return one();
        throw PreconditionError("values", "0 raised to a nonpositive power");
    }
    if (e == 0) return one();
    PowerValue v = one();
    for (const auto& [b, ex] : f_) {
        Rational ne = ex * e;
        if (ne != 0) v.f_[b] = ne;
    }
    return v;
}

Cmp PowerValue::compare(const PowerValue& rhs) const {
    if (zero_ && rhs.zero_) return Cmp::EQ;
    if (zero_) return Cmp::LT;
    if (rhs.zero_) return Cmp::GT;
    // Exponent map of this/rhs over a joint coprime basis.
    PowerValue ratio = *this;
    for (const auto& [b, e] : rhs.f_) ratio.insert_base(b, -e);
    ratio.prune();
    if (ratio.f_.empty()) return Cmp::EQ;
    Int lcm_den(1);
    for (const auto& [b, e] : ratio.f_) lcm_den = lcm(lcm_den, denominator(e));
    // ratio^D = P/N for positive integers P, N.
    double bits = 0;
    for (const auto& [b, e] : ratio.f_) {
        Rational k = e * lcm_den;
        bits += static_cast<double>(msb(b) + 1) * std::abs(static_cast<double>(k));
    }
    if (bits <= static_cast<double>(kCompareBitBudget)) {
        Int pos(1), neg(1);
        for (const auto& [b, e] : ratio.f_) {
            Rational k = e * lcm_den;
            Int ki = numerator(k);
            if (ki > 0)
                pos *= int_pow(b, static_cast<unsigned long>(ki));
            else
                neg *= int_pow(b, static_cast<unsigned long>(-ki));
        }
        if (pos == neg) return Cmp::EQ;
        return pos < neg ? Cmp::LT : Cmp::GT;
    }
    Interval a = interval(), c = rhs.interval();
    if (a.hi < c.lo) return Cmp::LT;
    if (a.lo > c.hi) return Cmp::GT;
    throw InvariantViolation("values.compare",
                             "values too large for exact comparison and numerically indistinguishable");
}

void PowerValue::split(Rational& rational_part, PowerValue& unit) const {
    if (zero_) throw InvariantViolation("values.split", "cannot split zero");
    rational_part = 1;
    unit = one();
    for (const auto& [b, e] : f_) {
        Int fl = numerator(e) / denominator(e);
        if (numerator(e) < 0 && numerator(e) % denominator(e) != 0) fl -= 1;  // floor
        Rational frac = e - Rational(fl);
        rational_part *= rational_pow(Rational(b), static_cast<long>(fl));
        if (frac != 0) unit.f_[b] = frac;
    }
}

std::string PowerValue::canonical_key() const {
    if (zero_) return "0";
    std::ostringstream os;
    for (const auto& [b, e] : f_) os << b << "^" << numerator(e) << "/" << denominator(e) << ";";
    return os.str();
}

double PowerValue::to_double() const {
    if (zero_) return 0.0;
    double lg = 0;
    for (const auto& [b, e] : f_) lg += static_cast<double>(e) * log_int(b);
    return std::exp(lg);
}

Interval PowerValue::interval() const {
    if (zero_) return {0.0, 0.0};
    double v = to_double();
    return {v * (1.0 - kRelPad), v * (1.0 + kRelPad)};
}

std::string PowerValue::to_string() const {
    if (zero_) return "0";
    Rational rat;
    PowerValue unit;
    split(rat, unit);
    std::ostringstream os;
    os << format_rational(rat);
    for (const auto& [b, e] : unit.f_) os << " * " << b << "^(" << numerator(e) << "/" << denominator(e) << ")";
    return os.str();
}

// ---------------------------------------------------------------- ExactValue

void ExactValue::add_term(const Rational& coeff, const PowerValue& unit) {
    if (coeff == 0 || unit.is_zero()) return;
    Rational rat;
    PowerValue u;
    unit.split(rat, u);
    std::string key = u.canonical_key();
    auto it = terms_.find(key);
    if (it == terms_.end()) {
        terms_.emplace(std::move(key), Term{coeff * rat, u});
    } else {
        it->second.coeff += coeff * rat;
        if (it->second.coeff == 0) terms_.erase(it);
    }
}

ExactValue& ExactValue::operator+=(const ExactValue& rhs) {
    for (const auto& [k, t] : rhs.terms_) add_term(t.coeff, t.unit);
    return *this;
}

ExactValue& ExactValue::operator-=(const ExactValue& rhs) {
    for (const auto& [k, t] : rhs.terms_) add_term(-t.coeff, t.unit);
    return *this;
}

ExactValue ExactValue::operator-() const {
    ExactValue v;
    for (const auto& [k, t] : terms_) v.terms_.emplace(k, Term{-t.coeff, t.unit});
    return v;
}

ExactValue& ExactValue::operator*=(const Rational& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [k, t] : terms_) t.coeff *= c;
    return *this;
}

ExactValue& ExactValue::operator*=(const PowerValue& v) {
    ExactValue out;
    for (const auto& [k, t] : terms_) out.add_term(t.coeff, t.unit * v);
    *this = std::move(out);
    return *this;
}

ExactValue& ExactValue::operator*=(const ExactValue& rhs) {
    ExactValue out;
    for (const auto& [ka, ta] : terms_)
        for (const auto& [kb, tb] : rhs.terms_) out.add_term(ta.coeff * tb.coeff, ta.unit * tb.unit);
    *this = std::move(out);
    return *this;
}

ExactValue ExactValue::pow_int(unsigned k) const {
    ExactValue acc(Rational(1));
    ExactValue base = *this;
    while (k) {
        if (k & 1) acc *= base;
        if (k >>= 1) base *= base;
    }
    return acc;
}

ExactValue ExactValue::pow_rational(const Rational& e) const {
    if (denominator(e) == 1 && e >= 0) return pow_int(static_cast<unsigned>(numerator(e)));
    return ExactValue(as_power().pow(e));
}

bool ExactValue::is_rational() const {
    if (terms_.empty()) return true;
    return terms_.size() == 1 && terms_.begin()->second.unit.is_rational();
}

Rational ExactValue::to_rational() const {
    if (terms_.empty()) return Rational(0);
    if (!is_rational()) throw InvariantViolation("values.to_rational", "value is irrational");
    const Term& t = terms_.begin()->second;
    return t.coeff * t.unit.to_rational();
}

PowerValue ExactValue::as_power() const {
    if (terms_.empty()) return PowerValue::zero();
    if (terms_.size() != 1)
        throw PreconditionError("values", "multi-term value cannot be raised to a fractional power");
    const Term& t = terms_.begin()->second;
    if (t.coeff < 0) throw PreconditionError("values", "negative value has no PowerValue form");
    return PowerValue::from_rational(t.coeff) * t.unit;
}

Cmp ExactValue::compare(const ExactValue& rhs) const {
    ExactValue d = *this - rhs;
    if (d.terms_.empty()) return Cmp::EQ;
    bool all_pos = true, all_neg = true;
    for (const auto& [k, t] : d.terms_) {
        (t.coeff > 0 ? all_neg : all_pos) = false;
    }
    if (all_pos) return Cmp::GT;
    if (all_neg) return Cmp::LT;
    if (d.terms_.size() == 2) {
        // c1*u1 - c2*u2 with c1, c2 > 0: exact power comparison.
        auto it = d.terms_.begin();
        const Term& a = it->second;
        const Term& b = std::next(it)->second;
        const Term& pos = a.coeff > 0 ? a : b;
        const Term& neg = a.coeff > 0 ? b : a;
        PowerValue pa = PowerValue::from_rational(pos.coeff) * pos.unit;
        PowerValue pb = PowerValue::from_rational(-neg.coeff) * neg.unit;
        return pa.compare(pb);
    }
    Interval iv = d.interval();
    if (iv.lo > 0) return Cmp::GT;
    if (iv.hi < 0) return Cmp::LT;
    return Cmp::INDET;
}

double ExactValue::to_double() const {
    double s = 0;
    for (const auto& [k, t] : terms_) s += static_cast<double>(t.coeff) * t.unit.to_double();
    return s;
}

Interval ExactValue::interval() const {
    double lo = 0, hi = 0, mag = 0;
    for (const auto& [k, t] : terms_) {
        double c = static_cast<double>(t.coeff);
        Interval u = t.unit.interval();
        if (c >= 0) {
            lo += c * u.lo;
            hi += c * u.hi;
        } else {
            lo += c * u.hi;
            hi += c * u.lo;
        }
        mag += std::abs(c) * u.hi;
    }
    double pad = mag * 1e-12 + 1e-300;
    return {lo - pad, hi + pad};
}

std::string ExactValue::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [k, t] : terms_) {
        if (t.coeff < 0)
            out << (first ? "-" : " - ");
        else if (!first)
            out << " + ";
        first = false;
        out << (PowerValue::from_rational(rational_abs(t.coeff)) * t.unit).to_string();
    }
    return out.str();
}

double root_lower(const ExactValue& v, const Rational& q) {
    Interval iv = v.interval();
    if (iv.lo <= 0) return 0.0;
    double r = std::pow(iv.lo, 1.0 / static_cast<double>(q));
    return r * (1.0 - 1e-12);
}

double root_upper(const ExactValue& v, const Rational& q) {
    Interval iv = v.interval();
    if (iv.hi <= 0) return 0.0;
    double r = std::pow(iv.hi, 1.0 / static_cast<double>(q));
    return r * (1.0 + 1e-12);
}

}  // namespace cotypelab::num
