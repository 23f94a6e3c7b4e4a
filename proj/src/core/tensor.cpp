#include "core/tensor.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"
#include "core/rng.hpp"

namespace cotypelab::tensor {

// ------------------------------------------------------------ Exponent/Spec

Exponent Exponent::finite(const Rational& p) {
    if (p <= 1) throw PreconditionError("tensor_space", "lp exponents must satisfy p > 1");
    return {false, p};
}

Exponent Exponent::parse(const std::string& s) {
    if (s == "inf" || s == "Inf" || s == "INF" || s == "infinity") return infinity();
    return finite(parse_rational(s, "exponent"));
}

std::string Exponent::str() const {
    if (inf) return "inf";
    if (denominator(p) == 1) return numerator(p).str();
    return numerator(p).str() + "/" + denominator(p).str();
}

SpaceSpec SpaceSpec::make(Exponent p1, Exponent p2, Exponent p3, int n, bool exploratory) {
    if (n < 1) throw PreconditionError("tensor_space", "dimension n must be positive");
    SpaceSpec s{p1, p2, p3, n};
    if (!exploratory && !s.certifiable())
        throw PreconditionError("tensor_space",
                                "certification requires 1/p1 + 1/p2 + 1/p3 <= 1 (pass the exploratory "
                                "override to proceed anyway)");
    return s;
}

SpaceSpec SpaceSpec::with_n(int nn) const {
    SpaceSpec s = *this;
    if (nn < 1) throw PreconditionError("tensor_space", "dimension n must be positive");
    s.n = nn;
    return s;
}

const Exponent& SpaceSpec::leg(int axis) const {
    switch (axis) {
        case 0: return p1;
        case 1: return p2;
        default: return p3;
    }
}

// ---------------------------------------------------------------- Tensor3

template <class S>
Tensor3<S> Tensor3<S>::zeros(int n) {
    if (n < 1) throw PreconditionError("tensor_space", "dimension n must be positive");
    Tensor3<S> t;
    t.n = n;
    t.e.assign(std::size_t(n) * n * n, S(0));
    return t;
}

template <class S>
void Tensor3<S>::validate() const {
    if (n < 1) throw PreconditionError("tensor_space", "dimension n must be positive");
    if (e.size() != std::size_t(n) * n * n)
        throw PreconditionError("tensor_space", "entry count must be exactly n^3");
}

template <class S>
Tensor3<S>& Tensor3<S>::operator+=(const Tensor3& rhs) {
    if (n != rhs.n) throw PreconditionError("tensor_space", "tensor dimension mismatch");
    for (std::size_t i = 0; i < e.size(); ++i) e[i] += rhs.e[i];
    return *this;
}

template <class S>
Tensor3<S>& Tensor3<S>::operator-=(const Tensor3& rhs) {
    if (n != rhs.n) throw PreconditionError("tensor_space", "tensor dimension mismatch");
    for (std::size_t i = 0; i < e.size(); ++i) e[i] -= rhs.e[i];
    return *this;
}

template <class S>
Tensor3<S>& Tensor3<S>::operator*=(const S& c) {
    for (S& x : e) x *= c;
    return *this;
}

// ---------------------------------------------------------- value plumbing

namespace {

template <class S>
value_t<S> v_zero() {
    if constexpr (std::is_same_v<S, Rational>)
        return ExactValue();
    else
        return 0.0;
}

template <class S>
value_t<S> v_from_abs(const S& x) {
    if constexpr (std::is_same_v<S, Rational>)
        return ExactValue(rational_abs(x));
    else
        return std::abs(x);
}

template <class S>
double v_dbl(const value_t<S>& v) {
    if constexpr (std::is_same_v<S, Rational>)
        return v.to_double();
    else
        return v;
}

template <class S>
bool v_less(const value_t<S>& a, const value_t<S>& b) {
    if constexpr (std::is_same_v<S, Rational>)
        return a.compare(b) == Cmp::LT;
    else
        return a < b;
}

/// base^e for an integer base.
template <class S>
value_t<S> v_ipow(long base, const Rational& e) {
    if constexpr (std::is_same_v<S, Rational>)
        return ExactValue(PowerValue::from_int(base).pow(e));
    else
        return std::pow(static_cast<double>(base), static_cast<double>(e));
}

template <class S>
S abs_scalar(const S& x) {
    if constexpr (std::is_same_v<S, Rational>)
        return rational_abs(x);
    else
        return std::abs(x);
}

int sign_of(const Rational& x) { return x < 0 ? -1 : 1; }
int sign_of(double x) { return x < 0 ? -1 : 1; }

void check_exact_exponent(const Exponent& p) {
    if (!p.integral())
        throw PreconditionError("tensor_space",
                                "rational-mode norm evaluation requires integer exponents or inf "
                                "(got p = " + p.str() + "); use float arithmetic for fractional p");
}

}  // namespace

// ---------------------------------------------------------------- lp norms

template <class S>
value_t<S> lp_norm(const std::vector<S>& x, const Exponent& p) {
    if constexpr (std::is_same_v<S, Rational>) {
        if (p.inf) {
            Rational mx(0);
            for (const S& v : x) mx = std::max(mx, rational_abs(v));
            return ExactValue(mx);
        }
        check_exact_exponent(p);
        long pe = static_cast<long>(numerator(p.p));
        Rational sum(0);
        for (const S& v : x) sum += rational_pow(rational_abs(v), pe);
        return ExactValue(PowerValue::from_rational(sum).pow(Rational(1) / p.p));
    } else {
        if (p.inf) {
            double mx = 0;
            for (double v : x) mx = std::max(mx, std::abs(v));
            return mx;
        }
        double pe = static_cast<double>(p.p);
        double sum = 0;
        for (double v : x) sum += std::pow(std::abs(v), pe);
        return std::pow(sum, 1.0 / pe);
    }
}

template <class S>
value_t<S> rank_one_norm(const std::vector<S>& a, const std::vector<S>& b, const std::vector<S>& c,
                         const SpaceSpec& spec) {
    if (static_cast<int>(a.size()) != spec.n || static_cast<int>(b.size()) != spec.n ||
        static_cast<int>(c.size()) != spec.n)
        throw PreconditionError("tensor_space", "rank-one factor dimension mismatch");
    return lp_norm(a, spec.p1) * lp_norm(b, spec.p2) * lp_norm(c, spec.p3);
}

ExactValue diagonal_norm(int n, const SpaceSpec& spec) {
    if (n < 1) throw PreconditionError("tensor_space", "dimension n must be positive");
    if (spec.inv_r() > 1)
        throw PreconditionError("tensor_space",
                                "the closed form n^{1/r} for the diagonal requires 1/r <= 1");
    return ExactValue(PowerValue::from_int(n).pow(spec.inv_r()));
}

ExactValue omega(const SpaceSpec& spec) {
    return ExactValue(PowerValue::from_int(spec.n).pow(spec.inv_r()));
}

// ------------------------------------------------------------- contractions

namespace {

template <class S>
S dot(const std::vector<S>& a, const std::vector<S>& b) {
    S s(0);
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

template <class S>
std::vector<S> contract1(const Tensor3<S>& T, const std::vector<S>& v, const std::vector<S>& w) {
    std::vector<S> g(T.n, S(0));
    for (int i = 0; i < T.n; ++i)
        for (int j = 0; j < T.n; ++j) {
            S partial(0);
            for (int k = 0; k < T.n; ++k) partial += T.at(i, j, k) * w[k];
            g[i] += v[j] * partial;
        }
    return g;
}

template <class S>
std::vector<S> contract2(const Tensor3<S>& T, const std::vector<S>& u, const std::vector<S>& w) {
    std::vector<S> g(T.n, S(0));
    for (int i = 0; i < T.n; ++i)
        for (int j = 0; j < T.n; ++j) {
            S partial(0);
            for (int k = 0; k < T.n; ++k) partial += T.at(i, j, k) * w[k];
            g[j] += u[i] * partial;
        }
    return g;
}

template <class S>
std::vector<S> contract3(const Tensor3<S>& T, const std::vector<S>& u, const std::vector<S>& v) {
    std::vector<S> g(T.n, S(0));
    for (int i = 0; i < T.n; ++i)
        for (int j = 0; j < T.n; ++j) {
            S uv = u[i] * v[j];
            for (int k = 0; k < T.n; ++k) g[k] += uv * T.at(i, j, k);
        }
    return g;
}

template <class S>
bool all_zero(const std::vector<S>& v) {
    return std::all_of(v.begin(), v.end(), [](const S& x) { return x == S(0); });
}

template <class S>
bool all_zero_tensor(const Tensor3<S>& T) {
    return std::all_of(T.e.begin(), T.e.end(), [](const S& x) { return x == S(0); });
}

/// Rescales g to max |entry| = 1 (no-op on zero); exact in rational mode.
template <class S>
void rescale(std::vector<S>& g) {
    S mx(0);
    for (const S& x : g) mx = std::max(mx, abs_scalar(x));
    if (mx == S(0)) return;
    for (S& x : g) x /= mx;
}

/// u maximizing <g,u>/||u||_{p'}: sign(g)|g|^{p-1} for finite p, the first
/// max-coordinate indicator for p = inf.  Exact over rationals for integer p.
template <class S>
std::vector<S> dualize(const std::vector<S>& g, const Exponent& p) {
    std::vector<S> u(g.size(), S(0));
    if (p.inf) {
        std::size_t best = 0;
        S mx(0);
        for (std::size_t i = 0; i < g.size(); ++i) {
            S a = abs_scalar(g[i]);
            if (a > mx) {
                mx = a;
                best = i;
            }
        }
        if (mx != S(0)) u[best] = S(sign_of(g[best]));
        return u;
    }
    if constexpr (std::is_same_v<S, Rational>) {
        check_exact_exponent(p);
        long pe = static_cast<long>(numerator(p.p)) - 1;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (g[i] == 0) continue;
            u[i] = rational_pow(rational_abs(g[i]), pe) * sign_of(g[i]);
        }
    } else {
        double pe = static_cast<double>(p.p) - 1.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (g[i] == 0) continue;
            u[i] = std::pow(std::abs(g[i]), pe) * sign_of(g[i]);
        }
    }
    return u;
}

/// ||dualize(g, p)||_{p'} for the dualized vector of g: (sum |g_i|^p)^{1/p'}.
template <class S>
value_t<S> dualized_norm(const std::vector<S>& g, const Exponent& p) {
    if (p.inf) {
        bool nz = !all_zero(g);
        if constexpr (std::is_same_v<S, Rational>)
            return ExactValue(Rational(nz ? 1 : 0));
        else
            return nz ? 1.0 : 0.0;
    }
    // |dualize(g)_i|^{p'} = |g_i|^p, so the dual norm is (sum |g_i|^p)^{1/p'}.
    if constexpr (std::is_same_v<S, Rational>) {
        check_exact_exponent(p);
        long pe = static_cast<long>(numerator(p.p));
        Rational sum(0);
        for (const S& x : g) sum += rational_pow(rational_abs(x), pe);
        return ExactValue(PowerValue::from_rational(sum).pow((p.p - 1) / p.p));
    } else {
        double pe = static_cast<double>(p.p);
        double sum = 0;
        for (double x : g) sum += std::pow(std::abs(x), pe);
        return std::pow(sum, (pe - 1.0) / pe);
    }
}

}  // namespace

// ------------------------------------------------------------------ slicing

namespace {

template <class S>
UpperBound<S> slicing_upper(const Tensor3<S>& T, const SpaceSpec& spec, bool materialize) {
    const int n = T.n;
    std::optional<value_t<S>> best;
    int best_axis = 2;
    for (int axis = 2; axis >= 0; --axis) {
        value_t<S> total = v_zero<S>();
        std::vector<S> fiber(n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                for (int c = 0; c < n; ++c) {
                    if (axis == 2)
                        fiber[c] = T.at(a, b, c);
                    else if (axis == 1)
                        fiber[c] = T.at(a, c, b);
                    else
                        fiber[c] = T.at(c, a, b);
                }
                total += lp_norm(fiber, spec.leg(axis));
            }
        if (!best || v_less<S>(total, *best)) {
            best = total;
            best_axis = axis;
        }
    }
    UpperBound<S> out;
    out.value = *best;
    out.method = "slicing(leg=" + std::to_string(best_axis + 1) + ")";
    if (materialize) {
        out.materialized = true;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                RankOneTerm<S> term;
                term.coeff = S(1);
                std::vector<S> fiber(n);
                bool nonzero = false;
                for (int c = 0; c < n; ++c) {
                    if (best_axis == 2)
                        fiber[c] = T.at(a, b, c);
                    else if (best_axis == 1)
                        fiber[c] = T.at(a, c, b);
                    else
                        fiber[c] = T.at(c, a, b);
                    nonzero = nonzero || fiber[c] != S(0);
                }
                if (!nonzero) continue;
                std::vector<S> ea(n, S(0)), eb(n, S(0));
                ea[a] = S(1);
                eb[b] = S(1);
                if (best_axis == 2) {
                    term.a = ea;
                    term.b = eb;
                    term.c = fiber;
                } else if (best_axis == 1) {
                    term.a = ea;
                    term.b = fiber;
                    term.c = eb;
                } else {
                    term.a = fiber;
                    term.b = ea;
                    term.c = eb;
                }
                out.terms.push_back(std::move(term));
            }
    }
    return out;
}

}  // namespace

// -------------------------------------------------- diagonal sign-averaging

template <class S>
bool is_diagonal(const Tensor3<S>& T) {
    T.validate();
    if constexpr (std::is_same_v<S, Rational>) {
        for (int i = 0; i < T.n; ++i)
            for (int j = 0; j < T.n; ++j)
                for (int k = 0; k < T.n; ++k)
                    if (!(i == j && j == k) && T.at(i, j, k) != 0) return false;
        return true;
    } else {
        double mx = 0;
        for (double v : T.e) mx = std::max(mx, std::abs(v));
        for (int i = 0; i < T.n; ++i)
            for (int j = 0; j < T.n; ++j)
                for (int k = 0; k < T.n; ++k)
                    if (!(i == j && j == k) && std::abs(T.at(i, j, k)) > 1e-14 * mx) return false;
        return true;
    }
}

namespace {

/// For diagonal d: sum_i d_i e_i^(x3) = E_{delta,eta}[(delta o eta o d) (x) delta (x) eta]
/// and its two leg rearrangements; value ||d||_{p_leg} * prod_{other} n^{1/p}.
template <class S>
UpperBound<S> averaging_upper(const Tensor3<S>& T, const SpaceSpec& spec, bool materialize) {
    const int n = T.n;
    std::vector<S> d(n);
    for (int i = 0; i < n; ++i) d[i] = T.at(i, i, i);

    std::optional<value_t<S>> best;
    int best_leg = 0;
    for (int leg = 0; leg < 3; ++leg) {
        Rational other_inv = spec.inv_r() - spec.leg(leg).inv();
        value_t<S> val = lp_norm(d, spec.leg(leg)) * v_ipow<S>(n, other_inv);
        if (!best || v_less<S>(val, *best)) {
            best = val;
            best_leg = leg;
        }
    }
    UpperBound<S> out;
    out.value = *best;
    out.method = "diag-averaging(leg=" + std::to_string(best_leg + 1) + ")";
    if (materialize && n <= 6) {
        out.materialized = true;
        S scale(1);
        if constexpr (std::is_same_v<S, Rational>)
            scale = Rational(Int(1), Int(1) << (2 * n));
        else
            scale = std::ldexp(1.0, -2 * n);
        for (std::uint64_t di = 0; di < (std::uint64_t(1) << n); ++di)
            for (std::uint64_t ei = 0; ei < (std::uint64_t(1) << n); ++ei) {
                RankOneTerm<S> term;
                term.coeff = scale;
                std::vector<S> delta(n), eta(n), mixed(n);
                for (int i = 0; i < n; ++i) {
                    delta[i] = ((di >> i) & 1) ? S(-1) : S(1);
                    eta[i] = ((ei >> i) & 1) ? S(-1) : S(1);
                    mixed[i] = delta[i] * eta[i] * d[i];
                }
                if (best_leg == 0) {
                    term.a = mixed;
                    term.b = delta;
                    term.c = eta;
                } else if (best_leg == 1) {
                    term.a = delta;
                    term.b = mixed;
                    term.c = eta;
                } else {
                    term.a = delta;
                    term.b = eta;
                    term.c = mixed;
                }
                out.terms.push_back(std::move(term));
            }
    }
    return out;
}

// ------------------------------------------------------------ ascent kernel

struct AscentResult {
    bool ok = false;
    double value = 0;
    std::vector<double> u, v, w;
};

/// Multi-start alternating Hoelder ascent over the dual unit balls;
/// deterministic given the seed, reduced by (value, start index).
AscentResult ascent_float(const Tensor3<double>& T, const SpaceSpec& spec, const PeelParams& par) {
    AscentResult best;
    if (all_zero_tensor(T)) return best;
    Rng rng(par.seed);
    const int n = T.n;
    for (int start = 0; start < par.starts; ++start) {
        std::vector<double> u(n, 1.0), v(n, 1.0), w(n, 1.0);
        if (start > 0)
            for (int i = 0; i < n; ++i) {
                u[i] = rng.sign();
                v[i] = rng.sign();
                w[i] = rng.sign();
            }
        double prev = -1, val = 0;
        for (int it = 0; it < par.max_iters; ++it) {
            auto step = [&](std::vector<double>& target, const std::vector<double>& g,
                            const Exponent& p) {
                std::vector<double> gg = g;
                rescale(gg);
                target = dualize(gg, p);
                double nrm = v_dbl<double>(dualized_norm(gg, p));
                if (nrm > 0)
                    for (double& x : target) x /= nrm;
            };
            step(u, contract1(T, v, w), spec.p1);
            step(v, contract2(T, u, w), spec.p2);
            auto g3 = contract3(T, u, v);
            step(w, g3, spec.p3);
            val = std::abs(dot(g3, w));
            if (!std::isfinite(val)) {
                val = 0;
                break;
            }
            if (prev >= 0 && std::abs(val - prev) <= par.rel_tol * std::max(1.0, std::abs(val))) break;
            prev = val;
        }
        if (val > best.value) {
            best.ok = val > 0;
            best.value = val;
            best.u = u;
            best.v = v;
            best.w = w;
        }
    }
    return best;
}

Rational snap(double x) {
    constexpr long long kGrid = 1 << 20;
    double scaled = x * kGrid;
    if (!(std::abs(scaled) < 9e18)) return Rational(0);
    return Rational(Int(static_cast<long long>(std::llround(scaled))), Int(kGrid));
}

std::vector<Rational> snap_vec(const std::vector<double>& v) {
    std::vector<Rational> out(v.size());
    bool nz = false;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = snap(v[i]);
        nz = nz || out[i] != 0;
    }
    if (!nz)
        for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] < 0 ? Rational(-1) : Rational(1);
    return out;
}

/// One exact sweep from a snapped start; returns the exact certified triple.
/// For a rank-one tensor a single sweep lands on the Hoelder-optimal duals,
/// so the returned value equals the product of factor norms exactly.
struct ExactAscent {
    bool ok = false;
    ExactValue value;
    std::vector<Rational> u, v, w;
    Rational pairing;
};

ExactAscent ascent_exact_polish(const Tensor3<Rational>& T, const SpaceSpec& spec,
                                const std::vector<double>& v_f, const std::vector<double>& w_f) {
    ExactAscent out;
    std::vector<Rational> v0 = snap_vec(v_f), w0 = snap_vec(w_f);
    std::vector<Rational> g1 = contract1(T, v0, w0);
    if (all_zero(g1)) return out;
    rescale(g1);
    std::vector<Rational> u = dualize(g1, spec.p1);
    ExactValue nu = dualized_norm(g1, spec.p1);

    std::vector<Rational> g2 = contract2(T, u, w0);
    if (all_zero(g2)) return out;
    rescale(g2);
    std::vector<Rational> v = dualize(g2, spec.p2);
    ExactValue nv = dualized_norm(g2, spec.p2);

    std::vector<Rational> g3 = contract3(T, u, v);
    if (all_zero(g3)) return out;
    rescale(g3);
    std::vector<Rational> w = dualize(g3, spec.p3);
    ExactValue nw = dualized_norm(g3, spec.p3);

    Rational pairing = dot(contract3(T, u, v), w);
    ExactValue denom = nu * nv * nw;
    if (denom.is_zero()) return out;
    out.ok = true;
    out.value = ExactValue(rational_abs(pairing)) * ExactValue(denom.as_power().inverse());
    out.u = std::move(u);
    out.v = std::move(v);
    out.w = std::move(w);
    out.pairing = pairing;
    return out;
}

// ------------------------------------------------------------------ peeling

template <class S>
std::size_t denominator_bits(const Tensor3<S>& T) {
    if constexpr (std::is_same_v<S, Rational>) {
        std::size_t bits = 0;
        for (const Rational& x : T.e) bits = std::max(bits, static_cast<std::size_t>(msb(denominator(x) + 1)));
        return bits;
    } else {
        (void)T;
        return 0;
    }
}

template <class S>
UpperBound<S> peeling_upper(const Tensor3<S>& T, const SpaceSpec& spec, const UpperParams& params) {
    const PeelParams& par = params.peel;
    Tensor3<S> R = T;
    value_t<S> acc = v_zero<S>();
    std::vector<RankOneTerm<S>> peeled;

    UpperBound<S> best = slicing_upper(R, spec, params.materialize);
    best.method = "peeling[0]+" + best.method;
    int accepted = 0;
    double first_val = -1;

    for (int step = 0; step < par.max_terms; ++step) {
        // Exact-mode denominators grow quickly under repeated dualization;
        // stop peeling once they pass a fixed budget (the bound so far stays valid).
        if constexpr (std::is_same_v<S, Rational>) {
            if (denominator_bits(R) > 4096) break;
        }
        PeelParams sp = par;
        sp.seed = par.seed + 0x9e37 * static_cast<std::uint64_t>(step);
        AscentResult dir = ascent_float(to_double_tensor(R), spec, sp);
        if (!dir.ok) break;
        if (first_val < 0) first_val = dir.value;
        if (dir.value < 1e-12 * std::max(1.0, first_val)) break;

        std::vector<S> u, v, w;
        if constexpr (std::is_same_v<S, Rational>) {
            ExactAscent pol = ascent_exact_polish(R, spec, dir.v, dir.w);
            if (!pol.ok) break;
            u = pol.u;
            v = pol.v;
            w = pol.w;
        } else {
            u = dir.u;
            v = dir.v;
            w = dir.w;
        }
        std::vector<S> x = contract1(R, v, w);
        std::vector<S> y = contract2(R, u, w);
        std::vector<S> z = contract3(R, u, v);
        S pairing = dot(z, w);
        if constexpr (std::is_same_v<S, Rational>) {
            if (pairing == 0) break;
        } else {
            if (std::abs(pairing) < 1e-14 * std::max(1.0, first_val)) break;
        }
        // Coefficient matched so the residual pairs to zero against u(x)v(x)w.
        S s = S(1) / (pairing * pairing);
        Tensor3<S> piece = Tensor3<S>::zeros(R.n);
        for (int i = 0; i < R.n; ++i)
            for (int j = 0; j < R.n; ++j) {
                S xy = x[i] * y[j];
                for (int k = 0; k < R.n; ++k) piece.at(i, j, k) = s * xy * z[k];
            }
        R -= piece;
        acc += v_from_abs<S>(s) * rank_one_norm(x, y, z, spec);
        peeled.push_back({s, x, y, z});
        ++accepted;

        UpperBound<S> tail = slicing_upper(R, spec, params.materialize);
        value_t<S> candidate = acc + tail.value;
        if (v_less<S>(candidate, best.value)) {
            best.value = candidate;
            best.method = "peeling[" + std::to_string(accepted) + "]+" + tail.method;
            if (params.materialize) {
                best.terms = peeled;
                best.terms.insert(best.terms.end(), tail.terms.begin(), tail.terms.end());
                best.materialized = true;
            }
        }
        if (all_zero_tensor(R)) break;
    }
    return best;
}

}  // namespace

// --------------------------------------------------------- projective_upper

template <class S>
UpperBound<S> projective_upper(const Tensor3<S>& T, const SpaceSpec& spec, const UpperParams& params) {
    T.validate();
    if (T.n != spec.n) throw PreconditionError("tensor_space", "tensor and space dimensions disagree");
    if (!params.slicing && !params.averaging && !params.peeling)
        throw PreconditionError("tensor_space", "no upper-bound strategy enabled");

    std::optional<UpperBound<S>> best;
    auto consider = [&](UpperBound<S>&& cand) {
        if (!best || v_less<S>(cand.value, best->value)) best = std::move(cand);
    };
    if (params.slicing) consider(slicing_upper(T, spec, params.materialize));
    if (params.averaging && is_diagonal(T)) consider(averaging_upper(T, spec, params.materialize));
    if (params.peeling) consider(peeling_upper(T, spec, params));
    if (!best) best = slicing_upper(T, spec, params.materialize);
    return *best;
}

// --------------------------------------------------------------- dual_lower

LowerMethod parse_lower_method(const std::string& s) {
    if (s == "rank_one_ascent") return LowerMethod::RankOneAscent;
    if (s == "diagonal_functional") return LowerMethod::DiagonalFunctional;
    if (s == "entry_functional") return LowerMethod::EntryFunctional;
    throw PreconditionError("tensor_space", "unknown lower-bound method '" + s + "'");
}

std::string lower_method_name(LowerMethod m) {
    switch (m) {
        case LowerMethod::RankOneAscent: return "rank_one_ascent";
        case LowerMethod::DiagonalFunctional: return "diagonal_functional";
        default: return "entry_functional";
    }
}

template <class S>
LowerBound<S> dual_lower(const Tensor3<S>& T, const SpaceSpec& spec, LowerMethod method,
                         const PeelParams& ascent) {
    T.validate();
    if (T.n != spec.n) throw PreconditionError("tensor_space", "tensor and space dimensions disagree");
    LowerBound<S> out;
    out.method = lower_method_name(method);

    if (method == LowerMethod::EntryFunctional) {
        S mx(0);
        int bi = 0, bj = 0, bk = 0;
        for (int i = 0; i < T.n; ++i)
            for (int j = 0; j < T.n; ++j)
                for (int k = 0; k < T.n; ++k)
                    if (abs_scalar(T.at(i, j, k)) > mx) {
                        mx = abs_scalar(T.at(i, j, k));
                        bi = i;
                        bj = j;
                        bk = k;
                    }
        out.value = v_from_abs<S>(mx);
        out.note = "e_" + std::to_string(bi + 1) + "*e_" + std::to_string(bj + 1) + "*e_" +
                   std::to_string(bk + 1);
        return out;
    }

    if (method == LowerMethod::DiagonalFunctional) {
        if (spec.inv_r() > 1)
            throw PreconditionError("tensor_space",
                                    "diagonal_functional requires 1/p1 + 1/p2 + 1/p3 <= 1");
        S trace(0);
        for (int i = 0; i < T.n; ++i) trace += T.at(i, i, i);
        // |sum_i T_iii| / n^{1 - 1/r}.
        out.value = v_from_abs<S>(trace) * v_ipow<S>(T.n, spec.inv_r() - 1);
        if constexpr (std::is_same_v<S, Rational>)
            out.note = "pairing " + format_rational(trace);
        else
            out.note = "pairing " + std::to_string(trace);
        return out;
    }

    AscentResult dir = ascent_float(to_double_tensor(T), spec, ascent);
    if (!dir.ok) {
        out.value = v_zero<S>();
        return out;
    }
    if constexpr (std::is_same_v<S, Rational>) {
        ExactAscent pol = ascent_exact_polish(T, spec, dir.v, dir.w);
        if (!pol.ok) {
            out.value = v_zero<S>();
            return out;
        }
        out.value = pol.value;
        out.u = pol.u;
        out.v = pol.v;
        out.w = pol.w;
    } else {
        out.value = dir.value;
        out.u = dir.u;
        out.v = dir.v;
        out.w = dir.w;
    }
    return out;
}

template <class S>
LowerBound<S> dual_lower_best(const Tensor3<S>& T, const SpaceSpec& spec, bool with_ascent,
                              const PeelParams& ascent) {
    LowerBound<S> best = dual_lower(T, spec, LowerMethod::EntryFunctional, ascent);
    if (spec.inv_r() <= 1) {
        LowerBound<S> diag = dual_lower(T, spec, LowerMethod::DiagonalFunctional, ascent);
        if (v_less<S>(best.value, diag.value)) best = std::move(diag);
    }
    if (with_ascent) {
        LowerBound<S> asc = dual_lower(T, spec, LowerMethod::RankOneAscent, ascent);
        if (v_less<S>(best.value, asc.value)) best = std::move(asc);
    }
    return best;
}

// ------------------------------------------------------- symmetry and embed

template <class S>
Tensor3<S> apply_symmetry(const Tensor3<S>& T, const std::vector<int>& pi, const std::vector<int>& sigma,
                          const std::vector<int>& tau, const std::vector<Sign>& eps,
                          const std::vector<Sign>& delta, const std::vector<Sign>& eta) {
    T.validate();
    const int n = T.n;
    auto check_perm = [&](const std::vector<int>& p) {
        if (static_cast<int>(p.size()) != n)
            throw PreconditionError("tensor_space", "permutation dimension mismatch");
        std::vector<bool> seen(n, false);
        for (int v : p) {
            if (v < 0 || v >= n || seen[v])
                throw PreconditionError("tensor_space", "not a permutation of {1..n}");
            seen[v] = true;
        }
    };
    check_perm(pi);
    check_perm(sigma);
    check_perm(tau);
    for (const auto* s : {&eps, &delta, &eta})
        if (static_cast<int>(s->size()) != n)
            throw PreconditionError("tensor_space", "sign vector dimension mismatch");

    Tensor3<S> out = Tensor3<S>::zeros(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                S v = T.at(pi[i], sigma[j], tau[k]);
                if (eps[i] * delta[j] * eta[k] < 0) v = -v;
                out.at(i, j, k) = v;
            }
    return out;
}

template <class S>
Tensor3<S> embed(const Tensor3<S>& T, int N) {
    T.validate();
    if (N < T.n) throw PreconditionError("tensor_space", "embedding dimension must satisfy N >= n");
    if (N == T.n) return T;
    Tensor3<S> out = Tensor3<S>::zeros(N);
    for (int i = 0; i < T.n; ++i)
        for (int j = 0; j < T.n; ++j)
            for (int k = 0; k < T.n; ++k) out.at(i, j, k) = T.at(i, j, k);
    return out;
}

OmegaReport omega_oracle(const std::function<double(const Tensor3<double>&)>& oracle, int n,
                         std::uint64_t budget, std::uint64_t seed) {
    if (n < 1 || n > 30) throw PreconditionError("tensor_space", "omega_oracle dimension out of range");
    OmegaReport rep;
    rep.seed = seed;
    auto eval_class = [&](std::uint64_t bits) {
        std::vector<Sign> eps(n, Sign(1));
        for (int i = 1; i < n; ++i) eps[i] = ((bits >> (i - 1)) & 1) ? Sign(-1) : Sign(1);
        Tensor3<double> T = Tensor3<double>::zeros(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) T.at(i, j, k) = double(eps[i]) * eps[j] * eps[k];
        double v = oracle(T);
        if (v > rep.value) {
            rep.value = v;
            rep.best = eps;
        }
        ++rep.tested;
    };
    const std::uint64_t classes = n > 1 ? (std::uint64_t(1) << (n - 1)) : 1;
    if (classes <= budget) {
        rep.exhaustive = true;
        for (std::uint64_t b = 0; b < classes; ++b) eval_class(b);
    } else {
        rep.exhaustive = false;
        Rng rng(seed);
        for (std::uint64_t it = 0; it < budget; ++it) eval_class(rng.below(classes));
    }
    return rep;
}

template <class S>
Tensor3<S> resum(const std::vector<RankOneTerm<S>>& terms, int n) {
    Tensor3<S> out = Tensor3<S>::zeros(n);
    for (const RankOneTerm<S>& t : terms) {
        if (static_cast<int>(t.a.size()) != n || static_cast<int>(t.b.size()) != n ||
            static_cast<int>(t.c.size()) != n)
            throw PreconditionError("tensor_space", "certificate term dimension mismatch");
        for (int i = 0; i < n; ++i) {
            if (t.a[i] == S(0)) continue;
            for (int j = 0; j < n; ++j) {
                if (t.b[j] == S(0)) continue;
                S ab = t.coeff * t.a[i] * t.b[j];
                for (int k = 0; k < n; ++k) out.at(i, j, k) += ab * t.c[k];
            }
        }
    }
    return out;
}

template <class S>
Tensor3<double> to_double_tensor(const Tensor3<S>& T) {
    Tensor3<double> out = Tensor3<double>::zeros(T.n);
    for (std::size_t i = 0; i < T.e.size(); ++i) out.e[i] = static_cast<double>(T.e[i]);
    return out;
}

// ----------------------------------------------------------- instantiations

template struct Tensor3<Rational>;
template struct Tensor3<double>;
template value_t<Rational> lp_norm(const std::vector<Rational>&, const Exponent&);
template value_t<double> lp_norm(const std::vector<double>&, const Exponent&);
template value_t<Rational> rank_one_norm(const std::vector<Rational>&, const std::vector<Rational>&,
                                         const std::vector<Rational>&, const SpaceSpec&);
template value_t<double> rank_one_norm(const std::vector<double>&, const std::vector<double>&,
                                       const std::vector<double>&, const SpaceSpec&);
template bool is_diagonal(const Tensor3<Rational>&);
template bool is_diagonal(const Tensor3<double>&);
template UpperBound<Rational> projective_upper(const Tensor3<Rational>&, const SpaceSpec&,
                                               const UpperParams&);
template UpperBound<double> projective_upper(const Tensor3<double>&, const SpaceSpec&,
                                             const UpperParams&);
template LowerBound<Rational> dual_lower(const Tensor3<Rational>&, const SpaceSpec&, LowerMethod,
                                         const PeelParams&);
template LowerBound<double> dual_lower(const Tensor3<double>&, const SpaceSpec&, LowerMethod,
                                       const PeelParams&);
template LowerBound<Rational> dual_lower_best(const Tensor3<Rational>&, const SpaceSpec&, bool,
                                              const PeelParams&);
template LowerBound<double> dual_lower_best(const Tensor3<double>&, const SpaceSpec&, bool,
                                            const PeelParams&);
template Tensor3<Rational> apply_symmetry(const Tensor3<Rational>&, const std::vector<int>&,
                                          const std::vector<int>&, const std::vector<int>&,
                                          const std::vector<Sign>&, const std::vector<Sign>&,
                                          const std::vector<Sign>&);
template Tensor3<double> apply_symmetry(const Tensor3<double>&, const std::vector<int>&,
                                        const std::vector<int>&, const std::vector<int>&,
                                        const std::vector<Sign>&, const std::vector<Sign>&,
                                        const std::vector<Sign>&);
template Tensor3<Rational> embed(const Tensor3<Rational>&, int);
template Tensor3<double> embed(const Tensor3<double>&, int);
template Tensor3<Rational> resum(const std::vector<RankOneTerm<Rational>>&, int);
template Tensor3<double> resum(const std::vector<RankOneTerm<double>>&, int);
template Tensor3<double> to_double_tensor(const Tensor3<Rational>&);
template Tensor3<double> to_double_tensor(const Tensor3<double>&);

}  // namespace cotypelab::tensor
