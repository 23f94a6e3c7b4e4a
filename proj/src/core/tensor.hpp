#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "core/rational.hpp"
#include "core/sign_vector.hpp"
#include "core/values.hpp"

namespace cotypelab::tensor {

using num::Cmp;
using num::ExactValue;
using num::PowerValue;

/// An lp exponent in (1, inf]; infinity is represented explicitly so dual
/// exponents stay symbolic.
struct Exponent {
    bool inf = false;
    Rational p;  // valid iff !inf; p > 1

    static Exponent infinity() { return {true, Rational(0)}; }
    static Exponent finite(const Rational& p);
    static Exponent parse(const std::string& s);

    Rational inv() const { return inf ? Rational(0) : Rational(1) / p; }
    bool integral() const { return inf || denominator(p) == 1; }
    /// Dual exponent p/(p-1) as a rational (1 for p = inf).
    Rational dual() const { return inf ? Rational(1) : p / (p - 1); }
    std::string str() const;
    bool operator==(const Exponent&) const = default;
};

struct SpaceSpec {
    Exponent p1, p2, p3;
    int n = 0;

    /// Checks p_i in (1, inf] and, unless `exploratory`, the certification
    /// requirement 1/p1 + 1/p2 + 1/p3 <= 1.
    static SpaceSpec make(Exponent p1, Exponent p2, Exponent p3, int n, bool exploratory = false);

    Rational inv_r() const { return p1.inv() + p2.inv() + p3.inv(); }
    bool certifiable() const { return inv_r() <= 1; }
    SpaceSpec with_n(int nn) const;
    const Exponent& leg(int axis) const;  // axis in {0,1,2}
};

/// Dense order-3 tensor, row-major with the last index fastest; 0-based
/// internally, 1-based at JSON and API boundaries.
template <class S>
struct Tensor3 {
    int n = 0;
    std::vector<S> e;

    static Tensor3 zeros(int n);

    S& at(int i, int j, int k) { return e[(std::size_t(i) * n + j) * n + k]; }
    const S& at(int i, int j, int k) const { return e[(std::size_t(i) * n + j) * n + k]; }

    void validate() const;
    Tensor3& operator+=(const Tensor3& rhs);
    Tensor3& operator-=(const Tensor3& rhs);
    Tensor3& operator*=(const S& c);
    bool operator==(const Tensor3&) const = default;
};

template <class S>
struct ValueOf {
    using type = double;
};
template <>
struct ValueOf<Rational> {
    using type = ExactValue;
};
/// Norm values: exact symbolic sums in rational mode, doubles in float mode.
template <class S>
using value_t = typename ValueOf<S>::type;

template <class S>
struct RankOneTerm {
    S coeff;
    std::vector<S> a, b, c;
};

template <class S>
struct UpperBound {
    value_t<S> value{};
    std::string method;
    std::vector<RankOneTerm<S>> terms;  // exact decomposition, when materialized
    bool materialized = false;
};

template <class S>
struct LowerBound {
    value_t<S> value{};
    std::string method;
    // For rank_one_ascent: the (unnormalized) dual functional u (x) v (x) w.
    std::vector<S> u, v, w;
    std::string note;
};

struct PeelParams {
    int starts = 32;
    int max_iters = 500;
    double rel_tol = 1e-12;
    int max_terms = 8;
    std::uint64_t seed = 0;
};

struct UpperParams {
    bool slicing = true;
    bool averaging = true;
    bool peeling = true;
    bool materialize = false;
    PeelParams peel;
};

enum class LowerMethod { RankOneAscent, DiagonalFunctional, EntryFunctional };
LowerMethod parse_lower_method(const std::string& s);
std::string lower_method_name(LowerMethod);

/// ||a||_p exactly; rational mode requires an integral exponent (or inf).
template <class S>
value_t<S> lp_norm(const std::vector<S>& x, const Exponent& p);

/// ||a||_{p1} * ||b||_{p2} * ||c||_{p3}: the exact projective norm of a(x)b(x)c.
template <class S>
value_t<S> rank_one_norm(const std::vector<S>& a, const std::vector<S>& b, const std::vector<S>& c,
                         const SpaceSpec& spec);

/// n^{1/r}, the exact projective norm of sum_i e_i(x)e_i(x)e_i; requires 1/r <= 1.
ExactValue diagonal_norm(int n, const SpaceSpec& spec);

/// max over sign vectors of ||eps(x)eps(x)eps|| = n^{1/r} for the lp norm.
ExactValue omega(const SpaceSpec& spec);

template <class S>
bool is_diagonal(const Tensor3<S>& T);

template <class S>
UpperBound<S> projective_upper(const Tensor3<S>& T, const SpaceSpec& spec, const UpperParams& params);

template <class S>
LowerBound<S> dual_lower(const Tensor3<S>& T, const SpaceSpec& spec, LowerMethod method,
                         const PeelParams& ascent = {});

/// Best of the three lower methods (ascent only when `with_ascent`).
template <class S>
LowerBound<S> dual_lower_best(const Tensor3<S>& T, const SpaceSpec& spec, bool with_ascent,
                              const PeelParams& ascent = {});

/// Entry (i,j,k) of the result is eps_i delta_j eta_k * T(pi(i), sigma(j), tau(k)).
/// Permutations are 0-based bijections of {0..n-1}; signs have length n.
template <class S>
Tensor3<S> apply_symmetry(const Tensor3<S>& T, const std::vector<int>& pi, const std::vector<int>& sigma,
                          const std::vector<int>& tau, const std::vector<Sign>& eps,
                          const std::vector<Sign>& delta, const std::vector<Sign>& eta);

/// Zero-padding into dimension N >= n; the lp projective norm is unchanged.
template <class S>
Tensor3<S> embed(const Tensor3<S>& T, int N);

struct OmegaReport {
    double value = 0;
    bool exhaustive = false;
    std::uint64_t tested = 0;
    std::uint64_t seed = 0;
    std::vector<Sign> best;
};

/// Max of oracle(eps(x)eps(x)eps) over sign classes: exhaustive over 2^{n-1}
/// classes when that fits the budget, otherwise a sampled lower estimate.
OmegaReport omega_oracle(const std::function<double(const Tensor3<double>&)>& oracle, int n,
                         std::uint64_t budget, std::uint64_t seed);

/// Re-sums a materialized decomposition; used by certificate validation.
template <class S>
Tensor3<S> resum(const std::vector<RankOneTerm<S>>& terms, int n);

template <class S>
Tensor3<double> to_double_tensor(const Tensor3<S>& T);

}  // namespace cotypelab::tensor
