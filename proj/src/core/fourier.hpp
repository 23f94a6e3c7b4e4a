#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "core/rational.hpp"
#include "core/sign_vector.hpp"

namespace cotypelab::fourier {

/// A total map {-1,+1}^m -> R^d stored in canonical sign-vector order.
/// S is Rational (exact mode, the default for certificate work) or double.
template <class S>
struct CubeFunction {
    int m = 0;
    int d = 0;
    std::vector<S> table;  // (1<<m) rows of d entries

    static CubeFunction zero(int m, int d);

    const S* row(std::uint64_t idx) const { return table.data() + idx * d; }
    S* row(std::uint64_t idx) { return table.data() + idx * d; }
    std::uint64_t rows() const { return std::uint64_t(1) << m; }

    void validate() const;
};

/// Walsh coefficients indexed by subset bitmask.  When level_cap is set only
/// masks of popcount <= level_cap are present and reconstruction is refused.
template <class S>
struct FourierTable {
    int m = 0;
    int d = 0;
    std::optional<int> level_cap;
    std::map<std::uint64_t, std::vector<S>> coefficients;
};

/// prod_{i in A} eps_i; +1 for the empty set.
int walsh_eval(std::uint64_t mask, const SignVector& eps, int m);

template <class S>
std::vector<S> fourier_coefficient(const CubeFunction<S>& f, std::uint64_t mask);

template <class S>
FourierTable<S> full_transform(const CubeFunction<S>& f);

template <class S>
FourierTable<S> transform_up_to_level(const CubeFunction<S>& f, int level_cap);

/// [ f^({1}), ..., f^({m}) ].
template <class S>
std::vector<std::vector<S>> level_one(const CubeFunction<S>& f);

/// eps -> sum_i eps_i f^({i}).
template <class S>
CubeFunction<S> rademacher_projection(const CubeFunction<S>& f);

/// Walsh expansion; requires a full (uncapped) table.
template <class S>
CubeFunction<S> reconstruct(const FourierTable<S>& t);

/// sqrt(E||Rad(f)||_2^2 / E||f||_2^2); 0 when f vanishes.  Reported instead
/// of asserting any K-convexity inequality with an unspecified constant.
template <class S>
double rademacher_ratio(const CubeFunction<S>& f);

}  // namespace cotypelab::fourier
