#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "core/rational.hpp"

namespace cotypelab {

inline std::uint64_t fnv1a64(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ull) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

/// Fans a root seed out to per-stage streams so stages stay decoupled.
struct SeedFan {
    std::uint64_t root = 0;
    std::uint64_t stage(std::string_view name) const { return fnv1a64(name, root ^ 0x9e3779b97f4a7c15ull); }
};

/// Deterministic RNG wrapper; all sampling goes through explicit helpers so
/// output streams do not depend on std::distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }

    /// Uniform in [0, bound) via rejection; bound > 0.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = bound * (UINT64_MAX / bound);
        std::uint64_t x;
        do {
            x = eng_();
        } while (x >= limit);
        return x % bound;
    }

    int sign() { return (eng_() & 1) ? -1 : 1; }

    double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    /// Random rational with |numerator| <= max_num and denominator in [1, max_den].
    Rational rational(std::uint64_t max_num, std::uint64_t max_den) {
        Int num(static_cast<long long>(below(2 * max_num + 1)) - static_cast<long long>(max_num));
        Int den(static_cast<long long>(below(max_den) + 1));
        return Rational(num, den);
    }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace cotypelab
