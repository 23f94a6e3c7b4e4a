#pragma once

#include <cstdint>
#include <vector>

#include "core/errors.hpp"

namespace cotypelab {

using Sign = std::int8_t;  // exactly -1 or +1

/// A point of the discrete cube {-1,+1}^m.  Canonical enumeration order:
/// coordinate 1 is the fastest-varying bit, bit 0 -> +1 and bit 1 -> -1.
struct SignVector {
    std::vector<Sign> s;

    SignVector() = default;
    explicit SignVector(std::vector<Sign> v) : s(std::move(v)) { validate(); }

    static SignVector from_index(int m, std::uint64_t idx) {
        SignVector v;
        v.s.resize(m);
        for (int i = 0; i < m; ++i) v.s[i] = ((idx >> i) & 1) ? Sign(-1) : Sign(+1);
        return v;
    }

    int dim() const { return static_cast<int>(s.size()); }

    /// 1-based coordinate access.
    Sign at1(int i) const {
        if (i < 1 || i > dim()) throw PreconditionError("sign_vector", "coordinate index out of range");
        return s[i - 1];
    }

    std::uint64_t index() const {
        std::uint64_t idx = 0;
        for (int i = 0; i < dim(); ++i)
            if (s[i] < 0) idx |= (std::uint64_t(1) << i);
        return idx;
    }

    void validate() const {
        for (Sign x : s)
            if (x != 1 && x != -1) throw PreconditionError("sign_vector", "entries must be -1 or +1");
    }
};

/// W_A(eps) for A given as a bitmask over coordinates 1..m (bit i-1 <-> i).
inline int walsh_sign(std::uint64_t mask, std::uint64_t point_index) {
    return (__builtin_popcountll(mask & point_index) & 1) ? -1 : 1;
}

}  // namespace cotypelab
