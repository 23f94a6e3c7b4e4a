#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "core/rational.hpp"
#include "core/sign_vector.hpp"

namespace cotypelab::ldc {

using Word = std::vector<Sign>;

/// A binary code {-1,1}^m -> {-1,1}^n, either as an explicit table of 2^m
/// codewords or in structured Walsh-character form (coordinate a+1 evaluates
/// the character with mask a, so n = 2^m).
struct BinaryCode {
    enum class Form { Explicit, Walsh };

    int m = 0;
    int n = 0;
    Form form = Form::Explicit;
    std::vector<Word> codewords;  // explicit form only

    Word encode(const SignVector& eps) const;
    void validate() const;
};

/// One 3-index query with its decoding truth table g: {-1,1}^3 -> {-1,1}.
/// The table is stored in canonical sign order over (x, y, z) with x fastest:
/// index bit0 = (x<0), bit1 = (y<0), bit2 = (z<0).
struct DecodingQuery {
    int i = 0, j = 0, k = 0;  // 1-based coordinates
    std::array<Sign, 8> g{};

    Sign eval(Sign x, Sign y, Sign z) const {
        int idx = (x < 0 ? 1 : 0) | (y < 0 ? 2 : 0) | (z < 0 ? 4 : 0);
        return g[idx];
    }
};

struct WeightedQuery {
    DecodingQuery query;
    Rational weight;  // positive; weights sum to 1 per bit
};

struct LocalDecoder {
    int m = 0;
    int n = 0;
    std::vector<std::vector<WeightedQuery>> per_bit;  // size m

    void validate() const;
};

struct QualityReport {
    enum class Regime { Exhaustive, Sampled };

    Rational phi;
    Rational theta_margin;  // min over tested cases of success prob - 1/2
    Regime regime = Regime::Exhaustive;
    std::uint64_t tested_count = 0;
    std::uint64_t seed = 0;
    // Worst case seen, for diagnostics.
    int worst_bit = 0;
    std::uint64_t worst_message = 0;
    std::vector<int> worst_flips;
};

/// The Walsh-character instance: n = 2^m, and bit t is decoded by the query
/// (pos(a), pos(a xor e_t), pos(a)) with g(x,y,z) = x*y, uniformly over a.
std::pair<BinaryCode, LocalDecoder> hadamard_code(int m);

/// Flips the entries of `word` at the (1-based) positions in S.
Word corrupt(const Word& word, const std::set<int>& S);

/// Probability, under the decoder's distribution for bit t, that the decoded
/// sign equals `target` when reading from `word`.  Exact.
Rational decode_success_prob(const LocalDecoder& dec, int t, const Word& word, Sign target);

enum class QualityMode { Exhaustive, Sampled };

/// Exhaustive mode enumerates all messages, all corruption sets of weight
/// <= floor(phi*n) and all bits, and reports the exact worst-case margin; it
/// refuses if 2^m * sum_w C(n,w) * m exceeds `budget`.  Sampled mode draws
/// `samples` random cases and reports the minimum seen: an upper bound on the
/// worst case, never a guarantee.
QualityReport evaluate_quality(const BinaryCode& code, const LocalDecoder& dec, const Rational& phi,
                               QualityMode mode, std::uint64_t budget, std::uint64_t seed,
                               std::uint64_t samples = 0);

}  // namespace cotypelab::ldc
