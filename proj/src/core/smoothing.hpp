#pragma once

#include <array>
#include <string>
#include <vector>

#include "core/ldc.hpp"
#include "core/rational.hpp"

namespace cotypelab::smoothing {

/// The inner code padded to length 3n: first n coordinates follow the code,
/// the remaining 2n are constantly +1.
struct PaddedCode {
    ldc::BinaryCode inner;

    int three_n() const { return 3 * inner.n; }
    ldc::Word encode(const SignVector& eps) const;
};

/// A candidate or selected decoding set for one bit: up to three distinct
/// 1-based coordinates of the padded code, its sign and its exact bias
/// P = Prob[prod = delta * eps_t] >= 1/2 over clean codewords.
struct Triple {
    std::array<int, 3> idx{};  // ascending; entries beyond `size` are 0 until completed
    int size = 0;
    Sign delta = 1;
    Rational bias;
};

/// Per-bit packaging of disjoint triples as three permutations of {1..3n}
/// plus signs: the j-th triple is (pi[j], sigma[j], tau[j]) for j < J.
struct SmoothedCode {
    struct PerBit {
        std::vector<int> pi, sigma, tau;  // each a bijection of {1..3n}, 1-based
        std::vector<Sign> signs;          // size J
        std::vector<Rational> biases;     // size J
        int J = 0;
    };

    PaddedCode padded;
    Rational theta;  // quality parameter the family was built against
    Rational phi;
    std::vector<PerBit> bits;  // size m

    int m() const { return padded.inner.m; }
    int n() const { return padded.inner.n; }
    int three_n() const { return padded.three_n(); }
    int j_min() const;
    void validate() const;
};

PaddedCode pad_code(const ldc::BinaryCode& code);

/// Exact bias of the product over S (1-based indices into the padded word)
/// against eps_t: returns (delta, P) with P = max(p, 1-p) >= 1/2 where
/// p = Prob[prod_{s in S} C'(eps)_s = eps_t] over uniform messages.
std::pair<Sign, Rational> triple_bias(const PaddedCode& pc, int t, const std::vector<int>& S);

/// All subsets of each decoder query's support with bias >= 1/2 + theta/16,
/// deduplicated, one pool per bit.
std::vector<std::vector<Triple>> harvest_triples(const ldc::BinaryCode& code,
                                                 const ldc::LocalDecoder& dec, const Rational& theta);

/// Greedy disjoint packing (bias descending, then lexicographic), followed by
/// completion to size 3 with the lowest-indexed unused padding coordinates.
/// Emits a warning line when J_t falls short of ceil(phi*theta*n/9); throws
/// when the pool yields no triple at all.
std::vector<Triple> build_family(const std::vector<Triple>& pool, int t, const Rational& theta,
                                 const Rational& phi, const PaddedCode& pc,
                                 std::vector<std::string>& warnings);

/// Packages per-bit families into permutations and signs, re-verifying every
/// recorded bias from the permutations alone.
SmoothedCode to_smoothed(const std::vector<std::vector<Triple>>& families, const PaddedCode& pc,
                         const Rational& theta, const Rational& phi);

/// pad -> harvest -> pack -> verify.
SmoothedCode smooth(const ldc::BinaryCode& code, const ldc::LocalDecoder& dec, const Rational& theta,
                    const Rational& phi, std::vector<std::string>& warnings);

}  // namespace cotypelab::smoothing
