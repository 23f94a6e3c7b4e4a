#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "core/rational.hpp"
#include "core/smoothing.hpp"
#include "core/tensor.hpp"
#include "core/values.hpp"

namespace cotypelab::cotype {

using num::ExactValue;
using tensor::SpaceSpec;
using tensor::Tensor3;

/// The level-one Fourier tensors f^({t}) of f(eps) = C'(eps)^(x3).
struct WitnessFamily {
    int m = 0;
    int dim = 0;  // 3n
    std::vector<Tensor3<Rational>> x;
    std::string provenance;
};

/// Precomputed padded codewords, one per message, in canonical order.
struct CodewordTable {
    int m = 0;
    int dim = 0;
    std::vector<ldc::Word> words;
};

CodewordTable tabulate(const smoothing::SmoothedCode& sc);

/// Exact entry (u,v,w) (0-based) of the t-th witness (t 1-based):
/// (1/2^m) sum_eps eps_t C'(eps)_u C'(eps)_v C'(eps)_w.
Rational witness_entry(const CodewordTable& tab, int t, int u, int v, int w);

Tensor3<Rational> witness_tensor(const CodewordTable& tab, int t);

/// sum_t signs_t * x_t, computed in one pass over messages.
Tensor3<Rational> sign_combination(const CodewordTable& tab, const SignVector& signs);

/// Materializes the whole family; refuses m > 12 (the enumeration and the
/// (3n)^3 tensors stop being desk-scale beyond that).
WitnessFamily build_hat(const smoothing::SmoothedCode& sc);

struct MembershipRow {
    int t = 0, j = 0;  // 1-based
    cotypelab::Rational margin;
};

struct MembershipReport {
    std::vector<MembershipRow> rows;
    std::vector<Rational> alpha_per_bit;
    std::vector<int> j_per_bit;
    Rational alpha_min;
    Rational alpha_threshold;
    bool pass = false;
    int j_total = 0;
};

/// Margins recomputed from raw witness entries, independent of the biases
/// recorded by the smoothing stage.
MembershipReport s_membership(const WitnessFamily& w, const smoothing::SmoothedCode& sc,
                              const Rational& alpha);
/// Streaming variant (no materialized witnesses).
MembershipReport s_membership(const smoothing::SmoothedCode& sc, const Rational& alpha);

/// alpha * (J / (3n)) * ||diag||/K with ||diag|| = (3n)^{1/r}: the norm lower
/// bound the symmetrization lemma yields for members of S(alpha, J/(3n)).
ExactValue s_lower_bound(const Rational& alpha_min, int J, const SpaceSpec& spec3n, const Rational& K);

/// Permutation witness for S-membership: the first `pinned` diagonal slots of
/// (pi, sigma, tau) carry the large entries.  Permutations are 0-based.
struct PermWitness {
    std::vector<int> pi, sigma, tau;
    int pinned = 0;
};

/// Entry (i,j,k) = eps_i delta_j s_k * a_{pi(rho(i)), sigma(rho(j)), tau(rho(k))}
/// where s_k = eta_k off the pinned prefix and eps_k delta_k sign(a_diag) on it.
Tensor3<Rational> symmetrize(const Tensor3<Rational>& x, const PermWitness& pw,
                             const std::vector<Sign>& eps, const std::vector<Sign>& delta,
                             const std::vector<Sign>& eta, const std::vector<int>& rho);

/// Exact mean over all signs and permutations, via per-entry local sign
/// enumeration; asserts the closed form
///   (sum_{l<=pinned} |a_{pi(l),sigma(l),tau(l)}| / n) * sum_j e_j^(x3)
/// and returns it.  Refused for n > 6.
Tensor3<Rational> symmetrize_mean_exact(const Tensor3<Rational>& x, const PermWitness& pw);

struct McMean {
    Tensor3<double> mean;
    Tensor3<double> stderr_;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
};

McMean symmetrize_mean_mc(const Tensor3<Rational>& x, const PermWitness& pw, std::uint64_t seed,
                          std::uint64_t samples);

/// E|sum_{t=1}^m delta_t| over uniform signs, exactly.
Rational mean_abs_sign_sum(int m);

struct RadUpperOptions {
    bool use_projective = true;  // strategy (a): projective_upper of the sign sum
    bool use_averaging = true;   // strategy (b): E|sum delta| * Omega
    tensor::UpperParams upper;
};

struct RadUpper {
    ExactValue value;
    std::string method;
};

/// Upper bound on ||sum_t eps_t x_t||: min of the enabled strategies.
RadUpper rad_sum_upper(const Tensor3<Rational>& sign_sum, int m, const SpaceSpec& spec,
                       const RadUpperOptions& opt);
RadUpper rad_sum_upper(const WitnessFamily& w, const SignVector& eps, const SpaceSpec& spec,
                       const RadUpperOptions& opt);

struct CertifyOptions {
    RadUpperOptions rad;
    bool witness_lower_entry = true;
    bool witness_lower_diagonal = true;
    bool witness_lower_ascent = false;
    std::uint64_t seed = 0;
};

struct Certificate {
    Rational q;
    SpaceSpec spec;  // dimension 3n
    int m = 0, n = 0;
    Rational theta, phi;
    Rational alpha_min;
    Rational alpha_threshold;
    int j_min = 0;

    struct PerWitness {
        ExactValue L;
        std::string method;
        Rational alpha;
        int J = 0;
    };
    struct PerSign {
        ExactValue U;
        std::string method;
    };
    std::vector<PerWitness> per_witness;
    std::vector<PerSign> per_sign;  // indexed by canonical sign order
    ExactValue numerator_qth;       // sum_t L_t^q
    ExactValue denominator_sq;      // (1/2^m) sum_eps U(eps)^2
    double value = 0;               // directed-rounded ratio
    std::string inputs_hash;
    std::vector<std::string> warnings;
};

/// The full certificate pipeline.  Sound by construction: every L is a valid
/// norm lower bound, every U a valid upper bound, and the final roots are
/// rounded one-sidedly (numerator down, denominator up).
Certificate certify(const smoothing::SmoothedCode& sc, const SpaceSpec& spec, const Rational& q,
                    const Rational& theta, const CertifyOptions& opt, const std::string& inputs_hash);

/// Definitional cotype-q ratio (sum ||x_i||^q)^{1/q} / sqrt(E ||sum eps x||^2)
/// with oracle-evaluated norms; a lower bound on C_q for any space containing
/// the family.  Requires m <= 16.
double cotype_ratio(const std::vector<Tensor3<Rational>>& xs, const Rational& q,
                    const std::function<double(const Tensor3<Rational>&)>& oracle);

}  // namespace cotypelab::cotype
