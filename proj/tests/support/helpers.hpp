#pragma once

// Shared test fixtures and independent oracles.  Everything here recomputes
// results by direct enumeration, deliberately not sharing code paths with
// the implementations under test.

#include <set>
#include <vector>

#include "core/cotype.hpp"
#include "core/ldc.hpp"
#include "core/rng.hpp"
#include "core/smoothing.hpp"
#include "core/tensor.hpp"

namespace testsupport {

using namespace cotypelab;

inline SignVector sv(std::initializer_list<int> xs) {
    std::vector<Sign> v;
    for (int x : xs) v.push_back(static_cast<Sign>(x));
    return SignVector(v);
}

inline std::vector<Sign> signs(std::initializer_list<int> xs) { return sv(xs).s; }

inline tensor::Exponent fex(long p) { return tensor::Exponent::finite(Rational(p)); }
inline tensor::Exponent inf_exp() { return tensor::Exponent::infinity(); }

inline tensor::SpaceSpec space(long p1, long p2, long p3, int n) {
    return tensor::SpaceSpec::make(fex(p1), fex(p2), fex(p3), n, /*exploratory=*/true);
}

inline tensor::SpaceSpec space_inf(int n) {
    return tensor::SpaceSpec::make(inf_exp(), inf_exp(), inf_exp(), n);
}

// ------------------------------------------------------------- small codes

/// C(eps) = (eps_1): one message bit, block length 1.
inline std::pair<ldc::BinaryCode, ldc::LocalDecoder> one_bit_code() {
    ldc::BinaryCode code;
    code.m = 1;
    code.n = 1;
    code.form = ldc::BinaryCode::Form::Explicit;
    code.codewords = {{Sign(1)}, {Sign(-1)}};
    ldc::LocalDecoder dec;
    dec.m = 1;
    dec.n = 1;
    ldc::DecodingQuery q;
    q.i = q.j = q.k = 1;
    for (int idx = 0; idx < 8; ++idx) q.g[idx] = (idx & 1) ? Sign(-1) : Sign(1);  // g = x
    dec.per_bit = {{{q, Rational(1)}}};
    return {code, dec};
}

/// C(eps) = eps: the identity code on m bits (n = m), decoded by reading the
/// matching coordinate three times.
inline std::pair<ldc::BinaryCode, ldc::LocalDecoder> identity_code(int m) {
    ldc::BinaryCode code;
    code.m = m;
    code.n = m;
    code.form = ldc::BinaryCode::Form::Explicit;
    for (std::uint64_t msg = 0; msg < (std::uint64_t(1) << m); ++msg) {
        SignVector eps = SignVector::from_index(m, msg);
        code.codewords.push_back(eps.s);
    }
    ldc::LocalDecoder dec;
    dec.m = m;
    dec.n = m;
    for (int t = 1; t <= m; ++t) {
        ldc::DecodingQuery q;
        q.i = q.j = q.k = t;
        for (int idx = 0; idx < 8; ++idx) q.g[idx] = (idx & 1) ? Sign(-1) : Sign(1);
        dec.per_bit.push_back({{q, Rational(1)}});
    }
    return {code, dec};
}

// --------------------------------------------------------------- oracles

/// Worst-case decoding margin by direct enumeration (independent of
/// ldc::evaluate_quality).
inline Rational brute_quality_margin(const ldc::BinaryCode& code, const ldc::LocalDecoder& dec,
                                     const Rational& phi) {
    const int n = code.n, m = code.m;
    const Rational phi_n = phi * n;
    const int W = static_cast<int>(rational_floor(phi_n));
    Rational worst;
    bool first = true;
    std::vector<int> subset;
    auto visit = [&](const ldc::Word& word, const SignVector& eps) {
        for (int t = 1; t <= m; ++t) {
            Rational p(0);
            for (const auto& wq : dec.per_bit[t - 1]) {
                if (wq.query.eval(word[wq.query.i - 1], word[wq.query.j - 1],
                                  word[wq.query.k - 1]) == eps.at1(t))
                    p += wq.weight;
            }
            Rational margin = p - Rational(1, 2);
            if (first || margin < worst) worst = margin;
            first = false;
        }
    };
    std::function<void(int, int, ldc::Word&, const SignVector&)> rec =
        [&](int start, int left, ldc::Word& word, const SignVector& eps) {
            visit(word, eps);
            if (left == 0) return;
            for (int pos = start; pos <= n; ++pos) {
                word[pos - 1] = static_cast<Sign>(-word[pos - 1]);
                rec(pos + 1, left - 1, word, eps);
                word[pos - 1] = static_cast<Sign>(-word[pos - 1]);
            }
        };
    for (std::uint64_t msg = 0; msg < (std::uint64_t(1) << m); ++msg) {
        SignVector eps = SignVector::from_index(m, msg);
        ldc::Word word = code.encode(eps);
        rec(1, W, word, eps);
    }
    return worst;
}

/// Prob[prod_{s in S} C'(eps)_s = eps_t] by direct enumeration.
inline Rational brute_product_bias(const smoothing::PaddedCode& pc, int t,
                                   const std::vector<int>& S) {
    const int m = pc.inner.m;
    Int agree(0);
    for (std::uint64_t msg = 0; msg < (std::uint64_t(1) << m); ++msg) {
        SignVector eps = SignVector::from_index(m, msg);
        ldc::Word w = pc.encode(eps);
        int prod = 1;
        for (int s : S) prod *= w[s - 1];
        if (prod == eps.at1(t)) ++agree;
    }
    return Rational(agree, Int(1) << m);
}

/// E[eps_t * C'(eps)_u C'(eps)_v C'(eps)_w] by direct enumeration (1-based
/// coordinates).
inline Rational brute_witness_entry(const smoothing::PaddedCode& pc, int t, int u, int v, int w) {
    const int m = pc.inner.m;
    Rational acc(0);
    for (std::uint64_t msg = 0; msg < (std::uint64_t(1) << m); ++msg) {
        SignVector eps = SignVector::from_index(m, msg);
        ldc::Word cw = pc.encode(eps);
        acc += Rational(eps.at1(t) * cw[u - 1] * cw[v - 1] * cw[w - 1]);
    }
    return acc / rational_pow(Rational(2), m);
}

/// Full enumeration of E[x^rho_{eps,delta,eta}] over all signs and
/// permutations; the independent check of the symmetrization identity.
inline tensor::Tensor3<Rational> brute_symmetrize_mean(const tensor::Tensor3<Rational>& x,
                                                       const cotype::PermWitness& pw) {
    const int n = x.n;
    tensor::Tensor3<Rational> total = tensor::Tensor3<Rational>::zeros(n);
    std::vector<int> rho(n);
    for (int i = 0; i < n; ++i) rho[i] = i;
    Int draws(0);
    do {
        for (std::uint64_t e = 0; e < (std::uint64_t(1) << n); ++e)
            for (std::uint64_t d = 0; d < (std::uint64_t(1) << n); ++d)
                for (std::uint64_t h = 0; h < (std::uint64_t(1) << n); ++h) {
                    ++draws;
                    std::vector<Sign> eps = SignVector::from_index(n, e).s;
                    std::vector<Sign> del = SignVector::from_index(n, d).s;
                    std::vector<Sign> eta = SignVector::from_index(n, h).s;
                    total += cotype::symmetrize(x, pw, eps, del, eta, rho);
                }
    } while (std::next_permutation(rho.begin(), rho.end()));
    for (Rational& v : total.e) v /= Rational(draws);
    return total;
}

inline tensor::Tensor3<Rational> random_rational_tensor(Rng& rng, int n, std::uint64_t max_num,
                                                        std::uint64_t max_den) {
    auto T = tensor::Tensor3<Rational>::zeros(n);
    for (Rational& v : T.e) v = rng.rational(max_num, max_den);
    return T;
}

inline std::vector<Rational> random_rational_vector(Rng& rng, int n, std::uint64_t max_num,
                                                    std::uint64_t max_den) {
    std::vector<Rational> v(n);
    for (auto& x : v) x = rng.rational(max_num, max_den);
    return v;
}

}  // namespace testsupport
