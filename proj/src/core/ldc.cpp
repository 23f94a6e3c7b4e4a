#include "core/ldc.hpp"

#include <algorithm>

#include "core/rng.hpp"

namespace cotypelab::ldc {

namespace {

void check_word(const Word& w) {
    for (Sign s : w)
        if (s != 1 && s != -1) throw PreconditionError("ldc", "word entries must be -1 or +1");
}

}  // namespace

Word BinaryCode::encode(const SignVector& eps) const {
    if (eps.dim() != m) throw PreconditionError("ldc", "message dimension mismatch");
    eps.validate();
    if (form == Form::Walsh) {
        Word w(n);
        std::uint64_t idx = eps.index();
        for (int a = 0; a < n; ++a) w[a] = static_cast<Sign>(walsh_sign(a, idx));
        return w;
    }
    return codewords[eps.index()];
}

void BinaryCode::validate() const {
    if (m < 1 || m > 24) throw PreconditionError("ldc", "message length m out of range");
    if (n < 1) throw PreconditionError("ldc", "block length n must be positive");
    if (form == Form::Walsh) {
        if (n != (1 << m)) throw PreconditionError("ldc", "structured form requires n = 2^m");
        return;
    }
    if (codewords.size() != (std::size_t(1) << m))
        throw PreconditionError("ldc", "explicit table must have exactly 2^m codewords");
    for (const Word& w : codewords) {
        if (static_cast<int>(w.size()) != n)
            throw PreconditionError("ldc", "explicit codeword length mismatch");
        check_word(w);
    }
}

void LocalDecoder::validate() const {
    if (static_cast<int>(per_bit.size()) != m)
        throw PreconditionError("ldc", "decoder must define a distribution for every message bit");
    for (int t = 0; t < m; ++t) {
        Rational total(0);
        if (per_bit[t].empty()) throw PreconditionError("ldc", "empty query distribution");
        for (const WeightedQuery& wq : per_bit[t]) {
            const DecodingQuery& q = wq.query;
            for (int idx : {q.i, q.j, q.k})
                if (idx < 1 || idx > n) throw PreconditionError("ldc", "query index out of range");
            for (Sign s : q.g)
                if (s != 1 && s != -1)
                    throw PreconditionError("ldc", "truth table entries must be -1 or +1");
            if (wq.weight <= 0) throw PreconditionError("ldc", "query weights must be positive");
            total += wq.weight;
        }
        if (total != 1)
            throw PreconditionError("ldc", "query weights for bit " + std::to_string(t + 1) +
                                               " must sum to exactly 1");
    }
}

std::pair<BinaryCode, LocalDecoder> hadamard_code(int m) {
    if (m < 1 || m > 16) throw PreconditionError("ldc", "hadamard_code requires 1 <= m <= 16");
    BinaryCode code;
    code.m = m;
    code.n = 1 << m;
    code.form = BinaryCode::Form::Walsh;

    // g(x,y,z) = x*y, z ignored.
    std::array<Sign, 8> g{};
    for (int idx = 0; idx < 8; ++idx) {
        Sign x = (idx & 1) ? -1 : 1;
        Sign y = (idx & 2) ? -1 : 1;
        g[idx] = static_cast<Sign>(x * y);
    }

    LocalDecoder dec;
    dec.m = m;
    dec.n = code.n;
    dec.per_bit.resize(m);
    Rational w(1, code.n);
    for (int t = 0; t < m; ++t) {
        dec.per_bit[t].reserve(code.n);
        for (int a = 0; a < code.n; ++a) {
            DecodingQuery q;
            q.i = a + 1;
            q.j = (a ^ (1 << t)) + 1;
            q.k = a + 1;
            q.g = g;
            dec.per_bit[t].push_back({q, w});
        }
    }
    dec.validate();
    return {code, dec};
}

Word corrupt(const Word& word, const std::set<int>& S) {
    Word out = word;
    for (int pos : S) {
        if (pos < 1 || pos > static_cast<int>(word.size()))
            throw PreconditionError("ldc", "corruption index out of range");
        out[pos - 1] = static_cast<Sign>(-out[pos - 1]);
    }
    return out;
}

Rational decode_success_prob(const LocalDecoder& dec, int t, const Word& word, Sign target) {
    if (t < 1 || t > dec.m) throw PreconditionError("ldc", "target bit out of range");
    if (static_cast<int>(word.size()) != dec.n)
        throw PreconditionError("ldc", "word length does not match decoder block length");
    Rational p(0);
    for (const WeightedQuery& wq : dec.per_bit[t - 1]) {
        const DecodingQuery& q = wq.query;
        if (q.eval(word[q.i - 1], word[q.j - 1], word[q.k - 1]) == target) p += wq.weight;
    }
    return p;
}

namespace {

// Enumerates all subsets of {1..n} of size exactly w via lexicographic index vectors.
template <class Fn>
void for_each_subset(int n, int w, Fn&& fn) {
    std::vector<int> idx(w);
    for (int i = 0; i < w; ++i) idx[i] = i + 1;
    if (w == 0) {
        fn(idx);
        return;
    }
    while (true) {
        fn(idx);
        int i = w - 1;
        while (i >= 0 && idx[i] == n - (w - 1 - i)) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < w; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace

QualityReport evaluate_quality(const BinaryCode& code, const LocalDecoder& dec, const Rational& phi,
                               QualityMode mode, std::uint64_t budget, std::uint64_t seed,
                               std::uint64_t samples) {
    code.validate();
    dec.validate();
    if (code.m != dec.m || code.n != dec.n)
        throw PreconditionError("ldc", "code and decoder dimensions disagree");
    if (phi < 0 || phi >= Rational(1, 2))
        throw PreconditionError("ldc", "corruption fraction phi must satisfy 0 <= phi < 1/2");

    const int n = code.n, m = code.m;
    const Rational phi_n = phi * n;
    const int max_weight = static_cast<int>(rational_floor(phi_n));

    QualityReport rep;
    rep.phi = phi;
    rep.seed = seed;
    bool have = false;
    auto consider = [&](const Rational& margin, int t, std::uint64_t msg, const std::vector<int>& flips) {
        if (!have || margin < rep.theta_margin) {
            rep.theta_margin = margin;
            rep.worst_bit = t;
            rep.worst_message = msg;
            rep.worst_flips = flips;
            have = true;
        }
    };

    if (mode == QualityMode::Exhaustive) {
        Int sets(0);
        for (int w = 0; w <= max_weight; ++w) sets += binomial(n, w);
        Int cases = (Int(1) << m) * sets * m;
        if (cases > budget)
            throw BudgetError("ldc", "exhaustive quality evaluation needs a budget of " + cases.str() +
                                         " cases but only " + std::to_string(budget) +
                                         " were allowed");
        rep.regime = QualityReport::Regime::Exhaustive;
        for (std::uint64_t msg = 0; msg < (std::uint64_t(1) << m); ++msg) {
            SignVector eps = SignVector::from_index(m, msg);
            Word clean = code.encode(eps);
            for (int w = 0; w <= max_weight; ++w) {
                for_each_subset(n, w, [&](const std::vector<int>& flips) {
                    Word bad = clean;
                    for (int pos : flips) bad[pos - 1] = static_cast<Sign>(-bad[pos - 1]);
                    for (int t = 1; t <= m; ++t) {
                        Rational p = decode_success_prob(dec, t, bad, eps.at1(t));
                        consider(p - Rational(1, 2), t, msg, flips);
                        ++rep.tested_count;
                    }
                });
            }
        }
        return rep;
    }

    rep.regime = QualityReport::Regime::Sampled;
    if (samples == 0) samples = budget;
    if (samples == 0) throw PreconditionError("ldc", "sampled mode requires a positive sample count");
    Rng rng(seed);
    for (std::uint64_t it = 0; it < samples; ++it) {
        std::uint64_t msg = rng.below(std::uint64_t(1) << m);
        SignVector eps = SignVector::from_index(m, msg);
        Word bad = code.encode(eps);
        int w = static_cast<int>(rng.below(static_cast<std::uint64_t>(max_weight) + 1));
        std::vector<int> all(n);
        for (int i = 0; i < n; ++i) all[i] = i + 1;
        rng.shuffle(all);
        std::vector<int> flips(all.begin(), all.begin() + w);
        std::sort(flips.begin(), flips.end());
        for (int pos : flips) bad[pos - 1] = static_cast<Sign>(-bad[pos - 1]);
        int t = static_cast<int>(rng.below(m)) + 1;
        Rational p = decode_success_prob(dec, t, bad, eps.at1(t));
        consider(p - Rational(1, 2), t, msg, flips);
        ++rep.tested_count;
    }
    return rep;
}

}  // namespace cotypelab::ldc
