#include "core/smoothing.hpp"

#include <algorithm>
#include <set>

namespace cotypelab::smoothing {

ldc::Word PaddedCode::encode(const SignVector& eps) const {
    ldc::Word w = inner.encode(eps);
    w.resize(three_n(), Sign(1));
    return w;
}

int SmoothedCode::j_min() const {
    int jm = bits.empty() ? 0 : bits.front().J;
    for (const auto& b : bits) jm = std::min(jm, b.J);
    return jm;
}

void SmoothedCode::validate() const {
    padded.inner.validate();
    const int N = three_n();
    if (static_cast<int>(bits.size()) != m())
        throw PreconditionError("smoothing", "per-bit data must cover every message bit");
    for (int t = 0; t < m(); ++t) {
        const auto& b = bits[t];
        if (b.J < 1) throw PreconditionError("smoothing", "empty triple family for bit " +
                                                              std::to_string(t + 1));
        for (const std::vector<int>* perm : {&b.pi, &b.sigma, &b.tau}) {
            if (static_cast<int>(perm->size()) != N)
                throw PreconditionError("smoothing", "permutation length must equal 3n");
            std::vector<bool> seen(N + 1, false);
            for (int v : *perm) {
                if (v < 1 || v > N || seen[v])
                    throw PreconditionError("smoothing", "per-bit maps must be bijections of {1..3n}");
                seen[v] = true;
            }
        }
        if (static_cast<int>(b.signs.size()) != b.J || static_cast<int>(b.biases.size()) != b.J)
            throw PreconditionError("smoothing", "signs and biases must have length J");
        // Disjointness across the first J slots.
        std::set<int> used;
        for (int j = 0; j < b.J; ++j)
            for (int v : {b.pi[j], b.sigma[j], b.tau[j]})
                if (!used.insert(v).second)
                    throw PreconditionError("smoothing", "triples for bit " + std::to_string(t + 1) +
                                                             " are not pairwise disjoint");
    }
}

PaddedCode pad_code(const ldc::BinaryCode& code) {
    code.validate();
    return PaddedCode{code};
}

std::pair<Sign, Rational> triple_bias(const PaddedCode& pc, int t, const std::vector<int>& S) {
    const int m = pc.inner.m;
    const int N = pc.three_n();
    if (t < 1 || t > m) throw PreconditionError("smoothing", "target bit out of range");
    if (S.empty() || S.size() > 3)
        throw PreconditionError("smoothing", "bias sets must contain between 1 and 3 indices");
    for (int s : S)
        if (s < 1 || s > N) throw PreconditionError("smoothing", "bias set index out of range");

    Int agree(0);
    const std::uint64_t total = std::uint64_t(1) << m;
    for (std::uint64_t msg = 0; msg < total; ++msg) {
        SignVector eps = SignVector::from_index(m, msg);
        ldc::Word w = pc.encode(eps);
        int prod = 1;
        for (int s : S) prod *= w[s - 1];
        if (prod == eps.at1(t)) ++agree;
    }
    Rational p(agree, Int(total));
    if (p >= Rational(1, 2)) return {Sign(1), p};
    return {Sign(-1), Rational(1) - p};
}

std::vector<std::vector<Triple>> harvest_triples(const ldc::BinaryCode& code,
                                                 const ldc::LocalDecoder& dec, const Rational& theta) {
    code.validate();
    dec.validate();
    if (code.m != dec.m || code.n != dec.n)
        throw PreconditionError("smoothing", "code and decoder dimensions disagree");
    if (theta <= 0 || theta >= Rational(1, 2))
        throw PreconditionError("smoothing", "theta must satisfy 0 < theta < 1/2");
    if (code.m > 20)
        throw PreconditionError("smoothing", "exact bias harvest requires an enumerable message space");

    PaddedCode pc = pad_code(code);
    const Rational threshold = Rational(1, 2) + theta / 16;

    std::vector<std::vector<Triple>> pools(code.m);
    for (int t = 1; t <= code.m; ++t) {
        std::set<std::vector<int>> seen;
        for (const ldc::WeightedQuery& wq : dec.per_bit[t - 1]) {
            std::set<int> support{wq.query.i, wq.query.j, wq.query.k};
            std::vector<int> sup(support.begin(), support.end());
            const int k = static_cast<int>(sup.size());
            for (int mask = 1; mask < (1 << k); ++mask) {
                std::vector<int> subset;
                for (int b = 0; b < k; ++b)
                    if (mask & (1 << b)) subset.push_back(sup[b]);
                if (!seen.insert(subset).second) continue;
                auto [delta, bias] = triple_bias(pc, t, subset);
                if (bias >= threshold) {
                    Triple c;
                    c.size = static_cast<int>(subset.size());
                    for (int b = 0; b < c.size; ++b) c.idx[b] = subset[b];
                    c.delta = delta;
                    c.bias = bias;
                    pools[t - 1].push_back(c);
                }
            }
        }
    }
    return pools;
}

std::vector<Triple> build_family(const std::vector<Triple>& pool, int t, const Rational& theta,
                                 const Rational& phi, const PaddedCode& pc,
                                 std::vector<std::string>& warnings) {
    const int n = pc.inner.n;
    const int N = pc.three_n();

    std::vector<Triple> sorted = pool;
    std::sort(sorted.begin(), sorted.end(), [](const Triple& a, const Triple& b) {
        if (a.bias != b.bias) return a.bias > b.bias;
        return a.idx < b.idx;
    });

    std::vector<bool> used(N + 1, false);
    std::vector<Triple> family;
    for (const Triple& cand : sorted) {
        bool free = true;
        for (int b = 0; b < cand.size; ++b) free = free && !used[cand.idx[b]];
        if (!free) continue;
        for (int b = 0; b < cand.size; ++b) used[cand.idx[b]] = true;
        family.push_back(cand);
    }
    if (family.empty())
        throw PreconditionError("smoothing",
                                "no usable decoding triple found for bit " + std::to_string(t));

    // Completion with padding coordinates leaves each bias unchanged: the
    // padded positions are constantly +1.
    int next_pad = n + 1;
    for (Triple& tri : family) {
        while (tri.size < 3) {
            while (used[next_pad]) ++next_pad;
            tri.idx[tri.size++] = next_pad;
            used[next_pad] = true;
        }
        std::sort(tri.idx.begin(), tri.idx.end());
    }

    // The quantitative guarantee |F_t| >= ceil(phi*theta*n/9) is checked as a
    // postcondition; a shortfall is reported, not silently accepted.
    Rational target = phi * theta * n / 9;
    Int need = rational_ceil(target);
    if (Int(family.size()) < need)
        warnings.push_back("smoothing: bit " + std::to_string(t) + " packed only " +
                           std::to_string(family.size()) + " triples; target ceil(phi*theta*n/9) = " +
                           need.str());
    return family;
}

SmoothedCode to_smoothed(const std::vector<std::vector<Triple>>& families, const PaddedCode& pc,
                         const Rational& theta, const Rational& phi) {
    const int m = pc.inner.m;
    const int N = pc.three_n();
    if (static_cast<int>(families.size()) != m)
        throw PreconditionError("smoothing", "one family per message bit required");

    SmoothedCode sc;
    sc.padded = pc;
    sc.theta = theta;
    sc.phi = phi;
    sc.bits.resize(m);
    const Rational threshold = Rational(1, 2) + theta / 16;

    for (int t = 0; t < m; ++t) {
        const auto& fam = families[t];
        auto& out = sc.bits[t];
        out.J = static_cast<int>(fam.size());
        out.pi.reserve(N);
        out.sigma.reserve(N);
        out.tau.reserve(N);
        std::vector<bool> in_pi(N + 1, false), in_sigma(N + 1, false), in_tau(N + 1, false);
        for (const Triple& tri : fam) {
            if (tri.size != 3) throw InvariantViolation("smoothing.pack", "family entry not completed");
            out.pi.push_back(tri.idx[0]);
            out.sigma.push_back(tri.idx[1]);
            out.tau.push_back(tri.idx[2]);
            in_pi[tri.idx[0]] = in_sigma[tri.idx[1]] = in_tau[tri.idx[2]] = true;
            out.signs.push_back(tri.delta);
            out.biases.push_back(tri.bias);
        }
        for (int v = 1; v <= N; ++v) {
            if (!in_pi[v]) out.pi.push_back(v);
            if (!in_sigma[v]) out.sigma.push_back(v);
            if (!in_tau[v]) out.tau.push_back(v);
        }

        // Re-verify every packaged bias directly from the permutations.
        for (int j = 0; j < out.J; ++j) {
            auto [delta, bias] = triple_bias(pc, t + 1, {out.pi[j], out.sigma[j], out.tau[j]});
            if (delta != out.signs[j] || bias != out.biases[j] || bias < threshold)
                throw InvariantViolation(
                    "smoothing.soundness",
                    "bias verification failed at (t=" + std::to_string(t + 1) +
                        ", j=" + std::to_string(j + 1) + "): recomputed " + format_rational(bias));
        }
    }
    sc.validate();
    return sc;
}

SmoothedCode smooth(const ldc::BinaryCode& code, const ldc::LocalDecoder& dec, const Rational& theta,
                    const Rational& phi, std::vector<std::string>& warnings) {
    if (phi < 0 || phi >= Rational(1, 2))
        throw PreconditionError("smoothing", "phi must satisfy 0 <= phi < 1/2");
    auto pools = harvest_triples(code, dec, theta);
    PaddedCode pc = pad_code(code);
    std::vector<std::vector<Triple>> families;
    families.reserve(code.m);
    for (int t = 1; t <= code.m; ++t)
        families.push_back(build_family(pools[t - 1], t, theta, phi, pc, warnings));
    return to_smoothed(families, pc, theta, phi);
}

}  // namespace cotypelab::smoothing
