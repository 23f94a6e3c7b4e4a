#include "core/verify.hpp"

#include <cmath>
#include <sstream>

#include "core/cotype.hpp"
#include "core/ldc.hpp"
#include "core/rng.hpp"
#include "core/smoothing.hpp"
#include "core/tensor.hpp"

namespace cotypelab::verify {

namespace {

using num::Cmp;
using num::ExactValue;
using tensor::SpaceSpec;
using tensor::Tensor3;

void fail(SuiteReport& rep, const std::string& msg) {
    ++rep.failures;
    if (rep.messages.size() < 20) rep.messages.push_back(msg);
}

Tensor3<Rational> random_tensor(Rng& rng, int n, std::uint64_t max_num, std::uint64_t max_den) {
    Tensor3<Rational> T = Tensor3<Rational>::zeros(n);
    for (Rational& v : T.e) v = rng.rational(max_num, max_den);
    return T;
}

SpaceSpec random_spec(Rng& rng, int n) {
    static const int ps[] = {2, 3, 4, 6};
    tensor::Exponent p[3];
    for (auto& e : p) {
        if (rng.below(5) == 0)
            e = tensor::Exponent::infinity();
        else
            e = tensor::Exponent::finite(Rational(ps[rng.below(4)]));
    }
    return SpaceSpec::make(p[0], p[1], p[2], n, /*exploratory=*/true);
}

std::vector<int> random_perm(Rng& rng, int n) {
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    rng.shuffle(p);
    return p;
}

std::vector<Sign> random_signs(Rng& rng, int n) {
    std::vector<Sign> s(n);
    for (int i = 0; i < n; ++i) s[i] = static_cast<Sign>(rng.sign());
    return s;
}

tensor::UpperParams slicing_only() {
    tensor::UpperParams up;
    up.averaging = false;
    up.peeling = false;
    return up;
}

// ----------------------------------------------------------------- suites

SuiteReport suite_identities(std::uint64_t seed, int cases) {
    SuiteReport rep;
    rep.suite = "identities";
    Rng rng(seed);
    // Diagonal closed form across the standard grid.
    for (int n : {2, 4, 8}) {
        for (int pv : {3, 4, 6}) {
            ++rep.cases;
            auto p = tensor::Exponent::finite(Rational(pv));
            SpaceSpec spec = SpaceSpec::make(p, p, p, n);
            Tensor3<Rational> diag = Tensor3<Rational>::zeros(n);
            for (int i = 0; i < n; ++i) diag.at(i, i, i) = 1;
            tensor::UpperParams up;
            up.peel.starts = 4;
            up.peel.max_iters = 60;
            auto upper = tensor::projective_upper(diag, spec, up);
            auto lower = tensor::dual_lower(diag, spec, tensor::LowerMethod::DiagonalFunctional);
            ExactValue closed = tensor::diagonal_norm(n, spec);
            if (upper.value.compare(closed) != Cmp::EQ || lower.value.compare(closed) != Cmp::EQ)
                fail(rep, "diagonal closed form failed at n=" + std::to_string(n) +
                              " p=" + std::to_string(pv));
        }
    }
    // Rank-one identity on random tensors.
    int rank_one_cases = std::max(1, cases / 4);
    for (int c = 0; c < rank_one_cases; ++c) {
        ++rep.cases;
        int n = 2 + static_cast<int>(rng.below(4));
        SpaceSpec spec = random_spec(rng, n);
        std::vector<Rational> a(n), b(n), cc(n);
        bool nz = false;
        for (int i = 0; i < n; ++i) {
            a[i] = rng.rational(6, 4);
            b[i] = rng.rational(6, 4);
            cc[i] = rng.rational(6, 4);
        }
        a[rng.below(n)] += 1;
        b[rng.below(n)] += 1;
        cc[rng.below(n)] += 1;
        nz = true;
        (void)nz;
        Tensor3<Rational> T = Tensor3<Rational>::zeros(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) T.at(i, j, k) = a[i] * b[j] * cc[k];
        ExactValue closed = tensor::rank_one_norm(a, b, cc, spec);
        tensor::UpperParams up;
        up.peel.starts = 8;
        up.peel.max_iters = 60;
        up.peel.seed = rng.next();
        auto upper = tensor::projective_upper(T, spec, up);
        tensor::PeelParams asc = up.peel;
        auto lower = tensor::dual_lower(T, spec, tensor::LowerMethod::RankOneAscent, asc);
        if (upper.value.compare(closed) == Cmp::GT)
            fail(rep, "rank-one upper bound did not close at case " + std::to_string(c));
        if (lower.value.compare(closed) == Cmp::GT)
            fail(rep, "rank-one lower bound exceeded the closed form at case " + std::to_string(c));
        if (upper.value.compare(lower.value) != Cmp::EQ)
            fail(rep, "rank-one sandwich did not close exactly at case " + std::to_string(c));
    }
    // Omega closed form for a couple of specs.
    for (int n : {1, 4, 24}) {
        ++rep.cases;
        auto p3 = tensor::Exponent::finite(Rational(3));
        ExactValue om = tensor::omega(SpaceSpec::make(p3, p3, p3, n));
        if (om.compare(ExactValue(Rational(n))) != Cmp::EQ)
            fail(rep, "omega closed form failed at n=" + std::to_string(n));
    }
    return rep;
}

SuiteReport suite_symmetrization(std::uint64_t seed, int cases) {
    SuiteReport rep;
    rep.suite = "symmetrization";
    Rng rng(seed);
    for (int c = 0; c < cases; ++c) {
        ++rep.cases;
        int n = 2 + static_cast<int>(rng.below(3));  // 2..4
        Tensor3<Rational> x = random_tensor(rng, n, 8, 4);
        cotype::PermWitness pw;
        pw.pi = random_perm(rng, n);
        pw.sigma = random_perm(rng, n);
        pw.tau = random_perm(rng, n);
        pw.pinned = static_cast<int>(rng.below(n + 1));
        try {
            Tensor3<Rational> mean = cotype::symmetrize_mean_exact(x, pw);
            Rational coeff(0);
            for (int l = 0; l < pw.pinned; ++l)
                coeff += rational_abs(x.at(pw.pi[l], pw.sigma[l], pw.tau[l]));
            coeff /= n;
            for (int i = 0; i < n && rep.failures == 0; ++i)
                if (mean.at(i, i, i) != coeff) fail(rep, "closed-form coefficient mismatch");
        } catch (const std::exception& e) {
            fail(rep, std::string("symmetrization identity failed: ") + e.what());
        }
    }
    return rep;
}

SuiteReport suite_sandwich(std::uint64_t seed, int cases) {
    SuiteReport rep;
    rep.suite = "sandwich";
    Rng rng(seed);
    for (int c = 0; c < cases; ++c) {
        ++rep.cases;
        int n = 2 + static_cast<int>(rng.below(3));
        SpaceSpec spec = random_spec(rng, n);
        Tensor3<Rational> T = random_tensor(rng, n, 8, 4);
        tensor::UpperParams up;
        up.peel.starts = 3;
        up.peel.max_iters = 40;
        up.peel.max_terms = 2;
        up.peel.seed = rng.next();
        auto upper = tensor::projective_upper(T, spec, up);
        tensor::PeelParams asc;
        asc.starts = 3;
        asc.max_iters = 40;
        asc.seed = rng.next();
        bool with_ascent = (c % 4 == 0);  // ascent is the slow route; sample it
        auto lower = tensor::dual_lower_best(T, spec, with_ascent, asc);
        if (lower.value.compare(upper.value) == Cmp::GT)
            fail(rep, "lower bound exceeded upper bound at case " + std::to_string(c));
    }
    return rep;
}

SuiteReport suite_homogeneity(std::uint64_t seed, int cases) {
    SuiteReport rep;
    rep.suite = "homogeneity";
    Rng rng(seed);
    for (int c = 0; c < cases; ++c) {
        ++rep.cases;
        int n = 2 + static_cast<int>(rng.below(3));
        SpaceSpec spec = random_spec(rng, n);
        Tensor3<Rational> T = random_tensor(rng, n, 8, 4);
        Rational lambda = rng.rational(9, 5);
        Tensor3<Rational> S = T;
        S *= lambda;
        auto u1 = tensor::projective_upper(T, spec, slicing_only());
        auto u2 = tensor::projective_upper(S, spec, slicing_only());
        ExactValue scaled = u1.value;
        scaled *= rational_abs(lambda);
        if (u2.value.compare(scaled) != Cmp::EQ)
            fail(rep, "slicing bound is not exactly homogeneous at case " + std::to_string(c));
        auto l1 = tensor::dual_lower(T, spec, tensor::LowerMethod::EntryFunctional);
        auto l2 = tensor::dual_lower(S, spec, tensor::LowerMethod::EntryFunctional);
        ExactValue lscaled = l1.value;
        lscaled *= rational_abs(lambda);
        if (l2.value.compare(lscaled) != Cmp::EQ)
            fail(rep, "entry bound is not exactly homogeneous at case " + std::to_string(c));
    }
    return rep;
}

SuiteReport suite_symmetry(std::uint64_t seed, int cases) {
    SuiteReport rep;
    rep.suite = "symmetry";
    Rng rng(seed);
    for (int c = 0; c < cases; ++c) {
        ++rep.cases;
        int n = 2 + static_cast<int>(rng.below(3));
        SpaceSpec spec = random_spec(rng, n);
        // The slicing and closed-form strategies are exactly invariant under
        // the tensor-symmetry group (the lp norm is 1-tensor-symmetric).
        Tensor3<Rational> T = random_tensor(rng, n, 8, 4);
        auto pi = random_perm(rng, n), sg = random_perm(rng, n), ta = random_perm(rng, n);
        auto e1 = random_signs(rng, n), e2 = random_signs(rng, n), e3 = random_signs(rng, n);
        Tensor3<Rational> G = tensor::apply_symmetry(T, pi, sg, ta, e1, e2, e3);
        auto u1 = tensor::projective_upper(T, spec, slicing_only());
        auto u2 = tensor::projective_upper(G, spec, slicing_only());
        if (u1.value.compare(u2.value) != Cmp::EQ)
            fail(rep, "slicing bound changed under the group action at case " + std::to_string(c));
        // Group action: applying the inverse data recovers the tensor.
        std::vector<int> ip(n), is(n), it(n);
        for (int i = 0; i < n; ++i) {
            ip[pi[i]] = i;
            is[sg[i]] = i;
            it[ta[i]] = i;
        }
        std::vector<Sign> g1(n), g2(n), g3(n);
        for (int i = 0; i < n; ++i) {
            g1[i] = e1[ip[i]];
            g2[i] = e2[is[i]];
            g3[i] = e3[it[i]];
        }
        Tensor3<Rational> back = tensor::apply_symmetry(G, ip, is, it, g1, g2, g3);
        if (!(back == T)) fail(rep, "inverse group action did not recover the tensor");
    }
    return rep;
}

SuiteReport suite_triangle(std::uint64_t seed, int cases) {
    SuiteReport rep;
    rep.suite = "triangle";
    Rng rng(seed);
    for (int c = 0; c < cases; ++c) {
        ++rep.cases;
        int n = 2 + static_cast<int>(rng.below(3));
        SpaceSpec spec = random_spec(rng, n);
        Tensor3<Rational> A = random_tensor(rng, n, 8, 4);
        Tensor3<Rational> B = random_tensor(rng, n, 8, 4);
        Tensor3<Rational> S = A;
        S += B;
        auto ua = tensor::projective_upper(A, spec, slicing_only());
        auto ub = tensor::projective_upper(B, spec, slicing_only());
        auto us = tensor::projective_upper(S, spec, slicing_only());
        if (us.value.compare(ua.value + ub.value) == Cmp::GT)
            fail(rep, "slicing bound violated the triangle inequality at case " + std::to_string(c));
    }
    return rep;
}

SuiteReport suite_quality_monotone(std::uint64_t seed, int cases) {
    SuiteReport rep;
    rep.suite = "quality_monotone";
    Rng rng(seed);
    auto [code2, dec2] = ldc::hadamard_code(2);
    auto [code3, dec3] = ldc::hadamard_code(3);
    for (int c = 0; c < cases; ++c) {
        ++rep.cases;
        bool big = rng.below(2) == 1;
        const auto& code = big ? code3 : code2;
        const auto& dec = big ? dec3 : dec2;
        // phi grid keeps floor(phi*n) within exhaustive reach.
        Rational phi1(rng.below(4), 8);
        Rational phi2(rng.below(4), 8);
        if (phi1 > phi2) std::swap(phi1, phi2);
        auto r1 = ldc::evaluate_quality(code, dec, phi1, ldc::QualityMode::Exhaustive, 1u << 26, 0);
        auto r2 = ldc::evaluate_quality(code, dec, phi2, ldc::QualityMode::Exhaustive, 1u << 26, 0);
        if (r1.theta_margin < r2.theta_margin)
            fail(rep, "theta margin increased with phi at case " + std::to_string(c));
    }
    return rep;
}

}  // namespace

std::vector<std::string> suite_names() {
    return {"identities", "symmetrization", "sandwich",         "homogeneity",
            "symmetry",   "triangle",       "quality_monotone"};
}

SuiteReport run_suite(const std::string& name, std::uint64_t seed, int cases) {
    if (cases < 1) throw PreconditionError("verify", "case count must be positive");
    if (name == "identities") return suite_identities(seed, cases);
    if (name == "symmetrization") return suite_symmetrization(seed, cases);
    if (name == "sandwich") return suite_sandwich(seed, cases);
    if (name == "homogeneity") return suite_homogeneity(seed, cases);
    if (name == "symmetry") return suite_symmetry(seed, cases);
    if (name == "triangle") return suite_triangle(seed, cases);
    if (name == "quality_monotone") return suite_quality_monotone(seed, cases);
    throw PreconditionError("verify", "unknown suite '" + name + "'");
}

}  // namespace cotypelab::verify
