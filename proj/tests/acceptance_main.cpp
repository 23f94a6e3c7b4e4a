// Acceptance suite: one line per criterion, each run at its stated tolerance
// and within its stated runtime budget.  Exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <vector>

#include "core/cotype.hpp"
#include "core/fourier.hpp"
#include "core/io.hpp"
#include "core/ldc.hpp"
#include "core/smoothing.hpp"
#include "core/tensor.hpp"
#include "core/verify.hpp"
#include "support/helpers.hpp"

using namespace cotypelab;
using num::Cmp;
using num::ExactValue;
using tensor::Tensor3;
using testsupport::fex;
using testsupport::space;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

struct Check {
    Outcome* out;
    void require(bool ok, const std::string& what) {
        if (!ok && out->pass) {
            out->pass = false;
            out->detail = what;
        }
    }
};

int failures = 0;

void criterion(int id, const std::string& label, double budget_s,
               const std::function<void(Check&)>& body) {
    Outcome out;
    Check chk{&out};
    auto start = std::chrono::steady_clock::now();
    try {
        body(chk);
    } catch (const std::exception& e) {
        out.pass = false;
        out.detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (out.pass && secs > budget_s) {
        out.pass = false;
        out.detail = "runtime " + std::to_string(secs) + "s exceeded the " +
                     std::to_string(budget_s) + "s budget";
    }
    if (!out.pass) ++failures;
    std::printf("%s criterion %d: %s (%.2fs)%s%s\n", out.pass ? "PASS" : "FAIL", id, label.c_str(),
                secs, out.detail.empty() ? "" : " -- ", out.detail.c_str());
    std::fflush(stdout);
}

Tensor3<Rational> diagonal_ones(int n) {
    auto T = Tensor3<Rational>::zeros(n);
    for (int i = 0; i < n; ++i) T.at(i, i, i) = 1;
    return T;
}

smoothing::SmoothedCode smooth_pair(std::pair<ldc::BinaryCode, ldc::LocalDecoder> pair) {
    std::vector<std::string> warnings;
    return smoothing::smooth(pair.first, pair.second, Rational(1, 16), Rational(1, 16), warnings);
}

// ---------------------------------------------------------------- criteria

void c1_diagonal(Check& chk) {
    for (int n : {2, 4, 8}) {
        for (long p : {3L, 6L, 4L}) {
            auto spec = space(p, p, p, n);
            ExactValue closed = tensor::diagonal_norm(n, spec);
            auto T = diagonal_ones(n);
            tensor::UpperParams up;
            up.peeling = false;  // slicing + averaging already decide the min
            auto upper = tensor::projective_upper(T, spec, up);
            auto lower = tensor::dual_lower(T, spec, tensor::LowerMethod::DiagonalFunctional);
            chk.require(upper.value.compare(closed) == Cmp::EQ,
                        "rational upper bound missed n^{1/r} exactly");
            chk.require(lower.value.compare(closed) == Cmp::EQ,
                        "rational lower bound missed n^{1/r} exactly");

            // Float cross-check at 1e-9 relative.
            auto Tf = tensor::to_double_tensor(T);
            auto upf = tensor::projective_upper(Tf, spec, up);
            auto lof = tensor::dual_lower(Tf, spec, tensor::LowerMethod::DiagonalFunctional);
            double truth = closed.to_double();
            chk.require(std::abs(upf.value - truth) <= 1e-9 * truth, "float upper off by >1e-9");
            chk.require(std::abs(lof.value - truth) <= 1e-9 * truth, "float lower off by >1e-9");
        }
    }
}

void c2_rank_one(Check& chk) {
    Rng rng(20260809);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 2 + int(rng.below(7));  // 2..8
        long pv[3];
        for (auto& p : pv) p = std::vector<long>{3, 4, 6}[rng.below(3)];
        auto spec = tensor::SpaceSpec::make(fex(pv[0]), fex(pv[1]), fex(pv[2]), n, true);
        auto a = testsupport::random_rational_vector(rng, n, 6, 4);
        auto b = testsupport::random_rational_vector(rng, n, 6, 4);
        auto c = testsupport::random_rational_vector(rng, n, 6, 4);
        a[int(rng.below(n))] += 2;  // keep the factors away from zero vectors
        b[int(rng.below(n))] += 2;
        c[int(rng.below(n))] += 2;
        auto T = Tensor3<Rational>::zeros(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) T.at(i, j, k) = a[i] * b[j] * c[k];
        ExactValue closed = tensor::rank_one_norm(a, b, c, spec);
        tensor::UpperParams up;
        up.peel.starts = 8;
        up.peel.max_iters = 80;
        up.peel.seed = rng.next();
        auto upper = tensor::projective_upper(T, spec, up);
        tensor::PeelParams asc = up.peel;
        auto lower = tensor::dual_lower(T, spec, tensor::LowerMethod::RankOneAscent, asc);
        chk.require(upper.value.compare(closed) == Cmp::EQ,
                    "upper bound missed the factor-norm product at trial " + std::to_string(trial));
        chk.require(lower.value.compare(closed) == Cmp::EQ,
                    "lower bound missed the factor-norm product at trial " + std::to_string(trial));
    }
}

void c3_quality(Check& chk) {
    auto [code3, dec3] = ldc::hadamard_code(3);
    auto rep3 =
        ldc::evaluate_quality(code3, dec3, Rational(1, 8), ldc::QualityMode::Exhaustive, 1u << 24, 0);
    chk.require(rep3.theta_margin == Rational(1, 4), "m=3 phi=1/8 margin is not exactly 1/4");
    chk.require(rep3.regime == ldc::QualityReport::Regime::Exhaustive, "m=3 regime not exhaustive");

    auto [code2, dec2] = ldc::hadamard_code(2);
    auto rep2 =
        ldc::evaluate_quality(code2, dec2, Rational(1, 4), ldc::QualityMode::Exhaustive, 1u << 24, 0);
    chk.require(rep2.theta_margin == 0, "m=2 phi=1/4 margin is not exactly 0");
}

void c4_smoothing(Check& chk) {
    const Rational theta(1, 16), phi(1, 16);
    const Rational threshold = Rational(1, 2) + theta / 16;
    for (int m : {2, 3}) {
        auto sc = smooth_pair(ldc::hadamard_code(m));
        const int n = sc.n();
        Rational target_r = phi * theta * n / 9;
        Int target = rational_ceil(target_r);
        for (int t = 1; t <= m; ++t) {
            const auto& bit = sc.bits[t - 1];
            chk.require(bit.J >= n / 2, "J_t below n/2");
            chk.require(Int(bit.J) >= target, "J_t below ceil(phi*theta*n/9)");
            std::set<int> used;
            for (int j = 0; j < bit.J; ++j) {
                for (int v : {bit.pi[j], bit.sigma[j], bit.tau[j]})
                    chk.require(used.insert(v).second, "triples overlap");
                chk.require(bit.biases[j] == 1, "bias not exactly 1");
                chk.require(bit.biases[j] >= threshold, "bias below 1/2 + theta/16");
                // Independent recomputation from the packaged permutations.
                Rational p = testsupport::brute_product_bias(
                    sc.padded, t, {bit.pi[j], bit.sigma[j], bit.tau[j]});
                Rational flipped = 1 - p;
                Rational recomputed = std::max(p, flipped);
                chk.require(recomputed == bit.biases[j], "recomputed bias disagrees");
                chk.require((p >= Rational(1, 2) ? 1 : -1) == bit.signs[j],
                            "recomputed sign disagrees");
            }
        }
    }
}

void c5_membership(Check& chk) {
    auto sc = smooth_pair(ldc::hadamard_code(3));
    auto fam = cotype::build_hat(sc);  // eight 24^3 tensors of 8-point expectations
    auto rep = cotype::s_membership(fam, sc, sc.theta / 8);
    chk.require(rep.pass, "membership threshold failed");
    for (const auto& row : rep.rows) {
        chk.require(row.margin == 1, "margin not exactly 1");
        Rational P = sc.bits[row.t - 1].biases[row.j - 1];
        chk.require(row.margin == 2 * P - 1, "margin differs from 2P-1");
    }
    chk.require(rep.rows.size() == 12, "expected 4 triples per bit across 3 bits");
}

void c6_symmetrization(Check& chk) {
    Rng rng(424242);
    int done = 0;
    while (done < 50) {
        int n = 2 + int(rng.below(3));  // 2..4
        auto x = testsupport::random_rational_tensor(rng, n, 8, 4);
        cotype::PermWitness pw;
        pw.pi.resize(n);
        pw.sigma.resize(n);
        pw.tau.resize(n);
        for (int i = 0; i < n; ++i) pw.pi[i] = pw.sigma[i] = pw.tau[i] = i;
        rng.shuffle(pw.pi);
        rng.shuffle(pw.sigma);
        rng.shuffle(pw.tau);
        for (int pinned = 0; pinned <= n && done < 50; ++pinned, ++done) {
            pw.pinned = pinned;
            // symmetrize_mean_exact asserts the closed form internally.
            auto mean = cotype::symmetrize_mean_exact(x, pw);
            Rational coeff(0);
            for (int l = 0; l < pinned; ++l)
                coeff += rational_abs(x.at(pw.pi[l], pw.sigma[l], pw.tau[l]));
            coeff /= n;
            chk.require(mean.at(0, 0, 0) == coeff, "diagonal coefficient mismatch");
        }
    }

    // Monte-Carlo regime at n=5 against the closed form, three standard errors.
    auto x5 = testsupport::random_rational_tensor(rng, 5, 8, 4);
    cotype::PermWitness pw5;
    pw5.pi = {3, 1, 4, 0, 2};
    pw5.sigma = {2, 4, 0, 1, 3};
    pw5.tau = {0, 2, 3, 4, 1};
    pw5.pinned = 3;
    auto mc = cotype::symmetrize_mean_mc(x5, pw5, 20260809, 100000);
    Rational coeff(0);
    for (int l = 0; l < pw5.pinned; ++l)
        coeff += rational_abs(x5.at(pw5.pi[l], pw5.sigma[l], pw5.tau[l]));
    coeff /= 5;
    int outliers = 0;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            for (int k = 0; k < 5; ++k) {
                double expect = (i == j && j == k) ? static_cast<double>(coeff) : 0.0;
                double err = std::abs(mc.mean.at(i, j, k) - expect);
                double se = std::max(mc.stderr_.at(i, j, k), 1e-12);
                if (err > 3 * se) ++outliers;
            }
    // ~0.3% of 125 entries may exceed 3 sigma by chance; tolerate a couple.
    chk.require(outliers <= 2, "monte carlo mean strayed beyond 3 standard errors");
}

void c7_certificate_soundness(Check& chk) {
    // Downsized pipelines with 3n <= 6 over the all-inf space, where every
    // needed tensor norm closes exactly: the sign-averaging upper bound meets
    // the entry-functional lower bound at 1.
    struct Instance {
        std::string name;
        smoothing::SmoothedCode sc;
    };
    std::vector<Instance> instances;
    instances.push_back({"one-bit(3n=3)", smooth_pair(testsupport::one_bit_code())});
    instances.push_back({"identity-m2(3n=6)", smooth_pair(testsupport::identity_code(2))});
    instances.push_back({"hadamard-m1(3n=6)", smooth_pair(ldc::hadamard_code(1))});

    for (auto& inst : instances) {
        const int N = inst.sc.three_n();
        chk.require(N <= 6, inst.name + ": not desk-sized");
        auto spec = testsupport::space_inf(N);
        auto fam = cotype::build_hat(inst.sc);
        Rational avg = cotype::mean_abs_sign_sum(fam.m);
        ExactValue omega = tensor::omega(spec);

        tensor::UpperParams slicing_only;
        slicing_only.averaging = false;
        slicing_only.peeling = false;

        // Exact norm oracle, validated on every call: upper and lower bounds
        // must meet exactly (gap 0 <= 1e-6, the criterion's closure demand).
        int evaluations = 0;
        auto exact_norm = [&](const Tensor3<Rational>& T) -> double {
            ++evaluations;
            auto up = tensor::projective_upper(T, spec, slicing_only);
            ExactValue avg_bound = omega;
            avg_bound *= avg;
            ExactValue upper =
                (avg_bound.compare(up.value) == Cmp::LT) ? avg_bound : up.value;
            auto lo = tensor::dual_lower_best(T, spec, /*with_ascent=*/false);
            chk.require(lo.value.compare(upper) == Cmp::EQ,
                        inst.name + ": tensor-norm sandwich did not close");
            return upper.to_double();
        };

        cotype::CertifyOptions opt;
        auto cert = cotype::certify(inst.sc, spec, Rational(2), inst.sc.theta, opt, "");
        double ratio = cotype::cotype_ratio(fam.x, Rational(2), exact_norm);
        chk.require(evaluations > 0, inst.name + ": oracle never ran");
        chk.require(cert.value <= ratio + 1e-9,
                    inst.name + ": certificate exceeded the definitional ratio");
    }
}

void c8_fourier(Check& chk) {
    Rng rng(777);
    for (int trial = 0; trial < 100; ++trial) {
        int m = 1 + int(rng.below(6));  // 1..6
        int d = 1 + int(rng.below(8));  // 1..8
        auto f = fourier::CubeFunction<Rational>::zero(m, d);
        for (auto& v : f.table) v = rng.rational(9, 6);
        auto table = fourier::full_transform(f);
        auto back = fourier::reconstruct(table);
        chk.require(back.table == f.table, "inversion failed");
        for (int c = 0; c < d; ++c) {
            Rational lhs(0), rhs(0);
            for (const auto& [mask, coeff] : table.coefficients) lhs += coeff[c] * coeff[c];
            for (std::uint64_t idx = 0; idx < f.rows(); ++idx)
                rhs += f.row(idx)[c] * f.row(idx)[c];
            rhs /= rational_pow(Rational(2), m);
            chk.require(lhs == rhs, "parseval failed");
        }
    }
}

void c9_property_suites(Check& chk) {
    for (const char* name :
         {"sandwich", "homogeneity", "symmetry", "triangle", "quality_monotone"}) {
        auto rep = verify::run_suite(name, 20260809, 1000);
        chk.require(rep.cases >= 1000, std::string(name) + ": ran fewer than 1000 cases");
        chk.require(rep.pass(), std::string(name) + ": " +
                                    (rep.messages.empty() ? "failures" : rep.messages.front()));
    }
}

}  // namespace

int main() {
    std::printf("cotypelab acceptance suite\n");
    criterion(1, "diagonal-norm identity (exact, float cross-check 1e-9)", 5.0, c1_diagonal);
    criterion(2, "rank-one identity closes exactly on 20 random tensors", 5.0, c2_rank_one);
    criterion(3, "hadamard quality margins are exact", 1.0, c3_quality);
    criterion(4, "smoothing pipeline packs verified disjoint triples", 2.0, c4_smoothing);
    criterion(5, "S-membership margins equal 1 and 2P-1 at m=3", 10.0, c5_membership);
    criterion(6, "symmetrization identity, exact and monte-carlo", 30.0, c6_symmetrization);
    criterion(7, "certificate value bounded by the matched cotype ratio", 60.0,
              c7_certificate_soundness);
    criterion(8, "fourier inversion and parseval exact on 100 functions", 5.0, c8_fourier);
    criterion(9, "property suites pass 1000 randomized cases each", 60.0, c9_property_suites);
    if (failures) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
