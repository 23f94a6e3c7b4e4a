#include "core/cotype.hpp"

#include <algorithm>
#include <cmath>

#include "core/rng.hpp"

namespace cotypelab::cotype {

using num::PowerValue;

CodewordTable tabulate(const smoothing::SmoothedCode& sc) {
    sc.validate();
    CodewordTable tab;
    tab.m = sc.m();
    tab.dim = sc.three_n();
    const std::uint64_t total = std::uint64_t(1) << tab.m;
    tab.words.reserve(total);
    for (std::uint64_t msg = 0; msg < total; ++msg)
        tab.words.push_back(sc.padded.encode(SignVector::from_index(tab.m, msg)));
    return tab;
}

Rational witness_entry(const CodewordTable& tab, int t, int u, int v, int w) {
    if (t < 1 || t > tab.m) throw PreconditionError("cotype", "witness index out of range");
    long acc = 0;
    for (std::uint64_t msg = 0; msg < tab.words.size(); ++msg) {
        const ldc::Word& cw = tab.words[msg];
        int prod = cw[u] * cw[v] * cw[w];
        if ((msg >> (t - 1)) & 1) prod = -prod;  // eps_t = -1 when the bit is set
        acc += prod;
    }
    return Rational(Int(acc), Int(tab.words.size()));
}

Tensor3<Rational> witness_tensor(const CodewordTable& tab, int t) {
    if (t < 1 || t > tab.m) throw PreconditionError("cotype", "witness index out of range");
    const int N = tab.dim;
    std::vector<long> counts(std::size_t(N) * N * N, 0);
    for (std::uint64_t msg = 0; msg < tab.words.size(); ++msg) {
        const ldc::Word& cw = tab.words[msg];
        const long sign_t = ((msg >> (t - 1)) & 1) ? -1 : 1;
        for (int u = 0; u < N; ++u) {
            long su = sign_t * cw[u];
            for (int v = 0; v < N; ++v) {
                long suv = su * cw[v];
                std::size_t base = (std::size_t(u) * N + v) * N;
                for (int w = 0; w < N; ++w) counts[base + w] += suv * cw[w];
            }
        }
    }
    Tensor3<Rational> x = Tensor3<Rational>::zeros(N);
    const Int den(tab.words.size());
    for (std::size_t i = 0; i < counts.size(); ++i) x.e[i] = Rational(Int(counts[i]), den);
    return x;
}

Tensor3<Rational> sign_combination(const CodewordTable& tab, const SignVector& signs) {
    if (signs.dim() != tab.m) throw PreconditionError("cotype", "sign pattern dimension mismatch");
    const int N = tab.dim;
    std::vector<long> counts(std::size_t(N) * N * N, 0);
    for (std::uint64_t msg = 0; msg < tab.words.size(); ++msg) {
        long c = 0;  // sum_t signs_t * eps_t(msg)
        for (int t = 0; t < tab.m; ++t) {
            int eps_t = ((msg >> t) & 1) ? -1 : 1;
            c += signs.s[t] * eps_t;
        }
        if (c == 0) continue;
        const ldc::Word& cw = tab.words[msg];
        for (int u = 0; u < N; ++u) {
            long su = c * cw[u];
            for (int v = 0; v < N; ++v) {
                long suv = su * cw[v];
                std::size_t base = (std::size_t(u) * N + v) * N;
                for (int w = 0; w < N; ++w) counts[base + w] += suv * cw[w];
            }
        }
    }
    Tensor3<Rational> x = Tensor3<Rational>::zeros(N);
    const Int den(tab.words.size());
    for (std::size_t i = 0; i < counts.size(); ++i) x.e[i] = Rational(Int(counts[i]), den);
    return x;
}

WitnessFamily build_hat(const smoothing::SmoothedCode& sc) {
    if (sc.m() > 12)
        throw PreconditionError("cotype",
                                "build_hat materializes 2^m expectations over (3n)^3 tensors and is "
                                "refused for m > 12");
    CodewordTable tab = tabulate(sc);
    WitnessFamily fam;
    fam.m = tab.m;
    fam.dim = tab.dim;
    fam.provenance = "smoothed(m=" + std::to_string(sc.m()) + ",n=" + std::to_string(sc.n()) + ")";
    for (int t = 1; t <= tab.m; ++t) fam.x.push_back(witness_tensor(tab, t));
    return fam;
}

namespace {

MembershipReport membership_from_entries(
    const smoothing::SmoothedCode& sc, const Rational& alpha,
    const std::function<Rational(int t, int u, int v, int w)>& entry) {
    MembershipReport rep;
    rep.alpha_threshold = alpha;
    bool first = true;
    for (int t = 1; t <= sc.m(); ++t) {
        const auto& bit = sc.bits[t - 1];
        Rational bit_min;
        for (int j = 0; j < bit.J; ++j) {
            Rational margin = entry(t, bit.pi[j] - 1, bit.sigma[j] - 1, bit.tau[j] - 1);
            if (bit.signs[j] < 0) margin = -margin;
            rep.rows.push_back({t, j + 1, margin});
            if (j == 0 || margin < bit_min) bit_min = margin;
        }
        rep.alpha_per_bit.push_back(bit_min);
        rep.j_per_bit.push_back(bit.J);
        rep.j_total += bit.J;
        if (first || bit_min < rep.alpha_min) rep.alpha_min = bit_min;
        first = false;
    }
    rep.pass = rep.alpha_min >= alpha;
    return rep;
}

}  // namespace

MembershipReport s_membership(const WitnessFamily& w, const smoothing::SmoothedCode& sc,
                              const Rational& alpha) {
    if (w.m != sc.m() || w.dim != sc.three_n())
        throw PreconditionError("cotype", "witness family does not match the smoothed code");
    return membership_from_entries(sc, alpha, [&](int t, int u, int v, int k) {
        return w.x[t - 1].at(u, v, k);
    });
}

MembershipReport s_membership(const smoothing::SmoothedCode& sc, const Rational& alpha) {
    CodewordTable tab = tabulate(sc);
    return membership_from_entries(sc, alpha, [&](int t, int u, int v, int k) {
        return witness_entry(tab, t, u, v, k);
    });
}

ExactValue s_lower_bound(const Rational& alpha_min, int J, const SpaceSpec& spec3n, const Rational& K) {
    if (alpha_min <= 0)
        throw PreconditionError("cotype", "s_lower_bound requires a positive membership margin");
    if (J < 1 || J > spec3n.n) throw PreconditionError("cotype", "triple count J out of range");
    if (K < 1) throw PreconditionError("cotype", "tensor-symmetry constant K must be >= 1");
    ExactValue v = tensor::diagonal_norm(spec3n.n, spec3n);
    v *= alpha_min * Rational(J, spec3n.n) / K;
    return v;
}

// ------------------------------------------------------------ symmetrization

namespace {

int sgn_of(const Rational& r) { return r < 0 ? -1 : 1; }  // sign(0) = +1

void check_perm0(const std::vector<int>& p, int n, const char* what) {
    if (static_cast<int>(p.size()) != n)
        throw PreconditionError("cotype", std::string(what) + " has wrong length");
    std::vector<bool> seen(n, false);
    for (int v : p) {
        if (v < 0 || v >= n || seen[v])
            throw PreconditionError("cotype", std::string(what) + " is not a permutation");
        seen[v] = true;
    }
}

}  // namespace

Tensor3<Rational> symmetrize(const Tensor3<Rational>& x, const PermWitness& pw,
                             const std::vector<Sign>& eps, const std::vector<Sign>& delta,
                             const std::vector<Sign>& eta, const std::vector<int>& rho) {
    x.validate();
    const int n = x.n;
    check_perm0(pw.pi, n, "pi");
    check_perm0(pw.sigma, n, "sigma");
    check_perm0(pw.tau, n, "tau");
    check_perm0(rho, n, "rho");
    if (pw.pinned < 0 || pw.pinned > n)
        throw PreconditionError("cotype", "pinned prefix must lie in [0, n]");
    for (const auto* s : {&eps, &delta, &eta})
        if (static_cast<int>(s->size()) != n)
            throw PreconditionError("cotype", "sign vector dimension mismatch");

    Tensor3<Rational> out = Tensor3<Rational>::zeros(n);
    for (int k = 0; k < n; ++k) {
        int rk = rho[k];
        int s_k = (rk >= pw.pinned)
                      ? int(eta[k])
                      : int(eps[k]) * int(delta[k]) * sgn_of(x.at(pw.pi[rk], pw.sigma[rk], pw.tau[rk]));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Rational v = x.at(pw.pi[rho[i]], pw.sigma[rho[j]], pw.tau[rk]);
                if (int(eps[i]) * int(delta[j]) * s_k < 0) v = -v;
                out.at(i, j, k) = v;
            }
    }
    return out;
}

Tensor3<Rational> symmetrize_mean_exact(const Tensor3<Rational>& x, const PermWitness& pw) {
    x.validate();
    const int n = x.n;
    if (n > 6)
        throw PreconditionError("cotype",
                                "exact symmetrization mean enumerates n! permutations; refused for n > 6");
    check_perm0(pw.pi, n, "pi");
    check_perm0(pw.sigma, n, "sigma");
    check_perm0(pw.tau, n, "tau");
    if (pw.pinned < 0 || pw.pinned > n)
        throw PreconditionError("cotype", "pinned prefix must lie in [0, n]");

    Tensor3<Rational> total = Tensor3<Rational>::zeros(n);
    std::vector<int> rho(n);
    for (int i = 0; i < n; ++i) rho[i] = i;
    Int perms(0);

    // Sign symbols: 0..n-1 -> eps_i, n..2n-1 -> delta_i, 2n..3n-1 -> eta_i.
    do {
        ++perms;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    int rk = rho[k];
                    Rational a = x.at(pw.pi[rho[i]], pw.sigma[rho[j]], pw.tau[rk]);
                    if (a == 0) continue;
                    int fixed = 1;
                    std::vector<int> syms{i, n + j};
                    if (rk >= pw.pinned) {
                        syms.push_back(2 * n + k);
                    } else {
                        syms.push_back(k);
                        syms.push_back(n + k);
                        fixed = sgn_of(x.at(pw.pi[rk], pw.sigma[rk], pw.tau[rk]));
                    }
                    std::sort(syms.begin(), syms.end());
                    syms.erase(std::unique(syms.begin(), syms.end()), syms.end());
                    // Symbols appearing twice square away; survivors average to 0.
                    long acc = 0;
                    const int cnt = static_cast<int>(syms.size());
                    for (int massign = 0; massign < (1 << cnt); ++massign) {
                        int prod = fixed;
                        auto val = [&](int sym) {
                            for (int b = 0; b < cnt; ++b)
                                if (syms[b] == sym) return (massign >> b) & 1 ? -1 : 1;
                            return 1;
                        };
                        prod *= val(i) * val(n + j);
                        if (rk >= pw.pinned)
                            prod *= val(2 * n + k);
                        else
                            prod *= val(k) * val(n + k) *
                                    sgn_of(x.at(pw.pi[rk], pw.sigma[rk], pw.tau[rk]));
                        acc += prod;
                    }
                    if (acc != 0) total.at(i, j, k) += a * Rational(Int(acc), Int(1) << cnt);
                }
    } while (std::next_permutation(rho.begin(), rho.end()));

    for (Rational& v : total.e) v /= Rational(perms);

    // Closed form: (sum over the pinned prefix of |a_diag| / n) on the diagonal.
    Rational coeff(0);
    for (int l = 0; l < pw.pinned; ++l) coeff += rational_abs(x.at(pw.pi[l], pw.sigma[l], pw.tau[l]));
    coeff /= n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const Rational expect = (i == j && j == k) ? coeff : Rational(0);
                if (total.at(i, j, k) != expect)
                    throw InvariantViolation("cotype.symmetrize_mean",
                                             "exact mean disagrees with the closed form at entry (" +
                                                 std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                                 "," + std::to_string(k + 1) + ")");
            }
    return total;
}

McMean symmetrize_mean_mc(const Tensor3<Rational>& x, const PermWitness& pw, std::uint64_t seed,
                          std::uint64_t samples) {
    x.validate();
    if (samples < 2) throw PreconditionError("cotype", "monte carlo mean needs at least 2 samples");
    const int n = x.n;
    McMean out;
    out.mean = Tensor3<double>::zeros(n);
    out.stderr_ = Tensor3<double>::zeros(n);
    out.samples = samples;
    out.seed = seed;
    Tensor3<double> sum = Tensor3<double>::zeros(n), sumsq = Tensor3<double>::zeros(n);
    Rng rng(seed);
    std::vector<int> rho(n);
    std::vector<Sign> eps(n), delta(n), eta(n);
    for (std::uint64_t it = 0; it < samples; ++it) {
        for (int i = 0; i < n; ++i) {
            rho[i] = i;
            eps[i] = static_cast<Sign>(rng.sign());
            delta[i] = static_cast<Sign>(rng.sign());
            eta[i] = static_cast<Sign>(rng.sign());
        }
        rng.shuffle(rho);
        Tensor3<Rational> draw = symmetrize(x, pw, eps, delta, eta, rho);
        for (std::size_t idx = 0; idx < draw.e.size(); ++idx) {
            double v = static_cast<double>(draw.e[idx]);
            sum.e[idx] += v;
            sumsq.e[idx] += v * v;
        }
    }
    const double N = static_cast<double>(samples);
    for (std::size_t idx = 0; idx < sum.e.size(); ++idx) {
        double mean = sum.e[idx] / N;
        double var = std::max(0.0, (sumsq.e[idx] - N * mean * mean) / (N - 1.0));
        out.mean.e[idx] = mean;
        out.stderr_.e[idx] = std::sqrt(var / N);
    }
    return out;
}

// ----------------------------------------------------------- Rademacher sums

Rational mean_abs_sign_sum(int m) {
    if (m < 1) throw PreconditionError("cotype", "m must be positive");
    Int total(0);
    for (int k = 0; k <= m; ++k) {
        int diff = m - 2 * k;
        total += binomial(m, k) * (diff < 0 ? -diff : diff);
    }
    return Rational(total, Int(1) << m);
}

RadUpper rad_sum_upper(const Tensor3<Rational>& sign_sum, int m, const SpaceSpec& spec,
                       const RadUpperOptions& opt) {
    if (!opt.use_projective && !opt.use_averaging)
        throw PreconditionError("cotype", "no Rademacher-sum upper bound strategy enabled");
    std::vector<std::pair<ExactValue, std::string>> candidates;
    if (opt.use_averaging) {
        // ||sum_t eps_t x_t|| = ||E_delta[(sum eps_t delta_t) f(delta)]||
        //                    <= E|sum delta| * max ||f(delta)|| = E|sum delta| * Omega.
        ExactValue bound = tensor::omega(spec);
        bound *= mean_abs_sign_sum(m);
        candidates.emplace_back(std::move(bound), "sign-averaging");
    }
    if (opt.use_projective) {
        auto ub = tensor::projective_upper(sign_sum, spec, opt.upper);
        candidates.emplace_back(ub.value, "projective_upper:" + ub.method);
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < candidates.size(); ++i)
        if (candidates[i].first.compare(candidates[best].first) == num::Cmp::LT) best = i;
    return {candidates[best].first, candidates[best].second};
}

RadUpper rad_sum_upper(const WitnessFamily& w, const SignVector& eps, const SpaceSpec& spec,
                       const RadUpperOptions& opt) {
    if (eps.dim() != w.m) throw PreconditionError("cotype", "sign pattern dimension mismatch");
    if (spec.n != w.dim) throw PreconditionError("cotype", "space dimension must equal 3n");
    Tensor3<Rational> sum = Tensor3<Rational>::zeros(w.dim);
    for (int t = 0; t < w.m; ++t) {
        if (eps.s[t] > 0)
            sum += w.x[t];
        else
            sum -= w.x[t];
    }
    return rad_sum_upper(sum, w.m, spec, opt);
}

// ----------------------------------------------------------------- certify

Certificate certify(const smoothing::SmoothedCode& sc, const SpaceSpec& spec, const Rational& q,
                    const Rational& theta, const CertifyOptions& opt, const std::string& inputs_hash) {
    sc.validate();
    if (q < 2) throw PreconditionError("cotype", "cotype exponent q must satisfy q >= 2");
    if (!spec.certifiable())
        throw PreconditionError("cotype", "certification requires 1/p1 + 1/p2 + 1/p3 <= 1");
    if (spec.n != sc.three_n())
        throw PreconditionError("cotype", "space dimension must equal 3n of the smoothed code");
    if (theta <= 0 || theta >= Rational(1, 2))
        throw PreconditionError("cotype", "theta must satisfy 0 < theta < 1/2");

    Certificate cert;
    cert.q = q;
    cert.spec = spec;
    cert.m = sc.m();
    cert.n = sc.n();
    cert.theta = theta;
    cert.phi = sc.phi;
    cert.alpha_threshold = theta / 8;
    cert.j_min = sc.j_min();
    cert.inputs_hash = inputs_hash;

    CodewordTable tab = tabulate(sc);
    MembershipReport mem = membership_from_entries(sc, cert.alpha_threshold,
                                                   [&](int t, int u, int v, int k) {
                                                       return witness_entry(tab, t, u, v, k);
                                                   });
    cert.alpha_min = mem.alpha_min;
    for (const Rational& a : mem.alpha_per_bit)
        if (a <= 0)
            throw PreconditionError("cotype",
                                    "membership failure: a witness has a nonpositive margin, so no "
                                    "symmetrization lower bound exists");
    if (!mem.pass)
        cert.warnings.push_back("achieved alpha_min " + format_rational(mem.alpha_min) +
                                " is below the theoretical threshold theta/8 = " +
                                format_rational(cert.alpha_threshold) +
                                "; the certificate uses the achieved value, which stays sound");

    // Per-witness lower bounds: the symmetrization route, optionally improved
    // by dual functionals evaluated on the materialized witness.
    tensor::PeelParams ascent;
    ascent.seed = opt.seed ^ 0x5bd1e995u;
    for (int t = 1; t <= cert.m; ++t) {
        Certificate::PerWitness pw;
        pw.alpha = mem.alpha_per_bit[t - 1];
        pw.J = mem.j_per_bit[t - 1];
        pw.L = s_lower_bound(pw.alpha, pw.J, spec, Rational(1));
        pw.method = "s_lower_bound";
        if (opt.witness_lower_entry || opt.witness_lower_diagonal || opt.witness_lower_ascent) {
            Tensor3<Rational> xt = witness_tensor(tab, t);
            auto consider = [&](tensor::LowerBound<Rational>&& lb) {
                if (pw.L.compare(lb.value) == num::Cmp::LT) {
                    pw.L = lb.value;
                    pw.method = lb.method;
                }
            };
            if (opt.witness_lower_entry)
                consider(tensor::dual_lower(xt, spec, tensor::LowerMethod::EntryFunctional));
            if (opt.witness_lower_diagonal)
                consider(tensor::dual_lower(xt, spec, tensor::LowerMethod::DiagonalFunctional));
            if (opt.witness_lower_ascent)
                consider(tensor::dual_lower(xt, spec, tensor::LowerMethod::RankOneAscent, ascent));
        }
        cert.per_witness.push_back(std::move(pw));
    }

    // Per-sign-pattern upper bounds over all 2^m patterns.
    ExactValue den_sum;
    for (std::uint64_t s = 0; s < (std::uint64_t(1) << cert.m); ++s) {
        SignVector signs = SignVector::from_index(cert.m, s);
        RadUpperOptions ro = opt.rad;
        ro.upper.peel.seed = opt.seed ^ (0x9e3779b97f4a7c15ull + s);
        RadUpper ru;
        if (ro.use_projective) {
            Tensor3<Rational> sum = sign_combination(tab, signs);
            ru = rad_sum_upper(sum, cert.m, spec, ro);
        } else {
            ru = rad_sum_upper(Tensor3<Rational>::zeros(spec.n), cert.m, spec, ro);
        }
        den_sum += ru.value.pow_int(2);
        cert.per_sign.push_back({std::move(ru.value), std::move(ru.method)});
    }
    den_sum *= Rational(Int(1), Int(1) << cert.m);
    cert.denominator_sq = den_sum;

    for (const auto& pw : cert.per_witness) cert.numerator_qth += pw.L.pow_rational(q);

    // Final roots in floating point with one-sided rounding.
    double num = num::root_lower(cert.numerator_qth, q);
    double den = num::root_upper(cert.denominator_sq, Rational(2));
    if (den <= 0) throw InvariantViolation("cotype.certify", "vanishing Rademacher average");
    cert.value = (num / den) * (1.0 - 1e-15);
    return cert;
}

double cotype_ratio(const std::vector<Tensor3<Rational>>& xs, const Rational& q,
                    const std::function<double(const Tensor3<Rational>&)>& oracle) {
    if (xs.empty()) throw PreconditionError("cotype", "cotype_ratio needs at least one vector");
    const int m = static_cast<int>(xs.size());
    if (m > 16) throw PreconditionError("cotype", "cotype_ratio enumerates 2^m sign sums; m <= 16");
    const int dim = xs.front().n;
    for (const auto& x : xs)
        if (x.n != dim) throw PreconditionError("cotype", "vectors must share one dimension");

    const double qd = static_cast<double>(q);
    double num = 0;
    for (const auto& x : xs) num += std::pow(oracle(x), qd);
    num = std::pow(num, 1.0 / qd);

    double den = 0;
    const std::uint64_t total = std::uint64_t(1) << m;
    for (std::uint64_t s = 0; s < total; ++s) {
        Tensor3<Rational> sum = Tensor3<Rational>::zeros(dim);
        for (int t = 0; t < m; ++t) {
            if ((s >> t) & 1)
                sum -= xs[t];
            else
                sum += xs[t];
        }
        double v = oracle(sum);
        den += v * v;
    }
    den = std::sqrt(den / static_cast<double>(total));
    if (den == 0) throw PreconditionError("cotype", "norm oracle vanished on every sign combination");
    return num / den;
}

}  // namespace cotypelab::cotype
