#include "core/fourier.hpp"

#include <cmath>

namespace cotypelab::fourier {

namespace {

template <class S>
S scale_down(const S& v, int m);

template <>
Rational scale_down(const Rational& v, int m) {
    return v / rational_pow(Rational(2), m);
}

template <>
double scale_down(const double& v, int m) {
    return v * std::ldexp(1.0, -m);
}

constexpr int kMaxCube = 26;

void check_m(int m) {
    if (m < 1 || m > kMaxCube)
        throw PreconditionError("hypercube_fourier", "cube dimension m must satisfy 1 <= m <= " +
                                                         std::to_string(kMaxCube));
}

}  // namespace

template <class S>
CubeFunction<S> CubeFunction<S>::zero(int m, int d) {
    check_m(m);
    if (d < 1) throw PreconditionError("hypercube_fourier", "output dimension d must be positive");
    CubeFunction<S> f;
    f.m = m;
    f.d = d;
    f.table.assign((std::uint64_t(1) << m) * d, S(0));
    return f;
}

template <class S>
void CubeFunction<S>::validate() const {
    check_m(m);
    if (d < 1) throw PreconditionError("hypercube_fourier", "output dimension d must be positive");
    if (table.size() != (std::uint64_t(1) << m) * static_cast<std::uint64_t>(d))
        throw PreconditionError("hypercube_fourier", "table must have exactly 2^m rows of d entries");
}

int walsh_eval(std::uint64_t mask, const SignVector& eps, int m) {
    check_m(m);
    if (eps.dim() != m) throw PreconditionError("hypercube_fourier", "sign vector dimension mismatch");
    if (mask >> m) throw PreconditionError("hypercube_fourier", "index set exceeds dimension m");
    return walsh_sign(mask, eps.index());
}

template <class S>
std::vector<S> fourier_coefficient(const CubeFunction<S>& f, std::uint64_t mask) {
    f.validate();
    if (mask >> f.m) throw PreconditionError("hypercube_fourier", "index set exceeds dimension m");
    std::vector<S> acc(f.d, S(0));
    for (std::uint64_t idx = 0; idx < f.rows(); ++idx) {
        const S* r = f.row(idx);
        if (walsh_sign(mask, idx) > 0)
            for (int c = 0; c < f.d; ++c) acc[c] += r[c];
        else
            for (int c = 0; c < f.d; ++c) acc[c] -= r[c];
    }
    for (S& v : acc) v = scale_down(v, f.m);
    return acc;
}

template <class S>
FourierTable<S> full_transform(const CubeFunction<S>& f) {
    f.validate();
    // In-place Walsh butterfly over the row index; exact for rational S.
    std::vector<S> work = f.table;
    const std::uint64_t n = f.rows();
    for (int b = 0; b < f.m; ++b) {
        const std::uint64_t half = std::uint64_t(1) << b;
        for (std::uint64_t i = 0; i < n; ++i) {
            if (i & half) continue;
            S* lo = work.data() + i * f.d;
            S* hi = work.data() + (i | half) * f.d;
            for (int c = 0; c < f.d; ++c) {
                S a = lo[c], bb = hi[c];
                lo[c] = a + bb;
                hi[c] = a - bb;
            }
        }
    }
    FourierTable<S> t;
    t.m = f.m;
    t.d = f.d;
    for (std::uint64_t mask = 0; mask < n; ++mask) {
        std::vector<S> coeff(f.d);
        for (int c = 0; c < f.d; ++c) coeff[c] = scale_down(work[mask * f.d + c], f.m);
        t.coefficients.emplace(mask, std::move(coeff));
    }
    return t;
}

template <class S>
FourierTable<S> transform_up_to_level(const CubeFunction<S>& f, int level_cap) {
    f.validate();
    if (level_cap < 0 || level_cap > f.m)
        throw PreconditionError("hypercube_fourier", "level cap must lie in [0, m]");
    FourierTable<S> t;
    t.m = f.m;
    t.d = f.d;
    t.level_cap = level_cap;
    for (std::uint64_t mask = 0; mask < f.rows(); ++mask)
        if (__builtin_popcountll(mask) <= level_cap)
            t.coefficients.emplace(mask, fourier_coefficient(f, mask));
    return t;
}

template <class S>
std::vector<std::vector<S>> level_one(const CubeFunction<S>& f) {
    f.validate();
    std::vector<std::vector<S>> out;
    out.reserve(f.m);
    for (int i = 0; i < f.m; ++i) out.push_back(fourier_coefficient(f, std::uint64_t(1) << i));
    return out;
}

template <class S>
CubeFunction<S> rademacher_projection(const CubeFunction<S>& f) {
    auto lv = level_one(f);
    CubeFunction<S> g = CubeFunction<S>::zero(f.m, f.d);
    for (std::uint64_t idx = 0; idx < g.rows(); ++idx) {
        S* r = g.row(idx);
        for (int i = 0; i < f.m; ++i) {
            if ((idx >> i) & 1)
                for (int c = 0; c < f.d; ++c) r[c] -= lv[i][c];
            else
                for (int c = 0; c < f.d; ++c) r[c] += lv[i][c];
        }
    }
    return g;
}

template <class S>
CubeFunction<S> reconstruct(const FourierTable<S>& t) {
    if (t.level_cap)
        throw PreconditionError("hypercube_fourier",
                                "reconstruct requires a full Fourier table (level cap present)");
    check_m(t.m);
    CubeFunction<S> f = CubeFunction<S>::zero(t.m, t.d);
    for (const auto& [mask, coeff] : t.coefficients) {
        if (mask >> t.m) throw PreconditionError("hypercube_fourier", "coefficient mask out of range");
        if (static_cast<int>(coeff.size()) != t.d)
            throw PreconditionError("hypercube_fourier", "coefficient dimension mismatch");
        for (std::uint64_t idx = 0; idx < f.rows(); ++idx) {
            S* r = f.row(idx);
            if (walsh_sign(mask, idx) > 0)
                for (int c = 0; c < t.d; ++c) r[c] += coeff[c];
            else
                for (int c = 0; c < t.d; ++c) r[c] -= coeff[c];
        }
    }
    return f;
}

template <class S>
double rademacher_ratio(const CubeFunction<S>& f) {
    CubeFunction<S> rad = rademacher_projection(f);
    double num = 0, den = 0;
    for (std::uint64_t idx = 0; idx < f.rows(); ++idx) {
        for (int c = 0; c < f.d; ++c) {
            double a = static_cast<double>(rad.row(idx)[c]);
            double b = static_cast<double>(f.row(idx)[c]);
            num += a * a;
            den += b * b;
        }
    }
    if (den == 0) return 0.0;
    return std::sqrt(num / den);
}

template struct CubeFunction<Rational>;
template struct CubeFunction<double>;
template std::vector<Rational> fourier_coefficient(const CubeFunction<Rational>&, std::uint64_t);
template std::vector<double> fourier_coefficient(const CubeFunction<double>&, std::uint64_t);
template FourierTable<Rational> full_transform(const CubeFunction<Rational>&);
template FourierTable<double> full_transform(const CubeFunction<double>&);
template FourierTable<Rational> transform_up_to_level(const CubeFunction<Rational>&, int);
template FourierTable<double> transform_up_to_level(const CubeFunction<double>&, int);
template std::vector<std::vector<Rational>> level_one(const CubeFunction<Rational>&);
template std::vector<std::vector<double>> level_one(const CubeFunction<double>&);
template CubeFunction<Rational> rademacher_projection(const CubeFunction<Rational>&);
template CubeFunction<double> rademacher_projection(const CubeFunction<double>&);
template CubeFunction<Rational> reconstruct(const FourierTable<Rational>&);
template CubeFunction<double> reconstruct(const FourierTable<double>&);
template double rademacher_ratio(const CubeFunction<Rational>&);
template double rademacher_ratio(const CubeFunction<double>&);

}  // namespace cotypelab::fourier
