#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "uedalab/multiplier.hpp"
#include "uedalab/scalar.hpp"

namespace uedalab {

/// N charts on a cycle; edge e connects chart e to chart (e+1) mod N and
/// carries the flat weight rho_e. The designated twist edge (default the
/// closing edge (N,1)) is where callers place the nontrivial weight.
template <class C>
struct CycleCover {
    int N = 3;
    std::vector<C> weights;  // one per edge, all nonzero
    int twist_edge = -1;     // defaults to N-1

    static CycleCover with_twist(int N, const C& twist) {
        using T = scalar_traits<C>;
        if (N < 3) throw std::invalid_argument("CycleCover: N >= 3 required");
        CycleCover cov;
        cov.N = N;
        cov.weights.assign(N, T::one());
        cov.twist_edge = N - 1;
        cov.weights[N - 1] = twist;
        return cov;
    }

    void validate() const {
        using T = scalar_traits<C>;
        if (N < 3 || static_cast<int>(weights.size()) != N)
            throw std::invalid_argument("CycleCover: need N >= 3 weights");
        for (const C& w : weights)
            if (T::is_zero(w)) throw std::invalid_argument("CycleCover: zero edge weight");
    }

    C holonomy() const {
        using T = scalar_traits<C>;
        C h = T::one();
        for (const C& w : weights) h *= w;
        return h;
    }
};

template <class C>
using Cochain0 = std::vector<C>;  // one value per chart
template <class C>
using Cochain1 = std::vector<C>;  // one value per edge

/// On edge (j,k): alpha_{jk} = -beta_j + rho_{jk} beta_k.
template <class C>
Cochain1<C> coboundary(const CycleCover<C>& cover, const Cochain0<C>& beta) {
    cover.validate();
    if (static_cast<int>(beta.size()) != cover.N)
        throw std::invalid_argument("coboundary: cochain size mismatch");
    Cochain1<C> alpha(cover.N);
    for (int e = 0; e < cover.N; ++e) {
        int k = (e + 1) % cover.N;
        alpha[e] = -beta[e] + cover.weights[e] * beta[k];
    }
    return alpha;
}

namespace detail {

// Telescopes beta_{e+1} = (alpha_e + beta_e)/rho_e with beta_1 = x unknown,
// writing beta_e = u_e + v_e x. Returns (u, v) and the closing data.
template <class C>
struct Telescope {
    std::vector<C> u, v;
    C closing_u;  // alpha_{N-1} + u_{N-1}
    C closing_v;  // rho_{N-1} - v_{N-1}
};

template <class C>
Telescope<C> telescope(const CycleCover<C>& cover, const Cochain1<C>& alpha) {
    using T = scalar_traits<C>;
    Telescope<C> t;
    t.u.assign(cover.N, T::zero());
    t.v.assign(cover.N, T::one());
    for (int e = 0; e + 1 < cover.N; ++e) {
        C inv = T::inverse(cover.weights[e]);
        t.u[e + 1] = (alpha[e] + t.u[e]) * inv;
        t.v[e + 1] = t.v[e] * inv;
    }
    t.closing_u = alpha[cover.N - 1] + t.u[cover.N - 1];
    t.closing_v = cover.weights[cover.N - 1] - t.v[cover.N - 1];
    return t;
}

}  // namespace detail

/// The telescoped compatibility scalar whose vanishing characterizes
/// [alpha] = 0 at trivial holonomy; for N = 3 with trivial non-twist weights
/// it is alpha_12 + alpha_23 + alpha_31.
template <class C>
C obstruction(const CycleCover<C>& cover, const Cochain1<C>& alpha) {
    cover.validate();
    if (static_cast<int>(alpha.size()) != cover.N)
        throw std::invalid_argument("obstruction: cochain size mismatch");
    return detail::telescope(cover, alpha).closing_u;
}

template <class C>
struct SolveReport {
    std::optional<Cochain0<C>> beta;
    C obstruction{};           // telescoped compatibility scalar
    bool used_normalization = false;  // beta_1 := 0 branch (trivial holonomy)
    bool near_resonant = false;
    bool obstructed = false;   // trivial holonomy, nonzero class
    double bound_ratio = 0.0;  // d(1, holonomy) * max|beta| / max|alpha|
};

struct SolveOptions {
    double divisor_floor_scale = 1e-14;  // floor = scale * (1 + |holonomy|)
    double obstruction_tol = 1e-10;      // relative to max|alpha|
};

/// Solves the coboundary equation delta beta = alpha on the cycle. Every
/// 1-cochain on a cycle is a cocycle; holonomy != 1 gives the unique
/// primitive, holonomy = 1 is solvable iff the obstruction vanishes, and then
/// beta_1 := 0 normalizes the answer.
template <class C>
SolveReport<C> solve(const CycleCover<C>& cover, const Cochain1<C>& alpha,
                     const SolveOptions& opts = {}) {
    using T = scalar_traits<C>;
    cover.validate();
    if (static_cast<int>(alpha.size()) != cover.N)
        throw std::invalid_argument("solve: cochain size mismatch");
    auto t = detail::telescope(cover, alpha);
    C holonomy = cover.holonomy();
    SolveReport<C> rep;
    rep.obstruction = t.closing_u;

    double max_alpha = 0.0;
    for (const C& a : alpha) max_alpha = std::max(max_alpha, T::abs(a));

    bool trivial_holonomy = (holonomy == T::one());
    C x = T::zero();
    if (trivial_holonomy) {
        bool vanishes = T::exact ? T::is_zero(t.closing_u)
                                 : T::abs(t.closing_u) <= opts.obstruction_tol * std::max(max_alpha, 1e-300);
        if (!vanishes) {
            rep.obstructed = true;
            return rep;  // obstructed: nonzero class
        }
        rep.used_normalization = true;  // beta_1 := 0
    } else {
        double floor = opts.divisor_floor_scale * (1.0 + T::abs(holonomy));
        if (!T::exact && T::abs(T::one() - holonomy) < floor) rep.near_resonant = true;
        x = t.closing_u / t.closing_v;
    }
    Cochain0<C> beta(cover.N);
    double max_beta = 0.0;
    for (int j = 0; j < cover.N; ++j) {
        beta[j] = t.u[j] + t.v[j] * x;
        max_beta = std::max(max_beta, T::abs(beta[j]));
    }
    std::complex<double> h = T::to_complex(holonomy);
    double d = circle_distance(0.0, std::arg(h) / (2 * std::numbers::pi));
    if (max_alpha > 0.0) rep.bound_ratio = d * max_beta / max_alpha;
    rep.beta = std::move(beta);
    return rep;
}

/// Empirical Ueda constant: max over random unit-ball cochains of
/// d(1, sigma) * max|beta| / max|alpha|. For N = 3 the sharp-ish derived
/// bound is 2.
inline double ueda_bound_check(const CycleCover<std::complex<double>>& cover, int trials,
                               std::uint64_t seed) {
    cover.validate();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto disk = [&] {
        double r = std::sqrt(unit(rng));
        double t = 2 * std::numbers::pi * unit(rng);
        return std::polar(r, t);
    };
    double worst = 0.0;
    for (int i = 0; i < trials; ++i) {
        Cochain1<std::complex<double>> alpha(cover.N);
        for (auto& a : alpha) a = disk();
        auto rep = solve(cover, alpha);
        if (rep.beta) worst = std::max(worst, rep.bound_ratio);
    }
    return worst;
}

/// Normalization constant reconciling the two branch values at a split node:
/// ell = (s^m a_+ - a_-) / (1 - s^m), so that a_+ + ell = s^{-m}(a_- + ell).
template <class C>
C nodal_ell(const C& a_plus, const C& a_minus, const C& s, long long m,
            double divisor_floor = 1e-14) {
    using T = scalar_traits<C>;
    C sm = scalar_pow(s, m);
    C denom = T::one() - sm;
    if (T::exact ? T::is_zero(denom) : T::abs(denom) < divisor_floor)
        throw std::domain_error("torsion parameter: nodal correction undefined");
    return (sm * a_plus - a_minus) / denom;
}

/// K_1 = e^{2 pi} K_0 (1 + 3 e^{2 pi}).
inline double nodal_bound_constant(double K0) {
    if (K0 < 0) throw std::invalid_argument("nodal_bound_constant: K0 >= 0 required");
    double e2pi = std::exp(2 * std::numbers::pi);
    return e2pi * K0 * (1.0 + 3.0 * e2pi);
}

}  // namespace uedalab
