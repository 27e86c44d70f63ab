#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "uedalab/cech.hpp"
#include "uedalab/multiplier.hpp"
#include "uedalab/scalar.hpp"

namespace uedalab {

/// Polynomial in the deformation parameter s, coefficients low-to-high.
template <class C>
struct ParamPoly {
    std::vector<C> c;

    static ParamPoly zero() { return {}; }

    C eval(const C& s) const {
        using T = scalar_traits<C>;
        C acc = T::zero();
        for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * s + *it;
        return acc;
    }
    ParamPoly derivative() const {
        ParamPoly out;
        for (size_t i = 1; i < c.size(); ++i) out.c.push_back(c[i] * scalar_traits<C>::from_int(i));
        return out;
    }
    int degree() const { return static_cast<int>(c.size()) - 1; }

    friend ParamPoly operator+(const ParamPoly& a, const ParamPoly& b) {
        ParamPoly out;
        out.c.resize(std::max(a.c.size(), b.c.size()), scalar_traits<C>::zero());
        for (size_t i = 0; i < a.c.size(); ++i) out.c[i] += a.c[i];
        for (size_t i = 0; i < b.c.size(); ++i) out.c[i] += b.c[i];
        return out;
    }

    /// Synthetic division by (s - root): returns the quotient and remainder,
    /// p(s) = (s - root) q(s) + rem. Exact for exact coefficient types.
    std::pair<ParamPoly, C> divide_linear(const C& root) const {
        using T = scalar_traits<C>;
        ParamPoly q;
        if (c.empty()) return {q, T::zero()};
        q.c.assign(c.size() > 1 ? c.size() - 1 : 0, T::zero());
        C carry = T::zero();
        for (size_t i = c.size(); i-- > 0;) {
            C v = c[i] + carry * root;
            if (i == 0) return {q, v};
            q.c[i - 1] = v;
            carry = v;
        }
        return {q, carry};
    }
};

/// s^n - 1 as a polynomial.
template <class C>
ParamPoly<C> cyclotomic_like(long long n) {
    using T = scalar_traits<C>;
    ParamPoly<C> p;
    p.c.assign(n + 1, T::zero());
    p.c[0] = -T::one();
    p.c[n] = T::one();
    return p;
}

/// 1-cochain on the N = 3 cycle cover with trivial base weights and twist
/// s^{m_prime}, each edge value a polynomial in s.
template <class C = std::complex<double>>
struct ParamCochain1 {
    long long m_prime = 1;
    std::vector<ParamPoly<C>> alpha;  // per edge (1,2), (2,3), (3,1)

    void validate() const {
        if (m_prime < 1) throw std::invalid_argument("ParamCochain1: m_prime >= 1 required");
        if (alpha.size() != 3) throw std::invalid_argument("ParamCochain1: three edges required");
    }

    /// Telescoped scalar A(s) = alpha_12 + alpha_23 + alpha_31.
    ParamPoly<C> telescoped() const { return alpha[0] + alpha[1] + alpha[2]; }
};

struct ArcSample {
    std::complex<double> s;
    std::array<std::complex<double>, 3> beta;
};

struct ArcSolveReport {
    ArcBox arc;
    std::complex<double> torsion_obstruction{};  // A(zeta)
    std::vector<ArcSample> beta_samples;         // circle sub-arc incl. the torsion point
    std::array<std::complex<double>, 3> beta_at_torsion{};
    double interior_max = 0.0;   // of |s^m' A / (1 - s^m')| on the box interior
    double boundary_max = 0.0;   // same on the box boundary
    double circle_sup = 0.0;     // same on the U(1) sub-arc
    double max_alpha = 0.0;      // max edge |alpha| over all samples
    double uniform_bound = 0.0;  // (6/eps) * max_alpha
};

namespace detail {

// Stable evaluation machinery for q(s) = s^m A(s)/(1 - s^m) with the
// removable singularity at zeta: with A = (s - zeta) Q + rem and
// p(s) = (s^m - 1)/(s - zeta), q(s) = -s^m Q(s)/p(s) (up to the remainder,
// which the caller has checked to vanish).
struct RemovableQuotient {
    ParamPoly<std::complex<double>> Q;  // A / (s - zeta)
    ParamPoly<std::complex<double>> p;  // (s^m' - 1) / (s - zeta)
    long long m_prime;
    std::complex<double> zeta;

    std::complex<double> q(std::complex<double> s) const {
        return -std::pow(s, static_cast<double>(m_prime)) * Q.eval(s) / p.eval(s);
    }
    std::complex<double> beta1(std::complex<double> s) const { return Q.eval(s) / p.eval(s); }
};

inline RemovableQuotient make_quotient(const ParamCochain1<std::complex<double>>& alpha,
                                       const ArcBox& arc) {
    RemovableQuotient rq;
    rq.m_prime = alpha.m_prime;
    rq.zeta = arc.torsion_point();
    rq.Q = alpha.telescoped().divide_linear(rq.zeta).first;
    rq.p = cyclotomic_like<std::complex<double>>(alpha.m_prime).divide_linear(rq.zeta).first;
    return rq;
}

}  // namespace detail

struct FamilyOptions {
    double vanish_tol = 1e-9;  // relative tolerance for |A(zeta)|
};

/// Per-arc solve of the family coboundary equation: checks the torsion-point
/// obstruction A(zeta) = 0, evaluates the fiberwise primitives on the U(1)
/// sub-arc (with the removable-singularity limit at zeta), and records the
/// maximum-principle data of the quotient s^m' A/(1 - s^m') on the box.
inline ArcSolveReport family_solve(const ParamCochain1<std::complex<double>>& alpha,
                                   const ArcBox& arc, int samples,
                                   const FamilyOptions& opts = {}) {
    alpha.validate();
    if (samples < 16) throw std::invalid_argument("family_solve: samples >= 16 required");
    std::complex<double> zeta = arc.torsion_point();
    if (std::abs(std::pow(zeta, static_cast<double>(alpha.m_prime)) - 1.0) > 1e-9)
        throw std::invalid_argument("family_solve: arc torsion point does not match m_prime");

    ArcSolveReport rep;
    rep.arc = arc;
    ParamPoly<std::complex<double>> A = alpha.telescoped();
    rep.torsion_obstruction = A.eval(zeta);

    // Scale for the vanishing test.
    double alpha_scale = 0.0;
    for (const auto& edge : alpha.alpha)
        for (const auto& c : edge.c) alpha_scale = std::max(alpha_scale, std::abs(c));
    if (std::abs(rep.torsion_obstruction) > opts.vanish_tol * std::max(alpha_scale, 1e-300))
        throw std::domain_error("Condition (i) fails: class nonzero at torsion point");

    auto rq = detail::make_quotient(alpha, arc);
    auto record_alpha = [&](std::complex<double> s) {
        for (const auto& edge : alpha.alpha)
            rep.max_alpha = std::max(rep.max_alpha, std::abs(edge.eval(s)));
    };

    // U(1) sub-arc samples including the torsion point itself.
    for (int i = 0; i < samples; ++i) {
        double xi = arc.xi_center() - arc.re_half() + 2.0 * arc.re_half() * i / (samples - 1);
        std::complex<double> s = arc.map_to_annulus({xi, 0.0});
        ArcSample smp;
        smp.s = s;
        std::complex<double> q = rq.q(s);
        smp.beta[0] = rq.beta1(s);
        smp.beta[1] = -alpha.alpha[2].eval(s) - alpha.alpha[1].eval(s) - q;
        smp.beta[2] = -alpha.alpha[2].eval(s) - q;
        rep.beta_samples.push_back(smp);
        rep.circle_sup = std::max(rep.circle_sup, std::abs(q));
        record_alpha(s);
    }
    {
        ArcSample smp;
        smp.s = zeta;
        std::complex<double> q = rq.q(zeta);
        smp.beta[0] = rq.beta1(zeta);
        smp.beta[1] = -alpha.alpha[2].eval(zeta) - alpha.alpha[1].eval(zeta) - q;
        smp.beta[2] = -alpha.alpha[2].eval(zeta) - q;
        rep.beta_at_torsion = smp.beta;
        rep.beta_samples.push_back(smp);
        rep.circle_sup = std::max(rep.circle_sup, std::abs(q));
        record_alpha(zeta);
    }

    // Interior tensor grid and Chebyshev boundary samples of the xi-box.
    int n = std::max(4, static_cast<int>(std::sqrt(static_cast<double>(samples))));
    for (int i = 1; i < n; ++i)
        for (int j = 1; j < n; ++j) {
            double re = arc.xi_center() - arc.re_half() + 2.0 * arc.re_half() * i / n;
            double im = -arc.im_half() + 2.0 * arc.im_half() * j / n;
            std::complex<double> s = arc.map_to_annulus({re, im});
            rep.interior_max = std::max(rep.interior_max, std::abs(rq.q(s)));
            record_alpha(s);
        }
    int nb = std::max(16, samples);
    for (int i = 0; i < nb; ++i) {
        double t = std::cos(std::numbers::pi * (i + 0.5) / nb);  // Chebyshev in [-1, 1]
        std::array<std::complex<double>, 4> xs = {
            std::complex<double>(arc.xi_center() + t * arc.re_half(), arc.im_half()),
            std::complex<double>(arc.xi_center() + t * arc.re_half(), -arc.im_half()),
            std::complex<double>(arc.xi_center() + arc.re_half(), t * arc.im_half()),
            std::complex<double>(arc.xi_center() - arc.re_half(), t * arc.im_half()),
        };
        for (auto xi : xs) {
            std::complex<double> s = arc.map_to_annulus(xi);
            rep.boundary_max = std::max(rep.boundary_max, std::abs(rq.q(s)));
            record_alpha(s);
        }
    }
    rep.uniform_bound = (6.0 / epsilon_constant()) * rep.max_alpha;
    return rep;
}

/// Interior vs boundary maxima of |s^m' A/(1 - s^m')| on the xi-box; the
/// removable quotient is holomorphic there, so interior <= boundary.
inline std::pair<double, double> max_principle_bound(
    const ParamCochain1<std::complex<double>>& alpha, const ArcBox& arc, int boundary_samples,
    const FamilyOptions& opts = {}) {
    if (boundary_samples < 64)
        throw std::invalid_argument("max_principle_bound: boundary_samples >= 64 required");
    ArcSolveReport rep = family_solve(alpha, arc, boundary_samples, opts);
    return {rep.interior_max, rep.boundary_max};
}

struct FamilyComparisonRow {
    long long m = 0;
    double theta = 0.0;
    double d_m = 0.0;          // d(1, sigma^m) at the fiber multiplier
    double max_alpha = 0.0;
    double naive_bound = 0.0;   // (K / d_m) * max_alpha
    double family_bound = 0.0;  // (6/eps) * max_alpha, m-independent
    double family_attained = 0.0;  // sup over the U(1) sub-arc of |q|
    double interior_max = 0.0;
    double boundary_max = 0.0;
};

/// Per-fiber small-divisor bound vs the uniform family bound, order by order.
/// The generated cocycles are constant multiples of (s^m - 1), so they vanish
/// at every torsion point of the order (the Condition (**) contract).
inline std::vector<FamilyComparisonRow> improved_vs_naive(
    const std::vector<Multiplier>& theta_family, long long m_max, std::uint64_t seed,
    double K = 2.0) {
    std::vector<FamilyComparisonRow> rows;
    for (size_t ti = 0; ti < theta_family.size(); ++ti) {
        const Multiplier& mult = theta_family[ti];
        for (long long m = 1; m <= m_max; ++m) {
            std::mt19937_64 rng(seed + 1000003ull * ti + static_cast<std::uint64_t>(m));
            std::uniform_real_distribution<double> unit(0.0, 1.0);
            ParamCochain1<std::complex<double>> alpha;
            alpha.m_prime = m;
            for (int e = 0; e < 3; ++e) {
                std::complex<double> c = std::polar(0.25 + 0.75 * unit(rng),
                                                    2 * std::numbers::pi * unit(rng));
                ParamPoly<std::complex<double>> p = cyclotomic_like<std::complex<double>>(m);
                for (auto& v : p.c) v *= c;
                alpha.alpha.push_back(p);
            }
            // Arc containing the fiber multiplier (M0 = 1).
            long long nu = static_cast<long long>(std::llround(mult.theta() * m)) % m;
            if (nu < 0) nu += m;
            ArcBox arc{m, nu, 1};
            ArcSolveReport rep = family_solve(alpha, arc, 64);
            FamilyComparisonRow row;
            row.m = m;
            row.theta = mult.theta();
            row.d_m = mult.divisor(m);
            row.max_alpha = rep.max_alpha;
            row.naive_bound = row.d_m > 0 ? K / row.d_m * rep.max_alpha
                                          : std::numeric_limits<double>::infinity();
            row.family_bound = rep.uniform_bound;
            row.family_attained = rep.circle_sup;
            row.interior_max = rep.interior_max;
            row.boundary_max = rep.boundary_max;
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace uedalab
