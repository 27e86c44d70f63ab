#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "uedalab/linearize.hpp"
#include "uedalab/series.hpp"

namespace uedalab {

using CSeries = MultiSeries<std::complex<double>>;

struct ToyMajorantSpec;
struct MajorantSeries;
inline double toy_radius_closed_form(const ToyMajorantSpec& spec);
inline double radius_estimate(const MajorantSeries& A);

/// Constants of the toy majorant equation
///   sum_{m>=2} (A_m / K0(s^{m-1})) X^m = M A(X)^2 / (1 - A(X)),  A = X + ...
/// with a uniform K standing for max_m K0(s^{m-1}); K_seq optionally supplies
/// a per-order sequence (e.g. the Diophantine-decay variant K m^alpha / A).
struct ToyMajorantSpec {
    double M = 1.0;
    double K = 2.0;
    int order = 30;
    std::vector<double> K_seq;  // K_seq[m-2] used for A_m when nonempty

    double k_at(int m) const {
        if (!K_seq.empty()) return K_seq.at(m - 2);
        return K;
    }
    void validate() const {
        if (!(M > 0) || !(K >= 1) || order < 2) throw std::invalid_argument("ToyMajorantSpec: bad constants");
    }
};

/// Constants of the general implicit majorant of codimension r;
/// C = 14 M0 Theta K^2 (1 + Theta).
struct GeneralMajorantSpec {
    long long M0 = 1;
    double Theta = 2.0;
    double K = 2.0;  // K > K_KS > 1
    double M = 1.0;
    double R = 1.0;
    int r = 1;
    int order = 12;

    double big_c() const { return 14.0 * M0 * Theta * K * K * (1.0 + Theta); }
    void validate() const {
        if (M0 < 1 || !(Theta > 1) || !(K > 1) || !(M >= 0) || !(R > 0) || r < 1 || order < 2)
            throw std::invalid_argument("GeneralMajorantSpec: bad constants");
    }
};

/// Solved majorant: nonnegative real coefficients, A(0) = 0.
struct MajorantSeries {
    CSeries A;
    double radius_estimate = 0.0;

    /// Diagonal coefficient A_m (all indices of total degree m share it).
    double coeff(int m) const {
        double best = 0.0;
        for (const auto& [a, c] : A.coeffs())
            if (index_degree(a) == m) best = std::max(best, c.real());
        return best;
    }
};

namespace detail {

inline std::vector<double> real_mul(const std::vector<double>& f, const std::vector<double>& g) {
    std::vector<double> out(std::min(f.size(), g.size()), 0.0);
    for (size_t i = 0; i < out.size(); ++i)
        for (size_t j = 0; i + j < out.size(); ++j) out[i + j] += f[i] * g[j];
    return out;
}

// Coefficients of M a^2 / (1 - a) for a real truncated series a with a_0 = 0.
inline std::vector<double> toy_rhs(const std::vector<double>& a, double M) {
    size_t n = a.size();
    std::vector<double> a2 = real_mul(a, a);
    std::vector<double> out(n, 0.0), term = a2;
    for (size_t k = 0; k < n; ++k) {
        if (k > 0) term = real_mul(term, a);
        bool all_zero = true;
        for (size_t i = 0; i < n; ++i) {
            out[i] += term[i];
            if (term[i] != 0.0) all_zero = false;
        }
        if (all_zero) break;
    }
    for (double& v : out) v *= M;
    return out;
}

}  // namespace detail

/// Term recursion for the toy majorant: A_1 = 1, A_m = K0-weighted degree-m
/// coefficient of M A^2/(1-A), which only involves A_2..A_{m-1}.
inline MajorantSeries toy_majorant(const ToyMajorantSpec& spec) {
    spec.validate();
    std::vector<double> a(spec.order + 1, 0.0);
    a[1] = 1.0;
    for (int m = 2; m <= spec.order; ++m) {
        std::vector<double> rhs = detail::toy_rhs(a, spec.M);
        a[m] = spec.k_at(m) * rhs[m];
    }
    MajorantSeries out;
    out.A = CSeries(1, spec.order);
    for (int m = 1; m <= spec.order; ++m)
        if (a[m] != 0.0) out.A.set_coeff({m}, {a[m], 0.0});
    out.radius_estimate = toy_radius_closed_form(spec);
    return out;
}

/// Closed-form coefficients of the toy majorant with uniform K: the solution
/// of (1+KM) A^2 - (1+X) A + X = 0 with A(0) = 0,
///   A = ((1+X) - sqrt((1+X)^2 - 4(1+KM) X)) / (2 (1+KM)).
inline std::vector<double> toy_closed_form(const ToyMajorantSpec& spec) {
    spec.validate();
    int n = spec.order;
    double c = 1.0 + spec.K * spec.M;
    // b = sqrt(1 - (4c - 2) X + X^2) by the square-root recurrence.
    std::vector<double> s(n + 1, 0.0), b(n + 1, 0.0);
    s[0] = 1.0;
    if (n >= 1) s[1] = 2.0 - 4.0 * c;
    if (n >= 2) s[2] = 1.0;
    b[0] = 1.0;
    for (int m = 1; m <= n; ++m) {
        double acc = s[m];
        for (int i = 1; i < m; ++i) acc -= b[i] * b[m - i];
        b[m] = acc / (2.0 * b[0]);
    }
    std::vector<double> a(n + 1, 0.0);
    for (int m = 0; m <= n; ++m) {
        double num = -b[m];
        if (m == 0 || m == 1) num += 1.0;
        a[m] = num / (2.0 * c);
    }
    return a;
}

/// Radius of convergence of the toy closed form: the smaller root of
/// (1+X)^2 = 4 (1+KM) X.
inline double toy_radius_closed_form(const ToyMajorantSpec& spec) {
    double t = 1.0 + 2.0 * spec.K * spec.M;
    return t - std::sqrt(t * t - 1.0);
}

/// The implicit majorant function F(X, Y) of the general configuration, as a
/// jet evaluator usable with solve_implicit (any num_vars, any order).
inline ImplicitEvaluator<std::complex<double>> general_majorant_equation(
    const GeneralMajorantSpec& spec) {
    return [spec](const std::vector<CSeries>& X, const CSeries& Y) -> CSeries {
        int nv = Y.num_vars(), ord = Y.order();
        double C = spec.big_c();
        CSeries one = CSeries::one(nv, ord);
        CSeries prod = one;
        CSeries lin_sum(nv, ord);
        for (int v = 0; v < spec.r; ++v) {
            CSeries u = X[v] + Y;
            prod = prod * reciprocal_one_minus(u * std::complex<double>(spec.R, 0.0));
            lin_sum += u;
        }
        CSeries first = prod - one - lin_sum * std::complex<double>(spec.R, 0.0);
        CSeries second = Y * (prod - one);
        return -Y + std::complex<double>(C * spec.M, 0.0) * first +
               std::complex<double>(3.0 * C * spec.Theta, 0.0) * second;
    };
}

/// Solves F(X, A) = 0 by Newton on jets; A has no linear term and
/// A_2 = 14 M0 Theta K^2 (1+Theta) M R^2.
inline MajorantSeries general_majorant(const GeneralMajorantSpec& spec) {
    spec.validate();
    MajorantSeries out;
    out.A = solve_implicit<std::complex<double>>(general_majorant_equation(spec), spec.r, spec.order);
    // Coefficients are sums/products of nonnegative data; clamp the
    // float-noise negatives only (anything materially negative is a bug).
    for (const auto& [a, c] : out.A.coeffs())
        if (c.real() < -1e-9 * out.A.max_abs())
            throw std::logic_error("general_majorant: negative coefficient");
    if (spec.r == 1 && spec.order >= 9) {
        MajorantSeries tmp = out;
        out.radius_estimate = radius_estimate(tmp);
    }
    return out;
}

/// B_m = degree-(m+1) coefficient of the h-generating function
///   (1+Theta) M (prod 1/(1 - R(X+A)) - 1 - R sum(X+A))
///   + 3 (1+Theta) Theta A (prod 1/(1 - R(X+A)) - 1);
/// B_1 = (1+Theta) M R^2. For r > 1 the max over |a| = m+1 is returned.
inline double b_bounds(const GeneralMajorantSpec& spec, const MajorantSeries& A_partial, int m) {
    spec.validate();
    const CSeries& A = A_partial.A;
    int nv = A.num_vars(), ord = A.order();
    if (m + 1 > ord) throw std::invalid_argument("b_bounds: order m+1 beyond the computed series");
    CSeries one = CSeries::one(nv, ord);
    CSeries prod = one;
    CSeries lin_sum(nv, ord);
    for (int v = 0; v < spec.r; ++v) {
        CSeries u = CSeries::variable(nv, ord, v) + A;
        prod = prod * reciprocal_one_minus(u * std::complex<double>(spec.R, 0.0));
        lin_sum += u;
    }
    CSeries g = std::complex<double>((1.0 + spec.Theta) * spec.M, 0.0) *
                    (prod - one - lin_sum * std::complex<double>(spec.R, 0.0)) +
                std::complex<double>(3.0 * (1.0 + spec.Theta) * spec.Theta, 0.0) * (A * (prod - one));
    double best = 0.0;
    for (const auto& [a, c] : g.coeffs())
        if (index_degree(a) == m + 1) best = std::max(best, c.real());
    return best;
}

struct DominationReport {
    bool passed = true;
    bool precondition_ok = true;
    int violating_chart = -1;
    int violating_lambda = -1;
    MultiIndex violating_index;
    double min_margin = std::numeric_limits<double>::infinity();  // min A_m - |F|
};

/// Checks |F^{(lambda)}_{j,a}| <= A_{|a|} for every computed entry, after
/// verifying the Cauchy envelope |f_{kj,a}| <= M R^{|a|} on the input.
/// stage_scale multiplies A_m per order (identity for single-fiber runs).
template <class C>
DominationReport domination_check(const TransitionSystem<C>& sys,
                                  const LinearizationResult<C>& result, const MajorantSeries& A,
                                  double M, double R,
                                  const std::function<double(int)>& stage_scale = nullptr) {
    using T = scalar_traits<C>;
    DominationReport rep;
    for (int e = 0; e < sys.N; ++e)
        for (int l = 0; l < sys.r; ++l)
            for (const auto& [a, c] : sys.edge_series[e][l].coeffs()) {
                int d = index_degree(a);
                if (d < 2) continue;
                if (T::abs(c) > M * std::pow(R, d) * (1.0 + 1e-12)) {
                    rep.precondition_ok = false;
                    rep.passed = false;
                    rep.violating_index = a;
                    return rep;
                }
            }
    for (int j = 0; j < sys.N; ++j)
        for (int l = 0; l < sys.r; ++l)
            for (const auto& [a, c] : result.F[j][l].coeffs()) {
                int d = index_degree(a);
                double bound = A.coeff(d) * (stage_scale ? stage_scale(d) : 1.0);
                double margin = bound - T::abs(c);
                rep.min_margin = std::min(rep.min_margin, margin);
                if (margin < -1e-9 * std::max(1.0, bound)) {
                    rep.passed = false;
                    rep.violating_chart = j;
                    rep.violating_lambda = l;
                    rep.violating_index = a;
                    return rep;
                }
            }
    return rep;
}

/// 1/limsup radius estimate: least-squares fit of log A_m against m over the
/// top half of the computed orders.
inline double radius_estimate(const MajorantSeries& A) {
    std::vector<std::pair<int, double>> pts;
    for (int m = 1; m <= A.A.order(); ++m) {
        double c = A.coeff(m);
        if (c > 0.0) pts.emplace_back(m, std::log(c));
    }
    if (pts.size() < 8) throw std::invalid_argument("radius_estimate: need >= 8 nonzero coefficients");
    size_t start = pts.size() / 2;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    size_t n = 0;
    for (size_t i = start; i < pts.size(); ++i) {
        double x = pts[i].first, y = pts[i].second;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return std::exp(-slope);
}

}  // namespace uedalab
