#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "uedalab/cech.hpp"
#include "uedalab/series.hpp"

namespace uedalab {

/// Constant-coefficient gluing data on an N-chart cycle: per cycle edge
/// e = (j, k) with j = e, k = e+1 mod N, the expansion of t_jk * w_k in the
/// chart-j coordinate,
///   t_jk w_k^{(lambda)} = w_j^{(lambda)} + sum_{|a|>=2} f_{kj,a}^{(lambda)} w_j^a,
/// stored as the full series g^{(lambda)}_{kj} with identity linear part.
/// The multiplier sigma^{(lambda)} sits on the twist edge (N, 1).
template <class C>
struct TransitionSystem {
    int N = 3;
    int r = 1;
    int max_order = 20;
    std::vector<C> sigma;  // per component, twist on the closing edge
    // Optional exact rotation numbers theta_lambda = p/q for resonance
    // detection; without them resonance means the order weight is exactly 1.
    std::vector<std::optional<std::pair<long long, long long>>> sigma_theta;
    // edge_series[e][lambda]: g^{(lambda)}_{kj} in r variables, order max_order.
    std::vector<std::vector<MultiSeries<C>>> edge_series;

    static TransitionSystem make(int N, int r, int max_order, std::vector<C> sigma) {
        TransitionSystem sys;
        sys.N = N;
        sys.r = r;
        sys.max_order = max_order;
        sys.sigma = std::move(sigma);
        sys.sigma_theta.assign(r, std::nullopt);
        sys.edge_series.assign(N, {});
        for (int e = 0; e < N; ++e)
            for (int l = 0; l < r; ++l)
                sys.edge_series[e].push_back(MultiSeries<C>::variable(r, max_order, l));
        return sys;
    }

    /// Sets f^{(lambda)}_{kj,a} on cycle edge e.
    void set_f(int e, int lambda, const MultiIndex& a, const C& value) {
        if (index_degree(a) < 2) throw std::invalid_argument("set_f: |a| >= 2 required");
        edge_series.at(e).at(lambda).set_coeff(a, value);
    }

    void validate() const {
        using T = scalar_traits<C>;
        if (N < 3 || r < 1 || max_order < 2) throw std::invalid_argument("TransitionSystem: bad shape");
        if (static_cast<int>(sigma.size()) != r || static_cast<int>(edge_series.size()) != N)
            throw std::invalid_argument("TransitionSystem: size mismatch");
        for (const C& s : sigma)
            if (T::is_zero(s)) throw std::invalid_argument("TransitionSystem: zero multiplier");
        for (int e = 0; e < N; ++e) {
            if (static_cast<int>(edge_series[e].size()) != r)
                throw std::invalid_argument("TransitionSystem: component count mismatch");
            for (int l = 0; l < r; ++l) {
                const auto& g = edge_series[e][l];
                if (g.num_vars() != r || g.order() < max_order)
                    throw std::invalid_argument("TransitionSystem: series shape mismatch");
                for (const auto& [a, c] : g.coeffs()) {
                    int d = index_degree(a);
                    if (d >= 2) continue;
                    MultiIndex lin(r, 0);
                    lin[l] = 1;
                    if (!(a == lin && c == T::one()))
                        throw std::invalid_argument(
                            "TransitionSystem: linear part must be the identity monomial");
                }
            }
        }
    }
};

/// Edge weights of the order-(lambda, a) coboundary equation: the twist edge
/// carries sigma_lambda^{-1} * prod_mu sigma_mu^{a_mu}; for r = 1 this is
/// sigma^{|a|-1}.
template <class C>
Cochain1<C> order_weights(const TransitionSystem<C>& sys, int lambda, const MultiIndex& a) {
    using T = scalar_traits<C>;
    if (index_degree(a) < 2) throw std::invalid_argument("order_weights: |a| >= 2 required");
    C w = T::inverse(sys.sigma[lambda]);
    for (int mu = 0; mu < sys.r; ++mu) w *= scalar_pow(sys.sigma[mu], a[mu]);
    Cochain1<C> out(sys.N, T::one());
    out[sys.N - 1] = w;
    return out;
}

/// Exact resonance test when rational rotation numbers are declared:
/// sum_mu (a_mu - delta_{lambda mu}) p_mu / q_mu integer.
template <class C>
std::optional<bool> order_resonant_exact(const TransitionSystem<C>& sys, int lambda,
                                         const MultiIndex& a) {
    Rational total = 0;
    for (int mu = 0; mu < sys.r; ++mu) {
        long long e = a[mu] - (mu == lambda ? 1 : 0);
        if (e == 0) continue;
        if (!sys.sigma_theta[mu]) return std::nullopt;
        total += Rational(sys.sigma_theta[mu]->first * e, sys.sigma_theta[mu]->second);
    }
    return denominator(total) == 1;
}

/// Per-chart partial solution: F[j][lambda] holds the coefficients
/// F^{(lambda)}_{j,a} for 2 <= |a| < current order.
template <class C>
using PartialSolution = std::vector<std::vector<MultiSeries<C>>>;

/// The order-m obstruction cochains h_{kj,a}: substitute
/// phi_j = w + sum F_j w^a into the nonlinear part of g_{kj} and extract the
/// total-degree-m coefficients. Depends only on f-data and F of orders < m.
template <class C>
std::map<MultiIndex, std::vector<Cochain1<C>>, GradedLexLess> compute_h(
    const TransitionSystem<C>& sys, const PartialSolution<C>& F, int m) {
    // result[a][lambda][edge]
    std::map<MultiIndex, std::vector<Cochain1<C>>, GradedLexLess> h;
    for_each_index_of_degree(sys.r, m, [&](const MultiIndex& a) {
        h[a].assign(sys.r, Cochain1<C>(sys.N, scalar_traits<C>::zero()));
    });
    for (int e = 0; e < sys.N; ++e) {
        int j = e;
        std::vector<MultiSeries<C>> phi;
        for (int mu = 0; mu < sys.r; ++mu)
            phi.push_back(MultiSeries<C>::variable(sys.r, sys.max_order, mu) + F[j][mu]);
        for (int l = 0; l < sys.r; ++l) {
            MultiSeries<C> nonlinear =
                sys.edge_series[e][l] - MultiSeries<C>::variable(sys.r, sys.max_order, l);
            MultiSeries<C> expanded = substitute(nonlinear, phi);
            for (auto& [a, per_lambda] : h) per_lambda[l][e] = expanded.coeff(a);
        }
    }
    return h;
}

enum class LinStatus { linearized, finite_type };

template <class C>
struct OrderRecord {
    int m = 0;
    double max_F = 0.0;          // max_j max_{|a|=m} |F_{j,a}|
    double max_h = 0.0;
    double max_obstruction = 0.0;  // over resonant (lambda, a) at this order
    bool had_resonance = false;
    bool near_resonant = false;
    double residual = 0.0;  // filled by verify_residual
};

template <class C>
struct LinearizationResult {
    LinStatus status = LinStatus::linearized;
    int finite_type_order = 0;
    int lambda_at_stop = 0;
    MultiIndex index_at_stop;
    C obstruction_at_stop{};
    PartialSolution<C> F;  // F[j][lambda], populated through the last solved order
    std::vector<OrderRecord<C>> orders;
};

struct LinearizeOptions {
    double obstruction_tol = 1e-10;  // relative to max|h_m|
    SolveOptions cech;
};

/// Order-by-order solve of the functional equation: for m = 2..max_order
/// compute h_m, then solve delta F = h per (lambda, a) with the order
/// weights. Resonant orders require the obstruction (Ueda class) to vanish;
/// otherwise the system is of finite type at that order.
template <class C>
LinearizationResult<C> linearize(const TransitionSystem<C>& sys,
                                 const LinearizeOptions& opts = {}) {
    using T = scalar_traits<C>;
    sys.validate();
    LinearizationResult<C> result;
    result.F.assign(sys.N, {});
    for (int j = 0; j < sys.N; ++j)
        for (int l = 0; l < sys.r; ++l)
            result.F[j].push_back(MultiSeries<C>(sys.r, sys.max_order));

    for (int m = 2; m <= sys.max_order; ++m) {
        auto h = compute_h(sys, result.F, m);
        OrderRecord<C> rec;
        rec.m = m;
        for (const auto& [a, per_lambda] : h)
            for (const auto& edge_vals : per_lambda)
                for (const C& v : edge_vals) rec.max_h = std::max(rec.max_h, T::abs(v));
        for (const auto& [a, per_lambda] : h) {
            for (int l = 0; l < sys.r; ++l) {
                Cochain1<C> weights = order_weights(sys, l, a);
                CycleCover<C> cover;
                cover.N = sys.N;
                cover.weights = weights;
                cover.twist_edge = sys.N - 1;
                bool resonant;
                if (auto exact = order_resonant_exact(sys, l, a))
                    resonant = *exact;
                else
                    resonant = (cover.holonomy() == T::one());
                const Cochain1<C>& alpha = per_lambda[l];
                Cochain0<C> beta;
                if (resonant) {
                    rec.had_resonance = true;
                    C obs = obstruction(cover, alpha);
                    rec.max_obstruction = std::max(rec.max_obstruction, T::abs(obs));
                    bool vanishes = T::exact
                                        ? T::is_zero(obs)
                                        : T::abs(obs) <= opts.obstruction_tol * std::max(rec.max_h, 1e-300);
                    if (!vanishes) {
                        result.status = LinStatus::finite_type;
                        result.finite_type_order = m;
                        result.lambda_at_stop = l;
                        result.index_at_stop = a;
                        result.obstruction_at_stop = obs;
                        result.orders.push_back(rec);
                        return result;
                    }
                    // Solvable resonant order: normalized solution beta_1 = 0.
                    auto t = detail::telescope(cover, alpha);
                    beta = t.u;
                } else {
                    auto rep = solve(cover, alpha, opts.cech);
                    rec.near_resonant = rec.near_resonant || rep.near_resonant;
                    beta = *rep.beta;
                }
                for (int j = 0; j < sys.N; ++j) {
                    result.F[j][l].set_coeff(a, beta[j]);
                    rec.max_F = std::max(rec.max_F, T::abs(beta[j]));
                }
            }
        }
        result.orders.push_back(rec);
    }
    return result;
}

/// Gluing residual through degree max_order: per edge compare
/// t_jk * phi_k(t_kj-scaled w) against g_kj(phi_j(w)). Returns the max
/// residual coefficient magnitude per order (index m-2 holds order m).
template <class C>
std::vector<double> verify_residual(const TransitionSystem<C>& sys,
                                    const LinearizationResult<C>& result) {
    using T = scalar_traits<C>;
    if (result.status != LinStatus::linearized)
        throw std::invalid_argument("verify_residual: system not linearized to order");
    int M = sys.max_order;
    std::vector<double> per_order(M - 1, 0.0);
    for (int e = 0; e < sys.N; ++e) {
        int j = e, k = (e + 1) % sys.N;
        // Base weights: identity off the twist edge, t_jk = sigma^{-1} on it.
        std::vector<C> t_jk(sys.r, T::one());
        if (e == sys.N - 1)
            for (int l = 0; l < sys.r; ++l) t_jk[l] = T::inverse(sys.sigma[l]);
        std::vector<MultiSeries<C>> phi_j, w_k;
        for (int mu = 0; mu < sys.r; ++mu) {
            phi_j.push_back(MultiSeries<C>::variable(sys.r, M, mu) + result.F[j][mu]);
            w_k.push_back(MultiSeries<C>::variable(sys.r, M, mu) * T::inverse(t_jk[mu]));
        }
        for (int l = 0; l < sys.r; ++l) {
            MultiSeries<C> phi_k_l = MultiSeries<C>::variable(sys.r, M, l) + result.F[k][l];
            MultiSeries<C> lhs = substitute(phi_k_l, w_k) * t_jk[l];
            MultiSeries<C> rhs = substitute(sys.edge_series[e][l], phi_j);
            MultiSeries<C> diff = lhs - rhs;
            for (const auto& [a, c] : diff.coeffs()) {
                int d = index_degree(a);
                if (d >= 2) per_order[d - 2] = std::max(per_order[d - 2], T::abs(c));
            }
        }
    }
    return per_order;
}

/// Obstruction scalars of the order-m cochain h_m at resonant weights; zero
/// at non-resonant (lambda, a) by convention. Requires solvability through
/// order m-1 (throws finite-type information otherwise).
template <class C>
std::map<MultiIndex, std::vector<C>, GradedLexLess> ueda_class(const TransitionSystem<C>& sys,
                                                               int m) {
    using T = scalar_traits<C>;
    TransitionSystem<C> truncated_sys = sys;
    truncated_sys.max_order = std::max(2, m - 1);
    LinearizationResult<C> partial;
    if (m > 2) {
        partial = linearize(truncated_sys);
        if (partial.status == LinStatus::finite_type)
            throw std::invalid_argument("ueda_class: not solvable through order m-1");
    } else {
        partial.F.assign(sys.N, {});
        for (int j = 0; j < sys.N; ++j)
            for (int l = 0; l < sys.r; ++l) partial.F[j].push_back(MultiSeries<C>(sys.r, sys.max_order));
    }
    // Re-expand F at the full order so substitution sees the right truncation.
    PartialSolution<C> F(sys.N);
    for (int j = 0; j < sys.N; ++j)
        for (int l = 0; l < sys.r; ++l) {
            MultiSeries<C> f(sys.r, sys.max_order);
            for (const auto& [a, c] : partial.F[j][l].coeffs()) f.set_coeff(a, c);
            F[j].push_back(f);
        }
    auto h = compute_h(sys, F, m);
    std::map<MultiIndex, std::vector<C>, GradedLexLess> out;
    for (const auto& [a, per_lambda] : h) {
        out[a].assign(sys.r, T::zero());
        for (int l = 0; l < sys.r; ++l) {
            bool resonant;
            Cochain1<C> weights = order_weights(sys, l, a);
            CycleCover<C> cover;
            cover.N = sys.N;
            cover.weights = weights;
            cover.twist_edge = sys.N - 1;
            if (auto exact = order_resonant_exact(sys, l, a))
                resonant = *exact;
            else
                resonant = (cover.holonomy() == T::one());
            if (resonant) out[a][l] = obstruction(cover, per_lambda[l]);
        }
    }
    return out;
}

}  // namespace uedalab
