#pragma once

#include <complex>
#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

#include "uedalab/family.hpp"
#include "uedalab/linearize.hpp"
#include "uedalab/majorant.hpp"
#include "uedalab/multiplier.hpp"
#include "uedalab/series.hpp"

namespace uedalab::io {

using nlohmann::json;
using nlohmann::ordered_json;

inline std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// ---- scalars -------------------------------------------------------------

template <class C>
C scalar_from_json(const json& j);

template <>
inline std::complex<double> scalar_from_json<std::complex<double>>(const json& j) {
    auto get = [](const json& v) -> double {
        if (v.is_string()) return static_cast<double>(parse_rational(v.get<std::string>()));
        return v.get<double>();
    };
    return {j.contains("re") ? get(j.at("re")) : 0.0, j.contains("im") ? get(j.at("im")) : 0.0};
}

template <>
inline GaussianRational scalar_from_json<GaussianRational>(const json& j) {
    auto get = [](const json& v) -> Rational {
        if (v.is_string()) return parse_rational(v.get<std::string>());
        if (v.is_number_integer()) return Rational(v.get<long long>());
        // Floats round-trip through their shortest printed decimal form.
        return parse_rational(json(v.get<double>()).dump());
    };
    return {j.contains("re") ? get(j.at("re")) : Rational(0),
            j.contains("im") ? get(j.at("im")) : Rational(0)};
}

template <class C>
json scalar_to_json(const C& c) {
    std::complex<double> z = scalar_traits<C>::to_complex(c);
    return json{{"re", z.real()}, {"im", z.imag()}};
}

// ---- series --------------------------------------------------------------

template <class C>
json series_to_json(const MultiSeries<C>& s) {
    json coeffs = json::array();
    for (const auto& [a, c] : s.coeffs()) {
        json entry = scalar_to_json(c);
        entry["index"] = a;
        coeffs.push_back(entry);
    }
    return json{{"vars", s.num_vars()}, {"order", s.order()}, {"coeffs", coeffs}};
}

template <class C>
MultiSeries<C> series_from_json(const json& j) {
    MultiSeries<C> s(j.at("vars").get<int>(), j.at("order").get<int>());
    for (const auto& entry : j.at("coeffs")) {
        MultiIndex a = entry.at("index").get<MultiIndex>();
        s.set_coeff(a, scalar_from_json<C>(entry));
    }
    return s;
}

// ---- cover / system ------------------------------------------------------

template <class C>
CycleCover<C> cover_from_json(const json& j) {
    using T = scalar_traits<C>;
    CycleCover<C> cov;
    cov.N = j.at("N").get<int>();
    cov.weights.assign(cov.N, T::one());
    cov.twist_edge = cov.N - 1;
    if (j.contains("twist_edge")) {
        auto e = j.at("twist_edge");
        int from = e.at(0).get<int>();  // 1-based chart pair (j, k)
        cov.twist_edge = from - 1;
    }
    if (j.contains("sigma")) cov.weights[cov.twist_edge] = scalar_from_json<C>(j.at("sigma"));
    if (j.contains("weights")) {
        int i = 0;
        for (const auto& w : j.at("weights")) cov.weights.at(i++) = scalar_from_json<C>(w);
    }
    cov.validate();
    return cov;
}

template <class C>
TransitionSystem<C> system_from_json(const json& j) {
    int N = j.at("N").get<int>();
    int r = j.value("r", 1);
    int order = j.value("max_order", 20);
    std::vector<C> sigma;
    if (j.at("sigma").is_array())
        for (const auto& s : j.at("sigma")) sigma.push_back(scalar_from_json<C>(s));
    else
        sigma.push_back(scalar_from_json<C>(j.at("sigma")));
    if (static_cast<int>(sigma.size()) != r)
        throw std::invalid_argument("system JSON: sigma count != r");
    TransitionSystem<C> sys = TransitionSystem<C>::make(N, r, order, sigma);
    if (j.contains("sigma_theta")) {
        int i = 0;
        for (const auto& t : j.at("sigma_theta")) {
            if (!t.is_null())
                sys.sigma_theta.at(i) = std::make_pair(t.at(0).get<long long>(), t.at(1).get<long long>());
            ++i;
        }
    }
    for (const auto& edge : j.at("edges")) {
        int k = edge.at("from").get<int>();  // 1-based charts
        int to = edge.at("to").get<int>();
        int e = to - 1;
        if (k != (to % N) + 1) throw std::invalid_argument("system JSON: edge must be (to, to+1)");
        int l = 0;
        for (const auto& comp : edge.at("components")) {
            MultiSeries<C> g = series_from_json<C>(comp);
            MultiSeries<C> full(r, order);
            for (const auto& [a, c] : g.coeffs())
                if (index_degree(a) <= order) full.set_coeff(a, c);
            // Accept either the full series or just the nonlinear part.
            MultiIndex lin(r, 0);
            lin.at(l) = 1;
            if (scalar_traits<C>::is_zero(full.coeff(lin)))
                full.set_coeff(lin, scalar_traits<C>::one());
            sys.edge_series.at(e).at(l) = full;
            ++l;
        }
    }
    sys.validate();
    return sys;
}

template <class C>
json result_to_json(const TransitionSystem<C>& sys, const LinearizationResult<C>& result) {
    json out;
    out["status"] = result.status == LinStatus::linearized ? "linearized-to-order-M"
                                                           : "finite-type-at-order-m";
    if (result.status == LinStatus::finite_type) {
        out["finite_type_order"] = result.finite_type_order;
        out["obstruction"] = scalar_to_json(result.obstruction_at_stop);
    }
    json charts = json::array();
    for (int j = 0; j < sys.N; ++j) {
        json comps = json::array();
        for (int l = 0; l < sys.r; ++l) comps.push_back(series_to_json(result.F[j][l]));
        charts.push_back(comps);
    }
    out["F"] = charts;
    json orders = json::array();
    for (const auto& rec : result.orders)
        orders.push_back(json{{"m", rec.m},
                              {"max_F", rec.max_F},
                              {"max_h", rec.max_h},
                              {"obstruction", rec.max_obstruction},
                              {"resonant", rec.had_resonance},
                              {"residual", rec.residual}});
    out["orders"] = orders;
    return out;
}

// ---- family --------------------------------------------------------------

inline ParamCochain1<std::complex<double>> param_cochain_from_json(const json& j) {
    ParamCochain1<std::complex<double>> out;
    out.m_prime = j.at("m_prime").get<long long>();
    out.alpha.assign(3, {});
    for (const auto& edge : j.at("edges")) {
        auto pair = edge.at("edge");
        int from = pair.at(0).get<int>();  // 1-based (j, k)
        int e = from - 1;
        ParamPoly<std::complex<double>> p;
        for (const auto& c : edge.at("poly")) p.c.push_back(scalar_from_json<std::complex<double>>(c));
        out.alpha.at(e) = p;
    }
    out.validate();
    return out;
}

// ---- multiplier ----------------------------------------------------------

inline Multiplier multiplier_from_json(const json& j) {
    const json& t = j.at("theta");
    if (t.is_object() && t.contains("rational")) {
        auto pq = t.at("rational");
        return Multiplier::from_rational(pq.at(0).get<long long>(), pq.at(1).get<long long>());
    }
    if (t.is_object() && t.contains("real")) {
        const json& v = t.at("real");
        if (v.is_string()) return Multiplier::from_exact_sample(parse_rational(v.get<std::string>()));
        return Multiplier::from_real(v.get<double>());
    }
    if (t.is_object() && t.contains("golden_mean")) return Multiplier::golden_mean();
    if (t.is_object() && t.contains("liouville")) return Multiplier::liouville(t.at("liouville").get<int>());
    if (t.is_object() && t.contains("power_sum"))
        return Multiplier::power_sum(t.at("power_sum").get<std::vector<long long>>());
    if (t.is_number()) return Multiplier::from_real(t.get<double>());
    throw std::invalid_argument("multiplier JSON: unrecognized theta");
}

}  // namespace uedalab::io
