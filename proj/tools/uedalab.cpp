#include <atomic>
#include <complex>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "uedalab/cech.hpp"
#include "uedalab/family.hpp"
#include "uedalab/io.hpp"
#include "uedalab/linearize.hpp"
#include "uedalab/majorant.hpp"
#include "uedalab/multiplier.hpp"

namespace {

using namespace uedalab;
using uedalab::io::json;

struct RunConfig {
    std::string input;
    std::string out;
    int order = 0;  // 0 = use the input's own order
    std::uint64_t seed = 1;
    int samples = 64;
    std::string precision = "float";
    long long m0 = 1;
    bool quiet = false;
};

int thread_budget() {
    if (const char* env = std::getenv("UEDALAB_THREADS")) {
        int n = std::atoi(env);
        if (n >= 1) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

void parallel_for(int n, const std::function<void(int)>& body) {
    int workers = std::min(thread_budget(), n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
        });
    for (auto& t : pool) t.join();
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open input file: " + path);
    json j;
    in >> j;
    return j;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open output file: " + path);
    out << text;
}

void emit(const RunConfig& cfg, const json& j) {
    std::string text = j.dump(2) + "\n";
    if (!cfg.out.empty())
        write_text(cfg.out, text);
    else if (!cfg.quiet)
        std::cout << text;
}

std::string csv_path(const RunConfig& cfg) {
    if (cfg.out.empty()) return {};
    auto dot = cfg.out.rfind('.');
    return (dot == std::string::npos ? cfg.out : cfg.out.substr(0, dot)) + ".csv";
}

// ---- linearize -----------------------------------------------------------

template <class C>
int run_linearize(const RunConfig& cfg, const json& in) {
    TransitionSystem<C> sys = io::system_from_json<C>(in);
    if (cfg.order > 0) {
        TransitionSystem<C> resized = TransitionSystem<C>::make(sys.N, sys.r, cfg.order, sys.sigma);
        resized.sigma_theta = sys.sigma_theta;
        for (int e = 0; e < sys.N; ++e)
            for (int l = 0; l < sys.r; ++l)
                for (const auto& [a, c] : sys.edge_series[e][l].coeffs())
                    if (index_degree(a) >= 2 && index_degree(a) <= cfg.order)
                        resized.edge_series[e][l].set_coeff(a, c);
        sys = resized;
    }
    LinearizationResult<C> result = linearize(sys);
    if (result.status == LinStatus::linearized) {
        std::vector<double> res = verify_residual(sys, result);
        for (auto& rec : result.orders) rec.residual = res.at(rec.m - 2);
    }
    json out = io::result_to_json(sys, result);
    emit(cfg, out);
    if (!csv_path(cfg).empty()) {
        std::ostringstream csv;
        csv << "m,max_F,max_h,obstruction,resonant,residual\n";
        for (const auto& rec : result.orders)
            csv << rec.m << ',' << io::fmt17(rec.max_F) << ',' << io::fmt17(rec.max_h) << ','
                << io::fmt17(rec.max_obstruction) << ',' << (rec.had_resonance ? 1 : 0) << ','
                << io::fmt17(rec.residual) << '\n';
        write_text(csv_path(cfg), csv.str());
    }
    if (result.status == LinStatus::finite_type) {
        if (!cfg.quiet)
            std::cerr << "finite type at order " << result.finite_type_order << "\n";
        return 2;
    }
    return 0;
}

// ---- sweep ---------------------------------------------------------------

// Seeded test system: N = 3, r = 1, coefficients f_{kj,m} in the unit disk
// scaled by 0.1, shared across multipliers for comparability.
TransitionSystem<std::complex<double>> sweep_system(const Multiplier& mult, int order,
                                                    std::uint64_t seed) {
    auto sys = TransitionSystem<std::complex<double>>::make(3, 1, order, {mult.sigma()});
    if (mult.is_torsion()) sys.sigma_theta[0] = std::make_pair(mult.p(), mult.q());
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int e = 0; e < 3; ++e)
        for (int m = 2; m <= order; ++m) {
            double r = 0.1 * std::sqrt(unit(rng));
            sys.set_f(e, 0, {m}, std::polar(r, 2 * std::numbers::pi * unit(rng)));
        }
    return sys;
}

int run_sweep(const RunConfig& cfg, const json& in) {
    std::vector<Multiplier> mults;
    for (const auto& entry : in.at("multipliers")) mults.push_back(io::multiplier_from_json(entry));
    int order = cfg.order > 0 ? cfg.order : 20;

    struct Row {
        std::string classification;
        double min_m_dm = 0.0;
        double max_growth = 0.0;  // max_m |F_m|^{1/m}
        double residual = 0.0;
        long long finite_type_order = 0;
    };
    std::vector<Row> rows(mults.size());
    parallel_for(static_cast<int>(mults.size()), [&](int i) {
        const Multiplier& mult = mults[i];
        Row row;
        if (mult.is_torsion()) {
            row.classification = "torsion";
        } else {
            DiophantineReport rep = diophantine_check(mult, 0.25, 1.0, 100000);
            row.classification = rep.pass ? "diophantine" : "liouville-like";
        }
        double min_md = std::numeric_limits<double>::infinity();
        for (long long m = 1; m <= order; ++m)
            min_md = std::min(min_md, static_cast<double>(m) * mult.divisor(m));
        row.min_m_dm = min_md;
        auto sys = sweep_system(mult, order, cfg.seed);
        auto result = linearize(sys);
        if (result.status == LinStatus::finite_type) {
            row.finite_type_order = result.finite_type_order;
        } else {
            for (const auto& rec : result.orders)
                if (rec.max_F > 0)
                    row.max_growth = std::max(row.max_growth, std::pow(rec.max_F, 1.0 / rec.m));
            auto res = verify_residual(sys, result);
            for (double v : res) row.residual = std::max(row.residual, v);
        }
        rows[i] = row;
    });

    std::ostringstream csv;
    csv << "theta,classification,min_m_dm,max_growth,residual,finite_type_order\n";
    for (size_t i = 0; i < mults.size(); ++i)
        csv << io::fmt17(mults[i].theta()) << ',' << rows[i].classification << ','
            << io::fmt17(rows[i].min_m_dm) << ',' << io::fmt17(rows[i].max_growth) << ','
            << io::fmt17(rows[i].residual) << ',' << rows[i].finite_type_order << '\n';
    if (!cfg.out.empty())
        write_text(cfg.out, csv.str());
    else if (!cfg.quiet)
        std::cout << csv.str();
    return 0;
}

// ---- family --------------------------------------------------------------

int run_family(const RunConfig& cfg, const json& in) {
    if (in.contains("theta_family")) {
        std::vector<Multiplier> mults;
        for (const auto& entry : in.at("theta_family"))
            mults.push_back(io::multiplier_from_json(json{{"theta", entry}}));
        long long m_max = in.value("m_max", 50LL);
        auto rows = improved_vs_naive(mults, m_max, cfg.seed);
        std::ostringstream csv;
        csv << "theta,m,d_m,max_alpha,naive_bound,family_bound,family_attained,interior_max,"
               "boundary_max\n";
        bool violated = false;
        for (const auto& r : rows) {
            csv << io::fmt17(r.theta) << ',' << r.m << ',' << io::fmt17(r.d_m) << ','
                << io::fmt17(r.max_alpha) << ',' << io::fmt17(r.naive_bound) << ','
                << io::fmt17(r.family_bound) << ',' << io::fmt17(r.family_attained) << ','
                << io::fmt17(r.interior_max) << ',' << io::fmt17(r.boundary_max) << '\n';
            if (r.family_attained > r.family_bound * (1 + 1e-9)) violated = true;
        }
        if (!cfg.out.empty())
            write_text(cfg.out, csv.str());
        else if (!cfg.quiet)
            std::cout << csv.str();
        if (violated) {
            if (!cfg.quiet) std::cerr << "uniform family bound violated\n";
            return 3;
        }
        return 0;
    }

    ParamCochain1<std::complex<double>> alpha = io::param_cochain_from_json(in);
    long long nu = in.value("nu", 0LL);
    ArcBox arc{alpha.m_prime, nu, cfg.m0};
    ArcSolveReport rep;
    try {
        rep = family_solve(alpha, arc, std::max(16, cfg.samples));
    } catch (const std::domain_error& e) {
        if (!cfg.quiet)
            std::cerr << e.what() << " (torsion point " << io::fmt17(arc.torsion_point().real())
                      << " + " << io::fmt17(arc.torsion_point().imag()) << "i)\n";
        return 3;
    }
    json out;
    out["torsion_obstruction"] = io::scalar_to_json(rep.torsion_obstruction);
    out["interior_max"] = rep.interior_max;
    out["boundary_max"] = rep.boundary_max;
    out["circle_sup"] = rep.circle_sup;
    out["max_alpha"] = rep.max_alpha;
    out["uniform_bound"] = rep.uniform_bound;
    json samples = json::array();
    for (const auto& smp : rep.beta_samples) {
        json entry;
        entry["s"] = io::scalar_to_json(smp.s);
        entry["beta"] = {io::scalar_to_json(smp.beta[0]), io::scalar_to_json(smp.beta[1]),
                         io::scalar_to_json(smp.beta[2])};
        samples.push_back(entry);
    }
    out["samples"] = samples;
    emit(cfg, out);
    bool violated = rep.circle_sup > rep.uniform_bound * (1 + 1e-9) && rep.max_alpha > 0;
    if (violated) {
        if (!cfg.quiet) std::cerr << "uniform family bound violated\n";
        return 3;
    }
    return 0;
}

// ---- majorant ------------------------------------------------------------

int run_majorant(const RunConfig& cfg, const json& in) {
    MajorantSeries A;
    GeneralMajorantSpec gspec;
    bool general = in.contains("general");
    if (general) {
        const json& g = in.at("general");
        gspec.M0 = g.value("M0", 1LL);
        gspec.Theta = g.value("Theta", 2.0);
        gspec.K = g.value("K", 2.0);
        gspec.M = g.value("M", 1.0);
        gspec.R = g.value("R", 1.0);
        gspec.r = g.value("r", 1);
        gspec.order = cfg.order > 0 ? cfg.order : g.value("order", 12);
        A = general_majorant(gspec);
    } else {
        const json& t = in.at("toy");
        ToyMajorantSpec spec;
        spec.M = t.value("M", 1.0);
        spec.K = t.value("K", 2.0);
        spec.order = cfg.order > 0 ? cfg.order : t.value("order", 30);
        A = toy_majorant(spec);
    }

    std::ostringstream csv;
    csv << "m,A_m,B_m\n";
    for (int m = 1; m <= A.A.order(); ++m) {
        double b = 0.0;
        if (general && m + 1 <= A.A.order()) b = b_bounds(gspec, A, m);
        csv << m << ',' << io::fmt17(A.coeff(m)) << ',' << io::fmt17(b) << '\n';
    }
    if (!csv_path(cfg).empty()) write_text(csv_path(cfg), csv.str());

    json out;
    out["radius_estimate"] = A.radius_estimate;
    out["A2"] = A.coeff(2);
    if (in.contains("system")) {
        auto sys = io::system_from_json<std::complex<double>>(in.at("system"));
        auto result = linearize(sys);
        double M = in.value("M", 1.0), R = in.value("R", 1.0);
        auto rep = domination_check(sys, result, A, M, R);
        out["domination"] = rep.passed ? "pass" : "fail";
        out["domination_min_margin"] = rep.min_margin;
        emit(cfg, out);
        return rep.passed ? 0 : 3;
    }
    emit(cfg, out);
    return 0;
}

// ---- diophantine ---------------------------------------------------------

int run_diophantine(const RunConfig& cfg, const json& in) {
    Multiplier mult = io::multiplier_from_json(in);
    double A = in.value("A", 0.25);
    double alpha = in.value("alpha", 1.0);
    long long M = in.value("M", 100000LL);
    DiophantineReport rep = diophantine_check(mult, A, alpha, M);
    json out;
    out["pass"] = rep.pass;
    if (!rep.pass) {
        out["violating_m"] = rep.violating_m;
        out["d_at_m"] = rep.d_at_m;
        out["bound_at_m"] = rep.bound_at_m;
    }
    long long prof_len = std::min<long long>(M, cfg.samples > 0 ? cfg.samples : 64);
    DivisorProfile prof = divisor_profile(mult, prof_len);
    std::ostringstream csv;
    csv << "m,d_m,bound\n";
    for (long long m = 1; m <= prof_len; ++m)
        csv << m << ',' << io::fmt17(prof.at(m)) << ','
            << io::fmt17(A * std::pow(static_cast<double>(m), -alpha)) << '\n';
    if (!csv_path(cfg).empty()) write_text(csv_path(cfg), csv.str());
    emit(cfg, out);
    return 0;
}

// ---- cech-solve ----------------------------------------------------------

template <class C>
int run_cech(const RunConfig& cfg, const json& in) {
    CycleCover<C> cover = io::cover_from_json<C>(in);
    Cochain1<C> alpha;
    for (const auto& a : in.at("alpha")) alpha.push_back(io::scalar_from_json<C>(a));
    SolveReport<C> rep = solve(cover, alpha);
    json out;
    out["obstruction"] = io::scalar_to_json(rep.obstruction);
    out["obstructed"] = rep.obstructed;
    out["near_resonant"] = rep.near_resonant;
    if (rep.beta) {
        json beta = json::array();
        for (const auto& b : *rep.beta) beta.push_back(io::scalar_to_json(b));
        out["beta"] = beta;
        out["bound_ratio"] = rep.bound_ratio;
    }
    emit(cfg, out);
    return rep.obstructed ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"uedalab: cycle-cover linearization toolkit"};
    app.require_subcommand(1);
    RunConfig cfg;
    std::string cmd;
    for (const char* name :
         {"linearize", "sweep", "family", "majorant", "diophantine", "cech-solve"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--input", cfg.input)->required();
        sub->add_option("--out", cfg.out);
        sub->add_option("--order", cfg.order);
        sub->add_option("--seed", cfg.seed);
        sub->add_option("--samples", cfg.samples);
        sub->add_option("--precision", cfg.precision)
            ->check(CLI::IsMember({"float", "exact"}));
        sub->add_option("--m0", cfg.m0);
        sub->add_flag("--quiet", cfg.quiet);
        sub->callback([&cmd, name] { cmd = name; });
    }
    CLI11_PARSE(app, argc, argv);

    try {
        json in = load_json(cfg.input);
        bool exact = cfg.precision == "exact";
        if (cmd == "linearize")
            return exact ? run_linearize<uedalab::GaussianRational>(cfg, in)
                         : run_linearize<std::complex<double>>(cfg, in);
        if (cmd == "sweep") return run_sweep(cfg, in);
        if (cmd == "family") return run_family(cfg, in);
        if (cmd == "majorant") return run_majorant(cfg, in);
        if (cmd == "diophantine") return run_diophantine(cfg, in);
        if (cmd == "cech-solve")
            return exact ? run_cech<uedalab::GaussianRational>(cfg, in)
                         : run_cech<std::complex<double>>(cfg, in);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
