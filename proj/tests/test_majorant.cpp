#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "uedalab/majorant.hpp"
#include "uedalab/multiplier.hpp"

using namespace uedalab;
using CD = std::complex<double>;

TEST_CASE("toy majorant: A_2 = KM and recursion matches the closed form") {
    for (double K : {1.0, 2.0, 4.0}) {
        for (double M : {0.5, 1.0, 2.0}) {
            ToyMajorantSpec spec;
            spec.K = K;
            spec.M = M;
            spec.order = 30;
            auto A = toy_majorant(spec);
            REQUIRE(A.coeff(1) == 1.0);
            REQUIRE(A.coeff(2) == Catch::Approx(K * M).epsilon(1e-14));
            auto closed = toy_closed_form(spec);
            for (int m = 1; m <= 30; ++m) {
                double rel = std::max(1.0, std::abs(closed[m]));
                REQUIRE(std::abs(A.coeff(m) - closed[m]) <= 1e-12 * rel);
            }
        }
    }
}

TEST_CASE("toy radius closed form for K=2, M=1 is 5 - 2 sqrt 6") {
    ToyMajorantSpec spec;
    spec.K = 2.0;
    spec.M = 1.0;
    double r = toy_radius_closed_form(spec);
    REQUIRE(r == Catch::Approx(5.0 - 2.0 * std::sqrt(6.0)).epsilon(1e-14));
    REQUIRE(r == Catch::Approx(0.10102).epsilon(1e-4));
}

TEST_CASE("radius_estimate recovers a geometric radius exactly") {
    MajorantSeries A;
    A.A = CSeries(1, 20);
    double rho = 0.37;
    for (int m = 1; m <= 20; ++m) A.A.set_coeff({m}, {std::pow(rho, -m), 0.0});
    REQUIRE(radius_estimate(A) == Catch::Approx(rho).epsilon(1e-10));
}

TEST_CASE("radius_estimate of the toy series is within 10% of the root") {
    ToyMajorantSpec spec;
    spec.K = 2.0;
    spec.M = 1.0;
    spec.order = 60;
    auto A = toy_majorant(spec);
    double est = radius_estimate(A);
    double target = 5.0 - 2.0 * std::sqrt(6.0);
    REQUIRE(std::abs(est - target) <= 0.10 * target);
}

TEST_CASE("general majorant reproduces A_2 = 14 M0 Theta K^2 (1+Theta) M R^2") {
    GeneralMajorantSpec spec;  // M0=1, Theta=2, K=2, M=1, R=1
    spec.order = 12;
    auto A = general_majorant(spec);
    REQUIRE(spec.big_c() == Catch::Approx(336.0).epsilon(1e-14));
    REQUIRE(A.coeff(2) == Catch::Approx(336.0).epsilon(1e-9));
    for (const auto& [a, c] : A.A.coeffs()) REQUIRE(c.real() >= -1e-9 * A.A.max_abs());
    // Residual of the defining equation through order 12.
    auto F = general_majorant_equation(spec);
    std::vector<CSeries> X = {CSeries::variable(1, 12, 0)};
    CSeries res = F(X, A.A);
    REQUIRE(res.max_abs() <= 1e-9 * A.A.max_abs());
}

TEST_CASE("general majorant with r = 2 solves its equation") {
    GeneralMajorantSpec spec;
    spec.r = 2;
    spec.order = 8;
    auto A = general_majorant(spec);
    auto F = general_majorant_equation(spec);
    std::vector<CSeries> X = {CSeries::variable(2, 8, 0), CSeries::variable(2, 8, 1)};
    CSeries res = F(X, A.A);
    REQUIRE(res.max_abs() <= 1e-9 * A.A.max_abs());
}

TEST_CASE("b_bounds: B_1 = (1+Theta) M R^2") {
    GeneralMajorantSpec spec;  // Theta=2, M=1, R=1
    spec.order = 12;
    auto A = general_majorant(spec);
    REQUIRE(b_bounds(spec, A, 1) == Catch::Approx(3.0).epsilon(1e-9));
    REQUIRE(b_bounds(spec, A, 2) >= b_bounds(spec, A, 1));
}

TEST_CASE("domination: majorant bounds every computed coefficient") {
    std::mt19937_64 rng(9001);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Multiplier gm = Multiplier::golden_mean();
    CD sigma = gm.sigma();
    int order = 10;
    double M = 0.1, R = 1.0;
    // Uniform K covering every small divisor met below the order cap.
    double K = 0.0;
    for (int m = 2; m <= order; ++m) K = std::max(K, 2.0 / gm.divisor(m - 1));

    ToyMajorantSpec tspec;
    tspec.K = K;
    tspec.M = M;
    tspec.order = order;
    auto A = toy_majorant(tspec);

    for (int trial = 0; trial < 25; ++trial) {
        auto sys = TransitionSystem<CD>::make(3, 1, order, {sigma});
        for (int e = 0; e < 3; ++e)
            for (int m = 2; m <= order; ++m)
                sys.set_f(e, 0, {m}, std::polar(M * std::pow(R, m) * u(rng),
                                                2 * std::numbers::pi * u(rng)));
        auto result = linearize(sys);
        REQUIRE(result.status == LinStatus::linearized);
        auto rep = domination_check(sys, result, A, M, R);
        REQUIRE(rep.precondition_ok);
        REQUIRE(rep.passed);
    }
}

TEST_CASE("domination precondition rejects oversized data") {
    auto sys = TransitionSystem<CD>::make(3, 1, 4, {CD(0, 1)});
    sys.set_f(0, 0, {2}, CD(10, 0));
    auto result = linearize(sys);
    ToyMajorantSpec tspec;
    auto A = toy_majorant(tspec);
    auto rep = domination_check(sys, result, A, 0.1, 1.0);
    REQUIRE_FALSE(rep.precondition_ok);
    REQUIRE_FALSE(rep.passed);
}
