#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "uedalab/multiplier.hpp"

using namespace uedalab;

TEST_CASE("circle distance basics") {
    REQUIRE(circle_distance(0.0, 0.25) == Catch::Approx(0.25));
    REQUIRE(circle_distance(0.9, 0.1) == Catch::Approx(0.2));
    REQUIRE(circle_distance(0.5, 0.5) == 0.0);
}

TEST_CASE("rational multipliers are torsion with exact divisors") {
    Multiplier m = Multiplier::from_rational(2, 8);  // reduces to 1/4
    REQUIRE(m.is_torsion());
    REQUIRE(m.p() == 1);
    REQUIRE(m.q() == 4);
    REQUIRE(m.divisor(4) == 0.0);
    REQUIRE(m.divisor(2) == Catch::Approx(0.5));
    REQUIRE(m.divisor(1) == Catch::Approx(0.25));
}

TEST_CASE("golden mean small-divisor profile") {
    Multiplier g = Multiplier::golden_mean();
    DivisorProfile prof = divisor_profile(g, 5);
    // d(1, sigma^m) = ||m theta||, theta = (sqrt 5 - 1)/2.
    REQUIRE(prof.at(1) == Catch::Approx(0.3819660112501051).epsilon(1e-12));
    REQUIRE(prof.at(2) == Catch::Approx(0.2360679774997897).epsilon(1e-12));
    REQUIRE(prof.at(3) == Catch::Approx(0.1458980337503155).epsilon(1e-12));
    REQUIRE(prof.at(4) == Catch::Approx(0.4721359549995794).epsilon(1e-12));
    REQUIRE(prof.at(5) == Catch::Approx(0.0901699437494742).epsilon(1e-12));
}

TEST_CASE("golden mean passes the Diophantine check") {
    Multiplier g = Multiplier::golden_mean();
    DiophantineReport rep = diophantine_check(g, 0.25, 1.0, 100000);
    REQUIRE(rep.pass);
}

TEST_CASE("Liouville construction fails the Diophantine check") {
    Multiplier l = Multiplier::liouville(4);
    DiophantineReport rep = diophantine_check(l, 0.25, 1.0, 10000);
    REQUIRE_FALSE(rep.pass);
    REQUIRE(rep.violating_m <= 10000);
    REQUIRE(rep.d_at_m < rep.bound_at_m);
}

TEST_CASE("power_sum builds a deep approximant at the first exponent") {
    // theta = 10^{-1} + 10^{-7}: the approximant 1/10 gives d(1, sigma^10) = 1e-6.
    Multiplier m = Multiplier::power_sum({1, 7});
    REQUIRE(m.divisor(10) == Catch::Approx(1e-6).epsilon(1e-9));
    REQUIRE(m.theta() == Catch::Approx(0.1000001).epsilon(1e-12));
}

TEST_CASE("exact multiple_mod_one wraps correctly") {
    Multiplier m = Multiplier::from_exact_sample(Rational(7, 10));
    REQUIRE(m.multiple_mod_one(3) == Catch::Approx(0.1).epsilon(1e-15));
    REQUIRE(m.divisor(3) == Catch::Approx(0.1).epsilon(1e-15));
}

TEST_CASE("epsilon constant verified on a grid") {
    double ratio = epsilon_verify();
    REQUIRE(ratio >= epsilon_constant() - 1e-9);
    // Sharp at sigma = -1: |1 - (-1)| / d(1,-1) = 2 / 0.5 = 4.
    REQUIRE(ratio == Catch::Approx(4.0).epsilon(1e-6));
}

TEST_CASE("arc boxes partition the circle") {
    auto arcs = arc_partition(5, 2);
    REQUIRE(arcs.size() == 10);
    for (const auto& arc : arcs) {
        REQUIRE(arc.re_half() == Catch::Approx(1.0 / 20.0));
        REQUIRE(arc.im_half() == Catch::Approx(1.0 / 40.0));
        REQUIRE(arc.contains_xi({arc.xi_center(), 0.0}));
        std::complex<double> zeta = arc.torsion_point();
        REQUIRE(std::abs(std::pow(zeta, 10.0) - 1.0) < 1e-12);
    }
    // Every xi on [0,1) lies in some box.
    for (int i = 0; i < 1000; ++i) {
        double xi = i / 1000.0;
        bool covered = false;
        for (const auto& arc : arcs) covered = covered || arc.contains_xi({xi, 0.0});
        REQUIRE(covered);
    }
}

TEST_CASE("map_to_annulus sends the real axis to the unit circle") {
    ArcBox arc{3, 1, 1};
    std::complex<double> s = arc.map_to_annulus({arc.xi_center(), 0.0});
    REQUIRE(std::abs(std::abs(s) - 1.0) < 1e-14);
    REQUIRE(std::abs(s - arc.torsion_point()) < 1e-14);
    // Im xi > 0 maps inside the unit circle.
    REQUIRE(std::abs(arc.map_to_annulus({0.0, 0.1})) < 1.0);
}
