#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "comb/oracle.hpp"
#include "comb/thermal.hpp"

using namespace comb;
using Catch::Matchers::WithinAbs;

TEST_CASE("I3 kernel special values", "[thermal]") {
    // k = m = 0: lambda = 0, so I3 = -T^3 zeta(3) / (2 pi)
    CHECK_THAT(i3({0.0, 0.0}, 0.0, 1.0).real(),
               WithinAbs(-constants::zeta3 / (2.0 * constants::pi), 1e-13));
    // frozen reference from arbitrary-precision evaluation at k=1, m=0, T=1
    CHECK_THAT(i3({1.0, 0.0}, 0.0, 1.0).real(), WithinAbs(-0.126647500058580, 1e-13));
    // T -> 0: exponential suppression
    CHECK(std::abs(i3({1.0, 0.0}, 0.0, 0.05).real()) < 1e-9);
}

TEST_CASE("I3 temperature derivative matches finite differences", "[thermal]") {
    for (double k : {0.4, 1.3}) {
        const double T = 0.8, h = 1e-5;
        const double fd =
            (i3({k, 0.0}, 0.0, T + h).real() - i3({k, 0.0}, 0.0, T - h).real()) / (2.0 * h);
        CHECK_THAT(i3_dT({k, 0.0}, 0.0, T).real(), WithinAbs(fd, 1e-8));
    }
}

TEST_CASE("free comb free energy matches the band-sum oracle", "[thermal]") {
    CombModel free{1.0, DeltaDeltaPrime{0.0, 0.0}};
    const double cf = delta_f(free, 1.0, ContourSpec{});
    const double bs = oracle::band_sum_free_energy(free, 1.0, 12);
    CHECK(std::abs(cf - bs) / std::abs(bs) < 1e-6);
}

TEST_CASE("contour free energy matches the band-sum oracle for both models", "[thermal]") {
    CombModel dd{1.0, DeltaDeltaPrime{8.0, 0.0}};
    CombModel pt{1.0, TruncatedPoschlTeller{0.6}};
    for (const CombModel& m : {dd, pt}) {
        ContourSpec c;
        c.m_offset = mass(m);
        for (double T : {0.5, 1.0, 2.0}) {
            const double cf = delta_f(m, T, c);
            const double bs = oracle::band_sum_free_energy(m, T, 14);
            CHECK(std::abs(cf - bs) / std::abs(bs) < 1e-4);
        }
    }
}

TEST_CASE("free energy angle independence", "[thermal]") {
    CombModel m{1.0, DeltaDeltaPrime{8.0, 0.0}};
    ContourSpec c8;
    ContourSpec c6;
    c6.gamma_angle = constants::pi / 6.0;
    double e8 = 0.0, e6 = 0.0;
    const double f8 = delta_f(m, 1.0, c8, &e8);
    const double f6 = delta_f(m, 1.0, c6, &e6);
    CHECK(std::abs(f8 - f6) < 5.0 * (e8 + e6) + 1e-10);
}

TEST_CASE("free energy is negative and decreasing in T", "[thermal]") {
    CombModel m{1.0, TruncatedPoschlTeller{0.5}};
    ContourSpec c;
    c.m_offset = mass(m);
    double prev = 0.0;
    for (double T : {0.25, 0.75, 1.5, 3.0}) {
        const double f = delta_f(m, T, c);
        CHECK(f < 0.0);
        CHECK(f < prev);
        prev = f;
    }
}

TEST_CASE("finite-difference and analytic entropy agree", "[thermal]") {
    CombModel m{1.0, DeltaDeltaPrime{8.0, 0.0}};
    const double fd = entropy(m, 1.0, ContourSpec{});
    const double an = entropy_analytic(m, 1.0, ContourSpec{});
    CHECK(std::abs(fd - an) / std::abs(an) < 1e-5);
    CHECK(fd > 0.0);
}

TEST_CASE("entropy grows with temperature", "[thermal]") {
    CombModel m{1.0, DeltaDeltaPrime{8.0, 0.0}};
    double prev = 0.0;
    for (double T : {0.5, 1.0, 2.0}) {
        const double s = entropy(m, T, ContourSpec{});
        CHECK(s > prev);
        prev = s;
    }
}

TEST_CASE("thermal pressure is positive for the figure models", "[thermal]") {
    CombModel dd{1.0, DeltaDeltaPrime{8.0, 0.0}};
    CHECK(pressure(dd, 1.0, ContourSpec{}) > 0.0);
    CombModel pt{1.0, TruncatedPoschlTeller{0.25}};
    ContourSpec c;
    c.m_offset = mass(pt);
    CHECK(pressure(pt, 1.0, c) > 0.0);
}

TEST_CASE("thermo_point bundles consistent values", "[thermal]") {
    CombModel m{1.0, DeltaDeltaPrime{8.0, 0.0}};
    const auto p = thermo_point(m, 1.0, ContourSpec{});
    CHECK_THAT(p.delta_f_per_area, WithinAbs(delta_f(m, 1.0, ContourSpec{}), 1e-12));
    CHECK(p.entropy_per_area > 0.0);
    CHECK(p.pressure > 0.0);
    CHECK(p.quad_error >= 0.0);
}

TEST_CASE("temperature domain is checked", "[thermal]") {
    CombModel m{1.0, DeltaDeltaPrime{8.0, 0.0}};
    CHECK_THROWS_AS(delta_f(m, -1.0, ContourSpec{}), numerical_error);
    CHECK_THROWS_AS(entropy(m, 1e-5, ContourSpec{}), numerical_error);
}
