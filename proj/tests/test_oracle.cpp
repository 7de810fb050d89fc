#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "comb/oracle.hpp"

using namespace comb;
using Catch::Matchers::WithinAbs;

TEST_CASE("ODE scattering oracle basics", "[oracle]") {
    // vanishing support: free propagation
    const auto tiny = oracle::transfer_matrix_amplitudes(1e-3, 1.0);
    CHECK_THAT(std::abs(tiny.t), WithinAbs(1.0, 1e-3));
    CHECK(std::abs(tiny.r_R) < 2e-3);
    // flux conservation at eps = 0.9, k = 5
    const auto amp = oracle::transfer_matrix_amplitudes(0.9, 5.0);
    CHECK_THAT(std::norm(amp.t) + std::norm(amp.r_R), WithinAbs(1.0, 1e-8));
    CHECK_THROWS_AS(oracle::transfer_matrix_amplitudes(0.6, -1.0), numerical_error);
}

TEST_CASE("ODE oracle shows fourth-order step convergence", "[oracle]") {
    CombModel m{1.0, TruncatedPoschlTeller{0.6}};
    const Complex exact = amplitudes(m, {1.0, 0.0}).t;
    const double e1 =
        std::abs(oracle::transfer_matrix_amplitudes(0.6, 1.0, {0.6 / 50.0}).t - exact);
    const double e2 =
        std::abs(oracle::transfer_matrix_amplitudes(0.6, 1.0, {0.6 / 100.0}).t - exact);
    CHECK(e1 / e2 >= 8.0);
}

TEST_CASE("dense scan finds the shifted-cosine lattice roots", "[oracle]") {
    const double th = constants::pi / 3.0;
    auto f = [&](double k) { return std::cos(th) - std::cos(k); };
    const auto roots = oracle::dense_scan_roots(f, 0.1, 10.0, 0.01);
    REQUIRE(roots.size() == 3);
    CHECK_THAT(roots[0], WithinAbs(th, 1e-10));
    CHECK_THAT(roots[1], WithinAbs(2.0 * constants::pi - th, 1e-10));
    CHECK_THAT(roots[2], WithinAbs(2.0 * constants::pi + th, 1e-10));
}

TEST_CASE("algebraic discriminants agree with the scattering route", "[oracle]") {
    CombModel dd{1.0, DeltaDeltaPrime{10.0, 0.0}};
    CombModel pt{1.0, TruncatedPoschlTeller{0.6}};
    for (const CombModel& m : {dd, pt}) {
        for (double k : {0.3, 1.1, 2.9, 6.4}) {
            CHECK_THAT(oracle::discriminant_real(m, k), WithinAbs(h_v_real(m, k), 1e-10));
        }
    }
}

TEST_CASE("low temperature needs far fewer bands than high temperature", "[oracle]") {
    // smallest n with |I3(n pi / a)| below a fixed tail tolerance
    auto bands_needed = [](double T) {
        for (int n = 1; n < 400; ++n) {
            if (std::abs(i3({n * constants::pi, 0.0}, 0.0, T).real()) < 1e-12) return n;
        }
        return 400;
    };
    const int cold = bands_needed(0.1);
    const int hot = bands_needed(2.0);
    CHECK(hot >= 10 * cold);
}

TEST_CASE("band-sum tail estimate shrinks with the band count", "[oracle]") {
    CombModel m{1.0, DeltaDeltaPrime{8.0, 0.0}};
    double tail_small = 0.0, tail_large = 0.0;
    oracle::band_sum_free_energy(m, 1.0, 8, &tail_small);
    oracle::band_sum_free_energy(m, 1.0, 16, &tail_large);
    CHECK(tail_large < tail_small);
    CHECK(tail_large < 1e-10);
}
