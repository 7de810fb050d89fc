#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "comb/oracle.hpp"
#include "comb/scattering.hpp"

using namespace comb;
using Catch::Matchers::WithinAbs;

TEST_CASE("delta-delta' amplitudes at closed-form points", "[scattering]") {
    CombModel m{1.0, DeltaDeltaPrime{2.0, 0.0}};
    const auto amp = amplitudes(m, {1.0, 0.0});
    // gamma = 2, Omega = -1: t = 2/(2 + 2i) = (1 - i)/2
    CHECK_THAT(amp.t.real(), WithinAbs(0.5, 1e-14));
    CHECK_THAT(amp.t.imag(), WithinAbs(-0.5, 1e-14));
    CHECK_THAT(std::norm(amp.t), WithinAbs(0.5, 1e-14));

    CombModel free{1.0, DeltaDeltaPrime{0.0, 0.0}};
    const auto fa = amplitudes(free, {0.7, 0.0});
    CHECK_THAT(fa.t.real(), WithinAbs(1.0, 1e-14));
    CHECK_THAT(std::abs(fa.r_R), WithinAbs(0.0, 1e-14));
    CHECK_THAT(std::abs(fa.r_L), WithinAbs(0.0, 1e-14));
}

TEST_CASE("unitarity on a dense real grid for both models", "[scattering]") {
    CombModel dd{1.0, DeltaDeltaPrime{7.0, 0.4}};
    CombModel pt{1.0, TruncatedPoschlTeller{0.6}};
    for (const CombModel& m : {dd, pt}) {
        double worst_flux = 0.0, worst_det = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const double k = 1e-2 * std::pow(50.0 / 1e-2, i / 999.0);
            const auto amp = amplitudes(m, {k, 0.0});
            worst_flux = std::max(worst_flux,
                                  std::abs(std::norm(amp.t) + std::norm(amp.r_R) - 1.0));
            worst_det = std::max(worst_det, std::abs(std::abs(det_s(m, {k, 0.0})) - 1.0));
        }
        CHECK(worst_flux < 1e-10);
        CHECK(worst_det < 1e-10);
    }
}

TEST_CASE("det S for delta-delta' is independent of w1", "[scattering]") {
    // gamma fixed at 2 while w1 varies: w0 = 2 (1 + w1^2)
    for (double w1 : {0.0, 0.5, 2.0, -3.0}) {
        CombModel m{1.0, DeltaDeltaPrime{2.0 * (1.0 + w1 * w1), w1}};
        CombModel ref{1.0, DeltaDeltaPrime{2.0, 0.0}};
        for (double k : {0.3, 1.0, 4.0}) {
            const Complex a = det_s(m, {k, 0.0});
            const Complex b = det_s(ref, {k, 0.0});
            CHECK_THAT(std::abs(a - b), WithinAbs(0.0, 1e-12));
        }
    }
}

TEST_CASE("delta-delta' phase shift equals -arctan(gamma/2k)", "[scattering]") {
    CombModel m{1.0, DeltaDeltaPrime{2.0, 0.0}};  // gamma = 2
    std::vector<double> grid;
    for (int i = 0; i < 200; ++i) grid.push_back(0.05 + 0.05 * i);
    const auto delta = phase_shift(m, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK_THAT(delta[i], WithinAbs(-std::atan(1.0 / grid[i]), 1e-10));
}

TEST_CASE("phase shift derivative matches finite differences", "[scattering]") {
    CombModel m{1.0, DeltaDeltaPrime{5.0, 0.3}};
    for (double k : {0.5, 1.5, 4.0}) {
        const double h = 1e-6;
        const double fd = 0.5 *
                          (std::arg(det_s(m, {k + h, 0.0})) - std::arg(det_s(m, {k - h, 0.0}))) /
                          (2.0 * h);
        CHECK_THAT(phase_shift_derivative(m, {k, 0.0}).real(), WithinAbs(fd, 1e-7));
    }
}

TEST_CASE("PT closed form matches the ODE oracle", "[scattering]") {
    for (double eps : {0.2, 0.6, 0.9}) {
        CombModel m{1.0, TruncatedPoschlTeller{eps}};
        for (double k : {0.5, 1.0, 2.0, 5.0}) {
            const auto ode = oracle::transfer_matrix_amplitudes(eps, k);
            const auto cf = amplitudes(m, {k, 0.0});
            CHECK(std::abs(ode.t - cf.t) / std::abs(cf.t) < 1e-6);
            CHECK(std::abs(ode.r_R - cf.r_R) < 1e-6);
        }
    }
}

TEST_CASE("amplitude pole proximity is reported", "[scattering]") {
    CombModel m{1.0, DeltaDeltaPrime{2.0, 0.0}};  // gamma = 2, pole at k = -i
    CHECK_THROWS_AS(amplitudes(m, {0.0, -1.0}), pole_proximity_error);
}
