#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "comb/numerics.hpp"
#include "comb/specialfn.hpp"

using namespace comb;
using Catch::Matchers::WithinAbs;

static void check_close(Complex got, Complex want, double tol) {
    CHECK_THAT(got.real(), WithinAbs(want.real(), tol));
    CHECK_THAT(got.imag(), WithinAbs(want.imag(), tol));
}

TEST_CASE("polylog special points", "[specialfn]") {
    check_close(polylog(2, {0.0, 0.0}), {0.0, 0.0}, 1e-15);
    check_close(polylog(3, {1.0, 0.0}), {constants::zeta3, 0.0}, 1e-14);
    // Landen value: Li2(1/2) = pi^2/12 - ln(2)^2/2
    const double li2_half = constants::pi2_6 / 2.0 - 0.5 * std::log(2.0) * std::log(2.0);
    check_close(polylog(2, {0.5, 0.0}), {li2_half, 0.0}, 1e-14);
}

TEST_CASE("polylog matches independently computed references", "[specialfn]") {
    // reference values from an arbitrary-precision evaluation
    check_close(polylog(2, {std::exp(-1.0), 0.0}), {0.408754287348896, 0.0}, 1e-14);
    check_close(polylog(3, {std::exp(-1.0), 0.0}), {0.386995424210200, 0.0}, 1e-14);
    check_close(polylog(2, 0.9 * std::polar(1.0, 1.0)),
                {0.317146708380881, 0.906209288877688}, 1e-13);
    check_close(polylog(3, 0.95 * std::polar(1.0, 0.3)),
                {1.020590002628490, 0.392905299708752}, 1e-13);
}

TEST_CASE("polylog conjugate symmetry and modulus bound", "[specialfn]") {
    for (double r : {0.3, 0.7, 0.95}) {
        for (double phi : {0.4, 1.3, 2.8}) {
            const Complex z = r * std::polar(1.0, phi);
            for (int s : {2, 3}) {
                const Complex a = polylog(s, z);
                const Complex b = polylog(s, std::conj(z));
                check_close(b, std::conj(a), 1e-13);
                CHECK(std::abs(a) <= polylog(s, {r, 0.0}).real() + 1e-13);
            }
        }
    }
}

TEST_CASE("polylog derivative identity d/dz Li3 = Li2/z", "[specialfn]") {
    const Complex z{0.4, 0.3};
    const double h = 1e-6;
    const Complex fd = (polylog(3, z + h) - polylog(3, z - h)) / (2.0 * h);
    check_close(fd, polylog(2, z) / z, 1e-8);
}

TEST_CASE("polylog rejects arguments outside the closed unit disk", "[specialfn]") {
    CHECK_THROWS_AS(polylog(2, {1.2, 0.0}), polylog_domain_error);
    CHECK_THROWS_AS(polylog(3, {0.9, 0.9}), polylog_domain_error);
}

TEST_CASE("branched power elementary values", "[specialfn]") {
    check_close(branched_power_3_2(0.0, {2.0, 0.0}), {8.0, 0.0}, 1e-13);
    check_close(branched_power_3_2(1.0, {0.0, 0.0}), {1.0, 0.0}, 1e-13);
    // |base| = 1, arg base = pi/4, power multiplies the argument by 3/2
    check_close(branched_power_3_2(0.0, std::polar(1.0, constants::pi / 8.0)),
                std::polar(1.0, 3.0 * constants::pi / 8.0), 1e-13);
}

TEST_CASE("branched power is real positive on the real axis", "[specialfn]") {
    for (double k : {0.1, 1.0, 3.7}) {
        const Complex v = branched_power_3_2(0.5, {k, 0.0});
        const double m2k2 = 0.25 + k * k;
        CHECK_THAT(v.real(), WithinAbs(m2k2 * std::sqrt(m2k2), 1e-12 * v.real()));
        CHECK_THAT(v.imag(), WithinAbs(0.0, 1e-13));
    }
}

TEST_CASE("branched power flags the cut", "[specialfn]") {
    // m = 0, k = i y puts m^2 + k^2 on the negative real axis
    CHECK_THROWS_AS(branched_power_3_2(0.0, {0.0, 2.0}), branch_cut_error);
}
