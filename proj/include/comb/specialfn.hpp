#pragma once

#include <cmath>
#include <complex>

#include "comb/errors.hpp"

namespace comb {

namespace constants {
inline constexpr double zeta3 = 1.20205690315959428540;
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double pi2_6 = 1.64493406684822643647;  // zeta(2)
}  // namespace constants

namespace detail {

// zeta at non-positive integers, zeta(-n) = -B_{n+1}/(n+1); even n > 0 give 0.
// Index j holds zeta(-j) for j = 0..19.
inline constexpr double kZetaNeg[20] = {
    -0.5,
    -1.0 / 12.0, 0.0,
    1.0 / 120.0, 0.0,
    -1.0 / 252.0, 0.0,
    1.0 / 240.0, 0.0,
    -1.0 / 132.0, 0.0,
    691.0 / 32760.0, 0.0,
    -1.0 / 12.0, 0.0,
    3617.0 / 8160.0, 0.0,
    -43867.0 / 14364.0, 0.0,
    174611.0 / 6600.0};

inline std::complex<double> polylog_series(int s, std::complex<double> z) {
    std::complex<double> term = z, sum = z;
    for (int n = 2; n < 400; ++n) {
        term *= z;
        const std::complex<double> add = term / std::pow(double(n), s);
        sum += add;
        if (std::abs(add) < 1e-16 * (std::abs(sum) + 1e-30)) return sum;
    }
    return sum;
}

// Expansion of Li_s(e^mu) about mu = 0, valid for |mu| < 2 pi:
//   Li_n(e^mu) = mu^{n-1}/(n-1)! [H_{n-1} - log(-mu)] + sum_{k != n-1} zeta(n-k) mu^k / k!
inline std::complex<double> polylog_near_one(int s, std::complex<double> z) {
    const std::complex<double> mu = std::log(z);
    if (mu == std::complex<double>{}) {
        if (s == 3) return {constants::zeta3, 0.0};
        return {constants::pi2_6, 0.0};
    }
    const std::complex<double> lnm = std::log(-mu);
    std::complex<double> sum;
    if (s == 2) {
        sum = constants::pi2_6 + mu * (1.0 - lnm);
        std::complex<double> mp = mu;        // mu^k
        double fact = 1.0;                    // k!
        for (int k = 2; k < 22; ++k) {
            mp *= mu;
            fact *= k;
            sum += kZetaNeg[k - 2] * mp / fact;
        }
    } else {
        sum = constants::zeta3 + constants::pi2_6 * mu + 0.5 * mu * mu * (1.5 - lnm);
        std::complex<double> mp = mu * mu;
        double fact = 2.0;
        for (int k = 3; k < 23; ++k) {
            mp *= mu;
            fact *= k;
            sum += kZetaNeg[k - 3] * mp / fact;
        }
    }
    return sum;
}

}  // namespace detail

// Li_s(z) for s in {2, 3}, |z| <= 1.  Direct series away from the unit circle,
// log-expansion about z = 1 otherwise.
inline std::complex<double> polylog(int s, std::complex<double> z) {
    if (s != 2 && s != 3)
        throw polylog_domain_error("polylog: order must be 2 or 3");
    const double az = std::abs(z);
    if (az > 1.0 + 1e-12)
        throw polylog_domain_error("polylog: |z| > 1");
    if (az <= 0.55) return detail::polylog_series(s, z);
    if (std::abs(std::log(z)) <= 2.0) return detail::polylog_near_one(s, z);
    // large argument angle: square-root duplication shrinks |log z|
    const double half = (s == 2) ? 0.5 : 0.25;
    return half * polylog(s, z * z) - polylog(s, -z);
}

// (m^2 + k^2)^{3/2} with the cut along the negative real axis of the base.
inline std::complex<double> branched_power_3_2(double m, std::complex<double> k) {
    const std::complex<double> base = m * m + k * k;
    if (base.real() < 0.0 && std::abs(base.imag()) < 1e-14 * std::abs(base.real()))
        throw branch_cut_error("branched_power_3_2: base on the branch cut");
    return std::exp(1.5 * std::log(base));
}

}  // namespace comb
