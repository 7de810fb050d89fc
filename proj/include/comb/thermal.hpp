#pragma once

#include <cmath>
#include <complex>

#include "comb/errors.hpp"
#include "comb/numerics.hpp"
#include "comb/specialfn.hpp"
#include "comb/spectrum.hpp"
#include "comb/vacuum.hpp"

namespace comb {

// lambda = sqrt(k^2 + m^2)/T; Re lambda > 0 on the contour rays, so the
// Boltzmann factor e^{-lambda} stays inside the unit disk.
struct BoltzmannKernel {
    Complex lambda;

    static BoltzmannKernel at(Complex k, double m, double T) {
        if (!(T > 0.0)) throw numerical_error("BoltzmannKernel: T must be positive");
        return {std::sqrt(k * k + m * m) / T};
    }
};

// parallel-momentum-integrated kernel I3 = -(T^3/2pi)[lam Li2(e^-lam) + Li3(e^-lam)]
inline Complex i3(Complex k, double m, double T) {
    const Complex lam = BoltzmannKernel::at(k, m, T).lambda;
    const Complex z = std::exp(-lam);
    return -(T * T * T / (2.0 * constants::pi)) * (lam * polylog(2, z) + polylog(3, z));
}

// dI3/dT in closed form: 3 I3/T + (T^2/2pi) lam^2 log(1 - e^-lam)
inline Complex i3_dT(Complex k, double m, double T) {
    const Complex lam = BoltzmannKernel::at(k, m, T).lambda;
    const Complex z = std::exp(-lam);
    return 3.0 * i3(k, m, T) / T +
           (T * T / (2.0 * constants::pi)) * lam * lam * std::log(1.0 - z);
}

namespace detail {

inline Complex dlog_f(const CombModel& model, double theta, Complex k) {
    const auto j = secular_f(model, theta, Jet<Complex>::variable(k));
    if (std::abs(j.v) < 1e-13)
        throw contour_crossing_error("thermal: secular zero on the integration ray");
    return j.d / j.v;
}

// Temperature part of the free energy with kernel(k) in place of I3; reused
// with dI3/dT for the analytic entropy route.
template <class Kernel>
double thermal_contour_sum(const CombModel& model, const ContourSpec& contour, double T,
                           Kernel&& kernel, double* err_out) {
    check_contour(contour);
    const double m = contour.m_offset;
    const double gamma = contour.gamma_angle;
    const Complex eig = std::polar(1.0, gamma);
    const double decay = std::max(T, 1e-2) / std::cos(gamma);

    std::optional<NegativeBand> nb;
    try {
        nb = negative_band(model, 2);
    } catch (const transparency_error&) {
    }

    double acc = 0.0, err_acc = 0.0;
    std::vector<std::pair<double, double>> nodes;
    for (const auto& [plo, phi] : theta_panels(model, m, nb))
        for (const auto& nw : gauss_legendre(contour.theta_nodes, plo, phi))
            nodes.push_back(nw);
    for (const auto& [th, w] : nodes) {
        double qerr = 0.0;
        double val = integrate_semi_infinite(
                         [&](double xi) {
                             const Complex kp = m + xi * eig;
                             const Complex x =
                                 kernel(kp) * eig * dlog_f(model, th, kp);
                             return Complex{(Complex{0.0, 1.0} * x).real(), 0.0};
                         },
                         0.0, decay, contour.quad, &qerr)
                         .real() /
                     constants::pi;
        for (double kr : roots_below_vertex(model, th, m))
            val += kernel(Complex{kr, 0.0}).real();
        acc += w * val;
        err_acc += w * qerr / constants::pi;
    }
    acc /= constants::pi;
    err_acc /= constants::pi;

    if (nb && m > 0.0) {
        double b = 0.0;
        for (const auto& [th, w] : gauss_legendre(32, 0.0, nb->theta_c)) {
            const double kap = kappa_of_theta(model, th, nb->kappa_min);
            b += w * kernel(Complex{0.0, kap}).real();
        }
        acc += b / constants::pi;
    }
    if (err_out) *err_out = err_acc;
    return acc;
}

}  // namespace detail

// Temperature-dependent part of the free energy per unit area, Delta F / A.
inline double delta_f(const CombModel& model, double T, const ContourSpec& contour,
                      double* err_out = nullptr) {
    if (!(T > 0.0)) throw numerical_error("delta_f: T must be positive");
    const double m = contour.m_offset;
    return detail::thermal_contour_sum(
        model, contour, T, [&](Complex k) { return i3(k, m, T); }, err_out);
}

// S/A = -d(Delta F/A)/dT by Richardson central differences.
inline double entropy(const CombModel& model, double T, const ContourSpec& contour) {
    const double h = std::max(1e-3 * T, 1e-4);
    if (T - 2.0 * h <= 0.0) throw numerical_error("entropy: step collides with T = 0");
    return -central_derivative([&](double t) { return delta_f(model, t, contour); }, T, h);
}

// Same quantity with dI3/dT taken analytically under the integral sign.
inline double entropy_analytic(const CombModel& model, double T, const ContourSpec& contour,
                               double* err_out = nullptr) {
    if (!(T > 0.0)) throw numerical_error("entropy_analytic: T must be positive");
    const double m = contour.m_offset;
    return -detail::thermal_contour_sum(
        model, contour, T, [&](Complex k) { return i3_dT(k, m, T); }, err_out);
}

// P = -d(Delta F/A)/da; the mass and contour vertex are rebuilt at a +- h
// because kappa_min depends on the spacing.
inline double pressure(const CombModel& model, double T, const ContourSpec& contour,
                       bool include_vacuum_part = false) {
    const double h = 1e-3 * model.a;
    auto f_at = [&](double a) {
        CombModel mdl = model;
        mdl.a = a;
        ContourSpec c = contour;
        c.m_offset = mass(mdl);
        return delta_f(mdl, T, c);
    };
    double p = -central_derivative(f_at, model.a, h);
    if (include_vacuum_part) p += casimir_pressure_t0(model, contour);
    return p;
}

struct ThermoPoint {
    double T = 0.0;
    double delta_f_per_area = 0.0;
    double entropy_per_area = 0.0;
    double pressure = 0.0;
    double quad_error = 0.0;
};

inline ThermoPoint thermo_point(const CombModel& model, double T, const ContourSpec& contour,
                                bool include_vacuum_part = false) {
    ThermoPoint p;
    p.T = T;
    p.delta_f_per_area = delta_f(model, T, contour, &p.quad_error);
    p.entropy_per_area = entropy(model, T, contour);
    p.pressure = pressure(model, T, contour, include_vacuum_part);
    return p;
}

}  // namespace comb
