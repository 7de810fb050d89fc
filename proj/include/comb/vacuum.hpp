#pragma once

#include <cmath>
#include <vector>

#include "comb/errors.hpp"
#include "comb/numerics.hpp"
#include "comb/specialfn.hpp"
#include "comb/spectrum.hpp"

namespace comb {

// Wedge contour with vertex at the unitarity mass: rays k = m + xi e^{+-i gamma}.
struct ContourSpec {
    double gamma_angle = constants::pi / 8.0;
    double m_offset = 0.0;
    QuadratureSpec quad{1e-8, 1e-12, 4000};
    int theta_nodes = 64;
    bool two_ray_debug = false;
};

struct VacuumResult {
    double e0_per_area = 0.0;
    double bound_part = 0.0;
    double contour_part = 0.0;
    double im_residue = 0.0;
    double quad_error = 0.0;
};

namespace detail {

inline void check_contour(const ContourSpec& c) {
    if (!(c.gamma_angle > 0.0 && c.gamma_angle < constants::pi / 4.0))
        throw numerical_error("contour: gamma_angle must lie strictly inside (0, pi/4)");
}

// log-derivative of f_theta * t at complex k, via a jet through the closed
// forms; the product form stays regular where t alone vanishes.
inline Complex dlog_ft(const CombModel& model, double theta, Complex k) {
    const auto j = secular_ft(model, theta, Jet<Complex>::variable(k));
    if (std::abs(j.v) < 1e-13)
        throw contour_crossing_error("vacuum: secular zero on the integration ray");
    return j.d / j.v;
}

// upper-ray integrand after dominant (a) and subdominant (log t) subtraction;
// -ia - dlog(f t) collapses to -dlog(e^{ika} f t), whose argument stays
// bounded on the upper ray for any spacing
inline Complex omega_plus(const CombModel& model, double theta, double m, double gamma,
                          double xi) {
    const Complex eig = std::polar(1.0, gamma);
    const Complex kp = m + xi * eig;
    const auto j = secular_ft_scaled(model, theta, Jet<Complex>::variable(kp));
    if (std::abs(j.v) < 1e-13)
        throw contour_crossing_error("vacuum: secular zero on the integration ray");
    return branched_power_3_2(m, kp) * eig * (-j.d / j.v);
}

// lower-ray pieces, used only on the debug path
inline Complex omega_minus(const CombModel& model, double theta, double m, double gamma,
                           double xi) {
    const Complex eig = std::polar(1.0, -gamma);
    const Complex km = m + xi * eig;
    const Complex sub = Complex{0.0, model.a} - dlog_ft(model, theta, km);
    return branched_power_3_2(m, km) * eig * sub;
}

inline Complex lambda_minus(const CombModel& model, double m, double gamma, double xi) {
    const Complex eig = std::polar(1.0, -gamma);
    const Complex km = m + xi * eig;
    const auto j = det_s_t(model, Jet<Complex>::variable(km));
    return branched_power_3_2(m, km) * eig * j.d / j.v;
}

// combined lower-ray term -(omega_minus + lambda_minus): the log-derivative
// factors cancel to an exponentially small remainder, which must happen
// before the cubically growing power factor multiplies the rounding noise
inline Complex lower_ray_combined(const CombModel& model, double theta, double m, double gamma,
                                  double xi) {
    const Complex eig = std::polar(1.0, -gamma);
    const Complex km = m + xi * eig;
    const auto jf = secular_ft(model, theta, Jet<Complex>::variable(km));
    if (std::abs(jf.v) < 1e-13)
        throw contour_crossing_error("vacuum: secular zero on the integration ray");
    const auto js = det_s_t(model, Jet<Complex>::variable(km));
    const Complex sub = Complex{0.0, model.a} - jf.d / jf.v + js.d / js.v;
    return -branched_power_3_2(m, km) * eig * sub;
}

// real dispersion roots excluded by the wedge vertex sitting at m > 0
inline std::vector<double> roots_below_vertex(const CombModel& model, double theta, double m) {
    std::vector<double> out;
    if (m <= 0.0) return out;
    auto f = [&](double k) {
        return std::cos(theta) - h_v_real(model, k);
    };
    const double step = std::min(constants::pi / (2000.0 * model.a), m / 50.0);
    double kp = 0.5 * step, fp = f(kp);
    for (double k = 1.5 * step; k < m; k += step) {
        const double fv = f(k);
        if ((fp > 0) != (fv > 0)) out.push_back(find_root(f, {kp, k}, 1e-13));
        kp = k;
        fp = fv;
    }
    // final partial interval up to the vertex: a root just below m would
    // otherwise be dropped while its pole still sits off the ray
    const double ke = m * (1.0 - 1e-12);
    if (ke > kp) {
        const double fe = f(ke);
        if ((fp > 0) != (fe > 0)) out.push_back(find_root(f, {kp, ke}, 1e-13));
    }
    return out;
}

// The theta integrand is non-smooth at two interior points when m > 0: at
// theta_c the lowest real root appears at k = 0 (a jump, balanced by the
// bound-band term), and at arccos(h_V(m)) a root crosses the contour vertex
// (a kink between ray and excluded-root pieces).  Panels split there restore
// the nominal Gauss-Legendre rate.
inline std::vector<std::pair<double, double>> theta_panels(
    const CombModel& model, double m, const std::optional<NegativeBand>& nb) {
    std::vector<double> pts{0.0, constants::pi};
    if (nb && nb->theta_c > 1e-10 && nb->theta_c < constants::pi - 1e-10)
        pts.push_back(nb->theta_c);
    if (m > 0.0) {
        const double hm = h_v_real(model, m);
        if (std::abs(hm) < 1.0) pts.push_back(std::acos(hm));
    }
    std::sort(pts.begin(), pts.end());
    std::vector<std::pair<double, double>> panels;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        if (pts[i + 1] - pts[i] > 1e-10) panels.emplace_back(pts[i], pts[i + 1]);
    return panels;
}

inline double bound_band_integral(const CombModel& model, const NegativeBand& nb, double m,
                                  int nodes) {
    double acc = 0.0;
    for (const auto& [th, w] : gauss_legendre(nodes, 0.0, nb.theta_c)) {
        const double kap = kappa_of_theta(model, th, nb.kappa_min);
        acc += w * std::pow(std::max(m * m - kap * kap, 0.0), 1.5);
    }
    return -acc / (6.0 * constants::pi * constants::pi);
}

}  // namespace detail

// Zero-temperature Casimir energy per unit area via the rotated-contour
// representation with dominant/subdominant subtraction taken in the large
// reference-spacing limit.
inline VacuumResult casimir_energy(const CombModel& model, const ContourSpec& contour) {
    detail::check_contour(contour);
    const double m = contour.m_offset;
    const double gamma = contour.gamma_angle;
    const auto nb = negative_band(model, 2);
    if (nb && m < nb->kappa_min - 1e-9)
        throw unitarity_violation_error(
            "casimir_energy: contour vertex below kappa_min of the negative band");

    VacuumResult res;
    if (nb && m > 0.0) res.bound_part = detail::bound_band_integral(model, *nb, m, 32);

    const double decay = 1.0 / (model.a * std::sin(gamma));
    Complex acc{};
    double err_acc = 0.0;
    std::vector<std::pair<double, double>> nodes;
    for (const auto& [plo, phi] : detail::theta_panels(model, m, nb))
        for (const auto& nw : gauss_legendre(contour.theta_nodes, plo, phi))
            nodes.push_back(nw);
    for (const auto& [th, w] : nodes) {
        double qerr = 0.0;
        Complex band;
        if (contour.two_ray_debug) {
            // The bracket decays like xi^3 e^{-a xi sin gamma} and sits on a
            // rounding-noise floor, so the tail cutoff is computed from that
            // bound instead of probed.
            double xmax = decay;
            while (std::pow(m + xmax, 3.0) * std::exp(-model.a * std::sin(gamma) * xmax) >
                       contour.quad.abs_tol &&
                   xmax < 400.0 * decay)
                xmax += decay;
            QuadratureSpec dq = contour.quad;
            dq.abs_tol = std::max(dq.abs_tol, 1e-10);
            band = integrate(
                       [&](double xi) {
                           return (detail::omega_plus(model, th, m, gamma, xi) +
                                   detail::lower_ray_combined(model, th, m, gamma, xi)) /
                                  Complex{0.0, 2.0};
                       },
                       0.0, xmax, dq, &qerr) /
                   constants::pi;
        } else {
            band = integrate_semi_infinite(
                       [&](double xi) {
                           return Complex{
                               detail::omega_plus(model, th, m, gamma, xi).imag(), 0.0};
                       },
                       0.0, decay, contour.quad, &qerr) /
                   constants::pi;
        }
        for (double kr : detail::roots_below_vertex(model, th, m))
            band += std::pow(m * m + kr * kr, 1.5);
        acc += w * band;
        err_acc += w * qerr / constants::pi;
    }
    const double scale = 1.0 / (6.0 * constants::pi * constants::pi);
    res.contour_part = -scale * acc.real();
    res.im_residue = scale * std::abs(acc.imag());
    res.quad_error = scale * err_acc;
    res.e0_per_area = res.bound_part + res.contour_part;
    return res;
}

// Diagnostic path keeping the reference lattice at finite spacing a0: the
// subtraction evaluated on the a0 lattice is added back instead of dropped.
inline VacuumResult casimir_energy_with_reference(const CombModel& model,
                                                  const ContourSpec& contour, double a0) {
    detail::check_contour(contour);
    const double m = contour.m_offset;
    const double gamma = contour.gamma_angle;
    CombModel ref = model;
    ref.a = a0;
    VacuumResult res;
    const double decay = 1.0 / (model.a * std::sin(gamma));
    Complex acc{};
    double err_acc = 0.0;
    for (const auto& [th, w] : gauss_legendre(contour.theta_nodes, 0.0, constants::pi)) {
        double qerr = 0.0;
        Complex band = integrate_semi_infinite(
                           [&](double xi) {
                               const Complex d = detail::omega_plus(model, th, m, gamma, xi) -
                                                 detail::omega_plus(ref, th, m, gamma, xi);
                               return Complex{d.imag(), 0.0};
                           },
                           0.0, decay, contour.quad, &qerr) /
                       constants::pi;
        acc += w * band;
        err_acc += w * qerr / constants::pi;
    }
    const double scale = 1.0 / (6.0 * constants::pi * constants::pi);
    res.contour_part = -scale * acc.real();
    res.quad_error = scale * err_acc;
    res.e0_per_area = res.contour_part;
    return res;
}

// -dE0/da at fixed couplings; the contour vertex follows the mass at a +- h.
inline double casimir_pressure_t0(const CombModel& model, const ContourSpec& contour) {
    detail::check_contour(contour);
    const double h = 1e-3 * model.a;
    auto e0_at = [&](double a) {
        CombModel mdl = model;
        mdl.a = a;
        ContourSpec c = contour;
        c.m_offset = mass(mdl);
        return casimir_energy(mdl, c).e0_per_area;
    };
    return -central_derivative(e0_at, model.a, h);
}

}  // namespace comb
