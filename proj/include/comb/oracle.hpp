#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "comb/errors.hpp"
#include "comb/numerics.hpp"
#include "comb/scattering.hpp"
#include "comb/thermal.hpp"

namespace comb::oracle {

// Every function here verifies a main-path module without calling it; only the
// numerics primitives are shared.

template <class F>
std::vector<double> dense_scan_roots(F&& f, double lo, double hi, double step) {
    std::vector<double> out;
    double kp = lo, fp = f(lo);
    for (double k = lo + step; k <= hi; k += step) {
        const double fv = f(k);
        if (fp == 0.0)
            out.push_back(kp);
        else if ((fp > 0) != (fv > 0))
            out.push_back(find_root(f, {kp, k}, 1e-12));
        kp = k;
        fp = fv;
    }
    return out;
}

// Bloch discriminant from the model-specific secular forms written out
// algebraically, bypassing the scattering-amplitude route.
inline Complex discriminant(const CombModel& model, Complex k) {
    const double a = model.a;
    if (model.is_pt()) {
        const double eps = std::get<TruncatedPoschlTeller>(model.potential).eps;
        const double tau = std::tanh(0.5 * eps);
        const double lam = 1.0 - tau * tau;
        const double ch = std::cosh(eps);
        const Complex k2 = k * k;
        const Complex ups =
            2.0 * k * tau * (1.0 + k2 + k2 * ch) + lam * std::cos(k * eps) * std::sin(k * eps);
        const Complex sig = k2 * (3.0 + k2) + k2 * (k2 - 1.0) * ch +
                            lam * std::sin(k * eps) * std::sin(k * eps);
        return (sig * std::cos(k * a) - ups * std::sin(k * a)) / (k2 * (k2 + 1.0) * (1.0 + ch));
    }
    const auto& dd = std::get<DeltaDeltaPrime>(model.potential);
    const double g = dd.w0 / (1.0 + dd.w1 * dd.w1);
    const double om = (dd.w1 * dd.w1 - 1.0) / (dd.w1 * dd.w1 + 1.0);
    return -(std::cos(k * a) + 0.5 * g * std::sin(k * a) / k) / om;
}

inline double discriminant_real(const CombModel& model, double k) {
    return discriminant(model, {k, 0.0}).real();
}

struct OdeScatterSetup {
    double grid_step = 0.0;  // 0: pick eps/400
};

// RK4 integration of -psi'' - 2 sech^2(z) psi = k^2 psi across the support,
// matched to plane waves at +-eps/2.
inline ScatteringAmplitudes transfer_matrix_amplitudes(double eps, double k,
                                                       OdeScatterSetup setup = {}) {
    if (!(k > 0.0)) throw numerical_error("transfer_matrix_amplitudes: k must be positive");
    double hs = setup.grid_step > 0.0 ? setup.grid_step : eps / 400.0;
    const int n = std::max(1, static_cast<int>(std::ceil(eps / hs)));
    hs = eps / n;
    const double e = k * k;
    auto rhs = [&](double z, double y0, double y1, double& d0, double& d1) {
        const double c = std::cosh(z);
        d0 = y1;
        d1 = (-2.0 / (c * c) - e) * y0;
    };
    double m00 = 1.0, m10 = 0.0, m01 = 0.0, m11 = 1.0;
    for (int col = 0; col < 2; ++col) {
        double y0 = (col == 0) ? 1.0 : 0.0;
        double y1 = (col == 0) ? 0.0 : 1.0;
        double z = -0.5 * eps;
        for (int i = 0; i < n; ++i) {
            double a0, a1, b0, b1, c0, c1, d0, d1;
            rhs(z, y0, y1, a0, a1);
            rhs(z + 0.5 * hs, y0 + 0.5 * hs * a0, y1 + 0.5 * hs * a1, b0, b1);
            rhs(z + 0.5 * hs, y0 + 0.5 * hs * b0, y1 + 0.5 * hs * b1, c0, c1);
            rhs(z + hs, y0 + hs * c0, y1 + hs * c1, d0, d1);
            y0 += hs / 6.0 * (a0 + 2.0 * b0 + 2.0 * c0 + d0);
            y1 += hs / 6.0 * (a1 + 2.0 * b1 + 2.0 * c1 + d1);
            z += hs;
        }
        if (col == 0) { m00 = y0; m10 = y1; } else { m01 = y0; m11 = y1; }
    }
    if (std::abs(m00 * m11 - m01 * m10 - 1.0) > 1e-8)
        throw numerical_error("transfer_matrix_amplitudes: Wronskian drift, step too large");
    // psi = e^{ikz} + r e^{-ikz} on the left, t e^{ikz} on the right
    const Complex I{0.0, 1.0};
    const Complex el = std::exp(-I * k * (0.5 * eps));  // e^{ik zl}, zl = -eps/2
    const Complex er = std::exp(I * k * (0.5 * eps));   // e^{ik zr}
    const Complex A0 = el, A1 = I * k * el;
    const Complex B0 = 1.0 / el, B1 = -I * k / el;
    const Complex C0 = er, C1 = I * k * er;
    const Complex MA0 = m00 * A0 + m01 * A1, MA1 = m10 * A0 + m11 * A1;
    const Complex MB0 = m00 * B0 + m01 * B1, MB1 = m10 * B0 + m11 * B1;
    // MA + r MB = t C
    const Complex det = MB0 * (-C1) - (-C0) * MB1;
    const Complex r = ((-MA0) * (-C1) - (-C0) * (-MA1)) / det;
    const Complex t = (MB0 * (-MA1) - (-MA0) * MB1) / det;
    return {t, r, r};
}

// Pre-contour representation of Delta F / A: I3 summed over real dispersion
// roots per theta node, plus the negative-band term, all through the
// algebraic discriminant.
inline double band_sum_free_energy(const CombModel& model, double T, int n_bands,
                                   double* tail_estimate = nullptr) {
    const double a = model.a;
    const double kmax = n_bands * constants::pi / a;
    const double step = constants::pi / (2000.0 * a);

    double m = 0.0, theta_c = 0.0;
    auto g1 = [&](double kap) { return discriminant(model, {0.0, kap}).real() - 1.0; };
    double pk = 1e-6, pg = g1(pk);
    for (double kap = 0.01; kap < 5.0; kap += 0.01) {
        const double gv = g1(kap);
        if ((pg > 0) != (gv > 0)) {
            m = find_root(g1, {pk, kap}, 1e-13);
            break;
        }
        pk = kap;
        pg = gv;
    }
    if (m > 0.0) {
        const double h0 = discriminant_real(model, 1e-4);
        theta_c = std::abs(h0) <= 1.0 ? std::acos(h0) : constants::pi;
    }

    // the lowest root appears at k = 0 when theta passes theta_c; split the
    // theta integral there to keep the panels smooth
    std::vector<std::pair<double, double>> panels;
    if (m > 0.0 && theta_c > 1e-10 && theta_c < constants::pi - 1e-10)
        panels = {{0.0, theta_c}, {theta_c, constants::pi}};
    else
        panels = {{0.0, constants::pi}};
    double acc = 0.0;
    for (const auto& [plo, phi] : panels) {
        for (const auto& [th, w] : gauss_legendre(48, plo, phi)) {
            auto f = [&](double k) { return std::cos(th) - discriminant_real(model, k); };
            double s = 0.0;
            for (double kr : dense_scan_roots(f, 0.5 * step, kmax, step))
                s += i3(Complex{kr, 0.0}, m, T).real();
            acc += w * s;
        }
    }
    acc /= constants::pi;
    if (m > 0.0) {
        double b = 0.0;
        for (const auto& [th, w] : gauss_legendre(48, 0.0, theta_c)) {
            auto g = [&](double kap) {
                return discriminant(model, {0.0, kap}).real() - std::cos(th);
            };
            const double kap = (g(1e-9) >= 0.0) ? 0.0 : find_root(g, {1e-9, m + 1e-9}, 1e-13);
            b += w * i3(Complex{0.0, kap}, m, T).real();
        }
        acc += b / constants::pi;
    }
    if (tail_estimate) *tail_estimate = std::abs(i3(Complex{kmax, 0.0}, m, T).real());
    return acc;
}

}  // namespace comb::oracle
