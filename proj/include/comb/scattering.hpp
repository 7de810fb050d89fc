#pragma once

#include <cmath>
#include <complex>
#include <variant>
#include <vector>

#include "comb/errors.hpp"
#include "comb/jet.hpp"
#include "comb/numerics.hpp"
#include "comb/specialfn.hpp"

namespace comb {

struct DeltaDeltaPrime {
    double w0 = 0.0;
    double w1 = 0.0;
};

struct TruncatedPoschlTeller {
    double eps = 0.5;
};

// Lattice spacing plus the node potential; the single source of physical
// parameters for everything downstream.
struct CombModel {
    double a = 1.0;
    std::variant<DeltaDeltaPrime, TruncatedPoschlTeller> potential{DeltaDeltaPrime{}};

    bool is_pt() const { return std::holds_alternative<TruncatedPoschlTeller>(potential); }
};

struct DerivedCouplings {
    double gamma = 0.0;      // w0 / (1 + w1^2)
    double omega = 0.0;      // (w1^2 - 1) / (w1^2 + 1)
    double lambda_pt = 0.0;  // 1 - tanh^2(eps/2)
};

inline DerivedCouplings derived_couplings(const CombModel& model) {
    DerivedCouplings d;
    if (model.is_pt()) {
        const auto& pt = std::get<TruncatedPoschlTeller>(model.potential);
        const double tau = std::tanh(0.5 * pt.eps);
        d.lambda_pt = 1.0 - tau * tau;
    } else {
        const auto& dd = std::get<DeltaDeltaPrime>(model.potential);
        d.gamma = dd.w0 / (1.0 + dd.w1 * dd.w1);
        d.omega = (dd.w1 * dd.w1 - 1.0) / (dd.w1 * dd.w1 + 1.0);
    }
    return d;
}

template <class S>
struct ScatteringAmplitudesT {
    S t, r_R, r_L;
};

using ScatteringAmplitudes = ScatteringAmplitudesT<Complex>;

namespace detail {

inline void check_denominator(Complex den, double scale, const char* what) {
    if (std::abs(den) < 1e-12 * scale) throw pole_proximity_error(what);
}

template <class S>
S pt_delta(double eps, const S& k) {
    const double tau = std::tanh(0.5 * eps);
    const double lam = 1.0 - tau * tau;
    const Complex i2eps{0.0, 2.0 * eps};
    const S b = S{lam} + S{2} * k * (k - Complex{0.0, tau});
    return -exp(i2eps * k) * S{lam * lam} + b * b;
}

}  // namespace detail

// Closed-form single-node scattering data, templated on the momentum scalar so
// jets propagate exact derivatives.  S is Complex or Jet<Complex>.
template <class S>
ScatteringAmplitudesT<S> amplitudes_t(const CombModel& model, const S& k) {
    const DerivedCouplings d = derived_couplings(model);
    ScatteringAmplitudesT<S> out;
    if (model.is_pt()) {
        const auto& pt = std::get<TruncatedPoschlTeller>(model.potential);
        const double eps = pt.eps;
        const double tau = std::tanh(0.5 * eps);
        const double lam = d.lambda_pt;
        const S delta = detail::pt_delta(eps, k);
        detail::check_denominator(value_of(delta), 1.0 + std::norm(value_of(k)),
                                  "amplitudes: PT denominator near zero");
        const Complex ie{0.0, eps};
        const S k2 = k * k;
        out.t = S{4} * k2 * (k2 + S{1}) / delta;
        const S r = (exp(ie * k) * S{lam} * (S{lam} + S{2} * k * (k + Complex{0.0, tau})) -
                     exp(-ie * k) * S{lam} * (S{lam} + S{2} * k * (k - Complex{0.0, tau}))) /
                    delta;
        out.r_R = r;
        out.r_L = r;
    } else {
        const Complex ig{0.0, d.gamma};
        const S den = ig + S{2} * k;
        detail::check_denominator(value_of(den), 1.0 + std::abs(value_of(k)),
                                  "amplitudes: momentum at the amplitude pole -i*gamma/2");
        const double s = std::sqrt(std::max(0.0, 1.0 - d.omega * d.omega));
        out.t = S{-2.0 * d.omega} * k / den;
        out.r_R = (Complex{0.0, -d.gamma} - S{2.0 * s} * k) / den;
        out.r_L = (Complex{0.0, -d.gamma} + S{2.0 * s} * k) / den;
    }
    return out;
}

inline ScatteringAmplitudes amplitudes(const CombModel& model, Complex k) {
    return amplitudes_t<Complex>(model, k);
}

// det S = t^2 - r_R r_L.  For the delta-delta' node this collapses to
// (2k - i gamma)/(2k + i gamma) independently of w1; the closed form is used
// because t^2 - r_R r_L cancels catastrophically near |w1| = 1.
template <class S>
S det_s_t(const CombModel& model, const S& k) {
    if (!model.is_pt()) {
        const DerivedCouplings d = derived_couplings(model);
        const Complex ig{0.0, d.gamma};
        const S den = S{2} * k + ig;
        detail::check_denominator(value_of(den), 1.0 + std::abs(value_of(k)),
                                  "det_s: momentum at the amplitude pole -i*gamma/2");
        return (S{2} * k - ig) / den;
    }
    const auto amp = amplitudes_t(model, k);
    return amp.t * amp.t - amp.r_R * amp.r_L;
}

inline Complex det_s(const CombModel& model, Complex k) { return det_s_t<Complex>(model, k); }

// Phase shift delta(k) = arg(det S)/2, unwrapped along the grid and anchored
// so that delta -> 0 at large k.
inline std::vector<double> phase_shift(const CombModel& model, const std::vector<double>& k_grid) {
    std::vector<double> out(k_grid.size());
    double prev = 0.0;
    for (std::size_t i = 0; i < k_grid.size(); ++i) {
        double d = 0.5 * std::arg(det_s(model, {k_grid[i], 0.0}));
        if (i > 0) {
            // move by multiples of pi onto the continuous branch
            d += constants::pi * std::round((prev - d) / constants::pi);
            if (std::abs(d - prev) > 0.5 * constants::pi)
                throw grid_too_coarse_error("phase_shift: jump above pi/2 between grid points");
        }
        out[i] = d;
        prev = d;
    }
    // continue the branch out to k = 1e3 where det S ~ 1, then remove the
    // accumulated multiple of pi
    double k = k_grid.back();
    while (k < 1e3) {
        const double kn = std::min(1e3, 2.0 * k);
        double d = 0.5 * std::arg(det_s(model, {kn, 0.0}));
        d += constants::pi * std::round((prev - d) / constants::pi);
        prev = d;
        k = kn;
    }
    const double offset = constants::pi * std::round(prev / constants::pi);
    if (offset != 0.0)
        for (double& v : out) v -= offset;
    return out;
}

// d delta / dk = (1/2i) d/dk log det S, by jet differentiation of the closed form.
inline Complex phase_shift_derivative(const CombModel& model, Complex k) {
    const auto j = det_s_t(model, Jet<Complex>::variable(k));
    return j.d / j.v / Complex{0.0, 2.0};
}

}  // namespace comb
