#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "comb/errors.hpp"
#include "comb/numerics.hpp"
#include "comb/scattering.hpp"

namespace comb {

// Bloch discriminant h_V(k) = (1/2t)[e^{-ika} + e^{ika}(t^2 - r_R r_L)].
template <class S>
S h_v_t(const CombModel& model, const S& k) {
    const auto amp = amplitudes_t(model, k);
    if (std::abs(value_of(amp.t)) < 1e-14)
        throw transparency_error("h_v: node potential is opaque (|t| ~ 0)");
    const S ds = det_s_t(model, k);
    return (exp(Complex{0.0, -model.a} * k) + exp(Complex{0.0, model.a} * k) * ds) /
           (S{2} * amp.t);
}

inline Complex h_v(const CombModel& model, Complex k) { return h_v_t<Complex>(model, k); }

// Secular function f_theta(k) = cos(theta) - h_V(k); zeros give the dispersion.
template <class S>
S secular_f(const CombModel& model, double theta, const S& k) {
    return S{std::cos(theta)} - h_v_t(model, k);
}

// The product f_theta * t in a form with no 1/t, regular even where t -> 0.
template <class S>
S secular_ft(const CombModel& model, double theta, const S& k) {
    const auto amp = amplitudes_t(model, k);
    const S ds = det_s_t(model, k);
    return amp.t * S{std::cos(theta)} -
           (exp(Complex{0.0, -model.a} * k) + exp(Complex{0.0, model.a} * k) * ds) / S{2};
}

// e^{ika} f_theta t: bounded in the upper half plane, where e^{-ika} in the
// unscaled product overflows once Im(k) a is large (big reference spacings).
template <class S>
S secular_ft_scaled(const CombModel& model, double theta, const S& k) {
    const auto amp = amplitudes_t(model, k);
    const S ds = det_s_t(model, k);
    const S phase = exp(Complex{0.0, model.a} * k);
    return amp.t * S{std::cos(theta)} * phase - (S{1} + phase * phase * ds) / S{2};
}

// k -> 0 limit of h_V by Richardson extrapolation in k^2 (h is even in k).
inline double h_v_at_zero(const CombModel& model) {
    const double k0 = 1e-3;
    const double h1 = h_v(model, {k0, 0.0}).real();
    const double h2 = h_v(model, {2.0 * k0, 0.0}).real();
    return (4.0 * h1 - h2) / 3.0;
}

inline double h_v_real(const CombModel& model, double k) { return h_v(model, {k, 0.0}).real(); }

inline double h_v_prime_real(const CombModel& model, double k) {
    return h_v_t(model, Jet<Complex>::variable({k, 0.0})).d.real();
}

// All k in (0, sqrt(e_max)] with |h_V| = 1.  The scan first locates extrema of
// h (sign changes of h'), then solves h = +-1 on each monotone segment; an
// extremum sitting on +-1 is a closed gap and is recorded as a double edge.
inline std::vector<double> band_edges(const CombModel& model, double e_max) {
    const double kmax = std::sqrt(e_max);
    const double step = constants::pi / (200.0 * model.a);
    std::vector<double> breaks{0.5 * step};
    double kp = 0.5 * step, dp = h_v_prime_real(model, kp);
    for (double k = 1.5 * step; k <= kmax + 0.5 * step; k += step) {
        const double d = h_v_prime_real(model, k);
        if (dp == 0.0 || (dp > 0) != (d > 0))
            breaks.push_back(find_root([&](double x) { return h_v_prime_real(model, x); },
                                       {kp, k}, 1e-13));
        kp = k;
        dp = d;
    }
    breaks.push_back(kmax);
    std::vector<double> edges;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double lo = breaks[i], hi = breaks[i + 1];
        if (hi - lo < 1e-12) continue;
        const double hl = h_v_real(model, lo), hh = h_v_real(model, hi);
        for (double lev : {1.0, -1.0}) {
            if ((hl - lev) * (hh - lev) < 0.0)
                edges.push_back(
                    find_root([&](double x) { return h_v_real(model, x) - lev; }, {lo, hi}, 1e-13));
        }
        // tangency at the right break point: a gap of zero width
        if (i + 2 < breaks.size() && std::abs(std::abs(hh) - 1.0) < 1e-9) {
            edges.push_back(hi);
            edges.push_back(hi);
        }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::remove_if(edges.begin(), edges.end(),
                               [&](double e) { return e <= 0.0 || e > kmax; }),
                edges.end());
    return edges;
}

namespace detail {

// Band intervals [k_lo, k_hi] with |h| <= 1, derived from the edge list.
inline std::vector<std::pair<double, double>> band_intervals(const CombModel& model,
                                                             std::size_t n_bands) {
    double e_max = std::pow((n_bands + 2) * constants::pi / model.a, 2);
    for (int attempt = 0; attempt < 6; ++attempt) {
        const auto edges = band_edges(model, e_max);
        std::vector<std::pair<double, double>> bands;
        double prev = 1e-9;
        for (std::size_t i = 0; i <= edges.size(); ++i) {
            const double nxt = (i < edges.size()) ? edges[i] : std::sqrt(e_max);
            if (nxt - prev > 1e-10) {
                const double mid = 0.5 * (prev + nxt);
                if (std::abs(h_v_real(model, mid)) <= 1.0) bands.emplace_back(prev, nxt);
            }
            prev = nxt;
        }
        if (bands.size() >= n_bands) {
            bands.resize(n_bands);
            return bands;
        }
        e_max *= 4.0;
    }
    throw numerical_error("band_intervals: could not collect the requested bands");
}

}  // namespace detail

// Lowest n real positive dispersion roots of cos(theta) - h_V(k) at fixed
// Bloch phase: one root per allowed band.
inline std::vector<double> dispersion(const CombModel& model, double theta, int n_bands) {
    const double th = std::clamp(std::abs(theta), 1e-9, constants::pi - 1e-9);
    const double ct = std::cos(th);
    auto f = [&](double k) { return ct - h_v_real(model, k); };
    std::vector<double> roots;
    // one extra interval because a partly negative band 1 may carry no real root
    const auto bands = detail::band_intervals(model, static_cast<std::size_t>(n_bands) + 1);
    for (const auto& [lo_raw, hi] : bands) {
        if (static_cast<int>(roots.size()) == n_bands) break;
        // below ~1e-4 the 0/0 structure of h_V at k = 0 amplifies rounding, so
        // the first band's endpoint is evaluated at the reliability floor
        const double lo = std::min(std::max(lo_raw, 1e-4), hi);
        const double flo = f(lo), fhi = f(hi);
        if (flo == 0.0 || std::abs(flo) < 1e-10)
            roots.push_back(lo);
        else if (fhi == 0.0 || std::abs(fhi) < 1e-10)
            roots.push_back(hi);
        else if ((flo > 0) != (fhi > 0))
            roots.push_back(find_root(f, {lo, hi}, 1e-12));
        // else: the band does not reach cos(theta) on the real axis; skip
    }
    return roots;
}

struct NegativeBand {
    double theta_c = 0.0;
    std::vector<std::pair<double, double>> kappa_samples;  // (theta, kappa)
    double kappa_min = 0.0;
};

// kappa solving cos(theta) = h_V(i kappa) for theta in [0, theta_c].
inline double kappa_of_theta(const CombModel& model, double theta, double kappa_min) {
    auto g = [&](double kap) { return h_v(model, {0.0, kap}).real() - std::cos(theta); };
    // below ~1e-4 the 0/0 structure of h_V at k = 0 amplifies rounding
    const double lo = 1e-4;
    if (g(lo) >= 0.0) return 0.0;
    return find_root(g, {lo, kappa_min * (1.0 + 1e-12) + 1e-13}, 1e-13);
}

// Negative-energy band data: present when h_V(i kappa) reaches 1 for some
// kappa > 0.
inline std::optional<NegativeBand> negative_band(const CombModel& model, int n_samples = 33) {
    if (!model.is_pt()) {
        const DerivedCouplings d = derived_couplings(model);
        if (std::abs(d.omega) < 1e-12) {
            // opaque node (|w1| = 1): flat bands, none negative for w0 > 0
            if (d.gamma >= 0.0) return std::nullopt;
            throw transparency_error("negative_band: opaque node with w0 < 0 unsupported");
        }
    }
    const double kappa_cap = 5.0;
    auto g = [&](double kap) { return h_v(model, {0.0, kap}).real() - 1.0; };
    // prime count: the grid then never lands exactly on k = i, where the PT
    // amplitudes have a removable 0/0 point
    const int n_scan = 997;
    double kappa_min = -1.0;
    double prev_k = kappa_cap / n_scan, prev_g = g(prev_k);
    for (int i = 2; i <= n_scan; ++i) {
        const double k = i * kappa_cap / n_scan, gv = g(k);
        if ((prev_g > 0) != (gv > 0)) {
            kappa_min = find_root(g, {prev_k, k}, 1e-13);
            break;
        }
        prev_k = k;
        prev_g = gv;
    }
    if (kappa_min < 0.0) return std::nullopt;
    NegativeBand nb;
    nb.kappa_min = kappa_min;
    const double h0 = h_v_at_zero(model);
    nb.theta_c = (std::abs(h0) <= 1.0) ? std::acos(h0) : constants::pi;
    nb.kappa_samples.reserve(n_samples);
    for (int j = 0; j < n_samples; ++j) {
        const double th = nb.theta_c * j / (n_samples - 1);
        const double kap = (j == 0) ? kappa_min
                           : (j == n_samples - 1 && std::abs(h0) <= 1.0)
                               ? 0.0
                               : kappa_of_theta(model, th, kappa_min);
        nb.kappa_samples.emplace_back(th, kap);
    }
    return nb;
}

// Unitarity mass m = kappa_min when a negative band exists, else 0.
inline double mass(const CombModel& model) {
    const auto nb = negative_band(model, 2);
    return nb ? nb->kappa_min : 0.0;
}

struct Band {
    int index = 0;
    std::vector<double> theta;
    std::vector<double> k;
    std::vector<double> energy;
};

struct BandStructure {
    std::vector<Band> bands;
    std::optional<NegativeBand> negative;
    double mass = 0.0;
};

inline BandStructure band_structure(const CombModel& model, int n_bands, int n_theta = 65) {
    BandStructure bs;
    bs.negative = negative_band(model, n_theta);
    bs.mass = bs.negative ? bs.negative->kappa_min : 0.0;
    bs.bands.resize(n_bands);
    for (int n = 0; n < n_bands; ++n) {
        bs.bands[n].index = n + 1;
        bs.bands[n].theta.reserve(n_theta);
    }
    for (int j = 0; j < n_theta; ++j) {
        const double th = constants::pi * j / (n_theta - 1);
        const auto ks = dispersion(model, th, n_bands);
        // below theta_c band 1 continues into the negative branch E = -kappa^2;
        // the real roots then fill bands 2..n so indices stay continuous
        const bool neg = bs.negative && th < bs.negative->theta_c;
        for (int n = 0; n < n_bands; ++n) {
            bs.bands[n].theta.push_back(th);
            double k, e;
            if (neg && n == 0) {
                const double kap = kappa_of_theta(model, th, bs.negative->kappa_min);
                k = kap;
                e = -kap * kap;
            } else {
                const int idx = neg ? n - 1 : n;
                k = idx < static_cast<int>(ks.size()) ? ks[idx] : 0.0;
                e = k * k;
            }
            bs.bands[n].k.push_back(k);
            bs.bands[n].energy.push_back(e);
        }
    }
    return bs;
}

}  // namespace comb
