#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include "comb/errors.hpp"

namespace comb {

using Complex = std::complex<double>;

struct QuadratureSpec {
    double rel_tol = 1e-8;
    double abs_tol = 1e-12;
    int max_subdivisions = 4000;
};

struct RootBracket {
    double lo;
    double hi;
};

namespace detail {

// Gauss 7 / Kronrod 15 nodes and weights on [-1, 1].
inline constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <class F>
Complex gk15(F& f, double lo, double hi, double& err) {
    const double c = 0.5 * (lo + hi);
    const double h = 0.5 * (hi - lo);
    Complex fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * kKronrodNodes[i]);
        fv[14 - i] = f(c + h * kKronrodNodes[i]);
    }
    fv[7] = f(c);
    Complex kres{};
    for (int i = 0; i < 7; ++i) kres += kKronrodWeights[i] * (fv[i] + fv[14 - i]);
    kres += kKronrodWeights[7] * fv[7];
    Complex gres{};
    for (int i = 0; i < 3; ++i) gres += kGaussWeights[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
    gres += kGaussWeights[3] * fv[7];
    err = std::abs(h) * std::abs(kres - gres);
    return h * kres;
}

struct Interval {
    double lo, hi, err;
    Complex val;
};

}  // namespace detail

// Adaptive Gauss-Kronrod quadrature of a complex-valued integrand on [lo, hi].
// The optional err_out receives the accumulated error estimate.
template <class F>
Complex integrate(F&& f, double lo, double hi, const QuadratureSpec& spec = {},
                  double* err_out = nullptr) {
    if (lo == hi) {
        if (err_out) *err_out = 0.0;
        return {};
    }
    std::vector<detail::Interval> work;
    double e0;
    Complex v0 = detail::gk15(f, lo, hi, e0);
    work.push_back({lo, hi, e0, v0});
    int splits = 0;
    for (;;) {
        Complex total{};
        double total_err = 0.0;
        for (const auto& iv : work) {
            total += iv.val;
            total_err += iv.err;
        }
        const double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
        if (total_err <= tol) {
            if (err_out) *err_out = total_err;
            return total;
        }
        if (splits >= spec.max_subdivisions)
            throw budget_exceeded_error("integrate: subdivision budget exhausted");
        // split the worst interval
        auto worst = std::max_element(work.begin(), work.end(),
                                      [](const auto& a, const auto& b) { return a.err < b.err; });
        const double a = worst->lo, b = worst->hi, m = 0.5 * (a + b);
        double e1, e2;
        Complex v1 = detail::gk15(f, a, m, e1);
        Complex v2 = detail::gk15(f, m, b, e2);
        *worst = {a, m, e1, v1};
        work.push_back({m, b, e2, v2});
        ++splits;
    }
}

// Quadrature over [lo, inf) of an (at least) exponentially decaying integrand.
// The cutoff is chosen from probed magnitudes and the decay scale so the
// neglected tail is below abs_tol.
template <class F>
Complex integrate_semi_infinite(F&& f, double lo, double decay_scale,
                                const QuadratureSpec& spec = {}, double* err_out = nullptr) {
    const double d = decay_scale > 0 ? decay_scale : 1.0;
    // Probe outward until two consecutive samples put the exponential tail
    // bound |f| * d below tolerance (two, so a zero crossing cannot fake decay).
    const double floor = std::max(spec.abs_tol, 1e-300);
    double x = lo + 2.0 * d;
    double prev = std::abs(f(x));
    int grow = 0;
    for (;;) {
        x += 2.0 * d;
        const double cur = std::abs(f(x));
        if (std::max(cur, prev) * d <= 0.01 * floor) break;
        if (cur > 4.0 * prev + floor && ++grow > 3)
            throw tail_estimate_error("integrate_semi_infinite: integrand not decaying");
        prev = cur;
        if (x > lo + 2000.0 * d)
            throw tail_estimate_error("integrate_semi_infinite: no usable tail cutoff found");
    }
    return integrate(std::forward<F>(f), lo, x, spec, err_out);
}

// Brent-style bracketed root finding: bisection with inverse quadratic
// interpolation / secant acceleration.
template <class F>
double find_root(F&& f, RootBracket bracket, double tol = 1e-12) {
    double a = bracket.lo, b = bracket.hi;
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if ((fa > 0) == (fb > 0))
        throw no_sign_change_error("find_root: no sign change across bracket");
    double c = a, fc = fa, d = b - a, e = d;
    for (int it = 0; it < 200; ++it) {
        if ((fb > 0) == (fc > 0)) {
            c = a; fc = fa; d = b - a; e = d;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) + 0.5 * tol;
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) return b;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double p, q;
            const double s = fb / fa;
            if (a == c) {  // secant
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {  // inverse quadratic
                const double qq = fa / fc, r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
                e = d; d = p / q;
            } else {
                d = xm; e = d;
            }
        } else {
            d = xm; e = d;
        }
        a = b; fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0 ? tol1 : -tol1);
        fb = f(b);
    }
    return b;
}

// Symmetric difference quotient, optionally Richardson-extrapolated with
// steps h and h/2.
template <class F>
double central_derivative(F&& f, double x, double h, bool richardson = true) {
    const double d1 = (f(x + h) - f(x - h)) / (2.0 * h);
    if (!richardson) return d1;
    const double h2 = 0.5 * h;
    const double d2 = (f(x + h2) - f(x - h2)) / (2.0 * h2);
    return (4.0 * d2 - d1) / 3.0;
}

// Gauss-Legendre nodes and weights on [a, b], by Newton iteration on the
// Legendre recurrence.
inline std::vector<std::pair<double, double>> gauss_legendre(int n, double a, double b) {
    std::vector<std::pair<double, double>> out(n);
    const double xm = 0.5 * (b + a), xl = 0.5 * (b - a);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            const double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) < 1e-15) break;
        }
        const double w = 2.0 * xl / ((1.0 - z * z) * pp * pp);
        out[i] = {xm - xl * z, w};
        out[n - 1 - i] = {xm + xl * z, w};
    }
    return out;
}

}  // namespace comb
