#pragma once

#include <cmath>
#include <complex>

namespace comb {

// First-order jet (value + derivative) over a scalar field T.  Evaluating a
// closed-form expression on Jet<std::complex<double>> yields its exact
// derivative with respect to the seeded variable via the chain rule, which is
// how all log-derivatives along the contour rays are obtained.
template <class T>
struct Jet {
    T v{};  // value
    T d{};  // derivative

    Jet() = default;
    Jet(T value) : v(value), d(T{}) {}
    Jet(T value, T deriv) : v(value), d(deriv) {}

    static Jet variable(T value) { return Jet(value, T{1}); }
};

template <class T>
Jet<T> operator+(const Jet<T>& a, const Jet<T>& b) { return {a.v + b.v, a.d + b.d}; }
template <class T>
Jet<T> operator-(const Jet<T>& a, const Jet<T>& b) { return {a.v - b.v, a.d - b.d}; }
template <class T>
Jet<T> operator-(const Jet<T>& a) { return {-a.v, -a.d}; }
template <class T>
Jet<T> operator*(const Jet<T>& a, const Jet<T>& b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
template <class T>
Jet<T> operator/(const Jet<T>& a, const Jet<T>& b) {
    const T inv = T{1} / b.v;
    return {a.v * inv, (a.d - a.v * b.d * inv) * inv};
}

template <class T> Jet<T> operator+(const T& a, const Jet<T>& b) { return Jet<T>(a) + b; }
template <class T> Jet<T> operator+(const Jet<T>& a, const T& b) { return a + Jet<T>(b); }
template <class T> Jet<T> operator-(const T& a, const Jet<T>& b) { return Jet<T>(a) - b; }
template <class T> Jet<T> operator-(const Jet<T>& a, const T& b) { return a - Jet<T>(b); }
template <class T> Jet<T> operator*(const T& a, const Jet<T>& b) { return Jet<T>(a) * b; }
template <class T> Jet<T> operator*(const Jet<T>& a, const T& b) { return a * Jet<T>(b); }
template <class T> Jet<T> operator/(const T& a, const Jet<T>& b) { return Jet<T>(a) / b; }
template <class T> Jet<T> operator/(const Jet<T>& a, const T& b) { return a / Jet<T>(b); }

template <class T>
Jet<T> exp(const Jet<T>& a) {
    using std::exp;
    const T e = exp(a.v);
    return {e, e * a.d};
}

template <class T>
Jet<T> cos(const Jet<T>& a) {
    using std::cos;
    using std::sin;
    return {cos(a.v), -sin(a.v) * a.d};
}

template <class T>
Jet<T> sin(const Jet<T>& a) {
    using std::cos;
    using std::sin;
    return {sin(a.v), cos(a.v) * a.d};
}

template <class T>
Jet<T> sqrt(const Jet<T>& a) {
    using std::sqrt;
    const T s = sqrt(a.v);
    return {s, a.d / (T{2} * s)};
}

// Convenience accessors so that code templated on the scalar works for both
// plain scalars and jets.
template <class T> T value_of(const T& x) { return x; }
template <class T> T value_of(const Jet<T>& x) { return x.v; }

}  // namespace comb
