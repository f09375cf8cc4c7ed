// SPDX-License-Identifier: Apache-2.0
#pragma once

// Forward-mode differentiation types.
//
// Dual carries one directional derivative. Jet2<T> carries value, gradient and
// Hessian with respect to the ambient coordinates of R^n; with T = Dual it also
// carries one extra directional derivative of all of those, which is how third
// derivatives of support functions are obtained.

#include <array>
#include <cmath>

namespace bms {

inline constexpr int kMaxDim = 6;

struct Dual {
    double v = 0.0;
    double d = 0.0;

    Dual() = default;
    constexpr Dual(double value) : v(value) {}  // NOLINT(google-explicit-constructor)
    constexpr Dual(double value, double deriv) : v(value), d(deriv) {}

    Dual& operator+=(const Dual& o) { v += o.v; d += o.d; return *this; }
    Dual& operator-=(const Dual& o) { v -= o.v; d -= o.d; return *this; }
    Dual& operator*=(const Dual& o) { d = d * o.v + v * o.d; v *= o.v; return *this; }
    Dual& operator/=(const Dual& o) {
        d = (d * o.v - v * o.d) / (o.v * o.v);
        v /= o.v;
        return *this;
    }
};

inline Dual operator+(Dual a, const Dual& b) { return a += b; }
inline Dual operator-(Dual a, const Dual& b) { return a -= b; }
inline Dual operator*(Dual a, const Dual& b) { return a *= b; }
inline Dual operator/(Dual a, const Dual& b) { return a /= b; }
inline Dual operator-(const Dual& a) { return {-a.v, -a.d}; }
inline bool operator<(const Dual& a, const Dual& b) { return a.v < b.v; }
inline bool operator>(const Dual& a, const Dual& b) { return a.v > b.v; }

inline Dual exp(const Dual& a) { const double e = std::exp(a.v); return {e, e * a.d}; }
inline Dual log(const Dual& a) { return {std::log(a.v), a.d / a.v}; }
inline Dual sqrt(const Dual& a) { const double s = std::sqrt(a.v); return {s, 0.5 * a.d / s}; }
inline Dual pow(const Dual& a, double p) {
    return {std::pow(a.v, p), p * std::pow(a.v, p - 1.0) * a.d};
}
inline Dual abs(const Dual& a) { return a.v < 0 ? -a : a; }

inline double value_of(double x) { return x; }
inline double value_of(const Dual& x) { return x.v; }

template <class T>
struct Jet2 {
    int n = 0;
    T v{};
    std::array<T, kMaxDim> g{};
    std::array<T, kMaxDim * kMaxDim> h{};

    T& H(int i, int j) { return h[static_cast<std::size_t>(i * kMaxDim + j)]; }
    const T& H(int i, int j) const { return h[static_cast<std::size_t>(i * kMaxDim + j)]; }

    static Jet2 constant(int dim, T c) {
        Jet2 j;
        j.n = dim;
        j.v = c;
        return j;
    }

    static Jet2 variable(int dim, int k, T value) {
        Jet2 j;
        j.n = dim;
        j.v = value;
        j.g[static_cast<std::size_t>(k)] = T(1.0);
        return j;
    }

    Jet2& operator+=(const Jet2& o) {
        v += o.v;
        for (int i = 0; i < n; ++i) {
            g[i] += o.g[i];
            for (int k = 0; k < n; ++k) H(i, k) += o.H(i, k);
        }
        return *this;
    }
    Jet2& operator-=(const Jet2& o) {
        v -= o.v;
        for (int i = 0; i < n; ++i) {
            g[i] -= o.g[i];
            for (int k = 0; k < n; ++k) H(i, k) -= o.H(i, k);
        }
        return *this;
    }
    Jet2& operator*=(const T& s) {
        v *= s;
        for (int i = 0; i < n; ++i) {
            g[i] *= s;
            for (int k = 0; k < n; ++k) H(i, k) *= s;
        }
        return *this;
    }
    Jet2& operator+=(const T& s) { v += s; return *this; }
};

template <class T> Jet2<T> operator+(Jet2<T> a, const Jet2<T>& b) { return a += b; }
template <class T> Jet2<T> operator-(Jet2<T> a, const Jet2<T>& b) { return a -= b; }
template <class T> Jet2<T> operator*(Jet2<T> a, const T& s) { return a *= s; }
template <class T> Jet2<T> operator*(const T& s, Jet2<T> a) { return a *= s; }
template <class T> Jet2<T> operator+(Jet2<T> a, const T& s) { return a += s; }

template <class T>
Jet2<T> operator*(const Jet2<T>& a, const Jet2<T>& b) {
    Jet2<T> r;
    r.n = a.n;
    r.v = a.v * b.v;
    for (int i = 0; i < a.n; ++i) r.g[i] = a.v * b.g[i] + b.v * a.g[i];
    for (int i = 0; i < a.n; ++i)
        for (int k = 0; k < a.n; ++k)
            r.H(i, k) = a.v * b.H(i, k) + b.v * a.H(i, k) + a.g[i] * b.g[k] + b.g[i] * a.g[k];
    return r;
}

/// Chain rule for a scalar map with value f0, first derivative f1 and second f2.
template <class T>
Jet2<T> chain(const Jet2<T>& a, const T& f0, const T& f1, const T& f2) {
    Jet2<T> r;
    r.n = a.n;
    r.v = f0;
    for (int i = 0; i < a.n; ++i) r.g[i] = f1 * a.g[i];
    for (int i = 0; i < a.n; ++i)
        for (int k = 0; k < a.n; ++k) r.H(i, k) = f1 * a.H(i, k) + f2 * a.g[i] * a.g[k];
    return r;
}

template <class T>
Jet2<T> exp(const Jet2<T>& a) {
    using std::exp;
    const T e = exp(a.v);
    return chain(a, e, e, e);
}

template <class T>
Jet2<T> log(const Jet2<T>& a) {
    using std::log;
    const T inv = T(1.0) / a.v;
    return chain(a, log(a.v), inv, -(inv * inv));
}

template <class T>
Jet2<T> pow(const Jet2<T>& a, double p) {
    using std::pow;
    return chain(a, pow(a.v, p), T(p) * pow(a.v, p - 1.0), T(p * (p - 1.0)) * pow(a.v, p - 2.0));
}

}  // namespace bms
