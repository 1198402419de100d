#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <queue>
#include <vector>

#include "qtoken/errors.hpp"

namespace qtoken::quad {

// 15-point Kronrod extension of the 7-point Gauss rule.
struct GK15 {
    static constexpr std::array<double, 8> xk = {
        0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
        0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
        0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
        0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
    static constexpr std::array<double, 8> wk = {
        0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
        0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
        0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
        0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
    static constexpr std::array<double, 4> wg = {
        0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
        0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
};

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }
template <class T, std::size_t N>
double magnitude(const std::array<T, N>& v) {
    double m = 0.0;
    for (const auto& x : v) m = std::max(m, magnitude(x));
    return m;
}

template <class V>
struct Result {
    V value{};
    double error = 0.0;
    int evaluations = 0;
};

struct Options {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_intervals = 4000;
};

namespace detail {

template <class V>
V scaled(const V& v, double s) {
    if constexpr (requires { v.size(); }) {
        V out = v;
        for (auto& x : out) x *= s;
        return out;
    } else {
        return v * s;
    }
}

template <class V>
void accumulate(V& a, const V& b, double s) {
    if constexpr (requires { a.size(); }) {
        for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i] * s;
    } else {
        a += b * s;
    }
}

template <class V>
V difference(const V& a, const V& b) {
    if constexpr (requires { a.size(); }) {
        V out = a;
        for (std::size_t i = 0; i < a.size(); ++i) out[i] -= b[i];
        return out;
    } else {
        return a - b;
    }
}

template <class V>
struct Segment {
    double a, b;
    V value;
    double error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

template <class V, class F>
Segment<V> gk15(F& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    V fc = f(c);
    V kron = scaled(fc, GK15::wk[7]);
    V gauss = scaled(fc, GK15::wg[3]);
    for (int j = 0; j < 7; ++j) {
        const double dx = h * GK15::xk[j];
        V f1 = f(c - dx), f2 = f(c + dx);
        accumulate(kron, f1, GK15::wk[j]);
        accumulate(kron, f2, GK15::wk[j]);
        if (j % 2 == 1) {
            accumulate(gauss, f1, GK15::wg[j / 2]);
            accumulate(gauss, f2, GK15::wg[j / 2]);
        }
    }
    V value = scaled(kron, h);
    const double err = magnitude(difference(value, scaled(gauss, h)));
    return {a, b, value, err};
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod over [breaks.front(), breaks.back()].
// Interior breakpoints seed the initial partition.
template <class V, class F>
Result<V> integrate(F&& f, std::vector<double> breaks, const Options& opt = {}) {
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    if (breaks.size() < 2) throw DomainError("quadrature needs a non-empty interval");

    std::priority_queue<detail::Segment<V>> heap;
    V total{};
    double err = 0.0;
    int evals = 0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        auto s = detail::gk15<V>(f, breaks[i], breaks[i + 1]);
        evals += 15;
        detail::accumulate(total, s.value, 1.0);
        err += s.error;
        heap.push(std::move(s));
    }
    while (err > std::max(opt.abs_tol, opt.rel_tol * magnitude(total))) {
        if (static_cast<int>(heap.size()) >= opt.max_intervals)
            throw NumericalError("adaptive quadrature did not converge");
        auto worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b))
            throw NumericalError("adaptive quadrature interval underflow");
        auto l = detail::gk15<V>(f, worst.a, mid);
        auto r = detail::gk15<V>(f, mid, worst.b);
        evals += 30;
        detail::accumulate(total, worst.value, -1.0);
        detail::accumulate(total, l.value, 1.0);
        detail::accumulate(total, r.value, 1.0);
        err += l.error + r.error - worst.error;
        heap.push(std::move(l));
        heap.push(std::move(r));
    }
    // recompute the sum to shed accumulated rounding from the running updates
    V clean{};
    double clean_err = 0.0;
    while (!heap.empty()) {
        detail::accumulate(clean, heap.top().value, 1.0);
        clean_err += heap.top().error;
        heap.pop();
    }
    return {clean, clean_err, evals};
}

// Gauss-Hermite nodes and weights for the weight exp(-x^2).
struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
Rule gauss_hermite(int order);
Rule gauss_legendre(int order);

}  // namespace qtoken::quad
