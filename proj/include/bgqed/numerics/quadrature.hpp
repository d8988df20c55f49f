#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <vector>

#include "../errors.hpp"

namespace bgqed::num {

namespace detail {

// Gauss-Kronrod 7/15 abscissae and weights.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

inline Segment gk15(const std::function<double(double)>& f, double a, double b) {
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double fc = f(c);
    double rk = fc * kWgk[7];
    double rg = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        double dx = h * kXgk[j];
        double s = f(c - dx) + f(c + dx);
        rk += kWgk[j] * s;
        if (j % 2 == 1) rg += kWg[j / 2] * s;
    }
    return {a, b, rk * h, std::abs((rk - rg) * h)};
}

} // namespace detail

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    int evaluations = 0;
};

// Globally adaptive Gauss-Kronrod on a finite interval. Splits the segment
// with the largest error estimate until the summed error falls below
// max(abs_tol, rel_tol*|I|).
inline QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                            double abs_tol = 1e-10, double rel_tol = 1e-10,
                            int max_segments = 4000) {
    if (a == b) return {};
    double sign = 1.0;
    if (b < a) { std::swap(a, b); sign = -1.0; }
    std::priority_queue<detail::Segment> heap;
    auto first = detail::gk15(f, a, b);
    heap.push(first);
    double total = first.value, err = first.error;
    int evals = 15;
    while (err > std::max(abs_tol, rel_tol * std::abs(total))) {
        if (static_cast<int>(heap.size()) >= max_segments)
            throw QuadratureFailure("integrate: segment limit reached, error estimate " +
                                    std::to_string(err));
        auto s = heap.top();
        heap.pop();
        double m = 0.5 * (s.a + s.b);
        if (!(m > s.a && m < s.b))
            throw QuadratureFailure("integrate: interval underflow");
        auto l = detail::gk15(f, s.a, m);
        auto r = detail::gk15(f, m, s.b);
        evals += 30;
        total += l.value + r.value - s.value;
        err += l.error + r.error - s.error;
        heap.push(l);
        heap.push(r);
    }
    // Resum to limit accumulated round-off from the running updates.
    double v = 0.0, e = 0.0;
    while (!heap.empty()) {
        v += heap.top().value;
        e += heap.top().error;
        heap.pop();
    }
    return {sign * v, e, evals};
}

// Integral over [a, +inf) through x = a + t/(1-t).
inline QuadResult integrate_to_inf(const std::function<double(double)>& f, double a,
                                   double abs_tol = 1e-10, double rel_tol = 1e-10) {
    auto g = [&](double t) {
        if (t >= 1.0) return 0.0;
        double u = 1.0 - t;
        return f(a + t / u) / (u * u);
    };
    return integrate(g, 0.0, 1.0, abs_tol, rel_tol);
}

// Integral over the whole real line, split at zero.
inline QuadResult integrate_real_line(const std::function<double(double)>& f,
                                      double abs_tol = 1e-10, double rel_tol = 1e-10) {
    auto pos = integrate_to_inf(f, 0.0, abs_tol / 2, rel_tol);
    auto neg = integrate_to_inf([&](double x) { return f(-x); }, 0.0, abs_tol / 2, rel_tol);
    return {pos.value + neg.value, pos.error + neg.error, pos.evaluations + neg.evaluations};
}

// Integral over [a, +inf) of a slowly decaying oscillatory function, summed
// in chunks of one half period. Partial sums alternate in the tail, so they
// are repeatedly averaged before the convergence test.
inline QuadResult integrate_oscillatory(const std::function<double(double)>& f, double a, double half_period,
                                        double abs_tol = 1e-10, double rel_tol = 1e-10,
                                        int max_chunks = 20000) {
    if (!(half_period > 0)) throw QuadratureFailure("integrate_oscillatory: half period must be positive");
    constexpr int levels = 4;
    std::vector<double> partial;
    double sum = 0.0, err = 0.0, prev = 0.0;
    int evals = 0, calm = 0;
    for (int n = 0; n < max_chunks; ++n) {
        auto r = integrate(f, a + n * half_period, a + (n + 1) * half_period, abs_tol * 1e-2, rel_tol);
        sum += r.value;
        err += r.error;
        evals += r.evaluations;
        partial.push_back(sum);
        if (static_cast<int>(partial.size()) <= levels) continue;
        std::vector<double> t(partial.end() - levels - 1, partial.end());
        for (int l = 0; l < levels; ++l)
            for (int i = 0; i + 1 < static_cast<int>(t.size()) - l; ++i) t[i] = 0.5 * (t[i] + t[i + 1]);
        double est = t[0];
        if (std::abs(est - prev) < std::max(abs_tol, rel_tol * std::abs(est))) {
            if (++calm == 3) return {est, err + std::abs(est - prev), evals};
        } else {
            calm = 0;
        }
        prev = est;
    }
    throw QuadratureFailure("integrate_oscillatory: chunk limit reached");
}

// Iterated 2D integral over the rectangle [ax,bx]x[ay,by].
inline QuadResult integrate_2d(const std::function<double(double, double)>& f, double ax,
                               double bx, double ay, double by, double abs_tol = 1e-9,
                               double rel_tol = 1e-8) {
    int evals = 0;
    auto inner = [&](double x) {
        auto r = integrate([&](double y) { return f(x, y); }, ay, by, abs_tol * 1e-2, rel_tol * 1e-2);
        evals += r.evaluations;
        return r.value;
    };
    auto outer = integrate(inner, ax, bx, abs_tol, rel_tol);
    outer.evaluations = evals;
    return outer;
}

} // namespace bgqed::num
