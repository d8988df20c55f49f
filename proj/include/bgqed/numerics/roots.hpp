#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "../errors.hpp"

namespace bgqed::num {

struct RootResult {
    double x = 0.0;
    double residual = 0.0;
    int iters = 0;
    bool converged = false;
};

// Plain bisection on a sign-changing bracket. Stops on interval width or
// on |f| < ftol, whichever first.
inline RootResult bisect(const std::function<double(double)>& f, double a, double b,
                         double xtol = 1e-14, double ftol = 0.0, int max_iter = 400) {
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return {a, 0.0, 0, true};
    if (fb == 0.0) return {b, 0.0, 0, true};
    if (std::signbit(fa) == std::signbit(fb))
        throw NoRoot("bisect: interval does not bracket a sign change");
    RootResult r;
    for (r.iters = 0; r.iters < max_iter; ++r.iters) {
        double m = 0.5 * (a + b);
        double fm = f(m);
        if (fm == 0.0 || std::abs(fm) < ftol || 0.5 * (b - a) < xtol) {
            r.x = m;
            r.residual = fm;
            r.converged = true;
            return r;
        }
        if (std::signbit(fm) == std::signbit(fa)) { a = m; fa = fm; }
        else { b = m; fb = fm; }
    }
    r.x = 0.5 * (a + b);
    r.residual = f(r.x);
    r.converged = 0.5 * (b - a) < 1e3 * xtol;
    return r;
}

// Brent's method (inverse quadratic interpolation with bisection fallback).
inline RootResult brent(const std::function<double(double)>& f, double a, double b,
                        double xtol = 1e-14, int max_iter = 300) {
    double fa = f(a), fb = f(b);
    if (fa == 0.0) return {a, 0.0, 0, true};
    if (fb == 0.0) return {b, 0.0, 0, true};
    if (std::signbit(fa) == std::signbit(fb))
        throw NoRoot("brent: interval does not bracket a sign change");
    double c = a, fc = fa, d = b - a, e = d;
    RootResult r;
    for (r.iters = 0; r.iters < max_iter; ++r.iters) {
        if (std::signbit(fb) == std::signbit(fc)) {
            c = a; fc = fa; d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        double tol = 2.0 * std::numeric_limits<double>::epsilon() * std::abs(b) + 0.5 * xtol;
        double m = 0.5 * (c - b);
        if (std::abs(m) <= tol || fb == 0.0) {
            r.x = b;
            r.residual = fb;
            r.converged = true;
            return r;
        }
        if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
            double s = fb / fa, p, q;
            if (a == c) {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                double qq = fa / fc, rr = fb / fc;
                p = s * (2.0 * m * qq * (qq - rr) - (b - a) * (rr - 1.0));
                q = (qq - 1.0) * (rr - 1.0) * (s - 1.0);
            }
            if (p > 0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = m; e = m;
            }
        } else {
            d = m; e = m;
        }
        a = b; fa = fb;
        b += std::abs(d) > tol ? d : (m > 0 ? tol : -tol);
        fb = f(b);
    }
    r.x = b;
    r.residual = fb;
    r.converged = false;
    return r;
}

// One or more Newton steps with a central-difference derivative, accepted
// only while they reduce |f| and stay inside [lo, hi].
inline RootResult newton_polish(const std::function<double(double)>& f, double x, double lo,
                                double hi, int steps = 2) {
    double fx = f(x);
    int it = 0;
    for (; it < steps && fx != 0.0; ++it) {
        double h = 1e-7 * std::max(1.0, std::abs(x));
        double df = (f(x + h) - f(x - h)) / (2.0 * h);
        if (df == 0.0 || !std::isfinite(df)) break;
        double xn = x - fx / df;
        if (xn < lo || xn > hi) break;
        double fn = f(xn);
        if (std::abs(fn) >= std::abs(fx)) break;
        x = xn;
        fx = fn;
    }
    return {x, fx, it, true};
}

// Uniform pre-scan for sign changes. Returns sub-intervals [x_i, x_{i+1}]
// over which f changes sign. Exact zeros at grid points produce a tiny
// bracket around the point.
inline std::vector<std::pair<double, double>>
scan_brackets(const std::function<double(double)>& f, double a, double b, std::size_t n) {
    std::vector<std::pair<double, double>> out;
    if (n < 1 || !(b > a)) return out;
    double h = (b - a) / static_cast<double>(n);
    double x0 = a, f0 = f(a);
    for (std::size_t i = 1; i <= n; ++i) {
        double x1 = (i == n) ? b : a + h * static_cast<double>(i);
        double f1 = f(x1);
        if (f0 == 0.0) {
            if (out.empty() || out.back().second < x0)
                out.emplace_back(std::max(a, x0 - 1e-3 * h), std::min(b, x0 + 1e-3 * h));
        } else if (f1 != 0.0 && std::signbit(f0) != std::signbit(f1)) {
            out.emplace_back(x0, x1);
        }
        x0 = x1;
        f0 = f1;
    }
    if (f0 == 0.0 && (out.empty() || out.back().second < x0))
        out.emplace_back(x0 - 1e-3 * h, x0);
    return out;
}

} // namespace bgqed::num
