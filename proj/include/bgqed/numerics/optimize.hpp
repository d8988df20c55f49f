#pragma once

#include <array>
#include <cmath>
#include <functional>

#include "../errors.hpp"

namespace bgqed::num {

struct MinResult {
    double x = 0.0;
    double fx = 0.0;
    int iters = 0;
    bool converged = false;
};

// Brent's minimizer on [a, b] (golden section with parabolic steps).
inline MinResult brent_minimize(const std::function<double(double)>& f, double a, double b,
                                double xtol = 1e-10, int max_iter = 200) {
    constexpr double cgold = 0.3819660112501051;
    if (b < a) std::swap(a, b);
    double x = a + cgold * (b - a), w = x, v = x;
    double fx = f(x), fw = fx, fv = fx;
    double d = 0.0, e = 0.0;
    MinResult r;
    for (r.iters = 0; r.iters < max_iter; ++r.iters) {
        double m = 0.5 * (a + b);
        double tol1 = xtol * 0.5 + 1e-15 * std::abs(x), tol2 = 2.0 * tol1;
        if (std::abs(x - m) <= tol2 - 0.5 * (b - a)) {
            r.converged = true;
            break;
        }
        bool golden = true;
        if (std::abs(e) > tol1) {
            double rr = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * rr;
            q = 2.0 * (q - rr);
            if (q > 0) p = -p;
            q = std::abs(q);
            double etemp = e;
            e = d;
            if (std::abs(p) < std::abs(0.5 * q * etemp) && p > q * (a - x) && p < q * (b - x)) {
                d = p / q;
                double u = x + d;
                if (u - a < tol2 || b - u < tol2) d = (m >= x) ? tol1 : -tol1;
                golden = false;
            }
        }
        if (golden) {
            e = (x >= m) ? a - x : b - x;
            d = cgold * e;
        }
        double u = (std::abs(d) >= tol1) ? x + d : x + (d > 0 ? tol1 : -tol1);
        double fu = f(u);
        if (fu <= fx) {
            if (u >= x) a = x; else b = x;
            v = w; fv = fw;
            w = x; fw = fx;
            x = u; fx = fu;
        } else {
            if (u < x) a = u; else b = u;
            if (fu <= fw || w == x) {
                v = w; fv = fw;
                w = u; fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u; fv = fu;
            }
        }
    }
    r.x = x;
    r.fx = fx;
    return r;
}

// Golden-section search; kept separate because it never evaluates outside
// the current bracket, which matters for functions that are only valid there.
inline MinResult golden_minimize(const std::function<double(double)>& f, double a, double b,
                                 double xtol = 1e-9, int max_iter = 200) {
    constexpr double invphi = 0.6180339887498949;
    double c = b - invphi * (b - a), d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    MinResult r;
    for (r.iters = 0; r.iters < max_iter && std::abs(b - a) > xtol; ++r.iters) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    r.converged = std::abs(b - a) <= xtol;
    if (fc < fd) { r.x = c; r.fx = fc; }
    else { r.x = d; r.fx = fd; }
    return r;
}

using Vec2 = std::array<double, 2>;

struct Newton2Result {
    Vec2 x{};
    Vec2 residual{};
    int iters = 0;
    bool converged = false;
};

// Damped Newton for two equations in two unknowns with a forward-difference
// Jacobian. Steps are halved until the residual norm decreases.
inline Newton2Result newton2(const std::function<Vec2(const Vec2&)>& F, Vec2 x, double ftol = 1e-9,
                             int max_iter = 60, Vec2 h = {1e-6, 1e-6}) {
    auto norm = [](const Vec2& v) { return std::hypot(v[0], v[1]); };
    Vec2 fx = F(x);
    Newton2Result r;
    for (r.iters = 0; r.iters < max_iter; ++r.iters) {
        if (norm(fx) < ftol) {
            r.converged = true;
            break;
        }
        double J[2][2];
        for (int j = 0; j < 2; ++j) {
            Vec2 xp = x;
            xp[j] += h[j];
            Vec2 fp = F(xp);
            J[0][j] = (fp[0] - fx[0]) / h[j];
            J[1][j] = (fp[1] - fx[1]) / h[j];
        }
        double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
        if (det == 0.0 || !std::isfinite(det))
            throw NoConvergence("newton2: singular Jacobian");
        Vec2 dx = {-(J[1][1] * fx[0] - J[0][1] * fx[1]) / det,
                   -(-J[1][0] * fx[0] + J[0][0] * fx[1]) / det};
        double lambda = 1.0;
        bool accepted = false;
        for (int k = 0; k < 30; ++k) {
            Vec2 xn = {x[0] + lambda * dx[0], x[1] + lambda * dx[1]};
            Vec2 fn;
            bool ok = true;
            try {
                fn = F(xn);
            } catch (const Error&) {
                ok = false;
            }
            if (ok && std::isfinite(fn[0]) && std::isfinite(fn[1]) && norm(fn) < norm(fx)) {
                x = xn;
                fx = fn;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!accepted) break;
    }
    r.x = x;
    r.residual = fx;
    if (!r.converged) r.converged = norm(fx) < ftol;
    return r;
}

} // namespace bgqed::num
