#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "errors.hpp"
#include "numerics/optimize.hpp"
#include "numerics/roots.hpp"
#include "trace.hpp"

namespace bgqed {

// One period of a stepped-impedance line: a low-impedance section of length
// l_lo and a high-impedance section of length l_hi. SI units except where
// noted; frequencies everywhere else are GHz (cycles, not radians).
struct UnitCell {
    double z_lo = 25.0;
    double z_hi = 124.0;
    double l_lo = 1.2e-3;
    double l_hi = 7.8e-3;
    double v_p = 1.248e8;

    double period() const { return l_lo + l_hi; }

    void validate() const {
        if (!(z_lo > 0 && z_hi > 0 && l_lo > 0 && l_hi > 0 && v_p > 0))
            throw InvalidArgument("UnitCell: all fields must be positive");
        if (z_hi < z_lo) throw InvalidArgument("UnitCell: z_hi must not be below z_lo");
    }
};

struct BandFit {
    double omega0 = 0.0;  // GHz
    double alpha = 0.0;   // GHz, coefficient of a^2 (k-k0)^2
    double k0 = 0.0;      // rad/m
    int band_index = 0;
    double rel_residual = 0.0;
};

struct CrystalOptions {
    double ceiling_ghz = 60.0;   // highest frequency scanned for roots
    double scan_step_ghz = 1e-3;
};

namespace detail {
inline double phase(double f_ghz, double length, double v_p) {
    return 2.0 * std::numbers::pi * f_ghz * 1e9 * length / v_p;
}
} // namespace detail

// Left-hand side of the Bloch condition, equal to cos(k a) on a band.
inline double bloch_lhs(const UnitCell& c, double f_ghz) {
    double plo = detail::phase(f_ghz, c.l_lo, c.v_p), phi = detail::phase(f_ghz, c.l_hi, c.v_p);
    double r = 0.5 * (c.z_hi / c.z_lo + c.z_lo / c.z_hi);
    return std::cos(plo) * std::cos(phi) - r * std::sin(plo) * std::sin(phi);
}

inline double bloch_lhs_derivative(const UnitCell& c, double f_ghz) {
    double s = 2.0 * std::numbers::pi * 1e9 / c.v_p;
    double plo = detail::phase(f_ghz, c.l_lo, c.v_p), phi = detail::phase(f_ghz, c.l_hi, c.v_p);
    double r = 0.5 * (c.z_hi / c.z_lo + c.z_lo / c.z_hi);
    double dlo = s * c.l_lo, dhi = s * c.l_hi;
    return -dlo * std::sin(plo) * std::cos(phi) - dhi * std::cos(plo) * std::sin(phi) -
           r * (dlo * std::cos(plo) * std::sin(phi) + dhi * std::sin(plo) * std::cos(phi));
}

// All roots of bloch_lhs(f) = cos(k a) below the ceiling, ascending, stopping
// once `want` have been found. Tangential touches (closed gaps) count twice
// because two bands meet there.
inline std::vector<double> bloch_roots(const UnitCell& c, double k, std::size_t want,
                                       const CrystalOptions& opt = {}) {
    const double target = std::cos(k * c.period());
    auto g = [&](double f) { return bloch_lhs(c, f) - target; };
    std::vector<double> roots;
    std::size_t n = static_cast<std::size_t>(std::ceil(opt.ceiling_ghz / opt.scan_step_ghz));
    double h = opt.ceiling_ghz / static_cast<double>(n);
    double gm = g(0.0);
    if (std::abs(gm) < 1e-14) {
        roots.push_back(0.0);
    }
    double f0 = 0.0, g0 = gm;
    double gprev = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 1; i <= n && roots.size() < want; ++i) {
        double f1 = h * static_cast<double>(i);
        double g1 = g(f1);
        if (g0 != 0.0 && g1 != 0.0 && std::signbit(g0) != std::signbit(g1)) {
            auto r = num::bisect(g, f0, f1, 1e-15);
            auto p = num::newton_polish(g, r.x, f0, f1, 2);
            roots.push_back(p.x);
        } else if (g1 == 0.0) {
            roots.push_back(f1);
        } else if (i >= 2 && std::abs(g0) <= std::abs(gprev) && std::abs(g0) <= std::abs(g1) &&
                   std::signbit(g0) == std::signbit(g1) && std::signbit(gprev) == std::signbit(g0) &&
                   std::abs(g0) < 1e-5 && (roots.empty() || f0 - roots.back() > 2.0 * h)) {
            // possible tangency near f0
            auto m = num::golden_minimize([&](double f) { return std::abs(g(f)); }, f0 - h, f1, 1e-13);
            if (m.fx < 1e-10) {
                roots.push_back(m.x);
                if (roots.size() < want) roots.push_back(m.x);
            }
        }
        gprev = g0;
        f0 = f1;
        g0 = g1;
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

// Frequency (GHz) of band `band_index` (1-based) at Bloch momentum k (rad/m).
inline double dispersion(const UnitCell& c, int band_index, double k, const CrystalOptions& opt = {}) {
    c.validate();
    if (band_index < 1) throw InvalidArgument("dispersion: band_index must be >= 1");
    const double kmax = std::numbers::pi / c.period();
    if (k < 0.0 || k > kmax * (1.0 + 1e-12))
        throw InvalidMomentum("dispersion: k outside the first Brillouin zone [0, pi/a]");
    k = std::min(k, kmax);
    auto roots = bloch_roots(c, k, static_cast<std::size_t>(band_index), opt);
    if (roots.size() < static_cast<std::size_t>(band_index))
        throw NoRoot("dispersion: band " + std::to_string(band_index) + " not found below " +
                     std::to_string(opt.ceiling_ghz) + " GHz");
    return roots[band_index - 1];
}

// Dispersion sampled on the reduced momentum ka in [-pi, pi].
inline double dispersion_reduced(const UnitCell& c, int band_index, double ka,
                                 const CrystalOptions& opt = {}) {
    return dispersion(c, band_index, std::min(std::abs(ka), std::numbers::pi) / c.period(), opt);
}

struct BandEdges {
    double f_min = 0.0;
    double f_max = 0.0;
    double k_min = 0.0;  // rad/m
    double k_max = 0.0;
};

inline BandEdges band_edges(const UnitCell& c, int band_index, const CrystalOptions& opt = {}) {
    const double kmax = std::numbers::pi / c.period();
    constexpr int n = 64;
    std::vector<double> f(n + 1);
    for (int i = 0; i <= n; ++i) f[i] = dispersion(c, band_index, kmax * i / n, opt);
    auto imin = std::min_element(f.begin(), f.end()) - f.begin();
    auto imax = std::max_element(f.begin(), f.end()) - f.begin();
    auto refine = [&](long i, double sign) {
        double k = kmax * static_cast<double>(i) / n;
        if (i == 0 || i == n) return std::pair{k, f[i]};
        auto m = num::brent_minimize(
            [&](double kk) { return sign * dispersion(c, band_index, kk, opt); }, kmax * (i - 1) / n,
            kmax * (i + 1) / n, 1e-9 * kmax);
        return std::pair{m.x, sign * m.fx};
    };
    auto [kmn, fmn] = refine(imin, 1.0);
    auto [kmx, fmx] = refine(imax, -1.0);
    return {fmn, fmx, kmn, kmx};
}

struct BandGap {
    double lower = 0.0;  // top of band b
    double upper = 0.0;  // bottom of band b+1
    double width() const { return upper - lower; }
};

inline BandGap band_gap(const UnitCell& c, int lower_band, const CrystalOptions& opt = {}) {
    auto lo = band_edges(c, lower_band, opt);
    auto hi = band_edges(c, lower_band + 1, opt);
    return {lo.f_max, hi.f_min};
}

// Curvature of the band bottom from the local slope of the Bloch condition:
// near an edge cos(ka) = +-(1 - x^2/2), so f - f0 = x^2 / (2|F'(f0)|).
inline double edge_curvature(const UnitCell& c, int band_index, const CrystalOptions& opt = {}) {
    auto e = band_edges(c, band_index, opt);
    double d = bloch_lhs_derivative(c, e.f_min);
    if (d == 0.0) throw DomainError("edge_curvature: band bottom is not a simple edge");
    return 1.0 / (2.0 * std::abs(d));
}

// Least-squares fit of f = omega0 + alpha x^2, x = a(k-k0), to the band
// bottom over frequencies within fit_window of the edge.
inline BandFit fit_band_edge(const UnitCell& c, int band_index, double fit_window = 0.01,
                             int samples = 41, const CrystalOptions& opt = {}) {
    if (!(fit_window > 0)) throw InvalidArgument("fit_band_edge: fit_window must be positive");
    const double a = c.period(), kmax = std::numbers::pi / a;
    auto e = band_edges(c, band_index, opt);
    double k0 = e.k_min;
    double dir = (k0 > 0.5 * kmax) ? -1.0 : 1.0;
    // momentum offset at which the band has risen by fit_window
    auto rise = [&](double dk) { return dispersion(c, band_index, k0 + dir * dk, opt) - e.f_min - fit_window; };
    double span = dir > 0 ? kmax - k0 : k0;
    if (rise(span) < 0) throw PoorFit("fit_band_edge: window exceeds the band width");
    double dk = num::brent(rise, 0.0, span, 1e-12 * kmax).x;

    // normal equations for [1, x^2]
    double s00 = 0, s01 = 0, s11 = 0, t0 = 0, t1 = 0;
    std::vector<double> xs, fs;
    for (int i = 0; i < samples; ++i) {
        double off = dk * i / (samples - 1);
        double x = a * off;
        double f = dispersion(c, band_index, k0 + dir * off, opt);
        double u = x * x;
        s00 += 1; s01 += u; s11 += u * u; t0 += f; t1 += u * f;
        xs.push_back(u);
        fs.push_back(f);
    }
    double det = s00 * s11 - s01 * s01;
    BandFit fit;
    fit.omega0 = (s11 * t0 - s01 * t1) / det;
    fit.alpha = (s00 * t1 - s01 * t0) / det;
    fit.k0 = k0;
    fit.band_index = band_index;
    double ss = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double r = fs[i] - fit.omega0 - fit.alpha * xs[i];
        ss += r * r;
    }
    fit.rel_residual = std::sqrt(ss / xs.size()) / fit_window;
    if (fit.rel_residual > 1e-2)
        throw PoorFit("fit_band_edge: relative residual " + std::to_string(fit.rel_residual));
    return fit;
}

struct TwoPortS {
    cplx s11;
    cplx s21;
    bool underflow = false;
};

// Cascade of symmetric cells (l_lo/2 | l_hi | l_lo/2) between two ports of
// impedance z0, lossless ideal line sections.
inline TwoPortS transfer_matrix_sparams(const UnitCell& c, int n_cells, double f_ghz, double z0 = 50.0) {
    c.validate();
    if (n_cells < 1) throw InvalidArgument("transfer_matrix_s21: n_cells must be >= 1");
    if (!(f_ghz > 0)) throw InvalidArgument("transfer_matrix_s21: frequency must be positive");
    using M = std::array<cplx, 4>;
    const cplx j(0.0, 1.0);
    auto section = [&](double z, double len) {
        double p = detail::phase(f_ghz, len, c.v_p);
        return M{std::cos(p), j * z * std::sin(p), j * std::sin(p) / z, std::cos(p)};
    };
    auto mul = [](const M& x, const M& y) {
        return M{x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2],
                 x[2] * y[1] + x[3] * y[3]};
    };
    M half = section(c.z_lo, 0.5 * c.l_lo);
    M cell = mul(mul(half, section(c.z_hi, c.l_hi)), half);
    M t{1.0, 0.0, 0.0, 1.0};
    for (int i = 0; i < n_cells; ++i) t = mul(t, cell);
    cplx den = t[0] + t[1] / z0 + t[2] * z0 + t[3];
    TwoPortS s;
    if (!std::isfinite(std::abs(den)) || std::abs(den) > 1e150) {
        s.s21 = 0.0;
        s.s11 = 1.0;
        s.underflow = true;
        return s;
    }
    s.s21 = 2.0 / den;
    s.s11 = (t[0] + t[1] / z0 - t[2] * z0 - t[3]) / den;
    s.underflow = std::abs(s.s21) < 1e-150;
    return s;
}

inline cplx transfer_matrix_s21(const UnitCell& c, int n_cells, double f_ghz, double z0 = 50.0) {
    return transfer_matrix_sparams(c, n_cells, f_ghz, z0).s21;
}

inline SpectrumTrace sweep_transfer_matrix(const UnitCell& c, int n_cells, double f_start,
                                           double f_stop, std::size_t n_points, double z0 = 50.0) {
    if (!(f_start < f_stop) || n_points < 2)
        throw InvalidArgument("sweep_transfer_matrix: need f_start < f_stop and n_points >= 2");
    SpectrumTrace t;
    bool under = false;
    for (std::size_t i = 0; i < n_points; ++i) {
        double f = f_start + (f_stop - f_start) * static_cast<double>(i) / static_cast<double>(n_points - 1);
        auto s = transfer_matrix_sparams(c, n_cells, f, z0);
        under = under || s.underflow;
        t.freqs.push_back(f);
        t.values.push_back(s.s21);
    }
    t.meta["method"] = "transfer_matrix";
    t.meta["n_cells"] = std::to_string(n_cells);
    t.meta["port_impedance_ohm"] = format_double(z0);
    if (under) t.meta["warning"] = "underflow clamped";
    return t;
}

} // namespace bgqed
