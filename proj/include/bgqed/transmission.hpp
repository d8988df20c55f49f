#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"
#include "lattice.hpp"
#include "numerics/optimize.hpp"
#include "numerics/parallel.hpp"
#include "numerics/roots.hpp"
#include "trace.hpp"

namespace bgqed {

struct WaveguidePorts {
    double v_g = 1.0;
    double g_w = 2.0;

    void validate() const {
        if (!(v_g > 0 && g_w > 0)) throw InvalidArgument("WaveguidePorts: v_g and g_w must be positive");
    }
};

enum class Method { steady_state, scattering };

inline std::string method_name(Method m) { return m == Method::steady_state ? "steady" : "scatter"; }

// FNV-1a of the canonical model JSON; used to tag outputs.
inline std::string model_hash(const LatticeModel& m) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : to_json(m).dump()) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// Same model with every qubit decoupled (saturated-qubit reference). The
// decoupled qubits are dropped from the basis as they carry no signal.
inline LatticeModel saturated(LatticeModel m) {
    for (auto& q : m.qubits) {
        q.g = 0.0;
        q.active = false;
    }
    return m;
}

// Frequency range of the lattice band.
inline std::pair<double, double> passband(const LatticeModel& m) {
    double lo = 1e300, hi = -1e300;
    for (int i = 0; i <= 256; ++i) {
        double w = hopping_band(m.hoppings, std::numbers::pi * i / 256);
        lo = std::min(lo, w);
        hi = std::max(hi, w);
    }
    return {lo, hi};
}

// Linear-response transmission from the damped single-excitation equations
// of motion: S21 ~ <a_N>/eps = -[(H - w - i Gamma)^-1]_{N,1}.
class SteadyStateSolver {
public:
    explicit SteadyStateSolver(const LatticeModel& m) : model_(m) {
        m.validate();
        h_ = single_excitation_matrix(m);
        gamma_ = Eigen::VectorXd::Constant(h_.rows(), m.losses.kappa_q);
        for (int i = 0; i < m.n_sites; ++i) gamma_[i] = m.losses.kappa0;
        gamma_[0] += m.losses.kappa;
        gamma_[m.n_sites - 1] += m.losses.kappa;
    }

    cplx raw(double omega_d) const {
        const Eigen::Index n = h_.rows();
        Eigen::MatrixXcd a = h_.cast<cplx>();
        for (Eigen::Index i = 0; i < n; ++i) a(i, i) -= cplx(omega_d, gamma_[i]);
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
        double piv = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
        if (!(piv > 1e-300)) {
            auto ev = num::dense_eigenvalues(h_);
            Eigen::Index k;
            (ev.array() - omega_d).abs().minCoeff(&k);
            throw SingularSystem("steady state: lossless system at eigenvalue " + format_double(ev[k]));
        }
        Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n);
        rhs[0] = -1.0;
        Eigen::VectorXcd x = lu.solve(rhs);
        return x[model_.n_sites - 1];
    }

    // Largest |raw| over the passband of the saturated reference model.
    double reference_max() const {
        if (ref_ > 0) return ref_;
        SteadyStateSolver ref(saturated(model_));
        auto [lo, hi] = passband(model_);
        lo -= 0.05;
        hi += 0.05;
        const int n = 4001;
        std::vector<double> mag(n);
        num::parallel_for(n, [&](std::size_t i) { mag[i] = std::abs(ref.raw(lo + (hi - lo) * i / (n - 1))); });
        auto it = std::max_element(mag.begin(), mag.end());
        long k = it - mag.begin();
        double step = (hi - lo) / (n - 1);
        double a = lo + step * std::max(0L, k - 1), b = lo + step * std::min<long>(n - 1, k + 1);
        auto r = num::golden_minimize([&](double w) { return -std::abs(ref.raw(w)); }, a, b, 1e-9);
        ref_ = std::max(*it, -r.fx);
        return ref_;
    }

    cplx s21(double omega_d) const { return raw(omega_d) / reference_max(); }

    const LatticeModel& model() const { return model_; }

private:
    LatticeModel model_;
    Eigen::MatrixXd h_;
    Eigen::VectorXd gamma_;
    mutable double ref_ = 0.0;
};

inline cplx s21_steady_state(const LatticeModel& m, double omega_d) {
    return SteadyStateSolver(m).s21(omega_d);
}

struct ScatteringValue {
    cplx t;
    bool regularised = false;
};

// Transmission of the lossless crystal between two linear-dispersion
// waveguides, from the single-excitation eigenpairs.
class ScatteringSolver {
public:
    ScatteringSolver(const LatticeModel& m, const WaveguidePorts& p) : ports_(p) {
        m.validate();
        p.validate();
        auto es = num::dense_eigensystem(single_excitation_matrix(m));
        omega_ = es.values;
        first_ = es.vectors.row(0).transpose();
        last_ = es.vectors.row(m.n_sites - 1).transpose();
    }

    ScatteringValue amplitude(double w) const {
        ScatteringValue out;
        cplx z(w, 0.0);
        if ((omega_.array() - w).abs().minCoeff() < 1e-9) {
            z += cplx(0.0, 1e-6);
            out.regularised = true;
        }
        const cplx i(0.0, 1.0);
        cplx sl = 0, sr = 0, sb = 0;
        for (Eigen::Index n = 0; n < omega_.size(); ++n) {
            cplx d = 1.0 / (z - omega_[n]);
            sl += first_[n] * first_[n] * d;
            sr += last_[n] * last_[n] * d;
            sb += first_[n] * last_[n] * d;
        }
        const double gw = ports_.g_w;
        cplx gl = 1.0 + 0.5 * i * gw * sl;
        cplx gr = 1.0 + 0.5 * i * gw * sr;
        cplx beta = 0.5 * gw * sb;
        out.t = -2.0 * i * beta / (gl * gr + beta * beta);
        return out;
    }

    // Spectral sum whose zeros are the transmission zeros (independent of g_w).
    double beta_sum(double w) const {
        double s = 0;
        for (Eigen::Index n = 0; n < omega_.size(); ++n) s += first_[n] * last_[n] / (w - omega_[n]);
        return s;
    }

    const Eigen::VectorXd& eigenvalues() const { return omega_; }

private:
    WaveguidePorts ports_;
    Eigen::VectorXd omega_, first_, last_;
};

inline double s21_scattering(const LatticeModel& m, const WaveguidePorts& p, double w) {
    return std::norm(ScatteringSolver(m, p).amplitude(w).t);
}

struct SweepOptions {
    WaveguidePorts ports{};
    bool normalise = true;
};

inline SpectrumTrace sweep_s21(const LatticeModel& m, Method method, double f_start, double f_stop,
                               std::size_t n_points, const SweepOptions& opt = {}) {
    if (!(f_start < f_stop) || n_points < 2)
        throw InvalidArgument("sweep_s21: need f_start < f_stop and n_points >= 2");
    SpectrumTrace t;
    t.freqs.resize(n_points);
    t.values.resize(n_points);
    for (std::size_t i = 0; i < n_points; ++i)
        t.freqs[i] = f_start + (f_stop - f_start) * static_cast<double>(i) / static_cast<double>(n_points - 1);
    double norm = 1.0;
    bool regularised = false;
    if (method == Method::steady_state) {
        SteadyStateSolver s(m);
        num::parallel_for(n_points, [&](std::size_t i) { t.values[i] = s.raw(t.freqs[i]); });
        if (opt.normalise) norm = s.reference_max();
    } else {
        ScatteringSolver s(m, opt.ports);
        std::vector<char> flags(n_points, 0);
        num::parallel_for(n_points, [&](std::size_t i) {
            auto v = s.amplitude(t.freqs[i]);
            t.values[i] = v.t;
            flags[i] = v.regularised;
        });
        regularised = std::any_of(flags.begin(), flags.end(), [](char c) { return c != 0; });
        if (opt.normalise) {
            ScatteringSolver ref(saturated(m), opt.ports);
            auto [lo, hi] = passband(m);
            double best = 0;
            for (int i = 0; i <= 4000; ++i)
                best = std::max(best, std::abs(ref.amplitude(lo - 0.05 + (hi - lo + 0.1) * i / 4000).t));
            norm = best;
        }
    }
    for (auto& v : t.values) v /= norm;
    t.meta["method"] = method_name(method);
    t.meta["model_hash"] = model_hash(m);
    t.meta["normalisation"] = format_double(norm);
    if (method == Method::scattering) t.meta["g_w"] = format_double(opt.ports.g_w);
    if (regularised) t.meta["warning"] = "DegenerateEigenvalue: evaluated off the real axis";
    return t;
}

// ---- peak and dip extraction ---------------------------------------------

struct PeakReport {
    double freq = 0.0;
    double fwhm = 0.0;
    double height = 0.0;  // |S21| at the peak
};

namespace detail {
// Vertex of the parabola through three equally spaced points.
inline double parabola_offset(double ym, double y0, double yp) {
    double den = ym - 2.0 * y0 + yp;
    if (den == 0.0) return 0.0;
    return std::clamp(0.5 * (ym - yp) / den, -0.5, 0.5);
}
} // namespace detail

// Largest in-window |S21| with half-power width (|S21|^2 at half its peak),
// edges found by linear interpolation of |S21|^2.
inline PeakReport find_bound_state_peak(const SpectrumTrace& t, double lo, double hi) {
    t.validate();
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t.freqs[i] >= lo && t.freqs[i] <= hi) idx.push_back(i);
    if (idx.size() < 3) throw NoPeak("find_bound_state_peak: fewer than three points in window");
    std::vector<double> p(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) p[i] = std::norm(t.values[i]);
    std::size_t k = idx.front();
    for (auto i : idx)
        if (p[i] > p[k]) k = i;
    std::vector<double> mags;
    for (auto i : idx) mags.push_back(std::sqrt(p[i]));
    std::nth_element(mags.begin(), mags.begin() + mags.size() / 2, mags.end());
    double median = mags[mags.size() / 2];
    if (std::sqrt(p[k]) <= 3.0 * median) throw NoPeak("find_bound_state_peak: no peak above the gap floor");
    if (k == idx.front() || k == idx.back()) throw NoPeak("find_bound_state_peak: maximum on the window edge");

    PeakReport r;
    double h = t.freqs[k + 1] - t.freqs[k];
    double off = detail::parabola_offset(p[k - 1], p[k], p[k + 1]);
    r.freq = t.freqs[k] + off * h;
    double peak = p[k] - 0.25 * (p[k - 1] - p[k + 1]) * off;
    r.height = std::sqrt(peak);
    double half = 0.5 * peak;
    std::size_t a = k, b = k;
    while (a > 0 && p[a] > half) --a;
    while (b + 1 < t.size() && p[b] > half) ++b;
    if (p[a] > half || p[b] > half) throw NoPeak("find_bound_state_peak: half-power points outside trace");
    double fl = t.freqs[a] + (half - p[a]) / (p[a + 1] - p[a]) * (t.freqs[a + 1] - t.freqs[a]);
    double fr = t.freqs[b - 1] + (half - p[b - 1]) / (p[b] - p[b - 1]) * (t.freqs[b] - t.freqs[b - 1]);
    r.fwhm = fr - fl;
    return r;
}

// Deepest local minimum of |S21| inside [lo, hi], parabola-refined in dB.
inline double find_dip(const SpectrumTrace& t, double lo, double hi) {
    t.validate();
    auto db = t.mag_db();
    std::size_t best = 0;
    bool found = false;
    for (std::size_t i = 1; i + 1 < t.size(); ++i) {
        if (t.freqs[i] < lo || t.freqs[i] > hi) continue;
        if (db[i] <= db[i - 1] && db[i] <= db[i + 1] && (!found || db[i] < db[best])) {
            best = i;
            found = true;
        }
    }
    if (!found) throw NoPeak("find_dip: no local minimum in window");
    double h = t.freqs[best + 1] - t.freqs[best];
    return t.freqs[best] + detail::parabola_offset(db[best - 1], db[best], db[best + 1]) * h;
}

// Lowest-lying single-excitation state below the lattice band, i.e. the
// bound-state eigenvalue (throws NoPeak if none lies below the band).
inline double bound_state_eigenvalue(const LatticeModel& m, double below) {
    auto ev = num::dense_eigenvalues(single_excitation_matrix(m));
    double best = -1e300;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (ev[i] < below) best = std::max(best, ev[i]);
    if (best == -1e300) throw NoPeak("bound_state_eigenvalue: no state below " + format_double(below));
    return best;
}

// Transmission zero of the lossless model nearest `near`, from the sign
// changes of the spectral sum between consecutive poles.
inline double transmission_zero(const LatticeModel& m, double near, double window = 0.5) {
    ScatteringSolver s(m, WaveguidePorts{});
    const auto& ev = s.eigenvalues();
    std::vector<double> pts{near - window};
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (ev[i] > near - window && ev[i] < near + window) pts.push_back(ev[i]);
    pts.push_back(near + window);
    double best = 0;
    bool found = false;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        double a = pts[i], b = pts[i + 1];
        double eps = 1e-9 * std::max(1.0, b - a);
        auto br = num::scan_brackets([&](double w) { return s.beta_sum(w); }, a + eps, b - eps, 400);
        for (auto [x0, x1] : br) {
            // skip sign changes caused by a pole at a grid point
            if (std::abs(s.beta_sum(0.5 * (x0 + x1))) > 1e6) continue;
            double z = num::brent([&](double w) { return s.beta_sum(w); }, x0, x1, 1e-13).x;
            if (!found || std::abs(z - near) < std::abs(best - near)) {
                best = z;
                found = true;
            }
        }
    }
    if (!found) throw NoPeak("transmission_zero: none within window");
    return best;
}

} // namespace bgqed
