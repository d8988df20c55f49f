#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "lattice.hpp"
#include "numerics/optimize.hpp"
#include "numerics/roots.hpp"
#include "spectra.hpp"
#include "trace.hpp"
#include "transmission.hpp"

namespace bgqed {

struct FitReport {
    std::string parameter;
    double value = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    std::string objective;
    double residual = 0.0;
    std::vector<std::string> inputs;

    bool in_bracket() const { return value >= lo && value <= hi; }
};

inline nlohmann::ordered_json to_json(const FitReport& r) {
    nlohmann::ordered_json j;
    j["parameter"] = r.parameter;
    j["value"] = r.value;
    j["bracket"] = {r.lo, r.hi};
    j["objective"] = r.objective;
    j["residual"] = r.residual;
    j["inputs"] = r.inputs;
    return j;
}

namespace detail {

// Pinned at an edge means the data want a value outside the accepted range.
inline void check_interior(const FitReport& r) {
    double tol = 1e-3 * (r.hi - r.lo);
    if (r.value - r.lo < tol || r.hi - r.value < tol)
        throw OutOfBracket("fit " + r.parameter + ": optimum " + format_double(r.value) + " pinned at bracket [" +
                           format_double(r.lo) + ", " + format_double(r.hi) + "]");
}

// |S21| of the steady-state model on the given grid, scaled to unit maximum.
inline std::vector<double> model_passband(const LatticeModel& m, const std::vector<double>& freqs) {
    SteadyStateSolver s(m);
    std::vector<double> mag(freqs.size());
    num::parallel_for(freqs.size(), [&](std::size_t i) { mag[i] = std::abs(s.raw(freqs[i])); });
    double mx = *std::max_element(mag.begin(), mag.end());
    for (auto& v : mag) v /= mx;
    return mag;
}

inline std::vector<double> to_db(std::vector<double> mag) {
    for (auto& v : mag) v = 20.0 * std::log10(std::max(v, 1e-20));
    return mag;
}

// Index of the lowest-frequency local maximum of a passband trace.
inline std::size_t lowest_mode(const std::vector<double>& mag) {
    for (std::size_t i = 1; i + 1 < mag.size(); ++i)
        if (mag[i] >= mag[i - 1] && mag[i] > mag[i + 1]) return i;
    throw NoPeak("fit_edge_loss: no photonic mode in measured passband");
}

} // namespace detail

struct EdgeLossFit {
    FitReport kappa;
    FitReport kappa0;
    int rounds = 0;
};

// Saturated-qubit passband fit. kappa minimises the rms dB mismatch of the
// passband ripple, kappa0 matches the height of the lowest photonic mode;
// the two stages alternate until both settle. Both traces are scaled to unit
// maximum on the measured grid, so the overall gain of the data is irrelevant.
inline EdgeLossFit fit_edge_loss(const SpectrumTrace& measured, const LatticeModel& model,
                                 std::pair<double, double> kappa_bracket = {0.5, 1.5},
                                 std::pair<double, double> kappa0_bracket = {0.003, 0.005}, int max_rounds = 12) {
    measured.validate();
    auto [plo, phi] = passband(model);
    std::vector<double> freqs, mag;
    for (std::size_t i = 0; i < measured.size(); ++i)
        if (measured.freqs[i] >= plo && measured.freqs[i] <= phi) {
            freqs.push_back(measured.freqs[i]);
            mag.push_back(std::abs(measured.values[i]));
        }
    if (freqs.size() < 8) throw InvalidArgument("fit_edge_loss: fewer than 8 measured points inside the passband");
    double mx = *std::max_element(mag.begin(), mag.end());
    if (!(mx > 0)) throw InvalidArgument("fit_edge_loss: measured trace is identically zero");
    for (auto& v : mag) v /= mx;
    const auto meas_db = detail::to_db(mag);
    const std::size_t low = detail::lowest_mode(mag);

    LatticeModel m = saturated(model);
    m.losses.kappa_q = 0.0;
    m.losses.kappa0 = 0.0;

    auto ripple = [&](double kappa) {
        m.losses.kappa = kappa;
        auto db = detail::to_db(detail::model_passband(m, freqs));
        double s = 0;
        for (std::size_t i = 0; i < db.size(); ++i) s += (db[i] - meas_db[i]) * (db[i] - meas_db[i]);
        return std::sqrt(s / static_cast<double>(db.size()));
    };
    auto low_peak = [&](double kappa0) {
        m.losses.kappa0 = kappa0;
        auto p = detail::model_passband(m, freqs);
        // model peak nearest the measured lowest mode
        std::size_t a = low > 3 ? low - 3 : 0, b = std::min(p.size() - 1, low + 3);
        double best = *std::max_element(p.begin() + a, p.begin() + b + 1);
        return std::abs(20.0 * std::log10(best) - meas_db[low]);
    };

    EdgeLossFit out;
    double kappa = 0.5 * (kappa_bracket.first + kappa_bracket.second);
    double kappa0 = 0.0;
    num::MinResult rk{}, r0{};
    for (out.rounds = 1; out.rounds <= max_rounds; ++out.rounds) {
        m.losses.kappa0 = kappa0;
        rk = num::brent_minimize(ripple, kappa_bracket.first, kappa_bracket.second, 1e-7);
        m.losses.kappa = rk.x;
        r0 = num::brent_minimize(low_peak, kappa0_bracket.first, kappa0_bracket.second, 1e-9);
        bool settled = std::abs(rk.x - kappa) < 1e-6 && std::abs(r0.x - kappa0) < 1e-8;
        kappa = rk.x;
        kappa0 = r0.x;
        if (settled) break;
    }
    if (out.rounds > max_rounds) throw NoConvergence("fit_edge_loss: alternating stages did not settle");

    std::string src = measured.meta.count("source") ? measured.meta.at("source") : std::string("measured trace");
    out.kappa = {"kappa", kappa, kappa_bracket.first, kappa_bracket.second,
                 "rms dB mismatch over the passband", rk.fx, {src}};
    out.kappa0 = {"kappa0", kappa0, kappa0_bracket.first, kappa0_bracket.second,
                  "dB mismatch of the lowest photonic mode peak", r0.fx, {src}};
    detail::check_interior(out.kappa);
    detail::check_interior(out.kappa0);
    return out;
}

struct CouplingFit {
    FitReport g;
    FitReport omega01;
    double bound = 0.0;  // model bound state at the solution
    double dip = 0.0;    // model transmission zero at the solution
};

// Solves for (g, omega01) of qubit `which` such that the lossless model puts
// its in-gap bound state at bound_freq and the transmission zero at dip_freq.
// Both targets are eigen-quantities, so loss parameters play no part.
inline CouplingFit fit_coupling(double bound_freq, double dip_freq, const LatticeModel& model, int which,
                                std::pair<double, double> g_bracket = {0.05, 1.5},
                                std::pair<double, double> w_bracket = {5.0, 10.0}) {
    if (which < 0 || which >= static_cast<int>(model.qubits.size()))
        throw InvalidArgument("fit_coupling: qubit index out of range");
    LatticeModel m = model;
    m.losses = {};
    const double edge = passband(m).first;
    if (!(bound_freq < edge)) throw InvalidArgument("fit_coupling: bound-state frequency must lie below the band");

    auto residual = [&](const std::array<double, 2>& x) -> std::array<double, 2> {
        if (x[0] <= 0) throw DomainError("fit_coupling: coupling must stay positive");
        m.qubits[which].g = x[0];
        m.qubits[which].omega01 = x[1];
        return {bound_state_eigenvalue(m, edge) - bound_freq, transmission_zero(m, dip_freq, 0.2) - dip_freq};
    };
    std::array<double, 2> x0{model.qubits[which].g, model.qubits[which].omega01};
    auto r = num::newton2(residual, x0, 1e-9, 60, {1e-6, 1e-6});
    if (!r.converged) throw NoConvergence("fit_coupling: Newton iteration did not reach the targets");

    CouplingFit out;
    std::vector<std::string> in{"bound_freq=" + format_double(bound_freq), "dip_freq=" + format_double(dip_freq)};
    double res = std::hypot(r.residual[0], r.residual[1]);
    out.g = {"g", r.x[0], g_bracket.first, g_bracket.second, "bound-state and dip frequency match", res, in};
    out.omega01 = {"omega01", r.x[1], w_bracket.first, w_bracket.second, "bound-state and dip frequency match", res,
                   in};
    if (!out.g.in_bracket() || !out.omega01.in_bracket())
        throw OutOfBracket("fit_coupling: solution (" + format_double(r.x[0]) + ", " + format_double(r.x[1]) +
                           ") outside the accepted range");
    out.bound = r.residual[0] + bound_freq;
    out.dip = r.residual[1] + dip_freq;
    return out;
}

// Method-one full width at half power of the in-gap bound state.
inline double bound_state_fwhm(const LatticeModel& m, double window = 0.03, std::size_t points = 1201) {
    const double edge = passband(m).first;
    double e = bound_state_eigenvalue(m, edge);
    auto t = sweep_s21(m, Method::steady_state, e - window, std::min(e + window, edge), points);
    return find_bound_state_peak(t, e - window, std::min(e + window, edge)).fwhm;
}

// kappa_q such that the bound-state fwhm equals the measured one.
inline FitReport fit_qubit_halfwidth(double fwhm, const LatticeModel& model,
                                     std::pair<double, double> bracket = {0.0, 0.005}) {
    if (!(fwhm > 0)) throw InvalidArgument("fit_qubit_halfwidth: fwhm must be positive");
    LatticeModel m = model;
    auto f = [&](double kq) {
        m.losses.kappa_q = kq;
        return bound_state_fwhm(m) - fwhm;
    };
    double flo = f(bracket.first), fhi = f(bracket.second);
    if (flo > 0 || fhi < 0)
        throw OutOfBracket("fit_qubit_halfwidth: measured fwhm " + format_double(fwhm) +
                           " not reachable with kappa_q in [" + format_double(bracket.first) + ", " +
                           format_double(bracket.second) + "]");
    double kq = flo == 0 ? bracket.first : num::brent(f, bracket.first, bracket.second, 1e-10).x;
    FitReport r{"kappa_q", kq, bracket.first, bracket.second, "bound-state fwhm match", std::abs(f(kq)),
                {"fwhm=" + format_double(fwhm)}};
    return r;
}

// Delta of qubit `which` reproducing the measured dressed anharmonicity when
// the single-excitation bound state sits at `anchor` (GHz).
inline FitReport fit_anharmonicity(double measured, const LatticeModel& model, int which, double anchor = 7.0,
                                   std::pair<double, double> bracket = {0.0, 1.0}) {
    if (which < 0 || which >= static_cast<int>(model.qubits.size()))
        throw InvalidArgument("fit_anharmonicity: qubit index out of range");
    LatticeModel m = model;
    const double edge = passband(only_qubit(m, which)).first;
    if (!(anchor < edge)) throw InvalidArgument("fit_anharmonicity: anchor must lie below the band");
    double w = bare_frequency_for_bound_state(m, which, anchor, anchor - 3.0, edge + 2.0);
    auto f = [&](double d) {
        m.qubits[which].delta = d;
        return dressed_anharmonicity(m, which, w).value - measured;
    };
    double flo = f(bracket.first), fhi = f(bracket.second);
    if (flo * fhi > 0)
        throw NoConvergence("fit_anharmonicity: no Delta in [" + format_double(bracket.first) + ", " +
                            format_double(bracket.second) + "] gives " + format_double(measured));
    double d = flo == 0 ? bracket.first : (fhi == 0 ? bracket.second : num::brent(f, bracket.first, bracket.second, 1e-10).x);
    return {"delta", d, bracket.first, bracket.second, "dressed anharmonicity match at the anchor", std::abs(f(d)),
            {"anharmonicity=" + format_double(measured), "anchor=" + format_double(anchor),
             "omega01=" + format_double(w)}};
}

} // namespace bgqed
