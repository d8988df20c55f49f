#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include <json.hpp>

#include "crystal.hpp"
#include "errors.hpp"
#include "numerics/eigen.hpp"
#include "numerics/quadrature.hpp"

namespace bgqed {

struct HoppingCoefficients {
    std::vector<double> j;  // j[r] couples sites r apart; j[0] is the on-site frequency

    int range() const { return static_cast<int>(j.size()) - 1; }
    double at(int r) const {
        r = std::abs(r);
        return r < static_cast<int>(j.size()) ? j[r] : 0.0;
    }
};

// Published coupled-cavity coefficients for the reference device.
inline HoppingCoefficients reference_hoppings() {
    return {{9.3272, 0.7288, -0.0344, 0.0178, -0.0034, 0.0014}};
}

struct HoppingOptions {
    double abs_tol = 1e-9;
    double imag_tol = 1e-8;
};

// J_r = (1/2pi) Int_{-pi}^{pi} e^{i q r} w(q) dq for a band w(q), q = ka.
inline HoppingCoefficients hopping_from_band(const std::function<double(double)>& band, int max_range,
                                             const HoppingOptions& opt = {}) {
    if (max_range < 0) throw InvalidArgument("hopping_coefficients: max_range must be >= 0");
    std::map<double, double> cache;
    auto w = [&](double q) {
        double key = std::abs(q);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        double v = band(key);
        cache.emplace(key, v);
        return v;
    };
    HoppingCoefficients h;
    const double pi = std::numbers::pi;
    for (int r = 0; r <= max_range; ++r) {
        auto re = num::integrate([&](double q) { return std::cos(q * r) * w(q); }, -pi, pi,
                                 opt.abs_tol * 2 * pi, 0.0);
        auto im = num::integrate([&](double q) { return std::sin(q * r) * w(q); }, -pi, pi,
                                 opt.abs_tol * 2 * pi, 0.0);
        double jr = re.value / (2 * pi), ji = im.value / (2 * pi);
        if (std::abs(ji) > opt.imag_tol)
            throw NonRealHopping("hopping_coefficients: imaginary part " + std::to_string(ji) +
                                 " at range " + std::to_string(r));
        h.j.push_back(jr);
    }
    return h;
}

inline HoppingCoefficients hopping_coefficients(const UnitCell& cell, int max_range = 5, int band_index = 2,
                                                const HoppingOptions& opt = {}) {
    cell.validate();
    return hopping_from_band([&](double q) { return dispersion_reduced(cell, band_index, q); }, max_range, opt);
}

// Lattice dispersion of a hopping set: w(q) = J0 + 2 sum_r J_r cos(q r).
inline double hopping_band(const HoppingCoefficients& h, double q) {
    double w = h.j.empty() ? 0.0 : h.j[0];
    for (int r = 1; r <= h.range(); ++r) w += 2.0 * h.j[r] * std::cos(q * r);
    return w;
}

struct QubitSpec {
    int site = 1;          // 1-based
    double omega01 = 0.0;  // GHz
    double delta = 0.0;    // GHz, positive for a transmon
    double g = 0.0;        // GHz
    int n_levels = 3;
    bool active = true;

    double level(int n) const { return n * omega01 - 0.5 * n * (n - 1) * delta; }
};

struct LossParams {
    double kappa = 0.0;
    double kappa0 = 0.0;
    double kappa_q = 0.0;
};

struct DriveParams {
    double omega_d = 0.0;
    double epsilon = 0.0;
    double rabi = 0.0;

    void validate() const {
        if (!(omega_d > 0) || epsilon < 0 || rabi < 0)
            throw InvalidArgument("DriveParams: need omega_d > 0, epsilon >= 0, rabi >= 0");
    }
};

struct LatticeModel {
    int n_sites = 16;
    HoppingCoefficients hoppings = reference_hoppings();
    std::vector<QubitSpec> qubits;
    LossParams losses;

    void validate() const {
        if (n_sites < 1) throw InvalidArgument("LatticeModel: n_sites must be >= 1");
        if (hoppings.j.empty()) throw InvalidArgument("LatticeModel: no hopping coefficients");
        if (hoppings.range() >= n_sites)
            throw InvalidArgument("LatticeModel: hopping range must be below n_sites");
        for (std::size_t i = 0; i < qubits.size(); ++i) {
            const auto& q = qubits[i];
            if (q.site < 1 || q.site > n_sites)
                throw InvalidArgument("LatticeModel: qubit " + std::to_string(i) + " site out of range");
            if (q.n_levels < 2 || q.n_levels > 5)
                throw InvalidArgument("LatticeModel: qubit " + std::to_string(i) + " n_levels must be 2..5");
            for (std::size_t k = 0; k < i; ++k)
                if (qubits[k].active && q.active && qubits[k].site == q.site)
                    throw InvalidArgument("LatticeModel: two qubits share site " + std::to_string(q.site));
        }
        if (losses.kappa < 0 || losses.kappa0 < 0 || losses.kappa_q < 0)
            throw InvalidArgument("LatticeModel: losses must be non-negative");
    }

    std::vector<int> active_qubits() const {
        std::vector<int> idx;
        for (std::size_t i = 0; i < qubits.size(); ++i)
            if (qubits[i].active) idx.push_back(static_cast<int>(i));
        return idx;
    }
};

// Reference two-qubit device: 16 sites, qubits on the two central sites, the
// first one parked deep in the gap.
inline LatticeModel reference_model(double omega01_2 = 7.9875, double parked = 4.5) {
    LatticeModel m;
    m.qubits = {QubitSpec{8, parked, 0.365, 0.505, 3, true}, QubitSpec{9, omega01_2, 0.365, 0.55, 3, true}};
    m.losses = {1.0, 0.004, 0.0005};
    return m;
}

// ---- basis -------------------------------------------------------------

// A configuration is the occupation vector (photons on sites 1..N followed by
// the levels of the active qubits).
using Occupation = std::vector<std::uint8_t>;

struct SectorBasis {
    int n_sites = 0;
    std::vector<int> qubit_index;   // model index of each active qubit
    std::vector<int> qubit_levels;  // level cap per active qubit
    int n_excitations = -1;         // -1 for a photon-truncated (non-conserving) basis
    int photon_cutoff = -1;
    std::vector<Occupation> states;
    std::map<Occupation, int> lookup;

    std::size_t size() const { return states.size(); }
    int photons(int idx) const {
        int s = 0;
        for (int i = 0; i < n_sites; ++i) s += states[idx][i];
        return s;
    }
    int qubit_level(int idx, int q) const { return states[idx][n_sites + q]; }
    int find(const Occupation& o) const {
        auto it = lookup.find(o);
        return it == lookup.end() ? -1 : it->second;
    }
};

namespace detail {

// Descending lexicographic enumeration of bounded occupation vectors with a
// fixed (or capped) total.
inline void enumerate(std::vector<int> caps, int total, bool exact, std::vector<Occupation>& out) {
    Occupation cur(caps.size(), 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int left) {
        if (pos == caps.size()) {
            if (!exact || left == 0) out.push_back(cur);
            return;
        }
        for (int v = std::min(caps[pos], left); v >= 0; --v) {
            cur[pos] = static_cast<std::uint8_t>(v);
            rec(pos + 1, left - v);
        }
        cur[pos] = 0;
    };
    rec(0, total);
}

inline SectorBasis make_basis_shell(const LatticeModel& m) {
    m.validate();
    SectorBasis b;
    b.n_sites = m.n_sites;
    for (int i : m.active_qubits()) {
        b.qubit_index.push_back(i);
        b.qubit_levels.push_back(m.qubits[i].n_levels);
    }
    return b;
}

inline void index_basis(SectorBasis& b) {
    for (std::size_t i = 0; i < b.states.size(); ++i) b.lookup.emplace(b.states[i], static_cast<int>(i));
}

} // namespace detail

inline SectorBasis build_sector_basis(const LatticeModel& m, int n_excitations) {
    if (n_excitations < 0) throw InvalidArgument("build_sector_basis: n_excitations must be >= 0");
    auto b = detail::make_basis_shell(m);
    b.n_excitations = n_excitations;
    std::vector<int> caps(m.n_sites, n_excitations);
    for (int l : b.qubit_levels) caps.push_back(l - 1);
    detail::enumerate(caps, n_excitations, true, b.states);
    detail::index_basis(b);
    return b;
}

// Full product space of the active qubit ladders with at most photon_cutoff
// photons in total; excitation number is not fixed.
inline SectorBasis build_truncated_basis(const LatticeModel& m, int photon_cutoff) {
    if (photon_cutoff < 0) throw InvalidArgument("build_truncated_basis: photon_cutoff must be >= 0");
    auto b = detail::make_basis_shell(m);
    b.photon_cutoff = photon_cutoff;
    std::vector<Occupation> qpart, ppart;
    detail::enumerate(std::vector<int>(m.n_sites, photon_cutoff), photon_cutoff, false, ppart);
    std::vector<int> qcaps;
    for (int l : b.qubit_levels) qcaps.push_back(l - 1);
    int qmax = 0;
    for (int c : qcaps) qmax += c;
    detail::enumerate(qcaps, qmax, false, qpart);
    std::reverse(qpart.begin(), qpart.end());  // ground state first
    // ordered by qubit configuration, then photon configuration by photon number
    std::stable_sort(ppart.begin(), ppart.end(), [](const Occupation& a, const Occupation& c) {
        int na = 0, nc = 0;
        for (auto v : a) na += v;
        for (auto v : c) nc += v;
        return na < nc;
    });
    for (const auto& q : qpart)
        for (const auto& p : ppart) {
            Occupation o = p;
            o.insert(o.end(), q.begin(), q.end());
            b.states.push_back(std::move(o));
        }
    detail::index_basis(b);
    return b;
}

// ---- Hamiltonians ------------------------------------------------------

namespace detail {

inline void check_basis(const LatticeModel& m, const SectorBasis& b) {
    bool ok = b.n_sites == m.n_sites;
    auto act = m.active_qubits();
    ok = ok && act.size() == b.qubit_index.size();
    for (std::size_t i = 0; ok && i < act.size(); ++i)
        ok = act[i] == b.qubit_index[i] && m.qubits[act[i]].n_levels == b.qubit_levels[i];
    if (!ok) throw BasisMismatch("basis was not built from this model");
}

// Shared assembly; drive_rabi < 0 means no drive and no rotating frame.
inline num::SparseMat assemble(const LatticeModel& m, const SectorBasis& b, double omega_d, double rabi) {
    check_basis(m, b);
    const int n = m.n_sites, nq = static_cast<int>(b.qubit_index.size());
    const int range = m.hoppings.range();
    std::vector<Eigen::Triplet<double>> trip;
    for (int k = 0; k < static_cast<int>(b.size()); ++k) {
        const Occupation& s = b.states[k];
        int nph = 0, nexc = 0;
        double diag = 0.0;
        for (int i = 0; i < n; ++i) nph += s[i];
        diag += m.hoppings.j[0] * nph;
        nexc += nph;
        for (int q = 0; q < nq; ++q) {
            int lv = s[n + q];
            diag += m.qubits[b.qubit_index[q]].level(lv);
            nexc += lv;
        }
        if (rabi >= 0.0) diag -= nexc * omega_d;
        trip.emplace_back(k, k, diag);

        // photon hopping a_j^dag a_i
        for (int i = 0; i < n; ++i) {
            if (s[i] == 0) continue;
            for (int j = std::max(0, i - range); j <= std::min(n - 1, i + range); ++j) {
                if (j == i) continue;
                double jr = m.hoppings.j[std::abs(i - j)];
                if (jr == 0.0) continue;
                Occupation t = s;
                double amp = std::sqrt(static_cast<double>(s[i]) * (s[j] + 1));
                t[i] -= 1;
                t[j] += 1;
                int idx = b.find(t);
                if (idx >= 0) trip.emplace_back(idx, k, jr * amp);
            }
        }
        // qubit lowering with photon creation, both orderings added here
        for (int q = 0; q < nq; ++q) {
            int lv = s[n + q];
            if (lv == 0) continue;
            const auto& spec = m.qubits[b.qubit_index[q]];
            int site = spec.site - 1;
            if (spec.g != 0.0) {
                Occupation t = s;
                t[n + q] -= 1;
                t[site] += 1;
                int idx = b.find(t);
                if (idx >= 0) {
                    double v = spec.g * std::sqrt(static_cast<double>(lv) * (s[site] + 1));
                    trip.emplace_back(idx, k, v);
                    trip.emplace_back(k, idx, v);
                }
            }
            if (rabi > 0.0) {
                Occupation t = s;
                t[n + q] -= 1;
                int idx = b.find(t);
                if (idx >= 0) {
                    double v = rabi * std::sqrt(static_cast<double>(lv));
                    trip.emplace_back(idx, k, v);
                    trip.emplace_back(k, idx, v);
                }
            }
        }
    }
    num::SparseMat h(b.size(), b.size());
    h.setFromTriplets(trip.begin(), trip.end());
    h.makeCompressed();
    return h;
}

} // namespace detail

// Excitation-conserving Hamiltonian restricted to the basis (GHz).
inline num::SparseMat assemble_hamiltonian(const LatticeModel& m, const SectorBasis& b) {
    return detail::assemble(m, b, 0.0, -1.0);
}

struct DrivenMatrix {
    num::SparseMat h;
    std::vector<std::string> warnings;
};

// Rotating-frame Hamiltonian with a classical drive on every active qubit
// ladder. The basis is the photon-truncated product space.
inline DrivenMatrix assemble_driven_hamiltonian(const LatticeModel& m, const DriveParams& drive,
                                                const SectorBasis& b, int needed_photons = 0) {
    drive.validate();
    if (b.photon_cutoff < 1) throw InvalidArgument("assemble_driven_hamiltonian: photon_cutoff must be >= 1");
    DrivenMatrix out{detail::assemble(m, b, drive.omega_d, drive.rabi), {}};
    if (needed_photons > b.photon_cutoff)
        out.warnings.push_back("CutoffTooSmall: analysis needs " + std::to_string(needed_photons) +
                               " photons, cutoff is " + std::to_string(b.photon_cutoff));
    return out;
}

inline DrivenMatrix assemble_driven_hamiltonian(const LatticeModel& m, const DriveParams& drive,
                                                int photon_cutoff) {
    auto b = build_truncated_basis(m, photon_cutoff);
    return assemble_driven_hamiltonian(m, drive, b);
}

inline num::MatrixXd dense(const num::SparseMat& h) { return num::MatrixXd(h); }

// Lowest k eigenpairs of a sector Hamiltonian, dense for small sectors.
inline num::Eigensystem lowest_eigenpairs(const num::SparseMat& h, int k) {
    if (h.rows() <= 1500) {
        auto es = num::dense_eigensystem(dense(h));
        int kk = std::min<int>(k, static_cast<int>(h.rows()));
        return {es.values.head(kk), es.vectors.leftCols(kk)};
    }
    // Gershgorin lower bound as the shift
    double lo = 0.0;
    bool first = true;
    for (int c = 0; c < h.outerSize(); ++c) {
        double d = 0.0, off = 0.0;
        for (num::SparseMat::InnerIterator it(h, c); it; ++it) {
            if (it.row() == it.col()) d = it.value();
            else off += std::abs(it.value());
        }
        if (first || d - off < lo) lo = d - off;
        first = false;
    }
    return num::eigs_near(h, lo - 1e-3, k);
}

// Single-excitation matrix in the natural order (sites 1..N, then active
// qubits); for n=1 the sector basis already has this order.
inline num::MatrixXd single_excitation_matrix(const LatticeModel& m) {
    return dense(assemble_hamiltonian(m, build_sector_basis(m, 1)));
}

// ---- JSON --------------------------------------------------------------

inline nlohmann::ordered_json to_json(const LatticeModel& m) {
    nlohmann::ordered_json j;
    j["n_sites"] = m.n_sites;
    j["hoppings"] = m.hoppings.j;
    j["qubits"] = nlohmann::ordered_json::array();
    for (const auto& q : m.qubits) {
        nlohmann::ordered_json jq;
        jq["site"] = q.site;
        jq["omega01"] = q.omega01;
        jq["delta"] = q.delta;
        jq["g"] = q.g;
        jq["n_levels"] = q.n_levels;
        jq["active"] = q.active;
        j["qubits"].push_back(jq);
    }
    j["losses"] = {{"kappa", m.losses.kappa}, {"kappa0", m.losses.kappa0}, {"kappa_q", m.losses.kappa_q}};
    return j;
}

inline LatticeModel lattice_from_json(const nlohmann::ordered_json& j) {
    LatticeModel m;
    auto field = [](const nlohmann::ordered_json& o, const char* key, const std::string& path) {
        if (!o.contains(key)) throw ConfigError("missing field '" + path + key + "'");
        return o.at(key);
    };
    try {
        m.n_sites = field(j, "n_sites", "").get<int>();
        m.hoppings.j = field(j, "hoppings", "").get<std::vector<double>>();
        m.qubits.clear();
        if (j.contains("qubits")) {
            int i = 0;
            for (const auto& jq : j.at("qubits")) {
                std::string p = "qubits[" + std::to_string(i++) + "].";
                QubitSpec q;
                q.site = field(jq, "site", p).get<int>();
                q.omega01 = field(jq, "omega01", p).get<double>();
                q.delta = jq.value("delta", 0.0);
                q.g = field(jq, "g", p).get<double>();
                q.n_levels = jq.value("n_levels", 3);
                q.active = jq.value("active", true);
                m.qubits.push_back(q);
            }
        }
        if (j.contains("losses")) {
            const auto& l = j.at("losses");
            m.losses = {l.value("kappa", 0.0), l.value("kappa0", 0.0), l.value("kappa_q", 0.0)};
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("lattice model: ") + e.what());
    }
    try {
        m.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }
    return m;
}

} // namespace bgqed
