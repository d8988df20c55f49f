#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "boundstates.hpp"
#include "errors.hpp"
#include "lattice.hpp"
#include "numerics/eigen.hpp"
#include "numerics/optimize.hpp"
#include "numerics/parallel.hpp"
#include "transmission.hpp"

namespace bgqed {

// ---- anharmonicity -------------------------------------------------------

struct AnharmonicityPoint {
    double e1 = 0.0;    // lowest single-excitation eigenvalue
    double e2 = 0.0;    // lowest two-excitation eigenvalue
    double value = 0.0; // 2 e1 - e2, positive for a softening ladder
};

// Dressed anharmonicity of qubit `which` (all other qubits removed) at bare
// frequency omega01.
inline AnharmonicityPoint dressed_anharmonicity(const LatticeModel& model, int which, double omega01) {
    LatticeModel m = only_qubit(model, which);
    m.qubits[which].omega01 = omega01;
    if (m.qubits[which].n_levels < 3) throw InvalidArgument("dressed_anharmonicity: qubit needs >= 3 levels");
    AnharmonicityPoint p;
    p.e1 = num::dense_eigenvalues(single_excitation_matrix(m))[0];
    p.e2 = lowest_eigenpairs(assemble_hamiltonian(m, build_sector_basis(m, 2)), 1).values[0];
    p.value = 2.0 * p.e1 - p.e2;
    return p;
}

// Bare frequency at which qubit `which` alone produces a single-excitation
// ground state at `target` (GHz).
inline double bare_frequency_for_bound_state(const LatticeModel& model, int which, double target, double lo,
                                             double hi) {
    LatticeModel m = only_qubit(model, which);
    auto f = [&](double w) {
        m.qubits[which].omega01 = w;
        return num::dense_eigenvalues(single_excitation_matrix(m))[0] - target;
    };
    return num::brent(f, lo, hi, 1e-12).x;
}

// ---- one-excitation crossings ----------------------------------------------

struct CrossingScan {
    std::vector<double> sweep_values;
    std::vector<std::vector<double>> eigen_traces;  // in-gap eigenvalues per sweep point
    double min_gap = 0.0;
    double gap_location = 0.0;
    std::vector<std::string> warnings;
};

inline std::vector<double> linspace(double a, double b, std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / (n - 1);
    return v;
}

// Sweeps qubit `swept` across [lo, hi] with qubit `fixed` at fixed_freq and
// records the single-excitation eigenvalues below the lattice band. The gap
// is between the two lowest states, refined by golden-section search.
inline CrossingScan one_excitation_crossing(const LatticeModel& model, int fixed, double fixed_freq, int swept,
                                            double lo, double hi, std::size_t points = 201) {
    if (fixed == swept) throw InvalidArgument("one_excitation_crossing: fixed and swept qubit must differ");
    LatticeModel m = model;
    m.qubits.at(fixed).omega01 = fixed_freq;
    m.qubits.at(fixed).active = m.qubits.at(swept).active = true;
    const double edge = passband(m).first;
    CrossingScan s;
    s.sweep_values = linspace(lo, hi, points);
    s.eigen_traces.resize(points);
    std::vector<double> gaps(points);
    num::parallel_for(points, [&](std::size_t i) {
        LatticeModel mm = m;
        mm.qubits[swept].omega01 = s.sweep_values[i];
        auto ev = num::dense_eigenvalues(single_excitation_matrix(mm));
        for (Eigen::Index k = 0; k < ev.size() && ev[k] < edge; ++k) s.eigen_traces[i].push_back(ev[k]);
        gaps[i] = ev[1] - ev[0];
    });
    for (std::size_t i = 1; i < points; ++i)
        if (s.eigen_traces[i].size() != s.eigen_traces[i - 1].size()) {
            s.warnings.push_back("BranchTracking: in-gap state count changes near " + format_double(s.sweep_values[i]));
            break;
        }
    auto k = std::min_element(gaps.begin(), gaps.end()) - gaps.begin();
    auto gap_at = [&](double w) {
        LatticeModel mm = m;
        mm.qubits[swept].omega01 = w;
        auto ev = num::dense_eigenvalues(single_excitation_matrix(mm));
        return ev[1] - ev[0];
    };
    double a = s.sweep_values[std::max<long>(0, k - 1)];
    double b = s.sweep_values[std::min<long>(points - 1, k + 1)];
    auto r = num::golden_minimize(gap_at, a, b, 1e-9);
    s.min_gap = std::min(r.fx, gaps[k]);
    s.gap_location = r.fx <= gaps[k] ? r.x : s.sweep_values[k];
    return s;
}

// Splitting of the two lowest single-excitation states with both qubits at
// the same bare frequency.
inline double resonant_pair_gap(const LatticeModel& model, int q1, int q2, double freq) {
    LatticeModel m = model;
    m.qubits.at(q1).omega01 = freq;
    m.qubits.at(q2).omega01 = freq;
    m.qubits[q1].active = m.qubits[q2].active = true;
    auto ev = num::dense_eigenvalues(single_excitation_matrix(m));
    return ev[1] - ev[0];
}

// ---- two-excitation crossings ----------------------------------------------

// Bare two-qubit configurations used as labels: (2,0), (0,2), (1,1).
inline const std::array<std::string, 3>& pair_labels() {
    static const std::array<std::string, 3> l = {"20", "02", "11"};
    return l;
}

struct TwoExcitationCrossing {
    std::string pair;  // e.g. "20-02"
    double location = 0.0;
    double gap = 0.0;
};

struct TwoExcitationScan {
    std::vector<double> sweep_values;
    std::vector<std::array<double, 3>> energies;  // three lowest two-excitation eigenvalues
    std::vector<std::array<int, 3>> labels;       // dominant bare label per adiabatic state
    std::vector<std::array<int, 3>> branches;     // overlap-continued branch index per state
    std::vector<std::vector<double>> one_excitation;  // in-gap single-excitation levels
    std::vector<TwoExcitationCrossing> crossings;
    std::vector<std::string> warnings;

    const TwoExcitationCrossing* find(const std::string& pair) const {
        for (const auto& c : crossings) {
            if (c.pair == pair) return &c;
            std::string rev = pair.substr(3, 2) + "-" + pair.substr(0, 2);
            if (c.pair == rev) return &c;
        }
        return nullptr;
    }
};

namespace detail {

struct TwoExcitationPoint {
    std::array<double, 3> e{};
    std::array<std::array<double, 3>, 3> w{};  // w[state][label]
    Eigen::MatrixXd vecs;
};

inline TwoExcitationPoint two_excitation_point(const LatticeModel& m, const SectorBasis& basis, int qa, int qb) {
    auto es = num::dense_eigensystem(dense(assemble_hamiltonian(m, basis)));
    TwoExcitationPoint p;
    p.vecs = es.vectors.leftCols(3);
    for (int s = 0; s < 3; ++s) {
        p.e[s] = es.values[s];
        p.w[s] = {0, 0, 0};
        for (int i = 0; i < static_cast<int>(basis.size()); ++i) {
            if (basis.photons(i) != 0) continue;
            int la = basis.qubit_level(i, qa), lb = basis.qubit_level(i, qb);
            int lab = (la == 2) ? 0 : (lb == 2) ? 1 : 2;
            p.w[s][lab] += es.vectors(i, s) * es.vectors(i, s);
        }
    }
    return p;
}

} // namespace detail

// Sweeps qubit `swept` with qubit `fixed` held at fixed_freq and follows the
// (2,0), (0,2) and (1,1)-like levels of the two-excitation manifold. Labels
// are given from the fixed qubit's point of view: "20" has the fixed qubit
// doubly excited.
inline TwoExcitationScan two_excitation_crossing(const LatticeModel& model, int fixed, double fixed_freq, int swept,
                                                 double lo, double hi, std::size_t points = 201) {
    if (fixed == swept) throw InvalidArgument("two_excitation_crossing: fixed and swept qubit must differ");
    LatticeModel m = model;
    for (auto& q : m.qubits) q.active = false;
    m.qubits.at(fixed).active = m.qubits.at(swept).active = true;
    m.qubits[fixed].omega01 = fixed_freq;
    if (m.qubits[fixed].n_levels < 3 || m.qubits[swept].n_levels < 3)
        throw InvalidArgument("two_excitation_crossing: both qubits need >= 3 levels");
    auto basis = build_sector_basis(m, 2);
    // positions of the two qubits inside the basis
    int qa = -1, qb = -1;
    for (int i = 0; i < static_cast<int>(basis.qubit_index.size()); ++i) {
        if (basis.qubit_index[i] == fixed) qa = i;
        if (basis.qubit_index[i] == swept) qb = i;
    }
    const double edge = passband(m).first;

    TwoExcitationScan s;
    s.sweep_values = linspace(lo, hi, points);
    std::vector<detail::TwoExcitationPoint> pts(points);
    s.one_excitation.resize(points);
    num::parallel_for(points, [&](std::size_t i) {
        LatticeModel mm = m;
        mm.qubits[swept].omega01 = s.sweep_values[i];
        pts[i] = detail::two_excitation_point(mm, basis, qa, qb);
        auto ev = num::dense_eigenvalues(single_excitation_matrix(mm));
        for (Eigen::Index k = 0; k < ev.size() && ev[k] < edge; ++k) s.one_excitation[i].push_back(ev[k]);
    });
    s.energies.resize(points);
    s.labels.resize(points);
    s.branches.resize(points);
    for (std::size_t i = 0; i < points; ++i) {
        s.energies[i] = pts[i].e;
        for (int st = 0; st < 3; ++st)
            s.labels[i][st] = static_cast<int>(std::max_element(pts[i].w[st].begin(), pts[i].w[st].end()) -
                                               pts[i].w[st].begin());
    }
    // maximum-overlap continuation of branch identities
    s.branches[0] = {0, 1, 2};
    bool flagged = false;
    for (std::size_t i = 1; i < points; ++i) {
        Eigen::Matrix3d ov = (pts[i - 1].vecs.transpose() * pts[i].vecs).cwiseAbs();
        std::array<int, 3> perm{0, 1, 2}, best = perm;
        double bestscore = -1;
        do {
            double sc = ov(perm[0], 0) + ov(perm[1], 1) + ov(perm[2], 2);
            if (sc > bestscore) {
                bestscore = sc;
                best = perm;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
        for (int st = 0; st < 3; ++st) {
            s.branches[i][st] = s.branches[i - 1][best[st]];
            if (ov(best[st], st) < 0.5 && !flagged) {
                s.warnings.push_back("BranchTracking: overlap below 0.5 near " + format_double(s.sweep_values[i]));
                flagged = true;
            }
        }
    }

    // local minima of the adjacent gaps, named by the two labels that carry
    // most of the weight of the pair of states
    for (int pair = 0; pair < 2; ++pair) {
        std::vector<double> gap(points);
        for (std::size_t i = 0; i < points; ++i) gap[i] = pts[i].e[pair + 1] - pts[i].e[pair];
        for (std::size_t i = 1; i + 1 < points; ++i) {
            if (!(gap[i] <= gap[i - 1] && gap[i] < gap[i + 1])) continue;
            std::array<double, 3> tot{};
            for (int l = 0; l < 3; ++l) tot[l] = pts[i].w[pair][l] + pts[i].w[pair + 1][l];
            std::array<int, 3> order{0, 1, 2};
            std::sort(order.begin(), order.end(), [&](int a, int b) { return tot[a] > tot[b]; });
            auto gap_at = [&](double w) {
                LatticeModel mm = m;
                mm.qubits[swept].omega01 = w;
                auto ev = num::dense_eigenvalues(dense(assemble_hamiltonian(mm, basis)));
                return ev[pair + 1] - ev[pair];
            };
            auto r = num::golden_minimize(gap_at, s.sweep_values[i - 1], s.sweep_values[i + 1], 1e-9);
            int a = std::min(order[0], order[1]), b = std::max(order[0], order[1]);
            s.crossings.push_back({pair_labels()[a] + "-" + pair_labels()[b], r.x, r.fx});
        }
    }
    std::sort(s.crossings.begin(), s.crossings.end(),
              [](const auto& a, const auto& b) { return a.location < b.location; });
    return s;
}

// ---- driven emission ---------------------------------------------------------

struct SidebandSet {
    DriveParams drive;
    std::vector<double> levels;     // selected rotating-frame eigenvalues, ascending
    std::vector<double> weights;    // zero-photon weight of each selected state
    std::vector<double> sidebands;  // lab-frame emission frequencies, ascending
    std::vector<std::string> warnings;
};

inline std::vector<double> pairwise_lines(const std::vector<double>& levels, double omega_d) {
    std::vector<double> out;
    for (std::size_t i = 0; i < levels.size(); ++i)
        for (std::size_t j = 0; j < levels.size(); ++j)
            if (i != j) out.push_back(omega_d + levels[i] - levels[j]);
    out.push_back(omega_d);
    std::sort(out.begin(), out.end());
    return out;
}

struct EmissionOptions {
    int photon_cutoff = 3;
    int tracked_levels = 3;   // number of zero-photon-dominated states kept
    int eigs_per_shift = 12;
};

// Driven ladder of a dressed qubit: diagonal levels[n] (already relative to
// n omega_d), nearest-neighbour coupling rabi_reduced * sqrt(n).
inline std::vector<double> dressed_qubit_levels(const std::vector<double>& levels, double rabi_reduced) {
    const int n = static_cast<int>(levels.size());
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) h(i, i) = levels[i];
    for (int i = 1; i < n; ++i) h(i, i - 1) = h(i - 1, i) = rabi_reduced * std::sqrt(static_cast<double>(i));
    auto ev = num::dense_eigenvalues(h);
    return std::vector<double>(ev.data(), ev.data() + n);
}

namespace detail {

// Rotating-frame energies of the dressed ladder at zero drive: lowest state
// of each excitation block of the truncated space, with its zero-photon weight.
inline std::vector<std::pair<double, double>> undriven_states(const LatticeModel& m, const SectorBasis& b,
                                                              double omega_d, int levels) {
    std::vector<std::pair<double, double>> out;
    auto h = assemble_driven_hamiltonian(m, DriveParams{omega_d, 0.0, 0.0}, b).h;
    int nlev = b.qubit_levels.at(0);
    for (int n = 0; n < std::min(levels, nlev); ++n) {
        // restrict to the n-excitation block
        std::vector<int> idx;
        for (int i = 0; i < static_cast<int>(b.size()); ++i) {
            int tot = b.photons(i);
            for (int q = 0; q < static_cast<int>(b.qubit_levels.size()); ++q) tot += b.qubit_level(i, q);
            if (tot == n) idx.push_back(i);
        }
        num::SparseMat block(idx.size(), idx.size());
        std::vector<Eigen::Triplet<double>> trip;
        std::vector<int> pos(b.size(), -1);
        for (std::size_t k = 0; k < idx.size(); ++k) pos[idx[k]] = static_cast<int>(k);
        for (int c = 0; c < h.outerSize(); ++c)
            for (num::SparseMat::InnerIterator it(h, c); it; ++it)
                if (pos[it.row()] >= 0 && pos[it.col()] >= 0) trip.emplace_back(pos[it.row()], pos[it.col()], it.value());
        block.setFromTriplets(trip.begin(), trip.end());
        auto es = lowest_eigenpairs(block, 1);
        double w = 0;
        for (std::size_t k = 0; k < idx.size(); ++k)
            if (b.photons(idx[k]) == 0) w += es.vectors(k, 0) * es.vectors(k, 0);
        out.emplace_back(es.values[0], w);
    }
    return out;
}

inline std::vector<double> undriven_ladder(const LatticeModel& m, const SectorBasis& b, double omega_d, int levels) {
    std::vector<double> out;
    for (auto& [e, w] : undriven_states(m, b, omega_d, levels)) out.push_back(e);
    return out;
}

} // namespace detail

// Emission lines of a driven single-qubit model: eigenstates with the largest
// weight on zero-photon qubit states, and all differences of their energies.
inline SidebandSet emission_sidebands(const LatticeModel& model, const DriveParams& drive,
                                      const EmissionOptions& opt = {}) {
    drive.validate();
    if (model.active_qubits().size() != 1)
        throw InvalidArgument("emission_sidebands: model needs exactly one active qubit");
    auto basis = build_truncated_basis(model, opt.photon_cutoff);
    int nlev = basis.qubit_levels[0];
    int tracked = std::min(opt.tracked_levels, nlev);
    SidebandSet out;
    out.drive = drive;
    auto dm = assemble_driven_hamiltonian(model, drive, basis, tracked - 1);
    out.warnings = dm.warnings;

    // without drive the blocks decouple and may be exactly degenerate
    if (drive.rabi == 0.0) {
        auto st = detail::undriven_states(model, basis, drive.omega_d, tracked);
        std::sort(st.begin(), st.end());
        for (auto& [e, w] : st) {
            out.levels.push_back(e);
            out.weights.push_back(w);
        }
        out.sidebands = pairwise_lines(out.levels, drive.omega_d);
        return out;
    }

    std::vector<int> zero;
    for (int i = 0; i < static_cast<int>(basis.size()); ++i)
        if (basis.photons(i) == 0) zero.push_back(i);

    // one shift per tracked level, at the driven-ladder estimate built from
    // the undriven dressed levels
    auto ladder = detail::undriven_ladder(model, basis, drive.omega_d, tracked);
    std::vector<double> shifts = dressed_qubit_levels(ladder, drive.rabi);
    std::vector<std::pair<double, double>> cand;  // (energy, zero-photon weight)
    for (double sigma : shifts) {
        auto es = num::eigs_near(dm.h, sigma + 1.234567e-4, opt.eigs_per_shift);
        for (Eigen::Index k = 0; k < es.values.size(); ++k) {
            double e = es.values[k];
            bool dup = std::any_of(cand.begin(), cand.end(), [&](auto& c) { return std::abs(c.first - e) < 1e-9; });
            if (dup) continue;
            double w = 0;
            for (int i : zero) w += es.vectors(i, k) * es.vectors(i, k);
            cand.emplace_back(e, w);
        }
    }
    std::sort(cand.begin(), cand.end(), [](auto& a, auto& b) { return a.second > b.second; });
    if (static_cast<int>(cand.size()) < tracked) throw NoConvergence("emission_sidebands: too few candidate states");
    if (static_cast<int>(cand.size()) > tracked &&
        std::abs(cand[tracked - 1].second - cand[tracked].second) < 1e-6)
        throw AmbiguousSelection("emission_sidebands: states at " + format_double(cand[tracked - 1].first) + " and " +
                                 format_double(cand[tracked].first) + " tie in zero-photon weight");
    cand.resize(tracked);
    std::sort(cand.begin(), cand.end());
    for (auto& [e, w] : cand) {
        out.levels.push_back(e);
        out.weights.push_back(w);
    }
    out.sidebands = pairwise_lines(out.levels, drive.omega_d);
    return out;
}

// Undriven dressed ladder of a single-qubit model relative to n omega_d,
// from the photon-truncated space (level 0 is zero by construction).
inline std::vector<double> dressed_ladder(const LatticeModel& model, double omega_d, int levels, int photon_cutoff = 3) {
    auto basis = build_truncated_basis(model, photon_cutoff);
    return detail::undriven_ladder(model, basis, omega_d, levels);
}

inline SidebandSet dressed_qubit_sidebands(const std::vector<double>& levels, double omega_d, double rabi_reduced) {
    if (levels.empty()) throw InvalidArgument("dressed_qubit_sidebands: no levels");
    SidebandSet s;
    s.drive = {omega_d, 0.0, rabi_reduced};
    s.levels = dressed_qubit_levels(levels, rabi_reduced);
    s.weights.assign(s.levels.size(), 1.0);
    s.sidebands = pairwise_lines(s.levels, omega_d);
    return s;
}

// ---- JSON ---------------------------------------------------------------------

inline nlohmann::ordered_json to_json(const CrossingScan& s) {
    nlohmann::ordered_json j;
    j["sweep_ghz"] = s.sweep_values;
    j["eigenvalues_ghz"] = s.eigen_traces;
    j["min_gap_ghz"] = s.min_gap;
    j["gap_location_ghz"] = s.gap_location;
    j["warnings"] = s.warnings;
    return j;
}

inline nlohmann::ordered_json to_json(const TwoExcitationScan& s) {
    nlohmann::ordered_json j;
    j["sweep_ghz"] = s.sweep_values;
    j["two_excitation_ghz"] = s.energies;
    std::vector<std::array<std::string, 3>> names;
    for (const auto& l : s.labels) names.push_back({pair_labels()[l[0]], pair_labels()[l[1]], pair_labels()[l[2]]});
    j["labels"] = names;
    j["branches"] = s.branches;
    j["one_excitation_ghz"] = s.one_excitation;
    j["crossings"] = nlohmann::ordered_json::array();
    for (const auto& c : s.crossings) j["crossings"].push_back({{"pair", c.pair}, {"location_ghz", c.location}, {"gap_ghz", c.gap}});
    j["warnings"] = s.warnings;
    return j;
}

inline nlohmann::ordered_json to_json(const SidebandSet& s) {
    nlohmann::ordered_json j;
    j["omega_d_ghz"] = s.drive.omega_d;
    j["rabi_ghz"] = s.drive.rabi;
    j["levels_ghz"] = s.levels;
    j["zero_photon_weight"] = s.weights;
    j["sidebands_ghz"] = s.sidebands;
    j["warnings"] = s.warnings;
    return j;
}

} // namespace bgqed
