#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "lattice.hpp"
#include "numerics/quadrature.hpp"
#include "numerics/roots.hpp"

namespace bgqed {

// Infinite crystal with a quadratic band bottom w(q) = omega0 + alpha (q - pi)^2,
// q = ka. All energies GHz; distances and lengths in unit cells.
struct EdgeBand {
    double omega0 = 7.8;
    double alpha = 1.155;

    void validate() const {
        if (!(alpha > 0)) throw InvalidArgument("EdgeBand: alpha must be positive");
    }
};

enum class Parity { single, symmetric, antisymmetric };

inline std::string parity_name(Parity p) {
    switch (p) {
    case Parity::single: return "single";
    case Parity::symmetric: return "symmetric";
    default: return "antisymmetric";
    }
}

struct BoundStateSolution {
    double energy = 0.0;
    Parity parity = Parity::single;
    double localization_length = 0.0;  // unit cells
    double a1 = 1.0, a2 = 0.0;         // qubit amplitudes (unit vector)
    bool exists = false;
    double residual = 0.0;
};

inline nlohmann::ordered_json to_json(const BoundStateSolution& s) {
    nlohmann::ordered_json j;
    j["energy_ghz"] = s.energy;
    j["parity"] = parity_name(s.parity);
    j["localization_cells"] = s.localization_length;
    j["a1"] = s.a1;
    j["a2"] = s.a2;
    j["exists"] = s.exists;
    j["residual"] = s.residual;
    return j;
}

inline double localization_cells(const EdgeBand& b, double energy) {
    return std::sqrt(b.alpha / (b.omega0 - energy));
}

// Qubit self-energy and the photon-mediated exchange between qubits a
// distance d apart, for E below the edge (delta = omega0 - E > 0).
inline double self_energy(double g, double alpha, double delta) {
    return -g * g / (2.0 * std::sqrt(alpha * delta));
}
inline double exchange_energy(double g1, double g2, double alpha, double delta, int d) {
    double sign = (d % 2 == 0) ? 1.0 : -1.0;
    return -g1 * g2 * sign * std::exp(-d * std::sqrt(delta / alpha)) / (2.0 * std::sqrt(alpha * delta));
}

namespace detail {

// Root in delta of a decreasing function on (0, inf); lower_limit is the value
// of f as delta -> 0+ (may be +inf).
inline double solve_delta(const std::function<double(double)>& f, double hint) {
    double lo = 1e-14, hi = std::max(1.0, 4.0 * hint);
    while (f(hi) > 0) {
        hi *= 4.0;
        if (hi > 1e8) throw NoRoot("bound state: no root below the band edge");
    }
    while (f(lo) < 0) {
        lo *= 1e-3;
        if (lo < 1e-300) throw NoRoot("bound state: no root below the band edge");
    }
    // solve in log(delta) for uniform relative accuracy near the edge
    auto r = num::brent([&](double u) { return f(std::exp(u)); }, std::log(lo), std::log(hi), 1e-15);
    return std::exp(r.x);
}

} // namespace detail

// E - omega01 = -g^2 / (2 sqrt(alpha (omega0 - E))), unique root below omega0.
inline BoundStateSolution single_qubit_bound_energy(double omega01, double g, const EdgeBand& b) {
    b.validate();
    BoundStateSolution s;
    s.parity = Parity::single;
    if (g == 0.0) {
        s.exists = omega01 < b.omega0;
        s.energy = std::min(omega01, b.omega0);
        s.localization_length = s.exists ? localization_cells(b, omega01) : std::numeric_limits<double>::infinity();
        return s;
    }
    auto f = [&](double delta) { return b.omega0 - delta - omega01 - self_energy(g, b.alpha, delta); };
    double delta = detail::solve_delta(f, std::abs(b.omega0 - omega01) + g);
    s.energy = b.omega0 - delta;
    s.residual = s.energy - omega01 - self_energy(g, b.alpha, delta);
    s.localization_length = std::sqrt(b.alpha / delta);
    double tan2 = g * g / (4.0 * std::pow(delta, 1.5) * std::sqrt(b.alpha));
    s.a1 = 1.0 / std::sqrt(1.0 + tan2);
    s.exists = true;
    return s;
}

struct QubitParams {
    double omega01 = 0.0;
    double g = 0.0;
};

// All bound states of two qubits a distance d apart: roots of
// (E - w1 - S11)(E - w2 - S22) - S12^2 = 0 below the edge.
inline std::vector<BoundStateSolution> two_qubit_bound_energies(const QubitParams& q1, const QubitParams& q2,
                                                                const EdgeBand& b, int distance,
                                                                std::size_t subdivisions = 10000) {
    b.validate();
    if (distance < 1) throw InvalidArgument("two_qubit_bound_energies: distance must be >= 1");
    auto parts = [&](double delta) {
        double e = b.omega0 - delta;
        double d1 = e - q1.omega01 - self_energy(q1.g, b.alpha, delta);
        double d2 = e - q2.omega01 - self_energy(q2.g, b.alpha, delta);
        double x = exchange_energy(q1.g, q2.g, b.alpha, delta, distance);
        return std::array<double, 3>{d1, d2, x};
    };
    // scaled by delta to keep the function finite at the edge
    auto det = [&](double u) {
        double delta = std::exp(u);
        auto [d1, d2, x] = parts(delta);
        return delta * (d1 * d2 - x * x);
    };
    double span = b.omega0 - std::min(q1.omega01, q2.omega01) +
                  10.0 * std::max({q1.g * q1.g, q2.g * q2.g, 1.0});
    auto brackets = num::scan_brackets(det, std::log(1e-12), std::log(std::max(span, 1e-6)), subdivisions);
    std::vector<BoundStateSolution> out;
    for (auto [u0, u1] : brackets) {
        double u = num::brent(det, u0, u1, 1e-15).x;
        double delta = std::exp(u);
        auto [d1, d2, x] = parts(delta);
        BoundStateSolution s;
        s.energy = b.omega0 - delta;
        s.exists = true;
        s.localization_length = std::sqrt(b.alpha / delta);
        s.residual = d1 * d2 - x * x;
        // (d1) a1 = x a2 ; pick the better-conditioned row
        double a1, a2;
        if (std::abs(x) < 1e-300) {
            a1 = std::abs(d1) < std::abs(d2) ? 1.0 : 0.0;
            a2 = 1.0 - a1;
        } else if (std::abs(d1) >= std::abs(d2)) {
            a1 = x;
            a2 = d1;
        } else {
            a1 = d2;
            a2 = x;
        }
        double n = std::hypot(a1, a2);
        if (a1 < 0 || (a1 == 0 && a2 < 0)) n = -n;
        s.a1 = a1 / n;
        s.a2 = a2 / n;
        s.parity = (s.a1 * s.a2 >= 0) ? Parity::symmetric : Parity::antisymmetric;
        out.push_back(s);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& c) { return a.energy < c.energy; });
    return out;
}

struct ParityPair {
    BoundStateSolution symmetric;
    BoundStateSolution antisymmetric;
};

// Equal qubits: E - omega01 = -g^2 (1 +- (-1)^d e^{-d/L}) / (2 sqrt(alpha delta)),
// '+' for equal qubit amplitudes. The branch with 1 - e^{-d/L} stays finite at
// the edge and only exists while omega01 - omega0 < g^2 d / (2 alpha).
inline ParityPair symmetric_antisymmetric(double omega01, double g, const EdgeBand& b, int distance) {
    b.validate();
    if (distance < 1) throw InvalidArgument("symmetric_antisymmetric: distance must be >= 1");
    const double s = (distance % 2 == 0) ? 1.0 : -1.0;
    auto solve = [&](double sign, Parity p) {
        BoundStateSolution sol;
        sol.parity = p;
        sol.a1 = 1.0 / std::sqrt(2.0);
        sol.a2 = sign * sol.a1;
        double c = sign * s;  // +1: divergent branch, -1: finite branch
        auto f = [&](double delta) {
            double factor = 1.0 + c * std::exp(-distance * std::sqrt(delta / b.alpha));
            return b.omega0 - delta - omega01 + g * g * factor / (2.0 * std::sqrt(b.alpha * delta));
        };
        if (c < 0) {
            double limit = b.omega0 - omega01 + g * g * distance / (2.0 * b.alpha);
            if (!(limit > 0)) {
                sol.exists = false;
                sol.energy = b.omega0;
                sol.localization_length = std::numeric_limits<double>::infinity();
                return sol;
            }
        }
        double delta = detail::solve_delta(f, std::abs(b.omega0 - omega01) + g);
        sol.exists = true;
        sol.energy = b.omega0 - delta;
        sol.localization_length = std::sqrt(b.alpha / delta);
        sol.residual = f(delta);
        return sol;
    };
    return {solve(1.0, Parity::symmetric), solve(-1.0, Parity::antisymmetric)};
}

// Detuning omega01 - omega0 above which the finite branch disappears.
inline double existence_threshold(double g, const EdgeBand& b, int distance) {
    return g * g * distance / (2.0 * b.alpha);
}

// Photon amplitudes c_j on sites [site_lo, site_hi] (1-based), L2-normalised.
inline std::vector<double> bound_state_wavefunction(const BoundStateSolution& s, const std::vector<int>& sites,
                                                    const std::vector<double>& couplings, int site_lo,
                                                    int site_hi) {
    if (!s.exists) throw DomainError("bound_state_wavefunction: solution does not exist");
    if (sites.size() != couplings.size() || sites.empty() || sites.size() > 2)
        throw InvalidArgument("bound_state_wavefunction: need one or two qubit sites with couplings");
    double amps[2] = {s.a1, s.a2};
    std::vector<double> c;
    double norm = 0.0;
    for (int j = site_lo; j <= site_hi; ++j) {
        double v = 0.0;
        for (std::size_t i = 0; i < sites.size(); ++i) {
            int r = std::abs(j - sites[i]);
            double sign = (r % 2 == 0) ? 1.0 : -1.0;
            v += amps[i] * couplings[i] * sign * std::exp(-r / s.localization_length);
        }
        c.push_back(v);
        norm += v * v;
    }
    norm = std::sqrt(norm);
    if (norm > 0)
        for (auto& v : c) v /= norm;
    return c;
}

struct BornMarkov {
    double e_symmetric = 0.0;
    double e_antisymmetric = 0.0;
    double flip_flop = 0.0;
    double dressed = 0.0;  // single-qubit dressed frequency
};

// Second-order elimination of the field; valid only below the edge.
inline BornMarkov born_markov_energies(double omega01, double g, const EdgeBand& b, int distance) {
    b.validate();
    if (!(omega01 < b.omega0)) throw DomainError("born_markov_energies: requires omega01 < omega0");
    double delta = b.omega0 - omega01;
    double x = distance * std::sqrt(delta / b.alpha);
    double pref = g * g / std::sqrt(b.alpha * delta);
    BornMarkov r;
    r.dressed = omega01 - 0.5 * pref;
    r.flip_flop = exchange_energy(g, g, b.alpha, delta, distance);
    bool odd = distance % 2 != 0;
    double hsin = std::exp(-0.5 * x) * std::sinh(0.5 * x);
    double hcos = std::exp(-0.5 * x) * std::cosh(0.5 * x);
    r.e_symmetric = omega01 - pref * (odd ? hsin : hcos);
    r.e_antisymmetric = omega01 - pref * (odd ? hcos : hsin);
    return r;
}

// ---- dressing angle -----------------------------------------------------

// cos(theta) with tan^2 = (g^2/N) sum_k 1/(E - w_k)^2 over the supplied modes.
inline double dressing_angle_modes(double g, double energy, const std::vector<double>& modes) {
    if (modes.empty()) throw InvalidArgument("dressing_angle: no modes");
    double s = 0.0;
    for (double w : modes) s += 1.0 / ((energy - w) * (energy - w));
    double tan2 = g * g * s / static_cast<double>(modes.size());
    return 1.0 / std::sqrt(1.0 + tan2);
}

// Periodic-momentum modes w(2 pi n / N) of a hopping set.
inline std::vector<double> lattice_modes(const HoppingCoefficients& h, int n_sites) {
    std::vector<double> w(n_sites);
    for (int n = 0; n < n_sites; ++n) w[n] = hopping_band(h, 2.0 * std::numbers::pi * n / n_sites);
    return w;
}

inline double dressing_angle(double g, double energy, const EdgeBand& b) {
    double delta = b.omega0 - energy;
    if (!(delta > 0)) throw DomainError("dressing_angle: energy must lie below the edge");
    double tan2 = g * g / (4.0 * std::pow(delta, 1.5) * std::sqrt(b.alpha));
    return 1.0 / std::sqrt(1.0 + tan2);
}

// Model with only qubit `which` active.
inline LatticeModel only_qubit(LatticeModel m, int which) {
    if (which < 0 || which >= static_cast<int>(m.qubits.size()))
        throw InvalidArgument("only_qubit: qubit index out of range");
    for (int i = 0; i < static_cast<int>(m.qubits.size()); ++i) m.qubits[i].active = (i == which);
    return m;
}

// Lowest single-excitation eigenvalue with only qubit `which` active.
inline double single_qubit_bound_state(const LatticeModel& m, int which) {
    auto ev = num::dense_eigenvalues(single_excitation_matrix(only_qubit(m, which)));
    return ev[0];
}

// Finite-system angle for qubit `which`, using the lattice's periodic modes.
inline double dressing_angle(const LatticeModel& m, int which) {
    double e = single_qubit_bound_state(m, which);
    return dressing_angle_modes(m.qubits[which].g, e, lattice_modes(m.hoppings, m.n_sites));
}

// ---- two-photon bound state ----------------------------------------------

enum class TwoPhotonForm {
    dimensional,  // E - w02 = -g^2 / sqrt(alpha (w0 + w01 - E))
    literal       // E - w02 = -g^2 / sqrt(w0 + w01 - E), alpha omitted
};

struct TwoPhotonSolution {
    double energy = 0.0;
    double b = 0.0;                     // |2>|0> amplitude
    std::vector<double> photon_profile; // d_j on the requested sites
    double localization_length = 0.0;   // unit cells
    double residual = 0.0;
};

inline TwoPhotonSolution two_photon_bound_energy(double omega01, double omega02, double g, const EdgeBand& b,
                                                 int site, int site_lo, int site_hi,
                                                 TwoPhotonForm form = TwoPhotonForm::dimensional) {
    b.validate();
    const double top = b.omega0 + omega01;
    const double scale = form == TwoPhotonForm::dimensional ? b.alpha : 1.0;
    TwoPhotonSolution s;
    auto f = [&](double delta) { return top - delta - omega02 + g * g / std::sqrt(scale * delta); };
    if (g == 0.0) {
        if (!(omega02 < top)) throw DomainError("two_photon_bound_energy: w02 above the two-particle threshold");
        s.energy = omega02;
        s.b = 1.0;
        s.localization_length = std::sqrt(b.alpha / (top - omega02));
        s.photon_profile.assign(site_hi - site_lo + 1, 0.0);
        return s;
    }
    double delta;
    try {
        delta = detail::solve_delta(f, std::abs(top - omega02) + g);
    } catch (const NoRoot&) {
        throw DomainError("two_photon_bound_energy: no root below w0 + w01");
    }
    s.energy = top - delta;
    s.residual = f(delta);
    s.localization_length = std::sqrt(b.alpha / delta);
    // d_j = -sqrt2 g b (-1)^{j-z} e^{-|j-z|/L} / (2 sqrt(alpha delta))
    double amp = std::sqrt(2.0) * g / (2.0 * std::sqrt(b.alpha * delta));
    double photon_norm = 2.0 * g * g / (4.0 * std::pow(delta, 1.5) * std::sqrt(b.alpha));
    s.b = 1.0 / std::sqrt(1.0 + photon_norm);
    for (int j = site_lo; j <= site_hi; ++j) {
        int r = std::abs(j - site);
        double sign = (r % 2 == 0) ? 1.0 : -1.0;
        s.photon_profile.push_back(-amp * s.b * sign * std::exp(-r / s.localization_length));
    }
    return s;
}

struct LevelPopulations {
    double p0 = 0.0, p1 = 0.0, p2 = 0.0;
};

// Qubit-level populations of the exact two-excitation ground state for a
// model with a single active qubit, at bare frequency omega01.
inline LevelPopulations qubit_level_populations(LatticeModel m, double omega01) {
    auto act = m.active_qubits();
    if (act.size() != 1) throw InvalidArgument("qubit_level_populations: model needs exactly one active qubit");
    if (m.qubits[act[0]].n_levels < 3) throw InvalidArgument("qubit_level_populations: qubit needs >= 3 levels");
    m.qubits[act[0]].omega01 = omega01;
    auto basis = build_sector_basis(m, 2);
    auto es = lowest_eigenpairs(assemble_hamiltonian(m, basis), 1);
    LevelPopulations p;
    for (int i = 0; i < static_cast<int>(basis.size()); ++i) {
        double w = es.vectors(i, 0) * es.vectors(i, 0);
        switch (basis.qubit_level(i, 0)) {
        case 0: p.p0 += w; break;
        case 1: p.p1 += w; break;
        default: p.p2 += w; break;
        }
    }
    return p;
}

// ---- fourth-order two-photon exchange -------------------------------------

enum class ExchangeMode {
    window,      // constant-integrand momentum window (closed form)
    numeric_2d,  // double momentum integral
    numeric_1d   // single integral after the exact inner integration
};

// Magnitude of the effective |2,0> <-> |0,2> coupling for two equal qubits a
// distance d apart.
inline double two_photon_exchange(const EdgeBand& b, double g, double omega02, double omega12, int distance,
                                  ExchangeMode mode = ExchangeMode::numeric_1d) {
    b.validate();
    if (distance < 1) throw InvalidArgument("two_photon_exchange: distance must be >= 1");
    const double w0 = b.omega0, al = b.alpha, d = distance;
    const double bb = 2.0 * w0 - omega02;          // two-photon detuning
    const double aa = w0 - omega12;                // 1->2 transition detuning
    const double cc = w0 + omega12 - omega02;      // = w0 - w01
    if (!(bb > 0) || !(aa > 0)) throw DomainError("two_photon_exchange: requires 2 w0 > w02 and w0 > w12");
    if (!(cc > 0)) throw DomainError("two_photon_exchange: requires w02 - w12 < w0");
    const double g4 = g * g * g * g;
    const double pi = std::numbers::pi;

    if (mode == ExchangeMode::window) {
        double w2 = 1.0 / (d * d) - bb / al;
        if (w2 < 0) throw NegativeWindow("two_photon_exchange: momentum window undefined at distance " +
                                         std::to_string(distance));
        double dk = 2.0 * std::sqrt(w2);
        double t1 = -2.0 * g4 / aa * dk / (2 * pi) * std::exp(-d * std::sqrt(bb / al)) / (std::sqrt(al) * std::sqrt(bb)) *
                    (1.0 / aa - 1.0 / cc);
        double t2 = g4 / (std::sqrt(al) * (omega02 - 2.0 * omega12)) *
                    (std::exp(-d * std::sqrt(aa / al)) / std::sqrt(aa) - std::exp(-d * std::sqrt(cc / al)) / std::sqrt(cc)) *
                    std::exp(-d * std::sqrt(aa / al)) / (std::sqrt(al) * std::sqrt(aa));
        return std::abs(t1 + t2);
    }
    auto B = [&](double k) { return al * k * k + aa; };
    if (mode == ExchangeMode::numeric_2d) {
        // even in k and p separately, so only the cos*cos part survives
        auto f = [&](double k, double p) {
            double A = al * (k * k + p * p) + bb;
            return std::cos(k * d) * std::cos(p * d) / (A * B(k)) * (1.0 / B(k) + 1.0 / B(p));
        };
        // cos(p d)/p^2 tail: half-period chunks in both directions
        const double half = pi / d;
        auto inner = [&](double k) {
            return num::integrate_oscillatory([&](double p) { return f(k, p); }, 0.0, half, 1e-12, 1e-9).value;
        };
        auto r = num::integrate_oscillatory(inner, 0.0, half, 1e-11, 1e-8);
        double integral = 4.0 * r.value / (4.0 * pi * pi);
        return std::abs(4.0 * g4 * integral);
    }
    const double s0 = std::sqrt(aa);
    auto f1 = [&](double k) {
        double S = std::sqrt(bb + al * k * k);
        double E = std::exp(-d / std::sqrt(al) * S);
        double C = cc + al * k * k;
        double first = E / (std::sqrt(al) * S) / (B(k) * B(k));
        double second = 1.0 / (B(k) * C) * (E / (std::sqrt(al) * S) - std::exp(-d * s0 / std::sqrt(al)) / (std::sqrt(al) * s0));
        return std::cos(k * d) * (first - second);
    };
    auto r = num::integrate_to_inf(f1, 0.0, 1e-13, 1e-10);
    double integral = 2.0 * r.value / (2.0 * pi);
    return std::abs(2.0 * g4 * integral);
}

} // namespace bgqed
