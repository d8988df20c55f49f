#pragma once

#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "boundstates.hpp"
#include "crystal.hpp"
#include "errors.hpp"
#include "lattice.hpp"
#include "transmission.hpp"

namespace bgqed {

struct SweepGrid {
    double start = 7.0;
    double stop = 8.5;
    int points = 1501;
};

struct DriveSpec {
    std::optional<double> omega_d;  // defaults to the bound-state frequency
    std::vector<double> rabi{0.0, 0.02, 0.04, 0.06, 0.08, 0.1};
    int photon_cutoff = 3;
};

struct ExperimentConfig {
    UnitCell unit_cell;
    int n_cells = 16;
    int band = 2;
    std::string hopping_source = "computed";  // computed | reference | explicit
    int hopping_range = 5;
    std::vector<double> hoppings;  // explicit values
    std::optional<EdgeBand> edge_band;  // analytic edge; from the crystal if absent
    std::vector<QubitSpec> qubits;
    LossParams losses;
    WaveguidePorts ports;
    SweepGrid sweep;
    DriveSpec drive;

    LatticeModel model() const {
        LatticeModel m;
        m.n_sites = n_cells;
        if (hopping_source == "reference")
            m.hoppings = reference_hoppings();
        else if (hopping_source == "explicit")
            m.hoppings.j = hoppings;
        else
            m.hoppings = hopping_coefficients(unit_cell, hopping_range, band);
        m.qubits = qubits;
        m.losses = losses;
        m.validate();
        return m;
    }

    EdgeBand edge() const {
        if (edge_band) return *edge_band;
        auto f = fit_band_edge(unit_cell, band);
        return {f.omega0, f.alpha};
    }
};

namespace detail {

using cjson = nlohmann::ordered_json;

class Reader {
public:
    Reader(const cjson& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(where() + "expected an object");
    }

    // Every key present must have been consumed.
    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) throw ConfigError("unknown field '" + path_ + it.key() + "'");
    }

    bool has(const std::string& k) const { return j_.contains(k); }

    const cjson& raw(const std::string& k) {
        seen_.insert(k);
        if (!j_.contains(k)) throw ConfigError("missing field '" + path_ + k + "'");
        return j_.at(k);
    }

    double number(const std::string& k) {
        const auto& v = raw(k);
        if (!v.is_number()) throw ConfigError("field '" + path_ + k + "' must be a number");
        return v.get<double>();
    }
    double number(const std::string& k, double def) { return has(k) ? number(k) : def; }

    int integer(const std::string& k) {
        const auto& v = raw(k);
        if (!v.is_number_integer()) throw ConfigError("field '" + path_ + k + "' must be an integer");
        return v.get<int>();
    }
    int integer(const std::string& k, int def) { return has(k) ? integer(k) : def; }

    bool boolean(const std::string& k, bool def) {
        if (!has(k)) return def;
        const auto& v = raw(k);
        if (!v.is_boolean()) throw ConfigError("field '" + path_ + k + "' must be true or false");
        return v.get<bool>();
    }

    std::vector<double> numbers(const std::string& k) {
        const auto& v = raw(k);
        if (!v.is_array()) throw ConfigError("field '" + path_ + k + "' must be an array of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number())
                throw ConfigError("field '" + path_ + k + "[" + std::to_string(i) + "]' must be a number");
            out.push_back(v[i].get<double>());
        }
        return out;
    }

    Reader child(const std::string& k) { return Reader(raw(k), path_ + k + "."); }

    const std::string& path() const { return path_; }

private:
    std::string where() const { return path_.empty() ? "config: " : "field '" + path_.substr(0, path_.size() - 1) + "': "; }

    const cjson& j_;
    std::string path_;
    std::set<std::string> seen_;
};

// Metres to millimetres on a picometre grid, so that writing a config back
// out reproduces the decimal lengths it was read from.
inline double to_mm(double metres) { return std::round(metres * 1e12) / 1e9; }

inline void require(bool ok, const std::string& field, const std::string& what) {
    if (!ok) throw ConfigError("field '" + field + "' " + what);
}

} // namespace detail

inline ExperimentConfig config_from_json(const nlohmann::ordered_json& j) {
    detail::Reader r(j, "");
    ExperimentConfig c;

    if (r.has("unit_cell")) {
        auto u = r.child("unit_cell");
        c.unit_cell.z_lo = u.number("z_lo", c.unit_cell.z_lo);
        c.unit_cell.z_hi = u.number("z_hi", c.unit_cell.z_hi);
        c.unit_cell.l_lo = 1e-3 * u.number("l_lo_mm", 1e3 * c.unit_cell.l_lo);
        c.unit_cell.l_hi = 1e-3 * u.number("l_hi_mm", 1e3 * c.unit_cell.l_hi);
        c.unit_cell.v_p = u.number("v_p", c.unit_cell.v_p);
        u.finish();
        detail::require(c.unit_cell.z_lo > 0 && c.unit_cell.z_hi > 0, "unit_cell.z_lo/z_hi", "must be positive");
        detail::require(c.unit_cell.l_lo > 0 && c.unit_cell.l_hi > 0, "unit_cell.l_lo_mm/l_hi_mm", "must be positive");
        detail::require(c.unit_cell.v_p > 0, "unit_cell.v_p", "must be positive");
    }
    c.n_cells = r.integer("n_cells", c.n_cells);
    detail::require(c.n_cells >= 2, "n_cells", "must be at least 2");
    c.band = r.integer("band", c.band);
    detail::require(c.band >= 1, "band", "must be at least 1");
    c.hopping_range = r.integer("hopping_range", c.hopping_range);
    detail::require(c.hopping_range >= 1 && c.hopping_range < c.n_cells, "hopping_range", "must be in [1, n_cells)");

    if (r.has("hoppings")) {
        const auto& h = r.raw("hoppings");
        if (h.is_string()) {
            c.hopping_source = h.get<std::string>();
            detail::require(c.hopping_source == "computed" || c.hopping_source == "reference", "hoppings",
                            "must be \"computed\", \"reference\" or an array of numbers");
        } else {
            c.hopping_source = "explicit";
            c.hoppings = r.numbers("hoppings");
            detail::require(!c.hoppings.empty() && static_cast<int>(c.hoppings.size()) <= c.n_cells, "hoppings",
                            "needs between 1 and n_cells entries");
        }
    }

    if (r.has("edge_band")) {
        auto e = r.child("edge_band");
        EdgeBand b;
        b.omega0 = e.number("omega0");
        b.alpha = e.number("alpha");
        e.finish();
        detail::require(b.omega0 > 0 && b.alpha > 0, "edge_band", "omega0 and alpha must be positive");
        c.edge_band = b;
    }

    if (r.has("qubits")) {
        const auto& qs = r.raw("qubits");
        if (!qs.is_array()) throw ConfigError("field 'qubits' must be an array");
        for (std::size_t i = 0; i < qs.size(); ++i) {
            std::string p = "qubits[" + std::to_string(i) + "]";
            detail::Reader q(qs[i], p + ".");
            QubitSpec s;
            s.site = q.integer("site");
            s.omega01 = q.number("omega01");
            s.delta = q.number("delta", 0.0);
            s.g = q.number("g");
            s.n_levels = q.integer("n_levels", 3);
            s.active = q.boolean("active", true);
            q.finish();
            detail::require(s.site >= 1 && s.site <= c.n_cells, p + ".site", "must be in [1, n_cells]");
            detail::require(s.omega01 > 0, p + ".omega01", "must be positive");
            detail::require(s.g >= 0, p + ".g", "must be non-negative");
            detail::require(s.delta >= 0, p + ".delta", "must be non-negative");
            detail::require(s.n_levels >= 2 && s.n_levels <= 5, p + ".n_levels", "must be in [2, 5]");
            for (std::size_t k = 0; k < c.qubits.size(); ++k)
                detail::require(!(c.qubits[k].active && s.active && c.qubits[k].site == s.site), p + ".site",
                                "duplicates qubits[" + std::to_string(k) + "].site");
            c.qubits.push_back(s);
        }
    }

    if (r.has("losses")) {
        auto l = r.child("losses");
        c.losses.kappa = l.number("kappa", 0.0);
        c.losses.kappa0 = l.number("kappa0", 0.0);
        c.losses.kappa_q = l.number("kappa_q", 0.0);
        l.finish();
        detail::require(c.losses.kappa >= 0 && c.losses.kappa0 >= 0 && c.losses.kappa_q >= 0, "losses",
                        "entries must be non-negative");
    }

    if (r.has("ports")) {
        auto p = r.child("ports");
        c.ports.v_g = p.number("v_g", c.ports.v_g);
        c.ports.g_w = p.number("g_w", c.ports.g_w);
        p.finish();
        detail::require(c.ports.v_g > 0 && c.ports.g_w > 0, "ports", "v_g and g_w must be positive");
    }

    if (r.has("sweep")) {
        auto s = r.child("sweep");
        c.sweep.start = s.number("start");
        c.sweep.stop = s.number("stop");
        c.sweep.points = s.integer("points", c.sweep.points);
        s.finish();
        detail::require(c.sweep.start > 0 && c.sweep.start < c.sweep.stop, "sweep", "needs 0 < start < stop");
        detail::require(c.sweep.points >= 2, "sweep.points", "must be at least 2");
    }

    if (r.has("drive")) {
        auto d = r.child("drive");
        if (d.has("omega_d")) c.drive.omega_d = d.number("omega_d");
        if (d.has("rabi")) c.drive.rabi = d.numbers("rabi");
        c.drive.photon_cutoff = d.integer("photon_cutoff", c.drive.photon_cutoff);
        d.finish();
        for (std::size_t i = 0; i < c.drive.rabi.size(); ++i)
            detail::require(c.drive.rabi[i] >= 0, "drive.rabi[" + std::to_string(i) + "]", "must be non-negative");
        detail::require(c.drive.photon_cutoff >= 1, "drive.photon_cutoff", "must be at least 1");
    }
    r.finish();
    return c;
}

// Parses JSON text; syntax errors report line and column.
inline ExperimentConfig parse_config(const std::string& text) {
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ConfigError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": malformed JSON");
    }
    return config_from_json(j);
}

inline std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline ExperimentConfig load_config(const std::string& path) {
    try {
        return parse_config(read_text(path));
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.message());
    }
}

inline nlohmann::ordered_json to_json(const ExperimentConfig& c) {
    nlohmann::ordered_json j;
    j["unit_cell"] = {{"z_lo", c.unit_cell.z_lo},
                      {"z_hi", c.unit_cell.z_hi},
                      {"l_lo_mm", detail::to_mm(c.unit_cell.l_lo)},
                      {"l_hi_mm", detail::to_mm(c.unit_cell.l_hi)},
                      {"v_p", c.unit_cell.v_p}};
    j["n_cells"] = c.n_cells;
    j["band"] = c.band;
    j["hopping_range"] = c.hopping_range;
    if (c.hopping_source == "explicit")
        j["hoppings"] = c.hoppings;
    else
        j["hoppings"] = c.hopping_source;
    if (c.edge_band) j["edge_band"] = {{"omega0", c.edge_band->omega0}, {"alpha", c.edge_band->alpha}};
    j["qubits"] = nlohmann::ordered_json::array();
    for (const auto& q : c.qubits)
        j["qubits"].push_back({{"site", q.site},
                               {"omega01", q.omega01},
                               {"delta", q.delta},
                               {"g", q.g},
                               {"n_levels", q.n_levels},
                               {"active", q.active}});
    j["losses"] = {{"kappa", c.losses.kappa}, {"kappa0", c.losses.kappa0}, {"kappa_q", c.losses.kappa_q}};
    j["ports"] = {{"v_g", c.ports.v_g}, {"g_w", c.ports.g_w}};
    j["sweep"] = {{"start", c.sweep.start}, {"stop", c.sweep.stop}, {"points", c.sweep.points}};
    nlohmann::ordered_json d;
    if (c.drive.omega_d) d["omega_d"] = *c.drive.omega_d;
    d["rabi"] = c.drive.rabi;
    d["photon_cutoff"] = c.drive.photon_cutoff;
    j["drive"] = d;
    return j;
}

} // namespace bgqed
