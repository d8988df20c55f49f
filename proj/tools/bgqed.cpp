// bgqed: figure-data generator for the band-gap QED model.
//
//   bgqed <command> --config FILE --out DIR [options]
//
// Every command writes <out>/<command>-<hash>.json and, where a table makes
// sense, <out>/<command>-<hash>.csv. The hash covers the config and the flags,
// so identical inputs give identical file names and contents.

#include <bgqed/bgqed.hpp>

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace bgqed;

namespace {

std::string fnv_hex(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf).substr(0, 12);
}

struct Output {
    fs::path dir;
    std::string stem;

    Output(const std::string& out, const std::string& cmd, const std::string& key) : dir(out) {
        stem = cmd + "-" + fnv_hex(cmd + "\n" + key);
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec) throw ConfigError("cannot create output directory '" + out + "'");
    }

    fs::path path(const std::string& ext) const { return dir / (stem + ext); }

    void write_json(const json& j) const {
        std::ofstream f(path(".json"), std::ios::binary);
        f << j.dump(2) << '\n';
        if (!f) throw ConfigError("cannot write " + path(".json").string());
        std::cout << path(".json").string() << '\n';
    }

    void write_text(const std::string& ext, const std::string& text) const {
        std::ofstream f(path(ext), std::ios::binary);
        f << text;
        if (!f) throw ConfigError("cannot write " + path(ext).string());
        std::cout << path(ext).string() << '\n';
    }
};

std::string fd(double x) { return format_double(x); }

std::string trace_csv(const SpectrumTrace& t) {
    std::ostringstream ss;
    write_csv(ss, t);
    return ss.str();
}

std::vector<double> grid(const SweepGrid& g) { return linspace(g.start, g.stop, static_cast<std::size_t>(g.points)); }

// ---- dispersion ----------------------------------------------------------

void cmd_dispersion(const ExperimentConfig& cfg, const std::vector<int>& bands, int samples, const Output& out) {
    const auto& cell = cfg.unit_cell;
    cell.validate();
    std::ostringstream csv;
    csv << "ka";
    for (int b : bands) csv << ",band" << b << "_ghz";
    csv << '\n';
    std::vector<std::vector<double>> f(bands.size(), std::vector<double>(samples));
    for (std::size_t bi = 0; bi < bands.size(); ++bi)
        num::parallel_for(samples, [&](std::size_t i) {
            f[bi][i] = dispersion_reduced(cell, bands[bi], std::numbers::pi * i / (samples - 1));
        });
    for (int i = 0; i < samples; ++i) {
        csv << fd(std::numbers::pi * i / (samples - 1));
        for (std::size_t bi = 0; bi < bands.size(); ++bi) csv << ',' << fd(f[bi][i]);
        csv << '\n';
    }

    json j;
    j["unit_cell"] = to_json(cfg)["unit_cell"];
    j["bands"] = json::array();
    for (int b : bands) {
        auto e = band_edges(cell, b);
        json jb{{"band", b}, {"f_min_ghz", e.f_min}, {"f_max_ghz", e.f_max}};
        j["bands"].push_back(jb);
    }
    j["gaps"] = json::array();
    for (int b : bands) {
        auto g = band_gap(cell, b);
        j["gaps"].push_back({{"between", {b, b + 1}},
                             {"lower_ghz", g.lower},
                             {"upper_ghz", g.upper},
                             {"width_ghz", std::max(0.0, g.width())}});
    }
    // edge curvature of the band above the first requested gap
    int edge_band = bands.front() + (bands.size() > 1 ? 1 : 0);
    try {
        auto fit = fit_band_edge(cell, edge_band);
        j["edge"] = {{"band", edge_band},
                     {"omega0_ghz", fit.omega0},
                     {"alpha_fit_ghz", fit.alpha},
                     {"alpha_exact_ghz", edge_curvature(cell, edge_band)},
                     {"fit_rel_residual", fit.rel_residual}};
    } catch (const Error& e) {
        j["edge"] = {{"band", edge_band}, {"error", e.what()}};
    }
    out.write_text(".csv", csv.str());
    out.write_json(j);
}

// ---- transmission --------------------------------------------------------

json peak_summary(const SpectrumTrace& t, const LatticeModel& m) {
    json j;
    double edge = passband(m).first;
    try {
        auto p = find_bound_state_peak(t, t.freqs.front(), std::min(edge, t.freqs.back()));
        j["peak_ghz"] = p.freq;
        j["fwhm_ghz"] = p.fwhm;
        j["peak_height"] = p.height;
    } catch (const NoPeak& e) {
        j["peak_error"] = e.what();
    }
    try {
        j["dip_ghz"] = find_dip(t, edge, t.freqs.back());
    } catch (const NoPeak& e) {
        j["dip_error"] = e.what();
    }
    return j;
}

void cmd_transmission(const ExperimentConfig& cfg, const std::string& method, bool sat, const Output& out) {
    LatticeModel m = cfg.model();
    if (sat) m = saturated(m);
    SweepOptions opt;
    opt.ports = cfg.ports;
    std::vector<Method> methods;
    if (method == "steady" || method == "both") methods.push_back(Method::steady_state);
    if (method == "scatter" || method == "both") methods.push_back(Method::scattering);

    json j;
    j["model_hash"] = model_hash(m);
    j["saturated"] = sat;
    std::vector<SpectrumTrace> traces;
    for (auto me : methods) {
        auto t = sweep_s21(m, me, cfg.sweep.start, cfg.sweep.stop, cfg.sweep.points, opt);
        j[method_name(me)] = peak_summary(t, m);
        j[method_name(me)]["normalisation"] = t.meta["normalisation"];
        traces.push_back(std::move(t));
    }
    if (traces.size() == 2) {
        json a = j["steady"], b = j["scatter"];
        json agree;
        if (a.contains("peak_ghz") && b.contains("peak_ghz"))
            agree["peak_diff_ghz"] = std::abs(a["peak_ghz"].get<double>() - b["peak_ghz"].get<double>());
        if (a.contains("dip_ghz") && b.contains("dip_ghz"))
            agree["dip_diff_ghz"] = std::abs(a["dip_ghz"].get<double>() - b["dip_ghz"].get<double>());
        j["agreement"] = agree;
    }
    if (traces.size() == 1) {
        out.write_text(".csv", trace_csv(traces.front()));
        out.write_json(j);
        return;
    }
    std::ostringstream csv;
    csv << "freq_ghz";
    for (auto me : methods) csv << ',' << method_name(me) << "_re," << method_name(me) << "_im," << method_name(me) << "_mag_db";
    csv << '\n';
    std::vector<std::vector<double>> db;
    for (const auto& t : traces) db.push_back(t.mag_db());
    for (std::size_t i = 0; i < traces.front().size(); ++i) {
        csv << fd(traces.front().freqs[i]);
        for (std::size_t k = 0; k < traces.size(); ++k)
            csv << ',' << fd(traces[k].values[i].real()) << ',' << fd(traces[k].values[i].imag()) << ',' << fd(db[k][i]);
        csv << '\n';
    }
    out.write_text(".csv", csv.str());
    out.write_json(j);
}

// ---- bound states --------------------------------------------------------

void cmd_boundstate(const ExperimentConfig& cfg, bool analytic, int sweep_qubit, const Output& out) {
    LatticeModel m = cfg.model();
    const double edge_lattice = passband(m).first;
    json j;
    j["lattice_edge_ghz"] = edge_lattice;
    j["qubits"] = json::array();
    for (int i : m.active_qubits()) {
        json q{{"index", i}, {"omega01_ghz", m.qubits[i].omega01}, {"g_ghz", m.qubits[i].g}};
        try {
            double e = single_qubit_bound_state(m, i);
            q["bound_ghz"] = e;
            q["detuning_ghz"] = edge_lattice - e;
            q["cos_theta"] = dressing_angle(m, i);
        } catch (const Error& e) {
            q["error"] = e.what();
        }
        j["qubits"].push_back(q);
    }
    EdgeBand band;
    if (analytic) {
        band = cfg.edge();
        j["edge_band"] = {{"omega0_ghz", band.omega0}, {"alpha_ghz", band.alpha}};
        json a = json::array();
        for (int i : m.active_qubits()) {
            const auto& q = m.qubits[i];
            auto s = single_qubit_bound_energy(q.omega01, q.g, band);
            json js = to_json(s);
            js["index"] = i;
            a.push_back(js);
        }
        j["analytic"] = a;
        auto act = m.active_qubits();
        if (act.size() == 2) {
            const auto& q1 = m.qubits[act[0]];
            const auto& q2 = m.qubits[act[1]];
            int d = std::abs(q1.site - q2.site);
            double g = 0.5 * (q1.g + q2.g);
            j["pair"] = {{"distance", d},
                         {"g_avg_ghz", g},
                         {"existence_threshold_ghz", existence_threshold(g, band, d)}};
            try {
                auto pp = symmetric_antisymmetric(0.5 * (q1.omega01 + q2.omega01), g, band, d);
                j["pair"]["symmetric"] = to_json(pp.symmetric);
                j["pair"]["antisymmetric"] = to_json(pp.antisymmetric);
            } catch (const Error& e) {
                j["pair"]["error"] = e.what();
            }
        }
    }
    std::string csv;
    if (sweep_qubit >= 0) {
        if (sweep_qubit >= static_cast<int>(m.qubits.size()))
            throw ConfigError("--sweep-qubit: no qubit with index " + std::to_string(sweep_qubit));
        auto w = grid(cfg.sweep);
        std::vector<double> num_e(w.size()), ana_e(w.size(), std::nan("")), cth(w.size());
        LatticeModel solo = only_qubit(m, sweep_qubit);
        num::parallel_for(w.size(), [&](std::size_t i) {
            LatticeModel mm = solo;
            mm.qubits[sweep_qubit].omega01 = w[i];
            num_e[i] = num::dense_eigenvalues(single_excitation_matrix(mm))[0];
            cth[i] = dressing_angle(mm, sweep_qubit);
            if (analytic) ana_e[i] = single_qubit_bound_energy(w[i], mm.qubits[sweep_qubit].g, band).energy;
        });
        std::ostringstream ss;
        ss << "omega01_ghz,bound_ghz,cos_theta" << (analytic ? ",analytic_ghz" : "") << '\n';
        for (std::size_t i = 0; i < w.size(); ++i) {
            ss << fd(w[i]) << ',' << fd(num_e[i]) << ',' << fd(cth[i]);
            if (analytic) ss << ',' << fd(ana_e[i]);
            ss << '\n';
        }
        csv = ss.str();
        j["sweep_qubit"] = sweep_qubit;
    }
    if (!csv.empty()) out.write_text(".csv", csv);
    out.write_json(j);
}

// ---- crossings -----------------------------------------------------------

void cmd_crossing(const ExperimentConfig& cfg, int manifold, double fixed_freq, int fixed, const Output& out) {
    LatticeModel m = cfg.model();
    if (m.qubits.size() < 2) throw ConfigError("crossing: config needs two qubits");
    int swept = fixed == 0 ? 1 : 0;
    auto pts = static_cast<std::size_t>(cfg.sweep.points);
    json j;
    std::ostringstream csv;
    if (manifold == 1) {
        auto s = one_excitation_crossing(m, fixed, fixed_freq, swept, cfg.sweep.start, cfg.sweep.stop, pts);
        j = to_json(s);
        csv << "swept_ghz,e0_ghz,e1_ghz\n";
        for (std::size_t i = 0; i < s.sweep_values.size(); ++i) {
            const auto& e = s.eigen_traces[i];
            csv << fd(s.sweep_values[i]) << ',' << (e.size() > 0 ? fd(e[0]) : "") << ','
                << (e.size() > 1 ? fd(e[1]) : "") << '\n';
        }
    } else if (manifold == 2) {
        auto s = two_excitation_crossing(m, fixed, fixed_freq, swept, cfg.sweep.start, cfg.sweep.stop, pts);
        j = to_json(s);
        csv << "swept_ghz,e0_ghz,e1_ghz,e2_ghz,label0,label1,label2\n";
        for (std::size_t i = 0; i < s.sweep_values.size(); ++i) {
            csv << fd(s.sweep_values[i]);
            for (double e : s.energies[i]) csv << ',' << fd(e);
            for (int l : s.labels[i]) csv << ',' << pair_labels()[l];
            csv << '\n';
        }
    } else {
        throw ConfigError("--manifold must be 1 or 2");
    }
    j["fixed_qubit"] = fixed;
    j["fixed_ghz"] = fixed_freq;
    j["manifold"] = manifold;
    out.write_text(".csv", csv.str());
    out.write_json(j);
}

// ---- emission ------------------------------------------------------------

void cmd_emission(const ExperimentConfig& cfg, std::optional<double> drive, const std::vector<double>& rabi,
                  int qubit, const Output& out) {
    LatticeModel m = cfg.model();
    auto act = m.active_qubits();
    if (qubit < 0) {
        if (act.size() != 1) throw ConfigError("emission: pass --qubit when the config has several active qubits");
        qubit = act.front();
    }
    if (qubit >= static_cast<int>(m.qubits.size())) throw ConfigError("--qubit: index out of range");
    LatticeModel solo = only_qubit(m, qubit);
    double wd = drive ? *drive : (cfg.drive.omega_d ? *cfg.drive.omega_d : single_qubit_bound_state(solo, qubit));
    double cth = dressing_angle(solo, qubit);
    int levels = solo.qubits[qubit].n_levels;
    auto ladder = dressed_ladder(solo, wd, levels, cfg.drive.photon_cutoff);

    EmissionOptions opt;
    opt.photon_cutoff = cfg.drive.photon_cutoff;
    json j;
    j["omega_d_ghz"] = wd;
    j["cos_theta"] = cth;
    j["dressed_ladder_ghz"] = ladder;
    j["points"] = json::array();
    std::ostringstream csv;
    csv << "rabi_ghz,source,level_ghz\n";
    for (double om : rabi) {
        json p{{"rabi_ghz", om}};
        p["full"] = to_json(emission_sidebands(solo, DriveParams{wd, 0.0, om}, opt));
        auto d = dressed_qubit_sidebands(ladder, wd, om * cth);
        auto d1 = dressed_qubit_sidebands(ladder, wd, om);
        p["dressed"] = to_json(d);
        p["dressed_bare_rabi"] = to_json(d1);
        for (double v : p["full"]["levels_ghz"]) csv << fd(om) << ",full," << fd(v) << '\n';
        for (double v : d.levels) csv << fd(om) << ",dressed," << fd(v) << '\n';
        for (double v : d1.levels) csv << fd(om) << ",dressed_bare_rabi," << fd(v) << '\n';
        j["points"].push_back(p);
    }
    out.write_text(".csv", csv.str());
    out.write_json(j);
}

// ---- fit pipeline ----------------------------------------------------------

// Manifest layout:
// { "config": "device.json",
//   "edge_loss": {"trace": "saturated.csv"},
//   "coupling": [{"qubit": 1, "bound": 7.605, "dip": 7.938}],
//   "halfwidth": {"qubit": 1, "fwhm": 0.0053},
//   "anharmonicity": {"qubit": 1, "value": 0.30, "anchor": 7.0} }
// Relative paths resolve against the manifest's directory. Stages run in the
// order above and each one updates the model used by the next.
void cmd_fit(const std::string& manifest_path, const Output& out) {
    json man;
    try {
        man = json::parse(read_text(manifest_path));
    } catch (const json::parse_error& e) {
        throw ConfigError(manifest_path + ": malformed JSON (" + std::string(e.what()) + ")");
    }
    if (!man.is_object() || !man.contains("config") || !man["config"].is_string())
        throw ConfigError(manifest_path + ": missing field 'config'");
    fs::path base = fs::path(manifest_path).parent_path();
    auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base / p; };
    auto cfg = load_config(resolve(man["config"].get<std::string>()).string());
    LatticeModel m = cfg.model();
    auto num_field = [&](const json& o, const char* k, const std::string& path) {
        if (!o.contains(k) || !o[k].is_number()) throw ConfigError(manifest_path + ": field '" + path + k + "' must be a number");
        return o[k].get<double>();
    };
    auto int_field = [&](const json& o, const char* k, const std::string& path) {
        if (!o.contains(k) || !o[k].is_number_integer())
            throw ConfigError(manifest_path + ": field '" + path + k + "' must be an integer");
        int v = o[k].get<int>();
        if (v < 0 || v >= static_cast<int>(m.qubits.size()))
            throw ConfigError(manifest_path + ": field '" + path + k + "' is not a qubit index");
        return v;
    };

    json reports = json::array();
    if (man.contains("edge_loss")) {
        const auto& e = man["edge_loss"];
        if (!e.contains("trace") || !e["trace"].is_string())
            throw ConfigError(manifest_path + ": field 'edge_loss.trace' must be a path");
        auto p = resolve(e["trace"].get<std::string>());
        std::ifstream f(p);
        if (!f) throw ConfigError("cannot open '" + p.string() + "'");
        auto t = read_csv(f);
        t.meta["source"] = e["trace"].get<std::string>();
        auto r = fit_edge_loss(t, m);
        m.losses.kappa = r.kappa.value;
        m.losses.kappa0 = r.kappa0.value;
        reports.push_back(to_json(r.kappa));
        reports.push_back(to_json(r.kappa0));
    }
    if (man.contains("coupling")) {
        int i = 0;
        for (const auto& c : man["coupling"]) {
            std::string path = "coupling[" + std::to_string(i++) + "].";
            int q = int_field(c, "qubit", path);
            auto r = fit_coupling(num_field(c, "bound", path), num_field(c, "dip", path), m, q);
            m.qubits[q].g = r.g.value;
            m.qubits[q].omega01 = r.omega01.value;
            auto jg = to_json(r.g);
            jg["qubit"] = q;
            auto jw = to_json(r.omega01);
            jw["qubit"] = q;
            reports.push_back(jg);
            reports.push_back(jw);
        }
    }
    if (man.contains("halfwidth")) {
        const auto& h = man["halfwidth"];
        int q = int_field(h, "qubit", "halfwidth.");
        auto r = fit_qubit_halfwidth(num_field(h, "fwhm", "halfwidth."), m);
        m.losses.kappa_q = r.value;
        reports.push_back(to_json(r));
    }
    if (man.contains("anharmonicity")) {
        const auto& a = man["anharmonicity"];
        int q = int_field(a, "qubit", "anharmonicity.");
        double anchor = a.contains("anchor") ? num_field(a, "anchor", "anharmonicity.") : 7.0;
        auto r = fit_anharmonicity(num_field(a, "value", "anharmonicity."), m, q, anchor);
        m.qubits[q].delta = r.value;
        auto jr = to_json(r);
        jr["qubit"] = q;
        reports.push_back(jr);
    }
    json j;
    j["reports"] = reports;
    j["model"] = to_json(m);
    out.write_json(j);
}

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t pos = 0;
            v.push_back(std::stod(item, &pos));
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("cannot parse '" + item + "' as a number");
        }
    }
    return v;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Band-gap QED model: dispersion, transmission, bound states, crossings, emission and fits"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "worker cap (0: BANDGAP_QED_THREADS or hardware)");

    std::string config, outdir = "out";
    auto common = [&](CLI::App* sc) {
        sc->add_option("--config,-c", config, "experiment config (JSON)")->required();
        sc->add_option("--out,-o", outdir, "output directory");
    };

    auto* disp = app.add_subcommand("dispersion", "band structure of the unit cell");
    common(disp);
    std::string bands = "1,2";
    int samples = 201;
    disp->add_option("--band", bands, "comma-separated band indices");
    disp->add_option("--samples", samples, "momentum samples over [0, pi]")->check(CLI::Range(3, 100000));

    auto* tr = app.add_subcommand("transmission", "S21 sweep over the config frequency grid");
    common(tr);
    std::string method = "steady";
    bool sat = false;
    tr->add_option("--method", method, "steady | scatter | both")->check(CLI::IsMember({"steady", "scatter", "both"}));
    tr->add_flag("--saturated", sat, "decouple all qubits");

    auto* bs = app.add_subcommand("boundstate", "bound-state energies and dressing");
    common(bs);
    bool analytic = false;
    int sweep_qubit = -1;
    bs->add_flag("--analytic", analytic, "add effective-mass predictions");
    bs->add_option("--sweep-qubit", sweep_qubit, "sweep this qubit's frequency over the config grid");

    auto* cr = app.add_subcommand("crossing", "avoided crossings in the one- or two-excitation manifold");
    common(cr);
    int manifold = 1, fixed = 0;
    double fixed_freq = 0;
    cr->add_option("--manifold", manifold, "1 or 2")->check(CLI::IsMember({1, 2}));
    cr->add_option("--fixed-qubit", fixed_freq, "frequency of the fixed qubit (GHz)")->required();
    cr->add_option("--fixed-index", fixed, "index of the fixed qubit")->check(CLI::IsMember({0, 1}));

    auto* em = app.add_subcommand("emission", "sidebands of a resonantly driven bound state");
    common(em);
    std::optional<double> drive;
    std::string rabi_grid;
    int qubit = -1;
    em->add_option("--drive", drive, "drive frequency (GHz), default the bound state");
    em->add_option("--rabi-grid", rabi_grid, "comma-separated Rabi frequencies (GHz)");
    em->add_option("--qubit", qubit, "driven qubit index");

    auto* fit = app.add_subcommand("fit", "staged parameter fit from a manifest");
    std::string manifest;
    fit->add_option("manifest", manifest, "fit manifest (JSON)")->required();
    fit->add_option("--out,-o", outdir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (threads > 0) num::set_max_threads(threads);
        std::string flags;
        for (int i = 1; i < argc; ++i) {
            std::string a = argv[i];
            if (a == "--out" || a == "-o" || a == "--threads") {
                ++i;
                continue;
            }
            if (a.rfind("--out=", 0) == 0 || a.rfind("--threads=", 0) == 0) continue;
            if (a == "--config" || a == "-c") {
                ++i;
                continue;
            }
            if (a.rfind("--config=", 0) == 0) continue;
            if (fit->parsed() && a == manifest) continue;
            flags += a + " ";
        }

        if (fit->parsed()) {
            Output out(outdir, "fit", flags + read_text(manifest));
            cmd_fit(manifest, out);
            return 0;
        }

        auto cfg = load_config(config);
        std::string key = flags + "\n" + to_json(cfg).dump();
        if (disp->parsed()) {
            std::vector<int> b;
            for (double x : parse_list(bands)) {
                if (x < 1 || x != static_cast<int>(x)) throw ConfigError("--band: indices must be positive integers");
                b.push_back(static_cast<int>(x));
            }
            if (b.empty()) throw ConfigError("--band: no band given");
            cmd_dispersion(cfg, b, samples, Output(outdir, "dispersion", key));
        } else if (tr->parsed()) {
            cmd_transmission(cfg, method, sat, Output(outdir, "transmission", key));
        } else if (bs->parsed()) {
            cmd_boundstate(cfg, analytic, sweep_qubit, Output(outdir, "boundstate", key));
        } else if (cr->parsed()) {
            cmd_crossing(cfg, manifold, fixed_freq, fixed, Output(outdir, "crossing", key));
        } else if (em->parsed()) {
            auto r = rabi_grid.empty() ? cfg.drive.rabi : parse_list(rabi_grid);
            for (double x : r)
                if (x < 0) throw ConfigError("--rabi-grid: values must be non-negative");
            cmd_emission(cfg, drive, r, qubit, Output(outdir, "emission", key));
        }
        return 0;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.error_class() == ErrorClass::config ? 2 : 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
