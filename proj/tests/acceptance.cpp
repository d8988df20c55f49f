// Acceptance run: one PASS/FAIL line per criterion, details indented below.
// Exit status is non-zero when any criterion fails.

#include <bgqed/bgqed.hpp>

#include <sys/wait.h>

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace bgqed;
namespace fs = std::filesystem;

namespace {

struct Check {
    std::string what;
    bool ok;
};

class Criterion {
public:
    explicit Criterion(int id, std::string title) : id_(id), title_(std::move(title)) {}

    bool check(bool ok, const char* fmt, ...) __attribute__((format(printf, 3, 4))) {
        char buf[512];
        va_list ap;
        va_start(ap, fmt);
        std::vsnprintf(buf, sizeof buf, fmt, ap);
        va_end(ap);
        checks_.push_back({buf, ok});
        return ok;
    }
    void note(const std::string& s) { notes_.push_back(s); }

    bool report() const {
        bool ok = !checks_.empty();
        for (const auto& c : checks_) ok = ok && c.ok;
        std::printf("criterion %2d: %s  %s\n", id_, ok ? "PASS" : "FAIL", title_.c_str());
        for (const auto& c : checks_) std::printf("    [%s] %s\n", c.ok ? "ok" : "no", c.what.c_str());
        for (const auto& n : notes_) std::printf("    note: %s\n", n.c_str());
        std::fflush(stdout);
        return ok;
    }

private:
    int id_;
    std::string title_;
    std::vector<Check> checks_;
    std::vector<std::string> notes_;
};

bool within(double v, double target, double tol) { return std::abs(v - target) <= tol; }

std::string cfg(const std::string& name) { return std::string(BGQED_CONFIGS) + "/" + name; }

// ---- 1 -------------------------------------------------------------------

bool hoppings() {
    Criterion c(1, "hopping coefficients of the reference cell");
    const double printed[] = {9.3272, 0.7288, -0.0344, 0.0178, -0.0034, 0.0014};
    const double primed[] = {9.331, 0.7308, -0.0345, 0.0179, -0.0035, 0.0014};
    UnitCell cell;
    auto h = hopping_coefficients(cell, 5);
    for (int r = 0; r <= 5; ++r)
        c.check(within(h.j[r], printed[r], 1e-4), "J%d = %.6f vs %.4f (+-1e-4)", r, h.j[r], printed[r]);
    UnitCell alt = cell;
    alt.z_hi = 123.5;
    auto hp = hopping_coefficients(alt, 5);
    double worst = 1e9;
    for (int r = 0; r <= 5; ++r) worst = std::min(worst, hp.j[r] / primed[r]);
    c.check(worst >= 0.97, "Z_hi = 123.5: smallest ratio to the primed set %.4f (>= 0.97)", worst);
    return c.report();
}

// ---- 2 -------------------------------------------------------------------

bool band_structure() {
    Criterion c(2, "band edge, gap and edge curvature");
    UnitCell cell;
    auto gap = band_gap(cell, 1);
    auto fit = fit_band_edge(cell, 2);
    c.check(within(gap.upper, 7.80, 0.01), "band-2 edge %.6f GHz vs 7.80 +- 0.01", gap.upper);
    c.check(within(gap.lower, 4.75, 0.05), "gap lower edge %.6f GHz vs 4.75 +- 0.05", gap.lower);
    c.check(within(gap.upper, 7.80, 0.05), "gap upper edge %.6f GHz vs 7.80 +- 0.05", gap.upper);
    c.check(within(fit.alpha, 1.155, 0.02), "fitted alpha %.6f GHz vs 1.155 +- 0.02", fit.alpha);
    return c.report();
}

// ---- 3 -------------------------------------------------------------------

bool bound_state_anchor() {
    Criterion c(3, "in-gap peak of the reference device, method agreement");
    auto m = reference_model();
    double edge = passband(m).first;
    auto ts = sweep_s21(m, Method::steady_state, 7.4, 8.2, 8001);
    auto tc = sweep_s21(m, Method::scattering, 7.4, 8.2, 8001);
    auto ps = find_bound_state_peak(ts, 7.4, edge - 0.01);
    auto pc = find_bound_state_peak(tc, 7.4, edge - 0.01);
    double ds = find_dip(ts, edge, 8.2), dc = find_dip(tc, edge, 8.2);
    c.check(within(ps.freq, 7.605, 0.005), "method-one peak %.6f GHz vs 7.605 +- 0.005", ps.freq);
    c.check(std::abs(ps.freq - pc.freq) <= 1e-3, "peak difference %.3f MHz (<= 1)", 1e3 * std::abs(ps.freq - pc.freq));
    c.check(std::abs(ds - dc) <= 1e-3, "dip %.6f vs %.6f GHz, difference %.3f MHz (<= 1)", ds, dc,
            1e3 * std::abs(ds - dc));
    return c.report();
}

// ---- 4 -------------------------------------------------------------------

bool strong_coupling() {
    Criterion c(4, "qubit resonant with the band edge");
    // the quoted separation refers to the mean coupling of the two qubits
    const double g_mean = 0.5 * (0.505 + 0.55);
    auto m = reference_model();
    double edge = passband(m).first;
    m.qubits[1].omega01 = edge;
    m.qubits[1].g = g_mean;
    double e = bound_state_eigenvalue(m, edge);
    double fwhm = bound_state_fwhm(m);
    c.check(within(edge - e, 0.250, 0.025), "g = %.4f: separation from the %.4f GHz edge %.1f MHz vs 250 +- 10%%",
            g_mean, edge, 1e3 * (edge - e));
    c.check(within(fwhm, 0.004, 0.002), "fwhm %.2f MHz vs 4 +- 50%%", 1e3 * fwhm);
    auto m2 = m;
    m2.qubits[1].g = 0.55;
    char buf[160];
    std::snprintf(buf, sizeof buf, "with g = 0.55 the separation is %.1f MHz",
                  1e3 * (edge - bound_state_eigenvalue(m2, edge)));
    c.note(buf);
    return c.report();
}

// ---- 5 -------------------------------------------------------------------

bool anharmonicity() {
    Criterion c(5, "dressed anharmonicity curve");
    auto m = reference_model();
    double w = bare_frequency_for_bound_state(m, 1, 7.59, 4.0, 10.0);
    double at = dressed_anharmonicity(m, 1, w).value;
    c.check(within(at, 0.11, 0.01), "bound state at 7.59 GHz (bare %.4f): %.4f GHz vs 0.11 +- 0.01", w, at);
    double deep = dressed_anharmonicity(m, 1, 2.0).value;
    c.check(within(deep, 0.365, 0.01), "deep in the gap (bare 2.0 GHz): %.4f GHz -> 0.365", deep);
    double pass = dressed_anharmonicity(m, 1, 10.0).value;
    c.check(pass < 0.005, "in the passband (bare 10.0 GHz): %.2e GHz -> 0", pass);
    bool mono = true;
    double prev = 1e9;
    for (double x = 2.0; x <= 10.0 + 1e-9; x += 0.05) {
        double v = dressed_anharmonicity(m, 1, x).value;
        mono = mono && v < prev;
        prev = v;
    }
    c.check(mono, "monotone in the bare frequency over [2, 10] GHz");
    return c.report();
}

// ---- 6 -------------------------------------------------------------------

bool existence_threshold_check() {
    Criterion c(6, "two-qubit existence threshold");
    EdgeBand b{7.8, 1.155};
    double g = 0.5275;
    double th = existence_threshold(g, b, 1);
    auto below = symmetric_antisymmetric(b.omega0 + th - 1e-5, g, b, 1);
    auto above = symmetric_antisymmetric(b.omega0 + th + 1e-5, g, b, 1);
    c.check(within(th, 0.120, 0.002), "threshold %.3f MHz vs 120 +- 2", 1e3 * th);
    c.check(below.symmetric.exists && !above.symmetric.exists, "symmetric branch exists below and vanishes above");
    return c.report();
}

// ---- 7 -------------------------------------------------------------------

bool crossings() {
    Criterion c(7, "avoided crossings");
    auto m = reference_model();
    double edge = passband(m).first;
    auto one = one_excitation_crossing(m, 0, 7.73, 1, 7.5, 7.95, 181);
    c.check(within(one.min_gap, 0.240, 0.036), "one-excitation gap %.1f MHz at %.4f GHz vs 240 +- 15%%",
            1e3 * one.min_gap, one.gap_location);
    bool mono = true;
    double prev = -1;
    for (double f = edge - 0.02; f >= 6.5; f -= 0.02) {
        double gap = resonant_pair_gap(m, 0, 1, f);
        if (prev >= 0) mono = mono && gap < prev;
        prev = gap;
    }
    c.check(mono, "resonant-pair gap decreases monotonically from %.3f down to 6.5 GHz", edge - 0.02);

    auto cc = load_config(cfg("crossing.json"));
    auto cm = cc.model();
    auto two = two_excitation_crossing(cm, 0, cm.qubits[0].omega01, 1, cc.sweep.start, cc.sweep.stop,
                                       static_cast<std::size_t>(cc.sweep.points));
    auto x2002 = two.find("20-02"), x0211 = two.find("02-11");
    if (!c.check(x2002 && x0211, "both crossings located")) return c.report();
    c.check(x2002->gap > 0.010, "|20>-|02> gap %.1f MHz at %.4f GHz (> 10)", 1e3 * x2002->gap, x2002->location);
    c.check(x0211->gap >= 5 * x2002->gap, "|02>-|11> gap %.1f MHz at %.4f GHz, ratio %.2f (>= 5)", 1e3 * x0211->gap,
            x0211->location, x0211->gap / x2002->gap);
    if (auto x = two.find("20-11"))
        c.note("|20>-|11> gap " + std::to_string(1e3 * x->gap) + " MHz, ratio " + std::to_string(x->gap / x2002->gap));
    return c.report();
}

// ---- 8 and 9 ----------------------------------------------------------------

struct EmissionSetup {
    ExperimentConfig cfg;
    LatticeModel solo;
    int qubit = 1;
    double wd = 0, cos_t = 0;
    std::vector<double> ladder;
};

EmissionSetup emission_setup() {
    EmissionSetup s;
    s.cfg = load_config(cfg("emission.json"));
    s.solo = only_qubit(s.cfg.model(), s.qubit);
    s.wd = single_qubit_bound_state(s.solo, s.qubit);
    s.cos_t = dressing_angle(s.solo, s.qubit);
    s.ladder = dressed_ladder(s.solo, s.wd, s.solo.qubits[s.qubit].n_levels, s.cfg.drive.photon_cutoff);
    return s;
}

// Worst line difference between the tracked full-model levels and the
// matching (highest) levels of the driven dressed ladder.
double sideband_deviation(const SidebandSet& full, const EmissionSetup& s, double rabi_reduced) {
    auto lv = dressed_qubit_levels(s.ladder, rabi_reduced);
    std::sort(lv.begin(), lv.end());
    std::vector<double> top(lv.end() - static_cast<long>(full.levels.size()), lv.end());
    auto lines = pairwise_lines(top, s.wd);
    double worst = 0;
    for (std::size_t i = 0; i < lines.size(); ++i) worst = std::max(worst, std::abs(lines[i] - full.sidebands[i]));
    return worst;
}

bool dressing(const EmissionSetup& s) {
    Criterion c(8, "dressing angle and driven sidebands");
    c.check(within(s.cos_t, 0.68, 0.01), "cos theta %.4f for the %.4f GHz bound state vs 0.68 +- 0.01", s.cos_t, s.wd);
    EmissionOptions opt;
    opt.photon_cutoff = s.cfg.drive.photon_cutoff;
    double worst = 0, worst_bare = 0;
    for (double om : s.cfg.drive.rabi) {
        auto full = emission_sidebands(s.solo, DriveParams{s.wd, 0.0, om}, opt);
        double d = sideband_deviation(full, s, om * s.cos_t);
        double d1 = sideband_deviation(full, s, om);
        c.note("Omega " + std::to_string(om) + " GHz: deviation " + std::to_string(1e3 * d) + " MHz, with cos theta = 1 " +
               std::to_string(1e3 * d1) + " MHz");
        worst = std::max(worst, d);
        worst_bare = std::max(worst_bare, d1);
    }
    c.check(worst <= 0.005, "Omega~ = Omega cos theta: worst deviation %.2f MHz (<= 5)", 1e3 * worst);
    c.check(worst_bare > 0.020, "cos theta = 1: worst deviation %.2f MHz (> 20)", 1e3 * worst_bare);
    return c.report();
}

bool ladder_values(const EmissionSetup& s) {
    Criterion c(9, "dressed emission ladder");
    if (!c.check(s.ladder.size() >= 5, "five dressed levels available")) return c.report();
    c.check(within(s.ladder[3], -0.48, 0.01), "w03 - 3 wd = %.4f GHz vs -0.48 +- 0.01", s.ladder[3]);
    c.check(within(s.ladder[4], -1.78, 0.01), "w04 - 4 wd = %.4f GHz vs -1.78 +- 0.01", s.ladder[4]);
    c.note("w23 offset of the quoted -0.48 against the full model: " + std::to_string(1e3 * (s.ladder[3] + 0.48)) +
           " MHz (the quoted value is itself fitted ~50 MHz off)");
    return c.report();
}

// ---- 10 ----------------------------------------------------------------------

int run_cli(const std::string& args) {
    int st = std::system((std::string(BGQED_CLI) + " " + args + " > /dev/null 2>&1").c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool properties() {
    Criterion c(10, "property suites");
    LatticeModel m = reference_model(7.6);
    m.qubits[0].omega01 = 7.3;

    // Hermiticity and block structure
    auto b2 = build_sector_basis(m, 2);
    auto h2 = assemble_hamiltonian(m, b2);
    num::SparseMat h2t = h2.transpose();
    c.check((h2 - h2t).norm() < 1e-14, "two-excitation Hamiltonian symmetric (|H - H^T| = %.1e)", (h2 - h2t).norm());
    LatticeModel d;
    d.qubits = {QubitSpec{9, 7.97, 0.365, 0.55, 4, true}};
    auto bt = build_truncated_basis(d, 2);
    auto hd = assemble_driven_hamiltonian(d, DriveParams{7.6, 0.0, 0.05}, bt).h;
    bool blocks = true;
    for (int col = 0; col < hd.outerSize(); ++col)
        for (num::SparseMat::InnerIterator it(hd, col); it; ++it) {
            int r = static_cast<int>(it.row()), k = static_cast<int>(it.col());
            int dr = bt.photons(r) + bt.qubit_level(r, 0), dk = bt.photons(k) + bt.qubit_level(k, 0);
            blocks = blocks && std::abs(dr - dk) <= 1;
        }
    c.check(blocks, "driven matrix couples only neighbouring excitation blocks");

    // transfer-matrix unitarity
    UnitCell cell;
    double unit = 0;
    for (double f = 0.5; f < 15.0; f += 0.25) {
        auto s = transfer_matrix_sparams(cell, 16, f);
        unit = std::max(unit, std::abs(std::norm(s.s11) + std::norm(s.s21) - 1.0));
    }
    c.check(unit <= 1e-10, "lossless |S11|^2 + |S21|^2 - 1 <= %.1e (1e-10)", unit);

    // g -> 0 factorisation of the single-excitation spectrum
    auto m0 = m;
    for (auto& q : m0.qubits) q.g = 0.0;
    auto ev = num::dense_eigenvalues(single_excitation_matrix(m0));
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(16, 16);
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j) t(i, j) = m0.hoppings.at(i - j);
    auto ph = num::dense_eigenvalues(t);
    std::vector<double> expect(ph.data(), ph.data() + 16);
    expect.push_back(7.3);
    expect.push_back(7.6);
    std::sort(expect.begin(), expect.end());
    double fact = 0;
    for (int i = 0; i < 18; ++i) fact = std::max(fact, std::abs(ev[i] - expect[i]));
    c.check(fact <= 1e-12, "g = 0 spectrum factorises to %.1e (1e-12)", fact);

    // Born-Markov convergence
    EdgeBand band{7.8, 1.155};
    std::vector<double> rel;
    for (double depth : {0.5, 1.0, 2.0, 4.0}) {
        double w = band.omega0 - depth;
        auto ex = single_qubit_bound_energy(w, 0.2, band);
        rel.push_back(std::abs(ex.energy - born_markov_energies(w, 0.2, band, 1).dressed) / std::abs(ex.energy - w));
    }
    bool conv = std::is_sorted(rel.rbegin(), rel.rend()) && rel.back() < 1e-2;
    c.check(conv, "Born-Markov relative error %.2e -> %.2e as detuning grows 0.5 -> 4 GHz", rel.front(), rel.back());

    // g^4 scaling
    EdgeBand eb{7.755, 1.1476};
    double w01 = 7.3, delta = 0.365;
    double j1 = two_photon_exchange(eb, 0.05, 2 * w01 - delta, w01 - delta, 1);
    double j2 = two_photon_exchange(eb, 0.1, 2 * w01 - delta, w01 - delta, 1);
    double slope = std::log(j2 / j1) / std::log(2.0);
    c.check(within(slope, 4.0, 0.2), "two-photon exchange log-log slope %.4f (4.0 +- 0.2)", slope);

    // round-trip identifiability on noiseless synthetic data
    auto truth = reference_model();
    truth.qubits[1].g = 0.5;
    truth.qubits[1].omega01 = 8.0;
    auto trace = sweep_s21(saturated(truth), Method::steady_state, 7.7, 10.8, 3101);
    auto el = fit_edge_loss(trace, truth);
    double te = passband(truth).first;
    auto cf = fit_coupling(bound_state_eigenvalue(truth, te), transmission_zero(truth, 7.94, 0.2), reference_model(), 1);
    auto hw = fit_qubit_halfwidth(bound_state_fwhm(truth), [&] {
        auto x = truth;
        x.losses.kappa_q = 0.0;
        return x;
    }());
    bool rt = within(el.kappa.value, 1.0, 1e-4) && within(el.kappa0.value, 0.004, 1e-6) &&
              within(cf.g.value, 0.5, 1e-6) && within(cf.omega01.value, 8.0, 1e-6) && within(hw.value, 0.0005, 1e-7);
    c.check(rt, "noiseless round trip: kappa %.6f, kappa0 %.7f, g %.6f, w01 %.6f, kappa_q %.7f", el.kappa.value,
            el.kappa0.value, cf.g.value, cf.omega01.value, hw.value);

    // CLI determinism
    auto dir = fs::temp_directory_path() / ("bgqed_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    bool same = true;
    int rc1 = run_cli("--threads 1 transmission -c " + cfg("device.json") + " --method both -o " + (dir / "a").string());
    int rc2 = run_cli("--threads 3 transmission -c " + cfg("device.json") + " --method both -o " + (dir / "b").string());
    same = rc1 == 0 && rc2 == 0;
    int n = 0;
    if (same)
        for (auto& e : fs::directory_iterator(dir / "a")) {
            auto other = dir / "b" / e.path().filename();
            same = same && fs::exists(other) && slurp(e.path()) == slurp(other);
            ++n;
        }
    fs::remove_all(dir);
    c.check(same && n > 0, "CLI outputs byte-identical across runs and thread counts (%d files)", n);
    return c.report();
}

} // namespace

int main() {
    int failed = 0;
    auto guard = [&](const std::function<bool()>& f, int id) {
        try {
            failed += !f();
        } catch (const std::exception& e) {
            std::printf("criterion %2d: FAIL  exception: %s\n", id, e.what());
            ++failed;
        }
    };
    guard(hoppings, 1);
    guard(band_structure, 2);
    guard(bound_state_anchor, 3);
    guard(strong_coupling, 4);
    guard(anharmonicity, 5);
    guard(existence_threshold_check, 6);
    guard(crossings, 7);
    std::optional<EmissionSetup> es;
    try {
        es = emission_setup();
    } catch (const std::exception& e) {
        std::printf("emission setup failed: %s\n", e.what());
    }
    guard([&] { return es && dressing(*es); }, 8);
    guard([&] { return es && ladder_values(*es); }, 9);
    guard(properties, 10);
    std::printf("%d of 10 criteria failed\n", failed);
    return failed == 0 ? 0 : 1;
}
