#include <bgqed/transmission.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace bgqed;

namespace {

// Dense single-excitation matrix built here, independently of the library.
Eigen::MatrixXd direct_matrix(const LatticeModel& m) {
    int n = m.n_sites, nq = 0;
    for (const auto& q : m.qubits) nq += q.active;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n + nq, n + nq);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) h(i, j) = m.hoppings.at(i - j);
    int k = n;
    for (const auto& q : m.qubits) {
        if (!q.active) continue;
        h(k, k) = q.omega01;
        h(k, q.site - 1) = h(q.site - 1, k) = q.g;
        ++k;
    }
    return h;
}

// Green's function element between the end sites with diagonal damping.
cplx green_end_to_end(const Eigen::MatrixXd& h, const Eigen::VectorXcd& damping, double w, int n_sites) {
    Eigen::MatrixXcd a = -h.cast<cplx>();
    for (Eigen::Index i = 0; i < a.rows(); ++i) a(i, i) += w + damping[i];
    return a.fullPivLu().inverse()(n_sites - 1, 0);
}

SpectrumTrace lorentzian(double f0, double hw, double lo, double hi, int n) {
    SpectrumTrace t;
    for (int i = 0; i < n; ++i) {
        double f = lo + (hi - lo) * i / (n - 1);
        t.freqs.push_back(f);
        t.values.emplace_back(std::sqrt(1.0 / (1.0 + (f - f0) * (f - f0) / (hw * hw))), 0.0);
    }
    return t;
}

} // namespace

TEST(Steady, MatchesIndependentGreensFunction) {
    auto m = reference_model();
    auto h = direct_matrix(m);
    Eigen::VectorXcd damp(h.rows());
    for (int i = 0; i < h.rows(); ++i) damp[i] = cplx(0, i < m.n_sites ? m.losses.kappa0 : m.losses.kappa_q);
    damp[0] += cplx(0, m.losses.kappa);
    damp[m.n_sites - 1] += cplx(0, m.losses.kappa);
    SteadyStateSolver s(m);
    for (double w : {7.2, 7.6, 7.61, 7.9, 8.1, 9.5}) {
        cplx ref = green_end_to_end(h, damp, w, m.n_sites);
        cplx got = s.raw(w);
        EXPECT_LT(std::abs(got - ref), 1e-12 * std::max(1.0, std::abs(ref))) << w;
    }
}

TEST(Steady, DecoupledQubitLeavesBareLattice) {
    auto m = reference_model();
    for (auto& q : m.qubits) q.g = 0.0;
    auto bare = saturated(m);
    SteadyStateSolver a(m), b(bare);
    for (double w : {7.7, 7.9, 8.3, 9.0}) EXPECT_LT(std::abs(a.raw(w) - b.raw(w)), 1e-13) << w;
    EXPECT_TRUE(bare.active_qubits().empty());
}

TEST(Steady, SaturatedPassbandNormalisedToUnity) {
    auto m = saturated(reference_model());
    auto [lo, hi] = passband(m);
    auto t = sweep_s21(m, Method::steady_state, lo - 0.05, hi + 0.05, 4001);
    double best = 0;
    for (auto v : t.values) best = std::max(best, std::abs(v));
    EXPECT_LE(best, 1.0 + 1e-12);
    EXPECT_GT(best, 0.995);
}

TEST(Scattering, MatchesEffectiveHamiltonian) {
    auto m = reference_model();
    WaveguidePorts p;
    auto h = direct_matrix(m);
    Eigen::VectorXcd damp = Eigen::VectorXcd::Zero(h.rows());
    damp[0] = damp[m.n_sites - 1] = cplx(0, 0.5 * p.g_w);
    ScatteringSolver s(m, p);
    for (double w : {7.3, 7.6, 7.85, 7.95, 8.4, 9.9}) {
        cplx ref = -cplx(0, p.g_w) * green_end_to_end(h, damp, w, m.n_sites);
        cplx got = s.amplitude(w).t;
        EXPECT_LT(std::abs(got - ref), 1e-10) << w;
        EXPECT_LE(std::abs(got), 1.0 + 1e-12);
    }
}

TEST(Methods, AgreeOnPeakAndDip) {
    auto m = reference_model();
    auto edge = passband(m).first;
    auto ts = sweep_s21(m, Method::steady_state, 7.55, 8.05, 2001);
    auto tc = sweep_s21(m, Method::scattering, 7.55, 8.05, 2001);
    auto ps = find_bound_state_peak(ts, 7.55, edge - 0.01);
    auto pc = find_bound_state_peak(tc, 7.55, edge - 0.01);
    EXPECT_NEAR(ps.freq, pc.freq, 1e-3);
    double zero = transmission_zero(m, 7.94, 0.1);
    EXPECT_NEAR(find_dip(ts, 7.9, 7.98), zero, 1e-3);
    EXPECT_NEAR(find_dip(tc, 7.9, 7.98), zero, 1e-3);
}

TEST(Methods, BoundStatePeakApproachesEigenvalueAsLossVanishes) {
    auto m = reference_model();
    double edge = passband(m).first;
    double e = bound_state_eigenvalue(m, edge);
    double prev = 1.0;
    for (double scale : {1.0, 0.1, 0.01}) {
        auto mm = m;
        mm.losses = {m.losses.kappa * scale, m.losses.kappa0 * scale, m.losses.kappa_q * scale};
        auto t = sweep_s21(mm, Method::steady_state, e - 0.05, e + 0.05, 20001);
        double off = std::abs(find_bound_state_peak(t, e - 0.05, e + 0.05).freq - e);
        EXPECT_LT(off, prev) << scale;
        prev = off;
    }
    EXPECT_LT(prev, 2e-5);
}

TEST(Peaks, LorentzianCentreAndWidth) {
    auto t = lorentzian(7.6031, 0.0025, 7.55, 7.65, 4001);
    auto p = find_bound_state_peak(t, 7.55, 7.65);
    EXPECT_NEAR(p.freq, 7.6031, 1e-6);
    EXPECT_NEAR(p.fwhm, 0.005, 1e-5);
    EXPECT_NEAR(p.height, 1.0, 1e-6);
}

TEST(Peaks, DipOnInvertedLorentzian) {
    auto t = lorentzian(7.9377, 0.001, 7.9, 7.98, 801);
    for (auto& v : t.values) v = 1.0 - 0.999 * v.real();
    EXPECT_NEAR(find_dip(t, 7.9, 7.98), 7.9377, 1e-5);
}

TEST(Peaks, FlatTraceHasNoPeak) {
    SpectrumTrace t;
    for (int i = 0; i < 100; ++i) {
        t.freqs.push_back(7.0 + 0.01 * i);
        t.values.emplace_back(0.01, 0.0);
    }
    EXPECT_THROW(find_bound_state_peak(t, 7.0, 8.0), NoPeak);
}

TEST(Trace, CsvRoundTripIsExact) {
    auto m = reference_model();
    auto t = sweep_s21(m, Method::steady_state, 7.5, 8.0, 101);
    std::stringstream ss;
    write_csv(ss, t);
    auto back = read_csv(ss);
    ASSERT_EQ(back.size(), t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        EXPECT_EQ(back.freqs[i], t.freqs[i]);
        EXPECT_EQ(back.values[i], t.values[i]);
    }
}

TEST(Trace, MagnitudeOnlyCsv) {
    std::stringstream ss("freq_ghz,mag_db\n7.0,-20\n7.1,0\n");
    auto t = read_csv(ss);
    EXPECT_NEAR(std::abs(t.values[0]), 0.1, 1e-15);
    std::stringstream bad("freq_ghz,mag_db\n7.0,abc\n");
    EXPECT_THROW(read_csv(bad), ConfigError);
    std::stringstream unsorted("freq_ghz,mag_db\n7.1,0\n7.0,0\n");
    EXPECT_THROW(read_csv(unsorted), InvalidArgument);
}

TEST(Trace, JsonRoundTrip) {
    auto t = sweep_s21(reference_model(), Method::scattering, 7.5, 8.0, 51);
    auto back = trace_from_json(to_json(t));
    EXPECT_EQ(back.meta, t.meta);
    EXPECT_EQ(back.values, t.values);
}

TEST(Sweep, RejectsBadGrid) {
    EXPECT_THROW(sweep_s21(reference_model(), Method::steady_state, 8.0, 7.0, 10), InvalidArgument);
    EXPECT_THROW(sweep_s21(reference_model(), Method::steady_state, 7.0, 8.0, 1), InvalidArgument);
}
