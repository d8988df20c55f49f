#include <bgqed/lattice.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

using namespace bgqed;

namespace {

// Number of vectors with entries 0..caps[i] summing to `total` (or at most
// `total` when exact is false), by direct counting.
long count_vectors(const std::vector<int>& caps, int total, bool exact) {
    std::vector<long> ways(total + 1, 0);
    ways[0] = 1;
    for (int cap : caps) {
        std::vector<long> next(total + 1, 0);
        for (int s = 0; s <= total; ++s)
            for (int v = 0; v <= cap && v <= s; ++v) next[s] += ways[s - v];
        ways = next;
    }
    if (exact) return ways[total];
    long sum = 0;
    for (long w : ways) sum += w;
    return sum;
}

Eigen::MatrixXd toeplitz(const HoppingCoefficients& h, int n) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = h.at(i - j);
    return m;
}

LatticeModel two_qubit_model(double g = 0.5) {
    LatticeModel m;
    m.qubits = {QubitSpec{8, 7.2, 0.3, g, 3, true}, QubitSpec{9, 7.6, 0.35, g, 3, true}};
    return m;
}

} // namespace

TEST(Lattice, SectorDimensionsMatchCounting) {
    auto m = two_qubit_model();
    for (int n = 0; n <= 3; ++n) {
        std::vector<int> caps(m.n_sites, n);
        caps.push_back(2);
        caps.push_back(2);
        auto b = build_sector_basis(m, n);
        EXPECT_EQ(static_cast<long>(b.size()), count_vectors(caps, n, true)) << n;
        std::set<Occupation> uniq(b.states.begin(), b.states.end());
        EXPECT_EQ(uniq.size(), b.size());
    }
}

TEST(Lattice, TruncatedDrivenBasisDimension) {
    LatticeModel m;
    m.qubits = {QubitSpec{9, 7.97, 0.365, 0.55, 5, true}};
    auto b = build_truncated_basis(m, 3);
    EXPECT_EQ(b.size(), 4845u);
    EXPECT_EQ(static_cast<long>(b.size()),
              count_vectors(std::vector<int>(16, 3), 3, false) * 5);
    for (std::size_t i = 0; i < b.size(); ++i) ASSERT_LE(b.photons(static_cast<int>(i)), 3);
    // ground state first
    EXPECT_EQ(b.photons(0), 0);
    EXPECT_EQ(b.qubit_level(0, 0), 0);
}

TEST(Lattice, SingleExcitationMatrixMatchesDirectConstruction) {
    auto m = two_qubit_model();
    Eigen::MatrixXd ref = Eigen::MatrixXd::Zero(18, 18);
    ref.topLeftCorner(16, 16) = toeplitz(m.hoppings, 16);
    for (int q = 0; q < 2; ++q) {
        ref(16 + q, 16 + q) = m.qubits[q].omega01;
        ref(16 + q, m.qubits[q].site - 1) = ref(m.qubits[q].site - 1, 16 + q) = m.qubits[q].g;
    }
    auto h = single_excitation_matrix(m);
    ASSERT_EQ(h.rows(), 18);
    EXPECT_LT((h - ref).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Lattice, HamiltonianIsSymmetric) {
    auto m = two_qubit_model();
    auto h = assemble_hamiltonian(m, build_sector_basis(m, 2));
    num::SparseMat ht = h.transpose();
    EXPECT_LT((h - ht).norm(), 1e-14);
}

TEST(Lattice, UncoupledTwoExcitationSpectrumFactorises) {
    auto m = two_qubit_model(0.0);
    auto ph = num::dense_eigenvalues(toeplitz(m.hoppings, 16));
    std::vector<double> expect;
    for (int i = 0; i < 16; ++i)
        for (int j = i; j < 16; ++j) expect.push_back(ph[i] + ph[j]);
    for (const auto& q : m.qubits)
        for (int i = 0; i < 16; ++i) expect.push_back(ph[i] + q.omega01);
    expect.push_back(m.qubits[0].omega01 + m.qubits[1].omega01);
    for (const auto& q : m.qubits) expect.push_back(2 * q.omega01 - q.delta);
    std::sort(expect.begin(), expect.end());

    auto ev = num::dense_eigenvalues(dense(assemble_hamiltonian(m, build_sector_basis(m, 2))));
    ASSERT_EQ(static_cast<std::size_t>(ev.size()), expect.size());
    for (std::size_t i = 0; i < expect.size(); ++i) EXPECT_NEAR(ev[i], expect[i], 1e-12);
}

TEST(Lattice, DrivenMatrixBlockStructure) {
    LatticeModel m;
    m.qubits = {QubitSpec{9, 7.97, 0.365, 0.55, 4, true}};
    auto b = build_truncated_basis(m, 2);
    auto exc = [&](int i) { return b.photons(i) + b.qubit_level(i, 0); };
    auto undriven = assemble_driven_hamiltonian(m, DriveParams{7.6, 0.0, 0.0}, b).h;
    for (int c = 0; c < undriven.outerSize(); ++c)
        for (num::SparseMat::InnerIterator it(undriven, c); it; ++it)
            EXPECT_EQ(exc(static_cast<int>(it.row())), exc(static_cast<int>(it.col())));
    auto driven = assemble_driven_hamiltonian(m, DriveParams{7.6, 0.0, 0.05}, b).h;
    int cross = 0;
    for (int c = 0; c < driven.outerSize(); ++c)
        for (num::SparseMat::InnerIterator it(driven, c); it; ++it) {
            int d = std::abs(exc(static_cast<int>(it.row())) - exc(static_cast<int>(it.col())));
            EXPECT_LE(d, 1);
            if (d == 1) {
                ++cross;
                // drive acts on the qubit only, with a sqrt(n) ladder factor
                int lr = b.qubit_level(static_cast<int>(it.row()), 0), lc = b.qubit_level(static_cast<int>(it.col()), 0);
                EXPECT_NEAR(it.value(), 0.05 * std::sqrt(std::max(lr, lc)), 1e-15);
            }
        }
    EXPECT_GT(cross, 0);
}

TEST(Lattice, DriveFrameShiftsDiagonal) {
    LatticeModel m;
    m.qubits = {QubitSpec{9, 7.97, 0.365, 0.55, 3, true}};
    auto b = build_truncated_basis(m, 1);
    auto h = assemble_driven_hamiltonian(m, DriveParams{7.5, 0.0, 0.0}, b).h;
    Occupation o(17, 0);
    o[16] = 2;
    int i = b.find(o);
    ASSERT_GE(i, 0);
    EXPECT_NEAR(h.coeff(i, i), 2 * 7.97 - 0.365 - 2 * 7.5, 1e-14);
}

TEST(Lattice, BasisFromOtherModelRejected) {
    auto m = two_qubit_model();
    auto other = m;
    other.qubits[1].active = false;
    EXPECT_THROW(assemble_hamiltonian(m, build_sector_basis(other, 1)), BasisMismatch);
}

TEST(Lattice, InvalidModelsRejected) {
    auto m = two_qubit_model();
    m.qubits[1].site = 8;
    EXPECT_THROW(m.validate(), InvalidArgument);
    m = two_qubit_model();
    m.qubits[0].site = 17;
    EXPECT_THROW(m.validate(), InvalidArgument);
    m = two_qubit_model();
    m.n_sites = 5;
    EXPECT_THROW(m.validate(), InvalidArgument);
}

TEST(Hopping, RoundTripThroughBand) {
    auto ref = reference_hoppings();
    auto h = hopping_from_band([&](double q) { return hopping_band(ref, q); }, 7);
    for (int r = 0; r <= 7; ++r) EXPECT_NEAR(h.at(r), ref.at(r), 1e-9) << r;
}

TEST(Hopping, CosineBand) {
    auto h = hopping_from_band([](double q) { return 7.0 + 0.8 * std::cos(q); }, 3);
    EXPECT_NEAR(h.j[0], 7.0, 1e-10);
    EXPECT_NEAR(h.j[1], 0.4, 1e-10);
    EXPECT_NEAR(h.j[2], 0.0, 1e-10);
}

TEST(Hopping, ComputedBandReproducesCrystalEdge) {
    UnitCell c;
    auto h = hopping_coefficients(c, 5);
    double lo = 1e9;
    for (int i = 0; i <= 400; ++i) lo = std::min(lo, hopping_band(h, std::numbers::pi * i / 400));
    EXPECT_NEAR(lo, band_edges(c, 2).f_min, 2e-3);
    EXPECT_NEAR(h.j[0], 9.328443, 1e-5);
    EXPECT_NEAR(h.j[1], 0.728921, 1e-5);
}

TEST(Lattice, JsonRoundTrip) {
    auto m = two_qubit_model();
    m.losses = {1.0, 0.004, 0.0005};
    m.qubits[1].active = false;
    auto back = lattice_from_json(to_json(m));
    EXPECT_EQ(to_json(back).dump(), to_json(m).dump());
    auto j = to_json(m);
    j.erase("hoppings");
    EXPECT_THROW(lattice_from_json(j), ConfigError);
}
