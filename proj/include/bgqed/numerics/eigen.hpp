#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "../errors.hpp"

namespace bgqed::num {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using SparseMat = Eigen::SparseMatrix<double>;

struct Eigensystem {
    VectorXd values;   // ascending
    MatrixXd vectors;  // columns
};

inline Eigensystem dense_eigensystem(const MatrixXd& h) {
    if (h.rows() != h.cols()) throw InvalidArgument("dense_eigensystem: matrix not square");
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(h);
    if (es.info() != Eigen::Success) throw EigenFailure("dense_eigensystem: solver failed");
    return {es.eigenvalues(), es.eigenvectors()};
}

inline VectorXd dense_eigenvalues(const MatrixXd& h) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(h, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw EigenFailure("dense_eigenvalues: solver failed");
    return es.eigenvalues();
}

struct LanczosOptions {
    int krylov_dim = 80;
    double residual_tol = 1e-9;
    int max_restarts = 4;
};

// Eigenpairs of a real symmetric sparse matrix closest to sigma, through
// Lanczos on (H - sigma)^-1 with full reorthogonalisation. The start vector
// is fixed so repeated calls give identical output. Returned pairs are
// sorted by eigenvalue and each satisfies |Hv - lv| < residual_tol*max(1,|H|),
// with |H| the max absolute row sum.
inline Eigensystem eigs_near(const SparseMat& h, double sigma, int nev,
                             LanczosOptions opt = {}) {
    const Eigen::Index n = h.rows();
    if (h.cols() != n) throw InvalidArgument("eigs_near: matrix not square");
    if (nev < 1) throw InvalidArgument("eigs_near: nev must be positive");
    if (n <= 400 || nev >= n / 2) {
        auto es = dense_eigensystem(MatrixXd(h));
        std::vector<Eigen::Index> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) {
            return std::abs(es.values[a] - sigma) < std::abs(es.values[b] - sigma);
        });
        idx.resize(std::min<Eigen::Index>(nev, n));
        std::sort(idx.begin(), idx.end());
        Eigensystem out{VectorXd(idx.size()), MatrixXd(n, idx.size())};
        for (std::size_t i = 0; i < idx.size(); ++i) {
            out.values[i] = es.values[idx[i]];
            out.vectors.col(i) = es.vectors.col(idx[i]);
        }
        return out;
    }

    double hnorm = 1.0;
    for (Eigen::Index c = 0; c < n; ++c) {
        double col = 0.0;
        for (SparseMat::InnerIterator it(h, c); it; ++it) col += std::abs(it.value());
        hnorm = std::max(hnorm, col);
    }
    const double tol = opt.residual_tol * hnorm;

    SparseMat shifted = h;
    SparseMat id(n, n);
    id.setIdentity();
    Eigen::SimplicialLDLT<SparseMat> ldlt;
    double s = sigma;
    for (int attempt = 0; attempt < 5; ++attempt) {
        shifted = h - s * id;
        ldlt.compute(shifted);
        if (ldlt.info() == Eigen::Success) break;
        s += 1e-7 * (attempt + 1);
    }
    if (ldlt.info() != Eigen::Success) throw EigenFailure("eigs_near: factorisation failed");

    int m = std::max(opt.krylov_dim, 3 * nev + 10);
    for (int restart = 0; restart <= opt.max_restarts; ++restart) {
        m = static_cast<int>(std::min<Eigen::Index>(m, n));
        MatrixXd q(n, m);
        VectorXd alpha(m), beta(m);
        VectorXd v(n);
        for (Eigen::Index i = 0; i < n; ++i)
            v[i] = 1.0 + 0.5 * std::sin(0.7 * static_cast<double>(i) + 0.3);
        v.normalize();
        int steps = 0;
        for (int j = 0; j < m; ++j) {
            q.col(j) = v;
            VectorXd w = ldlt.solve(v);
            alpha[j] = v.dot(w);
            // two passes of classical Gram-Schmidt against the whole basis
            for (int pass = 0; pass < 2; ++pass)
                w -= q.leftCols(j + 1) * (q.leftCols(j + 1).transpose() * w);
            beta[j] = w.norm();
            steps = j + 1;
            if (beta[j] < 1e-12 * std::max(1.0, std::abs(alpha[j]))) break;
            v = w / beta[j];
        }
        MatrixXd t = MatrixXd::Zero(steps, steps);
        for (int j = 0; j < steps; ++j) {
            t(j, j) = alpha[j];
            if (j + 1 < steps) t(j, j + 1) = t(j + 1, j) = beta[j];
        }
        Eigen::SelfAdjointEigenSolver<MatrixXd> ts(t);
        std::vector<int> order(steps);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return std::abs(ts.eigenvalues()[a]) > std::abs(ts.eigenvalues()[b]);
        });
        int k = std::min(nev, steps);
        std::vector<std::pair<double, VectorXd>> pairs;
        bool all_ok = true;
        for (int i = 0; i < k; ++i) {
            double theta = ts.eigenvalues()[order[i]];
            double lambda = s + 1.0 / theta;
            VectorXd x = q.leftCols(steps) * ts.eigenvectors().col(order[i]);
            x.normalize();
            double res = (h * x - lambda * x).norm();
            if (res > tol) {
                // a Rayleigh quotient often tightens a nearly converged pair
                double rq = x.dot(h * x);
                if ((h * x - rq * x).norm() <= tol)
                    lambda = rq;
                else
                    all_ok = false;
            }
            pairs.emplace_back(lambda, std::move(x));
        }
        if (all_ok || m == n) {
            if (!all_ok) throw NoConvergence("eigs_near: residual tolerance not met");
            std::sort(pairs.begin(), pairs.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            Eigensystem out{VectorXd(k), MatrixXd(n, k)};
            for (int i = 0; i < k; ++i) {
                out.values[i] = pairs[i].first;
                out.vectors.col(i) = pairs[i].second;
            }
            return out;
        }
        m *= 2;
    }
    throw NoConvergence("eigs_near: residual tolerance not met after restarts");
}

// Number of eigenvalues strictly below x, from the inertia of an LDL^T
// factorisation of H - x (Sylvester's law).
inline Eigen::Index count_below(const SparseMat& h, double x) {
    SparseMat id(h.rows(), h.cols());
    id.setIdentity();
    Eigen::SimplicialLDLT<SparseMat> ldlt(SparseMat(h - x * id));
    if (ldlt.info() != Eigen::Success) throw EigenFailure("count_below: factorisation failed");
    const VectorXd d = ldlt.vectorD();
    return (d.array() < 0.0).count();
}

} // namespace bgqed::num
