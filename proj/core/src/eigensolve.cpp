#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

#include "specgeo/errors.hpp"
#include "specgeo/fem.hpp"

namespace specgeo {

namespace {

// uniform draws on (-1, 1) built from raw 64-bit outputs so the stream is
// identical across standard libraries
struct DetRng {
    std::mt19937_64 gen;
    explicit DetRng(std::uint64_t seed) : gen(seed) {}
    double operator()() {
        double u = double(gen() >> 11) * 0x1.0p-53; // [0, 1)
        return 2.0 * u - 1.0;
    }
};

} // namespace

EigResult solve_lowest(const SparseSymMatrix& K, const SparseSymMatrix& M, int m, double tol,
                       std::uint64_t seed) {
    const std::int64_t n = K.dim();
    if (M.dim() != n) throw std::domain_error("solve_lowest: operator dimensions differ");
    if (m < 1) throw std::domain_error("solve_lowest: m >= 1 required");
    if (std::int64_t(m) * 4 > n)
        throw std::domain_error("solve_lowest: m must be at most dim/4");
    if (!(tol > 0.0)) throw std::domain_error("solve_lowest: tol > 0 required");

    const Eigen::SparseMatrix<double> Kf = K.full();
    const Eigen::SparseMatrix<double> Mf = M.full();

    // the stiffness kernel (constants) makes K itself singular; a small
    // negative shift keeps the factorization definite and the lowest modes
    // dominant under inversion
    double sigma = -1e-8 * K.trace() / double(n);
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
    ldlt.compute(Eigen::SparseMatrix<double>(Kf - sigma * Mf));
    if (ldlt.info() != Eigen::Success) {
        sigma *= 0.1;
        ldlt.compute(Eigen::SparseMatrix<double>(Kf - sigma * Mf));
        if (ldlt.info() != Eigen::Success)
            throw SolverError("solve_lowest: shifted factorization failed twice");
    }

    const bool mdiag = M.is_diagonal();
    Eigen::VectorXd mdiagv;
    std::optional<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>> mldlt;
    if (mdiag) {
        mdiagv = Mf.diagonal();
        if ((mdiagv.array() <= 0.0).any())
            throw SolverError("solve_lowest: mass matrix is not positive definite");
    } else {
        mldlt.emplace();
        mldlt->compute(Mf);
        if (mldlt->info() != Eigen::Success)
            throw SolverError("solve_lowest: mass factorization failed");
    }
    auto mul_m = [&](const Eigen::MatrixXd& x) -> Eigen::MatrixXd {
        if (mdiag) return mdiagv.asDiagonal() * x;
        return Mf * x;
    };
    auto m_norm = [&](const Eigen::VectorXd& v) {
        Eigen::VectorXd mv = mul_m(v);
        return std::sqrt(std::max(v.dot(mv), 0.0));
    };
    auto minv = [&](const Eigen::VectorXd& r) -> Eigen::VectorXd {
        if (mdiag) return r.cwiseQuotient(mdiagv);
        return mldlt->solve(r);
    };

    const int b = static_cast<int>(
        std::min<std::int64_t>(std::max(4, m), std::max<std::int64_t>(1, n / 4)));
    const int max_basis =
        static_cast<int>(std::min<std::int64_t>(n, std::max(m + 3 * b, 2 * m + b)));
    const int max_iters = 300;

    DetRng rng(seed);
    auto fill_random = [&](Eigen::Ref<Eigen::MatrixXd> x) {
        for (std::int64_t c = 0; c < x.cols(); ++c)
            for (std::int64_t r = 0; r < x.rows(); ++r) x(r, c) = rng();
    };

    Eigen::MatrixXd V(n, 0); // M-orthonormal basis

    // One M-orthogonalization pass of v against V. Returns the norm ratio
    // kept by the pass, so callers can apply the Kahan-Parlett test: a pass
    // that keeps less than half the norm means the result may be dominated
    // by cancellation noise and must be re-checked, not trusted.
    auto gs_pass = [&](Eigen::VectorXd& v) {
        double before = m_norm(v);
        if (V.cols() > 0) {
            Eigen::VectorXd coeffs = V.transpose() * mul_m(v);
            v -= V * coeffs;
        }
        double after = m_norm(v);
        return before > 0.0 ? after / before : 0.0;
    };

    // append the columns of X to V; columns that are numerically dependent
    // on the basis are replaced by fresh random vectors (or dropped)
    auto expand_basis = [&](Eigen::MatrixXd X) {
        for (std::int64_t c = 0; c < X.cols(); ++c) {
            if (V.cols() >= max_basis) break;
            Eigen::VectorXd v = X.col(c);
            for (int attempt = 0; attempt < 4; ++attempt) {
                bool ok = false;
                double kept = gs_pass(v);
                if (kept > 0.5) {
                    ok = true;
                } else {
                    kept = gs_pass(v); // second chance: reorthogonalize
                    ok = kept > 0.5;
                }
                double nn = m_norm(v);
                if (ok && nn > 0.0 && std::isfinite(nn)) {
                    v /= nn;
                    V.conservativeResize(Eigen::NoChange, V.cols() + 1);
                    V.col(V.cols() - 1) = v;
                    break;
                }
                // numerically in span(V): substitute a random direction
                Eigen::MatrixXd fresh(n, 1);
                fill_random(fresh);
                v = fresh.col(0);
            }
        }
    };

    EigResult res;
    Eigen::MatrixXd X(n, b);
    fill_random(X);

    for (int it = 1; it <= max_iters; ++it) {
        expand_basis(std::move(X));
        if (V.cols() < m) {
            // basis collapse (tiny problems); refill and retry
            Eigen::MatrixXd fresh(n, std::max<std::int64_t>(1, m - V.cols()));
            fill_random(fresh);
            expand_basis(std::move(fresh));
            if (V.cols() < m) throw SolverError("solve_lowest: basis collapsed");
        }

        // Rayleigh-Ritz on span(V)
        Eigen::MatrixXd KV = Kf * V;
        Eigen::MatrixXd H = V.transpose() * KV;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (H + H.transpose()));
        if (es.info() != Eigen::Success)
            throw SolverError("solve_lowest: dense eigensolve failed");
        Eigen::VectorXd ritz = es.eigenvalues(); // ascending
        Eigen::MatrixXd U = V * es.eigenvectors();

        res.iterations = it;
        res.values.assign(ritz.data(), ritz.data() + m);
        res.residuals.assign(static_cast<std::size_t>(m), 0.0);
        bool all_ok = true;
        for (int i = 0; i < m; ++i) {
            Eigen::VectorXd u = U.col(i);
            Eigen::VectorXd r = Kf * u - ritz(i) * mul_m(u);
            double rn = std::sqrt(std::max(r.dot(minv(r)), 0.0));
            res.residuals[static_cast<std::size_t>(i)] = rn;
            if (!(rn <= tol * std::max(1.0, std::abs(ritz(i))))) all_ok = false;
        }
        if (all_ok) {
            res.converged = true;
            return res;
        }

        // next block: one shift-invert step on the lowest Ritz vectors
        int take = static_cast<int>(std::min<std::int64_t>(b, U.cols()));
        X = ldlt.solve(mul_m(U.leftCols(take)));
        if (ldlt.info() != Eigen::Success)
            throw SolverError("solve_lowest: triangular solve failed");

        // thick restart once the basis is full: keep the best Ritz vectors
        if (V.cols() + take > max_basis) {
            int keep = static_cast<int>(std::min<std::int64_t>(m + b, U.cols()));
            V = U.leftCols(keep); // rotation of an M-orthonormal set
        }
    }
    res.converged = false; // partial result, flagged
    return res;
}

Spectrum mesh_spectrum(const TriMesh& mesh, int m, double tol, std::uint64_t seed) {
    MeshReport rep = validate(mesh);
    if (!rep.pass()) throw MeshError("mesh_spectrum: invalid mesh: " + rep.summary());
    SparseSymMatrix k = assemble_stiffness(mesh);
    SparseSymMatrix mm = assemble_mass(mesh, true);
    EigResult r = solve_lowest(k, mm, m, tol, seed);
    if (!r.converged) throw SolverError("mesh_spectrum: eigensolver did not converge");

    Spectrum s;
    s.dim = 2;
    s.volume = area(mesh);
    s.label = "mesh[" + std::to_string(mesh.vertex_count()) + "v]";
    s.values = r.values;

    // snap the numerically-zero constant mode(s) to exact zero
    double vmax = s.values.empty() ? 0.0 : std::abs(s.values.back());
    double nz_sum = 0.0;
    std::int64_t nz_count = 0;
    for (double v : s.values)
        if (std::abs(v) > 1e-8 * vmax) {
            nz_sum += std::abs(v);
            ++nz_count;
        }
    if (nz_count == 0) {
        for (double& v : s.values) v = 0.0;
    } else {
        double mean_nz = nz_sum / double(nz_count);
        for (double& v : s.values)
            if (std::abs(v) < 1e-8 * mean_nz) v = 0.0;
    }
    std::sort(s.values.begin(), s.values.end());
    return s;
}

} // namespace specgeo
