#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "specgeo/spectrum.hpp"
#include "specgeo/trimesh.hpp"

namespace specgeo {

// Symmetric operator, lower triangle stored row-major.
struct SparseSymMatrix {
    Eigen::SparseMatrix<double, Eigen::RowMajor> lower;

    std::int64_t dim() const { return lower.rows(); }
    std::int64_t stored_nonzeros() const { return lower.nonZeros(); }
    bool is_diagonal() const;
    double trace() const;
    Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
    Eigen::SparseMatrix<double> full() const; // symmetric expansion, column-major
};

// Cotangent stiffness: off-diagonal -(cot a + cot b)/2 per interior edge,
// diagonal minus the row sum. Rows of the full matrix sum to zero. Throws
// MeshError when a triangle degenerates (|cot| > 1e8 or zero area).
SparseSymMatrix assemble_stiffness(const TriMesh& mesh);

// lumped = diagonal with one third of the incident triangle areas;
// consistent = per-triangle (area/12) * [[2,1,1],[1,2,1],[1,1,2]].
SparseSymMatrix assemble_mass(const TriMesh& mesh, bool lumped = true);

// Matrix Market "coordinate real symmetric", lower triangle, 1-based indices.
void write_matrix_market(std::ostream& os, const SparseSymMatrix& a);
void write_matrix_market(const std::string& path, const SparseSymMatrix& a);

struct EigResult {
    std::vector<double> values;    // ascending
    std::vector<double> residuals; // ||K u - lambda M u||_{M^-1}, same order
    int iterations = 0;
    bool converged = false;
};

// "index,eigenvalue,residual" rows
void write_eig_csv(std::ostream& os, const EigResult& r);

// Lowest m eigenpairs of K u = lambda M u (K, M symmetric, M positive
// definite). Shift-invert block iteration with M-orthonormal Rayleigh-Ritz
// extraction; deterministic for a fixed seed. Convergence requires every
// residual <= tol * max(1, lambda). Throws SolverError when factorization
// fails or the iteration stalls.
EigResult solve_lowest(const SparseSymMatrix& K, const SparseSymMatrix& M, int m,
                       double tol = 1e-9, std::uint64_t seed = 1234);

// validate -> assemble (lumped mass) -> solve_lowest -> Spectrum with
// volume = area(mesh) and dim = 2. Eigenvalues below 1e-8 of the mean
// nonzero magnitude snap to exact zero (the constant mode).
Spectrum mesh_spectrum(const TriMesh& mesh, int m, double tol = 1e-9,
                       std::uint64_t seed = 1234);

} // namespace specgeo
