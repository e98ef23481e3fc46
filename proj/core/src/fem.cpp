#include "specgeo/fem.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "num_format.hpp"
#include "specgeo/errors.hpp"

namespace specgeo {

bool SparseSymMatrix::is_diagonal() const {
    if (lower.nonZeros() != lower.rows()) return false;
    for (std::int64_t i = 0; i < lower.outerSize(); ++i)
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(lower, i); it; ++it)
            if (it.row() != it.col()) return false;
    return true;
}

double SparseSymMatrix::trace() const {
    return lower.diagonal().sum();
}

Eigen::SparseMatrix<double> SparseSymMatrix::full() const {
    Eigen::SparseMatrix<double> lo = lower; // to column-major
    Eigen::SparseMatrix<double> up = lo.transpose();
    Eigen::SparseMatrix<double> diag(lo.rows(), lo.cols());
    std::vector<Eigen::Triplet<double>> dts;
    dts.reserve(static_cast<std::size_t>(lo.rows()));
    Eigen::VectorXd d = lo.diagonal();
    for (std::int64_t i = 0; i < lo.rows(); ++i)
        dts.emplace_back(static_cast<int>(i), static_cast<int>(i), d(i));
    diag.setFromTriplets(dts.begin(), dts.end());
    return lo + up - diag;
}

Eigen::VectorXd SparseSymMatrix::apply(const Eigen::VectorXd& x) const {
    if (x.size() != lower.rows()) throw std::domain_error("SparseSymMatrix: size mismatch");
    Eigen::VectorXd y = lower * x;                      // lower part
    y += lower.transpose() * x;                         // upper part
    y -= lower.diagonal().cwiseProduct(x);              // diagonal counted once
    return y;
}

SparseSymMatrix assemble_stiffness(const TriMesh& mesh) {
    const auto n = mesh.vertex_count();
    if (n == 0) throw std::domain_error("assemble_stiffness: empty mesh");
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(mesh.triangles.size() * 12);
    for (std::size_t f = 0; f < mesh.triangles.size(); ++f) {
        const auto& t = mesh.triangles[f];
        for (int c = 0; c < 3; ++c) {
            std::int32_t k = t[c];                 // corner holding the angle
            std::int32_t i = t[(c + 1) % 3];       // edge opposite the corner
            std::int32_t j = t[(c + 2) % 3];
            Vec3 e1 = mesh.vertices[i] - mesh.vertices[k];
            Vec3 e2 = mesh.vertices[j] - mesh.vertices[k];
            double cr = norm(cross(e1, e2));
            if (!(cr > 0.0))
                throw MeshError("assemble_stiffness: triangle " + std::to_string(f) +
                                " has zero area");
            double cot = dot(e1, e2) / cr;
            if (std::abs(cot) > 1e8)
                throw MeshError("assemble_stiffness: triangle " + std::to_string(f) +
                                " too degenerate (|cot| = " + detail::fmt(std::abs(cot)) + ")");
            double w = 0.5 * cot;
            trips.emplace_back(i, j, -w);
            trips.emplace_back(j, i, -w);
            trips.emplace_back(i, i, w);
            trips.emplace_back(j, j, w);
        }
    }
    Eigen::SparseMatrix<double> full(n, n);
    full.setFromTriplets(trips.begin(), trips.end());
    SparseSymMatrix k;
    k.lower = full.triangularView<Eigen::Lower>();
    return k;
}

SparseSymMatrix assemble_mass(const TriMesh& mesh, bool lumped) {
    const auto n = mesh.vertex_count();
    if (n == 0) throw std::domain_error("assemble_mass: empty mesh");
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(mesh.triangles.size() * (lumped ? 3 : 9));
    for (std::size_t f = 0; f < mesh.triangles.size(); ++f) {
        const auto& t = mesh.triangles[f];
        Vec3 e1 = mesh.vertices[t[1]] - mesh.vertices[t[0]];
        Vec3 e2 = mesh.vertices[t[2]] - mesh.vertices[t[0]];
        double tri_area = 0.5 * norm(cross(e1, e2));
        if (!(tri_area > 0.0))
            throw MeshError("assemble_mass: triangle " + std::to_string(f) + " has zero area");
        if (lumped) {
            double w = tri_area / 3.0;
            for (int c = 0; c < 3; ++c) trips.emplace_back(t[c], t[c], w);
        } else {
            double w = tri_area / 12.0;
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b)
                    trips.emplace_back(t[a], t[b], a == b ? 2.0 * w : w);
        }
    }
    Eigen::SparseMatrix<double> full(n, n);
    full.setFromTriplets(trips.begin(), trips.end());
    SparseSymMatrix m;
    m.lower = full.triangularView<Eigen::Lower>();
    return m;
}

void write_matrix_market(std::ostream& os, const SparseSymMatrix& a) {
    os << "%%MatrixMarket matrix coordinate real symmetric\n";
    os << a.lower.rows() << ' ' << a.lower.cols() << ' ' << a.lower.nonZeros() << '\n';
    for (std::int64_t i = 0; i < a.lower.outerSize(); ++i)
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(a.lower, i); it;
             ++it)
            os << (it.row() + 1) << ' ' << (it.col() + 1) << ' ' << detail::fmt(it.value())
               << '\n';
}

void write_matrix_market(const std::string& path, const SparseSymMatrix& a) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_matrix_market: cannot open " + path);
    write_matrix_market(os, a);
    if (!os.good()) throw std::runtime_error("write_matrix_market: write failed for " + path);
}

void write_eig_csv(std::ostream& os, const EigResult& r) {
    os << "index,eigenvalue,residual\n";
    for (std::size_t i = 0; i < r.values.size(); ++i)
        os << i << ',' << detail::fmt(r.values[i]) << ',' << detail::fmt(r.residuals[i])
           << '\n';
}

} // namespace specgeo
