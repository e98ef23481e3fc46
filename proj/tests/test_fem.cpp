#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "specgeo/errors.hpp"
#include "specgeo/fem.hpp"
#include "specgeo/meshgen.hpp"
#include "specgeo/trimesh.hpp"
#include "test_util.hpp"

using namespace specgeo;
using doctest::Approx;

namespace {

TriMesh unit_square_two_triangles() {
    TriMesh m;
    m.vertices = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
    m.triangles = {{0, 1, 2}, {0, 2, 3}};
    return m;
}

SparseSymMatrix diagonal_matrix(const std::vector<double>& d) {
    SparseSymMatrix a;
    a.lower.resize(Eigen::Index(d.size()), Eigen::Index(d.size()));
    for (Eigen::Index i = 0; i < Eigen::Index(d.size()); ++i)
        a.lower.insert(i, i) = d[std::size_t(i)];
    a.lower.makeCompressed();
    return a;
}

} // namespace

TEST_CASE("stiffness of the split unit square is exact") {
    auto K = assemble_stiffness(unit_square_two_triangles());
    Eigen::MatrixXd F = Eigen::MatrixXd(K.full());
    double expect[4][4] = {{1, -0.5, 0, -0.5},
                           {-0.5, 1, -0.5, 0},
                           {0, -0.5, 1, -0.5},
                           {-0.5, 0, -0.5, 1}};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(F(i, j) == expect[i][j]);
    CHECK(K.dim() == 4);
    CHECK_FALSE(K.is_diagonal());
}

TEST_CASE("stiffness rows sum to zero (constants are in the kernel)") {
    TriMesh m = gen_icosphere(2, 1.0);
    auto K = assemble_stiffness(m);
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(K.dim());
    Eigen::VectorXd r = K.apply(ones);
    CHECK(r.lpNorm<Eigen::Infinity>() < 1e-12);
}

TEST_CASE("mass matrices: lumped diagonal, consistent row sums, equal totals") {
    TriMesh sq = unit_square_two_triangles();
    auto Ml = assemble_mass(sq, true);
    CHECK(Ml.is_diagonal());
    Eigen::MatrixXd D = Eigen::MatrixXd(Ml.full());
    CHECK(D(0, 0) == 1.0 / 3.0);
    CHECK(D(1, 1) == 0.5 / 3.0);
    CHECK(D(2, 2) == 1.0 / 3.0);
    CHECK(D(3, 3) == 0.5 / 3.0);

    auto Mc = assemble_mass(sq, false);
    CHECK_FALSE(Mc.is_diagonal());
    CHECK(Mc.trace() == Approx(0.5 * area(sq)).epsilon(1e-14)); // 2 * (area/12) * 3 per triangle

    // both integrate constants to the total area
    Eigen::VectorXd ones = Eigen::VectorXd::Ones(4);
    CHECK(ones.dot(Ml.apply(ones)) == Approx(area(sq)).epsilon(1e-14));
    CHECK(ones.dot(Mc.apply(ones)) == Approx(area(sq)).epsilon(1e-14));

    TriMesh ico = gen_icosphere(2, 1.3);
    auto Mi = assemble_mass(ico, false);
    Eigen::VectorXd one_i = Eigen::VectorXd::Ones(Mi.dim());
    CHECK(one_i.dot(Mi.apply(one_i)) == Approx(area(ico)).epsilon(1e-12));
}

TEST_CASE("apply agrees with the symmetric expansion") {
    test_rng rng(515);
    TriMesh m = gen_icosphere(2, 1.0);
    for (bool lumped : {true, false}) {
        auto A = lumped ? assemble_mass(m, true) : assemble_stiffness(m);
        Eigen::SparseMatrix<double> F = A.full();
        Eigen::VectorXd x(A.dim());
        for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = rng.uniform(-1, 1);
        Eigen::VectorXd lhs = A.apply(x);
        Eigen::VectorXd rhs = F * x;
        CHECK((lhs - rhs).lpNorm<Eigen::Infinity>() < 1e-13 * (1.0 + rhs.lpNorm<Eigen::Infinity>()));
        CHECK(Eigen::MatrixXd(F).isApprox(Eigen::MatrixXd(F).transpose(), 0.0));
    }
}

TEST_CASE("degenerate triangles are rejected at assembly") {
    TriMesh zero_area;
    zero_area.vertices = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {0, 1, 0}};
    zero_area.triangles = {{0, 1, 2}, {0, 1, 3}};
    CHECK_THROWS_AS(assemble_stiffness(zero_area), MeshError);

    TriMesh needle;
    needle.vertices = {{0, 0, 0}, {1, 0, 0}, {0.5, 1e-12, 0}};
    needle.triangles = {{0, 1, 2}};
    CHECK_THROWS_AS(assemble_stiffness(needle), MeshError);
}

TEST_CASE("matrix market export: symmetric coordinate format, lower triangle") {
    auto K = assemble_stiffness(unit_square_two_triangles());
    std::ostringstream os;
    write_matrix_market(os, K);
    std::istringstream is(os.str());
    std::string l1;
    std::getline(is, l1);
    CHECK(l1 == "%%MatrixMarket matrix coordinate real symmetric");
    int rows, cols;
    std::int64_t nnz;
    is >> rows >> cols >> nnz;
    CHECK(rows == 4);
    CHECK(cols == 4);
    CHECK(nnz == K.stored_nonzeros());
    int r, c;
    double v;
    std::int64_t seen = 0;
    while (is >> r >> c >> v) {
        CHECK(r >= c); // lower triangle, 1-based
        CHECK(r >= 1);
        CHECK(c >= 1);
        ++seen;
    }
    CHECK(seen == nnz);
}

TEST_CASE("solve_lowest: diagonal oracle and preconditions") {
    std::vector<double> kd = {4, 1, 9, 2, 16, 25, 36, 49};
    std::vector<double> md(8, 1.0);
    auto K = diagonal_matrix(kd);
    auto M = diagonal_matrix(md);
    EigResult r = solve_lowest(K, M, 2, 1e-10, 7);
    REQUIRE(r.converged);
    REQUIRE(r.values.size() == 2);
    CHECK(r.values[0] == Approx(1.0).epsilon(1e-8));
    CHECK(r.values[1] == Approx(2.0).epsilon(1e-8));
    for (double res : r.residuals) CHECK(res <= 1e-10 * 2.0 * (1 + 1e-9));

    // generalized pencil: K = diag(k), M = diag(m) -> eigenvalues k/m
    std::vector<double> mv = {2, 1, 3, 4, 1, 2, 3, 4};
    auto M2 = diagonal_matrix(mv);
    EigResult r2 = solve_lowest(K, M2, 2, 1e-10, 7);
    REQUIRE(r2.converged);
    CHECK(r2.values[0] == Approx(0.5).epsilon(1e-8));  // 2/4 or 1/1? sorted: 4/2=2,1/1=1,9/3=3,2/4=.5
    CHECK(r2.values[1] == Approx(1.0).epsilon(1e-8));

    CHECK_THROWS_AS(solve_lowest(K, M, 0), std::domain_error);
    CHECK_THROWS_AS(solve_lowest(K, M, 3), std::domain_error); // 4m > n
    CHECK_THROWS_AS(solve_lowest(K, M, 2, 0.0), std::domain_error);
    auto M_small = diagonal_matrix({1, 1, 1});
    CHECK_THROWS_AS(solve_lowest(K, M_small, 2), std::domain_error);
}

TEST_CASE("solve_lowest returns a flagged partial result when the tolerance is unreachable") {
    TriMesh m = gen_icosphere(1, 1.0);
    auto K = assemble_stiffness(m);
    auto M = assemble_mass(m, true);
    EigResult r = solve_lowest(K, M, 4, 1e-30, 3);
    CHECK_FALSE(r.converged);
    CHECK(r.values.size() == 4); // best effort values still reported
}

TEST_CASE("sphere eigenvalues from the consistent pencil bound the continuum from above") {
    // Galerkin inclusion: discrete eigenvalues of a conforming basis overestimate
    double prev_err = 1e9;
    for (int level = 2; level <= 3; ++level) {
        TriMesh m = gen_icosphere(level, 1.0);
        auto K = assemble_stiffness(m);
        auto M = assemble_mass(m, false);
        EigResult r = solve_lowest(K, M, 9, 1e-10, 42);
        REQUIRE(r.converged);
        double continuum[] = {0, 2, 2, 2, 6, 6, 6, 6, 6};
        for (int j = 1; j < 9; ++j) CHECK(r.values[j] > continuum[j]);
        double err = r.values[1] - 2.0;
        CHECK(err > 0.0);
        CHECK(err < prev_err); // refinement tightens the bound
        prev_err = err;
    }
}

TEST_CASE("mesh_spectrum: sphere values, metadata, determinism") {
    TriMesh m = gen_icosphere(3, 1.0);
    Spectrum s = mesh_spectrum(m, 10, 1e-9, 99);
    CHECK(s.dim == 2);
    CHECK(s.volume == area(m));
    CHECK(s.label == "mesh[642v]");
    CHECK(s.values[0] == 0.0); // constant mode snaps to exact zero
    for (int j = 1; j <= 3; ++j) CHECK(s.values[j] == Approx(2.0).epsilon(5e-3));
    for (int j = 4; j <= 8; ++j) CHECK(s.values[j] == Approx(6.0).epsilon(5e-3));

    Spectrum t = mesh_spectrum(m, 10, 1e-9, 99);
    CHECK(t.values == s.values); // bitwise repeatable

    CHECK_THROWS_AS(mesh_spectrum(m, 10, 1e-30, 99), SolverError);

    TriMesh open = m;
    open.triangles.pop_back();
    CHECK_THROWS_AS(mesh_spectrum(open, 4), MeshError);
}

TEST_CASE("eig CSV schema") {
    EigResult r;
    r.values = {0.0, 2.5};
    r.residuals = {1e-12, 3e-11};
    std::ostringstream os;
    write_eig_csv(os, r);
    std::string text = os.str();
    CHECK(text.rfind("index,eigenvalue,residual\n", 0) == 0);
    CHECK(text.find("0,0,") != std::string::npos);
    CHECK(text.find("1,2.5,") != std::string::npos);
}
