#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <numeric>
#include <sstream>
#include <vector>

#include <nlohmann/json.hpp>

#include "specgeo/errors.hpp"
#include "specgeo/meshgen.hpp"
#include "specgeo/trimesh.hpp"
#include "test_util.hpp"

using namespace specgeo;
using doctest::Approx;

constexpr double kPi = std::numbers::pi;

namespace {

TriMesh unit_tetrahedron() {
    TriMesh m;
    m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    m.triangles = {{0, 2, 1}, {0, 1, 3}, {0, 3, 2}, {1, 2, 3}}; // outward
    return m;
}

} // namespace

TEST_CASE("validate: icosahedron is a closed oriented sphere") {
    MeshReport r = validate(gen_icosphere(0, 1.0));
    CHECK(r.pass());
    CHECK(r.closed);
    CHECK(r.oriented);
    CHECK(r.vertex_count == 12);
    CHECK(r.edge_count == 30);
    CHECK(r.triangle_count == 20);
    CHECK(r.chi == 2);
    CHECK(r.boundary_loops == 0);
    CHECK(r.nonmanifold_edges == 0);
    CHECK(r.unreferenced_vertices == 0);
    CHECK(r.min_triangle_area > 0.0);
}

TEST_CASE("validate: defects are counted, not masked") {
    TriMesh base = gen_icosphere(0, 1.0);

    TriMesh flipped = base;
    std::swap(flipped.triangles[0][0], flipped.triangles[0][1]);
    MeshReport r1 = validate(flipped);
    CHECK_FALSE(r1.oriented);
    CHECK_FALSE(r1.pass());

    TriMesh open = base;
    open.triangles.pop_back();
    MeshReport r2 = validate(open);
    CHECK_FALSE(r2.closed);
    CHECK(r2.boundary_loops == 1);
    CHECK(r2.oriented);

    TriMesh doubled = base;
    doubled.triangles.push_back(doubled.triangles[0]);
    MeshReport r3 = validate(doubled);
    CHECK(r3.nonmanifold_edges > 0);
    CHECK_FALSE(r3.pass());

    TriMesh bad_index = base;
    bad_index.triangles[0][2] = 99;
    MeshReport r4 = validate(bad_index);
    CHECK(r4.invalid_triangles == 1);
    CHECK_FALSE(r4.pass());

    TriMesh degen = base;
    degen.triangles[0] = {3, 3, 5};
    MeshReport r5 = validate(degen);
    CHECK(r5.invalid_triangles + r5.degenerate_triangles >= 1);
    CHECK_FALSE(r5.pass());

    TriMesh orphan = base;
    orphan.vertices.push_back({9, 9, 9});
    MeshReport r6 = validate(orphan);
    CHECK(r6.unreferenced_vertices == 1);
}

TEST_CASE("area and volume of the unit corner tetrahedron") {
    TriMesh t = unit_tetrahedron();
    CHECK(area(t) == Approx(1.5 + std::sqrt(3.0) / 2.0).epsilon(1e-15));
    CHECK(signed_volume(t) == Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(enclosed_volume(t) == Approx(1.0 / 6.0).epsilon(1e-15));
    MeshReport r = validate(t);
    CHECK(r.pass());
    CHECK(r.chi == 2);

    // reversing every face flips the sign, not the magnitude
    TriMesh rev = t;
    for (auto& tri : rev.triangles) std::swap(tri[1], tri[2]);
    CHECK(signed_volume(rev) == Approx(-1.0 / 6.0).epsilon(1e-15));
    CHECK(enclosed_volume(rev) == Approx(1.0 / 6.0).epsilon(1e-15));
}

TEST_CASE("enclosed_volume refuses open meshes") {
    TriMesh open = unit_tetrahedron();
    open.triangles.pop_back();
    CHECK_THROWS_AS(enclosed_volume(open), MeshError);
}

TEST_CASE("pairwise_sum: exact on integers, accurate on random data") {
    std::vector<double> ints(1 << 16);
    std::iota(ints.begin(), ints.end(), 1.0);
    double n = double(ints.size());
    CHECK(pairwise_sum(ints.data(), ints.size()) == n * (n + 1.0) / 2.0);

    test_rng rng(12);
    std::vector<double> xs;
    long double ref = 0.0L;
    for (int i = 0; i < 100000; ++i) {
        double v = rng.uniform(-1.0, 1.0);
        xs.push_back(v);
        ref += v;
    }
    CHECK(pairwise_sum(xs.data(), xs.size()) == Approx(double(ref)).epsilon(1e-12));
    CHECK(pairwise_sum(xs.data(), 0) == 0.0);
    CHECK(pairwise_sum(xs.data(), 1) == xs[0]);
}

TEST_CASE("scaling and translation behave geometrically") {
    test_rng rng(900);
    TriMesh m = gen_icosphere(2, 1.0);
    double a0 = area(m), v0 = enclosed_volume(m);
    for (int trial = 0; trial < 10; ++trial) {
        double c = rng.uniform(0.2, 5.0);
        TriMesh s = scale_mesh(m, c);
        CHECK(area(s) == Approx(c * c * a0).epsilon(1e-12));
        CHECK(enclosed_volume(s) == Approx(c * c * c * v0).epsilon(1e-12));

        Vec3 t{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)};
        TriMesh moved = translate_mesh(m, t);
        CHECK(area(moved) == Approx(a0).epsilon(1e-12));
        CHECK(enclosed_volume(moved) == Approx(v0).epsilon(1e-10));
    }
    TriMesh resized = scale_to_area(m, 77.0);
    CHECK(area(resized) == Approx(77.0).epsilon(1e-12));
    CHECK_THROWS_AS(scale_mesh(m, 0.0), std::domain_error);
    CHECK_THROWS_AS(scale_to_area(m, -1.0), std::domain_error);
}

TEST_CASE("isoperimetric ratio: sphere, disjoint spheres, scale invariance") {
    TriMesh ico = gen_icosphere(4, 1.0);
    IsoReport one = isoperimetric_ratio(ico);
    CHECK(one.ratio == Approx(one.area / std::pow(one.enclosed, 2.0 / 3.0)).epsilon(1e-15));
    CHECK(one.ratio == Approx(4.8359758620494089).epsilon(5e-3));

    IsoReport two = isoperimetric_ratio(std::vector<TriMesh>{ico, translate_mesh(ico, {3, 0, 0})});
    CHECK(two.area == Approx(2.0 * one.area).epsilon(1e-14));
    CHECK(two.enclosed == Approx(2.0 * one.enclosed).epsilon(1e-12));
    CHECK(two.ratio == Approx(6.0929477853795556).epsilon(5e-3));

    test_rng rng(31);
    for (int trial = 0; trial < 8; ++trial) {
        double c = rng.uniform(0.1, 10.0);
        IsoReport scaled = isoperimetric_ratio(scale_mesh(ico, c));
        CHECK(std::fabs(scaled.ratio - one.ratio) / one.ratio <= 1e-10);
    }
    CHECK_THROWS_AS(isoperimetric_ratio(std::vector<TriMesh>{}), std::domain_error);
}

TEST_CASE("iso_report_json carries the three fields") {
    IsoReport r = isoperimetric_ratio(gen_icosphere(1, 2.0));
    nlohmann::json j = nlohmann::json::parse(iso_report_json(r));
    CHECK(j.at("area").get<double>() == r.area);
    CHECK(j.at("enclosed").get<double>() == r.enclosed);
    CHECK(j.at("ratio").get<double>() == r.ratio);
}

TEST_CASE("mesh_report_json is parseable and complete") {
    MeshReport r = validate(gen_icosphere(0, 1.0));
    nlohmann::json j = nlohmann::json::parse(r.json());
    CHECK(j.at("closed").get<bool>());
    CHECK(j.at("oriented").get<bool>());
    CHECK(j.at("chi").get<std::int64_t>() == 2);
    CHECK(j.at("vertices").get<std::int64_t>() == 12);
    CHECK(j.at("edges").get<std::int64_t>() == 30);
    CHECK(j.at("triangles").get<std::int64_t>() == 20);
    CHECK(j.at("pass").get<bool>());
    CHECK(j.at("summary").is_string());
}

TEST_CASE("OFF round trip is bitwise exact") {
    namespace fs = std::filesystem;
    test_rng rng(606);
    TriMesh m = gen_icosphere(2, 1.0);
    for (auto& v : m.vertices)
        for (double& c : v) c *= rng.uniform(0.5, 2.0); // irregular coordinates

    std::ostringstream os;
    write_off(os, m);
    std::istringstream is(os.str());
    TriMesh r = read_off(is);
    REQUIRE(r.vertices.size() == m.vertices.size());
    REQUIRE(r.triangles.size() == m.triangles.size());
    for (std::size_t i = 0; i < m.vertices.size(); ++i) CHECK(r.vertices[i] == m.vertices[i]);
    for (std::size_t i = 0; i < m.triangles.size(); ++i) CHECK(r.triangles[i] == m.triangles[i]);

    fs::path p = fs::temp_directory_path() / "specgeo_off_roundtrip.off";
    write_off(p, m);
    TriMesh r2 = read_off(p);
    CHECK(r2.vertices == m.vertices);
    CHECK(r2.triangles == m.triangles);
    fs::remove(p);
}

TEST_CASE("OFF header and counts line") {
    std::ostringstream os;
    write_off(os, unit_tetrahedron());
    std::string text = os.str();
    CHECK(text.rfind("OFF\n4 4 0\n", 0) == 0);
}

TEST_CASE("read_off rejects malformed input") {
    std::istringstream no_magic("FOO\n3 1 0\n");
    CHECK_THROWS_AS(read_off(no_magic), std::runtime_error);
    std::istringstream quad("OFF\n4 1 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n4 0 1 2 3\n");
    CHECK_THROWS_AS(read_off(quad), std::runtime_error);
    std::istringstream oob("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 7\n");
    CHECK_THROWS_AS(read_off(oob), std::runtime_error);
}
