#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace specgeo {

using Vec3 = std::array<double, 3>;

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

// Per-triangle region tags (optional; tags empty or one per triangle).
inline constexpr std::int32_t tag_none = -1;
inline constexpr std::int32_t tag_sphere1 = 0;
inline constexpr std::int32_t tag_sphere2 = 1;
inline constexpr std::int32_t tag_tube = 2;
inline constexpr std::int32_t tag_cap = 3;

// Triangle mesh in R^3, counter-clockwise as seen from outside when closed.
struct TriMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<std::int32_t, 3>> triangles;
    std::vector<std::int32_t> tags;

    std::int64_t vertex_count() const { return static_cast<std::int64_t>(vertices.size()); }
    std::int64_t triangle_count() const { return static_cast<std::int64_t>(triangles.size()); }
};

struct MeshReport {
    bool closed = false;
    bool oriented = false;
    std::int64_t vertex_count = 0;
    std::int64_t edge_count = 0;
    std::int64_t triangle_count = 0;
    std::int64_t chi = 0; // V - E + F over referenced vertices
    std::int64_t boundary_loops = 0;
    std::int64_t nonmanifold_edges = 0;
    std::int64_t degenerate_triangles = 0;
    std::int64_t invalid_triangles = 0; // out-of-range or repeated indices
    std::int64_t unreferenced_vertices = 0;
    double min_triangle_area = 0.0;

    bool pass() const {
        return closed && oriented && nonmanifold_edges == 0 && degenerate_triangles == 0 &&
               invalid_triangles == 0;
    }
    std::string summary() const;
    std::string json() const;
};

MeshReport validate(const TriMesh& mesh);

// Deterministic pairwise reduction; bit-stable regardless of how callers
// partition work.
double pairwise_sum(const double* x, std::size_t n);

double area(const TriMesh& mesh);
// (1/6) sum of triple products (divergence theorem); sign follows orientation.
double signed_volume(const TriMesh& mesh);
// |signed_volume|; refuses meshes that are not closed and oriented.
double enclosed_volume(const TriMesh& mesh);

struct IsoReport {
    double area = 0.0;
    double enclosed = 0.0;
    double ratio = 0.0; // area / enclosed^(2/3), the n = 2 isoperimetric ratio
};

IsoReport isoperimetric_ratio(const TriMesh& mesh);
// Disjoint union: areas and enclosed volumes both add.
IsoReport isoperimetric_ratio(const std::vector<TriMesh>& meshes);
std::string iso_report_json(const IsoReport& r);

TriMesh scale_mesh(const TriMesh& mesh, double c);
TriMesh scale_to_area(const TriMesh& mesh, double target_area);
TriMesh translate_mesh(const TriMesh& mesh, const Vec3& t);

// OFF, exact ASCII layout: "OFF", "V F 0", V vertex lines, F lines "3 i j k".
void write_off(std::ostream& os, const TriMesh& mesh);
void write_off(const std::filesystem::path& path, const TriMesh& mesh);
TriMesh read_off(std::istream& is);
TriMesh read_off(const std::filesystem::path& path);

} // namespace specgeo
