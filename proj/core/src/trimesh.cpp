#include "specgeo/trimesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "num_format.hpp"
#include "specgeo/errors.hpp"

namespace specgeo {

namespace {

std::uint64_t edge_key(std::int32_t a, std::int32_t b) {
    std::uint32_t lo = static_cast<std::uint32_t>(std::min(a, b));
    std::uint32_t hi = static_cast<std::uint32_t>(std::max(a, b));
    return (std::uint64_t(lo) << 32) | hi;
}

struct EdgeUse {
    int fwd = 0; // traversed (lo, hi)
    int bwd = 0; // traversed (hi, lo)
};

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
    return 0.5 * norm(cross(b - a, c - a));
}

} // namespace

double pairwise_sum(const double* x, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += x[i];
        return s;
    }
    std::size_t half = n / 2;
    return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

std::string MeshReport::summary() const {
    std::ostringstream os;
    if (!closed) {
        os << "open: " << boundary_loops << " boundary loops";
    } else {
        os << "closed, " << (oriented ? "oriented" : "orientation inconsistent") << ", chi=" << chi;
    }
    if (nonmanifold_edges) os << ", " << nonmanifold_edges << " nonmanifold edges";
    if (degenerate_triangles) os << ", " << degenerate_triangles << " degenerate triangles";
    if (invalid_triangles) os << ", " << invalid_triangles << " invalid triangles";
    return os.str();
}

std::string MeshReport::json() const {
    nlohmann::json j;
    j["closed"] = closed;
    j["oriented"] = oriented;
    j["vertices"] = vertex_count;
    j["edges"] = edge_count;
    j["triangles"] = triangle_count;
    j["chi"] = chi;
    j["boundary_loops"] = boundary_loops;
    j["nonmanifold_edges"] = nonmanifold_edges;
    j["degenerate_triangles"] = degenerate_triangles;
    j["invalid_triangles"] = invalid_triangles;
    j["unreferenced_vertices"] = unreferenced_vertices;
    j["min_triangle_area"] = min_triangle_area;
    j["pass"] = pass();
    j["summary"] = summary();
    return j.dump();
}

MeshReport validate(const TriMesh& mesh) {
    MeshReport r;
    const std::int64_t nv = mesh.vertex_count();
    r.vertex_count = nv;
    r.triangle_count = mesh.triangle_count();

    // bounding-box diagonal sets the degenerate-area scale
    Vec3 lo = {std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
               std::numeric_limits<double>::max()};
    Vec3 hi = {-lo[0], -lo[1], -lo[2]};
    for (const Vec3& v : mesh.vertices)
        for (int c = 0; c < 3; ++c) {
            lo[c] = std::min(lo[c], v[c]);
            hi[c] = std::max(hi[c], v[c]);
        }
    double diag2 = mesh.vertices.empty() ? 0.0 : dot(hi - lo, hi - lo);

    std::unordered_map<std::uint64_t, EdgeUse> edges;
    edges.reserve(mesh.triangles.size() * 2);
    std::vector<char> referenced(static_cast<std::size_t>(nv), 0);
    r.min_triangle_area = std::numeric_limits<double>::infinity();

    for (const auto& t : mesh.triangles) {
        bool bad = false;
        for (int c = 0; c < 3; ++c)
            if (t[c] < 0 || t[c] >= nv) bad = true;
        if (!bad && (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])) bad = true;
        if (bad) {
            ++r.invalid_triangles;
            continue;
        }
        for (int c = 0; c < 3; ++c) referenced[static_cast<std::size_t>(t[c])] = 1;
        double a = triangle_area(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]);
        r.min_triangle_area = std::min(r.min_triangle_area, a);
        if (a < 1e-14 * diag2) ++r.degenerate_triangles;
        for (int c = 0; c < 3; ++c) {
            std::int32_t u = t[c], v = t[(c + 1) % 3];
            EdgeUse& e = edges[edge_key(u, v)];
            (u < v ? e.fwd : e.bwd)++;
        }
    }
    if (!std::isfinite(r.min_triangle_area)) r.min_triangle_area = 0.0;

    r.edge_count = static_cast<std::int64_t>(edges.size());
    bool closed = !mesh.triangles.empty();
    bool oriented = true;
    std::vector<std::uint64_t> boundary;
    for (const auto& [key, e] : edges) {
        int total = e.fwd + e.bwd;
        if (total == 1) {
            closed = false;
            boundary.push_back(key);
        } else if (total > 2) {
            ++r.nonmanifold_edges;
            closed = false;
        }
        // a consistently oriented manifold traverses each interior edge once
        // per direction
        if (e.fwd > 1 || e.bwd > 1) oriented = false;
    }
    r.closed = closed;
    r.oriented = oriented && r.invalid_triangles == 0;

    // count boundary loops by walking vertex adjacency over boundary edges
    if (!boundary.empty()) {
        std::unordered_map<std::int32_t, std::vector<std::int32_t>> adj;
        for (std::uint64_t key : boundary) {
            std::int32_t a = static_cast<std::int32_t>(key >> 32);
            std::int32_t b = static_cast<std::int32_t>(key & 0xffffffffu);
            adj[a].push_back(b);
            adj[b].push_back(a);
        }
        std::unordered_map<std::int32_t, char> seen;
        for (auto& [start, nbrs] : adj) {
            if (seen.count(start)) continue;
            ++r.boundary_loops;
            std::vector<std::int32_t> stack = {start};
            seen[start] = 1;
            while (!stack.empty()) {
                std::int32_t v = stack.back();
                stack.pop_back();
                for (std::int32_t w : adj[v])
                    if (!seen.count(w)) {
                        seen[w] = 1;
                        stack.push_back(w);
                    }
            }
        }
    }

    std::int64_t nref = 0;
    for (char c : referenced) nref += c;
    r.unreferenced_vertices = nv - nref;
    r.chi = nref - r.edge_count + (r.triangle_count - r.invalid_triangles);
    return r;
}

double area(const TriMesh& mesh) {
    std::vector<double> contrib(mesh.triangles.size());
    for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
        const auto& t = mesh.triangles[i];
        contrib[i] = triangle_area(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]);
    }
    return pairwise_sum(contrib.data(), contrib.size());
}

double signed_volume(const TriMesh& mesh) {
    std::vector<double> contrib(mesh.triangles.size());
    for (std::size_t i = 0; i < mesh.triangles.size(); ++i) {
        const auto& t = mesh.triangles[i];
        contrib[i] =
            dot(mesh.vertices[t[0]], cross(mesh.vertices[t[1]], mesh.vertices[t[2]])) / 6.0;
    }
    return pairwise_sum(contrib.data(), contrib.size());
}

double enclosed_volume(const TriMesh& mesh) {
    MeshReport r = validate(mesh);
    if (!r.closed || !r.oriented)
        throw MeshError("enclosed_volume: mesh must be closed and oriented (" + r.summary() + ")");
    return std::abs(signed_volume(mesh));
}

IsoReport isoperimetric_ratio(const std::vector<TriMesh>& meshes) {
    if (meshes.empty()) throw std::domain_error("isoperimetric_ratio: no meshes");
    IsoReport rep;
    for (const TriMesh& m : meshes) {
        rep.area += area(m);
        rep.enclosed += enclosed_volume(m);
    }
    rep.ratio = rep.area / std::pow(rep.enclosed, 2.0 / 3.0);
    return rep;
}

IsoReport isoperimetric_ratio(const TriMesh& mesh) {
    return isoperimetric_ratio(std::vector<TriMesh>{mesh});
}

std::string iso_report_json(const IsoReport& r) {
    nlohmann::json j;
    j["area"] = r.area;
    j["enclosed"] = r.enclosed;
    j["ratio"] = r.ratio;
    return j.dump();
}

TriMesh scale_mesh(const TriMesh& mesh, double c) {
    if (!(c > 0.0)) throw std::domain_error("scale_mesh: c > 0 required");
    TriMesh out = mesh;
    for (Vec3& v : out.vertices) v = c * v;
    return out;
}

TriMesh scale_to_area(const TriMesh& mesh, double target_area) {
    if (!(target_area > 0.0)) throw std::domain_error("scale_to_area: target area > 0 required");
    double a = area(mesh);
    if (!(a > 0.0)) throw std::domain_error("scale_to_area: mesh has zero area");
    return scale_mesh(mesh, std::sqrt(target_area / a));
}

TriMesh translate_mesh(const TriMesh& mesh, const Vec3& t) {
    TriMesh out = mesh;
    for (Vec3& v : out.vertices) v = v + t;
    return out;
}

void write_off(std::ostream& os, const TriMesh& mesh) {
    os << "OFF\n" << mesh.vertex_count() << ' ' << mesh.triangle_count() << " 0\n";
    for (const Vec3& v : mesh.vertices)
        os << detail::fmt(v[0]) << ' ' << detail::fmt(v[1]) << ' ' << detail::fmt(v[2]) << '\n';
    for (const auto& t : mesh.triangles) os << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

void write_off(const std::filesystem::path& path, const TriMesh& mesh) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_off: cannot open " + path.string());
    write_off(os, mesh);
}

TriMesh read_off(std::istream& is) {
    std::string magic;
    is >> magic;
    if (magic != "OFF") throw std::runtime_error("read_off: missing OFF header");
    std::int64_t nv = 0, nf = 0, ne = 0;
    if (!(is >> nv >> nf >> ne) || nv < 0 || nf < 0)
        throw std::runtime_error("read_off: bad counts line");
    TriMesh mesh;
    mesh.vertices.resize(static_cast<std::size_t>(nv));
    for (auto& v : mesh.vertices)
        if (!(is >> v[0] >> v[1] >> v[2])) throw std::runtime_error("read_off: bad vertex line");
    mesh.triangles.resize(static_cast<std::size_t>(nf));
    for (auto& t : mesh.triangles) {
        int arity = 0;
        if (!(is >> arity) || arity != 3)
            throw std::runtime_error("read_off: only triangle faces supported");
        if (!(is >> t[0] >> t[1] >> t[2])) throw std::runtime_error("read_off: bad face line");
        for (int c = 0; c < 3; ++c)
            if (t[c] < 0 || t[c] >= nv) throw std::runtime_error("read_off: face index out of range");
    }
    return mesh;
}

TriMesh read_off(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("read_off: cannot open " + path.string());
    return read_off(is);
}

} // namespace specgeo
