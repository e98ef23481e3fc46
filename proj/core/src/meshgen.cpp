#include "specgeo/meshgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "specgeo/errors.hpp"

namespace specgeo {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

double smoothstep5(double t) {
    t = std::clamp(t, 0.0, 1.0);
    return t * t * t * (t * (6.0 * t - 15.0) + 10.0);
}

std::uint64_t ukey(std::int32_t a, std::int32_t b) {
    std::uint32_t lo = static_cast<std::uint32_t>(std::min(a, b));
    std::uint32_t hi = static_cast<std::uint32_t>(std::max(a, b));
    return (std::uint64_t(lo) << 32) | hi;
}

// One circle of `segs` vertices. The tube ends and the rim rings share these
// positions, so welding is by index with no coordinate fudging.
std::vector<Vec3> ring_points(double radius, double z, int segs) {
    std::vector<Vec3> pts(static_cast<std::size_t>(segs));
    for (int j = 0; j < segs; ++j) {
        double th = two_pi * double(j) / double(segs);
        pts[static_cast<std::size_t>(j)] = {radius * std::cos(th), radius * std::sin(th), z};
    }
    return pts;
}

double point_segment_dist2d(double px, double py, double ax, double ay, double bx, double by) {
    double dx = bx - ax, dy = by - ay;
    double len2 = dx * dx + dy * dy;
    double t = len2 > 0.0 ? std::clamp(((px - ax) * dx + (py - ay) * dy) / len2, 0.0, 1.0) : 0.0;
    double qx = ax + t * dx - px, qy = ay + t * dy - py;
    return std::sqrt(qx * qx + qy * qy);
}

// distance from the z axis to a triangle, measured in the xy projection
double tri_axis_dist(const Vec3& a, const Vec3& b, const Vec3& c) {
    double s1 = a[0] * b[1] - a[1] * b[0];
    double s2 = b[0] * c[1] - b[1] * c[0];
    double s3 = c[0] * a[1] - c[1] * a[0];
    if ((s1 >= 0 && s2 >= 0 && s3 >= 0) || (s1 <= 0 && s2 <= 0 && s3 <= 0)) return 0.0;
    return std::min({point_segment_dist2d(0, 0, a[0], a[1], b[0], b[1]),
                     point_segment_dist2d(0, 0, b[0], b[1], c[0], c[1]),
                     point_segment_dist2d(0, 0, c[0], c[1], a[0], a[1])});
}

} // namespace

TriMesh gen_icosphere(int level, double radius) {
    if (level < 0) throw std::domain_error("gen_icosphere: level >= 0 required");
    if (level > 8) throw std::length_error("gen_icosphere: level > 8 exceeds the size limit");
    if (!(radius > 0.0)) throw std::domain_error("gen_icosphere: radius > 0 required");

    const double p = (1.0 + std::sqrt(5.0)) / 2.0;
    TriMesh m;
    m.vertices = {
        {-1, p, 0}, {1, p, 0},  {-1, -p, 0}, {1, -p, 0}, {0, -1, p},  {0, 1, p},
        {0, -1, -p}, {0, 1, -p}, {p, 0, -1},  {p, 0, 1},  {-p, 0, -1}, {-p, 0, 1},
    };
    m.triangles = {
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9},  {5, 11, 4},
        {11, 10, 2}, {10, 7, 6}, {7, 1, 8},   {3, 9, 4},  {3, 4, 2},   {3, 2, 6},  {3, 6, 8},
        {3, 8, 9},   {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1},
    };
    auto project = [radius](Vec3& v) { v = (radius / norm(v)) * v; };
    for (Vec3& v : m.vertices) project(v);

    for (int s = 0; s < level; ++s) {
        std::unordered_map<std::uint64_t, std::int32_t> midpoints;
        midpoints.reserve(m.triangles.size() * 2);
        auto mid = [&](std::int32_t a, std::int32_t b) {
            auto [it, fresh] = midpoints.try_emplace(ukey(a, b), 0);
            if (fresh) {
                Vec3 v = 0.5 * (m.vertices[static_cast<std::size_t>(a)] +
                                m.vertices[static_cast<std::size_t>(b)]);
                project(v);
                it->second = static_cast<std::int32_t>(m.vertices.size());
                m.vertices.push_back(v);
            }
            return it->second;
        };
        std::vector<std::array<std::int32_t, 3>> next;
        next.reserve(m.triangles.size() * 4);
        for (const auto& t : m.triangles) {
            std::int32_t ab = mid(t[0], t[1]), bc = mid(t[1], t[2]), ca = mid(t[2], t[0]);
            next.push_back({t[0], ab, ca});
            next.push_back({t[1], bc, ab});
            next.push_back({t[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        m.triangles = std::move(next);
    }
    return m;
}

TriMesh flatten_cap(const TriMesh& mesh, const Vec3& pole, double disc_radius) {
    if (!(disc_radius > 0.0)) throw std::domain_error("flatten_cap: disc_radius > 0 required");
    double pn = norm(pole);
    if (!(pn > 0.0)) throw std::domain_error("flatten_cap: pole direction must be nonzero");
    if (mesh.vertices.empty()) throw std::domain_error("flatten_cap: empty mesh");
    Vec3 u = (1.0 / pn) * pole;

    Vec3 center = {0, 0, 0};
    for (const Vec3& v : mesh.vertices) center = center + v;
    center = (1.0 / double(mesh.vertex_count())) * center;
    double radius = 0.0;
    for (const Vec3& v : mesh.vertices) radius += norm(v - center);
    radius /= double(mesh.vertex_count());
    if (disc_radius > 0.3 * radius * (1.0 + 1e-12))
        throw std::domain_error("flatten_cap: disc too large (disc_radius must be <= 0.3 * mesh radius)");

    TriMesh out = mesh;
    for (Vec3& v : out.vertices) {
        Vec3 w = v - center;
        double a = dot(w, u);
        if (a <= 0.0) continue; // only the cap around +pole moves
        Vec3 rad = w - a * u;
        double rho = norm(rad);
        if (rho >= 2.0 * disc_radius) continue;
        // height of the tangent plane is `radius`; inside the disc the vertex
        // lands on it exactly, then blends back over [disc_radius, 2 disc_radius]
        double sag = radius - std::sqrt(std::max(radius * radius - rho * rho, 0.0));
        double wgt =
            rho <= disc_radius ? 0.0 : smoothstep5((rho - disc_radius) / disc_radius);
        v = center + rad + (radius - wgt * sag) * u;
    }
    return out;
}

TubeProfile TubeProfile::smoothstep(double delta, double h) {
    if (!(delta > 0.0) || !(h > 0.0))
        throw std::domain_error("TubeProfile: delta > 0 and h > 0 required");
    TubeProfile p;
    p.delta = delta;
    p.h = h;
    return p;
}

double TubeProfile::radius_at(double x) const {
    if (!(delta > 0.0) || !(h > 0.0)) throw std::domain_error("TubeProfile: degenerate profile");
    double ax = std::abs(x);
    if (ax > h * (1.0 + 1e-12)) throw std::domain_error("TubeProfile: |x| exceeds h");
    if (samples.empty()) {
        double half = 0.5 * delta;
        if (ax <= 0.5 * h) return half;
        return half * (1.0 + smoothstep5((ax - 0.5 * h) / (0.5 * h)));
    }
    if (ax <= samples.front()[0]) return samples.front()[1];
    for (std::size_t i = 1; i < samples.size(); ++i) {
        if (ax <= samples[i][0]) {
            double x0 = samples[i - 1][0], x1 = samples[i][0];
            double r0 = samples[i - 1][1], r1 = samples[i][1];
            double t = x1 > x0 ? (ax - x0) / (x1 - x0) : 0.0;
            return r0 + t * (r1 - r0);
        }
    }
    return samples.back()[1];
}

TubeProfile TubeProfile::from_samples(double delta, double h,
                                      std::vector<std::array<double, 2>> samples) {
    TubeProfile p = smoothstep(delta, h);
    if (samples.size() < 2) throw std::domain_error("TubeProfile: need at least 2 samples");
    // stored over [0, h]; negative x queries use evenness via |x|
    std::sort(samples.begin(), samples.end(),
              [](const auto& a, const auto& b) { return a[0] < b[0]; });
    for (auto& s : samples) s[0] = std::abs(s[0]);
    std::sort(samples.begin(), samples.end(),
              [](const auto& a, const auto& b) { return a[0] < b[0]; });
    if (std::abs(samples.back()[0] - h) > 1e-12 * h)
        throw std::domain_error("TubeProfile: samples must reach |x| = h");
    double prev_r = samples.front()[1];
    for (const auto& s : samples) {
        if (!(s[1] > 0.0)) throw std::domain_error("TubeProfile: radius must stay positive");
        if (s[1] > delta * (1.0 + 1e-12))
            throw std::domain_error("TubeProfile: radius exceeds delta");
        if (s[0] <= 0.5 * h * (1.0 + 1e-12) && std::abs(s[1] - 0.5 * delta) > 1e-12 * delta)
            throw std::domain_error("TubeProfile: radius must equal delta/2 on [-h/2, h/2]");
        if (s[0] > 0.5 * h && s[1] < prev_r * (1.0 - 1e-12))
            throw std::domain_error("TubeProfile: radius must be nondecreasing on [h/2, h]");
        prev_r = std::max(prev_r, s[1]);
    }
    p.samples = std::move(samples);
    return p;
}

TriMesh gen_revolution_tube(const TubeProfile& profile, int rings, int segs) {
    if (!(profile.delta > 0.0) || !(profile.h > 0.0))
        throw std::domain_error("gen_revolution_tube: degenerate profile");
    if (rings < 4) throw std::domain_error("gen_revolution_tube: rings >= 4 required");
    if (segs < 8) throw std::domain_error("gen_revolution_tube: segs >= 8 required");

    TriMesh m;
    m.vertices.reserve(static_cast<std::size_t>(rings + 1) * segs);
    for (int i = 0; i <= rings; ++i) {
        // integer numerator keeps x_i and x_{rings-i} exact mirror images
        double x = profile.h * double(2 * i - rings) / double(rings);
        auto ring = ring_points(profile.radius_at(x), x, segs);
        m.vertices.insert(m.vertices.end(), ring.begin(), ring.end());
    }
    auto at = [segs](int i, int j) { return static_cast<std::int32_t>(i * segs + (j % segs)); };
    for (int i = 0; i < rings; ++i)
        for (int j = 0; j < segs; ++j) {
            // outward normals; z grows with i
            m.triangles.push_back({at(i, j), at(i, j + 1), at(i + 1, j + 1)});
            m.triangles.push_back({at(i, j), at(i + 1, j + 1), at(i + 1, j)});
        }
    m.tags.assign(m.triangles.size(), tag_tube);
    return m;
}

int dumbbell_auto_rings(double delta, double h) {
    // axial edge length <= delta/4
    return std::max(4, static_cast<int>(std::ceil(8.0 * h / delta)));
}

int dumbbell_auto_segs() {
    // neck circumference pi*delta cut into edges <= delta/4 needs >= 4*pi
    return 16;
}

namespace {

struct HoledSphere {
    TriMesh mesh;                  // pole at (0,0,-1), rim ring in the z = -1 plane
    std::vector<std::int32_t> rim; // segs rim indices, angle order 2*pi*j/segs
};

// Flattened unit sphere with a hole of radius delta cut around the pole
// (0,0,-1) and the ragged hole boundary zipped onto a clean ring of `segs`
// vertices placed by ring_points(delta, -1).
HoledSphere build_holed_sphere(double delta, int level, int segs) {
    TriMesh sph = flatten_cap(gen_icosphere(level, 1.0), {0, 0, -1}, delta);

    std::vector<std::array<std::int32_t, 3>> kept;
    std::vector<std::int32_t> kept_tags;
    kept.reserve(sph.triangles.size());
    for (const auto& t : sph.triangles) {
        const Vec3 &a = sph.vertices[t[0]], &b = sph.vertices[t[1]], &c = sph.vertices[t[2]];
        double zc = (a[2] + b[2] + c[2]) / 3.0;
        if (zc < 0.0 && tri_axis_dist(a, b, c) <= delta) continue; // the hole
        kept.push_back(t);
        bool blend = true;
        for (const Vec3* v : {&a, &b, &c}) {
            double rho = std::hypot((*v)[0], (*v)[1]);
            if ((*v)[2] >= 0.0 || rho > 2.0 * delta) blend = false;
        }
        kept_tags.push_back(blend ? tag_cap : tag_sphere1);
    }
    if (kept.size() == sph.triangles.size())
        throw MeshError("glue_dumbbell: hole cut removed no triangles (delta too small for this level)");

    // boundary = edges now used once
    std::unordered_map<std::uint64_t, int> use;
    for (const auto& t : kept)
        for (int c = 0; c < 3; ++c) ++use[ukey(t[c], t[(c + 1) % 3])];
    std::unordered_map<std::int32_t, int> bdeg;
    std::int64_t bedges = 0;
    for (const auto& [key, cnt] : use) {
        if (cnt != 1) continue;
        ++bedges;
        ++bdeg[static_cast<std::int32_t>(key >> 32)];
        ++bdeg[static_cast<std::int32_t>(key & 0xffffffffu)];
    }
    if (bedges == 0) throw MeshError("glue_dumbbell: hole cut left no boundary");
    for (const auto& [v, d] : bdeg)
        if (d != 2)
            throw MeshError("glue_dumbbell: ragged hole boundary is not a simple loop");
    if (static_cast<std::int64_t>(bdeg.size()) != bedges)
        throw MeshError("glue_dumbbell: hole boundary is not a single loop");

    // drop orphaned vertices, order-preserving
    std::vector<std::int32_t> remap(sph.vertices.size(), -1);
    TriMesh out;
    out.vertices.reserve(sph.vertices.size());
    for (const auto& t : kept)
        for (int c = 0; c < 3; ++c)
            if (remap[t[c]] < 0) {
                remap[t[c]] = static_cast<std::int32_t>(out.vertices.size());
                out.vertices.push_back(sph.vertices[t[c]]);
            }
    for (const auto& t : kept) out.triangles.push_back({remap[t[0]], remap[t[1]], remap[t[2]]});
    out.tags = std::move(kept_tags);

    // ragged loop sorted by angle; the cut guarantees rho > delta for survivors
    std::vector<std::int32_t> outer;
    outer.reserve(bdeg.size());
    for (const auto& [v, d] : bdeg) outer.push_back(remap[v]);
    auto angle_of = [&out](std::int32_t v) {
        double a = std::atan2(out.vertices[v][1], out.vertices[v][0]);
        return a < 0.0 ? a + two_pi : a;
    };
    std::sort(outer.begin(), outer.end(), [&](std::int32_t a, std::int32_t b) {
        double aa = angle_of(a), ab = angle_of(b);
        return aa != ab ? aa < ab : a < b;
    });

    HoledSphere hs;
    hs.rim.resize(static_cast<std::size_t>(segs));
    auto ring = ring_points(delta, -1.0, segs);
    for (int j = 0; j < segs; ++j) {
        hs.rim[static_cast<std::size_t>(j)] = static_cast<std::int32_t>(out.vertices.size());
        out.vertices.push_back(ring[static_cast<std::size_t>(j)]);
    }

    // Zip the annulus between the ragged loop (outer) and the rim ring
    // (inner). The cap faces -z, so its triangles run clockwise seen from +z:
    // outer edges are traversed against the angular order, inner edges with it.
    const int no = static_cast<int>(outer.size());
    const int ni = segs;
    const double step = two_pi / double(ni);
    // inner start index nearest the outer start angle, so the two unwrapped
    // angle tables below begin within half a step of each other
    const long long j0 = std::llround(angle_of(outer[0]) / step);
    auto O = [&](int t) { return outer[static_cast<std::size_t>(t % no)]; };
    auto R = [&](int t) {
        long long j = (j0 + t) % ni;
        return hs.rim[static_cast<std::size_t>(j < 0 ? j + ni : j)];
    };
    std::vector<double> ou(static_cast<std::size_t>(no) + 1);
    std::vector<double> ru(static_cast<std::size_t>(ni) + 1);
    for (int t = 0; t < no; ++t) ou[static_cast<std::size_t>(t)] = angle_of(O(t));
    ou[static_cast<std::size_t>(no)] = ou[0] + two_pi;
    for (int t = 0; t <= ni; ++t) ru[static_cast<std::size_t>(t)] = double(j0 + t) * step;

    int a = 0, b = 0;
    while (a < no || b < ni) {
        bool adv_outer = b >= ni || (a < no && ou[static_cast<std::size_t>(a + 1)] <=
                                                   ru[static_cast<std::size_t>(b + 1)]);
        if (adv_outer) {
            out.triangles.push_back({O(a + 1), O(a), R(b)});
            ++a;
        } else {
            out.triangles.push_back({R(b), R(b + 1), O(a)});
            ++b;
        }
        out.tags.push_back(tag_cap);
    }

    hs.mesh = std::move(out);
    return hs;
}

} // namespace

TriMesh glue_dumbbell(double delta, double h, int level, int rings, int segs) {
    if (!(delta > 0.0) || delta > 0.3 * (1.0 + 1e-12))
        throw std::domain_error("glue_dumbbell: delta out of range (0, 0.3]");
    if (!(h > 0.0)) throw std::domain_error("glue_dumbbell: h > 0 required");
    if (rings <= 0) rings = dumbbell_auto_rings(delta, h);
    if (segs <= 0) segs = dumbbell_auto_segs();
    if (rings < 4) throw std::domain_error("glue_dumbbell: rings >= 4 required");
    if (segs < 8) throw std::domain_error("glue_dumbbell: segs >= 8 required");

    HoledSphere hs = build_holed_sphere(delta, level, segs);
    const std::int64_t nsv = hs.mesh.vertex_count();

    TriMesh out;
    out.vertices.reserve(static_cast<std::size_t>(2 * nsv + (rings - 1) * segs));
    out.triangles.reserve(hs.mesh.triangles.size() * 2 +
                          static_cast<std::size_t>(2 * rings * segs));

    // upper sphere: pole plane z = -1 lands exactly on z = h
    for (Vec3 v : hs.mesh.vertices) {
        v[2] = (v[2] + 1.0) + h;
        out.vertices.push_back(v);
    }
    for (std::size_t i = 0; i < hs.mesh.triangles.size(); ++i) {
        out.triangles.push_back(hs.mesh.triangles[i]);
        out.tags.push_back(hs.mesh.tags[i]);
    }
    // lower sphere: mirror in z (flip winding), pole plane z = +1 lands on -h
    for (Vec3 v : hs.mesh.vertices) {
        v[2] = (-v[2] - 1.0) - h;
        out.vertices.push_back(v);
    }
    for (std::size_t i = 0; i < hs.mesh.triangles.size(); ++i) {
        const auto& t = hs.mesh.triangles[i];
        out.triangles.push_back({static_cast<std::int32_t>(t[0] + nsv),
                                 static_cast<std::int32_t>(t[2] + nsv),
                                 static_cast<std::int32_t>(t[1] + nsv)});
        out.tags.push_back(hs.mesh.tags[i] == tag_sphere1 ? tag_sphere2 : hs.mesh.tags[i]);
    }

    // tube interior rings; ring 0 and ring `rings` are the welded rims
    TubeProfile profile = TubeProfile::smoothstep(delta, h);
    const std::int64_t tube_base = out.vertex_count();
    for (int i = 1; i < rings; ++i) {
        double x = h * double(2 * i - rings) / double(rings);
        auto ring = ring_points(profile.radius_at(x), x, segs);
        out.vertices.insert(out.vertices.end(), ring.begin(), ring.end());
    }
    auto ridx = [&](int i, int j) -> std::int32_t {
        j = j % segs;
        if (i == 0) return static_cast<std::int32_t>(nsv + hs.rim[static_cast<std::size_t>(j)]);
        if (i == rings) return hs.rim[static_cast<std::size_t>(j)];
        return static_cast<std::int32_t>(tube_base + std::int64_t(i - 1) * segs + j);
    };
    for (int i = 0; i < rings; ++i)
        for (int j = 0; j < segs; ++j) {
            out.triangles.push_back({ridx(i, j), ridx(i, j + 1), ridx(i + 1, j + 1)});
            out.triangles.push_back({ridx(i, j), ridx(i + 1, j + 1), ridx(i + 1, j)});
            out.tags.push_back(tag_tube);
            out.tags.push_back(tag_tube);
        }

    MeshReport rep = validate(out);
    if (!rep.pass() || rep.chi != 2)
        throw MeshError("glue_dumbbell: assembled mesh failed validation: " + rep.summary());
    return out;
}

} // namespace specgeo
