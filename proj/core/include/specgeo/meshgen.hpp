#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "specgeo/trimesh.hpp"

namespace specgeo {

// Icosahedron subdivided `level` times, vertices projected to `radius`.
// 20 * 4^level triangles; level > 8 throws a size-limit error.
TriMesh gen_icosphere(int level, double radius);

// Moves vertices inside the polar cap onto the tangent plane at the pole so
// the result contains a flat disc of radius disc_radius, blending back to the
// original surface between disc_radius and 2*disc_radius.
TriMesh flatten_cap(const TriMesh& mesh, const Vec3& pole, double disc_radius);

// Radius profile of the revolution tube: even in x, equal to delta/2 on
// [-h/2, h/2], rising to delta at |x| = h. Empty samples mean the built-in
// quintic smoothstep; explicit samples are interpolated linearly.
struct TubeProfile {
    double delta = 0.0;
    double h = 0.0;
    std::vector<std::array<double, 2>> samples; // (x, radius), sorted by x

    static TubeProfile smoothstep(double delta, double h);
    static TubeProfile from_samples(double delta, double h,
                                    std::vector<std::array<double, 2>> samples);
    double radius_at(double x) const;
};

// Open tube of revolution around the z axis: x^2 + y^2 = r(z)^2, z in [-h, h].
// `rings` axial bands (>= 4), `segs` vertices per circle (>= 8); two boundary
// circles remain at z = +-h.
TriMesh gen_revolution_tube(const TubeProfile& profile, int rings, int segs);

// The glued dumbbell: two unit spheres, cap-flattened at the facing poles and
// centered at (0,0,+-(1+h)), joined through holes of radius delta by the
// revolution tube. rings/segs <= 0 pick the sizing rule (tube edge length
// about delta/4). Result is a closed oriented topological sphere.
TriMesh glue_dumbbell(double delta, double h, int level, int rings = 0, int segs = 0);

// Sizing rule used when glue_dumbbell picks parameters automatically.
int dumbbell_auto_rings(double delta, double h);
int dumbbell_auto_segs();

} // namespace specgeo
