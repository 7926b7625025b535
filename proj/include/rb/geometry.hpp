#pragma once

#include <array>

#include "rb/mesh.hpp"

namespace rb {

using Mat3 = std::array<std::array<double, 3>, 3>;

// Sine and cosine of an angle in degrees, exact at multiples of 90.
double sin_degrees(double degrees);
double cos_degrees(double degrees);

// Azimuth about +z, then elevation about the right axis (+x). Right-handed.
Mat3 pose_rotation(const Pose& pose);
Vec3 apply(const Mat3& m, Vec3 v);

// Uniform scale + translation so the bounding box has longest side 1 and is
// centred in [0,1]^3. Throws when all vertices coincide.
TriangleMesh normalize_unit_cube(const TriangleMesh& mesh);

// Rotates by the pose, then re-normalizes. Connectivity is untouched.
TriangleMesh rotate_mesh(const TriangleMesh& mesh, const Pose& pose);

}  // namespace rb
