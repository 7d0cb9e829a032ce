#pragma once

#include <cstdint>

#include "meshgap/mesh.hpp"

namespace meshgap {

/// Axis-aligned box [lo, hi] as 8 vertices / 12 outward-wound triangles.
TriangleMesh make_box(const Vec3& lo, const Vec3& hi);

/// Unit cube [0,1]^3.
inline TriangleMesh make_unit_cube() { return make_box({0, 0, 0}, {1, 1, 1}); }

/// Icosahedron refined by edge midpoint subdivision and projected onto the
/// sphere. Vertex count is 10 * 4^subdivisions + 2 (2562 for 4 levels).
TriangleMesh make_icosphere(double radius, int subdivisions, const Vec3& center = {});

/// Applies x -> rotation * x + translation to every vertex.
TriangleMesh transformed(const TriangleMesh& mesh, const Mat3& rotation, const Vec3& translation);

/// Adds isotropic Gaussian noise (sigma mm) to every vertex, seeded.
TriangleMesh perturbed(const TriangleMesh& mesh, double sigma, std::uint64_t seed);

}  // namespace meshgap

namespace meshgap {

/// Simulated second acquisition of the same surface: a seeded random
/// rotation about the vertex centroid followed by Gaussian vertex noise.
/// Vertex sampling no longer coincides with the input, as with two
/// independently contoured scans.
TriangleMesh rescanned(const TriangleMesh& mesh, double noise_sigma, std::uint64_t seed);

}  // namespace meshgap
