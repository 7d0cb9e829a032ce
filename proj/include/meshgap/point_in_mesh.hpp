#pragma once

#include <cstdint>
#include <vector>

#include "meshgap/mesh.hpp"

namespace meshgap {

/// Ray-parity inside test for a closed triangle mesh.
///
/// The primary ray uses a fixed oblique direction and a uniform grid over
/// the plane orthogonal to it, so a query only tests the triangles whose
/// projection covers the query cell. When a ray grazes an edge, a vertex or
/// runs parallel to a face, the query is re-cast with a jittered direction
/// drawn from a fixed-seed stream; after kMaxRetries failures it throws
/// DegenerateQueryError.
class InsideTester {
 public:
  static constexpr int kMaxRetries = 8;

  explicit InsideTester(const TriangleMesh& mesh);

  bool contains(const Vec3& p) const;

 private:
  enum class Cast { Inside, Outside, Degenerate };

  Cast cast_primary(const Vec3& p) const;
  Cast cast_brute_force(const Vec3& p, const Vec3& dir) const;

  std::vector<Vec3> v0_, e1_, e2_;
  Vec3 dir_, axis_u_, axis_v_;
  double u_min_ = 0, v_min_ = 0, cell_ = 1;
  int cells_u_ = 1, cells_v_ = 1;
  std::vector<std::uint32_t> cell_start_;
  std::vector<std::uint32_t> cell_faces_;
  double scale_ = 1;
};

bool point_in_mesh(const TriangleMesh& mesh, const Vec3& p);

}  // namespace meshgap
