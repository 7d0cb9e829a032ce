#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "meshgap/geometry.hpp"

namespace meshgap {

using VertexIndex = std::uint32_t;
using Face = std::array<VertexIndex, 3>;

/// Indexed triangle surface mesh, coordinates in millimetres.
///
/// Immutable once constructed. The constructor rejects faces that reference
/// a vertex outside [0, vertex_count) or repeat an index. Zero-area faces
/// with distinct indices are accepted (see zero_area_face_count).
class TriangleMesh {
 public:
  TriangleMesh() = default;
  TriangleMesh(std::vector<Vec3> vertices, std::vector<Face> faces, std::string name = {});

  std::span<const Vec3> vertices() const { return vertices_; }
  std::span<const Face> faces() const { return faces_; }
  const Vec3& vertex(std::size_t i) const { return vertices_[i]; }
  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t face_count() const { return faces_.size(); }
  const std::string& name() const { return name_; }

  Aabb bounds() const;

  /// Copy with every face's winding reversed.
  TriangleMesh flipped() const;

  friend bool operator==(const TriangleMesh&, const TriangleMesh&) = default;

 private:
  std::vector<Vec3> vertices_;
  std::vector<Face> faces_;
  std::string name_;
};

/// Throws ValidationError unless the mesh has at least three vertices.
void require_operational(const TriangleMesh& mesh);

std::size_t zero_area_face_count(const TriangleMesh& mesh);

/// Signed volume by summing origin tetrahedra (divergence theorem).
/// Positive for a closed mesh with outward-facing winding.
double signed_volume(const TriangleMesh& mesh);

/// 1-ring vertex neighbourhoods, each sorted ascending.
class AdjacencyIndex {
 public:
  AdjacencyIndex() = default;
  explicit AdjacencyIndex(const TriangleMesh& mesh);

  /// Graph with explicit undirected edges; self-loops and duplicates dropped.
  static AdjacencyIndex from_edges(std::size_t vertex_count,
                                   std::span<const std::pair<VertexIndex, VertexIndex>> edges);

  std::size_t vertex_count() const { return neighbours_.size(); }
  std::span<const VertexIndex> neighbours(std::size_t i) const { return neighbours_[i]; }

 private:
  std::vector<std::vector<VertexIndex>> neighbours_;
};

inline AdjacencyIndex build_adjacency(const TriangleMesh& mesh) { return AdjacencyIndex(mesh); }

}  // namespace meshgap
