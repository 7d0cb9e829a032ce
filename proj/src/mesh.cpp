#include "meshgap/mesh.hpp"

#include <algorithm>

#include "meshgap/errors.hpp"

namespace meshgap {

TriangleMesh::TriangleMesh(std::vector<Vec3> vertices, std::vector<Face> faces, std::string name)
    : vertices_(std::move(vertices)), faces_(std::move(faces)), name_(std::move(name)) {
  const auto n = vertices_.size();
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    const Face& face = faces_[f];
    for (VertexIndex idx : face) {
      if (idx >= n)
        throw ValidationError("face " + std::to_string(f) + " references vertex " + std::to_string(idx) +
                              " but the mesh has " + std::to_string(n) + " vertices");
    }
    if (face[0] == face[1] || face[1] == face[2] || face[0] == face[2])
      throw ValidationError("face " + std::to_string(f) + " repeats a vertex index");
  }
}

Aabb TriangleMesh::bounds() const {
  if (vertices_.empty()) return {};
  Aabb box{vertices_.front(), vertices_.front()};
  for (const Vec3& v : vertices_) {
    box.lo = {std::min(box.lo.x, v.x), std::min(box.lo.y, v.y), std::min(box.lo.z, v.z)};
    box.hi = {std::max(box.hi.x, v.x), std::max(box.hi.y, v.y), std::max(box.hi.z, v.z)};
  }
  return box;
}

TriangleMesh TriangleMesh::flipped() const {
  std::vector<Face> faces(faces_);
  for (Face& f : faces) std::swap(f[1], f[2]);
  return TriangleMesh(vertices_, std::move(faces), name_);
}

void require_operational(const TriangleMesh& mesh) {
  if (mesh.vertex_count() < 3)
    throw ValidationError("mesh '" + mesh.name() + "' has " + std::to_string(mesh.vertex_count()) +
                          " vertices; at least 3 are required");
}

std::size_t zero_area_face_count(const TriangleMesh& mesh) {
  std::size_t count = 0;
  for (const Face& f : mesh.faces()) {
    const Vec3 n = cross(mesh.vertex(f[1]) - mesh.vertex(f[0]), mesh.vertex(f[2]) - mesh.vertex(f[0]));
    if (squared_norm(n) == 0.0) ++count;
  }
  return count;
}

double signed_volume(const TriangleMesh& mesh) {
  double six_volume = 0.0;
  for (const Face& f : mesh.faces())
    six_volume += dot(mesh.vertex(f[0]), cross(mesh.vertex(f[1]), mesh.vertex(f[2])));
  return six_volume / 6.0;
}

namespace {

void sort_unique(std::vector<std::vector<VertexIndex>>& lists) {
  for (auto& l : lists) {
    std::sort(l.begin(), l.end());
    l.erase(std::unique(l.begin(), l.end()), l.end());
  }
}

}  // namespace

AdjacencyIndex::AdjacencyIndex(const TriangleMesh& mesh) : neighbours_(mesh.vertex_count()) {
  for (const Face& f : mesh.faces()) {
    for (int k = 0; k < 3; ++k) {
      const VertexIndex a = f[static_cast<std::size_t>(k)];
      const VertexIndex b = f[static_cast<std::size_t>((k + 1) % 3)];
      neighbours_[a].push_back(b);
      neighbours_[b].push_back(a);
    }
  }
  sort_unique(neighbours_);
}

AdjacencyIndex AdjacencyIndex::from_edges(std::size_t vertex_count,
                                          std::span<const std::pair<VertexIndex, VertexIndex>> edges) {
  AdjacencyIndex adj;
  adj.neighbours_.resize(vertex_count);
  for (const auto& [a, b] : edges) {
    if (a >= vertex_count || b >= vertex_count) throw ValidationError("edge endpoint out of range");
    if (a == b) continue;
    adj.neighbours_[a].push_back(b);
    adj.neighbours_[b].push_back(a);
  }
  sort_unique(adj.neighbours_);
  return adj;
}

}  // namespace meshgap
