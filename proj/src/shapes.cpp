#include "meshgap/shapes.hpp"

#include <cmath>
#include <map>

#include "meshgap/random.hpp"

namespace meshgap {

TriangleMesh make_box(const Vec3& lo, const Vec3& hi) {
  std::vector<Vec3> v;
  for (int i = 0; i < 8; ++i)
    v.push_back({(i & 1) ? hi.x : lo.x, (i & 2) ? hi.y : lo.y, (i & 4) ? hi.z : lo.z});
  // Vertex i has bits (x, y, z) = (i & 1, i & 2, i & 4).
  std::vector<Face> f = {
      {0, 2, 3}, {0, 3, 1},  // z = lo
      {4, 5, 7}, {4, 7, 6},  // z = hi
      {0, 1, 5}, {0, 5, 4},  // y = lo
      {2, 6, 7}, {2, 7, 3},  // y = hi
      {0, 4, 6}, {0, 6, 2},  // x = lo
      {1, 3, 7}, {1, 7, 5},  // x = hi
  };
  return TriangleMesh(std::move(v), std::move(f), "box");
}

TriangleMesh make_icosphere(double radius, int subdivisions, const Vec3& center) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> v = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                         {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (Vec3& p : v) p = normalized(p);
  std::vector<Face> f = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
                         {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
                         {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};

  for (int level = 0; level < subdivisions; ++level) {
    std::map<std::pair<VertexIndex, VertexIndex>, VertexIndex> midpoints;
    auto midpoint = [&](VertexIndex a, VertexIndex b) {
      const auto key = std::minmax(a, b);
      auto it = midpoints.find(key);
      if (it != midpoints.end()) return it->second;
      const auto idx = static_cast<VertexIndex>(v.size());
      v.push_back(normalized((v[a] + v[b]) * 0.5));
      midpoints.emplace(key, idx);
      return idx;
    };
    std::vector<Face> next;
    next.reserve(f.size() * 4);
    for (const Face& tri : f) {
      const VertexIndex ab = midpoint(tri[0], tri[1]);
      const VertexIndex bc = midpoint(tri[1], tri[2]);
      const VertexIndex ca = midpoint(tri[2], tri[0]);
      next.push_back({tri[0], ab, ca});
      next.push_back({tri[1], bc, ab});
      next.push_back({tri[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    f = std::move(next);
  }
  for (Vec3& p : v) p = center + p * radius;
  return TriangleMesh(std::move(v), std::move(f), "icosphere");
}

TriangleMesh transformed(const TriangleMesh& mesh, const Mat3& rotation, const Vec3& translation) {
  std::vector<Vec3> v(mesh.vertices().begin(), mesh.vertices().end());
  for (Vec3& p : v) p = rotation * p + translation;
  return TriangleMesh(std::move(v), {mesh.faces().begin(), mesh.faces().end()}, mesh.name());
}

TriangleMesh perturbed(const TriangleMesh& mesh, double sigma, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Vec3> v(mesh.vertices().begin(), mesh.vertices().end());
  for (Vec3& p : v) p += sigma * rng.normal3();
  return TriangleMesh(std::move(v), {mesh.faces().begin(), mesh.faces().end()}, mesh.name());
}

}  // namespace meshgap

namespace meshgap {

TriangleMesh rescanned(const TriangleMesh& mesh, double noise_sigma, std::uint64_t seed) {
  Vec3 centroid;
  for (const Vec3& p : mesh.vertices()) centroid += p;
  if (mesh.vertex_count() > 0) centroid *= 1.0 / static_cast<double>(mesh.vertex_count());
  Rng rng = Rng::derived(seed, 0);
  const Mat3 rotation = random_rotation(rng);
  const TriangleMesh turned = transformed(mesh, rotation, centroid - rotation * centroid);
  return perturbed(turned, noise_sigma, Rng::derived(seed, 1).next_u64());
}

}  // namespace meshgap
