#pragma once

// Brute-force reference implementations. These deliberately avoid the
// library's algorithms (no k-d tree, no nth_element, no shared counting code)
// so they can check it independently.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "meshgap/mesh.hpp"

namespace oracle {

using meshgap::Face;
using meshgap::TriangleMesh;
using meshgap::Vec3;
using meshgap::VertexIndex;

/// O(n*m) scan; strict '<' keeps the first (lowest) index on ties.
inline std::vector<VertexIndex> nearest_neighbours(const std::vector<Vec3>& source, const std::vector<Vec3>& target) {
  std::vector<VertexIndex> out;
  for (const Vec3& s : source) {
    double best = INFINITY;
    VertexIndex arg = 0;
    for (std::size_t j = 0; j < target.size(); ++j) {
      const double dx = s.x - target[j].x, dy = s.y - target[j].y, dz = s.z - target[j].z;
      const double d2 = dx * dx + dy * dy + dz * dz;
      if (d2 < best) {
        best = d2;
        arg = static_cast<VertexIndex>(j);
      }
    }
    out.push_back(arg);
  }
  return out;
}

/// Neighbour sets from an edge list, as std::set per vertex.
inline std::vector<std::set<VertexIndex>> neighbour_sets(std::size_t n,
                                                        const std::vector<std::pair<VertexIndex, VertexIndex>>& edges) {
  std::vector<std::set<VertexIndex>> nb(n);
  for (auto [a, b] : edges) {
    if (a == b) continue;
    nb[a].insert(b);
    nb[b].insert(a);
  }
  return nb;
}

/// One round: sorted multiset of self + neighbours, take element (size-1)/2.
inline std::vector<double> median_round(const std::vector<double>& v, const std::vector<std::set<VertexIndex>>& nb) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::multiset<double> window{v[i]};
    for (VertexIndex j : nb[i]) window.insert(v[j]);
    auto it = window.begin();
    std::advance(it, static_cast<long>((window.size() - 1) / 2));
    out[i] = *it;
  }
  return out;
}

/// One round of boolean median: sort the 0/1 multiset; lower and upper
/// central elements agree unless exactly half are true, then keep own.
inline std::vector<bool> majority_round(const std::vector<bool>& v, const std::vector<std::set<VertexIndex>>& nb) {
  std::vector<bool> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::vector<int> window{v[i] ? 1 : 0};
    for (VertexIndex j : nb[i]) window.push_back(v[j] ? 1 : 0);
    std::sort(window.begin(), window.end());
    const std::size_t m = window.size();
    const int lower = window[(m - 1) / 2];
    const int upper = window[m / 2];
    out[i] = lower == upper ? lower == 1 : bool(v[i]);
  }
  return out;
}

struct Bas {
  std::optional<double> score;
  bool degenerate = false;
};

/// Partition indices by truth class and average the per-class accuracy.
inline Bas balanced_accuracy(const std::vector<bool>& truth, const std::vector<bool>& pred) {
  std::map<bool, std::vector<std::size_t>> classes;
  for (std::size_t i = 0; i < truth.size(); ++i) classes[truth[i]].push_back(i);
  std::vector<double> per_class;
  for (const auto& [label, idx] : classes) {
    std::size_t right = 0;
    for (std::size_t i : idx) right += pred[i] == label ? 1 : 0;
    per_class.push_back(static_cast<double>(right) / static_cast<double>(idx.size()));
  }
  Bas out;
  if (per_class.empty()) return out;
  double sum = 0;
  for (double r : per_class) sum += r;
  out.score = sum / static_cast<double>(per_class.size());
  out.degenerate = per_class.size() == 1;
  return out;
}

inline bool inside_box(const Vec3& p, const Vec3& lo, const Vec3& hi) {
  return p.x > lo.x && p.x < hi.x && p.y > lo.y && p.y < hi.y && p.z > lo.z && p.z < hi.z;
}

inline bool inside_sphere(const Vec3& p, const Vec3& c, double r) {
  const double dx = p.x - c.x, dy = p.y - c.y, dz = p.z - c.z;
  return dx * dx + dy * dy + dz * dz < r * r;
}

/// Random valid triangle mesh: n vertices, f faces with distinct indices.
inline TriangleMesh random_mesh(std::mt19937_64& rng, std::size_t n, std::size_t f) {
  std::uniform_real_distribution<double> coord(-100.0, 100.0);
  std::uniform_int_distribution<VertexIndex> pick(0, static_cast<VertexIndex>(n - 1));
  std::vector<Vec3> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back({coord(rng), coord(rng), coord(rng)});
  std::vector<Face> faces;
  while (faces.size() < f) {
    Face face{pick(rng), pick(rng), pick(rng)};
    if (face[0] != face[1] && face[1] != face[2] && face[0] != face[2]) faces.push_back(face);
  }
  return TriangleMesh(std::move(v), std::move(faces), "random");
}

/// Random simple graph on n vertices as an edge list.
inline std::vector<std::pair<VertexIndex, VertexIndex>> random_edges(std::mt19937_64& rng, std::size_t n, double p) {
  std::bernoulli_distribution coin(p);
  std::vector<std::pair<VertexIndex, VertexIndex>> edges;
  for (VertexIndex a = 0; a < n; ++a)
    for (VertexIndex b = a + 1; b < n; ++b)
      if (coin(rng)) edges.emplace_back(a, b);
  return edges;
}

}  // namespace oracle
