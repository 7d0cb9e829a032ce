#include "meshgap/point_in_mesh.hpp"

#include <algorithm>
#include <cmath>

#include "meshgap/errors.hpp"
#include "meshgap/random.hpp"

namespace meshgap {

namespace {

// Barycentric slack below which a hit counts as grazing an edge or vertex.
constexpr double kEdgeEps = 1e-9;
constexpr std::uint64_t kRetrySeed = 0x9E1CA57ULL;

}  // namespace

InsideTester::InsideTester(const TriangleMesh& mesh) {
  const auto faces = mesh.faces();
  v0_.reserve(faces.size());
  e1_.reserve(faces.size());
  e2_.reserve(faces.size());
  for (const Face& f : faces) {
    const Vec3& a = mesh.vertex(f[0]);
    v0_.push_back(a);
    e1_.push_back(mesh.vertex(f[1]) - a);
    e2_.push_back(mesh.vertex(f[2]) - a);
  }

  const Aabb box = mesh.bounds();
  scale_ = std::max(norm(box.extent()), 1e-300);

  dir_ = normalized(Vec3{0.5377, 0.6113, 0.5808});
  axis_u_ = normalized(cross(dir_, Vec3{0, 0, 1}));
  axis_v_ = cross(dir_, axis_u_);

  if (faces.empty()) return;

  struct Rect {
    double u0, u1, v0, v1;
  };
  std::vector<Rect> rects;
  rects.reserve(faces.size());
  double umin = INFINITY, umax = -INFINITY, vmin = INFINITY, vmax = -INFINITY;
  for (std::size_t f = 0; f < faces.size(); ++f) {
    Rect r{INFINITY, -INFINITY, INFINITY, -INFINITY};
    for (const Vec3& p : {v0_[f], v0_[f] + e1_[f], v0_[f] + e2_[f]}) {
      const double u = dot(p, axis_u_);
      const double v = dot(p, axis_v_);
      r = {std::min(r.u0, u), std::max(r.u1, u), std::min(r.v0, v), std::max(r.v1, v)};
    }
    rects.push_back(r);
    umin = std::min(umin, r.u0);
    umax = std::max(umax, r.u1);
    vmin = std::min(vmin, r.v0);
    vmax = std::max(vmax, r.v1);
  }

  const double side = std::max({umax - umin, vmax - vmin, 1e-12});
  const int per_side = std::clamp(static_cast<int>(std::sqrt(static_cast<double>(faces.size()))), 1, 1024);
  cell_ = side / per_side;
  u_min_ = umin;
  v_min_ = vmin;
  cells_u_ = std::max(1, static_cast<int>(std::ceil((umax - umin) / cell_)) + 1);
  cells_v_ = std::max(1, static_cast<int>(std::ceil((vmax - vmin) / cell_)) + 1);

  auto cell_of = [&](double u, double v) {
    const int cu = std::clamp(static_cast<int>(std::floor((u - u_min_) / cell_)), 0, cells_u_ - 1);
    const int cv = std::clamp(static_cast<int>(std::floor((v - v_min_) / cell_)), 0, cells_v_ - 1);
    return std::pair{cu, cv};
  };

  // Counting sort of faces into cells (CSR layout).
  std::vector<std::uint32_t> counts(static_cast<std::size_t>(cells_u_) * cells_v_ + 1, 0);
  for (int pass = 0; pass < 2; ++pass) {
    if (pass == 1) {
      cell_start_.assign(counts.size(), 0);
      for (std::size_t c = 1; c < counts.size(); ++c) cell_start_[c] = cell_start_[c - 1] + counts[c - 1];
      cell_faces_.resize(cell_start_.back());
      std::fill(counts.begin(), counts.end(), 0);
    }
    for (std::size_t f = 0; f < rects.size(); ++f) {
      const auto [cu0, cv0] = cell_of(rects[f].u0, rects[f].v0);
      const auto [cu1, cv1] = cell_of(rects[f].u1, rects[f].v1);
      for (int cu = cu0; cu <= cu1; ++cu)
        for (int cv = cv0; cv <= cv1; ++cv) {
          const auto c = static_cast<std::size_t>(cu) * cells_v_ + cv;
          if (pass == 1) cell_faces_[cell_start_[c] + counts[c]] = static_cast<std::uint32_t>(f);
          ++counts[c];
        }
    }
  }
}

namespace {

enum class Hit { Miss, Cross, Degenerate };

Hit intersect(const Vec3& origin, const Vec3& dir, const Vec3& v0, const Vec3& e1, const Vec3& e2, double scale) {
  const Vec3 pvec = cross(dir, e2);
  const double det = dot(e1, pvec);
  const double area_scale = norm(e1) * norm(e2);
  const Vec3 tvec = origin - v0;
  if (std::abs(det) <= 1e-12 * area_scale) {
    // Ray parallel to the face plane: only a coplanar origin is ambiguous.
    const Vec3 n = cross(e1, e2);
    const double nn = norm(n);
    if (nn == 0.0) return Hit::Miss;  // zero-area sliver
    return std::abs(dot(tvec, n)) / nn <= 1e-12 * scale ? Hit::Degenerate : Hit::Miss;
  }
  const double inv = 1.0 / det;
  const double u = dot(tvec, pvec) * inv;
  if (u < -kEdgeEps || u > 1.0 + kEdgeEps) return Hit::Miss;
  const Vec3 qvec = cross(tvec, e1);
  const double v = dot(dir, qvec) * inv;
  if (v < -kEdgeEps || u + v > 1.0 + kEdgeEps) return Hit::Miss;
  const double t = dot(e2, qvec) * inv;
  const double t_eps = 1e-12 * scale;
  if (t < -t_eps) return Hit::Miss;
  if (t <= t_eps) return Hit::Degenerate;
  if (u < kEdgeEps || v < kEdgeEps || u + v > 1.0 - kEdgeEps) return Hit::Degenerate;
  return Hit::Cross;
}

}  // namespace

InsideTester::Cast InsideTester::cast_primary(const Vec3& p) const {
  if (cell_start_.empty()) return Cast::Outside;
  const double pu = dot(p, axis_u_);
  const double pv = dot(p, axis_v_);
  const double fu = std::floor((pu - u_min_) / cell_);
  const double fv = std::floor((pv - v_min_) / cell_);
  if (fu < 0 || fv < 0 || fu >= cells_u_ || fv >= cells_v_) return Cast::Outside;
  const auto c = static_cast<std::size_t>(fu) * cells_v_ + static_cast<std::size_t>(fv);
  bool inside = false;
  for (std::uint32_t k = cell_start_[c]; k < cell_start_[c + 1]; ++k) {
    const std::uint32_t f = cell_faces_[k];
    switch (intersect(p, dir_, v0_[f], e1_[f], e2_[f], scale_)) {
      case Hit::Cross: inside = !inside; break;
      case Hit::Degenerate: return Cast::Degenerate;
      case Hit::Miss: break;
    }
  }
  return inside ? Cast::Inside : Cast::Outside;
}

InsideTester::Cast InsideTester::cast_brute_force(const Vec3& p, const Vec3& dir) const {
  bool inside = false;
  for (std::size_t f = 0; f < v0_.size(); ++f) {
    switch (intersect(p, dir, v0_[f], e1_[f], e2_[f], scale_)) {
      case Hit::Cross: inside = !inside; break;
      case Hit::Degenerate: return Cast::Degenerate;
      case Hit::Miss: break;
    }
  }
  return inside ? Cast::Inside : Cast::Outside;
}

bool InsideTester::contains(const Vec3& p) const {
  Cast result = cast_primary(p);
  for (int retry = 0; result == Cast::Degenerate; ++retry) {
    if (retry == kMaxRetries)
      throw DegenerateQueryError("point-in-mesh query stayed degenerate after " + std::to_string(kMaxRetries) +
                                 " jittered re-casts; is the point on the surface?");
    Rng rng = Rng::derived(kRetrySeed, static_cast<std::uint64_t>(retry));
    const Vec3 dir = normalized(dir_ + 0.25 * rng.normal3());
    result = cast_brute_force(p, dir);
  }
  return result == Cast::Inside;
}

bool point_in_mesh(const TriangleMesh& mesh, const Vec3& p) { return InsideTester(mesh).contains(p); }

}  // namespace meshgap
