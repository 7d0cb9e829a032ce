#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "meshgap/mesh.hpp"

namespace meshgap {

/// Directional vertex correspondence: entry i is the target vertex assigned
/// to source vertex i. Neither injective nor surjective in general.
class CorrespondenceMap {
 public:
  CorrespondenceMap() = default;
  /// Throws ValidationError if an entry is >= target_count.
  CorrespondenceMap(std::size_t target_count, std::vector<VertexIndex> assignment);

  static CorrespondenceMap identity(std::size_t n);

  std::size_t source_count() const { return assignment_.size(); }
  std::size_t target_count() const { return target_count_; }
  std::span<const VertexIndex> assignment() const { return assignment_; }
  VertexIndex operator[](std::size_t i) const { return assignment_[i]; }

  friend bool operator==(const CorrespondenceMap&, const CorrespondenceMap&) = default;

 private:
  std::size_t target_count_ = 0;
  std::vector<VertexIndex> assignment_;
};

/// result(i) = backward(forward(i)).
CorrespondenceMap compose(const CorrespondenceMap& forward, const CorrespondenceMap& backward);

/// Text format: "<source_count> <target_count>" then one index per line;
/// lines starting with '#' are comments.
CorrespondenceMap parse_correspondence(std::string_view text);
std::string format_correspondence(const CorrespondenceMap& map);
CorrespondenceMap load_correspondence(const std::filesystem::path& path);
void save_correspondence(const CorrespondenceMap& map, const std::filesystem::path& path);

/// Exact nearest-neighbour index over a fixed point set (k-d tree).
/// Ties in distance resolve to the lowest index, so results equal a linear
/// scan comparing (squared distance, index) lexicographically.
class NearestNeighbourIndex {
 public:
  explicit NearestNeighbourIndex(std::span<const Vec3> points);

  VertexIndex nearest(const Vec3& query) const;
  std::size_t size() const { return points_.size(); }

 private:
  struct Node {
    std::uint32_t begin, end;  // range in order_
    std::int32_t left = -1, right = -1;
    int axis = 0;
    double split = 0;
  };
  std::int32_t build(std::uint32_t begin, std::uint32_t end);
  void search(std::int32_t node, const Vec3& q, double& best_d2, VertexIndex& best) const;

  std::vector<Vec3> points_;
  std::vector<VertexIndex> order_;
  std::vector<Node> nodes_;
};

/// assignment(i) = argmin_j |source_i - target_j|, ties to lowest j.
CorrespondenceMap nearest_neighbour_map(std::span<const Vec3> source, std::span<const Vec3> target);

/// As nearest_neighbour_map, but distances are measured to target points
/// displaced by N(0, sigma^2) noise per coordinate, drawn from Rng(seed) in
/// target vertex order (x, y, z). Indices refer to the undisplaced target.
CorrespondenceMap jittered_nearest_neighbour_map(std::span<const Vec3> source, std::span<const Vec3> target,
                                                 double sigma, std::uint64_t seed);

struct PredictorSpec {
  enum class Kind { Identity, NearestNeighbour, JitteredNearestNeighbour, FromFile };

  Kind kind = Kind::NearestNeighbour;
  std::optional<std::uint64_t> seed;
  std::optional<double> jitter_sigma;
  std::optional<std::filesystem::path> path;
  /// From-file only: map for the reverse direction (target -> source).
  std::optional<std::filesystem::path> backward_path;

  static PredictorSpec identity() { return {Kind::Identity, {}, {}, {}, {}}; }
  static PredictorSpec nearest_neighbour() { return {Kind::NearestNeighbour, {}, {}, {}, {}}; }
  static PredictorSpec jittered(double sigma, std::uint64_t seed) {
    return {Kind::JitteredNearestNeighbour, seed, sigma, {}, {}};
  }
  static PredictorSpec from_file(std::filesystem::path forward, std::optional<std::filesystem::path> backward = {}) {
    return {Kind::FromFile, {}, {}, std::move(forward), std::move(backward)};
  }

  /// Throws ValidationError if the optional fields don't match the kind.
  void validate() const;

  /// Spec for the opposite direction. Swaps the two paths of a from-file
  /// spec; other kinds are symmetric and returned unchanged.
  PredictorSpec reversed() const;

  /// Parses `identity`, `nn`, `nnjitter:sigma=<mm>,seed=<int>`,
  /// `file:<path>` and `file:<forward path>,backward=<path>`.
  static PredictorSpec parse(std::string_view text);
  std::string to_string() const;

  friend bool operator==(const PredictorSpec&, const PredictorSpec&) = default;
};

/// Predicts the source -> target correspondence.
///
/// A from-file spec reads its forward path; counts must match
/// (source, target) or ValidationError is thrown.
CorrespondenceMap predict(const PredictorSpec& spec, const TriangleMesh& source, const TriangleMesh& target);

}  // namespace meshgap
