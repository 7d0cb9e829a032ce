#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "meshgap/cice.hpp"
#include "meshgap/correspondence.hpp"
#include "meshgap/mesh.hpp"
#include "meshgap/point_in_mesh.hpp"

namespace meshgap {

/// Oriented box. World point = center + rotation * local point; the box is
/// the set of local points with |local[k]| <= half_extents[k].
struct CutBox {
  Vec3 center;
  Vec3 half_extents;
  Mat3 rotation = Mat3::identity();

  /// Throws ValidationError for non-positive extents or a rotation that is
  /// not orthonormal within 1e-9.
  void validate() const;

  /// All |local[k]| < half_extents[k].
  bool strictly_contains(const Vec3& p) const;

  friend bool operator==(const CutBox&, const CutBox&) = default;
};

/// Monte-Carlo interior samples of a closed mesh, drawn once and reused to
/// estimate what fraction of the enclosed volume a box removes.
class VolumeSampler {
 public:
  /// Draws `samples` points uniformly in the mesh bounding box with
  /// Rng(seed) and keeps those inside the mesh.
  VolumeSampler(const TriangleMesh& mesh, std::size_t samples, std::uint64_t seed);

  std::size_t drawn() const { return drawn_; }
  std::size_t inside_count() const { return inside_.size(); }

  /// Fraction of interior samples that the box strictly contains.
  double fraction_in(const CutBox& box) const;

 private:
  std::size_t drawn_ = 0;
  std::vector<Vec3> inside_;
};

struct ResectionResult {
  TriangleMesh cut_mesh;
  std::vector<VertexIndex> removed_vertex_indices;         // sorted, original indexing
  std::vector<std::optional<VertexIndex>> index_map;       // original -> cut mesh index
  double removed_volume_fraction = 0.0;
  double removed_vertex_fraction = 0.0;
};

/// Removes the vertices strictly inside `box` together with their incident
/// faces. Survivors keep their relative order. Throws ValidationError if
/// fewer than three vertices survive.
ResectionResult cut_mesh(const TriangleMesh& mesh, const CutBox& box, const VolumeSampler& volume);
ResectionResult cut_mesh(const TriangleMesh& mesh, const CutBox& box, std::size_t volume_samples,
                         std::uint64_t seed);

enum class BoxShape {
  Slab,  // box_width across one axis, spanning the whole mesh along the others
  Cube,  // box_width along every axis
};

struct CutPlanOptions {
  std::size_t volume_samples = 50'000;
  BoxShape shape = BoxShape::Slab;
  /// Proposals allowed per requested box.
  std::size_t proposals_per_box = 200;
};

/// Seeded proposals of boxes centred on random mesh vertices with random
/// orientation, keeping those whose removed volume fraction lies in
/// [fraction_lo, fraction_hi]. Throws BudgetExhaustedError when `count`
/// boxes are not found within count * proposals_per_box proposals.
std::vector<CutBox> plan_cuts(const TriangleMesh& mesh, std::size_t count, double box_width_mm, std::uint64_t seed,
                              double fraction_lo, double fraction_hi, const CutPlanOptions& options = {});

/// Per map k, label_k(i) = forward_maps[k](i) is in `removed`; the result is
/// the vote of the label_k with vote_min.
LabelField project_golden_standard(const TriangleMesh& source, const TriangleMesh& complete_target,
                                   std::span<const VertexIndex> removed,
                                   std::span<const CorrespondenceMap> forward_maps, int vote_min);

struct SimulationOptions {
  std::size_t count = 35;
  double box_width_mm = 30.0;
  double fraction_lo = 0.11;
  double fraction_hi = 0.28;
  std::uint64_t seed = 1;
  CutPlanOptions plan;
  std::vector<PredictorSpec> golden_predictors;
  int golden_vote_min = 3;
  int jobs = 1;
};

struct SimulatedPair {
  CutBox box;
  ResectionResult resection;
  LabelField golden;
};

/// Default golden-standard predictors: five jittered nearest-neighbour
/// maps, sigma 1 mm, seeds 1..5.
std::vector<PredictorSpec> default_golden_predictors();

/// Plans `count` cuts of `complete_target`, cuts it, and projects each
/// removed set onto `source` through the golden predictors.
std::vector<SimulatedPair> simulate_resections(const TriangleMesh& source, const TriangleMesh& complete_target,
                                               const SimulationOptions& options);

}  // namespace meshgap
