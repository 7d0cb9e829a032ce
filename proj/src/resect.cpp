#include "meshgap/resect.hpp"

#include <algorithm>
#include <cmath>

#include "meshgap/errors.hpp"
#include "meshgap/parallel.hpp"
#include "meshgap/pipeline.hpp"
#include "meshgap/random.hpp"

namespace meshgap {

void CutBox::validate() const {
  if (!(half_extents.x > 0 && half_extents.y > 0 && half_extents.z > 0))
    throw ValidationError("cut box half extents must be positive");
  if (!(orthonormality_error(rotation) <= 1e-9)) throw ValidationError("cut box rotation is not orthonormal");
}

bool CutBox::strictly_contains(const Vec3& p) const {
  const Vec3 local = rotation.transposed() * (p - center);
  return std::abs(local.x) < half_extents.x && std::abs(local.y) < half_extents.y &&
         std::abs(local.z) < half_extents.z;
}

VolumeSampler::VolumeSampler(const TriangleMesh& mesh, std::size_t samples, std::uint64_t seed) : drawn_(samples) {
  if (samples == 0) throw ValidationError("volume estimation needs at least one sample");
  const InsideTester tester(mesh);
  const Aabb box = mesh.bounds();
  Rng rng(seed);
  for (std::size_t s = 0; s < samples; ++s) {
    const double x = rng.uniform(box.lo.x, box.hi.x);
    const double y = rng.uniform(box.lo.y, box.hi.y);
    const double z = rng.uniform(box.lo.z, box.hi.z);
    const Vec3 p{x, y, z};
    if (tester.contains(p)) inside_.push_back(p);
  }
  if (inside_.empty())
    throw ValidationError("no Monte-Carlo sample fell inside mesh '" + mesh.name() + "'; is it closed?");
}

double VolumeSampler::fraction_in(const CutBox& box) const {
  std::size_t hits = 0;
  for (const Vec3& p : inside_) hits += box.strictly_contains(p) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(inside_.size());
}

ResectionResult cut_mesh(const TriangleMesh& mesh, const CutBox& box, const VolumeSampler& volume) {
  box.validate();
  ResectionResult result;
  result.index_map.resize(mesh.vertex_count());
  std::vector<Vec3> kept;
  kept.reserve(mesh.vertex_count());
  for (std::size_t i = 0; i < mesh.vertex_count(); ++i) {
    if (box.strictly_contains(mesh.vertex(i))) {
      result.removed_vertex_indices.push_back(static_cast<VertexIndex>(i));
    } else {
      result.index_map[i] = static_cast<VertexIndex>(kept.size());
      kept.push_back(mesh.vertex(i));
    }
  }
  if (kept.size() < 3)
    throw ValidationError("cut leaves " + std::to_string(kept.size()) + " of " +
                          std::to_string(mesh.vertex_count()) + " vertices; the result would be empty");

  std::vector<Face> faces;
  faces.reserve(mesh.face_count());
  for (const Face& f : mesh.faces()) {
    const auto a = result.index_map[f[0]], b = result.index_map[f[1]], c = result.index_map[f[2]];
    if (a && b && c) faces.push_back({*a, *b, *c});
  }
  result.cut_mesh = TriangleMesh(std::move(kept), std::move(faces), mesh.name());
  result.removed_vertex_fraction =
      static_cast<double>(result.removed_vertex_indices.size()) / static_cast<double>(mesh.vertex_count());
  result.removed_volume_fraction = volume.fraction_in(box);
  return result;
}

ResectionResult cut_mesh(const TriangleMesh& mesh, const CutBox& box, std::size_t volume_samples,
                         std::uint64_t seed) {
  box.validate();
  require_operational(mesh);
  return cut_mesh(mesh, box, VolumeSampler(mesh, volume_samples, seed));
}

std::vector<CutBox> plan_cuts(const TriangleMesh& mesh, std::size_t count, double box_width_mm, std::uint64_t seed,
                              double fraction_lo, double fraction_hi, const CutPlanOptions& options) {
  require_operational(mesh);
  if (count < 1) throw ValidationError("cut count must be at least 1");
  if (!(box_width_mm > 0) || !std::isfinite(box_width_mm)) throw ValidationError("box width must be positive");
  if (!(0 < fraction_lo && fraction_lo < fraction_hi && fraction_hi < 1))
    throw ValidationError("fraction range must satisfy 0 < lo < hi < 1");

  const VolumeSampler volume(mesh, options.volume_samples, Rng::derived(seed, 1).next_u64());
  Rng rng = Rng::derived(seed, 2);
  const double half = box_width_mm / 2;
  const double span = norm(mesh.bounds().extent());
  const Vec3 half_extents = options.shape == BoxShape::Slab ? Vec3{half, span, span} : Vec3{half, half, half};

  std::vector<CutBox> boxes;
  const std::size_t budget = count * options.proposals_per_box;
  for (std::size_t proposal = 0; proposal < budget && boxes.size() < count; ++proposal) {
    const auto vertex = static_cast<std::size_t>(rng.below(mesh.vertex_count()));
    CutBox box{mesh.vertex(vertex), half_extents, random_rotation(rng)};

    const double fraction = volume.fraction_in(box);
    if (fraction < fraction_lo || fraction > fraction_hi) continue;
    std::size_t removed = 0;
    for (const Vec3& p : mesh.vertices()) removed += box.strictly_contains(p) ? 1 : 0;
    if (removed == 0 || mesh.vertex_count() - removed < 3) continue;
    boxes.push_back(box);
  }
  if (boxes.size() < count)
    throw BudgetExhaustedError("found only " + std::to_string(boxes.size()) + " of " + std::to_string(count) +
                               " cuts with removed volume in [" + std::to_string(fraction_lo) + ", " +
                               std::to_string(fraction_hi) + "] after " + std::to_string(budget) + " proposals");
  return boxes;
}

LabelField project_golden_standard(const TriangleMesh& source, const TriangleMesh& complete_target,
                                   std::span<const VertexIndex> removed,
                                   std::span<const CorrespondenceMap> forward_maps, int vote_min) {
  std::vector<bool> is_removed(complete_target.vertex_count(), false);
  for (VertexIndex r : removed) {
    if (r >= is_removed.size()) throw ValidationError("removed vertex index out of range");
    is_removed[r] = true;
  }
  std::vector<LabelField> per_map;
  per_map.reserve(forward_maps.size());
  for (const CorrespondenceMap& map : forward_maps) {
    if (map.source_count() != source.vertex_count() || map.target_count() != complete_target.vertex_count())
      throw ValidationError("golden-standard map does not go from the source to the complete target");
    LabelField labels;
    labels.labels.resize(map.source_count());
    for (std::size_t i = 0; i < map.source_count(); ++i) labels.labels[i] = is_removed[map[i]];
    per_map.push_back(std::move(labels));
  }
  return vote(per_map, vote_min);
}

std::vector<PredictorSpec> default_golden_predictors() {
  std::vector<PredictorSpec> specs;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) specs.push_back(PredictorSpec::jittered(1.0, seed));
  return specs;
}

std::vector<SimulatedPair> simulate_resections(const TriangleMesh& source, const TriangleMesh& complete_target,
                                               const SimulationOptions& options) {
  const auto predictors = options.golden_predictors.empty() ? default_golden_predictors() : options.golden_predictors;
  if (options.golden_vote_min < 1 || static_cast<std::size_t>(options.golden_vote_min) > predictors.size())
    throw ValidationError("golden vote_min must lie in [1, number of golden predictors]");

  const auto boxes = plan_cuts(complete_target, options.count, options.box_width_mm, options.seed,
                               options.fraction_lo, options.fraction_hi, options.plan);

  std::vector<CorrespondenceMap> forward_maps(predictors.size());
  parallel_for(predictors.size(), options.jobs,
               [&](std::size_t k) { forward_maps[k] = predict(predictors[k], source, complete_target); });

  const VolumeSampler volume(complete_target, options.plan.volume_samples, Rng::derived(options.seed, 3).next_u64());
  std::vector<SimulatedPair> pairs(boxes.size());
  parallel_for(boxes.size(), options.jobs, [&](std::size_t k) {
    SimulatedPair& pair = pairs[k];
    pair.box = boxes[k];
    pair.resection = cut_mesh(complete_target, boxes[k], volume);
    pair.golden = project_golden_standard(source, complete_target, pair.resection.removed_vertex_indices,
                                          forward_maps, options.golden_vote_min);
  });
  return pairs;
}

}  // namespace meshgap
