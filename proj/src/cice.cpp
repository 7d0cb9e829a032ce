#include "meshgap/cice.hpp"

#include <algorithm>
#include <cmath>

#include "meshgap/errors.hpp"

namespace meshgap {

std::size_t LabelField::missing_count() const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), true));
}

ScalarField compute_cice(std::span<const Vec3> source_points, const CorrespondenceMap& forward,
                         const CorrespondenceMap& backward) {
  if (forward.source_count() != source_points.size())
    throw ValidationError("forward map covers " + std::to_string(forward.source_count()) +
                          " vertices but the source mesh has " + std::to_string(source_points.size()));
  if (backward.target_count() != source_points.size())
    throw ValidationError("backward map lands on " + std::to_string(backward.target_count()) +
                          " vertices but the source mesh has " + std::to_string(source_points.size()));
  const CorrespondenceMap round_trip = compose(forward, backward);

  ScalarField out;
  out.values.resize(source_points.size());
  for (std::size_t i = 0; i < source_points.size(); ++i)
    out.values[i] = distance(source_points[i], source_points[round_trip[i]]);
  return out;
}

namespace {

void check_sizes(std::size_t field, const AdjacencyIndex& adjacency, int rounds) {
  if (field != adjacency.vertex_count())
    throw ValidationError("field has " + std::to_string(field) + " entries but the graph has " +
                          std::to_string(adjacency.vertex_count()) + " vertices");
  if (rounds < 1) throw ValidationError("filter rounds must be positive");
}

}  // namespace

ScalarField median_filter(const ScalarField& field, const AdjacencyIndex& adjacency, int rounds) {
  check_sizes(field.size(), adjacency, rounds);
  std::vector<double> current = field.values;
  std::vector<double> next(current.size());
  std::vector<double> window;
  for (int r = 0; r < rounds; ++r) {
    for (std::size_t i = 0; i < current.size(); ++i) {
      const auto nbrs = adjacency.neighbours(i);
      window.clear();
      window.push_back(current[i]);
      for (VertexIndex j : nbrs) window.push_back(current[j]);
      const auto mid = window.begin() + static_cast<std::ptrdiff_t>((window.size() - 1) / 2);
      std::nth_element(window.begin(), mid, window.end());
      next[i] = *mid;
    }
    current.swap(next);
  }
  return {std::move(current)};
}

LabelField threshold_labels(const ScalarField& field, double threshold_mm) {
  if (!(threshold_mm > 0.0) || !std::isfinite(threshold_mm))
    throw ValidationError("threshold must be a positive number of millimetres");
  LabelField out;
  out.labels.resize(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) out.labels[i] = field.values[i] > threshold_mm;
  return out;
}

namespace {

template <typename Rule>
LabelField label_rounds(const LabelField& labels, const AdjacencyIndex& adjacency, int rounds, Rule rule) {
  check_sizes(labels.size(), adjacency, rounds);
  std::vector<bool> current = labels.labels;
  std::vector<bool> next(current.size());
  for (int r = 0; r < rounds; ++r) {
    for (std::size_t i = 0; i < current.size(); ++i) {
      const auto nbrs = adjacency.neighbours(i);
      std::size_t trues = current[i] ? 1 : 0;
      for (VertexIndex j : nbrs) trues += current[j] ? 1 : 0;
      next[i] = rule(current[i], trues, nbrs.size() + 1);
    }
    current.swap(next);
  }
  return {std::move(current)};
}

}  // namespace

LabelField majority_label_filter(const LabelField& labels, const AdjacencyIndex& adjacency, int rounds) {
  return label_rounds(labels, adjacency, rounds, [](bool own, std::size_t trues, std::size_t total) {
    if (2 * trues > total) return true;
    if (2 * trues < total) return false;
    return own;
  });
}

LabelField dilate_labels(const LabelField& labels, const AdjacencyIndex& adjacency, int rounds) {
  return label_rounds(labels, adjacency, rounds,
                      [](bool, std::size_t trues, std::size_t) { return trues > 0; });
}

LabelField apply_label_filter(const LabelField& labels, const AdjacencyIndex& adjacency, int rounds,
                              LabelFilterMode mode) {
  return mode == LabelFilterMode::Majority ? majority_label_filter(labels, adjacency, rounds)
                                           : dilate_labels(labels, adjacency, rounds);
}

}  // namespace meshgap
