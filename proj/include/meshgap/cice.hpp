#pragma once

#include <span>
#include <vector>

#include "meshgap/correspondence.hpp"
#include "meshgap/mesh.hpp"

namespace meshgap {

/// Per-vertex real values in millimetres.
struct ScalarField {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  friend bool operator==(const ScalarField&, const ScalarField&) = default;
};

/// Per-vertex missing (true) / present (false) labels.
struct LabelField {
  std::vector<bool> labels;

  std::size_t size() const { return labels.size(); }
  std::size_t missing_count() const;
  friend bool operator==(const LabelField&, const LabelField&) = default;
};

/// Correspondence-based inverse consistency error:
/// value(i) = |x(i) - x(backward(forward(i)))| over the source points x.
ScalarField compute_cice(std::span<const Vec3> source_points, const CorrespondenceMap& forward,
                         const CorrespondenceMap& backward);

inline ScalarField compute_cice(const TriangleMesh& source, const CorrespondenceMap& forward,
                                const CorrespondenceMap& backward) {
  return compute_cice(source.vertices(), forward, backward);
}

/// Lower median over the 1-ring plus self, applied `rounds` times.
ScalarField median_filter(const ScalarField& field, const AdjacencyIndex& adjacency, int rounds);

/// labels(i) = value(i) > threshold_mm. Throws ValidationError if the
/// threshold is not a positive finite number.
LabelField threshold_labels(const ScalarField& field, double threshold_mm);

/// Boolean median over the 1-ring plus self: true when more than half the
/// neighbourhood is true; an exact half keeps the vertex's own label.
LabelField majority_label_filter(const LabelField& labels, const AdjacencyIndex& adjacency, int rounds);

/// True when any vertex of the 1-ring plus self is true.
LabelField dilate_labels(const LabelField& labels, const AdjacencyIndex& adjacency, int rounds);

enum class LabelFilterMode { Majority, Dilate };

LabelField apply_label_filter(const LabelField& labels, const AdjacencyIndex& adjacency, int rounds,
                              LabelFilterMode mode);

}  // namespace meshgap
