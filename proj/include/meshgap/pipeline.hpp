#pragma once

#include <span>
#include <vector>

#include "meshgap/cice.hpp"
#include "meshgap/correspondence.hpp"
#include "meshgap/mesh.hpp"

namespace meshgap {

struct PipelineConfig {
  double threshold_mm = 5.5;
  int cice_filter_rounds = 1;
  int label_filter_rounds = 1;
  LabelFilterMode label_filter = LabelFilterMode::Majority;
  std::vector<PredictorSpec> predictors;
  int vote_min = 1;

  /// Throws ValidationError on an empty predictor list, vote_min outside
  /// [1, predictors], a non-positive threshold or non-positive rounds.
  void validate() const;
};

/// Threshold-independent part of one model's run.
struct ModelFields {
  ScalarField raw_cice;
  ScalarField filtered_cice;
};

struct ModelOutput {
  ScalarField raw_cice;
  ScalarField filtered_cice;
  LabelField thresholded;  // before the label filter
  LabelField labels;       // after the label filter
};

struct Classification {
  LabelField labels;
  std::vector<ModelOutput> models;
};

/// output(i) = (number of fields marking i missing) >= vote_min.
LabelField vote(std::span<const LabelField> fields, int vote_min);

/// Predicts both directions with `spec`, computes cICE on the source and
/// median-filters it.
ModelFields compute_model_fields(const TriangleMesh& source, const TriangleMesh& target,
                                 const AdjacencyIndex& source_adjacency, const PredictorSpec& spec,
                                 int cice_filter_rounds);

/// Threshold + label filter for one model.
LabelField label_model(const ModelFields& fields, const AdjacencyIndex& source_adjacency, double threshold_mm,
                       int label_filter_rounds, LabelFilterMode mode);

/// Full single- or multi-model classification of the source vertices.
/// Per-model branches run on up to `jobs` threads; output is independent
/// of the job count.
Classification classify_pair(const TriangleMesh& source, const TriangleMesh& target, const PipelineConfig& config,
                             int jobs = 1);

}  // namespace meshgap
