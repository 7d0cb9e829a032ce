#include "meshgap/pipeline.hpp"

#include <cmath>

#include "meshgap/errors.hpp"
#include "meshgap/parallel.hpp"

namespace meshgap {

void PipelineConfig::validate() const {
  if (predictors.empty()) throw ValidationError("at least one predictor is required");
  if (vote_min < 1 || static_cast<std::size_t>(vote_min) > predictors.size())
    throw ValidationError("vote_min " + std::to_string(vote_min) + " must lie in [1, " +
                          std::to_string(predictors.size()) + "]");
  if (!(threshold_mm > 0.0) || !std::isfinite(threshold_mm)) throw ValidationError("threshold must be positive");
  if (cice_filter_rounds < 1 || label_filter_rounds < 1) throw ValidationError("filter rounds must be positive");
  for (const auto& p : predictors) p.validate();
}

LabelField vote(std::span<const LabelField> fields, int vote_min) {
  if (fields.empty()) throw ValidationError("vote needs at least one label field");
  if (vote_min < 1 || static_cast<std::size_t>(vote_min) > fields.size())
    throw ValidationError("vote_min " + std::to_string(vote_min) + " must lie in [1, " +
                          std::to_string(fields.size()) + "]");
  const std::size_t n = fields.front().size();
  for (const LabelField& f : fields)
    if (f.size() != n) throw ValidationError("label fields passed to vote differ in length");

  LabelField out;
  out.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    int count = 0;
    for (const LabelField& f : fields) count += f.labels[i] ? 1 : 0;
    out.labels[i] = count >= vote_min;
  }
  return out;
}

ModelFields compute_model_fields(const TriangleMesh& source, const TriangleMesh& target,
                                 const AdjacencyIndex& source_adjacency, const PredictorSpec& spec,
                                 int cice_filter_rounds) {
  const CorrespondenceMap forward = predict(spec, source, target);
  const CorrespondenceMap backward = predict(spec.reversed(), target, source);
  ModelFields out;
  out.raw_cice = compute_cice(source, forward, backward);
  out.filtered_cice = median_filter(out.raw_cice, source_adjacency, cice_filter_rounds);
  return out;
}

LabelField label_model(const ModelFields& fields, const AdjacencyIndex& source_adjacency, double threshold_mm,
                       int label_filter_rounds, LabelFilterMode mode) {
  return apply_label_filter(threshold_labels(fields.filtered_cice, threshold_mm), source_adjacency,
                            label_filter_rounds, mode);
}

Classification classify_pair(const TriangleMesh& source, const TriangleMesh& target, const PipelineConfig& config,
                             int jobs) {
  config.validate();
  require_operational(source);
  require_operational(target);
  const AdjacencyIndex adjacency(source);

  Classification result;
  result.models.resize(config.predictors.size());
  parallel_for(config.predictors.size(), jobs, [&](std::size_t k) {
    ModelFields fields =
        compute_model_fields(source, target, adjacency, config.predictors[k], config.cice_filter_rounds);
    ModelOutput& out = result.models[k];
    out.thresholded = threshold_labels(fields.filtered_cice, config.threshold_mm);
    out.labels = apply_label_filter(out.thresholded, adjacency, config.label_filter_rounds, config.label_filter);
    out.raw_cice = std::move(fields.raw_cice);
    out.filtered_cice = std::move(fields.filtered_cice);
  });

  std::vector<LabelField> per_model;
  per_model.reserve(result.models.size());
  for (const ModelOutput& m : result.models) per_model.push_back(m.labels);
  result.labels = vote(per_model, config.vote_min);
  return result;
}

}  // namespace meshgap
