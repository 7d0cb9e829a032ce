#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "meshgap/cice.hpp"
#include "meshgap/mesh.hpp"
#include "meshgap/pipeline.hpp"

namespace meshgap {

struct BalancedAccuracy {
  /// Empty only when the label vectors are empty.
  std::optional<double> score;
  /// Truth held a single class; score is that class's recall alone.
  bool degenerate = false;
  std::optional<double> recall_missing;
  std::optional<double> recall_present;
};

/// Mean of per-class recall. Throws ValidationError on a length mismatch.
BalancedAccuracy balanced_accuracy(const LabelField& truth, const LabelField& predicted);

/// Inclusive uniform grid lo, ..., hi with `count` points.
std::vector<double> threshold_grid(double lo, double hi, int count);

/// Parses "<lo>:<hi>:<count>".
std::vector<double> parse_threshold_grid(std::string_view text);

/// 19 thresholds from 1 to 10 mm (0.5 mm steps).
inline std::vector<double> default_threshold_grid() { return threshold_grid(1.0, 10.0, 19); }

struct EvalPair {
  std::string id;
  std::string group;
  TriangleMesh source;
  TriangleMesh target;
  LabelField golden;
};

enum class SelectStatistic { Mean, Median };
enum class SweepMode { Single, Ensemble };

std::string to_string(SelectStatistic s);
std::string to_string(SweepMode m);

struct SweepReport {
  std::vector<double> thresholds;
  std::vector<std::string> pair_ids;
  std::vector<std::string> pair_groups;
  /// scores[pair][threshold]; empty when undefined.
  std::vector<std::vector<std::optional<double>>> scores;
  std::vector<std::vector<bool>> degenerate;
  std::vector<std::optional<double>> per_threshold_mean;
  std::vector<std::optional<double>> per_threshold_median;
  double best_threshold = 0.0;
  double best_score = 0.0;
  SweepMode mode = SweepMode::Single;
  SelectStatistic statistic = SelectStatistic::Mean;
  std::vector<std::string> predictors;
  int vote_min = 1;
  int cice_filter_rounds = 1;
  int label_filter_rounds = 1;
  LabelFilterMode label_filter = LabelFilterMode::Majority;

  friend bool operator==(const SweepReport&, const SweepReport&) = default;
};

/// Evaluates classify_pair over every (pair, threshold), holding the rest of
/// `base` fixed (its threshold is ignored). Per-model cICE fields are
/// computed once per pair and reused for all thresholds. The best threshold
/// maximizes the chosen aggregate; ties go to the smallest threshold.
SweepReport sweep(std::span<const EvalPair> pairs, const PipelineConfig& base, std::span<const double> thresholds,
                  SelectStatistic statistic = SelectStatistic::Mean, int jobs = 1);

nlohmann::json sweep_to_json(const SweepReport& report, const nlohmann::json& metadata = nlohmann::json::object());
SweepReport sweep_from_json(const nlohmann::json& j);

/// Writes sweep.json, sweep.csv and summary.txt into out_dir.
void render_report(const SweepReport& report, const std::filesystem::path& out_dir,
                   const nlohmann::json& metadata = nlohmann::json::object());

std::string format_sweep_csv(const SweepReport& report);
std::string format_summary(const SweepReport& report);

}  // namespace meshgap
