#include "meshgap/eval.hpp"

#include <algorithm>
#include <cmath>

#include "meshgap/errors.hpp"
#include "meshgap/parallel.hpp"
#include "text_util.hpp"

namespace meshgap {

BalancedAccuracy balanced_accuracy(const LabelField& truth, const LabelField& predicted) {
  if (truth.size() != predicted.size())
    throw ValidationError("truth has " + std::to_string(truth.size()) + " labels but prediction has " +
                          std::to_string(predicted.size()));
  std::size_t tp = 0, fn = 0, tn = 0, fp = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool t = truth.labels[i], p = predicted.labels[i];
    if (t) (p ? tp : fn)++;
    else (p ? fp : tn)++;
  }
  BalancedAccuracy out;
  if (tp + fn > 0) out.recall_missing = static_cast<double>(tp) / static_cast<double>(tp + fn);
  if (tn + fp > 0) out.recall_present = static_cast<double>(tn) / static_cast<double>(tn + fp);
  if (out.recall_missing && out.recall_present) {
    out.score = (*out.recall_missing + *out.recall_present) / 2.0;
  } else if (out.recall_missing || out.recall_present) {
    out.degenerate = true;
    out.score = out.recall_missing ? out.recall_missing : out.recall_present;
  }
  return out;
}

std::vector<double> threshold_grid(double lo, double hi, int count) {
  if (count < 1) throw ValidationError("threshold grid needs at least one point");
  if (!(lo > 0) || !std::isfinite(lo) || !std::isfinite(hi)) throw ValidationError("thresholds must be positive");
  if (count == 1) {
    if (lo != hi) throw ValidationError("a one-point grid needs lo == hi");
    return {lo};
  }
  if (!(hi > lo)) throw ValidationError("threshold grid needs hi > lo");
  std::vector<double> grid(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) grid[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (count - 1);
  grid.back() = hi;
  return grid;
}

std::vector<double> parse_threshold_grid(std::string_view text) {
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string_view::npos ? c1 : text.find(':', c1 + 1);
  double lo = 0, hi = 0;
  int count = 0;
  if (c2 == std::string_view::npos || !parse_number(trim(text.substr(0, c1)), lo) ||
      !parse_number(trim(text.substr(c1 + 1, c2 - c1 - 1)), hi) || !parse_number(trim(text.substr(c2 + 1)), count))
    throw ValidationError("threshold grid must look like <lo>:<hi>:<count>, got '" + std::string(text) + "'");
  return threshold_grid(lo, hi, count);
}

std::string to_string(SelectStatistic s) { return s == SelectStatistic::Mean ? "mean" : "median"; }
std::string to_string(SweepMode m) { return m == SweepMode::Single ? "single" : "ensemble"; }

namespace {

std::optional<double> mean_of(std::vector<double> v) {
  if (v.empty()) return std::nullopt;
  double sum = 0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

std::optional<double> median_of(std::vector<double> v) {
  if (v.empty()) return std::nullopt;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

std::string label_filter_name(LabelFilterMode m) { return m == LabelFilterMode::Majority ? "majority" : "dilate"; }

}  // namespace

SweepReport sweep(std::span<const EvalPair> pairs, const PipelineConfig& base, std::span<const double> thresholds,
                  SelectStatistic statistic, int jobs) {
  if (pairs.empty()) throw ValidationError("sweep needs at least one mesh pair");
  if (thresholds.empty()) throw ValidationError("sweep needs at least one threshold");
  for (std::size_t k = 0; k < thresholds.size(); ++k) {
    if (!(thresholds[k] > 0)) throw ValidationError("thresholds must be positive");
    if (k > 0 && !(thresholds[k] > thresholds[k - 1])) throw ValidationError("thresholds must be strictly increasing");
  }
  PipelineConfig config = base;
  config.threshold_mm = thresholds.front();
  config.validate();
  for (const EvalPair& p : pairs) {
    require_operational(p.source);
    require_operational(p.target);
    if (p.golden.size() != p.source.vertex_count())
      throw ValidationError("pair '" + p.id + "': golden standard has " + std::to_string(p.golden.size()) +
                            " labels but the source has " + std::to_string(p.source.vertex_count()) + " vertices");
  }

  const std::size_t n_pairs = pairs.size();
  const std::size_t n_models = config.predictors.size();
  std::vector<AdjacencyIndex> adjacency(n_pairs);
  parallel_for(n_pairs, jobs, [&](std::size_t p) { adjacency[p] = AdjacencyIndex(pairs[p].source); });

  std::vector<ModelFields> fields(n_pairs * n_models);
  parallel_for(fields.size(), jobs, [&](std::size_t task) {
    const std::size_t p = task / n_models, m = task % n_models;
    fields[task] = compute_model_fields(pairs[p].source, pairs[p].target, adjacency[p], config.predictors[m],
                                        config.cice_filter_rounds);
  });

  SweepReport report;
  report.thresholds.assign(thresholds.begin(), thresholds.end());
  report.mode = n_models == 1 ? SweepMode::Single : SweepMode::Ensemble;
  report.statistic = statistic;
  report.vote_min = config.vote_min;
  report.cice_filter_rounds = config.cice_filter_rounds;
  report.label_filter_rounds = config.label_filter_rounds;
  report.label_filter = config.label_filter;
  for (const auto& spec : config.predictors) report.predictors.push_back(spec.to_string());
  for (const EvalPair& p : pairs) {
    report.pair_ids.push_back(p.id);
    report.pair_groups.push_back(p.group);
  }
  report.scores.assign(n_pairs, std::vector<std::optional<double>>(thresholds.size()));
  report.degenerate.assign(n_pairs, std::vector<bool>(thresholds.size(), false));

  parallel_for(n_pairs * thresholds.size(), jobs, [&](std::size_t task) {
    const std::size_t p = task / thresholds.size(), t = task % thresholds.size();
    std::vector<LabelField> per_model;
    per_model.reserve(n_models);
    for (std::size_t m = 0; m < n_models; ++m)
      per_model.push_back(label_model(fields[p * n_models + m], adjacency[p], thresholds[t],
                                      config.label_filter_rounds, config.label_filter));
    const BalancedAccuracy bas = balanced_accuracy(pairs[p].golden, vote(per_model, config.vote_min));
    report.scores[p][t] = bas.score;
    report.degenerate[p][t] = bas.degenerate;
  });

  bool have_best = false;
  for (std::size_t t = 0; t < thresholds.size(); ++t) {
    std::vector<double> column;
    for (std::size_t p = 0; p < n_pairs; ++p)
      if (report.scores[p][t]) column.push_back(*report.scores[p][t]);
    report.per_threshold_mean.push_back(mean_of(column));
    report.per_threshold_median.push_back(median_of(column));
    const auto& aggregate =
        statistic == SelectStatistic::Mean ? report.per_threshold_mean.back() : report.per_threshold_median.back();
    if (aggregate && (!have_best || *aggregate > report.best_score)) {
      have_best = true;
      report.best_score = *aggregate;
      report.best_threshold = thresholds[t];
    }
  }
  if (!have_best) throw ValidationError("no pair produced a defined balanced accuracy");
  return report;
}

// --- serialisation -----------------------------------------------------------

namespace {

nlohmann::json optional_to_json(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(); }

std::optional<double> optional_from_json(const nlohmann::json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

}  // namespace

nlohmann::json sweep_to_json(const SweepReport& r, const nlohmann::json& metadata) {
  nlohmann::json j;
  j["mode"] = to_string(r.mode);
  j["selection_statistic"] = to_string(r.statistic);
  j["thresholds_mm"] = r.thresholds;
  j["best_threshold_mm"] = r.best_threshold;
  j["best_score"] = r.best_score;
  j["predictors"] = r.predictors;
  j["vote_min"] = r.vote_min;
  j["cice_filter_rounds"] = r.cice_filter_rounds;
  j["label_filter_rounds"] = r.label_filter_rounds;
  j["label_filter"] = label_filter_name(r.label_filter);

  nlohmann::json pairs = nlohmann::json::array();
  for (std::size_t p = 0; p < r.pair_ids.size(); ++p) {
    nlohmann::json scores = nlohmann::json::array();
    for (const auto& s : r.scores[p]) scores.push_back(optional_to_json(s));
    nlohmann::json degenerate = nlohmann::json::array();
    for (bool d : r.degenerate[p]) degenerate.push_back(d);
    pairs.push_back({{"id", r.pair_ids[p]}, {"group", r.pair_groups[p]}, {"bas", scores}, {"degenerate", degenerate}});
  }
  j["pairs"] = pairs;

  nlohmann::json mean = nlohmann::json::array(), median = nlohmann::json::array();
  for (const auto& v : r.per_threshold_mean) mean.push_back(optional_to_json(v));
  for (const auto& v : r.per_threshold_median) median.push_back(optional_to_json(v));
  j["per_threshold_mean"] = mean;
  j["per_threshold_median"] = median;
  j["metadata"] = metadata;
  return j;
}

SweepReport sweep_from_json(const nlohmann::json& j) {
  try {
    SweepReport r;
    r.mode = j.at("mode").get<std::string>() == "single" ? SweepMode::Single : SweepMode::Ensemble;
    r.statistic = j.at("selection_statistic").get<std::string>() == "mean" ? SelectStatistic::Mean
                                                                          : SelectStatistic::Median;
    r.thresholds = j.at("thresholds_mm").get<std::vector<double>>();
    r.best_threshold = j.at("best_threshold_mm").get<double>();
    r.best_score = j.at("best_score").get<double>();
    r.predictors = j.at("predictors").get<std::vector<std::string>>();
    r.vote_min = j.at("vote_min").get<int>();
    r.cice_filter_rounds = j.at("cice_filter_rounds").get<int>();
    r.label_filter_rounds = j.at("label_filter_rounds").get<int>();
    r.label_filter =
        j.at("label_filter").get<std::string>() == "majority" ? LabelFilterMode::Majority : LabelFilterMode::Dilate;
    for (const auto& p : j.at("pairs")) {
      r.pair_ids.push_back(p.at("id").get<std::string>());
      r.pair_groups.push_back(p.at("group").get<std::string>());
      std::vector<std::optional<double>> scores;
      for (const auto& s : p.at("bas")) scores.push_back(optional_from_json(s));
      r.scores.push_back(std::move(scores));
      std::vector<bool> degenerate;
      for (const auto& d : p.at("degenerate")) degenerate.push_back(d.get<bool>());
      r.degenerate.push_back(std::move(degenerate));
    }
    for (const auto& v : j.at("per_threshold_mean")) r.per_threshold_mean.push_back(optional_from_json(v));
    for (const auto& v : j.at("per_threshold_median")) r.per_threshold_median.push_back(optional_from_json(v));
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed sweep report: ") + e.what());
  }
}

std::string format_sweep_csv(const SweepReport& r) {
  std::string out = "pair,pair_group,threshold,bas,degenerate\n";
  for (std::size_t p = 0; p < r.pair_ids.size(); ++p)
    for (std::size_t t = 0; t < r.thresholds.size(); ++t)
      out += r.pair_ids[p] + "," + r.pair_groups[p] + "," + format_double(r.thresholds[t]) + "," +
             (r.scores[p][t] ? format_double(*r.scores[p][t]) : std::string("NA")) + "," +
             (r.degenerate[p][t] ? "1" : "0") + "\n";
  return out;
}

std::string format_summary(const SweepReport& r) {
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string("NA"); };
  std::string out;
  out += "mode=" + to_string(r.mode) + "\n";
  out += "selection_statistic=" + to_string(r.statistic) + "\n";
  out += "pairs=" + std::to_string(r.pair_ids.size()) + "\n";
  out += "best_threshold_mm=" + format_double(r.best_threshold) + "\n";
  out += "best_score=" + format_double(r.best_score) + "\n";
  out += "\nthreshold_mm,mean_bas,median_bas\n";
  for (std::size_t t = 0; t < r.thresholds.size(); ++t)
    out += format_double(r.thresholds[t]) + "," + opt(r.per_threshold_mean[t]) + "," +
           opt(r.per_threshold_median[t]) + "\n";
  return out;
}

void render_report(const SweepReport& report, const std::filesystem::path& out_dir, const nlohmann::json& metadata) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + out_dir.string() + ": " + ec.message());
  write_text_file(out_dir / "sweep.json", sweep_to_json(report, metadata).dump(2) + "\n");
  write_text_file(out_dir / "sweep.csv", format_sweep_csv(report));
  write_text_file(out_dir / "summary.txt", format_summary(report));
}

}  // namespace meshgap
