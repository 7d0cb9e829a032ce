#include "meshgap/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "manifest.hpp"
#include "meshgap/cice.hpp"
#include "meshgap/correspondence.hpp"
#include "meshgap/errors.hpp"
#include "meshgap/eval.hpp"
#include "meshgap/fields_io.hpp"
#include "meshgap/mesh_io.hpp"
#include "meshgap/pipeline.hpp"
#include "meshgap/resect.hpp"
#include "meshgap/shapes.hpp"
#include "../text_util.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace meshgap::cli {

namespace {

int resolve_jobs(std::optional<int> flag) {
  if (flag) {
    if (*flag < 1) throw ValidationError("--jobs must be at least 1");
    return *flag;
  }
  if (const char* env = std::getenv("MESHGAP_JOBS")) {
    int jobs = 0;
    if (!parse_number(std::string_view(env), jobs) || jobs < 1)
      throw ValidationError("MESHGAP_JOBS must be a positive integer, got '" + std::string(env) + "'");
    return jobs;
  }
  return 1;
}

void make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

TriangleMesh load_checked(const fs::path& path) {
  TriangleMesh mesh = load_mesh(path);
  if (const auto slivers = zero_area_face_count(mesh))
    std::cerr << "warning: " << path.string() << " has " << slivers << " zero-area faces\n";
  return mesh;
}

std::vector<PredictorSpec> parse_predictors(const std::vector<std::string>& raw) {
  std::vector<PredictorSpec> specs;
  for (const std::string& item : raw) {
    std::string_view rest = item;
    // ';' separates several specs inside one argument.
    while (!rest.empty()) {
      const auto semi = rest.find(';');
      const std::string_view one = trim(rest.substr(0, semi));
      if (!one.empty()) specs.push_back(PredictorSpec::parse(one));
      rest = semi == std::string_view::npos ? std::string_view{} : rest.substr(semi + 1);
    }
  }
  if (specs.empty()) throw ValidationError("at least one predictor is required");
  return specs;
}

json predictor_json(const std::vector<PredictorSpec>& specs) {
  json j = json::array();
  for (const auto& s : specs) j.push_back(s.to_string());
  return j;
}

json seeds_json(const std::vector<PredictorSpec>& specs) {
  json j = json::array();
  for (const auto& s : specs) j.push_back(s.seed ? json(*s.seed) : json());
  return j;
}

void add_file_inputs(RunManifest& manifest, const std::vector<PredictorSpec>& specs) {
  for (const auto& s : specs) {
    if (s.path) manifest.add_input(*s.path);
    if (s.backward_path) manifest.add_input(*s.backward_path);
  }
}

LabelFilterMode parse_label_filter(const std::string& s) {
  if (s == "majority") return LabelFilterMode::Majority;
  if (s == "dilate") return LabelFilterMode::Dilate;
  throw ValidationError("--label-filter must be 'majority' or 'dilate'");
}

std::string pair_stem(std::size_t k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "pair_%03zu", k);
  return buf;
}

json box_json(const CutBox& b) {
  return {{"center", {b.center.x, b.center.y, b.center.z}},
          {"half_extents", {b.half_extents.x, b.half_extents.y, b.half_extents.z}},
          {"rotation", b.rotation.m}};
}

// --- cice --------------------------------------------------------------------

struct CiceArgs {
  std::string source, target, predictor = "nn", out;
  std::optional<std::uint64_t> seed;
  int rounds = 1;
  std::optional<int> jobs;
};

int cmd_cice(const CiceArgs& a) {
  std::string spec_text = a.predictor;
  if (a.seed && spec_text.starts_with("nnjitter:") && spec_text.find("seed=") == std::string::npos)
    spec_text += ",seed=" + std::to_string(*a.seed);
  const PredictorSpec spec = PredictorSpec::parse(spec_text);
  if (a.rounds < 1) throw ValidationError("--rounds must be positive");

  const TriangleMesh source = load_checked(a.source);
  const TriangleMesh target = load_checked(a.target);
  const ModelFields fields = compute_model_fields(source, target, AdjacencyIndex(source), spec, a.rounds);

  const fs::path out(a.out);
  make_dir(out);
  save_scalar_csv(fields.raw_cice, out / "cice_raw.csv");
  save_scalar_csv(fields.filtered_cice, out / "cice_filtered.csv");

  RunManifest m;
  m.command = "cice";
  m.parameters = {{"source", a.source}, {"target", a.target}, {"predictor", spec.to_string()}, {"rounds", a.rounds}};
  m.seeds = {{"predictor", spec.seed ? json(*spec.seed) : json()}};
  m.add_input(a.source);
  m.add_input(a.target);
  add_file_inputs(m, {spec});
  m.add_output(out, "cice_raw.csv");
  m.add_output(out, "cice_filtered.csv");
  m.write(out);
  return 0;
}

// --- classify ----------------------------------------------------------------

struct ClassifyArgs {
  std::string source, target, out_dir, label_filter = "majority";
  double threshold_mm = 5.5;
  std::vector<std::string> predictors{"nn"};
  std::optional<int> vote_min;
  int cice_rounds = 1, label_rounds = 1;
  std::optional<int> jobs;
};

int cmd_classify(const ClassifyArgs& a) {
  PipelineConfig config;
  config.threshold_mm = a.threshold_mm;
  config.predictors = parse_predictors(a.predictors);
  config.vote_min = a.vote_min.value_or(std::min<int>(3, static_cast<int>(config.predictors.size())));
  config.cice_filter_rounds = a.cice_rounds;
  config.label_filter_rounds = a.label_rounds;
  config.label_filter = parse_label_filter(a.label_filter);
  config.validate();
  const int jobs = resolve_jobs(a.jobs);

  const TriangleMesh source = load_checked(a.source);
  const TriangleMesh target = load_checked(a.target);
  const Classification result = classify_pair(source, target, config, jobs);

  const fs::path out(a.out_dir);
  make_dir(out);
  RunManifest m;
  m.command = "classify";
  save_label_csv(result.labels, out / "labels.csv");
  m.add_output(out, "labels.csv");
  for (std::size_t k = 0; k < result.models.size(); ++k) {
    const std::string prefix = "model_" + std::to_string(k);
    save_scalar_csv(result.models[k].raw_cice, out / (prefix + "_cice.csv"));
    save_scalar_csv(result.models[k].filtered_cice, out / (prefix + "_cice_filtered.csv"));
    save_label_csv(result.models[k].labels, out / (prefix + "_labels.csv"));
    for (const char* suffix : {"_cice.csv", "_cice_filtered.csv", "_labels.csv"}) m.add_output(out, prefix + suffix);
  }

  m.parameters = {{"source", a.source},
                  {"target", a.target},
                  {"threshold_mm", config.threshold_mm},
                  {"predictors", predictor_json(config.predictors)},
                  {"vote_min", config.vote_min},
                  {"cice_filter_rounds", config.cice_filter_rounds},
                  {"label_filter_rounds", config.label_filter_rounds},
                  {"label_filter", a.label_filter},
                  {"mode", config.predictors.size() == 1 ? "single" : "ensemble"}};
  m.seeds = {{"predictors", seeds_json(config.predictors)}};
  m.add_input(a.source);
  m.add_input(a.target);
  add_file_inputs(m, config.predictors);
  m.extra["missing_count"] = result.labels.missing_count();
  m.extra["vertex_count"] = result.labels.size();
  m.write(out);
  std::cout << "missing " << result.labels.missing_count() << " of " << result.labels.size() << " vertices\n";
  return 0;
}

// --- resect ------------------------------------------------------------------

struct ResectArgs {
  std::string mesh, source, out_dir, box_shape = "slab";
  std::size_t count = 35;
  double box_width_mm = 30.0, fraction_lo = 0.11, fraction_hi = 0.28;
  std::uint64_t seed = 1;
  std::size_t volume_samples = 50'000;
  std::vector<std::string> golden_predictors;
  int golden_vote_min = 3;
  std::optional<int> jobs;
};

int cmd_resect(const ResectArgs& a) {
  SimulationOptions options;
  options.count = a.count;
  options.box_width_mm = a.box_width_mm;
  options.fraction_lo = a.fraction_lo;
  options.fraction_hi = a.fraction_hi;
  options.seed = a.seed;
  options.plan.volume_samples = a.volume_samples;
  if (a.box_shape == "slab") options.plan.shape = BoxShape::Slab;
  else if (a.box_shape == "cube") options.plan.shape = BoxShape::Cube;
  else throw ValidationError("--box-shape must be 'slab' or 'cube'");
  options.golden_predictors =
      a.golden_predictors.empty() ? default_golden_predictors() : parse_predictors(a.golden_predictors);
  options.golden_vote_min = a.golden_vote_min;
  options.jobs = resolve_jobs(a.jobs);
  if (a.count < 1) throw ValidationError("--count must be at least 1");
  if (!(0 < a.fraction_lo && a.fraction_lo < a.fraction_hi && a.fraction_hi < 1))
    throw ValidationError("fractions must satisfy 0 < lo < hi < 1");

  const TriangleMesh complete = load_checked(a.mesh);
  const std::string source_path = a.source.empty() ? a.mesh : a.source;
  const TriangleMesh source = a.source.empty() ? complete : load_checked(a.source);

  const auto pairs = simulate_resections(source, complete, options);

  const fs::path out(a.out_dir);
  make_dir(out);
  RunManifest m;
  m.command = "resect";
  save_mesh(source, out / "source.off");
  save_mesh(complete, out / "complete_target.off");
  m.add_output(out, "source.off");
  m.add_output(out, "complete_target.off");

  const std::string group = fs::path(a.mesh).stem().string();
  json cuts = json::array();
  json entries = json::array();
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& p = pairs[k];
    const std::string stem = pair_stem(k);
    save_mesh(p.resection.cut_mesh, out / (stem + "_target.off"));
    save_index_csv(p.resection.removed_vertex_indices, out / (stem + "_removed.csv"));
    save_label_csv(p.golden, out / (stem + "_golden.csv"));
    for (const char* suffix : {"_target.off", "_removed.csv", "_golden.csv"}) m.add_output(out, stem + suffix);
    cuts.push_back(box_json(p.box));
    entries.push_back({{"id", stem},
                       {"group", group},
                       {"source", "source.off"},
                       {"complete_target", "complete_target.off"},
                       {"target", stem + "_target.off"},
                       {"removed", stem + "_removed.csv"},
                       {"golden", stem + "_golden.csv"},
                       {"removed_volume_fraction", p.resection.removed_volume_fraction},
                       {"removed_vertex_fraction", p.resection.removed_vertex_fraction},
                       {"golden_missing_count", p.golden.missing_count()},
                       {"box", box_json(p.box)}});
  }
  write_text_file(out / "cuts.json", cuts.dump(2) + "\n");
  write_text_file(out / "pairs.json", json{{"pairs", entries}}.dump(2) + "\n");
  m.add_output(out, "cuts.json");
  m.add_output(out, "pairs.json");

  m.parameters = {{"mesh", a.mesh},
                  {"source", source_path},
                  {"count", a.count},
                  {"box_width_mm", a.box_width_mm},
                  {"box_shape", a.box_shape},
                  {"fraction_lo", a.fraction_lo},
                  {"fraction_hi", a.fraction_hi},
                  {"volume_samples", a.volume_samples},
                  {"golden_predictors", predictor_json(options.golden_predictors)},
                  {"golden_vote_min", a.golden_vote_min}};
  m.seeds = {{"plan", a.seed}, {"golden_predictors", seeds_json(options.golden_predictors)}};
  m.add_input(a.mesh);
  if (!a.source.empty()) m.add_input(a.source);
  json fractions = json::array();
  for (const auto& p : pairs)
    fractions.push_back({{"volume", p.resection.removed_volume_fraction}, {"vertex", p.resection.removed_vertex_fraction}});
  m.extra["fractions"] = fractions;
  m.write(out);
  std::cout << "wrote " << pairs.size() << " pairs to " << out.string() << "\n";
  return 0;
}

// --- sweep -------------------------------------------------------------------

struct SweepArgs {
  std::string pairs_manifest, thresholds = "1:10:19", select = "mean", out_dir, label_filter = "majority";
  std::vector<std::string> predictors{"nn"};
  std::optional<int> vote_min;
  int cice_rounds = 1, label_rounds = 1;
  std::optional<int> jobs;
};

int cmd_sweep(const SweepArgs& a) {
  PipelineConfig config;
  config.predictors = parse_predictors(a.predictors);
  config.vote_min = a.vote_min.value_or(std::min<int>(3, static_cast<int>(config.predictors.size())));
  config.cice_filter_rounds = a.cice_rounds;
  config.label_filter_rounds = a.label_rounds;
  config.label_filter = parse_label_filter(a.label_filter);
  config.validate();
  const auto thresholds = parse_threshold_grid(a.thresholds);
  SelectStatistic statistic;
  if (a.select == "mean") statistic = SelectStatistic::Mean;
  else if (a.select == "median") statistic = SelectStatistic::Median;
  else throw ValidationError("--select must be 'mean' or 'median'");
  const int jobs = resolve_jobs(a.jobs);

  const fs::path manifest_path(a.pairs_manifest);
  json manifest;
  try {
    manifest = json::parse(read_text_file(manifest_path));
  } catch (const json::exception& e) {
    throw ParseError(manifest_path.string() + ": " + e.what());
  }
  if (!manifest.contains("pairs") || !manifest["pairs"].is_array())
    throw ParseError(manifest_path.string() + ": expected an object with a 'pairs' array");
  if (manifest["pairs"].empty()) throw ValidationError(manifest_path.string() + ": pairs manifest is empty");

  RunManifest m;
  m.command = "sweep";
  m.add_input(manifest_path);
  const fs::path base = manifest_path.parent_path();
  std::vector<EvalPair> pairs;
  try {
    for (const auto& entry : manifest["pairs"]) {
      EvalPair p;
      p.id = entry.at("id").get<std::string>();
      p.group = entry.value("group", std::string());
      const fs::path source = base / entry.at("source").get<std::string>();
      const fs::path target = base / entry.at("target").get<std::string>();
      const fs::path golden = base / entry.at("golden").get<std::string>();
      p.source = load_checked(source);
      p.target = load_checked(target);
      p.golden = load_label_csv(golden);
      for (const auto& f : {source, target, golden}) m.add_input(f);
      pairs.push_back(std::move(p));
    }
  } catch (const json::exception& e) {
    throw ParseError(manifest_path.string() + ": " + e.what());
  }

  const SweepReport report = sweep(pairs, config, thresholds, statistic, jobs);
  const fs::path out(a.out_dir);
  make_dir(out);
  const json metadata = {{"pairs_manifest_sha256", sha256_file(manifest_path)},
                         {"seeds", seeds_json(config.predictors)}};
  render_report(report, out, metadata);

  m.parameters = {{"pairs_manifest", a.pairs_manifest},
                  {"thresholds", a.thresholds},
                  {"predictors", predictor_json(config.predictors)},
                  {"vote_min", config.vote_min},
                  {"select", a.select},
                  {"cice_filter_rounds", config.cice_filter_rounds},
                  {"label_filter_rounds", config.label_filter_rounds},
                  {"label_filter", a.label_filter}};
  m.seeds = {{"predictors", seeds_json(config.predictors)}};
  for (const char* f : {"sweep.json", "sweep.csv", "summary.txt"}) m.add_output(out, f);
  m.extra["selection_statistic"] = a.select;
  m.extra["best_threshold_mm"] = report.best_threshold;
  m.extra["best_score"] = report.best_score;
  m.write(out);
  std::cout << "best_threshold_mm=" << format_double(report.best_threshold)
            << " best_score=" << format_double(report.best_score) << " (" << a.select << ")\n";
  return 0;
}

// --- synth -------------------------------------------------------------------

struct SynthArgs {
  std::string shape = "icosphere", out;
  double radius = 50.0, rescan_noise_mm = 0.0;
  int subdivisions = 4;
  std::optional<std::uint64_t> rescan_seed;
};

int cmd_synth(const SynthArgs& a) {
  TriangleMesh mesh;
  if (a.shape == "icosphere") {
    if (a.subdivisions < 0 || a.subdivisions > 7) throw ValidationError("--subdivisions must lie in [0, 7]");
    if (!(a.radius > 0)) throw ValidationError("--radius must be positive");
    mesh = make_icosphere(a.radius, a.subdivisions);
  } else if (a.shape == "cube") {
    mesh = make_unit_cube();
  } else {
    throw ValidationError("--shape must be 'icosphere' or 'cube'");
  }
  if (a.rescan_seed) mesh = rescanned(mesh, a.rescan_noise_mm, *a.rescan_seed);
  if (const auto parent = fs::path(a.out).parent_path(); !parent.empty()) make_dir(parent);
  save_mesh(mesh, a.out);
  return 0;
}

void add_jobs(CLI::App* sub, std::optional<int>& jobs) {
  sub->add_option("--jobs", jobs, "Worker threads (default: $MESHGAP_JOBS or 1)");
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Detect source-mesh vertices missing from a target mesh via correspondence round trips"};
  app.require_subcommand(1);

  CiceArgs cice;
  auto* c = app.add_subcommand("cice", "Compute raw and median-filtered cICE for a mesh pair");
  c->add_option("--source", cice.source, "Source mesh (.off/.ply)")->required();
  c->add_option("--target", cice.target, "Target mesh (.off/.ply)")->required();
  c->add_option("--predictor", cice.predictor, "identity | nn | nnjitter:sigma=<mm>,seed=<n> | file:<path>")
      ->capture_default_str();
  c->add_option("--seed", cice.seed, "Seed for nnjitter when the predictor string omits one");
  c->add_option("--rounds", cice.rounds, "Median filter rounds")->capture_default_str();
  c->add_option("--out", cice.out, "Output directory")->required();
  add_jobs(c, cice.jobs);

  ClassifyArgs cls;
  auto* k = app.add_subcommand("classify", "Label missing source vertices");
  k->add_option("--source", cls.source)->required();
  k->add_option("--target", cls.target)->required();
  k->add_option("--threshold-mm", cls.threshold_mm)->capture_default_str();
  k->add_option("--predictors", cls.predictors, "Predictor specs (repeat or separate with ';')")
      ->capture_default_str();
  k->add_option("--vote-min", cls.vote_min, "Models that must agree (default min(3, #predictors))");
  k->add_option("--cice-rounds", cls.cice_rounds)->capture_default_str();
  k->add_option("--label-rounds", cls.label_rounds)->capture_default_str();
  k->add_option("--label-filter", cls.label_filter, "majority | dilate")->capture_default_str();
  k->add_option("--out-dir", cls.out_dir)->required();
  add_jobs(k, cls.jobs);

  ResectArgs res;
  auto* r = app.add_subcommand("resect", "Simulate box resections and project golden standards");
  r->add_option("--mesh", res.mesh, "Complete target mesh to cut")->required();
  r->add_option("--source", res.source, "Source mesh (default: --mesh)");
  r->add_option("--count", res.count)->capture_default_str();
  r->add_option("--box-width-mm", res.box_width_mm)->capture_default_str();
  r->add_option("--box-shape", res.box_shape, "slab | cube")->capture_default_str();
  r->add_option("--fraction-lo", res.fraction_lo)->capture_default_str();
  r->add_option("--fraction-hi", res.fraction_hi)->capture_default_str();
  r->add_option("--seed", res.seed)->capture_default_str();
  r->add_option("--volume-samples", res.volume_samples)->capture_default_str();
  r->add_option("--golden-predictors", res.golden_predictors, "Default: nnjitter sigma 1, seeds 1..5");
  r->add_option("--golden-vote-min", res.golden_vote_min)->capture_default_str();
  r->add_option("--out-dir", res.out_dir)->required();
  add_jobs(r, res.jobs);

  SweepArgs sw;
  auto* s = app.add_subcommand("sweep", "Balanced-accuracy threshold sweep over a pairs manifest");
  s->add_option("--pairs-manifest", sw.pairs_manifest)->required();
  s->add_option("--thresholds", sw.thresholds, "<lo>:<hi>:<count>")->capture_default_str();
  s->add_option("--predictors", sw.predictors)->capture_default_str();
  s->add_option("--vote-min", sw.vote_min);
  s->add_option("--select", sw.select, "mean | median")->capture_default_str();
  s->add_option("--cice-rounds", sw.cice_rounds)->capture_default_str();
  s->add_option("--label-rounds", sw.label_rounds)->capture_default_str();
  s->add_option("--label-filter", sw.label_filter)->capture_default_str();
  s->add_option("--out-dir", sw.out_dir)->required();
  add_jobs(s, sw.jobs);

  SynthArgs sy;
  auto* y = app.add_subcommand("synth", "Write a synthetic fixture mesh");
  y->add_option("--shape", sy.shape, "icosphere | cube")->capture_default_str();
  y->add_option("--radius", sy.radius)->capture_default_str();
  y->add_option("--subdivisions", sy.subdivisions)->capture_default_str();
  y->add_option("--rescan-seed", sy.rescan_seed, "Apply a seeded rotation + vertex noise");
  y->add_option("--rescan-noise-mm", sy.rescan_noise_mm)->capture_default_str();
  y->add_option("--out", sy.out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (c->parsed()) return cmd_cice(cice);
    if (k->parsed()) return cmd_classify(cls);
    if (r->parsed()) return cmd_resect(res);
    if (s->parsed()) return cmd_sweep(sw);
    if (y->parsed()) return cmd_synth(sy);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

int run(const std::vector<std::string>& args) {
  std::vector<std::string> storage;
  storage.reserve(args.size() + 1);
  storage.emplace_back("meshgap");
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  argv.push_back(nullptr);
  return run(static_cast<int>(storage.size()), argv.data());
}

}  // namespace meshgap::cli
