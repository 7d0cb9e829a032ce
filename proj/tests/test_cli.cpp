#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "meshgap/cice.hpp"
#include "meshgap/cli.hpp"
#include "meshgap/fields_io.hpp"
#include "meshgap/mesh_io.hpp"

using meshgap::cli::run;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("meshgap_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

json read_json(const fs::path& p) {
  std::ifstream in(p);
  return json::parse(in);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Fixture {
  fs::path dir, source, target;
};

const Fixture& fixture() {
  static const Fixture f = [] {
    Fixture x{scratch("fixture"), {}, {}};
    x.source = x.dir / "source.off";
    x.target = x.dir / "target.off";
    REQUIRE(run({"synth", "--subdivisions", "3", "--out", x.source.string()}) == 0);
    REQUIRE(run({"synth", "--subdivisions", "3", "--rescan-seed", "4", "--out", x.target.string()}) == 0);
    return x;
  }();
  return f;
}

}  // namespace

TEST_CASE("help and usage errors") {
  CHECK(run({"--help"}) == 0);
  CHECK(run({}) == 2);
  CHECK(run({"bogus"}) == 2);
  CHECK(run({"cice", "--source", "x.off"}) == 2);
}

TEST_CASE("cice with the identity predictor") {
  const auto& f = fixture();
  const auto out = scratch("cice");
  CHECK(run({"cice", "--source", f.source.string(), "--target", f.source.string(), "--predictor", "identity", "--out",
             out.string()}) == 0);
  const auto raw = meshgap::load_scalar_csv(out / "cice_raw.csv");
  CHECK(raw.values.size() == meshgap::load_mesh(f.source).vertex_count());
  for (double v : raw.values) CHECK(v == 0.0);
  CHECK(fs::exists(out / "cice_filtered.csv"));
  const json m = read_json(out / "manifest.json");
  CHECK(m.at("command") == "cice");
  CHECK(m.at("output_digests").contains("cice_raw.csv"));
  CHECK(m.contains("timestamp"));
}

TEST_CASE("cice input errors exit with 2") {
  const auto& f = fixture();
  const auto out = scratch("cice_err");
  CHECK(run({"cice", "--source", (f.dir / "nope.off").string(), "--target", f.source.string(), "--out",
             out.string()}) == 2);
  CHECK(run({"cice", "--source", f.source.string(), "--target", f.source.string(), "--rounds", "0", "--out",
             out.string()}) == 2);
  CHECK(run({"cice", "--source", f.source.string(), "--target", f.source.string(), "--predictor", "magic", "--out",
             out.string()}) == 2);
}

TEST_CASE("classify ensemble and single mode") {
  const auto& f = fixture();
  const auto out = scratch("classify");
  std::vector<std::string> args{"classify", "--source", f.source.string(), "--target", f.target.string(),
                                "--threshold-mm", "5.5", "--vote-min", "3", "--out-dir", out.string(),
                                "--predictors"};
  for (int s = 1; s <= 5; ++s) args.push_back("nnjitter:sigma=1,seed=" + std::to_string(s));
  CHECK(run(args) == 0);
  const auto labels = meshgap::load_label_csv(out / "labels.csv");
  CHECK(labels.labels.size() == meshgap::load_mesh(f.source).vertex_count());
  for (int k = 0; k < 5; ++k) CHECK(fs::exists(out / ("model_" + std::to_string(k) + "_labels.csv")));

  args[8] = "6";
  CHECK(run(args) == 2);

  const auto single = scratch("classify_single");
  CHECK(run({"classify", "--source", f.source.string(), "--target", f.target.string(), "--predictors", "nn",
             "--out-dir", single.string()}) == 0);
  CHECK(read_json(single / "manifest.json").at("parameters").at("vote_min") == 1);
}

TEST_CASE("resect, sweep and reproducibility") {
  const auto& f = fixture();
  const auto a = scratch("resect_a");
  const auto b = scratch("resect_b");
  const std::vector<std::string> common{"resect",          "--mesh",  f.target.string(), "--source",
                                        f.source.string(), "--seed",  "9",               "--volume-samples",
                                        "10000"};
  auto args = common;
  args.insert(args.end(), {"--out-dir", a.string()});
  REQUIRE(run(args) == 0);
  args = common;
  args.insert(args.end(), {"--out-dir", b.string(), "--jobs", "3"});
  REQUIRE(run(args) == 0);

  const json pairs = read_json(a / "pairs.json");
  REQUIRE(pairs.at("pairs").size() == 35);
  for (const auto& p : pairs.at("pairs")) {
    CHECK(fs::exists(a / p.at("target").get<std::string>()));
    CHECK(fs::exists(a / p.at("golden").get<std::string>()));
  }
  CHECK(read_json(a / "manifest.json").at("output_digests") == read_json(b / "manifest.json").at("output_digests"));
  CHECK(read_json(a / "manifest.json").at("fractions").size() == 35);

  const auto s_mean = scratch("sweep_mean");
  REQUIRE(run({"sweep", "--pairs-manifest", (a / "pairs.json").string(), "--out-dir", s_mean.string()}) == 0);
  const json report = read_json(s_mean / "sweep.json");
  CHECK(report.at("thresholds_mm").size() == 19);
  CHECK(read_json(s_mean / "manifest.json").at("selection_statistic") == "mean");
  CHECK(slurp(s_mean / "summary.txt").find("best_threshold_mm=") != std::string::npos);

  const auto s_median = scratch("sweep_median");
  REQUIRE(run({"sweep", "--pairs-manifest", (a / "pairs.json").string(), "--select", "median", "--jobs", "4",
               "--out-dir", s_median.string()}) == 0);
  CHECK(read_json(s_median / "manifest.json").at("selection_statistic") == "median");
  CHECK(read_json(s_median / "sweep.json").at("pairs") == report.at("pairs"));
}

TEST_CASE("resect with an infeasible fraction range exits with 1") {
  const auto& f = fixture();
  const auto out = scratch("resect_bad");
  CHECK(run({"resect", "--mesh", f.target.string(), "--count", "2", "--fraction-lo", "0.99", "--fraction-hi",
             "0.999", "--volume-samples", "2000", "--out-dir", out.string()}) == 1);
  CHECK(run({"resect", "--mesh", f.target.string(), "--fraction-lo", "0.5", "--fraction-hi", "0.2", "--out-dir",
             out.string()}) == 2);
}

TEST_CASE("sweep with an empty pairs manifest exits with 2") {
  const auto dir = scratch("sweep_empty");
  std::ofstream(dir / "pairs.json") << R"({"pairs": []})";
  CHECK(run({"sweep", "--pairs-manifest", (dir / "pairs.json").string(), "--out-dir", (dir / "out").string()}) == 2);
  CHECK(run({"sweep", "--pairs-manifest", (dir / "missing.json").string(), "--out-dir", (dir / "out").string()}) == 2);
}
