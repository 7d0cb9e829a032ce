#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "meshgap/errors.hpp"
#include "meshgap/eval.hpp"
#include "meshgap/shapes.hpp"
#include "support/oracles.hpp"

using namespace meshgap;
namespace fs = std::filesystem;

namespace {

LabelField labels(std::initializer_list<int> bits) {
  LabelField f;
  for (int b : bits) f.labels.push_back(b != 0);
  return f;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SweepReport small_report() {
  SweepReport r;
  r.thresholds = {1.0, 2.0, 3.0};
  r.pair_ids = {"a", "b"};
  r.pair_groups = {"g", "g"};
  r.scores = {{0.5, 0.75, std::nullopt}, {1.0, 0.25, 0.5}};
  r.degenerate = {{false, false, false}, {true, false, false}};
  r.per_threshold_mean = {0.75, 0.5, 0.5};
  r.per_threshold_median = {0.75, 0.5, 0.5};
  r.best_threshold = 1.0;
  r.best_score = 0.75;
  r.predictors = {"nn"};
  return r;
}

}  // namespace

TEST_CASE("balanced accuracy examples") {
  const auto a = balanced_accuracy(labels({1, 1, 0, 0}), labels({1, 0, 0, 0}));
  CHECK(*a.score == doctest::Approx(0.75));
  CHECK_FALSE(a.degenerate);
  CHECK(*balanced_accuracy(labels({1, 1, 0, 0}), labels({0, 0, 0, 0})).score == doctest::Approx(0.5));
  CHECK(*balanced_accuracy(labels({1, 0}), labels({1, 0})).score == 1.0);

  const auto single = balanced_accuracy(labels({0, 0, 0}), labels({0, 1, 0}));
  CHECK(single.degenerate);
  CHECK(*single.score == doctest::Approx(2.0 / 3.0));
  CHECK_FALSE(single.recall_missing.has_value());

  CHECK_FALSE(balanced_accuracy(LabelField{}, LabelField{}).score.has_value());
  CHECK_THROWS_AS(balanced_accuracy(labels({1}), labels({1, 0})), ValidationError);
}

TEST_CASE("property: balanced accuracy matches the partition oracle") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng() % 20;
    LabelField t, p;
    for (std::size_t i = 0; i < n; ++i) {
      t.labels.push_back(rng() % 2 == 0);
      p.labels.push_back(rng() % 2 == 0);
    }
    const auto got = balanced_accuracy(t, p);
    const auto want = oracle::balanced_accuracy(t.labels, p.labels);
    REQUIRE(got.score.has_value());
    CHECK(std::abs(*got.score - *want.score) <= 1e-12);
    CHECK(got.degenerate == want.degenerate);

    // Reordering vertices leaves the score unchanged.
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    LabelField ts, ps;
    for (std::size_t i : perm) {
      ts.labels.push_back(t.labels[i]);
      ps.labels.push_back(p.labels[i]);
    }
    CHECK(std::abs(*balanced_accuracy(ts, ps).score - *got.score) <= 1e-12);
  }
}

TEST_CASE("threshold grid") {
  const auto g = default_threshold_grid();
  REQUIRE(g.size() == 19);
  for (int i = 0; i < 19; ++i) CHECK(g[i] == 1.0 + 0.5 * i);
  CHECK(parse_threshold_grid("1:10:19") == g);
  CHECK(parse_threshold_grid("2:2:1") == std::vector<double>{2.0});
  CHECK_THROWS_AS(parse_threshold_grid("1:10"), ValidationError);
  CHECK_THROWS_AS(parse_threshold_grid("0:10:5"), ValidationError);
  CHECK_THROWS_AS(parse_threshold_grid("5:1:5"), ValidationError);
  CHECK_THROWS_AS(parse_threshold_grid("1:10:x"), ValidationError);
  CHECK_THROWS_AS(parse_threshold_grid("1:10:0"), ValidationError);
}

TEST_CASE("sweep on a single pair") {
  const TriangleMesh s = make_icosphere(50, 3);
  const TriangleMesh t = rescanned(s, 1.5, 5);
  // Golden: everything above z = 30 is missing, expressed on the source.
  LabelField golden;
  for (const Vec3& v : s.vertices()) golden.labels.push_back(v.z > 30);
  std::vector<EvalPair> pairs{{"p0", "sphere", s, t, golden}};

  PipelineConfig base;
  base.predictors = {PredictorSpec::nearest_neighbour()};
  const std::vector<double> grid{1.0, 2.0, 4.0, 8.0};
  const SweepReport r = sweep(pairs, base, grid);
  CHECK(r.mode == SweepMode::Single);
  REQUIRE(r.scores.size() == 1);
  REQUIRE(r.scores[0].size() == grid.size());

  double best = -1, best_t = 0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    PipelineConfig c = base;
    c.threshold_mm = grid[k];
    const auto expected = balanced_accuracy(golden, classify_pair(s, t, c).labels);
    CHECK(*r.scores[0][k] == *expected.score);
    CHECK(*r.per_threshold_mean[k] == *expected.score);
    if (*expected.score > best) {
      best = *expected.score;
      best_t = grid[k];
    }
  }
  CHECK(r.best_threshold == best_t);
  CHECK(r.best_score == best);
  CHECK(sweep(pairs, base, grid, SelectStatistic::Mean, 3) == r);
}

TEST_CASE("sweep ties go to the smallest threshold") {
  // Target equals source, so every threshold scores the same.
  const TriangleMesh s = make_icosphere(50, 2);
  LabelField golden;
  for (const Vec3& v : s.vertices()) golden.labels.push_back(v.x > 0);
  std::vector<EvalPair> pairs{{"p", "g", s, s, golden}};
  PipelineConfig base;
  base.predictors = {PredictorSpec::identity()};
  const std::vector<double> grid{3.0, 4.0, 5.0};
  const auto r = sweep(pairs, base, grid, SelectStatistic::Median);
  CHECK(r.best_threshold == 3.0);
  CHECK(r.best_score == doctest::Approx(0.5));
  CHECK(r.statistic == SelectStatistic::Median);
}

TEST_CASE("sweep rejects empty input") {
  PipelineConfig base;
  base.predictors = {PredictorSpec::identity()};
  const std::vector<double> grid{1.0};
  CHECK_THROWS_AS(sweep({}, base, grid), ValidationError);
}

TEST_CASE("report rendering") {
  const SweepReport r = small_report();
  const auto dir = fs::temp_directory_path() / "meshgap_report_test";
  fs::remove_all(dir);
  render_report(r, dir, {{"note", "x"}});

  const std::string csv = slurp(dir / "sweep.csv");
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "pair,pair_group,threshold,bas,degenerate");
  int rows = 0;
  bool saw_na = false;
  while (std::getline(lines, line))
    if (!line.empty()) {
      ++rows;
      saw_na = saw_na || line.find(",NA,") != std::string::npos;
    }
  CHECK(rows == 6);
  CHECK(saw_na);

  const auto j = nlohmann::json::parse(slurp(dir / "sweep.json"));
  CHECK(sweep_from_json(j) == r);
  CHECK(j.at("metadata").at("note") == "x");
  CHECK(slurp(dir / "summary.txt").find("best_threshold_mm=1") != std::string::npos);
}
