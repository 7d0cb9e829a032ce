#include <doctest.h>

#include <random>

#include "meshgap/cice.hpp"
#include "meshgap/errors.hpp"
#include "meshgap/fields_io.hpp"
#include "meshgap/shapes.hpp"
#include "support/oracles.hpp"

using namespace meshgap;

namespace {

/// Icosphere with a spherical cap of vertices (z > cap_z) deleted.
TriangleMesh cap_cut(const TriangleMesh& s, double cap_z) {
  std::vector<std::optional<VertexIndex>> remap(s.vertex_count());
  std::vector<Vec3> kept;
  for (std::size_t i = 0; i < s.vertex_count(); ++i)
    if (s.vertex(i).z <= cap_z) {
      remap[i] = static_cast<VertexIndex>(kept.size());
      kept.push_back(s.vertex(i));
    }
  std::vector<Face> faces;
  for (const Face& f : s.faces())
    if (remap[f[0]] && remap[f[1]] && remap[f[2]]) faces.push_back({*remap[f[0]], *remap[f[1]], *remap[f[2]]});
  return TriangleMesh(std::move(kept), std::move(faces));
}

}  // namespace

TEST_CASE("identity maps give zero cICE") {
  const TriangleMesh s = make_icosphere(30, 2);
  const auto id = CorrespondenceMap::identity(s.vertex_count());
  const ScalarField f = compute_cice(s, id, id);
  CHECK(f.size() == s.vertex_count());
  for (double v : f.values) CHECK(v == 0.0);
}

TEST_CASE("two-vertex hand example") {
  const std::vector<Vec3> pts{{0, 0, 0}, {10, 0, 0}};
  const ScalarField f = compute_cice(pts, CorrespondenceMap(2, {1, 1}), CorrespondenceMap(2, {0, 0}));
  CHECK(f.values == std::vector<double>{0.0, 10.0});
}

TEST_CASE("count mismatch") {
  const std::vector<Vec3> pts{{0, 0, 0}, {10, 0, 0}};
  CHECK_THROWS_AS(compute_cice(pts, CorrespondenceMap(2, {1, 1, 0}), CorrespondenceMap(2, {0, 0})), ValidationError);
  CHECK_THROWS_AS(compute_cice(pts, CorrespondenceMap(2, {1, 1}), CorrespondenceMap(3, {0, 0})), ValidationError);
}

TEST_CASE("cICE is zero exactly where the round trip returns home") {
  std::mt19937_64 rng(21);
  const TriangleMesh s = make_icosphere(10, 1);
  const std::size_t n = s.vertex_count();
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<VertexIndex> fwd(n), bwd(n);
    for (auto& x : fwd) x = static_cast<VertexIndex>(rng() % n);
    for (std::size_t j = 0; j < n; ++j) bwd[j] = rng() % 3 == 0 ? static_cast<VertexIndex>(rng() % n) : VertexIndex(j);
    const CorrespondenceMap f(n, fwd), b(n, bwd);
    const auto rt = compose(f, b);
    const auto field = compute_cice(s, f, b);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK((field.values[i] == 0.0) == (rt[i] == i));
      CHECK(field.values[i] >= 0.0);
    }
  }
}

TEST_CASE("cap-cut sphere: the largest cICE sits inside the cut region") {
  const TriangleMesh s = make_icosphere(50, 4);
  const double cap_z = 30.0;
  const TriangleMesh t = cap_cut(s, cap_z);
  const auto fwd = predict(PredictorSpec::nearest_neighbour(), s, t);
  const auto bwd = predict(PredictorSpec::nearest_neighbour(), t, s);
  const ScalarField f = compute_cice(s, fwd, bwd);
  std::size_t arg = 0;
  for (std::size_t i = 1; i < f.size(); ++i)
    if (f.values[i] > f.values[arg]) arg = i;
  CHECK(s.vertex(arg).z > cap_z);
  // Vertices that survive the cut map to themselves and back.
  for (std::size_t i = 0; i < f.size(); ++i)
    if (s.vertex(i).z <= cap_z) CHECK(f.values[i] == 0.0);
}

TEST_CASE("median filter examples") {
  const std::vector<std::pair<VertexIndex, VertexIndex>> path{{0, 1}, {1, 2}};
  const auto adj = AdjacencyIndex::from_edges(3, path);
  CHECK(median_filter({{0, 10, 0}}, adj, 1).values == std::vector<double>{0, 0, 0});
  CHECK(median_filter({{4, 4, 4}}, adj, 3).values == std::vector<double>{4, 4, 4});

  const TriangleMesh s = make_icosphere(50, 3);
  const AdjacencyIndex sadj(s);
  ScalarField spike{std::vector<double>(s.vertex_count(), 0.0)};
  spike.values[17] = 100.0;
  const auto out = median_filter(spike, sadj, 1);
  for (double v : out.values) CHECK(v == 0.0);

  CHECK_THROWS_AS(median_filter({{1, 2}}, adj, 1), ValidationError);
  CHECK_THROWS_AS(median_filter({{1, 2, 3}}, adj, 0), ValidationError);
}

TEST_CASE("isolated vertices keep their value") {
  const auto adj = AdjacencyIndex::from_edges(3, std::vector<std::pair<VertexIndex, VertexIndex>>{});
  CHECK(median_filter({{1, 7, 3}}, adj, 2).values == std::vector<double>{1, 7, 3});
  CHECK(majority_label_filter({{true, false, true}}, adj, 2).labels == std::vector<bool>{true, false, true});
}

TEST_CASE("property: filters match brute-force multiset oracles on random graphs") {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng() % 50;
    const auto edges = oracle::random_edges(rng, n, 0.02 + 0.2 * (trial % 5) / 4.0);
    const auto adj = AdjacencyIndex::from_edges(n, edges);
    const auto nb = oracle::neighbour_sets(n, edges);
    const int rounds = 1 + static_cast<int>(rng() % 3);

    std::vector<double> values(n);
    std::uniform_int_distribution<int> small(0, 5);  // repeated values stress the multiset logic
    for (auto& v : values) v = trial % 2 ? small(rng) : std::uniform_real_distribution<double>(0, 20)(rng);
    std::vector<double> expect = values;
    for (int r = 0; r < rounds; ++r) {
      const auto before = expect;
      expect = oracle::median_round(expect, nb);
      // Element-of property of the lower median.
      for (std::size_t i = 0; i < n; ++i) {
        bool member = expect[i] == before[i];
        for (VertexIndex j : nb[i]) member = member || expect[i] == before[j];
        CHECK(member);
      }
    }
    CHECK(median_filter({values}, adj, rounds).values == expect);

    std::vector<bool> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = rng() % 2 == 0;
    std::vector<bool> lexpect = labels;
    for (int r = 0; r < rounds; ++r) lexpect = oracle::majority_round(lexpect, nb);
    CHECK(majority_label_filter({labels}, adj, rounds).labels == lexpect);
  }
}

TEST_CASE("threshold labels") {
  CHECK(threshold_labels({{0, 3, 6, 9}}, 5.5).labels == std::vector<bool>{false, false, true, true});
  CHECK(threshold_labels({{0, 3, 6, 9}}, 9.5).missing_count() == 0);
  CHECK(threshold_labels({{0, 10}}, 1.0).labels == std::vector<bool>{false, true});
  // Strict inequality at the threshold itself.
  CHECK(threshold_labels({{5.5}}, 5.5).labels == std::vector<bool>{false});
  CHECK_THROWS_AS(threshold_labels({{1}}, 0.0), ValidationError);
  CHECK_THROWS_AS(threshold_labels({{1}}, -2.0), ValidationError);
}

TEST_CASE("property: thresholding is antitone in t") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0, 12);
  ScalarField f;
  for (int i = 0; i < 500; ++i) f.values.push_back(u(rng));
  for (double t1 = 0.5; t1 < 11; t1 += 0.5)
    for (double t2 = t1; t2 < 11; t2 += 1.5) {
      const auto a = threshold_labels(f, t1), b = threshold_labels(f, t2);
      for (std::size_t i = 0; i < f.size(); ++i)
        if (b.labels[i]) CHECK(a.labels[i]);
    }
}

TEST_CASE("majority label filter on the icosphere") {
  const TriangleMesh s = make_icosphere(50, 3);
  const AdjacencyIndex adj(s);
  const std::size_t n = s.vertex_count();

  CHECK(majority_label_filter({std::vector<bool>(n, true)}, adj, 2).missing_count() == n);
  CHECK(majority_label_filter({std::vector<bool>(n, false)}, adj, 2).missing_count() == 0);

  LabelField single{std::vector<bool>(n, false)};
  single.labels[42] = true;
  CHECK(majority_label_filter(single, adj, 1).missing_count() == 0);

  // Two-ring cap around vertex 0.
  LabelField cap{std::vector<bool>(n, false)};
  std::vector<VertexIndex> ring1(adj.neighbours(0).begin(), adj.neighbours(0).end());
  cap.labels[0] = true;
  for (VertexIndex a : ring1) {
    cap.labels[a] = true;
    for (VertexIndex b : adj.neighbours(a)) cap.labels[b] = true;
  }
  const auto out = majority_label_filter(cap, adj, 1);
  CHECK(out.labels[0]);
  for (VertexIndex a : ring1) CHECK(out.labels[a]);
}

TEST_CASE("dilation grows a single vertex to its one-ring") {
  const TriangleMesh s = make_icosphere(50, 2);
  const AdjacencyIndex adj(s);
  LabelField single{std::vector<bool>(s.vertex_count(), false)};
  single.labels[5] = true;
  const auto out = dilate_labels(single, adj, 1);
  CHECK(out.missing_count() == adj.neighbours(5).size() + 1);
}

TEST_CASE("field CSV formats") {
  const ScalarField f{{0.0, 1.5, 1e-12, 123456.789}};
  const auto text = format_scalar_csv(f);
  CHECK(text.rfind("vertex,value\n0,0\n1,1.5\n", 0) == 0);
  CHECK(parse_scalar_csv(text) == f);
  const LabelField l{{true, false, true}};
  CHECK(format_label_csv(l) == "vertex,missing\n0,1\n1,0\n2,1\n");
  CHECK(parse_label_csv(format_label_csv(l)) == l);
  CHECK_THROWS_AS(parse_label_csv("vertex,missing\n0,2\n"), ParseError);
  CHECK_THROWS_AS(parse_label_csv("vertex,value\n0,1\n"), ParseError);
  CHECK_THROWS_AS(parse_scalar_csv("vertex,value\n1,1\n"), ParseError);
}
