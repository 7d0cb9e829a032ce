#include "meshgap/correspondence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "meshgap/errors.hpp"
#include "meshgap/random.hpp"
#include "text_util.hpp"

namespace meshgap {

CorrespondenceMap::CorrespondenceMap(std::size_t target_count, std::vector<VertexIndex> assignment)
    : target_count_(target_count), assignment_(std::move(assignment)) {
  for (std::size_t i = 0; i < assignment_.size(); ++i)
    if (assignment_[i] >= target_count_)
      throw ValidationError("correspondence entry " + std::to_string(i) + " = " + std::to_string(assignment_[i]) +
                            " is out of range for target_count " + std::to_string(target_count_));
}

CorrespondenceMap CorrespondenceMap::identity(std::size_t n) {
  std::vector<VertexIndex> a(n);
  std::iota(a.begin(), a.end(), VertexIndex{0});
  return CorrespondenceMap(n, std::move(a));
}

CorrespondenceMap compose(const CorrespondenceMap& forward, const CorrespondenceMap& backward) {
  if (forward.target_count() != backward.source_count())
    throw ValidationError("cannot compose: forward targets " + std::to_string(forward.target_count()) +
                          " vertices but backward maps from " + std::to_string(backward.source_count()));
  std::vector<VertexIndex> out(forward.source_count());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = backward[forward[i]];
  return CorrespondenceMap(backward.target_count(), std::move(out));
}

CorrespondenceMap parse_correspondence(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = trim(text.substr(pos, end - pos));
    if (!line.empty() && line.front() != '#') lines.push_back(line);
    pos = end + 1;
  }
  if (lines.empty()) throw ParseError("correspondence file is empty");

  const auto header = split_whitespace(lines.front());
  std::size_t source_count = 0, target_count = 0;
  if (header.size() != 2 || !parse_number(header[0], source_count) || !parse_number(header[1], target_count))
    throw ParseError("correspondence header must be '<source_count> <target_count>'");
  if (lines.size() - 1 != source_count)
    throw ParseError("correspondence header declares " + std::to_string(source_count) + " entries but file has " +
                     std::to_string(lines.size() - 1));

  std::vector<VertexIndex> assignment;
  assignment.reserve(source_count);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::uint64_t value = 0;
    if (!parse_number(lines[i], value))
      throw ParseError("correspondence entry " + std::to_string(i - 1) + " is not an index: '" +
                       std::string(lines[i]) + "'");
    if (value >= target_count)
      throw ValidationError("correspondence entry " + std::to_string(i - 1) + " = " + std::to_string(value) +
                            " is not below target_count " + std::to_string(target_count));
    assignment.push_back(static_cast<VertexIndex>(value));
  }
  return CorrespondenceMap(target_count, std::move(assignment));
}

std::string format_correspondence(const CorrespondenceMap& map) {
  std::string out = std::to_string(map.source_count()) + " " + std::to_string(map.target_count()) + "\n";
  for (VertexIndex j : map.assignment()) out += std::to_string(j) + "\n";
  return out;
}

CorrespondenceMap load_correspondence(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return parse_correspondence(text);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void save_correspondence(const CorrespondenceMap& map, const std::filesystem::path& path) {
  write_text_file(path, format_correspondence(map));
}

// --- nearest neighbour ------------------------------------------------------

namespace {

constexpr std::uint32_t kLeafSize = 8;

inline bool better(double d2, VertexIndex j, double best_d2, VertexIndex best) {
  return d2 < best_d2 || (d2 == best_d2 && j < best);
}

}  // namespace

NearestNeighbourIndex::NearestNeighbourIndex(std::span<const Vec3> points)
    : points_(points.begin(), points.end()), order_(points.size()) {
  std::iota(order_.begin(), order_.end(), VertexIndex{0});
  if (!points_.empty()) {
    nodes_.reserve(2 * points_.size() / kLeafSize + 2);
    build(0, static_cast<std::uint32_t>(points_.size()));
  }
}

std::int32_t NearestNeighbourIndex::build(std::uint32_t begin, std::uint32_t end) {
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back({begin, end});
  if (end - begin <= kLeafSize) return id;

  Vec3 lo = points_[order_[begin]], hi = lo;
  for (std::uint32_t k = begin; k < end; ++k) {
    const Vec3& p = points_[order_[k]];
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
  }
  const Vec3 ext = hi - lo;
  const int axis = (ext.x >= ext.y && ext.x >= ext.z) ? 0 : (ext.y >= ext.z ? 1 : 2);
  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](VertexIndex a, VertexIndex b) {
                     const double ca = points_[a][axis], cb = points_[b][axis];
                     return ca < cb || (ca == cb && a < b);
                   });
  // Left holds coordinates <= split, right holds coordinates >= split.
  const double split = points_[order_[mid]][axis];
  const std::int32_t left = build(begin, mid);
  const std::int32_t right = build(mid, end);
  Node& node = nodes_[static_cast<std::size_t>(id)];
  node.axis = axis;
  node.split = split;
  node.left = left;
  node.right = right;
  return id;
}

void NearestNeighbourIndex::search(std::int32_t id, const Vec3& q, double& best_d2, VertexIndex& best) const {
  const Node& node = nodes_[static_cast<std::size_t>(id)];
  if (node.left < 0) {
    for (std::uint32_t k = node.begin; k < node.end; ++k) {
      const VertexIndex j = order_[k];
      const double d2 = squared_distance(q, points_[j]);
      if (better(d2, j, best_d2, best)) {
        best_d2 = d2;
        best = j;
      }
    }
    return;
  }
  const double diff = q[node.axis] - node.split;
  const std::int32_t near = diff < 0 ? node.left : node.right;
  const std::int32_t far = diff < 0 ? node.right : node.left;
  search(near, q, best_d2, best);
  // A far-side point at exactly best_d2 could still win on index, so only
  // prune when strictly farther.
  if (diff * diff <= best_d2) search(far, q, best_d2, best);
}

VertexIndex NearestNeighbourIndex::nearest(const Vec3& query) const {
  if (points_.empty()) throw ValidationError("nearest-neighbour query on an empty point set");
  double best_d2 = INFINITY;
  VertexIndex best = std::numeric_limits<VertexIndex>::max();
  search(0, query, best_d2, best);
  return best;
}

CorrespondenceMap nearest_neighbour_map(std::span<const Vec3> source, std::span<const Vec3> target) {
  if (source.empty() || target.empty()) throw ValidationError("nearest-neighbour predictor needs non-empty meshes");
  const NearestNeighbourIndex index(target);
  std::vector<VertexIndex> out(source.size());
  for (std::size_t i = 0; i < source.size(); ++i) out[i] = index.nearest(source[i]);
  return CorrespondenceMap(target.size(), std::move(out));
}

CorrespondenceMap jittered_nearest_neighbour_map(std::span<const Vec3> source, std::span<const Vec3> target,
                                                 double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ValidationError("jitter sigma must be finite and >= 0");
  Rng rng(seed);
  std::vector<Vec3> displaced(target.begin(), target.end());
  for (Vec3& p : displaced) p += sigma * rng.normal3();
  return nearest_neighbour_map(source, displaced);
}

// --- predictor specs ---------------------------------------------------------

void PredictorSpec::validate() const {
  const bool jitter = kind == Kind::JitteredNearestNeighbour;
  const bool file = kind == Kind::FromFile;
  if (jitter != seed.has_value() || jitter != jitter_sigma.has_value())
    throw ValidationError("seed and jitter_sigma are required exactly for the jittered nearest-neighbour predictor");
  if (file != path.has_value()) throw ValidationError("path is required exactly for the from-file predictor");
  if (!file && backward_path) throw ValidationError("backward path is only valid for the from-file predictor");
  if (jitter && (!(*jitter_sigma >= 0.0) || !std::isfinite(*jitter_sigma)))
    throw ValidationError("jitter sigma must be finite and >= 0");
}

PredictorSpec PredictorSpec::reversed() const {
  PredictorSpec r = *this;
  if (kind == Kind::FromFile) {
    if (!backward_path) throw ValidationError("from-file predictor '" + to_string() + "' has no backward map");
    r.path = backward_path;
    r.backward_path = path;
  }
  return r;
}

PredictorSpec PredictorSpec::parse(std::string_view text) {
  text = trim(text);
  if (text == "identity") return identity();
  if (text == "nn") return nearest_neighbour();

  const std::string_view jitter_prefix = "nnjitter:";
  if (text.starts_with(jitter_prefix)) {
    std::optional<double> sigma;
    std::optional<std::uint64_t> seed;
    std::string_view rest = text.substr(jitter_prefix.size());
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string_view item = trim(rest.substr(0, comma));
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
      const auto eq = item.find('=');
      if (eq == std::string_view::npos) throw ValidationError("bad predictor parameter '" + std::string(item) + "'");
      const std::string_view key = item.substr(0, eq);
      const std::string_view value = item.substr(eq + 1);
      if (key == "sigma") {
        double v = 0;
        if (!parse_number(value, v)) throw ValidationError("bad sigma '" + std::string(value) + "'");
        sigma = v;
      } else if (key == "seed") {
        std::uint64_t v = 0;
        if (!parse_number(value, v)) throw ValidationError("bad seed '" + std::string(value) + "'");
        seed = v;
      } else {
        throw ValidationError("unknown predictor parameter '" + std::string(key) + "'");
      }
    }
    if (!sigma || !seed) throw ValidationError("nnjitter needs both sigma=<mm> and seed=<int>");
    PredictorSpec spec = jittered(*sigma, *seed);
    spec.validate();
    return spec;
  }

  const std::string_view file_prefix = "file:";
  if (text.starts_with(file_prefix)) {
    std::string_view rest = text.substr(file_prefix.size());
    const std::string_view marker = ",backward=";
    std::optional<std::filesystem::path> backward;
    if (auto at = rest.find(marker); at != std::string_view::npos) {
      backward = std::filesystem::path(std::string(rest.substr(at + marker.size())));
      rest = rest.substr(0, at);
    }
    if (rest.empty()) throw ValidationError("file predictor needs a path");
    return from_file(std::filesystem::path(std::string(rest)), std::move(backward));
  }
  throw ValidationError("unknown predictor spec '" + std::string(text) + "'");
}

std::string PredictorSpec::to_string() const {
  switch (kind) {
    case Kind::Identity: return "identity";
    case Kind::NearestNeighbour: return "nn";
    case Kind::JitteredNearestNeighbour:
      return "nnjitter:sigma=" + format_double(jitter_sigma.value_or(0.0)) +
             ",seed=" + std::to_string(seed.value_or(0));
    case Kind::FromFile: {
      std::string s = "file:" + (path ? path->string() : std::string());
      if (backward_path) s += ",backward=" + backward_path->string();
      return s;
    }
  }
  return {};
}

CorrespondenceMap predict(const PredictorSpec& spec, const TriangleMesh& source, const TriangleMesh& target) {
  spec.validate();
  if (source.vertex_count() == 0 || target.vertex_count() == 0)
    throw ValidationError("predictor '" + spec.to_string() + "' received an empty mesh");

  switch (spec.kind) {
    case PredictorSpec::Kind::Identity:
      if (source.vertex_count() != target.vertex_count())
        throw ValidationError("identity predictor needs equal vertex counts (source " +
                              std::to_string(source.vertex_count()) + ", target " +
                              std::to_string(target.vertex_count()) + ")");
      return CorrespondenceMap::identity(source.vertex_count());
    case PredictorSpec::Kind::NearestNeighbour:
      return nearest_neighbour_map(source.vertices(), target.vertices());
    case PredictorSpec::Kind::JitteredNearestNeighbour:
      return jittered_nearest_neighbour_map(source.vertices(), target.vertices(), *spec.jitter_sigma, *spec.seed);
    case PredictorSpec::Kind::FromFile: {
      CorrespondenceMap map = load_correspondence(*spec.path);
      if (map.source_count() != source.vertex_count() || map.target_count() != target.vertex_count())
        throw ValidationError(spec.path->string() + ": map is " + std::to_string(map.source_count()) + " -> " +
                              std::to_string(map.target_count()) + " but meshes have " +
                              std::to_string(source.vertex_count()) + " and " +
                              std::to_string(target.vertex_count()) + " vertices");
      return map;
    }
  }
  throw ValidationError("unhandled predictor kind");
}

}  // namespace meshgap
