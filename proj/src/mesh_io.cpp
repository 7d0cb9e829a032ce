#include "meshgap/mesh_io.hpp"

#include <charconv>
#include <cctype>

#include "meshgap/errors.hpp"
#include "text_util.hpp"

namespace meshgap {

namespace {

// One logical line of a text mesh file: comment stripped, split on whitespace.
struct Line {
  std::size_t number = 0;
  std::vector<std::string_view> tokens;
};

std::vector<Line> tokenize_lines(std::string_view text, bool strip_hash_comments) {
  std::vector<Line> lines;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    ++number;
    if (strip_hash_comments) {
      if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    }
    Line line{number, split_whitespace(raw)};
    if (!line.tokens.empty()) lines.push_back(std::move(line));
    if (end == text.size()) break;
    pos = end + 1;
  }
  return lines;
}

[[noreturn]] void fail(const std::string& what, std::size_t line) {
  throw ParseError("line " + std::to_string(line) + ": " + what);
}

double to_double(std::string_view tok, std::size_t line) {
  double value = 0.0;
  if (!parse_number(tok, value)) fail("expected a number, got '" + std::string(tok) + "'", line);
  return value;
}

long long to_integer(std::string_view tok, std::size_t line) {
  long long value = 0;
  if (!parse_number(tok, value)) fail("expected an integer, got '" + std::string(tok) + "'", line);
  return value;
}

VertexIndex to_index(std::string_view tok, std::size_t line) {
  const long long v = to_integer(tok, line);
  if (v < 0) throw ValidationError("line " + std::to_string(line) + ": negative vertex index " + std::string(tok));
  if (v > 0xFFFFFFFFLL) throw ValidationError("line " + std::to_string(line) + ": vertex index too large");
  return static_cast<VertexIndex>(v);
}

std::size_t to_count(std::string_view tok, std::size_t line) {
  const long long v = to_integer(tok, line);
  if (v < 0) fail("negative element count", line);
  return static_cast<std::size_t>(v);
}

TriangleMesh finish(std::vector<Vec3> vertices, std::vector<Face> faces, std::string name) {
  TriangleMesh mesh(std::move(vertices), std::move(faces), std::move(name));
  require_operational(mesh);
  return mesh;
}

}  // namespace

MeshFormat mesh_format_from_path(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (ext == ".off") return MeshFormat::Off;
  if (ext == ".ply") return MeshFormat::PlyAscii;
  throw ValidationError("cannot infer mesh format from extension of " + path.string());
}

TriangleMesh parse_off(std::string_view text, std::string name) {
  const auto lines = tokenize_lines(text, true);
  if (lines.empty()) throw ParseError("empty OFF file");

  const Line& header = lines.front();
  if (header.tokens.front() != "OFF") {
    fail("expected 'OFF' header, got '" + std::string(header.tokens.front()) + "'", header.number);
  }
  std::size_t cursor = 1;
  std::vector<std::string_view> counts(header.tokens.begin() + 1, header.tokens.end());
  std::size_t counts_line = header.number;
  if (!counts.empty() && counts.front() == "BINARY") throw ParseError("binary OFF is not supported");
  if (counts.empty()) {
    if (cursor >= lines.size()) throw ParseError("OFF file ends before the counts line");
    counts = lines[cursor].tokens;
    counts_line = lines[cursor].number;
    ++cursor;
  }
  if (counts.size() < 2) fail("counts line needs vertex and face counts", counts_line);
  const std::size_t nv = to_count(counts[0], counts_line);
  const std::size_t nf = to_count(counts[1], counts_line);

  if (lines.size() < cursor + nv + nf)
    throw ParseError("OFF file declares " + std::to_string(nv) + " vertices and " + std::to_string(nf) +
                     " faces but is truncated");

  std::vector<Vec3> vertices;
  vertices.reserve(nv);
  for (std::size_t i = 0; i < nv; ++i, ++cursor) {
    const Line& l = lines[cursor];
    if (l.tokens.size() < 3) fail("vertex line needs three coordinates", l.number);
    vertices.push_back({to_double(l.tokens[0], l.number), to_double(l.tokens[1], l.number),
                        to_double(l.tokens[2], l.number)});
  }

  std::vector<Face> faces;
  faces.reserve(nf);
  for (std::size_t i = 0; i < nf; ++i, ++cursor) {
    const Line& l = lines[cursor];
    const auto arity = to_integer(l.tokens[0], l.number);
    if (arity != 3) fail("only triangular faces are supported (got arity " + std::to_string(arity) + ")", l.number);
    if (l.tokens.size() < 4) fail("face line needs three vertex indices", l.number);
    faces.push_back({to_index(l.tokens[1], l.number), to_index(l.tokens[2], l.number),
                     to_index(l.tokens[3], l.number)});
  }
  return finish(std::move(vertices), std::move(faces), std::move(name));
}

TriangleMesh parse_ply(std::string_view text, std::string name) {
  const auto lines = tokenize_lines(text, false);
  if (lines.empty() || lines.front().tokens.front() != "ply") throw ParseError("missing 'ply' magic line");

  struct Property {
    std::string name;
    bool is_list = false;
  };
  struct Element {
    std::string name;
    std::size_t count = 0;
    std::vector<Property> properties;
  };
  std::vector<Element> elements;

  std::size_t cursor = 1;
  bool saw_format = false;
  bool saw_end = false;
  for (; cursor < lines.size(); ++cursor) {
    const Line& l = lines[cursor];
    const auto& t = l.tokens;
    if (t[0] == "comment" || t[0] == "obj_info") continue;
    if (t[0] == "end_header") {
      saw_end = true;
      ++cursor;
      break;
    }
    if (t[0] == "format") {
      if (t.size() < 2 || t[1] != "ascii")
        throw ParseError("only ASCII PLY is supported (format '" + std::string(t.size() > 1 ? t[1] : "") + "')");
      saw_format = true;
    } else if (t[0] == "element") {
      if (t.size() != 3) fail("malformed element declaration", l.number);
      elements.push_back({std::string(t[1]), to_count(t[2], l.number), {}});
    } else if (t[0] == "property") {
      if (elements.empty()) fail("property before any element", l.number);
      if (t.size() >= 2 && t[1] == "list") {
        if (t.size() != 5) fail("malformed list property", l.number);
        elements.back().properties.push_back({std::string(t[4]), true});
      } else {
        if (t.size() != 3) fail("malformed property", l.number);
        elements.back().properties.push_back({std::string(t[2]), false});
      }
    } else {
      fail("unknown header keyword '" + std::string(t[0]) + "'", l.number);
    }
  }
  if (!saw_format) throw ParseError("PLY header has no format line");
  if (!saw_end) throw ParseError("PLY header has no end_header");

  std::vector<Vec3> vertices;
  std::vector<Face> faces;
  bool saw_vertex = false;
  bool saw_face = false;

  for (const Element& el : elements) {
    if (lines.size() < cursor + el.count) throw ParseError("PLY body truncated in element '" + el.name + "'");
    if (el.name == "vertex") {
      saw_vertex = true;
      int ix = -1, iy = -1, iz = -1;
      for (std::size_t p = 0; p < el.properties.size(); ++p) {
        if (el.properties[p].is_list) throw ParseError("list properties on vertices are not supported");
        if (el.properties[p].name == "x") ix = static_cast<int>(p);
        if (el.properties[p].name == "y") iy = static_cast<int>(p);
        if (el.properties[p].name == "z") iz = static_cast<int>(p);
      }
      if (ix < 0 || iy < 0 || iz < 0) throw ParseError("vertex element lacks x/y/z properties");
      vertices.reserve(el.count);
      for (std::size_t i = 0; i < el.count; ++i, ++cursor) {
        const Line& l = lines[cursor];
        if (l.tokens.size() != el.properties.size()) fail("vertex line has wrong number of values", l.number);
        vertices.push_back({to_double(l.tokens[static_cast<std::size_t>(ix)], l.number),
                            to_double(l.tokens[static_cast<std::size_t>(iy)], l.number),
                            to_double(l.tokens[static_cast<std::size_t>(iz)], l.number)});
      }
    } else if (el.name == "face") {
      saw_face = true;
      if (el.properties.size() != 1 || !el.properties[0].is_list ||
          (el.properties[0].name != "vertex_indices" && el.properties[0].name != "vertex_index"))
        throw ParseError("face element must hold a single vertex_indices list");
      faces.reserve(el.count);
      for (std::size_t i = 0; i < el.count; ++i, ++cursor) {
        const Line& l = lines[cursor];
        const auto arity = to_integer(l.tokens[0], l.number);
        if (arity != 3) fail("only triangular faces are supported (got arity " + std::to_string(arity) + ")", l.number);
        if (l.tokens.size() != 4) fail("face line needs exactly three vertex indices", l.number);
        faces.push_back({to_index(l.tokens[1], l.number), to_index(l.tokens[2], l.number),
                         to_index(l.tokens[3], l.number)});
      }
    } else {
      cursor += el.count;
    }
  }
  if (!saw_vertex) throw ParseError("PLY has no vertex element");
  if (!saw_face) throw ParseError("PLY has no face element");
  return finish(std::move(vertices), std::move(faces), std::move(name));
}

TriangleMesh load_mesh(const std::filesystem::path& path, MeshFormat format) {
  const std::string text = read_text_file(path);
  const std::string name = path.stem().string();
  try {
    return format == MeshFormat::Off ? parse_off(text, name) : parse_ply(text, name);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

TriangleMesh load_mesh(const std::filesystem::path& path) { return load_mesh(path, mesh_format_from_path(path)); }

std::string format_off(const TriangleMesh& mesh) {
  std::string out = "OFF\n";
  out += std::to_string(mesh.vertex_count()) + " " + std::to_string(mesh.face_count()) + " 0\n";
  for (const Vec3& v : mesh.vertices())
    out += format_double(v.x) + " " + format_double(v.y) + " " + format_double(v.z) + "\n";
  for (const Face& f : mesh.faces())
    out += "3 " + std::to_string(f[0]) + " " + std::to_string(f[1]) + " " + std::to_string(f[2]) + "\n";
  return out;
}

std::string format_ply(const TriangleMesh& mesh) {
  std::string out = "ply\nformat ascii 1.0\n";
  out += "element vertex " + std::to_string(mesh.vertex_count()) + "\n";
  out += "property float x\nproperty float y\nproperty float z\n";
  out += "element face " + std::to_string(mesh.face_count()) + "\n";
  out += "property list uchar int vertex_indices\nend_header\n";
  for (const Vec3& v : mesh.vertices())
    out += format_double(v.x) + " " + format_double(v.y) + " " + format_double(v.z) + "\n";
  for (const Face& f : mesh.faces())
    out += "3 " + std::to_string(f[0]) + " " + std::to_string(f[1]) + " " + std::to_string(f[2]) + "\n";
  return out;
}

void save_mesh(const TriangleMesh& mesh, const std::filesystem::path& path, MeshFormat format) {
  write_text_file(path, format == MeshFormat::Off ? format_off(mesh) : format_ply(mesh));
}

void save_mesh(const TriangleMesh& mesh, const std::filesystem::path& path) {
  save_mesh(mesh, path, mesh_format_from_path(path));
}

}  // namespace meshgap
