#include "meshgap/fields_io.hpp"

#include "meshgap/errors.hpp"
#include "text_util.hpp"

namespace meshgap {

namespace {

std::vector<std::string_view> csv_rows(std::string_view text, std::string_view expected_header) {
  std::vector<std::string_view> rows;
  std::size_t pos = 0;
  bool header = true;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    if (line.empty()) continue;
    if (header) {
      if (line != expected_header)
        throw ParseError("expected CSV header '" + std::string(expected_header) + "', got '" + std::string(line) + "'");
      header = false;
      continue;
    }
    rows.push_back(line);
  }
  if (header) throw ParseError("CSV is empty; expected header '" + std::string(expected_header) + "'");
  return rows;
}

template <typename T>
std::vector<T> parse_two_column(std::string_view text, std::string_view header) {
  const auto rows = csv_rows(text, header);
  std::vector<T> values;
  values.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto comma = rows[r].find(',');
    std::size_t vertex = 0;
    T value{};
    if (comma == std::string_view::npos || !parse_number(trim(rows[r].substr(0, comma)), vertex) ||
        !parse_number(trim(rows[r].substr(comma + 1)), value))
      throw ParseError("malformed CSV row " + std::to_string(r + 1) + ": '" + std::string(rows[r]) + "'");
    if (vertex != r) throw ParseError("CSV rows must list vertices 0..n-1 in order (row " + std::to_string(r + 1) + ")");
    values.push_back(value);
  }
  return values;
}

}  // namespace

std::string format_scalar_csv(const ScalarField& field) {
  std::string out = "vertex,value\n";
  for (std::size_t i = 0; i < field.size(); ++i) out += std::to_string(i) + "," + format_double(field.values[i]) + "\n";
  return out;
}

std::string format_label_csv(const LabelField& labels) {
  std::string out = "vertex,missing\n";
  for (std::size_t i = 0; i < labels.size(); ++i) out += std::to_string(i) + (labels.labels[i] ? ",1\n" : ",0\n");
  return out;
}

ScalarField parse_scalar_csv(std::string_view text) { return {parse_two_column<double>(text, "vertex,value")}; }

LabelField parse_label_csv(std::string_view text) {
  const auto raw = parse_two_column<int>(text, "vertex,missing");
  LabelField out;
  out.labels.reserve(raw.size());
  for (int v : raw) {
    if (v != 0 && v != 1) throw ParseError("label values must be 0 or 1");
    out.labels.push_back(v == 1);
  }
  return out;
}

void save_scalar_csv(const ScalarField& field, const std::filesystem::path& path) {
  write_text_file(path, format_scalar_csv(field));
}

void save_label_csv(const LabelField& labels, const std::filesystem::path& path) {
  write_text_file(path, format_label_csv(labels));
}

ScalarField load_scalar_csv(const std::filesystem::path& path) {
  try {
    return parse_scalar_csv(read_text_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

LabelField load_label_csv(const std::filesystem::path& path) {
  try {
    return parse_label_csv(read_text_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void save_index_csv(const std::vector<VertexIndex>& indices, const std::filesystem::path& path) {
  std::string out = "vertex\n";
  for (VertexIndex i : indices) out += std::to_string(i) + "\n";
  write_text_file(path, out);
}

std::vector<VertexIndex> load_index_csv(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  std::vector<VertexIndex> out;
  for (std::string_view row : csv_rows(text, "vertex")) {
    VertexIndex v = 0;
    if (!parse_number(row, v)) throw ParseError(path.string() + ": bad vertex index '" + std::string(row) + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace meshgap
