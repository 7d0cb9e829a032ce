#pragma once

#include <charconv>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace meshgap {

std::vector<std::string_view> split_whitespace(std::string_view s);
std::string_view trim(std::string_view s);

template <typename T>
bool parse_number(std::string_view tok, T& out) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  const auto* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

/// Writes the whole file or throws IoError.
void write_text_file(const std::filesystem::path& path, const std::string& contents);

/// Reads the whole file or throws FileNotFoundError.
std::string read_text_file(const std::filesystem::path& path);

}  // namespace meshgap
