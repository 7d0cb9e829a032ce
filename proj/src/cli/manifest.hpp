#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

namespace meshgap::cli {

/// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

/// Record written next to every command's outputs. Everything except the
/// timestamp is a function of the inputs and flags.
struct RunManifest {
  std::string command;
  nlohmann::json parameters = nlohmann::json::object();
  nlohmann::json seeds = nlohmann::json::object();
  nlohmann::json inputs = nlohmann::json::object();   // path -> sha256
  nlohmann::json outputs = nlohmann::json::object();  // file name -> sha256
  nlohmann::json extra = nlohmann::json::object();

  void add_input(const std::filesystem::path& path);
  /// Hashes `name` inside out_dir.
  void add_output(const std::filesystem::path& out_dir, const std::string& name);

  nlohmann::json to_json() const;
  void write(const std::filesystem::path& out_dir) const;
};

}  // namespace meshgap::cli
