#include "manifest.hpp"

#include <array>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>

#include <openssl/evp.h>

#include "meshgap/errors.hpp"

#ifndef MESHGAP_VERSION
#define MESHGAP_VERSION "unknown"
#endif

namespace meshgap::cli {

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFoundError("cannot open file for hashing: " + path.string());

  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    EVP_DigestUpdate(ctx, buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest.data(), &len);
  EVP_MD_CTX_free(ctx);

  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex += kHex[digest[i] >> 4];
    hex += kHex[digest[i] & 0xF];
  }
  return hex;
}

void RunManifest::add_input(const std::filesystem::path& path) { inputs[path.string()] = sha256_file(path); }

void RunManifest::add_output(const std::filesystem::path& out_dir, const std::string& name) {
  outputs[name] = sha256_file(out_dir / name);
}

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::array<char, 32> buf{};
  std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf.data();
}

}  // namespace

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j;
  j["command"] = command;
  j["tool_version"] = MESHGAP_VERSION;
  j["parameters"] = parameters;
  j["seeds"] = seeds;
  j["input_digests"] = inputs;
  j["output_digests"] = outputs;
  for (const auto& [k, v] : extra.items()) j[k] = v;
  j["timestamp"] = utc_timestamp();
  return j;
}

void RunManifest::write(const std::filesystem::path& out_dir) const {
  const auto path = out_dir / "manifest.json";
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << to_json().dump(2) << "\n";
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace meshgap::cli
