#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "meshgap/cice.hpp"

namespace meshgap {

// CSV layouts: "vertex,value" (shortest round-trip decimals) and
// "vertex,missing" (0/1), one row per vertex in index order.

std::string format_scalar_csv(const ScalarField& field);
std::string format_label_csv(const LabelField& labels);
ScalarField parse_scalar_csv(std::string_view text);
LabelField parse_label_csv(std::string_view text);

void save_scalar_csv(const ScalarField& field, const std::filesystem::path& path);
void save_label_csv(const LabelField& labels, const std::filesystem::path& path);
ScalarField load_scalar_csv(const std::filesystem::path& path);
LabelField load_label_csv(const std::filesystem::path& path);

/// Single-column "vertex" CSV listing vertex indices.
void save_index_csv(const std::vector<VertexIndex>& indices, const std::filesystem::path& path);
std::vector<VertexIndex> load_index_csv(const std::filesystem::path& path);

}  // namespace meshgap
