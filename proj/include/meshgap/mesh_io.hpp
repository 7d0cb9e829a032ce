#pragma once

#include <filesystem>
#include <string_view>

#include "meshgap/mesh.hpp"

namespace meshgap {

enum class MeshFormat { Off, PlyAscii };

/// Picks a format from the file extension (.off, .ply).
MeshFormat mesh_format_from_path(const std::filesystem::path& path);

/// Loads an ASCII OFF or PLY mesh. Vertex order follows the file.
/// Throws FileNotFoundError, ParseError or ValidationError.
TriangleMesh load_mesh(const std::filesystem::path& path, MeshFormat format);
TriangleMesh load_mesh(const std::filesystem::path& path);

TriangleMesh parse_off(std::string_view text, std::string name = {});
TriangleMesh parse_ply(std::string_view text, std::string name = {});

std::string format_off(const TriangleMesh& mesh);
std::string format_ply(const TriangleMesh& mesh);

/// Throws IoError when the file cannot be written.
void save_mesh(const TriangleMesh& mesh, const std::filesystem::path& path, MeshFormat format);
void save_mesh(const TriangleMesh& mesh, const std::filesystem::path& path);

}  // namespace meshgap
