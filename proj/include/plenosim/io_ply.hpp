/// @file io_ply.hpp
/// @brief ASCII PLY export/import for meshes and status-coloured point clouds.
#pragma once

#include <string>
#include <vector>

#include "plenosim/scene.hpp"

namespace plenosim {

/// Mesh with optional per-vertex colours (same length as vertices, or empty).
void write_mesh_ply(const std::string& path, const TriangleMesh& mesh,
                    const std::vector<Color>& vertex_colors = {});

/// Point cloud with per-point colours.
void write_cloud_ply(const std::string& path, const std::vector<Vec3>& points,
                     const std::vector<Color>& colors);

/// Reads an ASCII PLY written by write_mesh_ply (positions, optional uchar
/// RGB, faces). Throws IoError on malformed input.
TriangleMesh read_mesh_ply(const std::string& path, std::vector<Color>* colors_out = nullptr);

} // namespace plenosim
