#pragma once

#include <filesystem>
#include <vector>

#include "rgs/types.hpp"

namespace rgs {

// Loads a camera rig. Accepted inputs:
//   - a directory holding COLMAP text files cameras.txt + images.txt
//   - a path to either of those files (the sibling is located automatically)
//   - a .json rig file (schema in docs/camera_rig_json.md)
// Only PINHOLE and SIMPLE_PINHOLE camera models are accepted. Image entries
// are returned ordered by image id.
std::vector<CameraView> read_cameras(const std::filesystem::path& path);

// Writes views as a COLMAP text pair (cameras.txt, images.txt) into `dir`.
void write_colmap_rig(const std::vector<CameraView>& views, const std::filesystem::path& dir);

} // namespace rgs
