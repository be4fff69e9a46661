#pragma once

#include <filesystem>
#include <variant>

#include "bsen/volume.hpp"

namespace bsen {

// On-disk volume format: <name>.vol holds the raw little-endian float32
// payload (x fastest, frames stacked for 4-D), <name>.vol.json is a sidecar
// with dims (3 or 4 ints), voxel_size_mm, dtype "f32le" and order
// "x-fastest". load_volume takes the .vol path and finds the sidecar.
using AnyVolume = std::variant<Volume3D, Volume4D>;

AnyVolume load_volume(const std::filesystem::path& vol_path);
Volume3D load_volume3d(const std::filesystem::path& vol_path);
Volume4D load_volume4d(const std::filesystem::path& vol_path);

void save_volume(const std::filesystem::path& vol_path, const Volume3D& vol);
void save_volume(const std::filesystem::path& vol_path, const Volume4D& vol);

}  // namespace bsen
