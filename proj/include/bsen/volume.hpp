#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace bsen {

struct Dims3 {
  int nx = 0, ny = 0, nz = 0;
  std::size_t count() const { return static_cast<std::size_t>(nx) * ny * nz; }
  bool operator==(const Dims3&) const = default;
};

std::string to_string(const Dims3& d);

// Dense scalar voxel grid, x fastest: data[x + nx*(y + ny*z)].
struct Volume3D {
  Dims3 dims;
  std::array<double, 3> voxel_size_mm{1.0, 1.0, 1.0};
  std::vector<float> data;

  float& at(int x, int y, int z) {
    return data[static_cast<std::size_t>(x) + dims.nx * (static_cast<std::size_t>(y) + static_cast<std::size_t>(dims.ny) * z)];
  }
  float at(int x, int y, int z) const {
    return data[static_cast<std::size_t>(x) + dims.nx * (static_cast<std::size_t>(y) + static_cast<std::size_t>(dims.ny) * z)];
  }
};

// Time series of frames sharing one grid; frame t is a contiguous block.
struct Volume4D {
  Dims3 dims;
  std::array<double, 3> voxel_size_mm{1.0, 1.0, 1.0};
  int nt = 0;
  std::vector<float> data;

  const float* frame(int t) const { return data.data() + dims.count() * t; }
  float* frame(int t) { return data.data() + dims.count() * t; }
  Volume3D frame_volume(int t) const;
};

Volume3D make_volume(Dims3 dims, std::array<double, 3> voxel = {1, 1, 1});

// Frames start..end, 1-based inclusive on both ends.
Volume4D select_time_window(const Volume4D& scan, int start, int end);

// Per-voxel arithmetic mean across frames.
Volume3D time_average(const Volume4D& scan);

// Z-score over all voxels; if std < 1e-8 returns the mean-subtracted volume
// unchanged in scale.
Volume3D normalize_volume(const Volume3D& vol);

// Center the source in the target grid, extra voxel to the high side on odd
// margins, zeros elsewhere.
Volume3D pad_volume(const Volume3D& vol, Dims3 target);

}  // namespace bsen
