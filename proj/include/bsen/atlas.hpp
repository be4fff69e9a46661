#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "bsen/volume.hpp"

namespace bsen {

// Region label map: 0 = background, k > 0 = region id. Every nonzero label
// present in the volume has a name entry.
struct Atlas {
  Dims3 dims;
  std::vector<std::int32_t> labels;  // x fastest, same layout as Volume3D
  std::map<int, std::string> names;

  std::vector<int> region_ids() const;  // sorted, nonzero
};

// label_path: .vol volume with integral values stored as f32;
// names_path: TSV lines `id<TAB>name`.
Atlas load_atlas(const std::filesystem::path& label_path,
                 const std::filesystem::path& names_path);

void save_atlas(const std::filesystem::path& label_path,
                const std::filesystem::path& names_path, const Atlas& atlas);

}  // namespace bsen
