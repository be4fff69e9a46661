#include "bsen/atlas.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "bsen/error.hpp"
#include "bsen/volume_format.hpp"

namespace bsen {

std::vector<int> Atlas::region_ids() const {
  std::set<int> ids;
  for (auto l : labels)
    if (l > 0) ids.insert(l);
  return {ids.begin(), ids.end()};
}

Atlas load_atlas(const std::filesystem::path& label_path,
                 const std::filesystem::path& names_path) {
  const Volume3D vol = load_volume3d(label_path);
  Atlas atlas;
  atlas.dims = vol.dims;
  atlas.labels.resize(vol.data.size());
  for (std::size_t i = 0; i < vol.data.size(); ++i) {
    const float v = vol.data[i];
    if (v < 0 || v != std::floor(v))
      throw DataError("atlas label volume has a non-integral or negative value at voxel " +
                      std::to_string(i) + " in " + label_path.string());
    atlas.labels[i] = static_cast<std::int32_t>(v);
  }

  std::ifstream in(names_path);
  if (!in) throw DataError("cannot open atlas names " + names_path.string());
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw DataError("atlas names row " + std::to_string(row) + " is not `id<TAB>name` in " +
                      names_path.string());
    int id = 0;
    try {
      id = std::stoi(line.substr(0, tab));
    } catch (const std::exception&) {
      throw DataError("unparseable region id at row " + std::to_string(row) + " in " +
                      names_path.string());
    }
    if (id < 0) throw DataError("negative region id at row " + std::to_string(row));
    atlas.names[id] = line.substr(tab + 1);
  }

  for (int id : atlas.region_ids())
    if (!atlas.names.count(id))
      throw DataError("atlas label " + std::to_string(id) + " has no name entry in " +
                      names_path.string());
  return atlas;
}

void save_atlas(const std::filesystem::path& label_path,
                const std::filesystem::path& names_path, const Atlas& atlas) {
  Volume3D vol = make_volume(atlas.dims);
  for (std::size_t i = 0; i < atlas.labels.size(); ++i)
    vol.data[i] = static_cast<float>(atlas.labels[i]);
  save_volume(label_path, vol);
  std::ofstream out(names_path, std::ios::binary);
  if (!out) throw DataError("cannot write atlas names " + names_path.string());
  for (const auto& [id, name] : atlas.names) out << id << "\t" << name << "\n";
}

}  // namespace bsen
