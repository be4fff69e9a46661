#include "bsen/volume_format.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>

#include <json.hpp>

#include "bsen/error.hpp"

static_assert(std::endian::native == std::endian::little,
              "volume payload io assumes a little-endian host");

namespace bsen {

namespace {

using nlohmann::json;

struct Sidecar {
  std::vector<int> dims;
  std::array<double, 3> voxel{1, 1, 1};
};

Sidecar read_sidecar(const std::filesystem::path& vol_path) {
  const auto json_path = std::filesystem::path(vol_path.string() + ".json");
  std::ifstream in(json_path);
  if (!in) throw DataError("missing volume sidecar: " + json_path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError("bad volume sidecar " + json_path.string() + ": " + e.what());
  }
  Sidecar sc;
  try {
    sc.dims = j.at("dims").get<std::vector<int>>();
    const auto v = j.at("voxel_size_mm").get<std::vector<double>>();
    if (v.size() != 3) throw DataError("voxel_size_mm must have 3 entries");
    std::copy(v.begin(), v.end(), sc.voxel.begin());
    if (j.at("dtype").get<std::string>() != "f32le")
      throw DataError("unsupported dtype in " + json_path.string() +
                      " (only f32le is supported)");
    if (j.at("order").get<std::string>() != "x-fastest")
      throw DataError("unsupported order in " + json_path.string());
  } catch (const json::exception& e) {
    throw DataError("bad volume sidecar " + json_path.string() + ": " + e.what());
  }
  if (sc.dims.size() != 3 && sc.dims.size() != 4)
    throw DataError("dims must have 3 or 4 entries in " + json_path.string());
  for (int d : sc.dims)
    if (d < 1) throw DataError("non-positive dim in " + json_path.string());
  return sc;
}

std::vector<float> read_payload(const std::filesystem::path& vol_path, std::size_t count) {
  std::ifstream in(vol_path, std::ios::binary);
  if (!in) throw DataError("missing volume payload: " + vol_path.string());
  in.seekg(0, std::ios::end);
  const auto bytes = static_cast<std::size_t>(in.tellg());
  if (bytes != count * sizeof(float))
    throw DataError("payload length mismatch in " + vol_path.string() + ": expected " +
                    std::to_string(count * sizeof(float)) + " bytes, found " +
                    std::to_string(bytes));
  in.seekg(0);
  std::vector<float> data(count);
  in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(bytes));
  if (!in) throw DataError("short read on " + vol_path.string());
  for (std::size_t i = 0; i < count; ++i)
    if (!std::isfinite(data[i]))
      throw DataError("non-finite value at voxel " + std::to_string(i) + " in " +
                      vol_path.string());
  return data;
}

void write_sidecar(const std::filesystem::path& vol_path, const std::vector<int>& dims,
                   const std::array<double, 3>& voxel) {
  json j;
  j["dims"] = dims;
  j["voxel_size_mm"] = voxel;
  j["dtype"] = "f32le";
  j["order"] = "x-fastest";
  std::ofstream out(vol_path.string() + ".json", std::ios::binary);
  if (!out) throw DataError("cannot write sidecar for " + vol_path.string());
  out << j.dump(2) << "\n";
}

void write_payload(const std::filesystem::path& vol_path, const std::vector<float>& data) {
  std::ofstream out(vol_path, std::ios::binary);
  if (!out) throw DataError("cannot write " + vol_path.string());
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size() * sizeof(float)));
}

}  // namespace

AnyVolume load_volume(const std::filesystem::path& vol_path) {
  const Sidecar sc = read_sidecar(vol_path);
  Dims3 d{sc.dims[0], sc.dims[1], sc.dims[2]};
  if (sc.dims.size() == 3) {
    Volume3D v;
    v.dims = d;
    v.voxel_size_mm = sc.voxel;
    v.data = read_payload(vol_path, d.count());
    return v;
  }
  Volume4D v;
  v.dims = d;
  v.voxel_size_mm = sc.voxel;
  v.nt = sc.dims[3];
  v.data = read_payload(vol_path, d.count() * static_cast<std::size_t>(v.nt));
  return v;
}

Volume3D load_volume3d(const std::filesystem::path& vol_path) {
  AnyVolume v = load_volume(vol_path);
  if (auto* p = std::get_if<Volume3D>(&v)) return std::move(*p);
  throw DataError("expected a 3-D volume in " + vol_path.string());
}

Volume4D load_volume4d(const std::filesystem::path& vol_path) {
  AnyVolume v = load_volume(vol_path);
  if (auto* p = std::get_if<Volume4D>(&v)) return std::move(*p);
  throw DataError("expected a 4-D volume in " + vol_path.string());
}

void save_volume(const std::filesystem::path& vol_path, const Volume3D& vol) {
  write_sidecar(vol_path, {vol.dims.nx, vol.dims.ny, vol.dims.nz}, vol.voxel_size_mm);
  write_payload(vol_path, vol.data);
}

void save_volume(const std::filesystem::path& vol_path, const Volume4D& vol) {
  write_sidecar(vol_path, {vol.dims.nx, vol.dims.ny, vol.dims.nz, vol.nt}, vol.voxel_size_mm);
  write_payload(vol_path, vol.data);
}

}  // namespace bsen
