#include "bsen/volume.hpp"

#include <cmath>
#include <cstring>

#include "bsen/error.hpp"

namespace bsen {

std::string to_string(const Dims3& d) {
  return std::to_string(d.nx) + "x" + std::to_string(d.ny) + "x" + std::to_string(d.nz);
}

Volume3D make_volume(Dims3 dims, std::array<double, 3> voxel) {
  Volume3D v;
  v.dims = dims;
  v.voxel_size_mm = voxel;
  v.data.assign(dims.count(), 0.0f);
  return v;
}

Volume3D Volume4D::frame_volume(int t) const {
  Volume3D v;
  v.dims = dims;
  v.voxel_size_mm = voxel_size_mm;
  v.data.assign(frame(t), frame(t) + dims.count());
  return v;
}

Volume4D select_time_window(const Volume4D& scan, int start, int end) {
  if (start < 1 || end < start || end > scan.nt)
    throw DataError("select_time_window: window [" + std::to_string(start) + "," +
                    std::to_string(end) + "] out of range for nt=" + std::to_string(scan.nt) +
                    " (1-based inclusive)");
  Volume4D out;
  out.dims = scan.dims;
  out.voxel_size_mm = scan.voxel_size_mm;
  out.nt = end - start + 1;
  out.data.assign(scan.frame(start - 1), scan.frame(start - 1) + scan.dims.count() * out.nt);
  return out;
}

Volume3D time_average(const Volume4D& scan) {
  if (scan.nt < 1) throw DataError("time_average: empty scan");
  Volume3D out = make_volume(scan.dims, scan.voxel_size_mm);
  const std::size_t n = scan.dims.count();
  std::vector<double> acc(n, 0.0);
  for (int t = 0; t < scan.nt; ++t) {
    const float* f = scan.frame(t);
    for (std::size_t i = 0; i < n; ++i) acc[i] += f[i];
  }
  const double inv = 1.0 / scan.nt;
  for (std::size_t i = 0; i < n; ++i) out.data[i] = static_cast<float>(acc[i] * inv);
  return out;
}

Volume3D normalize_volume(const Volume3D& vol) {
  const std::size_t n = vol.data.size();
  if (n == 0) throw DataError("normalize_volume: empty volume");
  double sum = 0.0;
  for (float v : vol.data) sum += v;
  const double mean = sum / static_cast<double>(n);
  double sq = 0.0;
  for (float v : vol.data) {
    const double d = v - mean;
    sq += d * d;
  }
  const double sd = std::sqrt(sq / static_cast<double>(n));
  Volume3D out = vol;
  if (sd < 1e-8) {
    for (auto& v : out.data) v = static_cast<float>(v - mean);
  } else {
    const double inv = 1.0 / sd;
    for (auto& v : out.data) v = static_cast<float>((v - mean) * inv);
  }
  return out;
}

Volume3D pad_volume(const Volume3D& vol, Dims3 target) {
  const Dims3& s = vol.dims;
  if (target.nx < s.nx || target.ny < s.ny || target.nz < s.nz)
    throw DataError("pad_volume: target " + to_string(target) + " smaller than source " +
                    to_string(s));
  const int ox = (target.nx - s.nx) / 2;
  const int oy = (target.ny - s.ny) / 2;
  const int oz = (target.nz - s.nz) / 2;
  Volume3D out = make_volume(target, vol.voxel_size_mm);
  for (int z = 0; z < s.nz; ++z)
    for (int y = 0; y < s.ny; ++y)
      std::memcpy(&out.at(ox, oy + y, oz + z), &vol.at(0, y, z), sizeof(float) * s.nx);
  return out;
}

}  // namespace bsen
