#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace bsen::nn {

// Dense 5-D activation tensor (batch, channels, nx, ny, nz), x fastest:
//   offset = x + nx*(y + ny*(z + nz*(c + channels*b)))
// so a Volume3D maps straight into one channel slab.
template <typename T>
struct Tensor5 {
  int n = 0, c = 0, nx = 0, ny = 0, nz = 0;
  std::vector<T> data;

  Tensor5() = default;
  Tensor5(int n_, int c_, int nx_, int ny_, int nz_) { resize(n_, c_, nx_, ny_, nz_); }

  void resize(int n_, int c_, int nx_, int ny_, int nz_) {
    if (n_ < 1 || c_ < 1 || nx_ < 1 || ny_ < 1 || nz_ < 1)
      throw std::invalid_argument("Tensor5: all dims must be >= 1");
    n = n_; c = c_; nx = nx_; ny = ny_; nz = nz_;
    data.assign(static_cast<std::size_t>(n) * c * nx * ny * nz, T(0));
  }

  std::size_t size() const { return data.size(); }
  std::size_t spatial() const { return static_cast<std::size_t>(nx) * ny * nz; }
  std::size_t sample_size() const { return spatial() * c; }

  std::size_t offset(int b, int ch, int x, int y, int z) const {
    return static_cast<std::size_t>(x) +
           static_cast<std::size_t>(nx) *
               (static_cast<std::size_t>(y) +
                static_cast<std::size_t>(ny) *
                    (static_cast<std::size_t>(z) +
                     static_cast<std::size_t>(nz) *
                         (static_cast<std::size_t>(ch) + static_cast<std::size_t>(c) * b)));
  }

  T& at(int b, int ch, int x, int y, int z) { return data[offset(b, ch, x, y, z)]; }
  const T& at(int b, int ch, int x, int y, int z) const { return data[offset(b, ch, x, y, z)]; }

  T* sample(int b) { return data.data() + sample_size() * b; }
  const T* sample(int b) const { return data.data() + sample_size() * b; }

  T* channel(int b, int ch) { return data.data() + offset(b, ch, 0, 0, 0); }
  const T* channel(int b, int ch) const { return data.data() + offset(b, ch, 0, 0, 0); }

  bool same_shape(const Tensor5& o) const {
    return n == o.n && c == o.c && nx == o.nx && ny == o.ny && nz == o.nz;
  }

  void fill(T v) { std::fill(data.begin(), data.end(), v); }

  template <typename U>
  Tensor5<U> cast() const {
    Tensor5<U> out(n, c, nx, ny, nz);
    for (std::size_t i = 0; i < data.size(); ++i) out.data[i] = static_cast<U>(data[i]);
    return out;
  }
};

}  // namespace bsen::nn
