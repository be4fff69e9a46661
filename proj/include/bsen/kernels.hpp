#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "bsen/tensor.hpp"

// OpenMP kernels for the 3x3x3 / stride 1 / pad 1 architecture.
//
// Every parallel loop is ownership-partitioned: each accumulator is written
// by exactly one thread and its accumulation order does not depend on the
// schedule, so results are identical for any thread count. Inner loops run
// along x (the contiguous axis).

namespace bsen::nn {

namespace detail {
// Valid output-x range [lo, hi) so that xx + dx stays inside [0, nx).
inline void x_range(int dx, int nx, int& lo, int& hi) {
  lo = std::max(0, -dx);
  hi = std::min(nx, nx - dx);
}
}  // namespace detail

template <typename T>
void conv3d_forward(const Tensor5<T>& x, const T* w, const T* bias, int out_c, Tensor5<T>& y) {
  const int in_c = x.c, nx = x.nx, ny = x.ny, nz = x.nz;
  y.resize(x.n, out_c, nx, ny, nz);
#pragma omp parallel for collapse(2) schedule(static)
  for (int b = 0; b < x.n; ++b)
    for (int oc = 0; oc < out_c; ++oc) {
      for (int z = 0; z < nz; ++z)
        for (int yy = 0; yy < ny; ++yy) {
          T* out_row = &y.at(b, oc, 0, yy, z);
          const T bv = bias ? bias[oc] : T(0);
          for (int xx = 0; xx < nx; ++xx) out_row[xx] = bv;
          for (int ic = 0; ic < in_c; ++ic)
            for (int kz = 0; kz < 3; ++kz) {
              const int sz = z + kz - 1;
              if (sz < 0 || sz >= nz) continue;
              for (int ky = 0; ky < 3; ++ky) {
                const int sy = yy + ky - 1;
                if (sy < 0 || sy >= ny) continue;
                const T* in_row = &x.at(b, ic, 0, sy, sz);
                const T* wk = w + (((static_cast<std::size_t>(oc) * in_c + ic) * 3 + kz) * 3 + ky) * 3;
                for (int kx = 0; kx < 3; ++kx) {
                  const int dx = kx - 1;
                  const T wv = wk[kx];
                  int lo, hi;
                  detail::x_range(dx, nx, lo, hi);
                  for (int xx = lo; xx < hi; ++xx) out_row[xx] += wv * in_row[xx + dx];
                }
              }
            }
        }
    }
}

template <typename T>
void conv3d_backward(const Tensor5<T>& x, const T* w, const Tensor5<T>& gy,
                     Tensor5<T>& gx, T* gw, T* gb) {
  const int in_c = x.c, out_c = gy.c, nx = x.nx, ny = x.ny, nz = x.nz;
  gx.resize(x.n, in_c, nx, ny, nz);
  gx.fill(T(0));

  // Bias and weight gradients: one thread owns one output channel.
#pragma omp parallel for schedule(static)
  for (int oc = 0; oc < out_c; ++oc) {
    T gbacc = T(0);
    T* gwoc = gw + static_cast<std::size_t>(oc) * in_c * 27;
    for (std::size_t i = 0; i < static_cast<std::size_t>(in_c) * 27; ++i) gwoc[i] = T(0);
    for (int b = 0; b < x.n; ++b)
      for (int z = 0; z < nz; ++z)
        for (int yy = 0; yy < ny; ++yy) {
          const T* g_row = &gy.at(b, oc, 0, yy, z);
          {
            T s = T(0);
#pragma omp simd reduction(+ : s)
            for (int xx = 0; xx < nx; ++xx) s += g_row[xx];
            gbacc += s;
          }
          for (int ic = 0; ic < in_c; ++ic)
            for (int kz = 0; kz < 3; ++kz) {
              const int sz = z + kz - 1;
              if (sz < 0 || sz >= nz) continue;
              for (int ky = 0; ky < 3; ++ky) {
                const int sy = yy + ky - 1;
                if (sy < 0 || sy >= ny) continue;
                const T* in_row = &x.at(b, ic, 0, sy, sz);
                T* gwk = gwoc + ((static_cast<std::size_t>(ic) * 3 + kz) * 3 + ky) * 3;
                for (int kx = 0; kx < 3; ++kx) {
                  const int dx = kx - 1;
                  int lo, hi;
                  detail::x_range(dx, nx, lo, hi);
                  T s = T(0);
#pragma omp simd reduction(+ : s)
                  for (int xx = lo; xx < hi; ++xx) s += g_row[xx] * in_row[xx + dx];
                  gwk[kx] += s;
                }
              }
            }
        }
    gb[oc] = gbacc;
  }

  // Input gradient: full correlation with the flipped kernel; one thread
  // owns one (batch, input-channel) slab.
#pragma omp parallel for collapse(2) schedule(static)
  for (int b = 0; b < x.n; ++b)
    for (int ic = 0; ic < in_c; ++ic) {
      for (int z = 0; z < nz; ++z)
        for (int yy = 0; yy < ny; ++yy) {
          T* gx_row = &gx.at(b, ic, 0, yy, z);
          for (int oc = 0; oc < out_c; ++oc)
            for (int kz = 0; kz < 3; ++kz) {
              const int sz = z - (kz - 1);
              if (sz < 0 || sz >= nz) continue;
              for (int ky = 0; ky < 3; ++ky) {
                const int sy = yy - (ky - 1);
                if (sy < 0 || sy >= ny) continue;
                const T* g_row = &gy.at(b, oc, 0, sy, sz);
                const T* wk = w + (((static_cast<std::size_t>(oc) * in_c + ic) * 3 + kz) * 3 + ky) * 3;
                for (int kx = 0; kx < 3; ++kx) {
                  const int dx = kx - 1;
                  const T wv = wk[kx];
                  // gx[sx] += gy[sx - dx] * w: shift is the negative of forward.
                  int lo, hi;
                  detail::x_range(-dx, nx, lo, hi);
                  for (int xx = lo; xx < hi; ++xx) gx_row[xx] += wv * g_row[xx - dx];
                }
              }
            }
        }
    }
}

template <typename T>
void maxpool3d_forward(const Tensor5<T>& x, Tensor5<T>& y, std::vector<std::int64_t>& argmax) {
  y.resize(x.n, x.c, x.nx / 2, x.ny / 2, x.nz / 2);
  argmax.assign(y.size(), -1);
#pragma omp parallel for collapse(2) schedule(static)
  for (int b = 0; b < x.n; ++b)
    for (int c = 0; c < x.c; ++c)
      for (int z = 0; z < y.nz; ++z)
        for (int yy = 0; yy < y.ny; ++yy)
          for (int xx = 0; xx < y.nx; ++xx) {
            T best{};
            std::int64_t best_i = -1;
            for (int dz = 0; dz < 2; ++dz)
              for (int dy = 0; dy < 2; ++dy)
                for (int dx = 0; dx < 2; ++dx) {
                  const std::size_t off = x.offset(b, c, 2 * xx + dx, 2 * yy + dy, 2 * z + dz);
                  if (best_i < 0 || x.data[off] > best) {  // ties: lowest index wins
                    best = x.data[off];
                    best_i = static_cast<std::int64_t>(off);
                  }
                }
            const std::size_t oi = y.offset(b, c, xx, yy, z);
            y.data[oi] = best;
            argmax[oi] = best_i;
          }
}

template <typename T>
void maxpool3d_backward(const Tensor5<T>& gy, const std::vector<std::int64_t>& argmax,
                        Tensor5<T>& gx) {
  gx.fill(T(0));
  // Pool blocks are disjoint, so scattering per (b, c) slab is race-free.
#pragma omp parallel for collapse(2) schedule(static)
  for (int b = 0; b < gy.n; ++b)
    for (int c = 0; c < gy.c; ++c) {
      const std::size_t base = gy.offset(b, c, 0, 0, 0);
      const std::size_t cnt = gy.spatial();
      for (std::size_t i = 0; i < cnt; ++i)
        gx.data[static_cast<std::size_t>(argmax[base + i])] += gy.data[base + i];
    }
}

template <typename T>
void upsample2_forward(const Tensor5<T>& x, Tensor5<T>& y) {
  y.resize(x.n, x.c, 2 * x.nx, 2 * x.ny, 2 * x.nz);
#pragma omp parallel for collapse(2) schedule(static)
  for (int b = 0; b < x.n; ++b)
    for (int c = 0; c < x.c; ++c)
      for (int z = 0; z < y.nz; ++z)
        for (int yy = 0; yy < y.ny; ++yy) {
          const T* in_row = &x.at(b, c, 0, yy / 2, z / 2);
          T* out_row = &y.at(b, c, 0, yy, z);
          for (int xx = 0; xx < y.nx; ++xx) out_row[xx] = in_row[xx / 2];
        }
}

template <typename T>
void upsample2_backward(const Tensor5<T>& gy, Tensor5<T>& gx) {
  // gx has half the spatial dims; each source voxel sums its 2x2x2 block.
  gx.resize(gy.n, gy.c, gy.nx / 2, gy.ny / 2, gy.nz / 2);
#pragma omp parallel for collapse(2) schedule(static)
  for (int b = 0; b < gy.n; ++b)
    for (int c = 0; c < gy.c; ++c)
      for (int z = 0; z < gx.nz; ++z)
        for (int yy = 0; yy < gx.ny; ++yy)
          for (int xx = 0; xx < gx.nx; ++xx) {
            T s = T(0);
            for (int dz = 0; dz < 2; ++dz)
              for (int dy = 0; dy < 2; ++dy)
                for (int dx = 0; dx < 2; ++dx)
                  s += gy.at(b, c, 2 * xx + dx, 2 * yy + dy, 2 * z + dz);
            gx.at(b, c, xx, yy, z) = s;
          }
}

template <typename T>
void relu_forward(const Tensor5<T>& x, Tensor5<T>& y) {
  y.resize(x.n, x.c, x.nx, x.ny, x.nz);
  const std::int64_t total = static_cast<std::int64_t>(x.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < total; ++i) y.data[i] = x.data[i] > T(0) ? x.data[i] : T(0);
}

template <typename T>
void relu_backward(const Tensor5<T>& y, const Tensor5<T>& gy, Tensor5<T>& gx) {
  gx.resize(gy.n, gy.c, gy.nx, gy.ny, gy.nz);
  const std::int64_t total = static_cast<std::int64_t>(gy.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < total; ++i) gx.data[i] = y.data[i] > T(0) ? gy.data[i] : T(0);
}

// Per-channel mean and biased variance over batch x spatial, accumulated in
// double; one thread owns one channel.
template <typename T>
void channel_moments(const Tensor5<T>& x, std::vector<double>& mean, std::vector<double>& var) {
  mean.assign(x.c, 0.0);
  var.assign(x.c, 0.0);
  const double cnt = static_cast<double>(x.n) * static_cast<double>(x.spatial());
#pragma omp parallel for schedule(static)
  for (int c = 0; c < x.c; ++c) {
    double s = 0.0;
    for (int b = 0; b < x.n; ++b) {
      const T* p = x.channel(b, c);
      for (std::size_t i = 0; i < x.spatial(); ++i) s += static_cast<double>(p[i]);
    }
    const double m = s / cnt;
    double sq = 0.0;
    for (int b = 0; b < x.n; ++b) {
      const T* p = x.channel(b, c);
      for (std::size_t i = 0; i < x.spatial(); ++i) {
        const double d = static_cast<double>(p[i]) - m;
        sq += d * d;
      }
    }
    mean[c] = m;
    var[c] = sq / cnt;
  }
}

}  // namespace bsen::nn
