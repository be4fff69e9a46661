#pragma once

#include "bsen/tensor.hpp"

// Serial reference implementations of every kernel, written as direct
// nested loops over the defining sums. They are the test oracle for the
// OpenMP kernels and the baseline for the kernel benchmark; keep them
// independent of bsen/kernels.hpp.

namespace bsen::nnref {

using nn::Tensor5;

// Conv weight layout, shared with the fast kernels:
//   w[(((oc*inC + ic)*3 + kz)*3 + ky)*3 + kx], taps at offsets k-1 in {-1,0,1}.
template <typename T>
void conv3d_forward(const Tensor5<T>& x, const T* w, const T* bias, int out_c,
                    Tensor5<T>& y) {
  const int in_c = x.c;
  y.resize(x.n, out_c, x.nx, x.ny, x.nz);
  for (int b = 0; b < x.n; ++b)
    for (int oc = 0; oc < out_c; ++oc)
      for (int z = 0; z < x.nz; ++z)
        for (int yy = 0; yy < x.ny; ++yy)
          for (int xx = 0; xx < x.nx; ++xx) {
            T acc = bias ? bias[oc] : T(0);
            for (int ic = 0; ic < in_c; ++ic)
              for (int kz = 0; kz < 3; ++kz)
                for (int ky = 0; ky < 3; ++ky)
                  for (int kx = 0; kx < 3; ++kx) {
                    const int sz = z + kz - 1;
                    const int sy = yy + ky - 1;
                    const int sx = xx + kx - 1;
                    if (sx < 0 || sx >= x.nx || sy < 0 || sy >= x.ny || sz < 0 || sz >= x.nz)
                      continue;  // zero padding
                    acc += w[(((static_cast<std::size_t>(oc) * in_c + ic) * 3 + kz) * 3 + ky) * 3 + kx] *
                           x.at(b, ic, sx, sy, sz);
                  }
            y.at(b, oc, xx, yy, z) = acc;
          }
}

template <typename T>
void conv3d_backward(const Tensor5<T>& x, const T* w, const Tensor5<T>& gy,
                     Tensor5<T>& gx, T* gw, T* gb) {
  const int in_c = x.c;
  const int out_c = gy.c;
  gx.resize(x.n, x.c, x.nx, x.ny, x.nz);
  gx.fill(T(0));
  for (std::size_t i = 0; i < static_cast<std::size_t>(out_c) * in_c * 27; ++i) gw[i] = T(0);
  for (int oc = 0; oc < out_c; ++oc) gb[oc] = T(0);

  for (int b = 0; b < x.n; ++b)
    for (int oc = 0; oc < out_c; ++oc)
      for (int z = 0; z < x.nz; ++z)
        for (int yy = 0; yy < x.ny; ++yy)
          for (int xx = 0; xx < x.nx; ++xx) {
            const T g = gy.at(b, oc, xx, yy, z);
            gb[oc] += g;
            for (int ic = 0; ic < in_c; ++ic)
              for (int kz = 0; kz < 3; ++kz)
                for (int ky = 0; ky < 3; ++ky)
                  for (int kx = 0; kx < 3; ++kx) {
                    const int sz = z + kz - 1;
                    const int sy = yy + ky - 1;
                    const int sx = xx + kx - 1;
                    if (sx < 0 || sx >= x.nx || sy < 0 || sy >= x.ny || sz < 0 || sz >= x.nz)
                      continue;
                    const std::size_t wi =
                        (((static_cast<std::size_t>(oc) * in_c + ic) * 3 + kz) * 3 + ky) * 3 + kx;
                    gw[wi] += g * x.at(b, ic, sx, sy, sz);
                    gx.at(b, ic, sx, sy, sz) += g * w[wi];
                  }
          }
}

template <typename T>
void maxpool3d_forward(const Tensor5<T>& x, Tensor5<T>& y, std::vector<std::int64_t>* argmax) {
  y.resize(x.n, x.c, x.nx / 2, x.ny / 2, x.nz / 2);
  if (argmax) argmax->assign(y.size(), -1);
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
                  // ties: first (lowest linear index) element wins
                  if (best_i < 0 || x.data[off] > best) {
                    best = x.data[off];
                    best_i = static_cast<std::int64_t>(off);
                  }
                }
            const std::size_t oi = y.offset(b, c, xx, yy, z);
            y.data[oi] = best;
            if (argmax) (*argmax)[oi] = best_i;
          }
}

template <typename T>
void upsample2_forward(const Tensor5<T>& x, Tensor5<T>& y) {
  y.resize(x.n, x.c, 2 * x.nx, 2 * x.ny, 2 * x.nz);
  for (int b = 0; b < x.n; ++b)
    for (int c = 0; c < x.c; ++c)
      for (int z = 0; z < y.nz; ++z)
        for (int yy = 0; yy < y.ny; ++yy)
          for (int xx = 0; xx < y.nx; ++xx)
            y.at(b, c, xx, yy, z) = x.at(b, c, xx / 2, yy / 2, z / 2);
}

template <typename T>
void relu_forward(const Tensor5<T>& x, Tensor5<T>& y) {
  y.resize(x.n, x.c, x.nx, x.ny, x.nz);
  for (std::size_t i = 0; i < x.size(); ++i) y.data[i] = x.data[i] > T(0) ? x.data[i] : T(0);
}

// Per-channel batch mean and (biased) variance over batch x spatial.
template <typename T>
void channel_moments(const Tensor5<T>& x, std::vector<double>& mean, std::vector<double>& var) {
  mean.assign(x.c, 0.0);
  var.assign(x.c, 0.0);
  const double cnt = static_cast<double>(x.n) * static_cast<double>(x.spatial());
  for (int c = 0; c < x.c; ++c) {
    double s = 0.0;
    for (int b = 0; b < x.n; ++b) {
      const T* p = x.channel(b, c);
      for (std::size_t i = 0; i < x.spatial(); ++i) s += static_cast<double>(p[i]);
    }
    mean[c] = s / cnt;
    double sq = 0.0;
    for (int b = 0; b < x.n; ++b) {
      const T* p = x.channel(b, c);
      for (std::size_t i = 0; i < x.spatial(); ++i) {
        const double d = static_cast<double>(p[i]) - mean[c];
        sq += d * d;
      }
    }
    var[c] = sq / cnt;
  }
}

}  // namespace bsen::nnref
