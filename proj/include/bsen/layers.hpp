#pragma once

#include <array>
#include <cmath>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bsen/kernels.hpp"
#include "bsen/rng.hpp"
#include "bsen/tensor.hpp"

namespace bsen::nn {

// A layer caches whatever its backward pass needs during forward. The input
// tensor is held by reference and must stay alive until backward runs; the
// Stack guarantees this by keeping every intermediate activation as a layer
// member.
template <typename T>
class Layer {
 public:
  virtual ~Layer() = default;
  virtual const Tensor5<T>& forward(const Tensor5<T>& x, bool training) = 0;
  virtual const Tensor5<T>& backward(const Tensor5<T>& gy) = 0;
  virtual std::span<T> params() { return {}; }
  virtual std::span<T> grads() { return {}; }
  // Non-trainable state persisted in checkpoints (batchnorm running stats).
  virtual std::span<T> state() { return {}; }
  virtual std::string_view kind() const = 0;
  const Tensor5<T>& output() const { return y_; }

 protected:
  Tensor5<T> y_;
  Tensor5<T> gx_;
};

template <typename T>
class Conv3d final : public Layer<T> {
 public:
  Conv3d(int in_c, int out_c) : in_c_(in_c), out_c_(out_c) {
    const std::size_t wcount = static_cast<std::size_t>(out_c) * in_c * 27;
    p_.assign(wcount + out_c, T(0));
    g_.assign(p_.size(), T(0));
  }

  // Uniform +-sqrt(1/fan_in), fan_in = in_c * 27.
  void init_weights(Rng& rng) {
    const double bound = std::sqrt(1.0 / (in_c_ * 27.0));
    const std::size_t wcount = static_cast<std::size_t>(out_c_) * in_c_ * 27;
    for (std::size_t i = 0; i < wcount; ++i) p_[i] = static_cast<T>(rng.uniform(-bound, bound));
    for (int i = 0; i < out_c_; ++i) p_[wcount + i] = T(0);
  }

  const Tensor5<T>& forward(const Tensor5<T>& x, bool) override {
    if (x.c != in_c_) throw std::invalid_argument("Conv3d: input channel mismatch");
    x_ = &x;
    conv3d_forward(x, w(), b(), out_c_, this->y_);
    return this->y_;
  }

  const Tensor5<T>& backward(const Tensor5<T>& gy) override {
    if (!x_) throw std::logic_error("Conv3d: backward before forward");
    conv3d_backward(*x_, w(), gy, this->gx_, g_.data(),
                    g_.data() + static_cast<std::size_t>(out_c_) * in_c_ * 27);
    return this->gx_;
  }

  std::span<T> params() override { return p_; }
  std::span<T> grads() override { return g_; }
  std::string_view kind() const override { return "conv"; }
  int in_channels() const { return in_c_; }
  int out_channels() const { return out_c_; }
  const T* w() const { return p_.data(); }
  const T* b() const { return p_.data() + static_cast<std::size_t>(out_c_) * in_c_ * 27; }

 private:
  int in_c_, out_c_;
  std::vector<T> p_, g_;
  const Tensor5<T>* x_ = nullptr;
};

template <typename T>
class BatchNorm3d final : public Layer<T> {
 public:
  explicit BatchNorm3d(int channels, double momentum = 0.1, double eps = 1e-5)
      : c_(channels), momentum_(momentum), eps_(eps) {
    p_.assign(2 * c_, T(0));
    for (int i = 0; i < c_; ++i) p_[i] = T(1);  // gamma = 1, beta = 0
    g_.assign(p_.size(), T(0));
    run_.assign(2 * c_, T(0));
    for (int i = 0; i < c_; ++i) run_[c_ + i] = T(1);  // running var = 1
  }

  const Tensor5<T>& forward(const Tensor5<T>& x, bool training) override {
    if (x.c != c_) throw std::invalid_argument("BatchNorm3d: channel mismatch");
    training_ = training;
    const std::size_t per_c = static_cast<std::size_t>(x.n) * x.spatial();
    if (training) {
      if (per_c < 2)
        throw std::invalid_argument("BatchNorm3d: batch*spatial must be >= 2 in training mode");
      channel_moments(x, mean_, var_);
      for (int c = 0; c < c_; ++c) {
        run_[c] = static_cast<T>((1.0 - momentum_) * run_[c] + momentum_ * mean_[c]);
        run_[c_ + c] = static_cast<T>((1.0 - momentum_) * run_[c_ + c] + momentum_ * var_[c]);
      }
    } else {
      mean_.assign(c_, 0.0);
      var_.assign(c_, 0.0);
      for (int c = 0; c < c_; ++c) {
        mean_[c] = static_cast<double>(run_[c]);
        var_[c] = static_cast<double>(run_[c_ + c]);
      }
    }
    xhat_.resize(x.n, x.c, x.nx, x.ny, x.nz);
    this->y_.resize(x.n, x.c, x.nx, x.ny, x.nz);
    const std::size_t sp = x.spatial();
#pragma omp parallel for collapse(2) schedule(static)
    for (int b = 0; b < x.n; ++b)
      for (int c = 0; c < c_; ++c) {
        const double inv_sd = 1.0 / std::sqrt(var_[c] + eps_);
        const double m = mean_[c];
        const double gamma = static_cast<double>(p_[c]);
        const double beta = static_cast<double>(p_[c_ + c]);
        const T* in = x.channel(b, c);
        T* xh = xhat_.channel(b, c);
        T* out = this->y_.channel(b, c);
        for (std::size_t i = 0; i < sp; ++i) {
          const double v = (static_cast<double>(in[i]) - m) * inv_sd;
          xh[i] = static_cast<T>(v);
          out[i] = static_cast<T>(gamma * v + beta);
        }
      }
    return this->y_;
  }

  const Tensor5<T>& backward(const Tensor5<T>& gy) override {
    const std::size_t sp = gy.spatial();
    const double cnt = static_cast<double>(gy.n) * static_cast<double>(sp);
    this->gx_.resize(gy.n, gy.c, gy.nx, gy.ny, gy.nz);
    std::vector<double> sum_gy(c_, 0.0), sum_gy_xhat(c_, 0.0);
#pragma omp parallel for schedule(static)
    for (int c = 0; c < c_; ++c) {
      double s = 0.0, sx = 0.0;
      for (int b = 0; b < gy.n; ++b) {
        const T* g = gy.channel(b, c);
        const T* xh = xhat_.channel(b, c);
        for (std::size_t i = 0; i < sp; ++i) {
          s += static_cast<double>(g[i]);
          sx += static_cast<double>(g[i]) * static_cast<double>(xh[i]);
        }
      }
      sum_gy[c] = s;
      sum_gy_xhat[c] = sx;
      g_[c] = static_cast<T>(sx);       // d gamma
      g_[c_ + c] = static_cast<T>(s);   // d beta
    }
#pragma omp parallel for collapse(2) schedule(static)
    for (int b = 0; b < gy.n; ++b)
      for (int c = 0; c < c_; ++c) {
        const double inv_sd = 1.0 / std::sqrt(var_[c] + eps_);
        const double gamma = static_cast<double>(p_[c]);
        const T* g = gy.channel(b, c);
        const T* xh = xhat_.channel(b, c);
        T* out = this->gx_.channel(b, c);
        if (training_) {
          const double k1 = sum_gy[c] / cnt;
          const double k2 = sum_gy_xhat[c] / cnt;
          for (std::size_t i = 0; i < sp; ++i)
            out[i] = static_cast<T>(gamma * inv_sd *
                                    (static_cast<double>(g[i]) - k1 - static_cast<double>(xh[i]) * k2));
        } else {
          for (std::size_t i = 0; i < sp; ++i)
            out[i] = static_cast<T>(gamma * inv_sd * static_cast<double>(g[i]));
        }
      }
    return this->gx_;
  }

  std::span<T> params() override { return p_; }
  std::span<T> grads() override { return g_; }
  std::span<T> state() override { return run_; }
  std::string_view kind() const override { return "batchnorm"; }
  int channels() const { return c_; }

 private:
  int c_;
  double momentum_, eps_;
  bool training_ = false;
  std::vector<T> p_, g_, run_;  // run_: [mean(c), var(c)]
  std::vector<double> mean_, var_;
  Tensor5<T> xhat_;
};

template <typename T>
class ReLU final : public Layer<T> {
 public:
  const Tensor5<T>& forward(const Tensor5<T>& x, bool) override {
    relu_forward(x, this->y_);
    return this->y_;
  }
  const Tensor5<T>& backward(const Tensor5<T>& gy) override {
    relu_backward(this->y_, gy, this->gx_);
    return this->gx_;
  }
  std::string_view kind() const override { return "relu"; }
};

template <typename T>
class MaxPool3d final : public Layer<T> {
 public:
  const Tensor5<T>& forward(const Tensor5<T>& x, bool) override {
    if (x.nx % 2 || x.ny % 2 || x.nz % 2)
      throw std::invalid_argument("MaxPool3d: spatial dims must be even");
    in_shape_ = {x.n, x.c, x.nx, x.ny, x.nz};
    maxpool3d_forward(x, this->y_, argmax_);
    return this->y_;
  }
  const Tensor5<T>& backward(const Tensor5<T>& gy) override {
    if (argmax_.empty()) throw std::logic_error("MaxPool3d: backward before forward");
    this->gx_.resize(in_shape_[0], in_shape_[1], in_shape_[2], in_shape_[3], in_shape_[4]);
    maxpool3d_backward(gy, argmax_, this->gx_);
    return this->gx_;
  }
  std::string_view kind() const override { return "maxpool"; }

 private:
  std::vector<std::int64_t> argmax_;
  std::array<int, 5> in_shape_{};
};

template <typename T>
class UpsampleNearest final : public Layer<T> {
 public:
  const Tensor5<T>& forward(const Tensor5<T>& x, bool) override {
    upsample2_forward(x, this->y_);
    return this->y_;
  }
  const Tensor5<T>& backward(const Tensor5<T>& gy) override {
    upsample2_backward(gy, this->gx_);
    return this->gx_;
  }
  std::string_view kind() const override { return "upsample"; }
};

// Plain sequential container. backward() can add an extra gradient at one
// activation boundary, which is how the contrastive loss is injected at the
// bottleneck during stage-2 training.
template <typename T>
class Stack {
 public:
  std::vector<std::unique_ptr<Layer<T>>> layers;

  Layer<T>& operator[](std::size_t i) { return *layers[i]; }
  std::size_t size() const { return layers.size(); }

  const Tensor5<T>& forward(const Tensor5<T>& x, bool training) {
    return forward_range(0, layers.size(), x, training);
  }

  const Tensor5<T>& forward_range(std::size_t lo, std::size_t hi, const Tensor5<T>& x,
                                  bool training) {
    const Tensor5<T>* cur = &x;
    for (std::size_t i = lo; i < hi; ++i) cur = &layers[i]->forward(*cur, training);
    return *cur;
  }

  // inject_boundary = k adds *inject to the gradient of activation a_k (the
  // output of layer k-1) as it flows down. Pass -1 for a plain backward.
  const Tensor5<T>& backward(const Tensor5<T>& gtop, int inject_boundary = -1,
                             const Tensor5<T>* inject = nullptr) {
    const Tensor5<T>* g = &gtop;
    for (int i = static_cast<int>(layers.size()) - 1; i >= 0; --i) {
      if (inject != nullptr && i + 1 == inject_boundary) {
        injected_ = *g;
        if (!injected_.same_shape(*inject))
          throw std::invalid_argument("Stack: inject gradient shape mismatch");
        const std::int64_t total = static_cast<std::int64_t>(injected_.size());
#pragma omp parallel for schedule(static)
        for (std::int64_t j = 0; j < total; ++j) injected_.data[j] += inject->data[j];
        g = &injected_;
      }
      g = &layers[i]->backward(*g);
    }
    return *g;
  }

  std::vector<std::span<T>> param_blocks() {
    std::vector<std::span<T>> out;
    for (auto& l : layers)
      if (!l->params().empty()) out.push_back(l->params());
    return out;
  }
  std::vector<std::span<T>> grad_blocks() {
    std::vector<std::span<T>> out;
    for (auto& l : layers)
      if (!l->grads().empty()) out.push_back(l->grads());
    return out;
  }

 private:
  Tensor5<T> injected_;
};

}  // namespace bsen::nn
