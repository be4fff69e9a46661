#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "bsen/layers.hpp"
#include "bsen/volume.hpp"

namespace bsen {

struct BsenConfig {
  std::array<int, 3> encoder_channels{32, 16, 8};
  Dims3 input_dims{64, 80, 64};
  double alpha = 0.5;
  double delta = 1.0;
  int batch_size = 32;
  int epochs_stage1 = 30;
  int epochs_stage2 = 30;
  double lr_stage1 = 0.0001;
  double lr_stage2 = 0.0005;
  double center_momentum = 0.5;
  double bn_momentum = 0.1;
  double bn_eps = 1e-5;
  std::uint64_t seed = 1;

  void validate() const;
  Dims3 bottleneck_dims() const {
    return {input_dims.nx / 8, input_dims.ny / 8, input_dims.nz / 8};
  }
  // Flattened bottleneck dimension (channels x spatial after three poolings).
  std::size_t latent_dim() const { return encoder_channels[2] * bottleneck_dims().count(); }
  std::size_t pooled_feature_dim() const { return bottleneck_dims().count(); }
};

// Encoder: [conv(3x3x3) + bn + relu + maxpool] x3 with channels 32-16-8.
// Decoder: [upsample + conv + bn + relu] x2 with channels 16, 32, then
// upsample + conv to 1 channel + relu (no batchnorm on the last conv).
template <typename T>
struct BsenModelT {
  BsenConfig cfg;
  nn::Stack<T> stack;

  static constexpr int kEncoderLayers = 12;  // bottleneck = output of layer 11

  static BsenModelT build(const BsenConfig& cfg);

  const nn::Tensor5<T>& encode(const nn::Tensor5<T>& x, bool training = false) {
    check_input(x);
    return stack.forward_range(0, kEncoderLayers, x, training);
  }
  const nn::Tensor5<T>& decode(const nn::Tensor5<T>& latent, bool training = false) {
    const Dims3 bd = cfg.bottleneck_dims();
    if (latent.c != cfg.encoder_channels[2] || latent.nx != bd.nx || latent.ny != bd.ny ||
        latent.nz != bd.nz)
      throw std::invalid_argument("decode: latent shape does not match the bottleneck");
    return stack.forward_range(kEncoderLayers, stack.size(), latent, training);
  }
  const nn::Tensor5<T>& forward(const nn::Tensor5<T>& x, bool training) {
    check_input(x);
    return stack.forward(x, training);
  }
  const nn::Tensor5<T>& bottleneck() const { return stack.layers[kEncoderLayers - 1]->output(); }

 private:
  void check_input(const nn::Tensor5<T>& x) const {
    if (x.c != 1 || x.nx != cfg.input_dims.nx || x.ny != cfg.input_dims.ny ||
        x.nz != cfg.input_dims.nz)
      throw std::invalid_argument("model input must be 1 x " + to_string(cfg.input_dims) +
                                  ", got " + std::to_string(x.c) + " x " +
                                  to_string({x.nx, x.ny, x.nz}));
  }
};

using BsenModel = BsenModelT<float>;

template <typename T>
BsenModelT<T> BsenModelT<T>::build(const BsenConfig& cfg) {
  cfg.validate();
  BsenModelT<T> m;
  m.cfg = cfg;
  auto& L = m.stack.layers;
  const auto [c0, c1, c2] = cfg.encoder_channels;
  auto conv = [&](int in, int out) { L.push_back(std::make_unique<nn::Conv3d<T>>(in, out)); };
  auto bn = [&](int c) {
    L.push_back(std::make_unique<nn::BatchNorm3d<T>>(c, cfg.bn_momentum, cfg.bn_eps));
  };
  auto relu = [&] { L.push_back(std::make_unique<nn::ReLU<T>>()); };
  auto pool = [&] { L.push_back(std::make_unique<nn::MaxPool3d<T>>()); };
  auto up = [&] { L.push_back(std::make_unique<nn::UpsampleNearest<T>>()); };

  conv(1, c0); bn(c0); relu(); pool();
  conv(c0, c1); bn(c1); relu(); pool();
  conv(c1, c2); bn(c2); relu(); pool();

  up(); conv(c2, c1); bn(c1); relu();
  up(); conv(c1, c0); bn(c0); relu();
  up(); conv(c0, 1); relu();

  Rng init_rng = Rng::stream(cfg.seed, "init");
  for (auto& layer : L)
    if (auto* c = dynamic_cast<nn::Conv3d<T>*>(layer.get())) c->init_weights(init_rng);
  return m;
}

}  // namespace bsen
