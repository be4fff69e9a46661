#include "bsen/trainer.hpp"

#include <cstring>
#include <iostream>
#include <numeric>

#include "bsen/adam.hpp"
#include "bsen/error.hpp"
#include "bsen/rng.hpp"

namespace bsen {

void FrameStore::append(std::span<const float> frame_data, int cluster_id) {
  if (frame_data.size() != dims.count())
    throw DataError("FrameStore: frame size does not match dims " + to_string(dims));
  data.insert(data.end(), frame_data.begin(), frame_data.end());
  cluster.push_back(cluster_id);
  ++count;
}

namespace {

void check_frames(const FrameStore& frames, const BsenConfig& cfg) {
  if (frames.count == 0) throw DataError("training set is empty");
  if (!(frames.dims == cfg.input_dims))
    throw DataError("training frames are " + to_string(frames.dims) + " but the model expects " +
                    to_string(cfg.input_dims));
}

void gather_batch(const FrameStore& frames, std::span<const int> idx, nn::Tensor5<float>& x) {
  const Dims3 d = frames.dims;
  x.resize(static_cast<int>(idx.size()), 1, d.nx, d.ny, d.nz);
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const auto f = frames.frame(idx[k]);
    std::memcpy(x.sample(static_cast<int>(k)), f.data(), f.size() * sizeof(float));
  }
}

std::vector<std::vector<int>> make_batches(int count, int batch_size, Rng& rng) {
  std::vector<int> order(count);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  std::vector<std::vector<int>> batches;
  for (int lo = 0; lo < count; lo += batch_size) {
    const int hi = std::min(count, lo + batch_size);
    batches.emplace_back(order.begin() + lo, order.begin() + hi);
  }
  return batches;
}

}  // namespace

TrainLog train_stage1_autoencoder(BsenModel& model, const FrameStore& frames,
                                  const BsenConfig& cfg) {
  check_frames(frames, cfg);
  TrainLog log;
  nn::AdamOptimizer<float> opt({.lr = cfg.lr_stage1});
  Rng shuffle_rng = Rng::stream(cfg.seed, "stage1.shuffle");
  nn::Tensor5<float> x, gtop;
  for (int epoch = 0; epoch < cfg.epochs_stage1; ++epoch) {
    const auto batches = make_batches(frames.count, cfg.batch_size, shuffle_rng);
    double epoch_loss = 0.0;
    for (const auto& idx : batches) {
      gather_batch(frames, idx, x);
      const auto& out = model.forward(x, true);
      epoch_loss += reconstruction_loss(out, x, &gtop);
      model.stack.backward(gtop);
      opt.step(model.stack.param_blocks(), model.stack.grad_blocks());
    }
    log.rec_loss.push_back(epoch_loss / static_cast<double>(batches.size()));
    std::cerr << "[stage1] epoch " << epoch + 1 << "/" << cfg.epochs_stage1
              << " mean L_Rec = " << log.rec_loss.back() << "\n";
  }
  return log;
}

std::vector<std::vector<float>> encode_frames(BsenModel& model, const FrameStore& frames) {
  std::vector<std::vector<float>> latents;
  latents.reserve(frames.count);
  nn::Tensor5<float> x;
  const int bs = model.cfg.batch_size;
  std::vector<int> idx;
  for (int lo = 0; lo < frames.count; lo += bs) {
    const int hi = std::min(frames.count, lo + bs);
    idx.resize(hi - lo);
    std::iota(idx.begin(), idx.end(), lo);
    gather_batch(frames, idx, x);
    const auto& z = model.encode(x, false);
    for (int b = 0; b < z.n; ++b)
      latents.emplace_back(z.sample(b), z.sample(b) + z.sample_size());
  }
  return latents;
}

Stage2Result train_stage2_contrastive(BsenModel& model, const FrameStore& frames,
                                      BehaviorTest behavior, const BsenConfig& cfg) {
  check_frames(frames, cfg);
  const bool contrastive = behavior != BehaviorTest::None;
  Stage2Result res;

  if (contrastive) {
    if (frames.cluster.size() != static_cast<std::size_t>(frames.count))
      throw DataError("stage 2 requires a cluster assignment for every training frame");
    std::array<std::int64_t, kNumClusters> counts{};
    for (int c : frames.cluster) {
      if (c < 0 || c >= kNumClusters) throw DataError("stage 2: bad cluster assignment");
      counts[c]++;
    }
    for (int j = 0; j < kNumClusters; ++j)
      if (counts[j] == 0)
        throw DataError(std::string("behavior cluster ") + (j == 0 ? "healthy" : "impaired") +
                        " has zero training subjects for " + behavior_name(behavior));

    // Centers: cluster means of the stage-1 latents over the training set.
    const auto latents = encode_frames(model, frames);
    const std::size_t dim = latents.front().size();
    res.centers = CenterBank::zeros(dim);
    std::vector<std::vector<double>> acc(kNumClusters, std::vector<double>(dim, 0.0));
    for (int i = 0; i < frames.count; ++i) {
      const int c = frames.cluster[i];
      for (std::size_t k = 0; k < dim; ++k) acc[c][k] += latents[i][k];
    }
    for (int j = 0; j < kNumClusters; ++j)
      for (std::size_t k = 0; k < dim; ++k)
        res.centers.centers[j][k] = static_cast<float>(acc[j][k] / counts[j]);
  }

  nn::AdamOptimizer<float> opt({.lr = cfg.lr_stage2});
  // One shuffle stream for every stage-2 variant so that alpha = 0 runs are
  // bit-identical to the CAE baseline path.
  Rng shuffle_rng = Rng::stream(cfg.seed, "stage2.shuffle");
  nn::Tensor5<float> x, gtop, glatent;
  std::vector<int> batch_cluster;
  for (int epoch = 0; epoch < cfg.epochs_stage2; ++epoch) {
    const auto batches = make_batches(frames.count, cfg.batch_size, shuffle_rng);
    double epoch_rec = 0.0, epoch_con = 0.0;
    for (const auto& idx : batches) {
      gather_batch(frames, idx, x);
      const auto& out = model.forward(x, true);
      epoch_rec += reconstruction_loss(out, x, &gtop);
      if (contrastive) {
        batch_cluster.resize(idx.size());
        for (std::size_t k = 0; k < idx.size(); ++k) batch_cluster[k] = frames.cluster[idx[k]];
        const auto& latent = model.bottleneck();
        if (cfg.alpha != 0.0) {
          epoch_con += contrastive_loss(latent, res.centers, batch_cluster, cfg.delta, &glatent);
          const std::int64_t total = static_cast<std::int64_t>(glatent.size());
          const float a = static_cast<float>(cfg.alpha);
#pragma omp parallel for schedule(static)
          for (std::int64_t i = 0; i < total; ++i) glatent.data[i] *= a;
          model.stack.backward(gtop, BsenModel::kEncoderLayers, &glatent);
        } else {
          epoch_con += contrastive_loss(latent, res.centers, batch_cluster, cfg.delta, nullptr);
          model.stack.backward(gtop);
        }
        opt.step(model.stack.param_blocks(), model.stack.grad_blocks());
        update_centers(latent, batch_cluster, res.centers, cfg.center_momentum);
      } else {
        model.stack.backward(gtop);
        opt.step(model.stack.param_blocks(), model.stack.grad_blocks());
      }
    }
    res.log.rec_loss.push_back(epoch_rec / static_cast<double>(batches.size()));
    res.log.con_loss.push_back(epoch_con / static_cast<double>(batches.size()));
    std::cerr << "[stage2" << (contrastive ? std::string("/") + behavior_name(behavior) : "")
              << "] epoch " << epoch + 1 << "/" << cfg.epochs_stage2
              << " mean L_Rec = " << res.log.rec_loss.back();
    if (contrastive) std::cerr << " mean L_C = " << res.log.con_loss.back();
    std::cerr << "\n";
  }
  return res;
}

}  // namespace bsen
