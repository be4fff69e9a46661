#pragma once

#include <span>
#include <vector>

#include "bsen/losses.hpp"
#include "bsen/model.hpp"

namespace bsen {

// Training frames ready for batching: already windowed, z-scored and padded,
// stored contiguously (one frame = one 1-channel sample).
struct FrameStore {
  Dims3 dims;
  int count = 0;
  std::vector<float> data;
  std::vector<int> cluster;  // per-frame behavior cluster; empty until stage 2

  std::span<const float> frame(int i) const {
    return {data.data() + dims.count() * i, dims.count()};
  }
  void append(std::span<const float> frame_data, int cluster_id = -1);
};

struct TrainLog {
  std::vector<double> rec_loss;   // per-epoch mean of L_Rec over batches
  std::vector<double> con_loss;   // per-epoch mean of L_C (stage 2 only)
};

// Stage 1: minimize L_Rec with Adam (lr_stage1), targets = inputs.
TrainLog train_stage1_autoencoder(BsenModel& model, const FrameStore& frames,
                                  const BsenConfig& cfg);

// Stage 2: minimize L_Rec + alpha * L_C over all model parameters with Adam
// (lr_stage2). Centers start as cluster means of the stage-1 latents over
// the training frames and are EMA-updated per batch; gradients do not flow
// into them. behavior == None runs the same schedule without a contrastive
// term (the CAE baseline path).
struct Stage2Result {
  TrainLog log;
  CenterBank centers;
};
Stage2Result train_stage2_contrastive(BsenModel& model, const FrameStore& frames,
                                      BehaviorTest behavior, const BsenConfig& cfg);

// Encode all frames in inference mode; one flattened latent row per frame.
std::vector<std::vector<float>> encode_frames(BsenModel& model, const FrameStore& frames);

}  // namespace bsen
