#pragma once

#include <filesystem>
#include <string>

#include "bsen/behavior.hpp"
#include "bsen/losses.hpp"
#include "bsen/model.hpp"

namespace bsen {

// Versioned checkpoint container: magic "BSENCKPT", u32 version, u32 JSON
// header length, JSON header (config, layer list, seed, epoch, behavior
// tag, center block shape), then the raw little-endian float32 payload in
// declared order (per layer: params then running stats; centers last).
struct Checkpoint {
  BsenModel model;
  CenterBank centers;  // empty for behavior_test == None
  BehaviorTest behavior = BehaviorTest::None;
  int epoch = 0;
};

void save_checkpoint(const std::filesystem::path& path, BsenModel& model,
                     const CenterBank* centers, BehaviorTest behavior, int epoch);

Checkpoint load_checkpoint(const std::filesystem::path& path);

// Hash of the canonical config serialization, embedded in artifacts.
std::string config_hash(const BsenConfig& cfg);

}  // namespace bsen
