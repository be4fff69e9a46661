#include "bsen/checkpoint.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <span>

#include <json.hpp>

#include "bsen/error.hpp"

namespace bsen {

namespace {

using nlohmann::json;

constexpr char kMagic[8] = {'B', 'S', 'E', 'N', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

json config_to_json(const BsenConfig& c) {
  json j;
  j["encoder_channels"] = c.encoder_channels;
  j["input_dims"] = {c.input_dims.nx, c.input_dims.ny, c.input_dims.nz};
  j["alpha"] = c.alpha;
  j["delta"] = c.delta;
  j["batch_size"] = c.batch_size;
  j["epochs_stage1"] = c.epochs_stage1;
  j["epochs_stage2"] = c.epochs_stage2;
  j["lr_stage1"] = c.lr_stage1;
  j["lr_stage2"] = c.lr_stage2;
  j["center_momentum"] = c.center_momentum;
  j["bn_momentum"] = c.bn_momentum;
  j["bn_eps"] = c.bn_eps;
  j["seed"] = c.seed;
  return j;
}

BsenConfig config_from_json(const json& j) {
  BsenConfig c;
  j.at("encoder_channels").get_to(c.encoder_channels);
  const auto d = j.at("input_dims").get<std::vector<int>>();
  c.input_dims = {d.at(0), d.at(1), d.at(2)};
  j.at("alpha").get_to(c.alpha);
  j.at("delta").get_to(c.delta);
  j.at("batch_size").get_to(c.batch_size);
  j.at("epochs_stage1").get_to(c.epochs_stage1);
  j.at("epochs_stage2").get_to(c.epochs_stage2);
  j.at("lr_stage1").get_to(c.lr_stage1);
  j.at("lr_stage2").get_to(c.lr_stage2);
  j.at("center_momentum").get_to(c.center_momentum);
  j.at("bn_momentum").get_to(c.bn_momentum);
  j.at("bn_eps").get_to(c.bn_eps);
  j.at("seed").get_to(c.seed);
  return c;
}

json layer_entry(nn::Layer<float>& l) {
  json e;
  e["kind"] = std::string(l.kind());
  if (auto* c = dynamic_cast<nn::Conv3d<float>*>(&l)) {
    e["in"] = c->in_channels();
    e["out"] = c->out_channels();
  } else if (auto* b = dynamic_cast<nn::BatchNorm3d<float>*>(&l)) {
    e["channels"] = b->channels();
  }
  e["params"] = l.params().size();
  e["state"] = l.state().size();
  return e;
}

}  // namespace

std::string config_hash(const BsenConfig& cfg) {
  const std::string s = config_to_json(cfg).dump();
  std::uint64_t h = 1469598103934665603ull;
  for (char ch : s) {
    h ^= static_cast<unsigned char>(ch);
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void save_checkpoint(const std::filesystem::path& path, BsenModel& model,
                     const CenterBank* centers, BehaviorTest behavior, int epoch) {
  json header;
  header["behavior_test"] = behavior_name(behavior);
  header["config"] = config_to_json(model.cfg);
  header["config_hash"] = config_hash(model.cfg);
  header["epoch"] = epoch;
  header["seed"] = model.cfg.seed;
  json layers = json::array();
  std::size_t payload_count = 0;
  for (auto& l : model.stack.layers) {
    layers.push_back(layer_entry(*l));
    payload_count += l->params().size() + l->state().size();
  }
  header["layers"] = layers;
  if (behavior != BehaviorTest::None) {
    if (!centers || !centers->initialized())
      throw DataError("save_checkpoint: behavior checkpoint requires initialized centers");
    header["centers"] = {{"m", kNumClusters}, {"dim", centers->dim()}};
    payload_count += kNumClusters * centers->dim();
  } else {
    header["centers"] = nullptr;
  }
  header["payload_count"] = payload_count;

  const std::string hs = header.dump();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write checkpoint " + path.string());
  out.write(kMagic, sizeof kMagic);
  const std::uint32_t ver = kVersion;
  const std::uint32_t hlen = static_cast<std::uint32_t>(hs.size());
  out.write(reinterpret_cast<const char*>(&ver), 4);
  out.write(reinterpret_cast<const char*>(&hlen), 4);
  out.write(hs.data(), static_cast<std::streamsize>(hs.size()));
  auto write_block = [&](std::span<const float> s) {
    out.write(reinterpret_cast<const char*>(s.data()),
              static_cast<std::streamsize>(s.size() * sizeof(float)));
  };
  for (auto& l : model.stack.layers) {
    write_block(l->params());
    write_block(l->state());
  }
  if (behavior != BehaviorTest::None)
    for (const auto& c : centers->centers) write_block(c);
  if (!out) throw DataError("short write on checkpoint " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint " + path.string());
  char magic[8];
  std::uint32_t ver = 0, hlen = 0;
  in.read(magic, 8);
  in.read(reinterpret_cast<char*>(&ver), 4);
  in.read(reinterpret_cast<char*>(&hlen), 4);
  if (!in || std::memcmp(magic, kMagic, 8) != 0)
    throw DataError("not a BSEN checkpoint: " + path.string());
  if (ver != kVersion)
    throw DataError("unsupported checkpoint version " + std::to_string(ver) + " in " +
                    path.string());
  std::string hs(hlen, '\0');
  in.read(hs.data(), hlen);
  if (!in) throw DataError("truncated checkpoint header in " + path.string());
  json header;
  try {
    header = json::parse(hs);
  } catch (const json::exception& e) {
    throw DataError("corrupt checkpoint header in " + path.string() + ": " + e.what());
  }

  Checkpoint ck;
  try {
    ck.behavior = parse_behavior(header.at("behavior_test").get<std::string>());
    ck.epoch = header.at("epoch").get<int>();
    ck.model = BsenModel::build(config_from_json(header.at("config")));
  } catch (const json::exception& e) {
    throw DataError("corrupt checkpoint header in " + path.string() + ": " + e.what());
  }

  // Verify declared layer list against the rebuilt architecture.
  const auto& layers = header.at("layers");
  if (layers.size() != ck.model.stack.size())
    throw DataError("checkpoint layer count mismatch in " + path.string());
  for (std::size_t i = 0; i < layers.size(); ++i) {
    auto& l = *ck.model.stack.layers[i];
    if (layers[i].at("kind").get<std::string>() != l.kind() ||
        layers[i].at("params").get<std::size_t>() != l.params().size() ||
        layers[i].at("state").get<std::size_t>() != l.state().size())
      throw DataError("checkpoint layer " + std::to_string(i) + " mismatch in " + path.string());
  }

  auto read_block = [&](std::span<float> s) {
    in.read(reinterpret_cast<char*>(s.data()),
            static_cast<std::streamsize>(s.size() * sizeof(float)));
    if (!in) throw DataError("truncated checkpoint payload in " + path.string());
  };
  for (auto& l : ck.model.stack.layers) {
    read_block(l->params());
    read_block(l->state());
  }
  if (ck.behavior != BehaviorTest::None) {
    const std::size_t dim = header.at("centers").at("dim").get<std::size_t>();
    ck.centers = CenterBank::zeros(dim);
    for (auto& c : ck.centers.centers) read_block(c);
  }
  // Reject trailing garbage.
  char extra;
  in.read(&extra, 1);
  if (!in.eof()) throw DataError("trailing bytes after checkpoint payload in " + path.string());
  return ck;
}

}  // namespace bsen
