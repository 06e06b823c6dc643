#include "metaex/pipeline/run_config.h"

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"
#include "metaex/errors.h"

namespace metaex::pipeline {

using nlohmann::ordered_json;

namespace {

void CheckKeys(const ordered_json& obj, std::initializer_list<const char*> keys,
               const std::string& where) {
  if (!obj.is_object()) throw ValidationError(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* k : keys) known = known || key == k;
    if (!known) throw ValidationError(where + ": unknown key '" + key + "'");
  }
}

template <typename T>
void Read(const ordered_json& obj, const char* key, T& out,
          const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) return;
  try {
    out = it->get<T>();
  } catch (const ordered_json::exception&) {
    throw ValidationError(where + ": bad value for '" + key + "'");
  }
}

void ReadTrain(const ordered_json& obj, nn::TrainConfig& cfg,
               std::size_t* hidden, const std::string& where) {
  if (hidden != nullptr) {
    CheckKeys(obj,
              {"iterations", "batch_size_tokens", "learning_rate", "optimizer",
               "seed", "clip_norm", "hidden"},
              where);
    Read(obj, "hidden", *hidden, where);
  } else {
    CheckKeys(obj,
              {"iterations", "batch_size_tokens", "learning_rate", "optimizer",
               "seed", "clip_norm"},
              where);
  }
  Read(obj, "iterations", cfg.iterations, where);
  Read(obj, "batch_size_tokens", cfg.batch_size_tokens, where);
  Read(obj, "learning_rate", cfg.learning_rate, where);
  Read(obj, "seed", cfg.seed, where);
  Read(obj, "clip_norm", cfg.clip_norm, where);
  if (obj.contains("optimizer")) {
    std::string name;
    Read(obj, "optimizer", name, where);
    cfg.optimizer = nn::ParseOptimizer(name);
  }
}

ordered_json TrainJson(const nn::TrainConfig& cfg) {
  return {{"iterations", cfg.iterations},
          {"batch_size_tokens", cfg.batch_size_tokens},
          {"learning_rate", cfg.learning_rate},
          {"optimizer", std::string(nn::OptimizerName(cfg.optimizer))},
          {"seed", cfg.seed},
          {"clip_norm", cfg.clip_norm}};
}

}  // namespace

RunConfig DefaultRunConfig(std::uint64_t seed) {
  RunConfig cfg;
  cfg.seed = seed;
  cfg.split.seed = seed + kSplitSeedOffset;
  cfg.embedding_seed = seed + kEmbedderSeedOffset;
  cfg.nlp.seed = seed + kNlpSeedOffset;
  cfg.vision.seed = seed + kVisionSeedOffset;
  cfg.fusion.seed = seed + kFusionSeedOffset;
  return cfg;
}

RunConfig ParseRunConfig(const std::string& json_text,
                         const std::string& source) {
  ordered_json root;
  try {
    root = ordered_json::parse(json_text);
  } catch (const ordered_json::parse_error& e) {
    throw ValidationError(source + ": " + e.what());
  }
  CheckKeys(root,
            {"seed", "paths", "split", "nlp", "vision", "fusion", "embedding",
             "thresholds"},
            source);
  std::uint64_t seed = 0;
  Read(root, "seed", seed, source);
  RunConfig cfg = DefaultRunConfig(seed);

  if (root.contains("paths")) {
    const ordered_json& p = root.at("paths");
    const std::string where = source + ": paths";
    CheckKeys(p, {"corpus_dir", "checkpoints_dir", "reports_dir"}, where);
    std::string s;
    if (p.contains("corpus_dir")) {
      Read(p, "corpus_dir", s, where);
      cfg.corpus_dir = s;
    }
    if (p.contains("checkpoints_dir")) {
      Read(p, "checkpoints_dir", s, where);
      cfg.checkpoints_dir = s;
    }
    if (p.contains("reports_dir")) {
      Read(p, "reports_dir", s, where);
      cfg.reports_dir = s;
    }
  }
  if (root.contains("split")) {
    const ordered_json& s = root.at("split");
    const std::string where = source + ": split";
    CheckKeys(s, {"train", "val", "test", "seed"}, where);
    Read(s, "train", cfg.split.train_frac, where);
    Read(s, "val", cfg.split.val_frac, where);
    Read(s, "test", cfg.split.test_frac, where);
    Read(s, "seed", cfg.split.seed, where);
  }
  if (root.contains("nlp")) {
    ReadTrain(root.at("nlp"), cfg.nlp, &cfg.nlp_hidden, source + ": nlp");
  }
  if (root.contains("vision")) {
    ReadTrain(root.at("vision"), cfg.vision, nullptr, source + ": vision");
  }
  if (root.contains("fusion")) {
    ReadTrain(root.at("fusion"), cfg.fusion, &cfg.fusion_hidden,
              source + ": fusion");
  }
  if (root.contains("embedding")) {
    const ordered_json& e = root.at("embedding");
    const std::string where = source + ": embedding";
    CheckKeys(e, {"dim", "seed"}, where);
    Read(e, "dim", cfg.embedding_dim, where);
    Read(e, "seed", cfg.embedding_seed, where);
  }
  if (root.contains("thresholds")) {
    const ordered_json& t = root.at("thresholds");
    const std::string where = source + ": thresholds";
    CheckKeys(t,
              {"cosine", "nms_iou", "nms_keep", "line_gap_multiplier",
               "column_gap_spaces"},
              where);
    Read(t, "cosine", cfg.cosine_threshold, where);
    Read(t, "nms_iou", cfg.vision_cfg.iou_threshold, where);
    Read(t, "nms_keep", cfg.vision_cfg.keep, where);
    Read(t, "line_gap_multiplier",
         cfg.vision_cfg.segmentation.line_gap_multiplier, where);
    Read(t, "column_gap_spaces", cfg.vision_cfg.segmentation.column_gap_spaces,
         where);
  }
  try {
    Validate(cfg);
  } catch (const ValidationError& e) {
    throw ValidationError(source + ": " + e.what());
  }
  return cfg;
}

RunConfig LoadRunConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseRunConfig(buffer.str(), path.string());
}

std::string SerializeRunConfig(const RunConfig& cfg) {
  ordered_json root;
  root["seed"] = cfg.seed;
  root["paths"] = {{"corpus_dir", cfg.corpus_dir.string()},
                   {"checkpoints_dir", cfg.checkpoints_dir.string()},
                   {"reports_dir", cfg.reports_dir.string()}};
  root["split"] = {{"train", cfg.split.train_frac},
                   {"val", cfg.split.val_frac},
                   {"test", cfg.split.test_frac},
                   {"seed", cfg.split.seed}};
  root["nlp"] = TrainJson(cfg.nlp);
  root["nlp"]["hidden"] = cfg.nlp_hidden;
  root["vision"] = TrainJson(cfg.vision);
  root["fusion"] = TrainJson(cfg.fusion);
  root["fusion"]["hidden"] = cfg.fusion_hidden;
  root["embedding"] = {{"dim", cfg.embedding_dim},
                       {"seed", cfg.embedding_seed}};
  root["thresholds"] = {
      {"cosine", cfg.cosine_threshold},
      {"nms_iou", cfg.vision_cfg.iou_threshold},
      {"nms_keep", cfg.vision_cfg.keep},
      {"line_gap_multiplier", cfg.vision_cfg.segmentation.line_gap_multiplier},
      {"column_gap_spaces", cfg.vision_cfg.segmentation.column_gap_spaces}};
  return root.dump(2) + "\n";
}

void Validate(const RunConfig& cfg) {
  corpus::Validate(cfg.split);
  nn::Validate(cfg.nlp);
  nn::Validate(cfg.vision);
  nn::Validate(cfg.fusion);
  vision::Validate(cfg.vision_cfg.segmentation);
  if (cfg.nlp_hidden == 0 || cfg.fusion_hidden == 0) {
    throw ValidationError("hidden sizes must be > 0");
  }
  if (cfg.embedding_dim <= 0) {
    throw ValidationError("embedding dim must be > 0");
  }
  if (!(cfg.cosine_threshold > 0.0 && cfg.cosine_threshold <= 1.0)) {
    throw ValidationError("cosine threshold must lie in (0, 1]");
  }
  if (!(cfg.vision_cfg.iou_threshold >= 0.0 &&
        cfg.vision_cfg.iou_threshold <= 1.0)) {
    throw ValidationError("nms_iou must lie in [0, 1]");
  }
  if (cfg.vision_cfg.keep == 0) throw ValidationError("nms_keep must be > 0");
}

std::string ConfigHash(const RunConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : SerializeRunConfig(cfg)) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace metaex::pipeline
