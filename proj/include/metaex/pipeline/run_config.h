#ifndef METAEX_PIPELINE_RUN_CONFIG_H_
#define METAEX_PIPELINE_RUN_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string>

#include "metaex/corpus/split.h"
#include "metaex/nn/train_config.h"
#include "metaex/vision/surrogate.h"

namespace metaex::pipeline {

// Offsets added to the global seed for stages without an explicit seed.
inline constexpr std::uint64_t kSplitSeedOffset = 1;
inline constexpr std::uint64_t kEmbedderSeedOffset = 2;
inline constexpr std::uint64_t kNlpSeedOffset = 3;
inline constexpr std::uint64_t kVisionSeedOffset = 4;
inline constexpr std::uint64_t kFusionSeedOffset = 5;

inline constexpr std::size_t kDefaultHidden = 256;
inline constexpr int kDefaultEmbeddingDim = 64;

struct RunConfig {
  std::filesystem::path corpus_dir = "corpus";
  std::filesystem::path checkpoints_dir = "checkpoints";
  std::filesystem::path reports_dir = "reports";
  corpus::SplitSpec split;
  nn::TrainConfig nlp;
  std::size_t nlp_hidden = kDefaultHidden;
  nn::TrainConfig vision;
  nn::TrainConfig fusion;
  std::size_t fusion_hidden = kDefaultHidden;
  int embedding_dim = kDefaultEmbeddingDim;
  std::uint64_t embedding_seed = 0;
  double cosine_threshold = 0.85;
  vision::VisionConfig vision_cfg;
  std::uint64_t seed = 0;
};

// Defaults with every stage seed derived from `seed`.
RunConfig DefaultRunConfig(std::uint64_t seed = 0);

// JSON mirroring RunConfig:
//   {"seed", "paths": {"corpus_dir", "checkpoints_dir", "reports_dir"},
//    "split": {"train", "val", "test", "seed"?},
//    "nlp": {TrainConfig fields, "hidden"}, "vision": {...},
//    "fusion": {..., "hidden"},
//    "embedding": {"dim", "seed"?},
//    "thresholds": {"cosine", "nms_iou", "nms_keep", "line_gap_multiplier",
//                   "column_gap_spaces"}}
// Every key is optional; unknown keys are rejected. Stage seeds that are
// absent derive from the global seed by the fixed offsets above.
RunConfig ParseRunConfig(const std::string& json_text,
                         const std::string& source);
RunConfig LoadRunConfig(const std::filesystem::path& path);
std::string SerializeRunConfig(const RunConfig& cfg);

// Throws ValidationError on any out-of-range value.
void Validate(const RunConfig& cfg);

// FNV-1a over the serialized config, as 16 hex digits.
std::string ConfigHash(const RunConfig& cfg);

}  // namespace metaex::pipeline

#endif  // METAEX_PIPELINE_RUN_CONFIG_H_
