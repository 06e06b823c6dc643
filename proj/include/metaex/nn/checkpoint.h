#ifndef METAEX_NN_CHECKPOINT_H_
#define METAEX_NN_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "metaex/errors.h"
#include "metaex/nn/matrix.h"
#include "metaex/nn/train_config.h"
#include "metaex/nn/trainer.h"

namespace metaex::nn {

struct NamedTensor {
  std::string name;
  Matrix value;

  friend bool operator==(const NamedTensor&, const NamedTensor&) = default;
};

// Serialized model. Binary layout, version 1:
//
//   bytes 0..7   magic "METAEXCK"
//   u32 LE       format version (1)
//   u32 LE       header length N
//   N bytes      UTF-8 JSON header: architecture, seed, config, metadata,
//                history, and the shape table [{name, rows, cols}, ...]
//   payload      every tensor in shape-table order, row-major, as
//                little-endian IEEE-754 binary64
struct ModelCheckpoint {
  std::string architecture;
  std::vector<NamedTensor> tensors;
  TrainConfig config;
  std::uint64_t seed = 0;
  std::vector<StepMetrics> history;
  // Free-form pipeline settings needed at inference time (embedder
  // dimension and seed, input layout, ...).
  std::map<std::string, std::string> metadata;
};

inline constexpr char kCheckpointMagic[8] = {'M', 'E', 'T', 'A',
                                             'E', 'X', 'C', 'K'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

std::string SerializeCheckpoint(const ModelCheckpoint& ckpt);
ModelCheckpoint DeserializeCheckpoint(const std::string& bytes);
void SaveCheckpoint(const ModelCheckpoint& ckpt,
                    const std::filesystem::path& path);
ModelCheckpoint LoadCheckpoint(const std::filesystem::path& path);

template <typename Model>
ModelCheckpoint MakeCheckpoint(Model model, const TrainConfig& cfg,
                               std::vector<StepMetrics> history = {}) {
  ModelCheckpoint ckpt;
  ckpt.architecture = std::string(ArchitectureTag(model));
  ForEachParameter(model, [&](const std::string& name, Matrix& m) {
    ckpt.tensors.push_back({name, m});
  });
  ckpt.config = cfg;
  ckpt.seed = cfg.seed;
  ckpt.history = std::move(history);
  return ckpt;
}

// Copies the tensors into `shape_donor`, which must have the matching
// architecture and shapes (build it with the Zero* factory of the model).
template <typename Model>
Model RestoreModel(const ModelCheckpoint& ckpt, Model shape_donor) {
  if (ckpt.architecture != ArchitectureTag(shape_donor)) {
    throw ValidationError("checkpoint holds a '" + ckpt.architecture +
                          "', expected '" +
                          std::string(ArchitectureTag(shape_donor)) + "'");
  }
  std::size_t i = 0;
  ForEachParameter(shape_donor, [&](const std::string& name, Matrix& m) {
    if (i >= ckpt.tensors.size() || ckpt.tensors[i].name != name ||
        !ckpt.tensors[i].value.SameShape(m)) {
      throw ValidationError("checkpoint tensor table does not match '" +
                            name + "'");
    }
    m = ckpt.tensors[i].value;
    ++i;
  });
  if (i != ckpt.tensors.size()) {
    throw ValidationError("checkpoint has extra tensors");
  }
  return shape_donor;
}

// Looks up a tensor's shape by name; throws ValidationError if absent.
const Matrix& FindTensor(const ModelCheckpoint& ckpt, const std::string& name);

}  // namespace metaex::nn

#endif  // METAEX_NN_CHECKPOINT_H_
