#ifndef METAEX_NN_TRAIN_CONFIG_H_
#define METAEX_NN_TRAIN_CONFIG_H_

#include <cstdint>
#include <string>
#include <string_view>

namespace metaex::nn {

enum class OptimizerKind { kSgd, kAdam };

std::string_view OptimizerName(OptimizerKind kind);
// Throws ValidationError for names other than "sgd" and "adam".
OptimizerKind ParseOptimizer(std::string_view name);

struct TrainConfig {
  int iterations = 300;
  int batch_size_tokens = 2000;
  double learning_rate = 1e-3;
  OptimizerKind optimizer = OptimizerKind::kAdam;
  std::uint64_t seed = 0;
  double clip_norm = 5.0;

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

// iterations and batch size positive, learning rate non-negative (0 is a
// legal no-op run), clip norm positive.
void Validate(const TrainConfig& cfg);

inline constexpr double kAdamBeta1 = 0.9;
inline constexpr double kAdamBeta2 = 0.999;
inline constexpr double kAdamEpsilon = 1e-8;

}  // namespace metaex::nn

#endif  // METAEX_NN_TRAIN_CONFIG_H_
