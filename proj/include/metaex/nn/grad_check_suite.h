#ifndef METAEX_NN_GRAD_CHECK_SUITE_H_
#define METAEX_NN_GRAD_CHECK_SUITE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "metaex/nn/grad_check.h"

namespace metaex::nn {

struct GradCheckTrial {
  std::string architecture;
  std::size_t input_dim = 0;
  std::size_t hidden_dim = 0;
  std::size_t tokens = 0;
  GradCheckResult result;
};

// `trials` random biLSTM labelers (D <= 12, H <= 8, T <= 5, C = 10) and as
// many random MLPs, each on a random sequence with random gold labels.
std::vector<GradCheckTrial> RunGradCheckTrials(int trials, std::uint64_t seed,
                                               double eps = 1e-5);

}  // namespace metaex::nn

#endif  // METAEX_NN_GRAD_CHECK_SUITE_H_
