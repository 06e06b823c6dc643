#include "metaex/nn/loss.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "metaex/errors.h"

namespace metaex::nn {

double CrossEntropySum(const Matrix& probs, std::span<const int> gold) {
  if (probs.rows() != gold.size()) {
    throw ValidationError("cross-entropy: " + std::to_string(probs.rows()) +
                          " predictions but " + std::to_string(gold.size()) +
                          " labels");
  }
  double sum = 0.0;
  for (std::size_t t = 0; t < gold.size(); ++t) {
    if (gold[t] < 0 || static_cast<std::size_t>(gold[t]) >= probs.cols()) {
      throw ValidationError("cross-entropy: label out of range");
    }
    sum -= std::log(std::max(probs(t, static_cast<std::size_t>(gold[t])),
                             kProbabilityFloor));
  }
  return sum;
}

double CrossEntropy(const Matrix& probs, std::span<const int> gold) {
  const double sum = CrossEntropySum(probs, gold);
  return gold.empty() ? 0.0 : sum / static_cast<double>(gold.size());
}

std::size_t Argmax(std::span<const double> v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

}  // namespace metaex::nn
