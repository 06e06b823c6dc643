#ifndef METAEX_NN_LOSS_H_
#define METAEX_NN_LOSS_H_

#include <span>

#include "metaex/nn/matrix.h"

namespace metaex::nn {

// Probabilities are floored here before the logarithm.
inline constexpr double kProbabilityFloor = 1e-12;

// Mean over rows of -ln(max(probs[t][gold[t]], 1e-12)). Throws
// ValidationError when the row count and label count differ or a label is
// out of range.
double CrossEntropy(const Matrix& probs, std::span<const int> gold);

// Sum instead of mean; the trainer normalises by the batch token count.
double CrossEntropySum(const Matrix& probs, std::span<const int> gold);

// Index of the largest entry; ties go to the lowest index.
std::size_t Argmax(std::span<const double> v);

}  // namespace metaex::nn

#endif  // METAEX_NN_LOSS_H_
