#ifndef METAEX_NN_OPTIMIZER_H_
#define METAEX_NN_OPTIMIZER_H_

#include <cmath>
#include <string>
#include <vector>

#include "metaex/nn/matrix.h"
#include "metaex/nn/train_config.h"

namespace metaex::nn {

template <typename Model>
std::vector<Matrix*> ParameterList(Model& m) {
  std::vector<Matrix*> out;
  ForEachParameter(m, [&](const std::string&, Matrix& p) { out.push_back(&p); });
  return out;
}

double GlobalNorm(const std::vector<Matrix*>& grads);

// Rescales the gradients so their global L2 norm is at most max_norm.
// Returns the norm before clipping.
double ClipGlobalNorm(const std::vector<Matrix*>& grads, double max_norm);

// SGD or Adam (bias-corrected) over a fixed parameter list.
class Optimizer {
 public:
  Optimizer(OptimizerKind kind, double learning_rate);

  void Step(const std::vector<Matrix*>& params,
            const std::vector<Matrix*>& grads);

  long steps() const { return steps_; }

 private:
  OptimizerKind kind_;
  double learning_rate_;
  long steps_ = 0;
  std::vector<Matrix> first_moment_;
  std::vector<Matrix> second_moment_;
};

}  // namespace metaex::nn

#endif  // METAEX_NN_OPTIMIZER_H_
