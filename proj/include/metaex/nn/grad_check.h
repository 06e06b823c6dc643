#ifndef METAEX_NN_GRAD_CHECK_H_
#define METAEX_NN_GRAD_CHECK_H_

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "metaex/nn/loss.h"
#include "metaex/nn/matrix.h"

namespace metaex::nn {

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::string worst_parameter;
  std::size_t worst_index = 0;
  std::size_t checked = 0;
};

// Mean cross-entropy of one sequence; the loss whose gradient is checked.
template <typename Model>
double SequenceLoss(const Model& model, const Matrix& seq,
                    std::span<const int> gold) {
  return CrossEntropy(Predict(model, seq), gold);
}

struct BiLstmLabeler;
struct Mlp;

// SequenceLoss evaluated in extended precision. The finite differences use
// it so that rounding in the loss stays far below eps * |gradient| even for
// gradients near 1e-9.
long double ExtendedSequenceLoss(const BiLstmLabeler& model, const Matrix& seq,
                                 std::span<const int> gold);
long double ExtendedSequenceLoss(const Mlp& model, const Matrix& inputs,
                                 std::span<const int> gold);

template <typename Model>
Model AnalyticGradients(const Model& model, const Matrix& seq,
                        std::span<const int> gold) {
  Model grads = ZerosLike(model);
  AccumulateGradients(model, seq, gold,
                      1.0 / static_cast<double>(gold.size()), grads);
  return grads;
}

// Compares `analytic` against central differences
// (L(theta + eps) - L(theta - eps)) / (2 eps) for every scalar parameter and
// returns the largest |a - n| / max(1e-8, |a| + |n|). The denominator is the
// distance between the two perturbed parameter values as stored.
template <typename Model>
GradCheckResult GradCheckAgainst(Model model, const Matrix& seq,
                                 std::span<const int> gold, Model analytic,
                                 double eps = 1e-5) {
  std::vector<std::pair<std::string, Matrix*>> params;
  ForEachParameter(model, [&](const std::string& name, Matrix& m) {
    params.emplace_back(name, &m);
  });
  std::vector<Matrix*> grads;
  ForEachParameter(analytic,
                   [&](const std::string&, Matrix& m) { grads.push_back(&m); });

  GradCheckResult result;
  for (std::size_t p = 0; p < params.size(); ++p) {
    auto values = params[p].second->values();
    const auto g = grads[p]->values();
    for (std::size_t k = 0; k < values.size(); ++k) {
      const double saved = values[k];
      values[k] = saved + eps;
      const long double hi = values[k];
      const long double plus = ExtendedSequenceLoss(model, seq, gold);
      values[k] = saved - eps;
      const long double lo = values[k];
      const long double minus = ExtendedSequenceLoss(model, seq, gold);
      values[k] = saved;
      const auto numeric = static_cast<double>((plus - minus) / (hi - lo));
      const double err = std::abs(g[k] - numeric) /
                         std::max(1e-8, std::abs(g[k]) + std::abs(numeric));
      ++result.checked;
      if (err > result.max_relative_error) {
        result.max_relative_error = err;
        result.worst_parameter = params[p].first;
        result.worst_index = k;
      }
    }
  }
  return result;
}

template <typename Model>
GradCheckResult GradCheck(const Model& model, const Matrix& seq,
                          std::span<const int> gold, double eps = 1e-5) {
  return GradCheckAgainst(model, seq, gold,
                          AnalyticGradients(model, seq, gold), eps);
}

}  // namespace metaex::nn

#endif  // METAEX_NN_GRAD_CHECK_H_
