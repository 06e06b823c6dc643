#include "metaex/nn/mlp.h"

#include <cmath>

#include "metaex/errors.h"
#include "metaex/nn/loss.h"
#include "metaex/random.h"

namespace metaex::nn {

Mlp ZeroMlp(std::size_t input_dim, std::size_t hidden_dim,
            std::size_t num_classes) {
  Mlp m;
  m.w_hidden = Matrix(hidden_dim, input_dim);
  m.b_hidden = Matrix(hidden_dim, 1);
  m.w_out = Matrix(num_classes, hidden_dim);
  m.b_out = Matrix(num_classes, 1);
  return m;
}

Mlp InitMlp(std::size_t input_dim, std::size_t hidden_dim,
            std::size_t num_classes, std::uint64_t seed) {
  Rng rng(seed);
  Mlp m = ZeroMlp(input_dim, hidden_dim, num_classes);
  const double b1 = 1.0 / std::sqrt(static_cast<double>(input_dim));
  const double b2 = 1.0 / std::sqrt(static_cast<double>(hidden_dim));
  for (double& v : m.w_hidden.values()) v = rng.Uniform(-b1, b1);
  for (double& v : m.w_out.values()) v = rng.Uniform(-b2, b2);
  return m;
}

namespace {

void CheckInputs(const Mlp& model, const Matrix& inputs) {
  if (inputs.cols() != model.input_dim()) {
    throw ValidationError("mlp: input dimension " +
                          std::to_string(inputs.cols()) + ", model expects " +
                          std::to_string(model.input_dim()));
  }
}

Matrix Hidden(const Mlp& model, const Matrix& inputs) {
  Matrix hidden;
  MatMulTransposed(inputs, model.w_hidden, hidden);
  const auto b = model.b_hidden.values();
  for (std::size_t n = 0; n < hidden.rows(); ++n) {
    auto row = hidden.row(n);
    for (std::size_t j = 0; j < row.size(); ++j) row[j] = std::tanh(row[j] + b[j]);
  }
  return hidden;
}

Matrix Output(const Mlp& model, const Matrix& hidden) {
  Matrix probs;
  MatMulTransposed(hidden, model.w_out, probs);
  const auto b = model.b_out.values();
  for (std::size_t n = 0; n < probs.rows(); ++n) {
    auto row = probs.row(n);
    for (std::size_t c = 0; c < row.size(); ++c) row[c] += b[c];
    SoftmaxInPlace(row);
  }
  return probs;
}

}  // namespace

Matrix Predict(const Mlp& model, const Matrix& inputs) {
  CheckInputs(model, inputs);
  return Output(model, Hidden(model, inputs));
}

double AccumulateGradients(const Mlp& model, const Matrix& inputs,
                           std::span<const int> gold, double scale,
                           Mlp& grads) {
  CheckInputs(model, inputs);
  const Matrix hidden = Hidden(model, inputs);
  const Matrix probs = Output(model, hidden);
  const double loss = CrossEntropySum(probs, gold);
  const std::size_t n = inputs.rows();
  const std::size_t classes = model.num_classes();
  const std::size_t hd = model.hidden_dim();

  Matrix d_scores(n, classes);
  for (std::size_t t = 0; t < n; ++t) {
    const auto g = static_cast<std::size_t>(gold[t]);
    if (probs(t, g) < kProbabilityFloor) continue;
    for (std::size_t c = 0; c < classes; ++c) {
      d_scores(t, c) = scale * (probs(t, c) - (c == g ? 1.0 : 0.0));
    }
  }
  AddTransposedMatMul(d_scores, hidden, grads.w_out);
  Matrix d_pre(n, hd);
  auto db2 = grads.b_out.values();
  auto db1 = grads.b_hidden.values();
  for (std::size_t t = 0; t < n; ++t) {
    const auto ds = d_scores.row(t);
    for (std::size_t c = 0; c < classes; ++c) db2[c] += ds[c];
    auto dp = d_pre.row(t);
    AddTransposedMatVec(model.w_out, ds, dp);
    const auto h = hidden.row(t);
    for (std::size_t j = 0; j < hd; ++j) {
      dp[j] *= 1.0 - h[j] * h[j];
      db1[j] += dp[j];
    }
  }
  AddTransposedMatMul(d_pre, inputs, grads.w_hidden);
  return loss;
}

}  // namespace metaex::nn
