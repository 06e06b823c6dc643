#include "metaex/nn/labeler.h"

#include <cmath>

#include "metaex/errors.h"
#include "metaex/nn/loss.h"
#include "metaex/random.h"

namespace metaex::nn {

BiLstmLabeler ZeroBiLstmLabeler(std::size_t input_dim, std::size_t hidden_dim,
                                std::size_t num_classes) {
  BiLstmLabeler m;
  m.forward = ZeroLstmCell(input_dim, hidden_dim);
  m.backward = ZeroLstmCell(input_dim, hidden_dim);
  m.w_out = Matrix(num_classes, 2 * hidden_dim);
  m.b_out = Matrix(num_classes, 1);
  return m;
}

BiLstmLabeler InitBiLstmLabeler(std::size_t input_dim, std::size_t hidden_dim,
                                std::size_t num_classes, std::uint64_t seed) {
  Rng rng(seed);
  BiLstmLabeler m;
  m.forward = InitLstmCell(input_dim, hidden_dim, rng);
  m.backward = InitLstmCell(input_dim, hidden_dim, rng);
  m.w_out = Matrix(num_classes, 2 * hidden_dim);
  m.b_out = Matrix(num_classes, 1);
  const double bound = 1.0 / std::sqrt(static_cast<double>(hidden_dim));
  for (double& v : m.w_out.values()) v = rng.Uniform(-bound, bound);
  return m;
}

namespace {

struct FullTrace {
  LstmTrace fwd;
  LstmTrace bwd;
  LabelerOutput out;
};

FullTrace RunForward(const BiLstmLabeler& model, const Matrix& seq) {
  if (seq.rows() == 0) throw ValidationError("labeler: empty sequence");
  if (seq.cols() != model.input_dim()) {
    throw ValidationError("labeler: input dimension " +
                          std::to_string(seq.cols()) + ", model expects " +
                          std::to_string(model.input_dim()));
  }
  FullTrace tr;
  tr.fwd = LstmSequenceForward(model.forward, seq, /*reverse=*/false);
  tr.bwd = LstmSequenceForward(model.backward, seq, /*reverse=*/true);
  const std::size_t steps = seq.rows();
  const std::size_t hd = model.hidden_dim();
  tr.out.hidden = Matrix(steps, 2 * hd);
  for (std::size_t t = 0; t < steps; ++t) {
    auto row = tr.out.hidden.row(t);
    const auto f = tr.fwd.hidden.row(t);
    const auto b = tr.bwd.hidden.row(t);
    std::copy(f.begin(), f.end(), row.begin());
    std::copy(b.begin(), b.end(), row.begin() + static_cast<long>(hd));
  }
  MatMulTransposed(tr.out.hidden, model.w_out, tr.out.probs);
  const auto bias = model.b_out.values();
  for (std::size_t t = 0; t < steps; ++t) {
    auto scores = tr.out.probs.row(t);
    for (std::size_t c = 0; c < scores.size(); ++c) scores[c] += bias[c];
    SoftmaxInPlace(scores);
  }
  return tr;
}

}  // namespace

LabelerOutput LabelerForward(const BiLstmLabeler& model, const Matrix& seq) {
  return RunForward(model, seq).out;
}

double AccumulateGradients(const BiLstmLabeler& model, const Matrix& seq,
                           std::span<const int> gold, double scale,
                           BiLstmLabeler& grads) {
  FullTrace tr = RunForward(model, seq);
  const double loss = CrossEntropySum(tr.out.probs, gold);
  const std::size_t steps = seq.rows();
  const std::size_t hd = model.hidden_dim();
  const std::size_t classes = model.num_classes();

  // Softmax + cross-entropy: d/dscores = p - onehot(gold). Tokens whose
  // probability sits below the floor contribute a constant, hence nothing.
  Matrix d_scores(steps, classes);
  for (std::size_t t = 0; t < steps; ++t) {
    const auto g = static_cast<std::size_t>(gold[t]);
    if (tr.out.probs(t, g) < kProbabilityFloor) continue;
    for (std::size_t c = 0; c < classes; ++c) {
      d_scores(t, c) = scale * (tr.out.probs(t, c) - (c == g ? 1.0 : 0.0));
    }
  }
  AddTransposedMatMul(d_scores, tr.out.hidden, grads.w_out);
  auto db = grads.b_out.values();
  Matrix d_fwd(steps, hd);
  Matrix d_bwd(steps, hd);
  std::vector<double> d_hidden(2 * hd);
  for (std::size_t t = 0; t < steps; ++t) {
    const auto ds = d_scores.row(t);
    for (std::size_t c = 0; c < classes; ++c) db[c] += ds[c];
    std::fill(d_hidden.begin(), d_hidden.end(), 0.0);
    AddTransposedMatVec(model.w_out, ds, d_hidden);
    std::copy(d_hidden.begin(), d_hidden.begin() + static_cast<long>(hd),
              d_fwd.row(t).begin());
    std::copy(d_hidden.begin() + static_cast<long>(hd), d_hidden.end(),
              d_bwd.row(t).begin());
  }
  LstmSequenceBackward(model.forward, seq, tr.fwd, d_fwd, grads.forward);
  LstmSequenceBackward(model.backward, seq, tr.bwd, d_bwd, grads.backward);
  return loss;
}

}  // namespace metaex::nn
