#include <algorithm>
#include <cmath>
#include <vector>

#include "metaex/errors.h"
#include "metaex/nn/grad_check.h"
#include "metaex/nn/labeler.h"
#include "metaex/nn/mlp.h"

namespace metaex::nn {

namespace {

using Vec = std::vector<long double>;

long double SigmoidL(long double x) {
  if (x >= 0.0L) return 1.0L / (1.0L + std::exp(-x));
  const long double e = std::exp(x);
  return e / (1.0L + e);
}

// -log max(softmax(scores)[gold], floor), with the log taken directly from
// the shifted scores.
long double TokenLoss(const Vec& scores, int gold) {
  const long double max = *std::max_element(scores.begin(), scores.end());
  long double sum = 0.0L;
  for (const long double s : scores) sum += std::exp(s - max);
  const long double log_p =
      scores[static_cast<std::size_t>(gold)] - max - std::log(sum);
  return -std::max(log_p,
                   std::log(static_cast<long double>(kProbabilityFloor)));
}

void CheckGold(std::size_t rows, std::size_t classes,
               std::span<const int> gold) {
  if (rows != gold.size()) {
    throw ValidationError("cross-entropy: " + std::to_string(rows) +
                          " predictions but " + std::to_string(gold.size()) +
                          " labels");
  }
  for (const int g : gold) {
    if (g < 0 || static_cast<std::size_t>(g) >= classes) {
      throw ValidationError("cross-entropy: label out of range");
    }
  }
}

// Hidden states (T x H, row t for input position t) of one direction.
std::vector<Vec> DirectionHidden(const LstmCell& cell, const Matrix& seq,
                                 bool reverse) {
  const std::size_t steps = seq.rows();
  const std::size_t hd = cell.hidden_dim;
  const std::size_t dim = cell.input_dim;
  std::vector<Vec> hidden(steps, Vec(hd, 0.0L));
  Vec h(hd, 0.0L);
  Vec c(hd, 0.0L);
  Vec z(4 * hd);
  for (std::size_t s = 0; s < steps; ++s) {
    const std::size_t t = reverse ? steps - 1 - s : s;
    for (std::size_t r = 0; r < 4 * hd; ++r) {
      long double acc = cell.bias(r, 0);
      for (std::size_t k = 0; k < dim; ++k) {
        acc += static_cast<long double>(cell.w_input(r, k)) * seq(t, k);
      }
      for (std::size_t k = 0; k < hd; ++k) {
        acc += static_cast<long double>(cell.w_recurrent(r, k)) * h[k];
      }
      z[r] = r < 3 * hd ? SigmoidL(acc) : std::tanh(acc);
    }
    for (std::size_t j = 0; j < hd; ++j) {
      c[j] = z[hd + j] * c[j] + z[j] * z[3 * hd + j];
      h[j] = z[2 * hd + j] * std::tanh(c[j]);
    }
    hidden[t] = h;
  }
  return hidden;
}

}  // namespace

long double ExtendedSequenceLoss(const BiLstmLabeler& model, const Matrix& seq,
                                 std::span<const int> gold) {
  if (seq.rows() == 0) throw ValidationError("labeler: empty sequence");
  if (seq.cols() != model.input_dim()) {
    throw ValidationError("labeler: input dimension " +
                          std::to_string(seq.cols()) + ", model expects " +
                          std::to_string(model.input_dim()));
  }
  CheckGold(seq.rows(), model.num_classes(), gold);
  const std::vector<Vec> fwd = DirectionHidden(model.forward, seq, false);
  const std::vector<Vec> bwd = DirectionHidden(model.backward, seq, true);
  const std::size_t hd = model.hidden_dim();
  long double sum = 0.0L;
  Vec scores(model.num_classes());
  for (std::size_t t = 0; t < seq.rows(); ++t) {
    for (std::size_t c = 0; c < scores.size(); ++c) {
      long double acc = model.b_out(c, 0);
      for (std::size_t k = 0; k < hd; ++k) {
        acc += static_cast<long double>(model.w_out(c, k)) * fwd[t][k];
        acc += static_cast<long double>(model.w_out(c, hd + k)) * bwd[t][k];
      }
      scores[c] = acc;
    }
    sum += TokenLoss(scores, gold[t]);
  }
  return sum / static_cast<long double>(gold.size());
}

long double ExtendedSequenceLoss(const Mlp& model, const Matrix& inputs,
                                 std::span<const int> gold) {
  if (inputs.cols() != model.input_dim()) {
    throw ValidationError("mlp: input dimension " +
                          std::to_string(inputs.cols()) + ", model expects " +
                          std::to_string(model.input_dim()));
  }
  CheckGold(inputs.rows(), model.num_classes(), gold);
  if (gold.empty()) return 0.0L;
  const std::size_t hd = model.hidden_dim();
  long double sum = 0.0L;
  Vec hidden(hd);
  Vec scores(model.num_classes());
  for (std::size_t n = 0; n < inputs.rows(); ++n) {
    for (std::size_t j = 0; j < hd; ++j) {
      long double acc = model.b_hidden(j, 0);
      for (std::size_t k = 0; k < model.input_dim(); ++k) {
        acc += static_cast<long double>(model.w_hidden(j, k)) * inputs(n, k);
      }
      hidden[j] = std::tanh(acc);
    }
    for (std::size_t c = 0; c < scores.size(); ++c) {
      long double acc = model.b_out(c, 0);
      for (std::size_t j = 0; j < hd; ++j) {
        acc += static_cast<long double>(model.w_out(c, j)) * hidden[j];
      }
      scores[c] = acc;
    }
    sum += TokenLoss(scores, gold[n]);
  }
  return sum / static_cast<long double>(gold.size());
}

}  // namespace metaex::nn
