#ifndef METAEX_NN_TRAINER_H_
#define METAEX_NN_TRAINER_H_

#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "metaex/errors.h"
#include "metaex/nn/loss.h"
#include "metaex/nn/matrix.h"
#include "metaex/nn/optimizer.h"
#include "metaex/nn/train_config.h"
#include "metaex/random.h"

namespace metaex::nn {

// One training sequence: T x D inputs with T class indices.
struct Example {
  Matrix inputs;
  std::vector<int> gold;
};

struct StepMetrics {
  int step = 0;
  double train_loss = 0.0;
  // NaN when there is no validation data.
  double val_loss = std::numeric_limits<double>::quiet_NaN();
};

template <typename Model>
struct TrainResult {
  Model model;
  std::vector<StepMetrics> history;
};

// Called after every step; lets callers log progress.
using StepCallback = std::function<void(const StepMetrics&)>;

// Mean cross-entropy over all tokens of the given examples.
template <typename Model>
double MeanLoss(const Model& model, std::span<const Example> examples) {
  double sum = 0.0;
  std::size_t tokens = 0;
  for (const Example& e : examples) {
    sum += CrossEntropySum(Predict(model, e.inputs), e.gold);
    tokens += e.gold.size();
  }
  return tokens == 0 ? 0.0 : sum / static_cast<double>(tokens);
}

// Runs cfg.iterations optimizer steps. Each batch takes whole examples from
// a seeded shuffle until it holds at least cfg.batch_size_tokens tokens;
// the shuffle is redrawn whenever the data is exhausted. The loss is the
// batch-mean cross-entropy, gradients are clipped to cfg.clip_norm, and the
// validation loss is measured each step on the leading validation examples
// up to one batch worth of tokens. Throws NumericalError on a non-finite
// loss.
template <typename Model>
TrainResult<Model> Train(Model model, std::span<const Example> train,
                         std::span<const Example> val,
                         const TrainConfig& cfg,
                         const StepCallback& on_step = {}) {
  Validate(cfg);
  if (train.empty()) throw ValidationError("training set is empty");
  for (const Example& e : train) {
    if (e.gold.empty() || e.inputs.rows() != e.gold.size()) {
      throw ValidationError("training example with no tokens or a label "
                            "count that does not match its inputs");
    }
  }

  std::size_t val_count = 0;
  for (std::size_t tokens = 0;
       val_count < val.size() &&
       tokens < static_cast<std::size_t>(cfg.batch_size_tokens);
       ++val_count) {
    tokens += val[val_count].gold.size();
  }
  const std::span<const Example> val_probe = val.first(val_count);

  Rng rng(cfg.seed);
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.Shuffle(order);
  std::size_t cursor = 0;

  Optimizer optimizer(cfg.optimizer, cfg.learning_rate);
  const std::vector<Matrix*> params = ParameterList(model);
  Model grads = ZerosLike(model);
  const std::vector<Matrix*> grad_list = ParameterList(grads);

  TrainResult<Model> result;
  result.history.reserve(static_cast<std::size_t>(cfg.iterations));
  std::vector<std::size_t> batch;
  for (int step = 1; step <= cfg.iterations; ++step) {
    batch.clear();
    std::size_t tokens = 0;
    while (tokens < static_cast<std::size_t>(cfg.batch_size_tokens)) {
      if (cursor == order.size()) {
        rng.Shuffle(order);
        cursor = 0;
      }
      batch.push_back(order[cursor]);
      tokens += train[order[cursor]].gold.size();
      ++cursor;
      // Data sets smaller than one batch contribute each example once.
      if (batch.size() == order.size()) break;
    }

    for (Matrix* g : grad_list) g->Fill(0.0);
    const double scale = 1.0 / static_cast<double>(tokens);
    double loss_sum = 0.0;
    for (const std::size_t i : batch) {
      loss_sum += AccumulateGradients(model, train[i].inputs, train[i].gold,
                                      scale, grads);
    }
    StepMetrics metrics;
    metrics.step = step;
    metrics.train_loss = loss_sum * scale;
    if (!std::isfinite(metrics.train_loss)) {
      throw NumericalError("non-finite training loss at step " +
                           std::to_string(step));
    }
    ClipGlobalNorm(grad_list, cfg.clip_norm);
    optimizer.Step(params, grad_list);
    if (!val_probe.empty()) metrics.val_loss = MeanLoss(model, val_probe);
    result.history.push_back(metrics);
    if (on_step) on_step(metrics);
  }
  result.model = std::move(model);
  return result;
}

}  // namespace metaex::nn

#endif  // METAEX_NN_TRAINER_H_
