#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "metaex/errors.h"
#include "metaex/nn/checkpoint.h"
#include "metaex/nn/grad_check.h"
#include "metaex/nn/grad_check_suite.h"
#include "metaex/nn/labeler.h"
#include "metaex/nn/loss.h"
#include "metaex/nn/lstm.h"
#include "metaex/nn/matrix.h"
#include "metaex/nn/mlp.h"
#include "metaex/nn/optimizer.h"
#include "metaex/nn/trainer.h"
#include "metaex/random.h"
#include "test_support.h"

namespace metaex::nn {
namespace {

Matrix RandomMatrix(std::size_t rows, std::size_t cols, Rng& rng,
                    double scale = 1.0) {
  Matrix m(rows, cols);
  for (double& v : m.values()) v = rng.Uniform(-scale, scale);
  return m;
}

std::vector<int> RandomGold(std::size_t n, std::size_t classes, Rng& rng) {
  std::vector<int> gold(n);
  for (int& g : gold) g = static_cast<int>(rng.Below(classes));
  return gold;
}

std::vector<Example> RandomExamples(std::size_t count, std::size_t dim,
                                    Rng& rng) {
  std::vector<Example> out;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t t = 2 + rng.Below(4);
    // Labels follow the sign of the first feature so there is signal to fit.
    Example e{RandomMatrix(t, dim, rng), {}};
    for (std::size_t r = 0; r < t; ++r) e.gold.push_back(e.inputs(r, 0) > 0 ? 1 : 3);
    out.push_back(std::move(e));
  }
  return out;
}

TEST(MatrixTest, KernelsMatchNaiveLoops) {
  Rng rng(1);
  const Matrix a = RandomMatrix(4, 3, rng);
  const Matrix b = RandomMatrix(5, 3, rng);
  Matrix out;
  MatMulTransposed(a, b, out);
  ASSERT_EQ(out.rows(), 4u);
  ASSERT_EQ(out.cols(), 5u);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 5; ++j) {
      double s = 0;
      for (std::size_t k = 0; k < 3; ++k) s += a(i, k) * b(j, k);
      EXPECT_NEAR(out(i, j), s, 1e-14);
    }
  }

  const Matrix c = RandomMatrix(4, 2, rng);
  Matrix acc(3, 2, 1.0);
  AddTransposedMatMul(a, c, acc);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      double s = 1.0;
      for (std::size_t k = 0; k < 4; ++k) s += a(k, i) * c(k, j);
      EXPECT_NEAR(acc(i, j), s, 1e-14);
    }
  }

  const std::vector<double> x = {0.5, -1.0, 2.0};
  std::vector<double> y(4, 1.0);
  AddMatVec(a, x, y);
  for (std::size_t i = 0; i < 4; ++i) {
    double s = 1.0;
    for (std::size_t k = 0; k < 3; ++k) s += a(i, k) * x[k];
    EXPECT_NEAR(y[i], s, 1e-14);
  }

  const std::vector<double> z = {1.0, 2.0, -3.0, 0.25};
  std::vector<double> w(3, 0.0);
  AddTransposedMatVec(a, z, w);
  for (std::size_t k = 0; k < 3; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < 4; ++i) s += a(i, k) * z[i];
    EXPECT_NEAR(w[k], s, 1e-14);
  }

  Matrix outer(4, 3, 0.0);
  AddOuter(z, x, outer);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(outer(i, k), z[i] * x[k]);
  }
}

TEST(MatrixTest, SoftmaxIsStableAndNormalized) {
  std::vector<double> big = {1000.0, 1000.0};
  SoftmaxInPlace(big);
  EXPECT_DOUBLE_EQ(big[0], 0.5);
  EXPECT_DOUBLE_EQ(big[1], 0.5);
  std::vector<double> zeros(10, 0.0);
  SoftmaxInPlace(zeros);
  for (const double p : zeros) EXPECT_DOUBLE_EQ(p, 0.1);
  std::vector<double> v = {1.0, 2.0, 3.0};
  SoftmaxInPlace(v);
  const double z = std::exp(1.0) + std::exp(2.0) + std::exp(3.0);
  EXPECT_NEAR(v[2], std::exp(3.0) / z, 1e-15);
}

TEST(LstmTest, ZeroParametersGiveZeroState) {
  const LstmCell cell = ZeroLstmCell(3, 4);
  const std::vector<double> x = {1.0, -2.0, 3.0};
  const std::vector<double> h(4, 0.7);
  const std::vector<double> c(4, 0.0);
  const LstmState s = LstmStep(cell, x, h, c);
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_EQ(s.h[k], 0.0);
    EXPECT_EQ(s.c[k], 0.0);
  }
}

TEST(LstmTest, SaturatedGatesFollowClosedForm) {
  LstmCell cell = ZeroLstmCell(2, 3);
  const double b_f = 0.3;
  const double b_g = 50.0;
  for (std::size_t k = 0; k < 3; ++k) {
    cell.bias(cell.GateOffset(Gate::kInput) + k, 0) = 50.0;
    cell.bias(cell.GateOffset(Gate::kForget) + k, 0) = b_f;
    cell.bias(cell.GateOffset(Gate::kCell) + k, 0) = b_g;
  }
  const std::vector<double> x = {0.4, -0.9};
  const std::vector<double> h = {0.1, 0.2, 0.3};
  const std::vector<double> c = {-1.0, 0.5, 2.0};
  const LstmState s = LstmStep(cell, x, h, c);
  const double sig_f = 1.0 / (1.0 + std::exp(-b_f));
  for (std::size_t k = 0; k < 3; ++k) {
    const double expected_c = c[k] * sig_f + std::tanh(b_g);
    EXPECT_NEAR(s.c[k], expected_c, 1e-12);
    EXPECT_NEAR(s.h[k], 0.5 * std::tanh(expected_c), 1e-12);
  }
}

TEST(LstmTest, ShapeMismatchIsRejected) {
  const LstmCell cell = ZeroLstmCell(3, 2);
  const std::vector<double> x(2, 0.0);
  const std::vector<double> h(2, 0.0);
  EXPECT_THROW(LstmStep(cell, x, h, h), ValidationError);
}

TEST(LstmTest, SeededInitIsDeterministic) {
  Rng a(9);
  Rng b(9);
  const LstmCell ca = InitLstmCell(5, 4, a);
  const LstmCell cb = InitLstmCell(5, 4, b);
  EXPECT_EQ(ca.w_input, cb.w_input);
  EXPECT_EQ(ca.w_recurrent, cb.w_recurrent);
  const double bound = 1.0 / std::sqrt(4.0);
  for (const double v : ca.w_input.values()) EXPECT_LT(std::abs(v), bound);
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_EQ(ca.bias(ca.GateOffset(Gate::kForget) + k, 0), 1.0);
    EXPECT_EQ(ca.bias(ca.GateOffset(Gate::kInput) + k, 0), 0.0);
  }
}

TEST(LabelerTest, PaperShapes) {
  const BiLstmLabeler model = InitBiLstmLabeler(20, 256, 10, 1);
  Rng rng(2);
  const LabelerOutput out = LabelerForward(model, RandomMatrix(3, 20, rng));
  EXPECT_EQ(out.hidden.cols(), 512u);
  EXPECT_EQ(out.probs.cols(), 10u);
  EXPECT_EQ(out.probs.rows(), 3u);
}

TEST(LabelerTest, ZeroHeadGivesUniformDistribution) {
  BiLstmLabeler model = InitBiLstmLabeler(6, 5, 10, 3);
  model.w_out.Fill(0.0);
  model.b_out.Fill(0.0);
  Rng rng(4);
  const Matrix probs = Predict(model, RandomMatrix(4, 6, rng));
  for (const double p : probs.values()) EXPECT_DOUBLE_EQ(p, 0.1);
}

TEST(LabelerTest, TiedCellsMirrorUnderReversal) {
  BiLstmLabeler model = InitBiLstmLabeler(4, 3, 10, 5);
  model.backward = model.forward;
  Rng rng(6);
  const Matrix seq = RandomMatrix(3, 4, rng);
  Matrix reversed(3, 4);
  for (std::size_t t = 0; t < 3; ++t) {
    for (std::size_t d = 0; d < 4; ++d) reversed(t, d) = seq(2 - t, d);
  }
  const Matrix a = LabelerForward(model, seq).hidden;
  const Matrix b = LabelerForward(model, reversed).hidden;
  for (std::size_t t = 0; t < 3; ++t) {
    for (std::size_t k = 0; k < 3; ++k) {
      EXPECT_EQ(a(t, k), b(2 - t, 3 + k));
      EXPECT_EQ(a(t, 3 + k), b(2 - t, k));
    }
  }
}

TEST(LabelerTest, InputErrorsAreRejected) {
  const BiLstmLabeler model = InitBiLstmLabeler(4, 3, 10, 5);
  EXPECT_THROW(LabelerForward(model, Matrix(0, 4)), ValidationError);
  EXPECT_THROW(LabelerForward(model, Matrix(2, 5)), ValidationError);
}

TEST(LabelerTest, SoftmaxRowsSumToOne) {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const BiLstmLabeler model =
        InitBiLstmLabeler(1 + rng.Below(8), 1 + rng.Below(6), 10, trial);
    const Matrix probs =
        Predict(model, RandomMatrix(1 + rng.Below(6), model.input_dim(), rng, 3.0));
    for (std::size_t t = 0; t < probs.rows(); ++t) {
      double sum = 0.0;
      for (const double p : probs.row(t)) {
        EXPECT_GT(p, 0.0);
        sum += p;
      }
      EXPECT_NEAR(sum, 1.0, 1e-9);
    }
  }
}

TEST(LossTest, UniformPredictionsCostLnTen) {
  const Matrix probs(3, 10, 0.1);
  const std::vector<int> gold = {0, 4, 9};
  EXPECT_NEAR(CrossEntropy(probs, gold), std::log(10.0), 1e-12);
  EXPECT_NEAR(CrossEntropy(probs, gold), 2.302585, 1e-6);
}

TEST(LossTest, HandWorkedTwoTokenCase) {
  Matrix probs(2, 2);
  probs(0, 0) = 0.5;
  probs(0, 1) = 0.5;
  probs(1, 0) = 0.75;
  probs(1, 1) = 0.25;
  const std::vector<int> gold = {1, 1};
  EXPECT_NEAR(CrossEntropy(probs, gold), (std::log(2.0) + std::log(4.0)) / 2,
              1e-15);
  EXPECT_NEAR(CrossEntropy(probs, gold), 1.0397, 1e-4);
  EXPECT_NEAR(CrossEntropySum(probs, gold), std::log(2.0) + std::log(4.0),
              1e-15);
}

TEST(LossTest, PerfectAndZeroProbability) {
  Matrix probs(1, 3, 0.0);
  probs(0, 2) = 1.0;
  EXPECT_LE(CrossEntropy(probs, std::vector<int>{2}), -std::log(1 - 1e-12));
  EXPECT_NEAR(CrossEntropy(probs, std::vector<int>{0}), -std::log(1e-12),
              1e-9);
}

TEST(LossTest, MismatchesAreRejected) {
  const Matrix probs(2, 10, 0.1);
  EXPECT_THROW(CrossEntropy(probs, std::vector<int>{1}), ValidationError);
  EXPECT_THROW(CrossEntropy(probs, std::vector<int>{1, 10}), ValidationError);
}

TEST(LossTest, ArgmaxTiesGoLow) {
  EXPECT_EQ(Argmax(std::vector<double>{0.2, 0.4, 0.4}), 1u);
  EXPECT_EQ(Argmax(std::vector<double>{0.1}), 0u);
}

TEST(BackwardTest, OutputBiasGradientSumsToZero) {
  Rng rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const BiLstmLabeler model = InitBiLstmLabeler(5, 4, 10, trial);
    const Matrix seq = RandomMatrix(4, 5, rng);
    const std::vector<int> gold = RandomGold(4, 10, rng);
    const BiLstmLabeler g = AnalyticGradients(model, seq, std::span<const int>(gold));
    double sum = 0.0;
    for (const double v : g.b_out.values()) sum += v;
    EXPECT_NEAR(sum, 0.0, 1e-14);
  }
}

TEST(BackwardTest, GradientsAreDeterministic) {
  Rng rng(9);
  const BiLstmLabeler model = InitBiLstmLabeler(5, 4, 10, 1);
  const Matrix seq = RandomMatrix(4, 5, rng);
  const std::vector<int> gold = RandomGold(4, 10, rng);
  const BiLstmLabeler a = AnalyticGradients(model, seq, std::span<const int>(gold));
  const BiLstmLabeler b = AnalyticGradients(model, seq, std::span<const int>(gold));
  EXPECT_EQ(a.forward.w_input, b.forward.w_input);
  EXPECT_EQ(a.backward.w_recurrent, b.backward.w_recurrent);
  EXPECT_EQ(a.w_out, b.w_out);
}

TEST(GradCheckTest, TwentyRandomModelsPass) {
  const auto trials = RunGradCheckTrials(20, 42);
  ASSERT_EQ(trials.size(), 40u);
  for (const GradCheckTrial& t : trials) {
    EXPECT_LT(t.result.max_relative_error, 1e-4)
        << t.architecture << " D=" << t.input_dim << " H=" << t.hidden_dim
        << " T=" << t.tokens << " worst " << t.result.worst_parameter;
    EXPECT_GT(t.result.checked, 0u);
  }
}

// Flipping the sign of one analytic entry must be caught with relative error
// close to 1.
TEST(GradCheckTest, ExtendedLossMatchesModelLoss) {
  Rng rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t d = 1 + rng.Below(12);
    const std::size_t h = 1 + rng.Below(8);
    const std::size_t t = 1 + rng.Below(5);
    const Matrix seq = RandomMatrix(t, d, rng);
    const std::vector<int> gold = RandomGold(t, 10, rng);
    const std::span<const int> g(gold);
    const BiLstmLabeler lstm = InitBiLstmLabeler(d, h, 10, rng.NextU64());
    const Mlp mlp = InitMlp(d, h, 10, rng.NextU64());
    const double a = SequenceLoss(lstm, seq, g);
    const double b = SequenceLoss(mlp, seq, g);
    EXPECT_NEAR(static_cast<double>(ExtendedSequenceLoss(lstm, seq, g)), a,
                1e-13 * a);
    EXPECT_NEAR(static_cast<double>(ExtendedSequenceLoss(mlp, seq, g)), b,
                1e-13 * b);
  }
}

TEST(GradCheckTest, NegatedGradientIsDetected) {
  Rng rng(10);
  const BiLstmLabeler model = InitBiLstmLabeler(4, 3, 10, 11);
  const Matrix seq = RandomMatrix(3, 4, rng);
  const std::vector<int> gold = RandomGold(3, 10, rng);
  const std::span<const int> g(gold);
  for (const std::string target : {"forward.w_input", "backward.bias", "out.weight"}) {
    BiLstmLabeler analytic = AnalyticGradients(model, seq, g);
    ForEachParameter(analytic, [&](const std::string& name, Matrix& m) {
      if (name != target) return;
      auto v = m.values();
      const auto it = std::max_element(v.begin(), v.end(), [](double a, double b) {
        return std::abs(a) < std::abs(b);
      });
      *it = -*it;
    });
    const GradCheckResult r = GradCheckAgainst(model, seq, g, analytic);
    EXPECT_NEAR(r.max_relative_error, 1.0, 1e-3) << target;
    EXPECT_EQ(r.worst_parameter, target);
  }
  Mlp mlp = InitMlp(4, 5, 10, 12);
  Mlp analytic = AnalyticGradients(mlp, seq, g);
  analytic.w_hidden(0, 0) = -analytic.w_hidden(0, 0);
  EXPECT_NEAR(GradCheckAgainst(mlp, seq, g, analytic).max_relative_error, 1.0,
              1e-3);
}

// Central differences have O(eps^2) truncation error: halving eps divides
// the largest absolute discrepancy by about four.
TEST(GradCheckTest, HalvingEpsilonQuartersTheError) {
  Rng rng(13);
  const BiLstmLabeler model = InitBiLstmLabeler(3, 3, 10, 14);
  const Matrix seq = RandomMatrix(3, 3, rng, 2.0);
  const std::vector<int> gold = RandomGold(3, 10, rng);
  const std::span<const int> g(gold);
  const BiLstmLabeler analytic = AnalyticGradients(model, seq, g);

  auto max_abs_error = [&](double eps) {
    BiLstmLabeler probe = model;
    BiLstmLabeler grads = analytic;
    std::vector<Matrix*> ps = ParameterList(probe);
    std::vector<Matrix*> gs = ParameterList(grads);
    double worst = 0.0;
    for (std::size_t p = 0; p < ps.size(); ++p) {
      auto v = ps[p]->values();
      for (std::size_t k = 0; k < v.size(); ++k) {
        const double saved = v[k];
        v[k] = saved + eps;
        const double plus = SequenceLoss(probe, seq, g);
        v[k] = saved - eps;
        const double minus = SequenceLoss(probe, seq, g);
        v[k] = saved;
        worst = std::max(worst, std::abs((plus - minus) / (2 * eps) -
                                         gs[p]->values()[k]));
      }
    }
    return worst;
  };
  const double coarse = max_abs_error(2e-2);
  const double fine = max_abs_error(1e-2);
  EXPECT_GT(coarse / fine, 3.5);
  EXPECT_LT(coarse / fine, 4.5);
}

TEST(TrainerTest, DefaultsMatchReferenceSetup) {
  const TrainConfig cfg;
  EXPECT_EQ(cfg.iterations, 300);
  EXPECT_EQ(cfg.batch_size_tokens, 2000);
  EXPECT_EQ(cfg.optimizer, OptimizerKind::kAdam);
  EXPECT_EQ(cfg.learning_rate, 1e-3);
  EXPECT_EQ(cfg.clip_norm, 5.0);
}

TEST(TrainerTest, InvalidConfigsAreRejected) {
  TrainConfig cfg;
  cfg.iterations = 0;
  EXPECT_THROW(Validate(cfg), ValidationError);
  cfg = TrainConfig{};
  cfg.learning_rate = -1;
  EXPECT_THROW(Validate(cfg), ValidationError);
  cfg = TrainConfig{};
  cfg.clip_norm = 0;
  EXPECT_THROW(Validate(cfg), ValidationError);
  EXPECT_THROW(ParseOptimizer("rmsprop"), ValidationError);
}

TEST(TrainerTest, ZeroLearningRateLeavesParametersUntouched) {
  Rng rng(15);
  const auto data = RandomExamples(6, 4, rng);
  const BiLstmLabeler init = InitBiLstmLabeler(4, 3, 10, 16);
  for (const OptimizerKind kind : {OptimizerKind::kSgd, OptimizerKind::kAdam}) {
    TrainConfig cfg;
    cfg.iterations = 5;
    cfg.batch_size_tokens = 6;
    cfg.learning_rate = 0.0;
    cfg.optimizer = kind;
    const auto result = Train(init, std::span<const Example>(data), {}, cfg);
    EXPECT_EQ(SerializeCheckpoint(MakeCheckpoint(result.model, cfg)),
              SerializeCheckpoint(MakeCheckpoint(init, cfg)));
  }
}

TEST(TrainerTest, SameConfigGivesIdenticalCheckpoints) {
  Rng rng(17);
  const auto data = RandomExamples(10, 4, rng);
  const auto val = RandomExamples(3, 4, rng);
  TrainConfig cfg;
  cfg.iterations = 8;
  cfg.batch_size_tokens = 10;
  cfg.learning_rate = 1e-2;
  cfg.seed = 3;
  auto run = [&] {
    const auto r = Train(InitBiLstmLabeler(4, 3, 10, 1),
                         std::span<const Example>(data),
                         std::span<const Example>(val), cfg);
    return SerializeCheckpoint(MakeCheckpoint(r.model, cfg, r.history));
  };
  const std::string a = run();
  EXPECT_EQ(a, run());
  cfg.seed = 4;
  EXPECT_NE(a, run());
}

TEST(TrainerTest, HistoryRecordsEveryStep) {
  Rng rng(18);
  const auto data = RandomExamples(4, 3, rng);
  TrainConfig cfg;
  cfg.iterations = 6;
  cfg.batch_size_tokens = 4;
  std::vector<int> seen;
  const auto r = Train(InitMlp(3, 4, 10, 1), std::span<const Example>(data),
                       {}, cfg, [&](const StepMetrics& m) { seen.push_back(m.step); });
  ASSERT_EQ(r.history.size(), 6u);
  EXPECT_EQ(seen, (std::vector<int>{1, 2, 3, 4, 5, 6}));
  EXPECT_TRUE(std::isnan(r.history[0].val_loss));
  EXPECT_TRUE(std::isfinite(r.history[0].train_loss));
}

// With the whole data set in every batch and a small step size, the batch
// loss must not go up during the first ten steps in at least 95% of trials.
TEST(TrainerTest, SmallStepsDoNotIncreaseTheLoss) {
  const int trials = 40;
  int monotone = 0;
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng(100 + trial);
    const std::size_t dim = 2 + rng.Below(5);
    const auto data = RandomExamples(4, dim, rng);
    TrainConfig cfg;
    cfg.iterations = 11;
    cfg.batch_size_tokens = 1000;
    cfg.learning_rate = 1e-3;
    cfg.seed = trial;
    const auto r = Train(InitBiLstmLabeler(dim, 1 + rng.Below(6), 10, trial),
                         std::span<const Example>(data), {}, cfg);
    bool ok = true;
    for (std::size_t s = 1; s < r.history.size(); ++s) {
      ok &= r.history[s].train_loss <= r.history[s - 1].train_loss;
    }
    monotone += ok ? 1 : 0;
  }
  EXPECT_GE(monotone, 38) << monotone << " of " << trials;
}

TEST(TrainerTest, NonFiniteLossNamesTheStep) {
  Rng rng(19);
  auto data = RandomExamples(2, 3, rng);
  data[1].inputs(0, 0) = std::numeric_limits<double>::quiet_NaN();
  TrainConfig cfg;
  cfg.iterations = 3;
  cfg.batch_size_tokens = 1000;
  try {
    Train(InitBiLstmLabeler(3, 2, 10, 1), std::span<const Example>(data), {},
          cfg);
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("step 1"), std::string::npos)
        << e.what();
  }
}

TEST(TrainerTest, EmptyTrainingSetIsRejected) {
  EXPECT_THROW(Train(InitMlp(3, 4, 10, 1), std::span<const Example>(), {},
                     TrainConfig{}),
               ValidationError);
}

TEST(OptimizerTest, SgdAndAdamFirstStep) {
  Matrix p(1, 2);
  p(0, 0) = 1.0;
  p(0, 1) = -1.0;
  Matrix g(1, 2);
  g(0, 0) = 0.5;
  g(0, 1) = -2.0;
  Matrix q = p;
  Optimizer sgd(OptimizerKind::kSgd, 0.1);
  sgd.Step({&p}, {&g});
  EXPECT_DOUBLE_EQ(p(0, 0), 1.0 - 0.05);
  EXPECT_DOUBLE_EQ(p(0, 1), -1.0 + 0.2);
  // Bias-corrected Adam moves every coordinate by about lr on the first step.
  Optimizer adam(OptimizerKind::kAdam, 0.1);
  adam.Step({&q}, {&g});
  EXPECT_NEAR(q(0, 0), 0.9, 1e-7);
  EXPECT_NEAR(q(0, 1), -0.9, 1e-7);
  EXPECT_EQ(adam.steps(), 1);
}

TEST(OptimizerTest, ClippingBoundsGlobalNorm) {
  Matrix a(1, 2);
  a(0, 0) = 3.0;
  Matrix b(1, 1);
  b(0, 0) = 4.0;
  EXPECT_DOUBLE_EQ(ClipGlobalNorm({&a, &b}, 1.0), 5.0);
  EXPECT_NEAR(GlobalNorm({&a, &b}), 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(a(0, 0), 0.6);
  EXPECT_DOUBLE_EQ(ClipGlobalNorm({&a, &b}, 2.0), GlobalNorm({&a, &b}));
}

ModelCheckpoint TrainedCheckpoint() {
  Rng rng(20);
  const auto data = RandomExamples(5, 4, rng);
  TrainConfig cfg;
  cfg.iterations = 3;
  cfg.batch_size_tokens = 8;
  cfg.seed = 77;
  const auto r = Train(InitBiLstmLabeler(4, 3, 10, 2),
                       std::span<const Example>(data),
                       std::span<const Example>(data), cfg);
  ModelCheckpoint ckpt = MakeCheckpoint(r.model, cfg, r.history);
  ckpt.metadata["role"] = "nlp";
  return ckpt;
}

TEST(CheckpointTest, RoundTripIsBitwise) {
  const ModelCheckpoint ckpt = TrainedCheckpoint();
  const std::string bytes = SerializeCheckpoint(ckpt);
  EXPECT_EQ(bytes.substr(0, 8), "METAEXCK");
  const ModelCheckpoint back = DeserializeCheckpoint(bytes);
  EXPECT_EQ(SerializeCheckpoint(back), bytes);
  EXPECT_EQ(back.architecture, "bilstm-labeler");
  EXPECT_EQ(back.seed, 77u);
  EXPECT_EQ(back.config, ckpt.config);
  EXPECT_EQ(back.metadata, ckpt.metadata);
  ASSERT_EQ(back.history.size(), 3u);

  const auto dir = testing::ScratchDir("checkpoint");
  SaveCheckpoint(ckpt, dir / "m.ckpt");
  const ModelCheckpoint loaded = LoadCheckpoint(dir / "m.ckpt");
  const BiLstmLabeler original =
      RestoreModel(ckpt, ZeroBiLstmLabeler(4, 3, 10));
  const BiLstmLabeler restored =
      RestoreModel(loaded, ZeroBiLstmLabeler(4, 3, 10));
  Rng rng(21);
  const Matrix seq = RandomMatrix(5, 4, rng);
  EXPECT_EQ(Predict(original, seq), Predict(restored, seq));
  EXPECT_EQ(FindTensor(loaded, "out.weight").rows(), 10u);
  EXPECT_THROW(FindTensor(loaded, "nope"), ValidationError);
}

TEST(CheckpointTest, NanHistorySurvives) {
  ModelCheckpoint ckpt = TrainedCheckpoint();
  ckpt.history[0].val_loss = std::numeric_limits<double>::quiet_NaN();
  const ModelCheckpoint back = DeserializeCheckpoint(SerializeCheckpoint(ckpt));
  EXPECT_TRUE(std::isnan(back.history[0].val_loss));
}

TEST(CheckpointTest, CorruptFilesAreRejected) {
  const std::string good = SerializeCheckpoint(TrainedCheckpoint());
  std::string bad_magic = good;
  bad_magic[0] = 'X';
  EXPECT_THROW(DeserializeCheckpoint(bad_magic), ValidationError);
  std::string bad_version = good;
  bad_version[8] = 2;
  EXPECT_THROW(DeserializeCheckpoint(bad_version), ValidationError);
  EXPECT_THROW(DeserializeCheckpoint(good.substr(0, good.size() - 8)),
               ValidationError);
  EXPECT_THROW(DeserializeCheckpoint(good + "x"), ValidationError);
  EXPECT_THROW(DeserializeCheckpoint(good.substr(0, 20)), ValidationError);
  EXPECT_THROW(LoadCheckpoint("/nonexistent/m.ckpt"), ValidationError);
}

TEST(CheckpointTest, ArchitectureAndShapeMismatchesAreRejected) {
  const ModelCheckpoint ckpt = TrainedCheckpoint();
  EXPECT_THROW(RestoreModel(ckpt, ZeroMlp(4, 3, 10)), ValidationError);
  EXPECT_THROW(RestoreModel(ckpt, ZeroBiLstmLabeler(4, 5, 10)),
               ValidationError);
}

}  // namespace
}  // namespace metaex::nn
