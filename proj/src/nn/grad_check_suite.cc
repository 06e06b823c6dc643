#include "metaex/nn/grad_check_suite.h"

#include "metaex/nn/labeler.h"
#include "metaex/nn/mlp.h"
#include "metaex/random.h"

namespace metaex::nn {

namespace {

constexpr std::size_t kClasses = 10;

void RandomProblem(Rng& rng, std::size_t tokens, std::size_t dim, Matrix& seq,
                   std::vector<int>& gold) {
  seq = Matrix(tokens, dim);
  for (double& v : seq.values()) v = rng.Uniform(-1.0, 1.0);
  gold.resize(tokens);
  for (int& g : gold) g = static_cast<int>(rng.Below(kClasses));
}

}  // namespace

std::vector<GradCheckTrial> RunGradCheckTrials(int trials, std::uint64_t seed,
                                               double eps) {
  std::vector<GradCheckTrial> out;
  Rng rng(seed);
  Matrix seq;
  std::vector<int> gold;
  for (int i = 0; i < trials; ++i) {
    GradCheckTrial t;
    t.architecture = std::string(kBiLstmTag);
    t.input_dim = 1 + rng.Below(12);
    t.hidden_dim = 1 + rng.Below(8);
    t.tokens = 1 + rng.Below(5);
    const BiLstmLabeler model =
        InitBiLstmLabeler(t.input_dim, t.hidden_dim, kClasses, rng.NextU64());
    RandomProblem(rng, t.tokens, t.input_dim, seq, gold);
    t.result = GradCheck(model, seq, gold, eps);
    out.push_back(std::move(t));
  }
  for (int i = 0; i < trials; ++i) {
    GradCheckTrial t;
    t.architecture = std::string(kMlpTag);
    t.input_dim = 1 + rng.Below(12);
    t.hidden_dim = 1 + rng.Below(8);
    t.tokens = 1 + rng.Below(5);
    const Mlp model =
        InitMlp(t.input_dim, t.hidden_dim, kClasses, rng.NextU64());
    RandomProblem(rng, t.tokens, t.input_dim, seq, gold);
    t.result = GradCheck(model, seq, gold, eps);
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace metaex::nn
