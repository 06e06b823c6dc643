#include "metaex/nn/optimizer.h"

#include "metaex/errors.h"

namespace metaex::nn {

std::string_view OptimizerName(OptimizerKind kind) {
  return kind == OptimizerKind::kAdam ? "adam" : "sgd";
}

OptimizerKind ParseOptimizer(std::string_view name) {
  if (name == "adam") return OptimizerKind::kAdam;
  if (name == "sgd") return OptimizerKind::kSgd;
  throw ValidationError("unknown optimizer '" + std::string(name) +
                        "'; expected 'sgd' or 'adam'");
}

void Validate(const TrainConfig& cfg) {
  if (cfg.iterations <= 0) throw ValidationError("iterations must be > 0");
  if (cfg.batch_size_tokens <= 0) {
    throw ValidationError("batch_size_tokens must be > 0");
  }
  if (!(cfg.learning_rate >= 0.0) || !std::isfinite(cfg.learning_rate)) {
    throw ValidationError("learning_rate must be finite and >= 0");
  }
  if (!(cfg.clip_norm > 0.0)) throw ValidationError("clip_norm must be > 0");
}

double GlobalNorm(const std::vector<Matrix*>& grads) {
  double sq = 0.0;
  for (const Matrix* g : grads) {
    for (const double v : g->values()) sq += v * v;
  }
  return std::sqrt(sq);
}

double ClipGlobalNorm(const std::vector<Matrix*>& grads, double max_norm) {
  const double norm = GlobalNorm(grads);
  if (norm > max_norm) {
    const double s = max_norm / norm;
    for (Matrix* g : grads) {
      for (double& v : g->values()) v *= s;
    }
  }
  return norm;
}

Optimizer::Optimizer(OptimizerKind kind, double learning_rate)
    : kind_(kind), learning_rate_(learning_rate) {}

void Optimizer::Step(const std::vector<Matrix*>& params,
                     const std::vector<Matrix*>& grads) {
  ++steps_;
  if (kind_ == OptimizerKind::kSgd) {
    for (std::size_t p = 0; p < params.size(); ++p) {
      auto w = params[p]->values();
      const auto g = grads[p]->values();
      for (std::size_t k = 0; k < w.size(); ++k) w[k] -= learning_rate_ * g[k];
    }
    return;
  }
  if (first_moment_.empty()) {
    for (const Matrix* p : params) {
      first_moment_.emplace_back(p->rows(), p->cols());
      second_moment_.emplace_back(p->rows(), p->cols());
    }
  }
  const double t = static_cast<double>(steps_);
  const double c1 = 1.0 - std::pow(kAdamBeta1, t);
  const double c2 = 1.0 - std::pow(kAdamBeta2, t);
  for (std::size_t p = 0; p < params.size(); ++p) {
    auto w = params[p]->values();
    const auto g = grads[p]->values();
    auto m = first_moment_[p].values();
    auto v = second_moment_[p].values();
    for (std::size_t k = 0; k < w.size(); ++k) {
      m[k] = kAdamBeta1 * m[k] + (1.0 - kAdamBeta1) * g[k];
      v[k] = kAdamBeta2 * v[k] + (1.0 - kAdamBeta2) * g[k] * g[k];
      const double m_hat = m[k] / c1;
      const double v_hat = v[k] / c2;
      w[k] -= learning_rate_ * m_hat / (std::sqrt(v_hat) + kAdamEpsilon);
    }
  }
}

}  // namespace metaex::nn
