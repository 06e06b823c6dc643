#ifndef METAEX_NN_MLP_H_
#define METAEX_NN_MLP_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "metaex/nn/matrix.h"

namespace metaex::nn {

// One-hidden-layer feed-forward classifier (tanh hidden units, softmax
// output). Each input row is classified independently.
struct Mlp {
  Matrix w_hidden;  // Hd x D
  Matrix b_hidden;  // Hd x 1
  Matrix w_out;     // C x Hd
  Matrix b_out;     // C x 1

  std::size_t input_dim() const { return w_hidden.cols(); }
  std::size_t hidden_dim() const { return w_hidden.rows(); }
  std::size_t num_classes() const { return w_out.rows(); }
};

inline constexpr std::string_view kMlpTag = "mlp";

Mlp ZeroMlp(std::size_t input_dim, std::size_t hidden_dim,
            std::size_t num_classes);
// Weights uniform in (-1/sqrt(fan_in), 1/sqrt(fan_in)), zero biases.
Mlp InitMlp(std::size_t input_dim, std::size_t hidden_dim,
            std::size_t num_classes, std::uint64_t seed);

inline Mlp ZerosLike(const Mlp& m) {
  return ZeroMlp(m.input_dim(), m.hidden_dim(), m.num_classes());
}
inline std::string_view ArchitectureTag(const Mlp&) { return kMlpTag; }

// N x C probabilities for N x D inputs. Throws ValidationError on a column
// mismatch.
Matrix Predict(const Mlp& model, const Matrix& inputs);

double AccumulateGradients(const Mlp& model, const Matrix& inputs,
                           std::span<const int> gold, double scale,
                           Mlp& grads);

template <typename F>
void ForEachParameter(Mlp& m, F&& f) {
  f(std::string("hidden.weight"), m.w_hidden);
  f(std::string("hidden.bias"), m.b_hidden);
  f(std::string("out.weight"), m.w_out);
  f(std::string("out.bias"), m.b_out);
}

}  // namespace metaex::nn

#endif  // METAEX_NN_MLP_H_
