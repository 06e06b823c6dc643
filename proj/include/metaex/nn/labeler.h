#ifndef METAEX_NN_LABELER_H_
#define METAEX_NN_LABELER_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "metaex/nn/lstm.h"
#include "metaex/nn/matrix.h"

namespace metaex::nn {

// Bidirectional LSTM sequence labeler: a forward and a backward cell over the
// input rows, their hidden states concatenated to 2H, a linear layer to C
// class scores and a softmax.
struct BiLstmLabeler {
  LstmCell forward;
  LstmCell backward;
  Matrix w_out;  // C x 2H
  Matrix b_out;  // C x 1

  std::size_t input_dim() const { return forward.input_dim; }
  std::size_t hidden_dim() const { return forward.hidden_dim; }
  std::size_t num_classes() const { return w_out.rows(); }
};

inline constexpr std::string_view kBiLstmTag = "bilstm-labeler";

BiLstmLabeler ZeroBiLstmLabeler(std::size_t input_dim, std::size_t hidden_dim,
                                std::size_t num_classes);
BiLstmLabeler InitBiLstmLabeler(std::size_t input_dim, std::size_t hidden_dim,
                                std::size_t num_classes, std::uint64_t seed);

inline BiLstmLabeler ZerosLike(const BiLstmLabeler& m) {
  return ZeroBiLstmLabeler(m.input_dim(), m.hidden_dim(), m.num_classes());
}
inline std::string_view ArchitectureTag(const BiLstmLabeler&) {
  return kBiLstmTag;
}

struct LabelerOutput {
  Matrix hidden;  // T x 2H, [forward h_t ; backward h_t]
  Matrix probs;   // T x C, rows sum to 1
};

// Throws ValidationError for an empty sequence or a column-count mismatch.
LabelerOutput LabelerForward(const BiLstmLabeler& model, const Matrix& seq);

inline Matrix Predict(const BiLstmLabeler& model, const Matrix& seq) {
  return LabelerForward(model, seq).probs;
}

// Adds scale * d(sum_t -ln p_t[gold_t]) into grads and returns the summed
// (unscaled) cross-entropy of the sequence.
double AccumulateGradients(const BiLstmLabeler& model, const Matrix& seq,
                           std::span<const int> gold, double scale,
                           BiLstmLabeler& grads);

template <typename F>
void ForEachParameter(BiLstmLabeler& m, F&& f) {
  ForEachParameter(m.forward, "forward.", f);
  ForEachParameter(m.backward, "backward.", f);
  f(std::string("out.weight"), m.w_out);
  f(std::string("out.bias"), m.b_out);
}

}  // namespace metaex::nn

#endif  // METAEX_NN_LABELER_H_
