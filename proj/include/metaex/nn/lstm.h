#ifndef METAEX_NN_LSTM_H_
#define METAEX_NN_LSTM_H_

#include <span>
#include <string>
#include <vector>

#include "metaex/nn/matrix.h"
#include "metaex/random.h"

namespace metaex::nn {

// Gate blocks are stacked in this order inside the 4H-row parameter
// matrices: input, forget, output, candidate.
enum class Gate : std::size_t { kInput = 0, kForget = 1, kOutput = 2, kCell = 3 };

// Standard LSTM cell:
//   i = sigmoid(W_i x + U_i h + b_i)    f, o likewise
//   g = tanh(W_g x + U_g h + b_g)
//   c' = f * c + i * g,  h' = o * tanh(c')
struct LstmCell {
  std::size_t input_dim = 0;
  std::size_t hidden_dim = 0;
  Matrix w_input;      // 4H x D
  Matrix w_recurrent;  // 4H x H
  Matrix bias;         // 4H x 1

  // Rows of the given gate's block in w_input / w_recurrent / bias.
  std::size_t GateOffset(Gate g) const {
    return static_cast<std::size_t>(g) * hidden_dim;
  }
};

// Zero parameters of the given shape.
LstmCell ZeroLstmCell(std::size_t input_dim, std::size_t hidden_dim);

// Weights uniform in (-1/sqrt(H), 1/sqrt(H)); biases zero except the forget
// gate, which starts at 1.
LstmCell InitLstmCell(std::size_t input_dim, std::size_t hidden_dim, Rng& rng);

struct LstmState {
  std::vector<double> h;
  std::vector<double> c;
};

// One time step. Throws ValidationError on shape mismatch.
LstmState LstmStep(const LstmCell& cell, std::span<const double> x,
                   std::span<const double> h_prev,
                   std::span<const double> c_prev);

// Activations of one directional pass over a T-step sequence, kept for
// backpropagation. Row t belongs to input position t regardless of the
// direction the pass ran in.
struct LstmTrace {
  Matrix gates;   // T x 4H, post-activation i, f, o, g
  Matrix cell;    // T x H
  Matrix hidden;  // T x H
  bool reverse = false;
};

// Runs the cell over the rows of `inputs` (T x D), front to back or back to
// front, from zero initial state.
LstmTrace LstmSequenceForward(const LstmCell& cell, const Matrix& inputs,
                              bool reverse);

// Backpropagation through time. d_hidden is dLoss/dh_t (T x H, indexed like
// the trace). Adds parameter gradients into `grads` (same shape as cell).
void LstmSequenceBackward(const LstmCell& cell, const Matrix& inputs,
                          const LstmTrace& trace, const Matrix& d_hidden,
                          LstmCell& grads);

template <typename F>
void ForEachParameter(LstmCell& cell, const std::string& prefix, F&& f) {
  f(prefix + "w_input", cell.w_input);
  f(prefix + "w_recurrent", cell.w_recurrent);
  f(prefix + "bias", cell.bias);
}

}  // namespace metaex::nn

#endif  // METAEX_NN_LSTM_H_
