#include "metaex/nn/lstm.h"

#include <cmath>

#include "metaex/errors.h"

namespace metaex::nn {

LstmCell ZeroLstmCell(std::size_t input_dim, std::size_t hidden_dim) {
  LstmCell cell;
  cell.input_dim = input_dim;
  cell.hidden_dim = hidden_dim;
  cell.w_input = Matrix(4 * hidden_dim, input_dim);
  cell.w_recurrent = Matrix(4 * hidden_dim, hidden_dim);
  cell.bias = Matrix(4 * hidden_dim, 1);
  return cell;
}

LstmCell InitLstmCell(std::size_t input_dim, std::size_t hidden_dim,
                      Rng& rng) {
  LstmCell cell = ZeroLstmCell(input_dim, hidden_dim);
  const double bound = 1.0 / std::sqrt(static_cast<double>(hidden_dim));
  for (double& v : cell.w_input.values()) v = rng.Uniform(-bound, bound);
  for (double& v : cell.w_recurrent.values()) v = rng.Uniform(-bound, bound);
  const std::size_t f = cell.GateOffset(Gate::kForget);
  for (std::size_t j = 0; j < hidden_dim; ++j) cell.bias(f + j, 0) = 1.0;
  return cell;
}

namespace {

// z holds the 4H pre-activations; writes activations back in place.
void ActivateGates(std::span<double> z, std::size_t hidden) {
  for (std::size_t j = 0; j < 3 * hidden; ++j) z[j] = Sigmoid(z[j]);
  for (std::size_t j = 3 * hidden; j < 4 * hidden; ++j) z[j] = std::tanh(z[j]);
}

}  // namespace

LstmState LstmStep(const LstmCell& cell, std::span<const double> x,
                   std::span<const double> h_prev,
                   std::span<const double> c_prev) {
  const std::size_t hd = cell.hidden_dim;
  if (x.size() != cell.input_dim || h_prev.size() != hd ||
      c_prev.size() != hd) {
    throw ValidationError("LSTM step: input or state has the wrong size");
  }
  std::vector<double> z(cell.bias.values().begin(), cell.bias.values().end());
  AddMatVec(cell.w_input, x, z);
  AddMatVec(cell.w_recurrent, h_prev, z);
  ActivateGates(z, hd);
  LstmState out{std::vector<double>(hd), std::vector<double>(hd)};
  for (std::size_t j = 0; j < hd; ++j) {
    const double i = z[j], f = z[hd + j], o = z[2 * hd + j], g = z[3 * hd + j];
    out.c[j] = f * c_prev[j] + i * g;
    out.h[j] = o * std::tanh(out.c[j]);
  }
  return out;
}

LstmTrace LstmSequenceForward(const LstmCell& cell, const Matrix& inputs,
                              bool reverse) {
  if (inputs.cols() != cell.input_dim) {
    throw ValidationError("LSTM: input dimension " +
                          std::to_string(inputs.cols()) + ", expected " +
                          std::to_string(cell.input_dim));
  }
  const std::size_t steps = inputs.rows();
  const std::size_t hd = cell.hidden_dim;
  LstmTrace trace;
  trace.reverse = reverse;
  MatMulTransposed(inputs, cell.w_input, trace.gates);
  trace.cell = Matrix(steps, hd);
  trace.hidden = Matrix(steps, hd);

  std::vector<double> zero(hd, 0.0);
  for (std::size_t s = 0; s < steps; ++s) {
    const std::size_t t = reverse ? steps - 1 - s : s;
    std::span<double> z = trace.gates.row(t);
    const auto bias = cell.bias.values();
    for (std::size_t j = 0; j < 4 * hd; ++j) z[j] += bias[j];
    std::span<const double> h_prev = zero;
    std::span<const double> c_prev = zero;
    if (s > 0) {
      const std::size_t p = reverse ? t + 1 : t - 1;
      h_prev = trace.hidden.row(p);
      c_prev = trace.cell.row(p);
    }
    AddMatVec(cell.w_recurrent, h_prev, z);
    ActivateGates(z, hd);
    std::span<double> c = trace.cell.row(t);
    std::span<double> h = trace.hidden.row(t);
    for (std::size_t j = 0; j < hd; ++j) {
      c[j] = z[hd + j] * c_prev[j] + z[j] * z[3 * hd + j];
      h[j] = z[2 * hd + j] * std::tanh(c[j]);
    }
  }
  return trace;
}

void LstmSequenceBackward(const LstmCell& cell, const Matrix& inputs,
                          const LstmTrace& trace, const Matrix& d_hidden,
                          LstmCell& grads) {
  const std::size_t steps = inputs.rows();
  const std::size_t hd = cell.hidden_dim;
  Matrix d_pre(steps, 4 * hd);       // dLoss/d(pre-activation), per step
  Matrix h_prev_rows(steps, hd);     // h_{t-1} in processing order, per row
  std::vector<double> dh_next(hd, 0.0);
  std::vector<double> dc_next(hd, 0.0);
  std::vector<double> zero(hd, 0.0);

  for (std::size_t s = steps; s-- > 0;) {
    const std::size_t t = trace.reverse ? steps - 1 - s : s;
    std::span<const double> c_prev = zero;
    if (s > 0) {
      const std::size_t p = trace.reverse ? t + 1 : t - 1;
      c_prev = trace.cell.row(p);
      const auto hp = trace.hidden.row(p);
      std::copy(hp.begin(), hp.end(), h_prev_rows.row(t).begin());
    }
    const auto gates = trace.gates.row(t);
    const auto c = trace.cell.row(t);
    const auto dh_out = d_hidden.row(t);
    std::span<double> dz = d_pre.row(t);
    for (std::size_t j = 0; j < hd; ++j) {
      const double i = gates[j], f = gates[hd + j], o = gates[2 * hd + j],
                   g = gates[3 * hd + j];
      const double tc = std::tanh(c[j]);
      const double dh = dh_out[j] + dh_next[j];
      const double dc = dh * o * (1.0 - tc * tc) + dc_next[j];
      dz[j] = dc * g * i * (1.0 - i);
      dz[hd + j] = dc * c_prev[j] * f * (1.0 - f);
      dz[2 * hd + j] = dh * tc * o * (1.0 - o);
      dz[3 * hd + j] = dc * i * (1.0 - g * g);
      dc_next[j] = dc * f;
    }
    std::fill(dh_next.begin(), dh_next.end(), 0.0);
    AddTransposedMatVec(cell.w_recurrent, dz, dh_next);
  }

  AddTransposedMatMul(d_pre, inputs, grads.w_input);
  AddTransposedMatMul(d_pre, h_prev_rows, grads.w_recurrent);
  auto db = grads.bias.values();
  for (std::size_t t = 0; t < steps; ++t) {
    const auto dz = d_pre.row(t);
    for (std::size_t j = 0; j < 4 * hd; ++j) db[j] += dz[j];
  }
}

}  // namespace metaex::nn
