#include "metaex/nn/matrix.h"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace metaex::nn {

void Matrix::Fill(double v) { std::fill(data_.begin(), data_.end(), v); }

bool Matrix::AllFinite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

void MatMulTransposed(const Matrix& a, const Matrix& b, Matrix& out) {
  assert(a.cols() == b.cols());
  if (out.rows() != a.rows() || out.cols() != b.rows()) {
    out = Matrix(a.rows(), b.rows());
  }
  const std::size_t k = a.cols();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* ai = a.data() + i * k;
    double* oi = out.data() + i * out.cols();
    for (std::size_t j = 0; j < b.rows(); ++j) {
      const double* bj = b.data() + j * k;
      double acc = 0.0;
      for (std::size_t p = 0; p < k; ++p) acc += ai[p] * bj[p];
      oi[j] = acc;
    }
  }
}

void AddTransposedMatMul(const Matrix& a, const Matrix& b, Matrix& out) {
  assert(a.rows() == b.rows());
  assert(out.rows() == a.cols() && out.cols() == b.cols());
  const std::size_t m = a.cols();
  const std::size_t k = b.cols();
  for (std::size_t n = 0; n < a.rows(); ++n) {
    const double* an = a.data() + n * m;
    const double* bn = b.data() + n * k;
    for (std::size_t i = 0; i < m; ++i) {
      const double s = an[i];
      if (s == 0.0) continue;
      double* oi = out.data() + i * k;
      for (std::size_t j = 0; j < k; ++j) oi[j] += s * bn[j];
    }
  }
}

void AddMatVec(const Matrix& m, std::span<const double> x,
               std::span<double> y) {
  assert(x.size() == m.cols() && y.size() == m.rows());
  const std::size_t k = m.cols();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const double* mi = m.data() + i * k;
    double acc = 0.0;
    for (std::size_t p = 0; p < k; ++p) acc += mi[p] * x[p];
    y[i] += acc;
  }
}

void AddTransposedMatVec(const Matrix& m, std::span<const double> x,
                         std::span<double> y) {
  assert(x.size() == m.rows() && y.size() == m.cols());
  const std::size_t k = m.cols();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const double s = x[i];
    if (s == 0.0) continue;
    const double* mi = m.data() + i * k;
    for (std::size_t p = 0; p < k; ++p) y[p] += s * mi[p];
  }
}

void AddOuter(std::span<const double> x, std::span<const double> y,
              Matrix& m) {
  assert(x.size() == m.rows() && y.size() == m.cols());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double s = x[i];
    if (s == 0.0) continue;
    double* mi = m.data() + i * m.cols();
    for (std::size_t j = 0; j < y.size(); ++j) mi[j] += s * y[j];
  }
}

void SoftmaxInPlace(std::span<double> v) {
  if (v.empty()) return;
  const double max = *std::max_element(v.begin(), v.end());
  double sum = 0.0;
  for (double& x : v) {
    x = std::exp(x - max);
    sum += x;
  }
  for (double& x : v) x /= sum;
}

double Sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace metaex::nn
