#ifndef METAEX_NN_MATRIX_H_
#define METAEX_NN_MATRIX_H_

#include <cstddef>
#include <span>
#include <vector>

namespace metaex::nn {

// Dense row-major matrix of doubles. Vectors are n x 1 matrices or plain
// spans; sequences are T x D with one row per time step.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<double> row(std::size_t r) {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  void Fill(double v);
  bool SameShape(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_;
  }
  bool AllFinite() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// out = a * b^T  (a: n x k, b: m x k, out: n x m). Overwrites out.
void MatMulTransposed(const Matrix& a, const Matrix& b, Matrix& out);

// out += a^T * b  (a: n x m, b: n x k, out: m x k).
void AddTransposedMatMul(const Matrix& a, const Matrix& b, Matrix& out);

// y += M x  (M: n x k).
void AddMatVec(const Matrix& m, std::span<const double> x,
               std::span<double> y);

// y += M^T x  (M: n x k, x: n, y: k).
void AddTransposedMatVec(const Matrix& m, std::span<const double> x,
                         std::span<double> y);

// M += x y^T.
void AddOuter(std::span<const double> x, std::span<const double> y,
              Matrix& m);

// In-place numerically stable softmax.
void SoftmaxInPlace(std::span<double> v);

double Sigmoid(double x);

}  // namespace metaex::nn

#endif  // METAEX_NN_MATRIX_H_
