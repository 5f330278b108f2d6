/*
 * Copyright 2026 The finhyper Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef FINHYPER_KERNELS_H_
#define FINHYPER_KERNELS_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace finhyper {

// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  // Appends a row; the first row fixes the column count.
  void AppendRow(std::span<const double> values);

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Kernels come in two flavours with identical signatures. `serial` is the
// reference; `omp` parallelizes over independent outputs so that each output
// element is accumulated in the same order, making results bitwise equal.
namespace kernels {

namespace serial {

// out(n, c) = X.row(n) . W.row(c) + b[c]
void AffineScores(const Matrix& weights, std::span<const double> bias,
                  const Matrix& features, Matrix& out);

// Mean softmax cross-entropy over the selected rows plus (l2/2)||W||^2.
// Writes the gradient with respect to W and b. `rows` selects samples of
// `features`/`labels`.
double SoftmaxCrossEntropy(const Matrix& weights, std::span<const double> bias,
                           const Matrix& features, std::span<const int> labels,
                           std::span<const std::size_t> rows, double l2,
                           Matrix& grad_weights, std::span<double> grad_bias);

// out(n, l) = cosine(queries.row(n), labels.row(l)); zero-norm rows give 0.
void CosineScores(const Matrix& queries, const Matrix& labels, Matrix& out);

}  // namespace serial

namespace omp {

void AffineScores(const Matrix& weights, std::span<const double> bias,
                  const Matrix& features, Matrix& out, int threads);

double SoftmaxCrossEntropy(const Matrix& weights, std::span<const double> bias,
                           const Matrix& features, std::span<const int> labels,
                           std::span<const std::size_t> rows, double l2,
                           Matrix& grad_weights, std::span<double> grad_bias,
                           int threads);

void CosineScores(const Matrix& queries, const Matrix& labels, Matrix& out,
                  int threads);

}  // namespace omp

// Picks the serial kernel for threads <= 1.
void AffineScores(const Matrix& weights, std::span<const double> bias,
                  const Matrix& features, Matrix& out, int threads = 1);
double SoftmaxCrossEntropy(const Matrix& weights, std::span<const double> bias,
                           const Matrix& features, std::span<const int> labels,
                           std::span<const std::size_t> rows, double l2,
                           Matrix& grad_weights, std::span<double> grad_bias,
                           int threads = 1);
void CosineScores(const Matrix& queries, const Matrix& labels, Matrix& out,
                  int threads = 1);

// Runs body(i) for i in [0, n). Iterations must be independent.
void ParallelFor(std::size_t n, int threads, const std::function<void(std::size_t)>& body);

}  // namespace kernels
}  // namespace finhyper

#endif  // FINHYPER_KERNELS_H_
