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

#include "finhyper/kernels.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#include "finhyper/error.h"

namespace finhyper {

void Matrix::AppendRow(std::span<const double> values) {
  if (rows_ == 0 && data_.empty()) cols_ = values.size();
  if (values.size() != cols_) {
    throw Error(ErrorCode::kInvalidArgument,
                "row has " + std::to_string(values.size()) + " columns, expected " +
                    std::to_string(cols_));
  }
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

namespace kernels {
namespace {

void CheckAffine(const Matrix& w, std::span<const double> b, const Matrix& x) {
  if (w.cols() != x.cols() || b.size() != w.rows()) {
    throw Error(ErrorCode::kInvalidArgument, "affine kernel: dimension mismatch");
  }
}

double SampleScores(const Matrix& w, std::span<const double> b,
                    std::span<const double> x, std::span<double> out) {
  double max_score = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < w.rows(); ++c) {
    const auto wc = w.row(c);
    double s = b[c];
    for (std::size_t d = 0; d < x.size(); ++d) s += wc[d] * x[d];
    out[c] = s;
    max_score = std::max(max_score, s);
  }
  return max_score;
}

// Turns scores into probabilities in place; returns -log p[label].
double SoftmaxInPlace(std::span<double> p, double max_score, int label) {
  double z = 0;
  for (double& v : p) {
    v = std::exp(v - max_score);
    z += v;
  }
  const double log_z = std::log(z);
  const double nll = log_z - std::log(p[static_cast<std::size_t>(label)]);
  for (double& v : p) v /= z;
  return nll;
}

double Regularizer(const Matrix& w, double l2) {
  if (l2 == 0) return 0;
  double s = 0;
  for (double v : w.data()) s += v * v;
  return 0.5 * l2 * s;
}

}  // namespace

namespace serial {

void AffineScores(const Matrix& weights, std::span<const double> bias,
                  const Matrix& features, Matrix& out) {
  CheckAffine(weights, bias, features);
  out = Matrix(features.rows(), weights.rows());
  for (std::size_t n = 0; n < features.rows(); ++n) {
    SampleScores(weights, bias, features.row(n), out.row(n));
  }
}

double SoftmaxCrossEntropy(const Matrix& weights, std::span<const double> bias,
                           const Matrix& features, std::span<const int> labels,
                           std::span<const std::size_t> rows, double l2,
                           Matrix& grad_weights, std::span<double> grad_bias) {
  CheckAffine(weights, bias, features);
  const std::size_t classes = weights.rows();
  const std::size_t dim = weights.cols();
  grad_weights = Matrix(classes, dim);
  std::fill(grad_bias.begin(), grad_bias.end(), 0.0);
  const double inv = 1.0 / static_cast<double>(rows.size());
  std::vector<double> p(classes);
  double loss = 0;
  for (std::size_t n : rows) {
    const auto x = features.row(n);
    const double m = SampleScores(weights, bias, x, p);
    loss += SoftmaxInPlace(p, m, labels[n]);
    for (std::size_t c = 0; c < classes; ++c) {
      const double g = (p[c] - (static_cast<std::size_t>(labels[n]) == c ? 1.0 : 0.0));
      grad_bias[c] += g * inv;
      auto gw = grad_weights.row(c);
      for (std::size_t d = 0; d < dim; ++d) gw[d] += g * inv * x[d];
    }
  }
  for (std::size_t c = 0; c < classes; ++c) {
    auto gw = grad_weights.row(c);
    const auto w = weights.row(c);
    for (std::size_t d = 0; d < dim; ++d) gw[d] += l2 * w[d];
  }
  return loss * inv + Regularizer(weights, l2);
}

void CosineScores(const Matrix& queries, const Matrix& labels, Matrix& out) {
  if (queries.cols() != labels.cols()) {
    throw Error(ErrorCode::kInvalidArgument, "cosine kernel: dimension mismatch");
  }
  out = Matrix(queries.rows(), labels.rows());
  std::vector<double> label_norm(labels.rows());
  for (std::size_t l = 0; l < labels.rows(); ++l) {
    double s = 0;
    for (double v : labels.row(l)) s += v * v;
    label_norm[l] = std::sqrt(s);
  }
  for (std::size_t n = 0; n < queries.rows(); ++n) {
    const auto q = queries.row(n);
    double qs = 0;
    for (double v : q) qs += v * v;
    const double qn = std::sqrt(qs);
    for (std::size_t l = 0; l < labels.rows(); ++l) {
      if (qn == 0 || label_norm[l] == 0) {
        out(n, l) = 0;
        continue;
      }
      const auto lv = labels.row(l);
      double dot = 0;
      for (std::size_t d = 0; d < q.size(); ++d) dot += q[d] * lv[d];
      out(n, l) = dot / (qn * label_norm[l]);
    }
  }
}

}  // namespace serial

namespace omp {

void AffineScores(const Matrix& weights, std::span<const double> bias,
                  const Matrix& features, Matrix& out, int threads) {
  CheckAffine(weights, bias, features);
  out = Matrix(features.rows(), weights.rows());
  const auto n_rows = static_cast<std::ptrdiff_t>(features.rows());
#pragma omp parallel for num_threads(threads) schedule(static)
  for (std::ptrdiff_t n = 0; n < n_rows; ++n) {
    SampleScores(weights, bias, features.row(static_cast<std::size_t>(n)),
                 out.row(static_cast<std::size_t>(n)));
  }
}

double SoftmaxCrossEntropy(const Matrix& weights, std::span<const double> bias,
                           const Matrix& features, std::span<const int> labels,
                           std::span<const std::size_t> rows, double l2,
                           Matrix& grad_weights, std::span<double> grad_bias,
                           int threads) {
  CheckAffine(weights, bias, features);
  const std::size_t classes = weights.rows();
  const std::size_t dim = weights.cols();
  const auto batch = static_cast<std::ptrdiff_t>(rows.size());
  const double inv = 1.0 / static_cast<double>(rows.size());

  // Phase 1: per-sample probabilities, independent across samples.
  Matrix residual(rows.size(), classes);
  std::vector<double> nll(rows.size());
#pragma omp parallel for num_threads(threads) schedule(static)
  for (std::ptrdiff_t i = 0; i < batch; ++i) {
    const std::size_t n = rows[static_cast<std::size_t>(i)];
    auto p = residual.row(static_cast<std::size_t>(i));
    const double m = SampleScores(weights, bias, features.row(n), p);
    nll[static_cast<std::size_t>(i)] = SoftmaxInPlace(p, m, labels[n]);
    p[static_cast<std::size_t>(labels[n])] -= 1.0;
  }

  // Phase 2: one class row per task; samples summed in batch order.
  grad_weights = Matrix(classes, dim);
  const auto n_classes = static_cast<std::ptrdiff_t>(classes);
#pragma omp parallel for num_threads(threads) schedule(static)
  for (std::ptrdiff_t ci = 0; ci < n_classes; ++ci) {
    const auto c = static_cast<std::size_t>(ci);
    auto gw = grad_weights.row(c);
    double gb = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const double g = residual(i, c);
      gb += g * inv;
      const auto x = features.row(rows[i]);
      for (std::size_t d = 0; d < dim; ++d) gw[d] += g * inv * x[d];
    }
    grad_bias[c] = gb;
    const auto w = weights.row(c);
    for (std::size_t d = 0; d < dim; ++d) gw[d] += l2 * w[d];
  }
  double loss = 0;
  for (double v : nll) loss += v;
  return loss * inv + Regularizer(weights, l2);
}

void CosineScores(const Matrix& queries, const Matrix& labels, Matrix& out,
                  int threads) {
  if (queries.cols() != labels.cols()) {
    throw Error(ErrorCode::kInvalidArgument, "cosine kernel: dimension mismatch");
  }
  out = Matrix(queries.rows(), labels.rows());
  std::vector<double> label_norm(labels.rows());
  for (std::size_t l = 0; l < labels.rows(); ++l) {
    double s = 0;
    for (double v : labels.row(l)) s += v * v;
    label_norm[l] = std::sqrt(s);
  }
  const auto n_rows = static_cast<std::ptrdiff_t>(queries.rows());
#pragma omp parallel for num_threads(threads) schedule(static)
  for (std::ptrdiff_t ni = 0; ni < n_rows; ++ni) {
    const auto n = static_cast<std::size_t>(ni);
    const auto q = queries.row(n);
    double qs = 0;
    for (double v : q) qs += v * v;
    const double qn = std::sqrt(qs);
    for (std::size_t l = 0; l < labels.rows(); ++l) {
      if (qn == 0 || label_norm[l] == 0) {
        out(n, l) = 0;
        continue;
      }
      const auto lv = labels.row(l);
      double dot = 0;
      for (std::size_t d = 0; d < q.size(); ++d) dot += q[d] * lv[d];
      out(n, l) = dot / (qn * label_norm[l]);
    }
  }
}

}  // namespace omp

void AffineScores(const Matrix& weights, std::span<const double> bias,
                  const Matrix& features, Matrix& out, int threads) {
  if (threads <= 1) {
    serial::AffineScores(weights, bias, features, out);
  } else {
    omp::AffineScores(weights, bias, features, out, threads);
  }
}

double SoftmaxCrossEntropy(const Matrix& weights, std::span<const double> bias,
                           const Matrix& features, std::span<const int> labels,
                           std::span<const std::size_t> rows, double l2,
                           Matrix& grad_weights, std::span<double> grad_bias,
                           int threads) {
  if (threads <= 1) {
    return serial::SoftmaxCrossEntropy(weights, bias, features, labels, rows, l2,
                                       grad_weights, grad_bias);
  }
  return omp::SoftmaxCrossEntropy(weights, bias, features, labels, rows, l2,
                                  grad_weights, grad_bias, threads);
}

void CosineScores(const Matrix& queries, const Matrix& labels, Matrix& out,
                  int threads) {
  if (threads <= 1) {
    serial::CosineScores(queries, labels, out);
  } else {
    omp::CosineScores(queries, labels, out, threads);
  }
}

void ParallelFor(std::size_t n, int threads,
                 const std::function<void(std::size_t)>& body) {
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  const auto count = static_cast<std::ptrdiff_t>(n);
  std::exception_ptr first_error;
#pragma omp parallel for num_threads(threads) schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(finhyper_parallel_for_error)
      if (!first_error) first_error = std::current_exception();
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace kernels
}  // namespace finhyper
