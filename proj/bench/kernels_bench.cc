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

// Serial reference kernels against their OpenMP counterparts.
//
//   finhyper_bench --benchmark_filter=Softmax

#include <numeric>
#include <vector>

#include <benchmark/benchmark.h>
#include <omp.h>

#include "finhyper/classifiers.h"
#include "finhyper/embeddings.h"
#include "finhyper/kernels.h"
#include "finhyper/rng.h"

namespace finhyper {
namespace {

constexpr std::size_t kDim = 768;

struct Problem {
  Matrix weights{kNumTags, kDim};
  std::vector<double> bias = std::vector<double>(kNumTags);
  Matrix features;
  std::vector<int> labels;
  std::vector<std::size_t> rows;

  explicit Problem(std::size_t n) : features(n, kDim), labels(n), rows(n) {
    Rng rng(1);
    for (double& x : weights.data()) x = 0.01 * rng.Gaussian();
    for (double& x : features.data()) x = rng.Gaussian();
    for (auto& l : labels) l = static_cast<int>(rng.Below(kNumTags));
    std::iota(rows.begin(), rows.end(), 0);
  }
};

int Threads() { return omp_get_max_threads(); }

void BM_AffineSerial(benchmark::State& state) {
  Problem p(state.range(0));
  Matrix out;
  for (auto _ : state) {
    kernels::serial::AffineScores(p.weights, p.bias, p.features, out);
    benchmark::DoNotOptimize(out.data().data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_AffineOmp(benchmark::State& state) {
  Problem p(state.range(0));
  Matrix out;
  for (auto _ : state) {
    kernels::omp::AffineScores(p.weights, p.bias, p.features, out, Threads());
    benchmark::DoNotOptimize(out.data().data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SoftmaxSerial(benchmark::State& state) {
  Problem p(state.range(0));
  Matrix gw(kNumTags, kDim);
  std::vector<double> gb(kNumTags);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::serial::SoftmaxCrossEntropy(
        p.weights, p.bias, p.features, p.labels, p.rows, 1e-4, gw, gb));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SoftmaxOmp(benchmark::State& state) {
  Problem p(state.range(0));
  Matrix gw(kNumTags, kDim);
  std::vector<double> gb(kNumTags);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::omp::SoftmaxCrossEntropy(
        p.weights, p.bias, p.features, p.labels, p.rows, 1e-4, gw, gb, Threads()));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_CosineSerial(benchmark::State& state) {
  Problem p(state.range(0));
  Matrix out;
  for (auto _ : state) {
    kernels::serial::CosineScores(p.features, p.weights, out);
    benchmark::DoNotOptimize(out.data().data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_CosineOmp(benchmark::State& state) {
  Problem p(state.range(0));
  Matrix out;
  for (auto _ : state) {
    kernels::omp::CosineScores(p.features, p.weights, out, Threads());
    benchmark::DoNotOptimize(out.data().data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

// Forest training: trees are grown in parallel for threads > 1.
void BM_Forest(benchmark::State& state) {
  Problem p(300);
  std::vector<Tag> y;
  for (int l : p.labels) y.push_back(TagFromIndex(static_cast<std::size_t>(l)));
  ForestParams params;
  params.num_trees = 16;
  params.threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(TrainForest(p.features, y, params).trees.size());
}

// Skip-gram training: threads = 1 is the deterministic serial trainer.
void BM_Embeddings(benchmark::State& state) {
  std::vector<std::string> lines;
  Rng rng(3);
  for (int i = 0; i < 400; ++i) {
    std::string line;
    for (int w = 0; w < 12; ++w) line += "w" + std::to_string(rng.Below(200)) + " ";
    lines.push_back(line);
  }
  EmbeddingConfig c;
  c.dimension = 100;
  c.min_count = 1;
  c.epochs = 1;
  c.buckets = 100000;
  c.threads = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(TrainEmbeddings(lines, c).table.size());
}

BENCHMARK(BM_AffineSerial)->Arg(256)->Arg(4096);
BENCHMARK(BM_AffineOmp)->Arg(256)->Arg(4096);
BENCHMARK(BM_SoftmaxSerial)->Arg(256)->Arg(4096);
BENCHMARK(BM_SoftmaxOmp)->Arg(256)->Arg(4096);
BENCHMARK(BM_CosineSerial)->Arg(256)->Arg(4096);
BENCHMARK(BM_CosineOmp)->Arg(256)->Arg(4096);
BENCHMARK(BM_Forest)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Embeddings)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace finhyper

BENCHMARK_MAIN();
