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

#ifndef FINHYPER_EMBEDDINGS_H_
#define FINHYPER_EMBEDDINGS_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "finhyper/vectors.h"

namespace finhyper {

struct EmbeddingConfig {
  std::size_t dimension = 300;
  int window = 5;
  int negatives = 5;
  int ngram_min = 3;
  int ngram_max = 6;
  std::size_t min_count = 5;
  int epochs = 5;
  double learning_rate = 0.05;
  std::uint32_t buckets = 2'000'000;
  std::uint64_t seed = 1;
  bool subwords_enabled = true;
  // 1 runs the deterministic serial trainer; more runs lock-free workers.
  int threads = 1;

  void Validate() const;
};

// Character n-grams of "<word>" for n in [min_n, max_n], counted in UTF-8
// code points. Order: by start position, then by increasing n. Repeated
// n-grams are kept.
std::vector<std::string> CharNgrams(std::string_view word, int min_n, int max_n);

// FNV-1a (32 bit) of the n-gram bytes, modulo the bucket count.
std::uint32_t NgramBucket(std::string_view ngram, std::uint32_t buckets);

// Subword side of a FastText-style model: the word-own input vectors and the
// n-gram bucket vectors that were touched during training. Buckets that
// never occurred in the training vocabulary are absent.
class SubwordTable {
 public:
  SubwordTable(std::size_t dimension, int ngram_min, int ngram_max,
               std::uint32_t buckets);

  std::size_t dimension() const { return dimension_; }
  int ngram_min() const { return ngram_min_; }
  int ngram_max() const { return ngram_max_; }
  std::uint32_t buckets() const { return buckets_; }

  void AddWord(std::string word, std::span<const float> own);
  void AddBucket(std::uint32_t bucket, std::span<const float> vector);

  std::optional<std::span<const float>> WordOwn(std::string_view word) const;
  std::optional<std::span<const float>> Bucket(std::uint32_t bucket) const;

  const std::vector<std::string>& words() const { return words_; }
  const std::vector<std::uint32_t>& bucket_ids() const { return bucket_ids_; }

  // Bucket ids of the word's n-grams, in CharNgrams order.
  std::vector<std::uint32_t> WordBuckets(std::string_view word) const;

  void Write(std::ostream& out) const;
  static std::shared_ptr<SubwordTable> Read(const std::filesystem::path& path);

 private:
  std::size_t dimension_;
  int ngram_min_;
  int ngram_max_;
  std::uint32_t buckets_;
  std::vector<std::string> words_;
  std::vector<float> own_;
  std::unordered_map<std::string, std::size_t> word_index_;
  std::vector<std::uint32_t> bucket_ids_;
  std::vector<float> bucket_rows_;
  std::unordered_map<std::uint32_t, std::size_t> bucket_index_;
};

struct WordLookup {
  std::vector<double> vector;
  bool in_vocabulary = false;
  std::size_t ngrams_found = 0;
  // True when the word could not be represented and the zero vector was
  // returned instead.
  bool zero_fallback = false;
};

// In-vocabulary: the stored vector. Out-of-vocabulary with subwords: the sum
// of the known n-gram bucket vectors. Otherwise the zero vector, flagged.
WordLookup WordVector(const VectorTable& table, std::string_view word);

// Skip-gram negative-sampling loss for a single example, with gradients.
//
// `targets` holds (1 + k) rows of `hidden.size()` values: the observed
// context first, then k noise words. Returns
//   -log s(t_0 . h) - sum_k log s(-t_k . h)
// and writes dloss/dhidden to grad_hidden and dloss/dtargets to
// grad_targets (same layout as targets).
double SgnsLossAndGradient(std::span<const double> hidden,
                           std::span<const double> targets,
                           std::span<double> grad_hidden,
                           std::span<double> grad_targets);

struct TrainStats {
  std::size_t vocabulary = 0;
  std::size_t tokens = 0;
  std::size_t ngram_buckets = 0;
  std::vector<double> epoch_mean_loss;
};

struct TrainedEmbeddings {
  VectorTable table;
  TrainStats stats;
};

// Trains skip-gram with negative sampling on the given raw lines; each line
// is split into sentences and context windows never cross a sentence. With
// subwords enabled the input representation of a word is its own vector plus
// the sum of its n-gram bucket vectors. Throws Error(kInvalidArgument) when
// no token survives min_count, Error(kNumerical) on a non-finite loss.
TrainedEmbeddings TrainEmbeddings(std::span<const std::string> lines,
                                  const EmbeddingConfig& config);

}  // namespace finhyper

#endif  // FINHYPER_EMBEDDINGS_H_
