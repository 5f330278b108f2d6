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

#ifndef FINHYPER_REPRESENTATION_H_
#define FINHYPER_REPRESENTATION_H_

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "finhyper/kernels.h"
#include "finhyper/vectors.h"

namespace finhyper {

// Width of the sentence-encoder output and of every term feature vector.
inline constexpr std::size_t kPhraseDim = 768;

// Externally produced sentence vectors keyed by normalized text
// (lowercased, trimmed, single-spaced).
class SentenceVectorStore {
 public:
  SentenceVectorStore() : table_(kPhraseDim) {}

  // Throws unless the vector has kPhraseDim components.
  void Add(std::string_view text, std::span<const double> vector);
  std::optional<std::span<const double>> Find(std::string_view text) const;

  std::size_t size() const { return table_.size(); }
  const VectorTable& table() const { return table_; }

  // word2vec text layout with spaces inside keys written as U+2581.
  static SentenceVectorStore Load(const std::filesystem::path& path);
  void Save(const std::filesystem::path& path,
            const std::string& header_comment = {}) const;

 private:
  VectorTable table_;
};

enum class FeatureMode { kSentenceOnly, kWordOnly, kFused };

std::string_view FeatureModeName(FeatureMode mode);
std::optional<FeatureMode> ParseFeatureMode(std::string_view name);

// Zero-extends v to `target` components. Throws if v is longer.
std::vector<double> Pad(std::span<const double> v, std::size_t target);

// sent + Pad(word, sent.size()). Throws unless sent has kPhraseDim
// components and word has at most that many.
std::vector<double> Fuse(std::span<const double> sent, std::span<const double> word);

struct TermFeatureOptions {
  // Substitute the zero vector, and report it, when a term has no sentence
  // vector. Off: a missing vector is an error.
  bool zero_fallback = false;
  // Add the sentence vector once per token instead of once per term.
  bool sentence_per_token = false;
};

struct TermFeature {
  std::vector<double> vector;
  bool sentence_missing = false;
  std::size_t oov_tokens = 0;
};

// Sum of word vectors over the lowercased whitespace tokens of `term`, in the
// word table's dimension. OOV tokens contribute their subword sum or zero.
std::vector<double> TermWordSum(std::string_view term, const VectorTable& words,
                                std::size_t* oov_tokens = nullptr);

// sentence_only: sents[term]; word_only: Pad(word sum); fused:
// Fuse(sents[term], word sum). `sents` may be null for word_only and `words`
// may be null for sentence_only.
TermFeature TermEmbedding(std::string_view term, FeatureMode mode,
                          const SentenceVectorStore* sents, const VectorTable* words,
                          const TermFeatureOptions& options = {});

struct FeatureBatch {
  Matrix features;  // one kPhraseDim row per term
  std::size_t missing_sentences = 0;
  std::size_t oov_tokens = 0;
};

// TermEmbedding for every term; rows are independent and are computed in
// parallel when threads > 1.
FeatureBatch TermFeatures(std::span<const std::string> terms, FeatureMode mode,
                          const SentenceVectorStore* sents, const VectorTable* words,
                          const TermFeatureOptions& options = {}, int threads = 1);

}  // namespace finhyper

#endif  // FINHYPER_REPRESENTATION_H_
