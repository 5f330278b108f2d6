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

#include "finhyper/representation.h"

#include "finhyper/embeddings.h"
#include "finhyper/error.h"
#include "finhyper/io.h"
#include "finhyper/strings.h"

namespace finhyper {

namespace {

constexpr std::string_view kSpaceMark = "\xE2\x96\x81";  // U+2581

std::string ReplaceAll(std::string_view s, std::string_view from, std::string_view to) {
  std::string out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s.compare(i, from.size(), from) == 0) {
      out += to;
      i += from.size();
    } else {
      out += s[i++];
    }
  }
  return out;
}

}  // namespace

void SentenceVectorStore::Add(std::string_view text, std::span<const double> vector) {
  table_.Add(NormalizeKey(text), vector);
}

std::optional<std::span<const double>> SentenceVectorStore::Find(
    std::string_view text) const {
  return table_.Find(NormalizeKey(text));
}

SentenceVectorStore SentenceVectorStore::Load(const std::filesystem::path& path) {
  VectorTable raw = ReadWord2Vec(path);
  if (raw.dimension() != kPhraseDim) {
    throw Error(ErrorCode::kParse, path.string() + ": sentence vectors must have " +
                                       std::to_string(kPhraseDim) +
                                       " dimensions, found " +
                                       std::to_string(raw.dimension()));
  }
  SentenceVectorStore store;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    store.Add(ReplaceAll(raw.keys()[i], kSpaceMark, " "), raw.row(i));
  }
  return store;
}

void SentenceVectorStore::Save(const std::filesystem::path& path,
                               const std::string& header_comment) const {
  VectorTable escaped(kPhraseDim);
  for (std::size_t i = 0; i < table_.size(); ++i) {
    escaped.Add(ReplaceAll(table_.keys()[i], " ", kSpaceMark), table_.row(i));
  }
  auto out = OpenForWrite(path);
  WriteWord2Vec(escaped, out, header_comment);
}

std::string_view FeatureModeName(FeatureMode mode) {
  switch (mode) {
    case FeatureMode::kSentenceOnly: return "sentence_only";
    case FeatureMode::kWordOnly: return "word_only";
    case FeatureMode::kFused: return "fused";
  }
  return "";
}

std::optional<FeatureMode> ParseFeatureMode(std::string_view name) {
  for (auto m : {FeatureMode::kSentenceOnly, FeatureMode::kWordOnly, FeatureMode::kFused}) {
    if (FeatureModeName(m) == name) return m;
  }
  return std::nullopt;
}

std::vector<double> Pad(std::span<const double> v, std::size_t target) {
  if (v.size() > target) {
    throw Error(ErrorCode::kInvalidArgument,
                "cannot pad a " + std::to_string(v.size()) + "-d vector to " +
                    std::to_string(target));
  }
  std::vector<double> out(target, 0.0);
  std::copy(v.begin(), v.end(), out.begin());
  return out;
}

std::vector<double> Fuse(std::span<const double> sent, std::span<const double> word) {
  if (sent.size() != kPhraseDim) {
    throw Error(ErrorCode::kInvalidArgument,
                "sentence vector has " + std::to_string(sent.size()) +
                    " dimensions, expected " + std::to_string(kPhraseDim));
  }
  std::vector<double> out = Pad(word, kPhraseDim);
  for (std::size_t i = 0; i < kPhraseDim; ++i) out[i] += sent[i];
  return out;
}

std::vector<double> TermWordSum(std::string_view term, const VectorTable& words,
                                std::size_t* oov_tokens) {
  std::vector<double> sum(words.dimension(), 0.0);
  for (const auto& token : SplitWhitespace(ToLower(term))) {
    const WordLookup w = WordVector(words, token);
    if (!w.in_vocabulary && oov_tokens != nullptr) ++*oov_tokens;
    for (std::size_t d = 0; d < sum.size(); ++d) sum[d] += w.vector[d];
  }
  return sum;
}

TermFeature TermEmbedding(std::string_view term, FeatureMode mode,
                          const SentenceVectorStore* sents, const VectorTable* words,
                          const TermFeatureOptions& options) {
  TermFeature out;
  std::vector<double> sentence;
  if (mode != FeatureMode::kWordOnly) {
    if (sents == nullptr) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string(FeatureModeName(mode)) + " mode needs sentence vectors");
    }
    if (auto v = sents->Find(term)) {
      sentence.assign(v->begin(), v->end());
    } else if (options.zero_fallback) {
      sentence.assign(kPhraseDim, 0.0);
      out.sentence_missing = true;
    } else {
      throw Error(ErrorCode::kNotFound,
                  "no sentence vector for term '" + std::string(term) + "'");
    }
    if (mode == FeatureMode::kSentenceOnly) {
      out.vector = std::move(sentence);
      return out;
    }
  }
  if (words == nullptr) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(FeatureModeName(mode)) + " mode needs word vectors");
  }
  const std::vector<double> word_sum = TermWordSum(term, *words, &out.oov_tokens);
  if (mode == FeatureMode::kWordOnly) {
    out.vector = Pad(word_sum, kPhraseDim);
    return out;
  }
  if (options.sentence_per_token) {
    const std::size_t tokens = std::max<std::size_t>(1, SplitWhitespace(term).size());
    for (double& x : sentence) x *= static_cast<double>(tokens);
  }
  out.vector = Fuse(sentence, word_sum);
  return out;
}

FeatureBatch TermFeatures(std::span<const std::string> terms, FeatureMode mode,
                          const SentenceVectorStore* sents, const VectorTable* words,
                          const TermFeatureOptions& options, int threads) {
  FeatureBatch batch;
  batch.features = Matrix(terms.size(), kPhraseDim);
  std::vector<TermFeature> rows(terms.size());
  kernels::ParallelFor(terms.size(), threads, [&](std::size_t i) {
    rows[i] = TermEmbedding(terms[i], mode, sents, words, options);
  });
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::copy(rows[i].vector.begin(), rows[i].vector.end(), batch.features.row(i).begin());
    batch.missing_sentences += rows[i].sentence_missing ? 1 : 0;
    batch.oov_tokens += rows[i].oov_tokens;
  }
  return batch;
}

}  // namespace finhyper
