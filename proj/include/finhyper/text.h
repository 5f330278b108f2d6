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

#ifndef FINHYPER_TEXT_H_
#define FINHYPER_TEXT_H_

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "finhyper/error.h"
#include "finhyper/ontology.h"
#include "finhyper/rng.h"
#include "finhyper/tags.h"

namespace finhyper {

// Terminal punctuation that ends a sentence, in addition to newlines.
inline constexpr std::string_view kSentenceDelimiters = ".!?;";

// Lowercases, splits on newlines and on `delimiters`, trims each piece,
// collapses internal whitespace runs to one space and drops empty pieces.
// Abbreviations are not special-cased: "U.S. index" yields {"u", "s", "index"}.
std::vector<std::string> Preprocess(std::string_view raw,
                                    std::string_view delimiters = kSentenceDelimiters);

struct SentencePair {
  std::string sentence;
  Tag tag;
  double score;

  bool operator==(const SentencePair&) const = default;
};

struct PairSet {
  std::vector<SentencePair> pairs;
  // Recommended settings for the external sentence-encoder trainer.
  std::map<std::string, std::string> metadata;
};

struct PairOptions {
  double positive = 0.8;
  double negative = 0.3;
};

// Every sentence of every corpus entry is paired once with each tag: scored
// `positive` for the entry's own tag and `negative` otherwise. Order is
// corpus order, then the given tag order.
PairSet BuildPairs(const DefinitionCorpus& corpus, const std::vector<Tag>& tags,
                   const PairOptions& options = {});

// `#metadata k=v ...` line, header row, then `sentence\ttag\tscore` rows.
void WritePairsTsv(const PairSet& pairs, std::ostream& out);
PairSet ReadPairsTsv(const std::filesystem::path& path);

struct SplitSpec {
  double train = 0.7;
  double dev = 0.1;
  double test = 0.2;
  std::uint64_t seed = 0;

  void Validate() const;
};

template <typename T>
struct SplitParts {
  std::vector<T> train;
  std::vector<T> dev;
  std::vector<T> test;
};

struct SplitSizes {
  std::size_t train = 0;
  std::size_t dev = 0;
  std::size_t test = 0;
};

// round(n * f) for train and dev; test takes the remainder so that the three
// sizes always sum to n.
SplitSizes ComputeSplitSizes(std::size_t n, const SplitSpec& spec);

// Seeded shuffle of the positions 0..n-1.
std::vector<std::size_t> ShuffledIndices(std::size_t n, std::uint64_t seed);

template <typename T>
SplitParts<T> Split(const std::vector<T>& items, const SplitSpec& spec) {
  spec.Validate();
  const SplitSizes sizes = ComputeSplitSizes(items.size(), spec);
  const auto order = ShuffledIndices(items.size(), spec.seed);
  SplitParts<T> parts;
  parts.train.reserve(sizes.train);
  parts.dev.reserve(sizes.dev);
  parts.test.reserve(sizes.test);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const T& item = items[order[i]];
    if (i < sizes.train) {
      parts.train.push_back(item);
    } else if (i < sizes.train + sizes.dev) {
      parts.dev.push_back(item);
    } else {
      parts.test.push_back(item);
    }
  }
  return parts;
}

}  // namespace finhyper

#endif  // FINHYPER_TEXT_H_
