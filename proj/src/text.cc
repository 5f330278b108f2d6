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

#include "finhyper/text.h"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <numeric>

#include "finhyper/io.h"
#include "finhyper/strings.h"

namespace finhyper {

std::vector<std::string> Preprocess(std::string_view raw,
                                    std::string_view delimiters) {
  std::vector<std::string> sentences;
  const std::string lower = ToLower(raw);
  std::size_t start = 0;
  for (std::size_t i = 0; i <= lower.size(); ++i) {
    const bool boundary = i == lower.size() || lower[i] == '\n' ||
                          lower[i] == '\r' ||
                          delimiters.find(lower[i]) != std::string_view::npos;
    if (!boundary) continue;
    std::string piece = NormalizeKey(std::string_view(lower).substr(start, i - start));
    if (!piece.empty()) sentences.push_back(std::move(piece));
    start = i + 1;
  }
  return sentences;
}


PairSet BuildPairs(const DefinitionCorpus& corpus, const std::vector<Tag>& tags,
                   const PairOptions& options) {
  if (tags.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "tag list is empty");
  }
  if (!(options.positive > options.negative)) {
    throw Error(ErrorCode::kInvalidArgument,
                "positive score must exceed negative score");
  }
  PairSet set;
  set.metadata = {{"train_batch_size", "8"},
                  {"epochs", "4"},
                  {"split", "70/10/20"},
                  {"positive", FormatDouble(options.positive)},
                  {"negative", FormatDouble(options.negative)}};
  for (const auto& entry : corpus.entries) {
    if (std::find(tags.begin(), tags.end(), entry.tag) == tags.end()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "corpus tag '" + std::string(TagName(entry.tag)) +
                      "' is not in the pair tag list");
    }
    for (auto& sentence : Preprocess(entry.text)) {
      for (Tag tag : tags) {
        set.pairs.push_back({sentence, tag,
                             tag == entry.tag ? options.positive : options.negative});
      }
    }
  }
  return set;
}

void WritePairsTsv(const PairSet& set, std::ostream& out) {
  out << "#metadata";
  for (const auto& [k, v] : set.metadata) out << ' ' << k << '=' << v;
  out << "\nsentence\ttag\tscore\n";
  for (const auto& p : set.pairs) {
    out << EscapeField(p.sentence) << '\t' << TagName(p.tag) << '\t'
        << FormatDouble(p.score) << '\n';
  }
}

PairSet ReadPairsTsv(const std::filesystem::path& path) {
  PairSet set;
  for (const auto& line : ReadLines(path, /*skip_comments=*/false)) {
    if (line.text.rfind("#metadata", 0) == 0) {
      for (const auto& kv : SplitWhitespace(line.text.substr(9))) {
        const auto eq = kv.find('=');
        if (eq != std::string::npos) set.metadata[kv.substr(0, eq)] = kv.substr(eq + 1);
      }
      continue;
    }
    if (line.text.empty() || line.text.front() == '#') continue;
    if (line.text == "sentence\ttag\tscore") continue;
    const auto fields = Split(line.text, '\t');
    auto where = path.string() + ": line " + std::to_string(line.number) + ": ";
    if (fields.size() != 3) {
      throw Error(ErrorCode::kParse, where + "expected 3 tab-separated fields");
    }
    auto tag = ParseTag(fields[1]);
    if (!tag) throw Error(ErrorCode::kParse, where + "unknown tag '" + fields[1] + "'");
    double score = 0;
    auto [ptr, ec] = std::from_chars(fields[2].data(),
                                     fields[2].data() + fields[2].size(), score);
    if (ec != std::errc() || ptr != fields[2].data() + fields[2].size()) {
      throw Error(ErrorCode::kParse, where + "bad score '" + fields[2] + "'");
    }
    set.pairs.push_back({UnescapeField(fields[0]), *tag, score});
  }
  return set;
}

void SplitSpec::Validate() const {
  if (train < 0 || dev < 0 || test < 0) {
    throw Error(ErrorCode::kInvalidArgument, "split fractions must be >= 0");
  }
  if (std::abs(train + dev + test - 1.0) > 1e-9) {
    throw Error(ErrorCode::kInvalidArgument, "split fractions must sum to 1");
  }
}

SplitSizes ComputeSplitSizes(std::size_t n, const SplitSpec& spec) {
  spec.Validate();
  const double total = static_cast<double>(n);
  SplitSizes s;
  s.train = std::min(n, static_cast<std::size_t>(std::llround(total * spec.train)));
  s.dev = std::min(n - s.train,
                   static_cast<std::size_t>(std::llround(total * spec.dev)));
  s.test = n - s.train - s.dev;
  return s;
}

std::vector<std::size_t> ShuffledIndices(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.Shuffle(std::span<std::size_t>(order));
  return order;
}

}  // namespace finhyper
