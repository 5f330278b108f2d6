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

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "finhyper/error.h"
#include "finhyper/strings.h"
#include "finhyper/text.h"
#include "test_util.h"

namespace finhyper {
namespace {

using Strings = std::vector<std::string>;

TEST(PreprocessTest, Examples) {
  EXPECT_EQ(Preprocess(""), Strings{});
  EXPECT_EQ(Preprocess("A Bond. Issued by X\nSee note"),
            (Strings{"a bond", "issued by x", "see note"}));
  EXPECT_EQ(Preprocess("U.S. index"), (Strings{"u", "s", "index"}));
}

TEST(PreprocessTest, DelimitersAndWhitespace) {
  EXPECT_EQ(Preprocess("  What?  Yes!\r\nno;  way\t here ..."),
            (Strings{"what", "yes", "no", "way here"}));
  EXPECT_EQ(Preprocess("a.b", ""), (Strings{"a.b"}));
}

TEST(PreprocessTest, OutputIsNormalized) {
  Rng rng(3);
  const std::string alphabet = "aB .!?;\n\t\rxY";
  for (int t = 0; t < 500; ++t) {
    std::string s;
    for (std::size_t i = rng.Below(40); i > 0; --i) s += alphabet[rng.Below(alphabet.size())];
    for (const auto& piece : Preprocess(s)) {
      EXPECT_FALSE(piece.empty());
      EXPECT_EQ(piece, NormalizeKey(piece));
      EXPECT_EQ(piece.find_first_of(".!?;\n\r\t"), std::string::npos);
    }
  }
}

DefinitionCorpus OneEntry(const std::string& text, Tag tag) {
  DefinitionCorpus c;
  c.entries.push_back({text, tag, 0, "iri:x", TextProperty::kDefinition});
  c.Recount();
  return c;
}

TEST(PairsTest, TwoSentencesSeventeenTags) {
  const PairSet set = BuildPairs(OneEntry("First one. Second one.", Tag::kSwap), AllTags());
  ASSERT_EQ(set.pairs.size(), 34u);
  std::size_t positives = 0;
  for (const auto& p : set.pairs) {
    if (p.score == 0.8) {
      ++positives;
      EXPECT_EQ(p.tag, Tag::kSwap);
    } else {
      EXPECT_EQ(p.score, 0.3);
    }
  }
  EXPECT_EQ(positives, 2u);
  EXPECT_EQ(set.pairs[0].sentence, "first one");
  EXPECT_EQ(set.pairs[0].tag, Tag::kBonds);
  EXPECT_EQ(set.metadata.at("train_batch_size"), "8");
  EXPECT_EQ(set.metadata.at("epochs"), "4");
}

TEST(PairsTest, InvalidScoresAndTags) {
  const auto corpus = OneEntry("x.", Tag::kSwap);
  EXPECT_THROW(BuildPairs(corpus, AllTags(), {0.5, 0.5}), Error);
  EXPECT_THROW(BuildPairs(corpus, AllTags(), {0.3, 0.8}), Error);
  EXPECT_THROW(BuildPairs(corpus, {}), Error);
  EXPECT_THROW(BuildPairs(corpus, {Tag::kBonds}), Error);
}

TEST(PairsPropertyTest, SeventeenPairsPerSentenceOnePositive) {
  Rng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const DefinitionCorpus corpus = testing::RandomCorpus(rng, rng.Below(30));
    const PairSet set = BuildPairs(corpus, AllTags());
    std::size_t sentences = 0;
    for (const auto& e : corpus.entries) sentences += Preprocess(e.text).size();
    ASSERT_EQ(set.pairs.size(), 17 * sentences);
    std::size_t positives = 0;
    for (const auto& p : set.pairs) positives += p.score == 0.8;
    EXPECT_EQ(positives, sentences);
    // Each block of 17 consecutive pairs is one sentence: all tags, one 0.8.
    for (std::size_t b = 0; b < sentences; ++b) {
      std::set<Tag> tags;
      std::size_t pos = 0;
      for (std::size_t k = 0; k < 17; ++k) {
        const auto& p = set.pairs[b * 17 + k];
        EXPECT_EQ(p.sentence, set.pairs[b * 17].sentence);
        tags.insert(p.tag);
        pos += p.score == 0.8;
        EXPECT_TRUE(p.score == 0.8 || p.score == 0.3);
      }
      EXPECT_EQ(tags.size(), 17u);
      EXPECT_EQ(pos, 1u);
    }
  }
}

TEST(PairsTest, TsvRoundTrip) {
  Rng rng(8);
  const PairSet set = BuildPairs(testing::RandomCorpus(rng, 5), AllTags(), {0.9, 0.1});
  testing::TempDir dir("pairs");
  {
    std::ofstream out(dir / "p.tsv");
    out << "# provenance\n";
    WritePairsTsv(set, out);
  }
  const PairSet back = ReadPairsTsv(dir / "p.tsv");
  EXPECT_EQ(back.pairs, set.pairs);
  EXPECT_EQ(back.metadata, set.metadata);
}

TEST(SplitTest, SizesForTenItems) {
  const SplitSizes s = ComputeSplitSizes(10, {0.7, 0.1, 0.2, 0});
  EXPECT_EQ(s.train, 7u);
  EXPECT_EQ(s.dev, 1u);
  EXPECT_EQ(s.test, 2u);
}

TEST(SplitTest, InvalidFractions) {
  EXPECT_THROW(ComputeSplitSizes(10, {0.7, 0.2, 0.2, 0}), Error);
  EXPECT_THROW(ComputeSplitSizes(10, {-0.1, 0.9, 0.2, 0}), Error);
}

TEST(SplitPropertyTest, PartitionIsSeededAndDisjoint) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = rng.Below(60);
    std::vector<int> items(n);
    for (std::size_t i = 0; i < n; ++i) items[i] = static_cast<int>(i);
    const double a = rng.Uniform(), b = rng.Uniform() * (1 - a);
    const SplitSpec spec{a, b, 1 - a - b, rng.Next()};
    const auto parts = Split(items, spec);
    ASSERT_EQ(parts.train.size() + parts.dev.size() + parts.test.size(), n);
    std::multiset<int> all(parts.train.begin(), parts.train.end());
    all.insert(parts.dev.begin(), parts.dev.end());
    all.insert(parts.test.begin(), parts.test.end());
    EXPECT_EQ(all, std::multiset<int>(items.begin(), items.end()));
    const auto again = Split(items, spec);
    EXPECT_EQ(again.train, parts.train);
    EXPECT_EQ(again.test, parts.test);
  }
}

}  // namespace
}  // namespace finhyper
