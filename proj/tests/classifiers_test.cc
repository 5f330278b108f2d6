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

#include <cmath>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "finhyper/classifiers.h"
#include "finhyper/error.h"
#include "finhyper/rng.h"
#include "test_util.h"

namespace finhyper {
namespace {

LabelVectors ZeroLabels(std::size_t dim) {
  LabelVectors l;
  for (auto& v : l) v.assign(dim, 0.0);
  return l;
}

TEST(RankTest, StableDescendingWithCanonicalTies) {
  TagScores s{};
  s[TagIndex(Tag::kSwap)] = 0.5;
  s[TagIndex(Tag::kBonds)] = 0.5;
  s[TagIndex(Tag::kFunds)] = 0.9;
  const RankedPrediction p = RankScores("t", s);
  ASSERT_EQ(p.ranking.size(), kNumTags);
  EXPECT_EQ(p.ranking[0].first, Tag::kFunds);
  EXPECT_EQ(p.ranking[1].first, Tag::kBonds);
  EXPECT_EQ(p.ranking[2].first, Tag::kSwap);
  EXPECT_EQ(p.ranking[3].first, Tag::kForward);
  EXPECT_EQ(p.RankOf(Tag::kSwap), 3u);
}

TEST(CosineRankTest, IdenticalVectorScoresOne) {
  LabelVectors labels = ZeroLabels(3);
  labels[TagIndex(Tag::kOption)] = {1, 2, 3};
  const auto p = CosineRank(std::vector<double>{1, 2, 3}, labels);
  EXPECT_EQ(p.top(), Tag::kOption);
  EXPECT_NEAR(p.ranking[0].second, 1.0, 1e-15);
}

TEST(CosineRankTest, ZeroQueryGivesCanonicalOrder) {
  Rng rng(1);
  LabelVectors labels;
  for (auto& v : labels) v = {rng.Gaussian(), rng.Gaussian()};
  const auto p = CosineRank(std::vector<double>{0, 0}, labels);
  for (std::size_t i = 0; i < kNumTags; ++i) {
    EXPECT_EQ(p.ranking[i].first, TagFromIndex(i));
    EXPECT_EQ(p.ranking[i].second, 0.0);
  }
}

TEST(CosineRankTest, HandComputedOrder) {
  // Unit query along x; label vectors at the given cosines.
  auto at = [](double c) { return std::vector<double>{c, std::sqrt(1 - c * c)}; };
  LabelVectors labels = ZeroLabels(2);
  labels[TagIndex(Tag::kBonds)] = at(-0.2);
  labels[TagIndex(Tag::kSwap)] = at(0.9);
  labels[TagIndex(Tag::kFuture)] = at(0.1);
  const auto p = CosineRank(std::vector<double>{3, 0}, labels);
  EXPECT_EQ(p.ranking[0].first, Tag::kSwap);
  EXPECT_NEAR(p.ranking[0].second, 0.9, 1e-12);
  EXPECT_EQ(p.ranking[1].first, Tag::kFuture);
  EXPECT_NEAR(p.ranking[1].second, 0.1, 1e-12);
  // The 14 zero-vector labels score 0 and sit between 0.1 and -0.2.
  EXPECT_EQ(p.ranking[16].first, Tag::kBonds);
  EXPECT_NEAR(p.ranking[16].second, -0.2, 1e-12);
}

TEST(LogRegTest, ZeroWeightsGiveUniform) {
  LogRegModel m;
  m.weights = Matrix(kNumTags, 5);
  m.bias.assign(kNumTags, 0.0);
  const TagScores p = PredictProba(m, std::vector<double>{1, -2, 3, 0.5, 9});
  for (double x : p) EXPECT_NEAR(x, 1.0 / 17, 1e-15);
}

// Two classes separated along the first axis with a gap of at least 1.
void SeparableBlobs(Rng& rng, std::size_t n, std::size_t dim, Matrix& x, std::vector<Tag>& y) {
  x = Matrix(n, dim);
  y.clear();
  for (std::size_t i = 0; i < n; ++i) {
    const bool positive = i % 2 == 0;
    for (std::size_t d = 0; d < dim; ++d) x(i, d) = rng.Gaussian();
    const double offset = 0.5 + std::abs(rng.Gaussian());
    x(i, 0) = positive ? offset : -offset;
    y.push_back(positive ? Tag::kBonds : Tag::kSwap);
  }
}

double TrainAccuracy(const LogRegModel& m, const Matrix& x, const std::vector<Tag>& y) {
  std::size_t hit = 0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    hit += RankScores("", PredictProba(m, x.row(i))).top() == y[i];
  }
  return static_cast<double>(hit) / x.rows();
}

TEST(LogRegTest, SeparableBlobs) {
  Rng rng(2);
  Matrix x;
  std::vector<Tag> y;
  SeparableBlobs(rng, 200, 5, x, y);
  const LogRegModel m = TrainLogReg(x, y, {});
  EXPECT_GE(TrainAccuracy(m, x, y), 0.99);
  EXPECT_GE(m.train_accuracy, 0.99);
}

TEST(LogRegTest, DuplicatedDataSameDecisionFunction) {
  Rng rng(3);
  Matrix x;
  std::vector<Tag> y;
  SeparableBlobs(rng, 60, 4, x, y);
  Matrix xx = x;
  std::vector<Tag> yy = y;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    xx.AppendRow(x.row(i));
    yy.push_back(y[i]);
  }
  LogRegParams p;
  p.batch_size = 0;
  const LogRegModel a = TrainLogReg(x, y, p);
  const LogRegModel b = TrainLogReg(xx, yy, p);
  for (std::size_t i = 0; i < a.weights.data().size(); ++i) {
    EXPECT_NEAR(a.weights.data()[i], b.weights.data()[i], 1e-9);
  }
  for (std::size_t c = 0; c < kNumTags; ++c) EXPECT_NEAR(a.bias[c], b.bias[c], 1e-9);
}

TEST(LogRegTest, FixedSeedIsBitwiseReproducible) {
  Rng rng(4);
  Matrix x;
  std::vector<Tag> y;
  SeparableBlobs(rng, 100, 6, x, y);
  LogRegParams p;
  p.batch_size = 16;
  p.epochs = 30;
  const LogRegModel a = TrainLogReg(x, y, p);
  const LogRegModel b = TrainLogReg(x, y, p);
  p.threads = 4;
  const LogRegModel c = TrainLogReg(x, y, p);
  EXPECT_EQ(a.weights, b.weights);
  EXPECT_EQ(a.bias, b.bias);
  EXPECT_EQ(a.weights, c.weights);
}

TEST(LogRegTest, Errors) {
  Matrix x(4, 2, 1.0);
  const std::vector<Tag> same(4, Tag::kBonds);
  EXPECT_THROW(TrainLogReg(x, same, {}), Error);
  const std::vector<Tag> mixed{Tag::kBonds, Tag::kSwap, Tag::kBonds, Tag::kSwap};
  LogRegParams p;
  p.learning_rate = 1e308;
  x(0, 0) = 1e308;
  try {
    TrainLogReg(x, mixed, p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNumerical);
    EXPECT_NE(std::string(e.what()).find("epoch"), std::string::npos);
  }
}

TEST(ForestTest, TwoTreesSplitVoteTieGoesCanonical) {
  ForestModel m;
  m.feature_dim = 1;
  for (Tag t : {Tag::kSwap, Tag::kBonds}) {
    DecisionTree tree;
    TreeNode leaf;
    leaf.histogram.assign(kNumTags, 0.0);
    leaf.histogram[TagIndex(t)] = 3;
    tree.nodes.push_back(leaf);
    m.trees.push_back(tree);
  }
  const TagScores p = PredictProba(m, std::vector<double>{0.0});
  EXPECT_EQ(p[TagIndex(Tag::kSwap)], 0.5);
  EXPECT_EQ(p[TagIndex(Tag::kBonds)], 0.5);
  EXPECT_EQ(RankScores("", p).top(), Tag::kBonds);
}

TEST(ForestTest, PerfectOneFeatureSplit) {
  Matrix x;
  std::vector<Tag> y;
  for (int i = 0; i < 50; ++i) {
    x.AppendRow(std::vector<double>{static_cast<double>(i)});
    y.push_back(i < 25 ? Tag::kOption : Tag::kFuture);
  }
  ForestParams p;
  p.num_trees = 20;
  const ForestModel m = TrainForest(x, y, p);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    EXPECT_EQ(RankScores("", PredictProba(m, x.row(i))).top(), y[i]) << i;
  }
}

TEST(ForestTest, NoiseOobNearChance) {
  Rng rng(5);
  const std::size_t n = 1000;
  Matrix x(n, 768);
  for (double& v : x.data()) v = rng.Gaussian();
  std::vector<Tag> y;
  for (std::size_t i = 0; i < n; ++i) y.push_back(TagFromIndex(i % kNumTags));
  ForestParams p;
  p.num_trees = 10;
  const ForestModel m = TrainForest(x, y, p);
  ASSERT_TRUE(m.oob_accuracy.has_value());
  const double chance = 1.0 / 17;
  const double sigma = std::sqrt(chance * (1 - chance) / n);
  EXPECT_NEAR(*m.oob_accuracy, chance, 3 * sigma);
}

TEST(ForestTest, SameSeedSameTreesAnyThreadCount) {
  Rng rng(6);
  Matrix x(120, 10);
  for (double& v : x.data()) v = rng.Gaussian();
  std::vector<Tag> y;
  for (std::size_t i = 0; i < 120; ++i) y.push_back(TagFromIndex(i % 3 + (x(i, 0) > 0 ? 3 : 0)));
  ForestParams p;
  p.num_trees = 15;
  const ForestModel a = TrainForest(x, y, p);
  const ForestModel b = TrainForest(x, y, p);
  p.threads = 4;
  const ForestModel c = TrainForest(x, y, p);
  EXPECT_EQ(a.trees, b.trees);
  EXPECT_EQ(a.trees, c.trees);
  p.seed = 99;
  EXPECT_NE(TrainForest(x, y, p).trees, a.trees);
}

TEST(ClassifierTest, JsonRoundTripPreservesPredictions) {
  Rng rng(7);
  Matrix x;
  std::vector<Tag> y;
  SeparableBlobs(rng, 40, 768, x, y);
  for (ClassifierKind kind : {ClassifierKind::kLogReg, ClassifierKind::kForest,
                              ClassifierKind::kCosine}) {
    ClassifierConfig config;
    config.kind = kind;
    config.logreg.epochs = 5;
    config.forest.num_trees = 5;
    LabelVectors labels;
    for (auto& v : labels) {
      v.resize(768);
      for (double& e : v) e = rng.Gaussian();
    }
    const Classifier c = TrainClassifier(x, y, config, FeatureMode::kFused, {true, false},
                                         kind == ClassifierKind::kCosine ? &labels : nullptr);
    testing::TempDir dir("clf");
    SaveClassifier(c, dir / "m.json", "# provenance");
    const Classifier back = LoadClassifier(dir / "m.json");
    EXPECT_EQ(back.mode, FeatureMode::kFused);
    EXPECT_TRUE(back.feature_options.zero_fallback);
    EXPECT_EQ(back.config.kind, kind);
    for (std::size_t i = 0; i < x.rows(); ++i) {
      EXPECT_EQ(back.Scores(x.row(i)), c.Scores(x.row(i)));
    }
    EXPECT_EQ(ClassifierToJson(back, "# provenance"), ClassifierToJson(c, "# provenance"));
  }
}

TEST(ClassifierTest, WrongTagListIsRejected) {
  Rng rng(8);
  Matrix x;
  std::vector<Tag> y;
  SeparableBlobs(rng, 20, 768, x, y);
  ClassifierConfig config;
  config.logreg.epochs = 1;
  std::string json = ClassifierToJson(TrainClassifier(x, y, config, FeatureMode::kFused));
  const auto pos = json.find("\"Regulatory Agency\"");
  ASSERT_NE(pos, std::string::npos);
  json.replace(pos, 19, "\"Regulatory Agencies\"");
  EXPECT_THROW(ClassifierFromJson(json), Error);
}

TEST(ClassifierTest, FeatureDimensionMismatch) {
  Rng rng(9);
  Matrix x;
  std::vector<Tag> y;
  SeparableBlobs(rng, 20, 768, x, y);
  ClassifierConfig config;
  config.logreg.epochs = 1;
  const Classifier c = TrainClassifier(x, y, config, FeatureMode::kFused);
  EXPECT_THROW(c.Scores(std::vector<double>(300)), Error);
}

}  // namespace
}  // namespace finhyper
