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
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "finhyper/error.h"
#include "finhyper/evaluation.h"
#include "finhyper/rng.h"
#include "oracles.h"
#include "test_util.h"

namespace finhyper {
namespace {

using testing::TempDir;
using testing::WriteFile;

// A prediction whose ranking puts `order` first, in that order, followed by
// the remaining tags in canonical order.
RankedPrediction Ranked(std::vector<Tag> order) {
  TagScores s{};
  double v = 100;
  for (Tag t : order) s[TagIndex(t)] = v--;
  return RankScores("t", s);
}

TEST(MetricsTest, MeanRankAndAccuracyExamples) {
  const std::vector<RankedPrediction> preds = {Ranked({Tag::kSwap, Tag::kBonds}),
                                               Ranked({Tag::kSwap, Tag::kBonds})};
  const std::vector<Tag> gold = {Tag::kSwap, Tag::kBonds};
  EXPECT_DOUBLE_EQ(MeanRank(preds, gold), 1.5);
  EXPECT_DOUBLE_EQ(Accuracy(preds, gold), 0.5);

  std::vector<RankedPrediction> four(4, Ranked({Tag::kOption}));
  const std::vector<Tag> gold4 = {Tag::kOption, Tag::kSwap, Tag::kBonds, Tag::kFuture};
  EXPECT_DOUBLE_EQ(Accuracy(four, gold4), 0.25);
}

TEST(MetricsTest, EmptyOrMismatchedInputIsError) {
  EXPECT_THROW(Accuracy({}, {}), Error);
  const std::vector<RankedPrediction> one = {Ranked({Tag::kSwap})};
  EXPECT_THROW(MeanRank(one, std::vector<Tag>{Tag::kSwap, Tag::kBonds}), Error);
}

TEST(MetricsTest, CapClipsRanks) {
  RankedPrediction truncated = Ranked({Tag::kSwap, Tag::kBonds, Tag::kOption});
  truncated.ranking.resize(3);
  const std::vector<RankedPrediction> preds = {truncated};
  EXPECT_DOUBLE_EQ(MeanRank(preds, std::vector<Tag>{Tag::kFunds}, 3), 4.0);
  EXPECT_DOUBLE_EQ(MeanRank(preds, std::vector<Tag>{Tag::kOption}, 2), 3.0);
  EXPECT_THROW(MeanRank(preds, std::vector<Tag>{Tag::kFunds}), Error);
  EXPECT_THROW(MeanRank(preds, std::vector<Tag>{Tag::kFunds}, 5), Error);
}

TEST(MetricsPropertyTest, AgreesWithBruteForce) {
  Rng rng(13);
  for (int trial = 0; trial < 1000; ++trial) {
    // Up to four labels get distinct-or-tied scores; the rest score zero.
    const std::size_t labels = 1 + rng.Below(4);
    std::vector<Tag> active;
    for (std::size_t i = 0; i < labels; ++i) active.push_back(TagFromIndex(rng.Below(kNumTags)));
    const std::size_t n = 1 + rng.Below(10);
    std::vector<RankedPrediction> preds;
    std::vector<TagScores> raw;
    std::vector<Tag> gold;
    for (std::size_t i = 0; i < n; ++i) {
      TagScores s{};
      for (Tag t : active) s[TagIndex(t)] = static_cast<double>(rng.Below(3));
      raw.push_back(s);
      preds.push_back(RankScores("t", s));
      gold.push_back(active[rng.Below(active.size())]);
    }
    double hits = 0, rank_sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t rank = testing::BruteForceRank(raw[i], gold[i]);
      rank_sum += static_cast<double>(rank);
      hits += rank == 1;
    }
    const double acc = Accuracy(preds, gold);
    const double mr = MeanRank(preds, gold);
    EXPECT_DOUBLE_EQ(acc, hits / n);
    EXPECT_DOUBLE_EQ(mr, rank_sum / n);
    EXPECT_GE(mr, 1.0);
    EXPECT_LE(mr, static_cast<double>(kNumTags));
    if (acc == 1.0) EXPECT_EQ(mr, 1.0);
  }
}

TEST(EvaluateTest, PerLabelMatchedAccuracy) {
  const std::vector<RankedPrediction> preds = {Ranked({Tag::kSwap}), Ranked({Tag::kBonds}),
                                               Ranked({Tag::kSwap})};
  const std::vector<Tag> gold = {Tag::kSwap, Tag::kSwap, Tag::kOption};
  const EvalResult r = Evaluate(preds, gold);
  EXPECT_EQ(r.per_label[TagIndex(Tag::kSwap)].support, 2u);
  EXPECT_DOUBLE_EQ(*r.per_label[TagIndex(Tag::kSwap)].matched_accuracy, 0.5);
  EXPECT_DOUBLE_EQ(*r.per_label[TagIndex(Tag::kOption)].matched_accuracy, 0.0);
  EXPECT_FALSE(r.per_label[TagIndex(Tag::kBonds)].matched_accuracy.has_value());
}

// Linearly separable three-tag data set: one-hot feature per tag plus noise.
void SeparableSet(Rng& rng, std::size_t n, LabeledTermSet& data, Matrix& x) {
  const Tag tags[] = {Tag::kBonds, Tag::kSwap, Tag::kOption};
  x = Matrix(n, 8);
  data.clear();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = i % 3;
    data.push_back({"term " + std::to_string(i), tags[k]});
    for (std::size_t d = 0; d < 8; ++d) x(i, d) = 0.1 * rng.Gaussian();
    x(i, k) += 3.0;
  }
}

TEST(RunExperimentTest, TrainOnAllSeparableIsPerfect) {
  Rng rng(14);
  LabeledTermSet data;
  Matrix x;
  SeparableSet(rng, 30, data, x);
  RunProtocol p;
  p.runs = 1;
  p.train_on_all = true;
  const ProtocolResult r = RunExperiment(data, x, {}, FeatureMode::kFused, p);
  ASSERT_EQ(r.per_run.size(), 1u);
  EXPECT_EQ(r.accuracy_mean, 1.0);
  EXPECT_EQ(r.mean_rank_mean, 1.0);
  EXPECT_EQ(r.accuracy_std, 0.0);
}

TEST(RunExperimentTest, SameSeedSameResults) {
  Rng rng(15);
  LabeledTermSet data;
  Matrix x;
  SeparableSet(rng, 45, data, x);
  for (std::size_t i = 0; i < x.rows(); i += 4) x(i, 0) += 3.5;  // some confusions
  RunProtocol p;
  p.runs = 4;
  p.base_seed = 7;
  ClassifierConfig c;
  c.logreg.epochs = 20;
  const ProtocolResult a = RunExperiment(data, x, c, FeatureMode::kFused, p);
  p.threads = 3;
  const ProtocolResult b = RunExperiment(data, x, c, FeatureMode::kFused, p);
  ASSERT_EQ(a.per_run.size(), 4u);
  for (std::size_t r = 0; r < 4; ++r) {
    EXPECT_EQ(a.per_run[r].accuracy, b.per_run[r].accuracy);
    EXPECT_EQ(a.per_run[r].mean_rank, b.per_run[r].mean_rank);
    EXPECT_EQ(a.per_run[r].n, 9u);
  }
  EXPECT_EQ(a.accuracy_mean, b.accuracy_mean);
  EXPECT_EQ(a.accuracy_std, b.accuracy_std);
  // Sample standard deviation over runs.
  double mean = 0;
  for (const auto& run : a.per_run) mean += run.accuracy / 4;
  double var = 0;
  for (const auto& run : a.per_run) var += (run.accuracy - mean) * (run.accuracy - mean) / 3;
  EXPECT_NEAR(a.accuracy_std, std::sqrt(var), 1e-12);
}

TEST(RunExperimentTest, TooSmallIsError) {
  Rng rng(16);
  LabeledTermSet data;
  Matrix x;
  SeparableSet(rng, 9, data, x);
  EXPECT_THROW(RunExperiment(data, x, {}, FeatureMode::kFused, {}), Error);
}

TEST(DistributionTest, AllOneLabel) {
  LabeledTermSet train(5, LabeledTerm{"x", Tag::kEquityIndex});
  DefinitionCorpus corpus;
  const auto d = Distributions(train, corpus);
  EXPECT_EQ(d.train_percent[TagIndex(Tag::kEquityIndex)], 100.0);
  EXPECT_EQ(d.corpus_total, 0u);
}

TEST(DistributionPropertyTest, PercentagesSumToHundred) {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    LabeledTermSet train;
    for (std::size_t i = 1 + rng.Below(50); i > 0; --i) {
      train.push_back({"t", TagFromIndex(rng.Below(kNumTags))});
    }
    const DefinitionCorpus corpus = testing::RandomCorpus(rng, 1 + rng.Below(40));
    const auto d = Distributions(train, corpus);
    EXPECT_NEAR(std::accumulate(d.train_percent.begin(), d.train_percent.end(), 0.0), 100.0,
                0.01);
    EXPECT_NEAR(std::accumulate(d.corpus_percent.begin(), d.corpus_percent.end(), 0.0), 100.0,
                0.01);
  }
}

TEST(TermsTsvTest, HeaderOptionalUnknownLabelNamesLine) {
  TempDir dir("terms");
  WriteFile(dir / "a.tsv", "term\tlabel\ninterest rate swap\tSwap\nbond\tBonds\n");
  WriteFile(dir / "b.tsv", "interest rate swap\tSwap\n");
  WriteFile(dir / "c.tsv", "term\tlabel\nx\tSwap\ny\tCommodity\n");
  EXPECT_EQ(ReadTermsTsv(dir / "a.tsv").size(), 2u);
  EXPECT_EQ(ReadTermsTsv(dir / "b.tsv").front().gold, Tag::kSwap);
  try {
    ReadTermsTsv(dir / "c.tsv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
  EXPECT_EQ(ReadTermList(dir / "a.tsv"),
            (std::vector<std::string>{"interest rate swap", "bond"}));
}

TEST(TermsTsvTest, RoundTrip) {
  const LabeledTermSet terms = {{"a\tb", Tag::kCreditEvents}, {"c", Tag::kMMIs}};
  TempDir dir("terms");
  {
    std::ofstream out(dir / "t.tsv");
    WriteTermsTsv(terms, out);
  }
  EXPECT_EQ(ReadTermsTsv(dir / "t.tsv"), terms);
}

TEST(PredictionsTsvTest, RoundTripWithTopK) {
  Rng rng(18);
  std::vector<RankedPrediction> preds;
  for (int i = 0; i < 5; ++i) {
    TagScores s;
    for (double& v : s) v = rng.Gaussian();
    preds.push_back(RankScores("term " + std::to_string(i), s));
  }
  TempDir dir("preds");
  for (std::size_t k : {std::size_t{17}, std::size_t{3}}) {
    {
      std::ofstream out(dir / "p.tsv");
      out << "# provenance\n";
      WritePredictionsTsv(preds, k, out);
    }
    const auto back = ReadPredictionsTsv(dir / "p.tsv");
    ASSERT_EQ(back.size(), preds.size());
    for (std::size_t i = 0; i < preds.size(); ++i) {
      EXPECT_EQ(back[i].term, preds[i].term);
      ASSERT_EQ(back[i].ranking.size(), k);
      for (std::size_t j = 0; j < k; ++j) EXPECT_EQ(back[i].ranking[j], preds[i].ranking[j]);
    }
  }
}

TEST(ReportTest, JsonRoundTripKeepsEveryField) {
  Rng rng(19);
  LabeledTermSet data;
  Matrix x;
  SeparableSet(rng, 30, data, x);
  RunProtocol p;
  p.runs = 2;
  EvalReport report = MakeReport(RunExperiment(data, x, {}, FeatureMode::kFused, p));
  AttachDistributions(report, Distributions(data, testing::RandomCorpus(rng, 10)));
  report.provenance = "# finhyper 0.1.0 config=0123456789abcdef seed=1";
  report.settings = {{"mode", "fused"}, {"runs", "2"}};
  report.notes = {"a note"};
  const std::string json = ReportToJson(report);
  EXPECT_EQ(ReportFromJson(json), report);
  EXPECT_EQ(ReportToJson(ReportFromJson(json)), json);
  const std::string text = ReportSummary(report);
  EXPECT_NE(text.find("Regulatory Agency"), std::string::npos);
}

TEST(ReportTest, RejectsForeignJson) {
  EXPECT_THROW(ReportFromJson(R"({"format":"other","version":1})"), Error);
  EXPECT_THROW(ReportFromJson("not json"), Error);
}

}  // namespace
}  // namespace finhyper
