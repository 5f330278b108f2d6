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

#ifndef FINHYPER_EVALUATION_H_
#define FINHYPER_EVALUATION_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "finhyper/classifiers.h"
#include "finhyper/ontology.h"
#include "finhyper/tags.h"

namespace finhyper {

struct LabeledTerm {
  std::string term;
  Tag gold;

  bool operator==(const LabeledTerm&) const = default;
};

using LabeledTermSet = std::vector<LabeledTerm>;

// Task TSV: `term<TAB>label`, optional `term\tlabel` header. An unknown label
// fails with the offending line number.
LabeledTermSet ReadTermsTsv(const std::filesystem::path& path);
void WriteTermsTsv(const LabeledTermSet& terms, std::ostream& out);

// Terms to classify: the first column of each row; a label column, when
// present, is ignored.
std::vector<std::string> ReadTermList(const std::filesystem::path& path);

// Predictions TSV: `term<TAB>tag_1<TAB>score_1 ... tag_K<TAB>score_K`.
void WritePredictionsTsv(const std::vector<RankedPrediction>& predictions,
                         std::size_t top_k, std::ostream& out);
std::vector<RankedPrediction> ReadPredictionsTsv(const std::filesystem::path& path);

// Fraction of samples whose top-ranked tag is the gold tag. Throws on empty
// or mismatched input.
double Accuracy(std::span<const RankedPrediction> predictions, std::span<const Tag> gold);

// Mean 1-based position of the gold tag. With `cap` = K every rank is
// clipped to K + 1; a ranking truncated to at least K entries that lacks the
// gold tag then counts as K + 1. Otherwise a missing gold tag is an error.
double MeanRank(std::span<const RankedPrediction> predictions, std::span<const Tag> gold,
                std::optional<std::size_t> cap = std::nullopt);

struct LabelStat {
  std::size_t support = 0;
  // Recall at rank 1 for this gold label; empty without support.
  std::optional<double> matched_accuracy;
};

struct EvalResult {
  double accuracy = 0;
  double mean_rank = 0;
  std::array<LabelStat, kNumTags> per_label{};
  std::size_t n = 0;
};

EvalResult Evaluate(std::span<const RankedPrediction> predictions, std::span<const Tag> gold,
                    std::optional<std::size_t> cap = std::nullopt);

struct RunProtocol {
  int runs = 5;
  double train_fraction = 0.8;
  std::uint64_t base_seed = 0;
  // Smoke-test override: train and evaluate on the full data set.
  bool train_on_all = false;
  std::optional<std::size_t> cap;
  // Runs executed concurrently; results are joined in run order.
  int threads = 1;

  void Validate() const;
};

struct ProtocolResult {
  std::vector<EvalResult> per_run;
  double accuracy_mean = 0;
  double accuracy_std = 0;   // sample standard deviation; 0 for one run
  double mean_rank_mean = 0;
  double mean_rank_std = 0;
  // Matched-label accuracy averaged over the runs in which the label had test
  // support. Empty for labels that never reached a training split.
  std::array<std::optional<double>, kNumTags> per_label_matched{};
  std::array<std::size_t, kNumTags> per_label_support{};
  std::vector<std::string> notes;
};

// For run r: seeded split (base_seed + r) at train_fraction, train the
// configured classifier on the training part, rank the held-out part.
// `features` rows align with `data`. For the cosine classifier pass
// `label_vectors`.
ProtocolResult RunExperiment(const LabeledTermSet& data, const Matrix& features,
                             const ClassifierConfig& classifier, FeatureMode mode,
                             const RunProtocol& protocol,
                             const LabelVectors* label_vectors = nullptr);

struct DistributionReport {
  std::array<double, kNumTags> train_percent{};
  std::array<double, kNumTags> corpus_percent{};
  std::size_t train_total = 0;
  std::size_t corpus_total = 0;

  bool operator==(const DistributionReport&) const = default;
};

// Label percentages of the training set and of the mined corpus.
DistributionReport Distributions(const LabeledTermSet& train, const DefinitionCorpus& corpus);

struct RunSummary {
  double accuracy = 0;
  double mean_rank = 0;
  std::size_t n = 0;

  bool operator==(const RunSummary&) const = default;
};

struct LabelReport {
  std::size_t support = 0;
  std::optional<double> matched_accuracy;
  std::optional<double> train_percent;
  std::optional<double> corpus_percent;

  bool operator==(const LabelReport&) const = default;
};

// The JSON/text report written by the `evaluate` and `report` commands.
struct EvalReport {
  std::string provenance;
  std::map<std::string, std::string> settings;
  std::optional<double> accuracy;
  std::optional<double> mean_rank;
  std::optional<double> accuracy_std;
  std::optional<double> mean_rank_std;
  std::size_t n = 0;
  std::vector<RunSummary> per_run;
  std::map<std::string, LabelReport> per_label;  // keyed by tag name
  std::optional<DistributionReport> distributions;
  std::vector<std::string> notes;

  bool operator==(const EvalReport&) const = default;
};

EvalReport MakeReport(const EvalResult& result);
EvalReport MakeReport(const ProtocolResult& result);
void AttachDistributions(EvalReport& report, const DistributionReport& distributions);

std::string ReportToJson(const EvalReport& report);
EvalReport ReportFromJson(std::string_view text);

// Fixed-width table: overall metrics, per-run rows, then one row per label.
std::string ReportSummary(const EvalReport& report);

}  // namespace finhyper

#endif  // FINHYPER_EVALUATION_H_
