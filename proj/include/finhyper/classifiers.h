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

#ifndef FINHYPER_CLASSIFIERS_H_
#define FINHYPER_CLASSIFIERS_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "finhyper/kernels.h"
#include "finhyper/representation.h"
#include "finhyper/tags.h"

namespace finhyper {

using TagScores = std::array<double, kNumTags>;

// All 17 tags ordered by descending score; equal scores keep canonical order.
struct RankedPrediction {
  std::string term;
  std::vector<std::pair<Tag, double>> ranking;

  Tag top() const { return ranking.front().first; }
  // 1-based position of `tag`, or 0 when absent.
  std::size_t RankOf(Tag tag) const;
};

RankedPrediction RankScores(std::string term, const TagScores& scores);

// ---- cosine ranking ----

// One label vector per tag, indexed by canonical index.
using LabelVectors = std::array<std::vector<double>, kNumTags>;

// Scores every tag by cosine similarity; zero-norm vectors score 0.
RankedPrediction CosineRank(std::span<const double> term_vec,
                            const LabelVectors& labels, std::string term = {});

// Label vectors from the tag surface strings, passed through the same feature
// function as terms (for sentence_only this is exactly the sentence vector of
// the tag name).
LabelVectors LabelVectorsFromNames(FeatureMode mode, const SentenceVectorStore* sents,
                                   const VectorTable* words,
                                   const TermFeatureOptions& options = {});

// Label vectors from one definition text per tag (e.g. the seed concept's
// definition). Every tag must be present in `definitions`.
LabelVectors LabelVectorsFromTexts(const std::array<std::string, kNumTags>& texts,
                                   FeatureMode mode, const SentenceVectorStore* sents,
                                   const VectorTable* words,
                                   const TermFeatureOptions& options = {});

// ---- logistic regression ----

struct LogRegParams {
  double learning_rate = 0.1;
  int epochs = 200;
  std::size_t batch_size = 32;  // 0 means full batch
  double l2 = 1e-4;
  std::uint64_t seed = 1;
  int threads = 1;
};

struct LogRegModel {
  Matrix weights;             // kNumTags x feature_dim
  std::vector<double> bias;   // kNumTags
  LogRegParams params;
  double final_loss = 0;
  double train_accuracy = 0;

  std::size_t feature_dim() const { return weights.cols(); }
};

// Gradient descent on the mean softmax cross-entropy plus (l2/2)||W||^2 with
// seeded mini-batch shuffling; parameters start at zero. Throws
// Error(kInvalidArgument) for fewer than two distinct labels and
// Error(kNumerical) on a non-finite loss (naming the epoch).
LogRegModel TrainLogReg(const Matrix& features, std::span<const Tag> labels,
                        const LogRegParams& params);

// Softmax probabilities.
TagScores PredictProba(const LogRegModel& model, std::span<const double> feature);

// ---- random forest ----

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0;
  int left = -1;
  int right = -1;
  std::vector<double> histogram;  // leaves only: class counts, kNumTags long

  bool operator==(const TreeNode&) const = default;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  const TreeNode& Leaf(std::span<const double> feature) const;
  bool operator==(const DecisionTree&) const = default;
};

struct ForestParams {
  int num_trees = 100;
  std::size_t min_samples_leaf = 1;
  // 0 means ceil(sqrt(feature_dim)).
  std::size_t max_features = 0;
  bool bootstrap = true;
  std::uint64_t seed = 1;
  int threads = 1;
};

struct ForestModel {
  std::vector<DecisionTree> trees;
  ForestParams params;
  std::size_t feature_dim = 0;
  std::optional<double> oob_accuracy;
};

// Bagged CART trees split on Gini impurity. Each tree is grown from its own
// seed derived from params.seed, so the result does not depend on the number
// of threads.
ForestModel TrainForest(const Matrix& features, std::span<const Tag> labels,
                        const ForestParams& params);

// Mean of the per-tree normalized leaf histograms.
TagScores PredictProba(const ForestModel& model, std::span<const double> feature);

// ---- classifier container ----

enum class ClassifierKind { kLogReg, kForest, kCosine };

std::string_view ClassifierKindName(ClassifierKind kind);
std::optional<ClassifierKind> ParseClassifierKind(std::string_view name);

struct ClassifierConfig {
  ClassifierKind kind = ClassifierKind::kLogReg;
  LogRegParams logreg;
  ForestParams forest;
  // L2-normalize features (and label vectors) before classification.
  bool normalize = false;
};

// A trained classifier plus everything needed to rebuild its features.
struct Classifier {
  ClassifierConfig config;
  FeatureMode mode = FeatureMode::kFused;
  TermFeatureOptions feature_options;
  std::size_t feature_dim = kPhraseDim;
  std::variant<LogRegModel, ForestModel, LabelVectors> model;

  TagScores Scores(std::span<const double> feature) const;
  RankedPrediction Predict(std::string term, std::span<const double> feature) const;
};

// Trains the configured classifier. For kCosine, `labels_for_cosine` must be
// provided and the training data is ignored.
Classifier TrainClassifier(const Matrix& features, std::span<const Tag> labels,
                           const ClassifierConfig& config, FeatureMode mode,
                           const TermFeatureOptions& feature_options = {},
                           const LabelVectors* labels_for_cosine = nullptr);

void L2NormalizeInPlace(std::span<double> v);

// Versioned JSON container. Loading verifies the tag list equals the
// canonical 17.
std::string ClassifierToJson(const Classifier& classifier, const std::string& provenance = {});
Classifier ClassifierFromJson(const std::string& text);
void SaveClassifier(const Classifier& classifier, const std::filesystem::path& path,
                    const std::string& provenance = {});
Classifier LoadClassifier(const std::filesystem::path& path);

}  // namespace finhyper

#endif  // FINHYPER_CLASSIFIERS_H_
