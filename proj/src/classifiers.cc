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

#include "finhyper/classifiers.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "finhyper/error.h"
#include "finhyper/io.h"
#include "finhyper/rng.h"
#include "json.hpp"

namespace finhyper {

std::size_t RankedPrediction::RankOf(Tag tag) const {
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    if (ranking[i].first == tag) return i + 1;
  }
  return 0;
}

RankedPrediction RankScores(std::string term, const TagScores& scores) {
  RankedPrediction p;
  p.term = std::move(term);
  p.ranking.reserve(kNumTags);
  for (std::size_t i = 0; i < kNumTags; ++i) p.ranking.emplace_back(TagFromIndex(i), scores[i]);
  std::stable_sort(p.ranking.begin(), p.ranking.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return p;
}

RankedPrediction CosineRank(std::span<const double> term_vec, const LabelVectors& labels,
                            std::string term) {
  TagScores scores{};
  for (std::size_t i = 0; i < kNumTags; ++i) {
    if (labels[i].size() != term_vec.size()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "label vector for '" + std::string(kTagNames[i]) + "' has dimension " +
                      std::to_string(labels[i].size()) + ", term vector has " +
                      std::to_string(term_vec.size()));
    }
    scores[i] = Cosine(term_vec, labels[i]);
  }
  return RankScores(std::move(term), scores);
}

LabelVectors LabelVectorsFromNames(FeatureMode mode, const SentenceVectorStore* sents,
                                   const VectorTable* words,
                                   const TermFeatureOptions& options) {
  std::array<std::string, kNumTags> texts;
  for (std::size_t i = 0; i < kNumTags; ++i) texts[i] = std::string(kTagNames[i]);
  return LabelVectorsFromTexts(texts, mode, sents, words, options);
}

LabelVectors LabelVectorsFromTexts(const std::array<std::string, kNumTags>& texts,
                                   FeatureMode mode, const SentenceVectorStore* sents,
                                   const VectorTable* words,
                                   const TermFeatureOptions& options) {
  LabelVectors out;
  for (std::size_t i = 0; i < kNumTags; ++i) {
    out[i] = TermEmbedding(texts[i], mode, sents, words, options).vector;
  }
  return out;
}

// ---- logistic regression ----

namespace {

std::vector<int> LabelIndices(std::span<const Tag> labels) {
  std::vector<int> out;
  out.reserve(labels.size());
  for (Tag t : labels) out.push_back(static_cast<int>(TagIndex(t)));
  return out;
}

void CheckTrainingInput(const Matrix& features, std::span<const Tag> labels) {
  if (features.rows() != labels.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "features and labels differ in length (" +
                    std::to_string(features.rows()) + " vs " +
                    std::to_string(labels.size()) + ")");
  }
  std::set<Tag> distinct(labels.begin(), labels.end());
  if (distinct.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "training needs at least two distinct labels");
  }
}

std::size_t ArgMax(const TagScores& s) {
  return static_cast<std::size_t>(std::max_element(s.begin(), s.end()) - s.begin());
}

}  // namespace

LogRegModel TrainLogReg(const Matrix& features, std::span<const Tag> labels,
                        const LogRegParams& params) {
  CheckTrainingInput(features, labels);
  if (!(params.learning_rate > 0) || params.epochs < 1 || params.l2 < 0) {
    throw Error(ErrorCode::kInvalidArgument, "invalid logistic regression parameters");
  }
  const std::vector<int> y = LabelIndices(labels);
  const std::size_t n = features.rows();
  const std::size_t dim = features.cols();
  LogRegModel model;
  model.params = params;
  model.weights = Matrix(kNumTags, dim);
  model.bias.assign(kNumTags, 0.0);

  const std::size_t batch =
      params.batch_size == 0 ? n : std::min(params.batch_size, n);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(params.seed);
  Matrix grad_w;
  std::vector<double> grad_b(kNumTags);
  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    if (batch < n) rng.Shuffle(std::span<std::size_t>(order));
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t end = std::min(n, start + batch);
      const std::span<const std::size_t> rows(order.data() + start, end - start);
      const double loss = kernels::SoftmaxCrossEntropy(
          model.weights, model.bias, features, y, rows, params.l2, grad_w, grad_b,
          params.threads);
      if (!std::isfinite(loss)) {
        throw Error(ErrorCode::kNumerical,
                    "non-finite training loss in epoch " + std::to_string(epoch));
      }
      auto w = model.weights.data();
      const auto g = grad_w.data();
      for (std::size_t i = 0; i < w.size(); ++i) w[i] -= params.learning_rate * g[i];
      for (std::size_t c = 0; c < kNumTags; ++c) {
        model.bias[c] -= params.learning_rate * grad_b[c];
      }
    }
  }
  order.resize(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  model.final_loss = kernels::SoftmaxCrossEntropy(model.weights, model.bias, features, y,
                                                  order, params.l2, grad_w, grad_b,
                                                  params.threads);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (ArgMax(PredictProba(model, features.row(i))) == static_cast<std::size_t>(y[i])) {
      ++correct;
    }
  }
  model.train_accuracy = static_cast<double>(correct) / static_cast<double>(n);
  return model;
}

TagScores PredictProba(const LogRegModel& model, std::span<const double> feature) {
  if (feature.size() != model.feature_dim()) {
    throw Error(ErrorCode::kInvalidArgument,
                "feature has dimension " + std::to_string(feature.size()) +
                    ", model expects " + std::to_string(model.feature_dim()));
  }
  TagScores s{};
  double m = -INFINITY;
  for (std::size_t c = 0; c < kNumTags; ++c) {
    const auto w = model.weights.row(c);
    double v = model.bias[c];
    for (std::size_t d = 0; d < feature.size(); ++d) v += w[d] * feature[d];
    s[c] = v;
    m = std::max(m, v);
  }
  double z = 0;
  for (double& v : s) {
    v = std::exp(v - m);
    z += v;
  }
  for (double& v : s) v /= z;
  return s;
}

// ---- random forest ----

const TreeNode& DecisionTree::Leaf(std::span<const double> feature) const {
  const TreeNode* node = &nodes.front();
  while (node->feature >= 0) {
    node = &nodes[static_cast<std::size_t>(
        feature[static_cast<std::size_t>(node->feature)] <= node->threshold ? node->left
                                                                             : node->right)];
  }
  return *node;
}

namespace {

double Gini(const std::array<double, kNumTags>& counts, double total) {
  if (total <= 0) return 0;
  double s = 0;
  for (double c : counts) s += c * c;
  return 1.0 - s / (total * total);
}

struct SplitChoice {
  int feature = -1;
  double threshold = 0;
  double impurity = INFINITY;  // weighted child impurity
};

class TreeBuilder {
 public:
  TreeBuilder(const Matrix& x, const std::vector<int>& y, const ForestParams& params,
              std::size_t max_features, std::uint64_t seed)
      : x_(x), y_(y), params_(params), max_features_(max_features), rng_(seed) {}

  DecisionTree Build(std::vector<std::size_t> samples) {
    DecisionTree tree;
    tree.nodes.emplace_back();
    std::vector<std::pair<int, std::vector<std::size_t>>> stack;
    stack.emplace_back(0, std::move(samples));
    while (!stack.empty()) {
      auto [node_id, rows] = std::move(stack.back());
      stack.pop_back();
      std::array<double, kNumTags> counts{};
      for (std::size_t r : rows) counts[static_cast<std::size_t>(y_[r])] += 1;
      const bool pure =
          std::count_if(counts.begin(), counts.end(), [](double c) { return c > 0; }) <= 1;
      SplitChoice split;
      if (!pure && rows.size() >= 2 * params_.min_samples_leaf) split = FindSplit(rows, counts);
      TreeNode& node = tree.nodes[static_cast<std::size_t>(node_id)];
      if (split.feature < 0) {
        node.histogram.assign(counts.begin(), counts.end());
        continue;
      }
      std::vector<std::size_t> left, right;
      for (std::size_t r : rows) {
        (x_(r, static_cast<std::size_t>(split.feature)) <= split.threshold ? left : right)
            .push_back(r);
      }
      const int left_id = static_cast<int>(tree.nodes.size());
      const int right_id = left_id + 1;
      node.feature = split.feature;
      node.threshold = split.threshold;
      node.left = left_id;
      node.right = right_id;
      tree.nodes.emplace_back();  // invalidates `node`
      tree.nodes.emplace_back();
      stack.emplace_back(right_id, std::move(right));
      stack.emplace_back(left_id, std::move(left));
    }
    return tree;
  }

 private:
  SplitChoice FindSplit(const std::vector<std::size_t>& rows,
                        const std::array<double, kNumTags>& parent) {
    const std::size_t dim = x_.cols();
    std::vector<std::size_t> features(dim);
    std::iota(features.begin(), features.end(), std::size_t{0});
    SplitChoice best;
    std::vector<std::pair<double, int>> column(rows.size());
    // Draw features without replacement; after max_features draws, keep
    // going only while no valid split has been found.
    for (std::size_t drawn = 0; drawn < dim; ++drawn) {
      if (drawn >= max_features_ && best.feature >= 0) break;
      const std::size_t pick = drawn + rng_.Below(dim - drawn);
      std::swap(features[drawn], features[pick]);
      const std::size_t f = features[drawn];
      for (std::size_t i = 0; i < rows.size(); ++i) column[i] = {x_(rows[i], f), y_[rows[i]]};
      std::sort(column.begin(), column.end());
      std::array<double, kNumTags> left{};
      std::array<double, kNumTags> right = parent;
      for (std::size_t i = 0; i + 1 < column.size(); ++i) {
        const auto label = static_cast<std::size_t>(column[i].second);
        left[label] += 1;
        right[label] -= 1;
        if (column[i].first == column[i + 1].first) continue;
        const std::size_t nl = i + 1;
        const std::size_t nr = column.size() - nl;
        if (nl < params_.min_samples_leaf || nr < params_.min_samples_leaf) continue;
        const double impurity = Gini(left, static_cast<double>(nl)) * static_cast<double>(nl) +
                                Gini(right, static_cast<double>(nr)) * static_cast<double>(nr);
        if (impurity < best.impurity) {
          best.impurity = impurity;
          best.feature = static_cast<int>(f);
          double mid = 0.5 * (column[i].first + column[i + 1].first);
          if (!(mid < column[i + 1].first)) mid = column[i].first;
          best.threshold = mid;
        }
      }
    }
    return best;
  }

  const Matrix& x_;
  const std::vector<int>& y_;
  const ForestParams& params_;
  std::size_t max_features_;
  Rng rng_;
};

TagScores LeafDistribution(const TreeNode& leaf) {
  TagScores s{};
  double total = 0;
  for (double c : leaf.histogram) total += c;
  for (std::size_t i = 0; i < kNumTags; ++i) s[i] = total > 0 ? leaf.histogram[i] / total : 0;
  return s;
}

}  // namespace

ForestModel TrainForest(const Matrix& features, std::span<const Tag> labels,
                        const ForestParams& params) {
  CheckTrainingInput(features, labels);
  if (params.num_trees < 1 || params.min_samples_leaf < 1) {
    throw Error(ErrorCode::kInvalidArgument, "invalid forest parameters");
  }
  const std::vector<int> y = LabelIndices(labels);
  const std::size_t n = features.rows();
  const std::size_t dim = features.cols();
  std::size_t max_features = params.max_features;
  if (max_features == 0) {
    max_features = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(dim))));
  }
  max_features = std::min(max_features, dim);

  ForestModel model;
  model.params = params;
  model.feature_dim = dim;
  model.trees.resize(static_cast<std::size_t>(params.num_trees));
  std::vector<std::vector<std::uint32_t>> in_bag(model.trees.size());

  kernels::ParallelFor(model.trees.size(), params.threads, [&](std::size_t t) {
    const std::uint64_t tree_seed = MixSeed(params.seed, t);
    Rng bag_rng(MixSeed(tree_seed, 0));
    std::vector<std::size_t> rows(n);
    in_bag[t].assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      rows[i] = params.bootstrap ? bag_rng.Below(n) : i;
      ++in_bag[t][rows[i]];
    }
    TreeBuilder builder(features, y, params, max_features, MixSeed(tree_seed, 1));
    model.trees[t] = builder.Build(std::move(rows));
  });

  if (params.bootstrap) {
    std::size_t evaluated = 0;
    std::size_t correct = 0;
    for (std::size_t i = 0; i < n; ++i) {
      TagScores sum{};
      std::size_t votes = 0;
      for (std::size_t t = 0; t < model.trees.size(); ++t) {
        if (in_bag[t][i] != 0) continue;
        const TagScores d = LeafDistribution(model.trees[t].Leaf(features.row(i)));
        for (std::size_t c = 0; c < kNumTags; ++c) sum[c] += d[c];
        ++votes;
      }
      if (votes == 0) continue;
      ++evaluated;
      if (RankScores({}, sum).top() == labels[i]) ++correct;
    }
    if (evaluated > 0) {
      model.oob_accuracy = static_cast<double>(correct) / static_cast<double>(evaluated);
    }
  }
  return model;
}

TagScores PredictProba(const ForestModel& model, std::span<const double> feature) {
  if (feature.size() != model.feature_dim) {
    throw Error(ErrorCode::kInvalidArgument,
                "feature has dimension " + std::to_string(feature.size()) +
                    ", model expects " + std::to_string(model.feature_dim));
  }
  TagScores s{};
  for (const auto& tree : model.trees) {
    const TagScores d = LeafDistribution(tree.Leaf(feature));
    for (std::size_t c = 0; c < kNumTags; ++c) s[c] += d[c];
  }
  for (double& v : s) v /= static_cast<double>(model.trees.size());
  return s;
}

// ---- container ----

std::string_view ClassifierKindName(ClassifierKind kind) {
  switch (kind) {
    case ClassifierKind::kLogReg: return "logreg";
    case ClassifierKind::kForest: return "forest";
    case ClassifierKind::kCosine: return "cosine";
  }
  return "";
}

std::optional<ClassifierKind> ParseClassifierKind(std::string_view name) {
  for (auto k : {ClassifierKind::kLogReg, ClassifierKind::kForest, ClassifierKind::kCosine}) {
    if (ClassifierKindName(k) == name) return k;
  }
  return std::nullopt;
}

void L2NormalizeInPlace(std::span<double> v) {
  double s = 0;
  for (double x : v) s += x * x;
  if (s == 0) return;
  const double inv = 1.0 / std::sqrt(s);
  for (double& x : v) x *= inv;
}

TagScores Classifier::Scores(std::span<const double> feature) const {
  std::vector<double> local;
  if (config.normalize) {
    local.assign(feature.begin(), feature.end());
    L2NormalizeInPlace(local);
    feature = local;
  }
  if (feature.size() != feature_dim) {
    throw Error(ErrorCode::kInvalidArgument,
                "feature has dimension " + std::to_string(feature.size()) +
                    ", classifier expects " + std::to_string(feature_dim));
  }
  if (const auto* lr = std::get_if<LogRegModel>(&model)) return PredictProba(*lr, feature);
  if (const auto* rf = std::get_if<ForestModel>(&model)) return PredictProba(*rf, feature);
  const auto& labels = std::get<LabelVectors>(model);
  TagScores s{};
  for (std::size_t i = 0; i < kNumTags; ++i) s[i] = Cosine(feature, labels[i]);
  return s;
}

RankedPrediction Classifier::Predict(std::string term, std::span<const double> feature) const {
  return RankScores(std::move(term), Scores(feature));
}

Classifier TrainClassifier(const Matrix& features, std::span<const Tag> labels,
                           const ClassifierConfig& config, FeatureMode mode,
                           const TermFeatureOptions& feature_options,
                           const LabelVectors* labels_for_cosine) {
  Classifier c;
  c.config = config;
  c.mode = mode;
  c.feature_options = feature_options;
  c.feature_dim = features.cols();
  if (config.kind == ClassifierKind::kCosine) {
    if (labels_for_cosine == nullptr) {
      throw Error(ErrorCode::kInvalidArgument, "cosine classifier needs label vectors");
    }
    LabelVectors labels_copy = *labels_for_cosine;
    for (auto& v : labels_copy) {
      if (config.normalize) L2NormalizeInPlace(v);
    }
    c.feature_dim = labels_copy.front().size();
    c.model = std::move(labels_copy);
    return c;
  }
  const Matrix* x = &features;
  Matrix normalized;
  if (config.normalize) {
    normalized = features;
    for (std::size_t r = 0; r < normalized.rows(); ++r) L2NormalizeInPlace(normalized.row(r));
    x = &normalized;
  }
  if (config.kind == ClassifierKind::kLogReg) {
    c.model = TrainLogReg(*x, labels, config.logreg);
  } else {
    c.model = TrainForest(*x, labels, config.forest);
  }
  return c;
}

// ---- persistence ----

using nlohmann::json;

namespace {

constexpr std::string_view kModelFormat = "finhyper-model";
constexpr int kModelVersion = 1;

json MatrixToJson(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    rows.push_back(std::vector<double>(m.row(r).begin(), m.row(r).end()));
  }
  return rows;
}

Matrix MatrixFromJson(const json& j) {
  Matrix m;
  for (const auto& row : j) m.AppendRow(row.get<std::vector<double>>());
  return m;
}

}  // namespace

std::string ClassifierToJson(const Classifier& c, const std::string& provenance) {
  json j;
  j["format"] = kModelFormat;
  j["version"] = kModelVersion;
  if (!provenance.empty()) j["provenance"] = provenance;
  j["kind"] = ClassifierKindName(c.config.kind);
  j["tags"] = std::vector<std::string>(kTagNames.begin(), kTagNames.end());
  j["dimension"] = c.feature_dim;
  j["feature_mode"] = FeatureModeName(c.mode);
  j["normalize"] = c.config.normalize;
  j["zero_fallback"] = c.feature_options.zero_fallback;
  j["sentence_per_token"] = c.feature_options.sentence_per_token;
  if (const auto* lr = std::get_if<LogRegModel>(&c.model)) {
    j["params"] = {{"learning_rate", lr->params.learning_rate},
                   {"epochs", lr->params.epochs},
                   {"batch_size", lr->params.batch_size},
                   {"l2", lr->params.l2},
                   {"seed", lr->params.seed}};
    j["final_loss"] = lr->final_loss;
    j["train_accuracy"] = lr->train_accuracy;
    j["weights"] = MatrixToJson(lr->weights);
    j["bias"] = lr->bias;
  } else if (const auto* rf = std::get_if<ForestModel>(&c.model)) {
    j["params"] = {{"num_trees", rf->params.num_trees},
                   {"min_samples_leaf", rf->params.min_samples_leaf},
                   {"max_features", rf->params.max_features},
                   {"bootstrap", rf->params.bootstrap},
                   {"seed", rf->params.seed}};
    j["oob_accuracy"] = rf->oob_accuracy ? json(*rf->oob_accuracy) : json(nullptr);
    json trees = json::array();
    for (const auto& tree : rf->trees) {
      json t;
      std::vector<int> feature, left, right;
      std::vector<double> threshold;
      json leaves = json::object();
      for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
        const auto& n = tree.nodes[i];
        feature.push_back(n.feature);
        threshold.push_back(n.threshold);
        left.push_back(n.left);
        right.push_back(n.right);
        if (n.feature < 0) leaves[std::to_string(i)] = n.histogram;
      }
      t["feature"] = feature;
      t["threshold"] = threshold;
      t["left"] = left;
      t["right"] = right;
      t["leaves"] = leaves;
      trees.push_back(std::move(t));
    }
    j["trees"] = std::move(trees);
  } else {
    const auto& labels = std::get<LabelVectors>(c.model);
    json lv = json::array();
    for (const auto& v : labels) lv.push_back(v);
    j["label_vectors"] = std::move(lv);
  }
  return j.dump();
}

Classifier ClassifierFromJson(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string("model is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != kModelFormat) {
      throw Error(ErrorCode::kParse, "not a finhyper model file");
    }
    if (j.at("version").get<int>() != kModelVersion) {
      throw Error(ErrorCode::kParse,
                  "unsupported model version " + std::to_string(j.at("version").get<int>()));
    }
    if (j.at("tags").get<std::vector<std::string>>() !=
        std::vector<std::string>(kTagNames.begin(), kTagNames.end())) {
      throw Error(ErrorCode::kParse, "model tag list differs from the canonical 17 tags");
    }
    Classifier c;
    auto kind = ParseClassifierKind(j.at("kind").get<std::string>());
    auto mode = ParseFeatureMode(j.at("feature_mode").get<std::string>());
    if (!kind || !mode) throw Error(ErrorCode::kParse, "unknown model kind or feature mode");
    c.config.kind = *kind;
    c.mode = *mode;
    c.feature_dim = j.at("dimension").get<std::size_t>();
    c.config.normalize = j.at("normalize").get<bool>();
    c.feature_options.zero_fallback = j.value("zero_fallback", false);
    c.feature_options.sentence_per_token = j.value("sentence_per_token", false);
    if (*kind == ClassifierKind::kLogReg) {
      LogRegModel m;
      const auto& p = j.at("params");
      m.params.learning_rate = p.at("learning_rate").get<double>();
      m.params.epochs = p.at("epochs").get<int>();
      m.params.batch_size = p.at("batch_size").get<std::size_t>();
      m.params.l2 = p.at("l2").get<double>();
      m.params.seed = p.at("seed").get<std::uint64_t>();
      m.final_loss = j.at("final_loss").get<double>();
      m.train_accuracy = j.at("train_accuracy").get<double>();
      m.weights = MatrixFromJson(j.at("weights"));
      m.bias = j.at("bias").get<std::vector<double>>();
      if (m.weights.rows() != kNumTags || m.bias.size() != kNumTags ||
          m.weights.cols() != c.feature_dim) {
        throw Error(ErrorCode::kParse, "logistic regression parameters have the wrong shape");
      }
      c.config.logreg = m.params;
      c.model = std::move(m);
    } else if (*kind == ClassifierKind::kForest) {
      ForestModel m;
      const auto& p = j.at("params");
      m.params.num_trees = p.at("num_trees").get<int>();
      m.params.min_samples_leaf = p.at("min_samples_leaf").get<std::size_t>();
      m.params.max_features = p.at("max_features").get<std::size_t>();
      m.params.bootstrap = p.at("bootstrap").get<bool>();
      m.params.seed = p.at("seed").get<std::uint64_t>();
      m.feature_dim = c.feature_dim;
      if (!j.at("oob_accuracy").is_null()) m.oob_accuracy = j.at("oob_accuracy").get<double>();
      for (const auto& t : j.at("trees")) {
        DecisionTree tree;
        const auto feature = t.at("feature").get<std::vector<int>>();
        const auto threshold = t.at("threshold").get<std::vector<double>>();
        const auto left = t.at("left").get<std::vector<int>>();
        const auto right = t.at("right").get<std::vector<int>>();
        const auto& leaves = t.at("leaves");
        const int count = static_cast<int>(feature.size());
        for (std::size_t i = 0; i < feature.size(); ++i) {
          TreeNode n{feature[i], threshold[i], left[i], right[i], {}};
          if (n.feature < 0) {
            n.histogram = leaves.at(std::to_string(i)).get<std::vector<double>>();
            if (n.histogram.size() != kNumTags) {
              throw Error(ErrorCode::kParse, "leaf histogram has the wrong length");
            }
          } else if (static_cast<std::size_t>(n.feature) >= c.feature_dim ||
                     n.left <= 0 || n.right <= 0 || n.left >= count || n.right >= count) {
            throw Error(ErrorCode::kParse, "tree node out of range");
          }
          tree.nodes.push_back(std::move(n));
        }
        if (tree.nodes.empty()) throw Error(ErrorCode::kParse, "empty tree");
        m.trees.push_back(std::move(tree));
      }
      c.config.forest = m.params;
      c.model = std::move(m);
    } else {
      LabelVectors labels;
      const auto& lv = j.at("label_vectors");
      if (lv.size() != kNumTags) throw Error(ErrorCode::kParse, "need 17 label vectors");
      for (std::size_t i = 0; i < kNumTags; ++i) {
        labels[i] = lv[i].get<std::vector<double>>();
        if (labels[i].size() != c.feature_dim) {
          throw Error(ErrorCode::kParse, "label vector has the wrong dimension");
        }
      }
      c.model = std::move(labels);
    }
    return c;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("malformed model: ") + e.what());
  }
}

void SaveClassifier(const Classifier& classifier, const std::filesystem::path& path,
                    const std::string& provenance) {
  auto out = OpenForWrite(path);
  out << ClassifierToJson(classifier, provenance) << '\n';
}

Classifier LoadClassifier(const std::filesystem::path& path) {
  auto in = OpenForRead(path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return ClassifierFromJson(text);
}

}  // namespace finhyper
