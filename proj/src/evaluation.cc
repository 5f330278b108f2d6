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

#include "finhyper/evaluation.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "finhyper/error.h"
#include "finhyper/io.h"
#include "finhyper/strings.h"
#include "finhyper/text.h"
#include "json.hpp"

namespace finhyper {

LabeledTermSet ReadTermsTsv(const std::filesystem::path& path) {
  LabeledTermSet terms;
  bool first = true;
  for (const auto& line : ReadLines(path)) {
    if (first) {
      first = false;
      if (ToLower(line.text) == "term\tlabel") continue;
    }
    if (Trim(line.text).empty()) continue;
    const auto fields = Split(line.text, '\t');
    const std::string where = path.string() + ": line " + std::to_string(line.number) + ": ";
    if (fields.size() != 2) {
      throw Error(ErrorCode::kParse, where + "expected 'term<TAB>label'");
    }
    const std::string term = UnescapeField(Trim(fields[0]));
    if (term.empty()) throw Error(ErrorCode::kParse, where + "empty term");
    auto tag = ParseTagLoose(fields[1]);
    if (!tag) throw Error(ErrorCode::kParse, where + "unknown label '" + fields[1] + "'");
    terms.push_back({term, *tag});
  }
  return terms;
}

void WriteTermsTsv(const LabeledTermSet& terms, std::ostream& out) {
  out << "term\tlabel\n";
  for (const auto& t : terms) out << EscapeField(t.term) << '\t' << TagName(t.gold) << '\n';
}

std::vector<std::string> ReadTermList(const std::filesystem::path& path) {
  std::vector<std::string> terms;
  bool first = true;
  for (const auto& line : ReadLines(path)) {
    const auto fields = Split(line.text, '\t');
    if (first) {
      first = false;
      if (ToLower(fields[0]) == "term") continue;
    }
    std::string term = UnescapeField(Trim(fields[0]));
    if (!term.empty()) terms.push_back(std::move(term));
  }
  return terms;
}

void WritePredictionsTsv(const std::vector<RankedPrediction>& predictions,
                         std::size_t top_k, std::ostream& out) {
  top_k = std::clamp<std::size_t>(top_k, 1, kNumTags);
  out << "term";
  for (std::size_t k = 1; k <= top_k; ++k) out << "\ttag_" << k << "\tscore_" << k;
  out << '\n';
  for (const auto& p : predictions) {
    out << EscapeField(p.term);
    for (std::size_t k = 0; k < std::min(top_k, p.ranking.size()); ++k) {
      out << '\t' << TagName(p.ranking[k].first) << '\t'
          << FormatDouble(p.ranking[k].second);
    }
    out << '\n';
  }
}

std::vector<RankedPrediction> ReadPredictionsTsv(const std::filesystem::path& path) {
  std::vector<RankedPrediction> out;
  for (const auto& line : ReadLines(path)) {
    if (line.text.rfind("term\t", 0) == 0 || Trim(line.text).empty()) continue;
    const auto fields = Split(line.text, '\t');
    const std::string where = path.string() + ": line " + std::to_string(line.number) + ": ";
    if (fields.size() < 3 || fields.size() % 2 == 0) {
      throw Error(ErrorCode::kParse, where + "expected term followed by tag/score pairs");
    }
    RankedPrediction p;
    p.term = UnescapeField(fields[0]);
    for (std::size_t i = 1; i + 1 < fields.size(); i += 2) {
      auto tag = ParseTag(fields[i]);
      if (!tag) throw Error(ErrorCode::kParse, where + "unknown tag '" + fields[i] + "'");
      double score = 0;
      const auto& f = fields[i + 1];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), score);
      if (ec != std::errc() || ptr != f.data() + f.size()) {
        throw Error(ErrorCode::kParse, where + "bad score '" + f + "'");
      }
      p.ranking.emplace_back(*tag, score);
    }
    out.push_back(std::move(p));
  }
  return out;
}

namespace {

void CheckLengths(std::span<const RankedPrediction> predictions, std::span<const Tag> gold) {
  if (predictions.size() != gold.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "predictions and gold labels differ in length (" +
                    std::to_string(predictions.size()) + " vs " +
                    std::to_string(gold.size()) + ")");
  }
}

std::size_t GoldRank(const RankedPrediction& p, Tag gold, std::optional<std::size_t> cap,
                     std::size_t index) {
  std::size_t rank = p.RankOf(gold);
  if (rank == 0) {
    if (cap && p.ranking.size() >= *cap) return *cap + 1;
    throw Error(ErrorCode::kInvalidArgument,
                "gold tag '" + std::string(TagName(gold)) + "' absent from ranking " +
                    std::to_string(index) + (p.term.empty() ? "" : " ('" + p.term + "')"));
  }
  if (cap) rank = std::min(rank, *cap + 1);
  return rank;
}

}  // namespace

double Accuracy(std::span<const RankedPrediction> predictions, std::span<const Tag> gold) {
  CheckLengths(predictions, gold);
  if (predictions.empty()) throw Error(ErrorCode::kInvalidArgument, "accuracy of no samples");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (!predictions[i].ranking.empty() && predictions[i].top() == gold[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(gold.size());
}

double MeanRank(std::span<const RankedPrediction> predictions, std::span<const Tag> gold,
                std::optional<std::size_t> cap) {
  CheckLengths(predictions, gold);
  if (predictions.empty()) throw Error(ErrorCode::kInvalidArgument, "mean rank of no samples");
  double sum = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    sum += static_cast<double>(GoldRank(predictions[i], gold[i], cap, i));
  }
  return sum / static_cast<double>(gold.size());
}

EvalResult Evaluate(std::span<const RankedPrediction> predictions, std::span<const Tag> gold,
                    std::optional<std::size_t> cap) {
  EvalResult r;
  r.accuracy = Accuracy(predictions, gold);
  r.mean_rank = MeanRank(predictions, gold, cap);
  r.n = gold.size();
  std::array<std::size_t, kNumTags> hits{};
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const std::size_t g = TagIndex(gold[i]);
    ++r.per_label[g].support;
    if (predictions[i].top() == gold[i]) ++hits[g];
  }
  for (std::size_t t = 0; t < kNumTags; ++t) {
    if (r.per_label[t].support > 0) {
      r.per_label[t].matched_accuracy =
          static_cast<double>(hits[t]) / static_cast<double>(r.per_label[t].support);
    }
  }
  return r;
}

void RunProtocol::Validate() const {
  if (runs < 1) throw Error(ErrorCode::kInvalidArgument, "runs must be >= 1");
  if (!(train_fraction > 0 && train_fraction < 1)) {
    throw Error(ErrorCode::kInvalidArgument, "train_fraction must lie in (0, 1)");
  }
}

namespace {

std::pair<double, double> MeanStd(const std::vector<double>& v) {
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  if (v.size() < 2) return {mean, 0.0};
  double ss = 0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(v.size() - 1))};
}

}  // namespace

ProtocolResult RunExperiment(const LabeledTermSet& data, const Matrix& features,
                             const ClassifierConfig& classifier, FeatureMode mode,
                             const RunProtocol& protocol, const LabelVectors* label_vectors) {
  protocol.Validate();
  if (data.size() < 10) {
    throw Error(ErrorCode::kInvalidArgument, "the protocol needs at least 10 labeled terms");
  }
  if (features.rows() != data.size()) {
    throw Error(ErrorCode::kInvalidArgument, "feature rows do not match the data set");
  }
  const auto runs = static_cast<std::size_t>(protocol.runs);
  std::vector<EvalResult> results(runs);
  std::vector<std::array<bool, kNumTags>> trained_on(runs);

  kernels::ParallelFor(runs, protocol.threads, [&](std::size_t r) {
    std::vector<std::size_t> all(data.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    std::vector<std::size_t> train_idx, test_idx;
    if (protocol.train_on_all) {
      train_idx = test_idx = all;
    } else {
      const SplitSpec spec{protocol.train_fraction, 0.0, 1.0 - protocol.train_fraction,
                           protocol.base_seed + r};
      auto parts = Split(all, spec);
      train_idx = std::move(parts.train);
      test_idx = std::move(parts.test);
    }
    Matrix x_train;
    std::vector<Tag> y_train;
    trained_on[r].fill(false);
    for (std::size_t i : train_idx) {
      x_train.AppendRow(features.row(i));
      y_train.push_back(data[i].gold);
      trained_on[r][TagIndex(data[i].gold)] = true;
    }
    ClassifierConfig config = classifier;
    if (protocol.threads > 1) {
      config.logreg.threads = 1;
      config.forest.threads = 1;
    }
    const Classifier model =
        TrainClassifier(x_train, y_train, config, mode, {}, label_vectors);
    std::vector<RankedPrediction> preds;
    std::vector<Tag> gold;
    for (std::size_t i : test_idx) {
      preds.push_back(model.Predict(data[i].term, features.row(i)));
      gold.push_back(data[i].gold);
    }
    results[r] = Evaluate(preds, gold, protocol.cap);
  });

  ProtocolResult out;
  out.per_run = results;
  std::vector<double> acc, mr;
  for (const auto& r : results) {
    acc.push_back(r.accuracy);
    mr.push_back(r.mean_rank);
  }
  std::tie(out.accuracy_mean, out.accuracy_std) = MeanStd(acc);
  std::tie(out.mean_rank_mean, out.mean_rank_std) = MeanStd(mr);
  for (std::size_t t = 0; t < kNumTags; ++t) {
    bool ever_trained = false;
    for (const auto& seen : trained_on) ever_trained = ever_trained || seen[t];
    std::vector<double> matched;
    for (const auto& r : results) {
      out.per_label_support[t] += r.per_label[t].support;
      if (r.per_label[t].matched_accuracy) matched.push_back(*r.per_label[t].matched_accuracy);
    }
    if (!ever_trained) {
      if (out.per_label_support[t] > 0) {
        out.notes.push_back("label '" + std::string(kTagNames[t]) +
                            "' never appears in a training split; excluded from the "
                            "per-label report");
      }
      continue;
    }
    if (!matched.empty()) out.per_label_matched[t] = MeanStd(matched).first;
  }
  return out;
}

DistributionReport Distributions(const LabeledTermSet& train, const DefinitionCorpus& corpus) {
  DistributionReport d;
  std::array<std::size_t, kNumTags> train_counts{};
  for (const auto& t : train) ++train_counts[TagIndex(t.gold)];
  std::array<std::size_t, kNumTags> corpus_counts{};
  for (const auto& e : corpus.entries) ++corpus_counts[TagIndex(e.tag)];
  d.train_total = train.size();
  d.corpus_total = corpus.entries.size();
  for (std::size_t t = 0; t < kNumTags; ++t) {
    d.train_percent[t] = d.train_total ? 100.0 * static_cast<double>(train_counts[t]) /
                                             static_cast<double>(d.train_total)
                                       : 0.0;
    d.corpus_percent[t] = d.corpus_total ? 100.0 * static_cast<double>(corpus_counts[t]) /
                                               static_cast<double>(d.corpus_total)
                                         : 0.0;
  }
  return d;
}

EvalReport MakeReport(const EvalResult& result) {
  EvalReport report;
  report.accuracy = result.accuracy;
  report.mean_rank = result.mean_rank;
  report.n = result.n;
  report.per_run.push_back({result.accuracy, result.mean_rank, result.n});
  for (std::size_t t = 0; t < kNumTags; ++t) {
    auto& l = report.per_label[std::string(kTagNames[t])];
    l.support = result.per_label[t].support;
    l.matched_accuracy = result.per_label[t].matched_accuracy;
  }
  return report;
}

EvalReport MakeReport(const ProtocolResult& result) {
  EvalReport report;
  report.accuracy = result.accuracy_mean;
  report.mean_rank = result.mean_rank_mean;
  report.accuracy_std = result.accuracy_std;
  report.mean_rank_std = result.mean_rank_std;
  for (const auto& r : result.per_run) {
    report.per_run.push_back({r.accuracy, r.mean_rank, r.n});
    report.n += r.n;
  }
  for (std::size_t t = 0; t < kNumTags; ++t) {
    auto& l = report.per_label[std::string(kTagNames[t])];
    l.support = result.per_label_support[t];
    l.matched_accuracy = result.per_label_matched[t];
  }
  report.notes = result.notes;
  return report;
}

void AttachDistributions(EvalReport& report, const DistributionReport& d) {
  report.distributions = d;
  for (std::size_t t = 0; t < kNumTags; ++t) {
    auto& l = report.per_label[std::string(kTagNames[t])];
    l.train_percent = d.train_percent[t];
    l.corpus_percent = d.corpus_percent[t];
  }
}

using nlohmann::json;

namespace {

json Opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> GetOpt(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<double>();
}

json PercentMap(const std::array<double, kNumTags>& v) {
  json m = json::object();
  for (std::size_t t = 0; t < kNumTags; ++t) m[std::string(kTagNames[t])] = v[t];
  return m;
}

std::array<double, kNumTags> PercentArray(const json& m) {
  std::array<double, kNumTags> v{};
  for (std::size_t t = 0; t < kNumTags; ++t) v[t] = m.at(std::string(kTagNames[t])).get<double>();
  return v;
}

}  // namespace

std::string ReportToJson(const EvalReport& r) {
  json j;
  j["format"] = "finhyper-report";
  j["version"] = 1;
  j["provenance"] = r.provenance;
  j["settings"] = r.settings;
  j["accuracy"] = Opt(r.accuracy);
  j["mean_rank"] = Opt(r.mean_rank);
  j["accuracy_std"] = Opt(r.accuracy_std);
  j["mean_rank_std"] = Opt(r.mean_rank_std);
  j["n"] = r.n;
  json runs = json::array();
  for (const auto& run : r.per_run) {
    runs.push_back({{"accuracy", run.accuracy}, {"mean_rank", run.mean_rank}, {"n", run.n}});
  }
  j["per_run"] = std::move(runs);
  json labels = json::object();
  for (const auto& [tag, l] : r.per_label) {
    labels[tag] = {{"support", l.support},
                   {"matched_accuracy", Opt(l.matched_accuracy)},
                   {"train_percent", Opt(l.train_percent)},
                   {"corpus_percent", Opt(l.corpus_percent)}};
  }
  j["per_label"] = std::move(labels);
  if (r.distributions) {
    const auto& d = *r.distributions;
    j["distributions"] = {{"train_total", d.train_total},
                          {"corpus_total", d.corpus_total},
                          {"train", PercentMap(d.train_percent)},
                          {"corpus", PercentMap(d.corpus_percent)}};
  } else {
    j["distributions"] = nullptr;
  }
  j["notes"] = r.notes;
  return j.dump(2);
}

EvalReport ReportFromJson(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string("report is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != "finhyper-report") {
      throw Error(ErrorCode::kParse, "not a finhyper report");
    }
    EvalReport r;
    r.provenance = j.at("provenance").get<std::string>();
    r.settings = j.at("settings").get<std::map<std::string, std::string>>();
    r.accuracy = GetOpt(j, "accuracy");
    r.mean_rank = GetOpt(j, "mean_rank");
    r.accuracy_std = GetOpt(j, "accuracy_std");
    r.mean_rank_std = GetOpt(j, "mean_rank_std");
    r.n = j.at("n").get<std::size_t>();
    for (const auto& run : j.at("per_run")) {
      r.per_run.push_back({run.at("accuracy").get<double>(), run.at("mean_rank").get<double>(),
                           run.at("n").get<std::size_t>()});
    }
    for (const auto& [tag, l] : j.at("per_label").items()) {
      if (!ParseTag(tag)) throw Error(ErrorCode::kParse, "unknown tag '" + tag + "' in report");
      r.per_label[tag] = {l.at("support").get<std::size_t>(), GetOpt(l, "matched_accuracy"),
                          GetOpt(l, "train_percent"), GetOpt(l, "corpus_percent")};
    }
    if (!j.at("distributions").is_null()) {
      const auto& d = j.at("distributions");
      DistributionReport dist;
      dist.train_total = d.at("train_total").get<std::size_t>();
      dist.corpus_total = d.at("corpus_total").get<std::size_t>();
      dist.train_percent = PercentArray(d.at("train"));
      dist.corpus_percent = PercentArray(d.at("corpus"));
      r.distributions = dist;
    }
    r.notes = j.at("notes").get<std::vector<std::string>>();
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("malformed report: ") + e.what());
  }
}

namespace {

std::string Cell(const std::optional<double>& v, const char* fmt) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof(buf), fmt, *v);
  return buf;
}

}  // namespace

std::string ReportSummary(const EvalReport& r) {
  std::ostringstream out;
  char line[160];
  std::string system;
  for (const auto& key : {"feature_mode", "classifier"}) {
    auto it = r.settings.find(key);
    if (it != r.settings.end()) system += (system.empty() ? "" : "+") + it->second;
  }
  if (system.empty()) system = "system";
  std::snprintf(line, sizeof(line), "%-32s %8s %8s\n", "System", "ACC", "MR");
  out << line;
  std::snprintf(line, sizeof(line), "%-32s %8s %8s\n", system.c_str(),
                Cell(r.accuracy, "%.3f").c_str(), Cell(r.mean_rank, "%.3f").c_str());
  out << line;
  if (r.accuracy_std) {
    std::snprintf(line, sizeof(line), "%-32s %8s %8s\n", "  (std over runs)",
                  Cell(r.accuracy_std, "%.3f").c_str(), Cell(r.mean_rank_std, "%.3f").c_str());
    out << line;
  }
  if (r.per_run.size() > 1) {
    for (std::size_t i = 0; i < r.per_run.size(); ++i) {
      std::snprintf(line, sizeof(line), "  run %-26zu %8.3f %8.3f  (n=%zu)\n", i + 1,
                    r.per_run[i].accuracy, r.per_run[i].mean_rank, r.per_run[i].n);
      out << line;
    }
  }
  out << '\n';
  std::snprintf(line, sizeof(line), "%-32s %8s %9s %8s %8s\n", "Label", "Support", "Matched",
                "Train%", "Corpus%");
  out << line;
  for (std::size_t t = 0; t < kNumTags; ++t) {
    auto it = r.per_label.find(std::string(kTagNames[t]));
    if (it == r.per_label.end()) continue;
    const auto& l = it->second;
    std::optional<double> matched;
    if (l.matched_accuracy) matched = 100.0 * *l.matched_accuracy;
    std::snprintf(line, sizeof(line), "%-32s %8zu %9s %8s %8s\n",
                  std::string(kTagNames[t]).c_str(), l.support,
                  Cell(matched, "%.2f%%").c_str(), Cell(l.train_percent, "%.2f").c_str(),
                  Cell(l.corpus_percent, "%.2f").c_str());
    out << line;
  }
  for (const auto& note : r.notes) out << "note: " << note << '\n';
  return out.str();
}

}  // namespace finhyper
