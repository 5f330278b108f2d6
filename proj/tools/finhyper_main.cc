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

// Command-line driver. Each subcommand is one pipeline stage; stages talk to
// each other only through files.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "finhyper/classifiers.h"
#include "finhyper/embeddings.h"
#include "finhyper/error.h"
#include "finhyper/evaluation.h"
#include "finhyper/fetch.h"
#include "finhyper/io.h"
#include "finhyper/ontology.h"
#include "finhyper/representation.h"
#include "finhyper/strings.h"
#include "finhyper/text.h"

namespace fs = std::filesystem;
using namespace finhyper;

namespace {

struct Globals {
  std::string out_dir;
  int threads = 1;
  std::uint64_t seed = 1;
};

// Settings that determine a stage's payload; their digest goes into the
// provenance header. Paths and thread counts are deliberately excluded so
// that identical runs in different directories produce identical files.
using Settings = std::map<std::string, std::string>;

std::string Digest(const std::string& stage, const Settings& settings) {
  std::string canonical = stage;
  for (const auto& [k, v] : settings) canonical += "\n" + k + "=" + v;
  return HexDigest(Fnv1a64(canonical));
}

Provenance MakeProvenance(const Globals& g, const std::string& stage, const Settings& s) {
  return Provenance{std::string(kToolVersion), Digest(stage, s), g.seed};
}

fs::path OutPath(const Globals& g, const std::string& path) {
  fs::path p(path);
  if (p.is_relative() && !g.out_dir.empty()) return fs::path(g.out_dir) / p;
  return p;
}

std::vector<Tag> ParseTagList(const std::vector<std::string>& names) {
  if (names.empty()) return AllTags();
  std::vector<Tag> tags;
  for (const auto& n : names) tags.push_back(RequireTag(n));
  return tags;
}

std::string Str(double v) { return FormatDouble(v); }

void WarnLine(const std::string& stage, const std::string& what) {
  std::cerr << "finhyper: warning: stage=" << stage << " " << what << '\n';
}

// ---- feature / classifier options shared by several commands ----

struct FeatureArgs {
  std::string mode = "fused";
  std::string sentence_vectors;
  std::string word_vectors;
  bool zero_fallback = false;
  bool sentence_per_token = false;

  void Register(CLI::App* cmd) {
    cmd->add_option("--mode", mode, "Feature mode")
        ->check(CLI::IsMember({"sentence_only", "word_only", "fused"}))
        ->capture_default_str();
    cmd->add_option("--sentence-vectors", sentence_vectors,
                    "Sentence vectors (word2vec text format, 768-d)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--word-vectors", word_vectors, "Word vectors (word2vec text format)")
        ->check(CLI::ExistingFile);
    cmd->add_flag("--zero-fallback", zero_fallback,
                  "Use a zero sentence vector for terms without one (logged)");
    cmd->add_flag("--sentence-per-token", sentence_per_token,
                  "Add the sentence vector once per token of the term");
  }

  FeatureMode Mode() const { return *ParseFeatureMode(mode); }
  TermFeatureOptions Options() const { return {zero_fallback, sentence_per_token}; }

  void AddSettings(Settings& s) const {
    s["mode"] = mode;
    s["zero_fallback"] = zero_fallback ? "1" : "0";
    s["sentence_per_token"] = sentence_per_token ? "1" : "0";
  }
};

struct LoadedVectors {
  std::optional<SentenceVectorStore> sents;
  std::optional<VectorTable> words;

  const SentenceVectorStore* sents_ptr() const { return sents ? &*sents : nullptr; }
  const VectorTable* words_ptr() const { return words ? &*words : nullptr; }
};

LoadedVectors LoadVectors(FeatureMode mode, const std::string& sentence_path,
                          const std::string& word_path) {
  LoadedVectors v;
  if (mode != FeatureMode::kWordOnly) {
    if (sentence_path.empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "--sentence-vectors is required for mode " +
                      std::string(FeatureModeName(mode)));
    }
    v.sents = SentenceVectorStore::Load(sentence_path);
  }
  if (mode != FeatureMode::kSentenceOnly) {
    if (word_path.empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "--word-vectors is required for mode " + std::string(FeatureModeName(mode)));
    }
    v.words = LoadWord2Vec(word_path);
    if (v.words->dimension() > kPhraseDim) {
      throw Error(ErrorCode::kInvalidArgument, "word vectors wider than the phrase dimension");
    }
  }
  return v;
}

struct ClassifierArgs {
  std::string kind = "logreg";
  LogRegParams logreg;
  ForestParams forest;
  bool normalize = false;
  std::string label_source = "names";
  std::string label_corpus;

  void Register(CLI::App* cmd) {
    cmd->add_option("--classifier", kind, "Classifier")
        ->check(CLI::IsMember({"logreg", "forest", "cosine"}))
        ->capture_default_str();
    cmd->add_option("--lr", logreg.learning_rate, "Logistic regression learning rate")
        ->capture_default_str();
    cmd->add_option("--clf-epochs", logreg.epochs, "Logistic regression epochs")
        ->capture_default_str();
    cmd->add_option("--batch-size", logreg.batch_size, "Mini-batch size (0 = full batch)")
        ->capture_default_str();
    cmd->add_option("--l2", logreg.l2, "L2 penalty")->capture_default_str();
    cmd->add_option("--trees", forest.num_trees, "Forest size")->capture_default_str();
    cmd->add_option("--min-samples-leaf", forest.min_samples_leaf, "Forest leaf size")
        ->capture_default_str();
    cmd->add_option("--max-features", forest.max_features,
                    "Features per split (0 = ceil(sqrt(d)))")
        ->capture_default_str();
    cmd->add_flag("--normalize", normalize, "L2-normalize features before classification");
    cmd->add_option("--label-source", label_source,
                    "Cosine label vectors from tag names or seed definitions")
        ->check(CLI::IsMember({"names", "definitions"}))
        ->capture_default_str();
    cmd->add_option("--label-corpus", label_corpus,
                    "Definition corpus supplying seed definitions for --label-source definitions")
        ->check(CLI::ExistingFile);
  }

  ClassifierConfig Config(const Globals& g) const {
    ClassifierConfig c;
    c.kind = *ParseClassifierKind(kind);
    c.logreg = logreg;
    c.logreg.seed = g.seed;
    c.logreg.threads = g.threads;
    c.forest = forest;
    c.forest.seed = g.seed;
    c.forest.threads = g.threads;
    c.normalize = normalize;
    return c;
  }

  void AddSettings(Settings& s) const {
    s["classifier"] = kind;
    s["normalize"] = normalize ? "1" : "0";
    if (kind == "logreg") {
      s["lr"] = Str(logreg.learning_rate);
      s["clf_epochs"] = std::to_string(logreg.epochs);
      s["batch_size"] = std::to_string(logreg.batch_size);
      s["l2"] = Str(logreg.l2);
    } else if (kind == "forest") {
      s["trees"] = std::to_string(forest.num_trees);
      s["min_samples_leaf"] = std::to_string(forest.min_samples_leaf);
      s["max_features"] = std::to_string(forest.max_features);
    } else {
      s["label_source"] = label_source;
    }
  }

  std::optional<LabelVectors> Labels(FeatureMode mode, const LoadedVectors& v,
                                     const TermFeatureOptions& options) const {
    if (kind != "cosine") return std::nullopt;
    if (label_source == "names") {
      return LabelVectorsFromNames(mode, v.sents_ptr(), v.words_ptr(), options);
    }
    if (label_corpus.empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "--label-source definitions needs --label-corpus");
    }
    const DefinitionCorpus corpus = ReadCorpusTsv(label_corpus);
    std::array<std::string, kNumTags> texts;
    for (std::size_t t = 0; t < kNumTags; ++t) texts[t] = std::string(kTagNames[t]);
    std::array<bool, kNumTags> found{};
    for (const auto& e : corpus.entries) {
      const std::size_t t = TagIndex(e.tag);
      if (!found[t] && e.depth == 0 && e.property == TextProperty::kDefinition) {
        texts[t] = e.text;
        found[t] = true;
      }
    }
    return LabelVectorsFromTexts(texts, mode, v.sents_ptr(), v.words_ptr(), options);
  }
};

// ---- commands ----

void RunExtract(const Globals& g, const std::string& dump_path,
                const std::vector<std::string>& seed_names, int max_depth, bool instances,
                const std::string& out) {
  const OntologyDump dump = LoadDump(dump_path);
  for (const auto& d : dump.dangling) {
    WarnLine("extract", "dangling " +
                            std::string(d.kind == LinkKind::kSubclass ? "subclass" : "instance") +
                            " reference from '" + d.from_iri + "' to '" + d.to_iri + "'");
  }
  const std::vector<Tag> seeds = ParseTagList(seed_names);
  const MineResult mined = Mine(dump.records, seeds, {max_depth, instances});
  for (const auto& c : mined.conflicts) {
    std::string candidates;
    for (const auto& [tag, depth] : c.candidates) {
      candidates += (candidates.empty() ? "" : ",") + std::string(TagName(tag)) + "@" +
                    std::to_string(depth);
    }
    WarnLine("extract", "conflict iri='" + c.iri + "' candidates=" + candidates +
                            " assigned='" + std::string(TagName(c.assigned)) + "'");
  }
  Settings s{{"max_depth", std::to_string(max_depth)},
             {"expand_instances", instances ? "1" : "0"}};
  std::vector<std::string> names;
  for (Tag t : seeds) names.emplace_back(TagName(t));
  s["seeds"] = Join(names, ",");
  auto file = OpenForWrite(OutPath(g, out));
  file << MakeProvenance(g, "extract", s).HeaderLine() << '\n';
  WriteCorpusTsv(mined.corpus, file);
  std::cerr << "extract: " << mined.corpus.entries.size() << " definitions from "
            << dump.records.size() << " records\n";
}

void RunPairs(const Globals& g, const std::string& corpus_path,
              const std::vector<std::string>& tag_names, double pos, double neg,
              const std::string& out, bool split, const std::vector<double>& fractions) {
  const DefinitionCorpus corpus = ReadCorpusTsv(corpus_path);
  const std::vector<Tag> tags = ParseTagList(tag_names);
  const PairOptions options{pos, neg};
  Settings s{{"positive", Str(pos)}, {"negative", Str(neg)}, {"tags", std::to_string(tags.size())}};
  if (split) {
    if (fractions.size() != 3) {
      throw Error(ErrorCode::kInvalidArgument, "--split-fractions needs three values");
    }
    s["split"] = Str(fractions[0]) + "/" + Str(fractions[1]) + "/" + Str(fractions[2]);
  }
  const std::string header = MakeProvenance(g, "pairs", s).HeaderLine();
  auto write = [&](const DefinitionCorpus& c, const fs::path& path) {
    const PairSet set = BuildPairs(c, tags, options);
    auto file = OpenForWrite(path);
    file << header << '\n';
    WritePairsTsv(set, file);
    return set.pairs.size();
  };
  const std::size_t total = write(corpus, OutPath(g, out));
  std::cerr << "pairs: " << total << " pairs\n";
  if (split) {
    const SplitSpec spec{fractions[0], fractions[1], fractions[2], g.seed};
    auto parts = Split(corpus.entries, spec);
    auto as_corpus = [](std::vector<MinedDefinition> entries) {
      DefinitionCorpus c;
      c.entries = std::move(entries);
      c.Recount();
      return c;
    };
    const std::string base = OutPath(g, out).string();
    write(as_corpus(std::move(parts.train)), base + ".train");
    write(as_corpus(std::move(parts.dev)), base + ".dev");
    write(as_corpus(std::move(parts.test)), base + ".test");
  }
}

void RunTrainWord(const Globals& g, const std::vector<std::string>& texts,
                  const std::vector<std::string>& corpora, const std::string& model,
                  EmbeddingConfig config, const std::string& out) {
  std::vector<std::string> lines;
  for (const auto& path : texts) {
    for (auto& l : ReadLines(path, /*skip_comments=*/false)) lines.push_back(std::move(l.text));
  }
  for (const auto& path : corpora) {
    for (auto& e : ReadCorpusTsv(path).entries) lines.push_back(std::move(e.text));
  }
  if (lines.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "train-word needs --text or --corpus input");
  }
  config.subwords_enabled = model == "fasttext";
  config.seed = g.seed;
  config.threads = g.threads;
  const TrainedEmbeddings trained = TrainEmbeddings(lines, config);
  Settings s{{"model", model},
             {"dim", std::to_string(config.dimension)},
             {"window", std::to_string(config.window)},
             {"negatives", std::to_string(config.negatives)},
             {"min_count", std::to_string(config.min_count)},
             {"epochs", std::to_string(config.epochs)},
             {"lr", Str(config.learning_rate)}};
  if (config.subwords_enabled) {
    s["ngram_min"] = std::to_string(config.ngram_min);
    s["ngram_max"] = std::to_string(config.ngram_max);
    s["buckets"] = std::to_string(config.buckets);
  }
  SaveWord2Vec(trained.table, OutPath(g, out),
               MakeProvenance(g, "train-word", s).HeaderLine());
  std::cerr << "train-word: vocabulary " << trained.stats.vocabulary << ", tokens "
            << trained.stats.tokens << ", final epoch loss "
            << (trained.stats.epoch_mean_loss.empty() ? 0.0
                                                      : trained.stats.epoch_mean_loss.back())
            << '\n';
}

void RunTrainClf(const Globals& g, const std::string& train_path, const FeatureArgs& fa,
                 const ClassifierArgs& ca, const std::string& out) {
  const LabeledTermSet train = ReadTermsTsv(train_path);
  const FeatureMode mode = fa.Mode();
  const LoadedVectors vectors = LoadVectors(mode, fa.sentence_vectors, fa.word_vectors);
  std::vector<std::string> terms;
  std::vector<Tag> labels;
  for (const auto& t : train) {
    terms.push_back(t.term);
    labels.push_back(t.gold);
  }
  const FeatureBatch batch = TermFeatures(terms, mode, vectors.sents_ptr(), vectors.words_ptr(),
                                          fa.Options(), g.threads);
  if (batch.missing_sentences > 0) {
    WarnLine("train-clf", "missing_sentence_vectors=" + std::to_string(batch.missing_sentences));
  }
  const auto label_vectors = ca.Labels(mode, vectors, fa.Options());
  const Classifier clf =
      TrainClassifier(batch.features, labels, ca.Config(g), mode, fa.Options(),
                      label_vectors ? &*label_vectors : nullptr);
  Settings s;
  fa.AddSettings(s);
  ca.AddSettings(s);
  SaveClassifier(clf, OutPath(g, out), MakeProvenance(g, "train-clf", s).HeaderLine());
  if (const auto* lr = std::get_if<LogRegModel>(&clf.model)) {
    std::cerr << "train-clf: loss " << lr->final_loss << ", train accuracy "
              << lr->train_accuracy << '\n';
  }
}

void RunPredict(const Globals& g, const std::string& model_path, const std::string& terms_path,
                const FeatureArgs& fa, bool zero_fallback_flag, std::size_t top_k,
                const std::string& out) {
  const Classifier clf = LoadClassifier(model_path);
  TermFeatureOptions options = clf.feature_options;
  options.zero_fallback = options.zero_fallback || zero_fallback_flag;
  const LoadedVectors vectors = LoadVectors(clf.mode, fa.sentence_vectors, fa.word_vectors);
  const std::vector<std::string> terms = ReadTermList(terms_path);
  const FeatureBatch batch = TermFeatures(terms, clf.mode, vectors.sents_ptr(),
                                          vectors.words_ptr(), options, g.threads);
  if (batch.missing_sentences > 0) {
    WarnLine("predict", "missing_sentence_vectors=" + std::to_string(batch.missing_sentences));
  }
  std::vector<RankedPrediction> preds;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    preds.push_back(clf.Predict(terms[i], batch.features.row(i)));
  }
  Settings s{{"model", HexDigest(Fnv1a64(ClassifierToJson(clf)))},
             {"top_k", std::to_string(top_k)}};
  auto file = OpenForWrite(OutPath(g, out));
  file << MakeProvenance(g, "predict", s).HeaderLine() << '\n';
  WritePredictionsTsv(preds, top_k, file);
}

void WriteReport(const Globals& g, EvalReport report, const std::string& stage,
                 const Settings& s, const std::string& out, const std::string& text_out) {
  report.provenance = MakeProvenance(g, stage, s).HeaderLine();
  for (const auto& [k, v] : s) report.settings.emplace(k, v);
  {
    auto file = OpenForWrite(OutPath(g, out));
    file << ReportToJson(report) << '\n';
  }
  const std::string summary = ReportSummary(report);
  const std::string text_path = text_out.empty() ? OutPath(g, out).string() + ".txt"
                                                 : OutPath(g, text_out).string();
  auto text = OpenForWrite(text_path);
  text << report.provenance << '\n' << summary;
  std::cout << summary;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finhyper: financial hypernym classification toolkit"};
  app.set_config("--config", "", "Key-value configuration file (flags win)");
  app.require_subcommand(1);
  Globals g;
  app.add_option("--out-dir", g.out_dir, "Directory for relative output paths")
      ->envname("FINHYPER_OUT_DIR");
  app.add_option("--threads", g.threads, "Worker threads (1 = deterministic)")
      ->envname("FINHYPER_THREADS")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--seed", g.seed, "Seed for every stochastic stage")->capture_default_str();
  std::string stage = "cli";

  // extract
  auto* extract = app.add_subcommand("extract", "Mine a definition corpus from an ontology dump");
  std::string dump_path, extract_out = "corpus.tsv";
  std::vector<std::string> seed_names;
  int max_depth = 2;
  bool expand_instances = false;
  extract->add_option("--dump", dump_path, "Ontology dump (JSONL)")
      ->required()
      ->check(CLI::ExistingFile);
  extract->add_option("--seeds", seed_names, "Seed tags (default: all 17)")->delimiter(',');
  extract->add_option("--max-depth", max_depth, "Link-distance cutoff")->capture_default_str();
  extract->add_flag("--expand-instances", expand_instances, "Follow instance links too");
  extract->add_option("--out", extract_out, "Corpus TSV")->capture_default_str();

  // pairs
  auto* pairs = app.add_subcommand("pairs", "Build sentence/tag similarity pairs");
  std::string pairs_corpus, pairs_out = "pairs.tsv";
  std::vector<std::string> pair_tags;
  double pos = 0.8, neg = 0.3;
  bool pairs_split = false;
  std::vector<double> fractions{0.7, 0.1, 0.2};
  pairs->add_option("--corpus", pairs_corpus, "Definition corpus TSV")
      ->required()
      ->check(CLI::ExistingFile);
  pairs->add_option("--tags", pair_tags, "Tags to pair with (default: all 17)")->delimiter(',');
  pairs->add_option("--positive", pos, "Score of the matching tag")->capture_default_str();
  pairs->add_option("--negative", neg, "Score of the other tags")->capture_default_str();
  pairs->add_flag("--split", pairs_split, "Also write .train/.dev/.test pair files");
  pairs->add_option("--split-fractions", fractions, "Train/dev/test fractions")
      ->delimiter(',')
      ->expected(3);
  pairs->add_option("--out", pairs_out, "Pair TSV")->capture_default_str();

  // train-word
  auto* train_word = app.add_subcommand("train-word", "Train word vectors");
  std::vector<std::string> word_texts, word_corpora;
  std::string word_model = "fasttext", word_out = "words.vec";
  EmbeddingConfig ecfg;
  train_word->add_option("--text", word_texts, "Raw text file(s), e.g. prospectuses")
      ->check(CLI::ExistingFile);
  train_word->add_option("--corpus", word_corpora, "Definition corpus TSV file(s)")
      ->check(CLI::ExistingFile);
  train_word->add_option("--model", word_model, "word2vec or fasttext")
      ->check(CLI::IsMember({"word2vec", "fasttext"}))
      ->capture_default_str();
  train_word->add_option("--dim", ecfg.dimension, "Vector dimension")->capture_default_str();
  train_word->add_option("--window", ecfg.window, "Context window")->capture_default_str();
  train_word->add_option("--negatives", ecfg.negatives, "Negative samples")->capture_default_str();
  train_word->add_option("--ngram-min", ecfg.ngram_min, "Shortest n-gram")->capture_default_str();
  train_word->add_option("--ngram-max", ecfg.ngram_max, "Longest n-gram")->capture_default_str();
  train_word->add_option("--min-count", ecfg.min_count, "Minimum token count")
      ->capture_default_str();
  train_word->add_option("--epochs", ecfg.epochs, "Training epochs")->capture_default_str();
  train_word->add_option("--lr", ecfg.learning_rate, "Initial learning rate")
      ->capture_default_str();
  train_word->add_option("--buckets", ecfg.buckets, "N-gram hash buckets")->capture_default_str();
  train_word->add_option("--out", word_out, "Output vectors")->capture_default_str();

  // train-clf
  auto* train_clf = app.add_subcommand("train-clf", "Train a term classifier");
  std::string clf_train, clf_out = "model.json";
  FeatureArgs clf_features;
  ClassifierArgs clf_args;
  train_clf->add_option("--train", clf_train, "Labeled terms (term<TAB>label)")
      ->required()
      ->check(CLI::ExistingFile);
  clf_features.Register(train_clf);
  clf_args.Register(train_clf);
  train_clf->add_option("--out", clf_out, "Model JSON")->capture_default_str();

  // predict
  auto* predict = app.add_subcommand("predict", "Rank tags for terms");
  std::string pred_model, pred_terms, pred_out = "predictions.tsv";
  FeatureArgs pred_features;
  std::size_t top_k = kNumTags;
  predict->add_option("--model", pred_model, "Model JSON")->required()->check(CLI::ExistingFile);
  predict->add_option("--terms", pred_terms, "Terms (first TSV column)")
      ->required()
      ->check(CLI::ExistingFile);
  predict->add_option("--sentence-vectors", pred_features.sentence_vectors, "Sentence vectors")
      ->check(CLI::ExistingFile);
  predict->add_option("--word-vectors", pred_features.word_vectors, "Word vectors")
      ->check(CLI::ExistingFile);
  predict->add_flag("--zero-fallback", pred_features.zero_fallback,
                    "Zero sentence vector for unknown terms");
  predict->add_option("--top-k", top_k, "Tags written per term")
      ->check(CLI::Range(std::size_t{1}, kNumTags))
      ->capture_default_str();
  predict->add_option("--out", pred_out, "Predictions TSV")->capture_default_str();

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Score predictions or run the split protocol");
  std::string eval_preds, eval_gold, eval_data, eval_out = "report.json", eval_text;
  std::optional<std::size_t> cap;
  bool protocol_mode = false;
  RunProtocol protocol;
  FeatureArgs eval_features;
  ClassifierArgs eval_clf;
  std::string eval_corpus;
  evaluate->add_option("--predictions", eval_preds, "Predictions TSV")->check(CLI::ExistingFile);
  evaluate->add_option("--gold", eval_gold, "Gold terms TSV")->check(CLI::ExistingFile);
  evaluate->add_flag("--protocol", protocol_mode, "Repeated seeded train/test splits");
  evaluate->add_option("--data", eval_data, "Labeled terms for --protocol")
      ->check(CLI::ExistingFile);
  evaluate->add_option("--runs", protocol.runs, "Runs")->capture_default_str();
  evaluate->add_option("--train-fraction", protocol.train_fraction, "Train share per run")
      ->capture_default_str();
  evaluate->add_flag("--train-on-all", protocol.train_on_all,
                     "Train and test on all data (smoke tests)");
  evaluate->add_option("--cap", cap, "Clip ranks at K+1");
  evaluate->add_option("--corpus", eval_corpus, "Definition corpus for distribution tables")
      ->check(CLI::ExistingFile);
  eval_features.Register(evaluate);
  eval_clf.Register(evaluate);
  evaluate->add_option("--out", eval_out, "Report JSON")->capture_default_str();
  evaluate->add_option("--text", eval_text, "Text summary (default: <out>.txt)");

  // report
  auto* report = app.add_subcommand("report", "Label distribution / imbalance report");
  std::string rep_train, rep_corpus, rep_from, rep_out = "distribution.json", rep_text;
  report->add_option("--train", rep_train, "Training terms TSV")->check(CLI::ExistingFile);
  report->add_option("--corpus", rep_corpus, "Definition corpus TSV")->check(CLI::ExistingFile);
  report->add_option("--from", rep_from, "Existing report JSON to re-render or extend")
      ->check(CLI::ExistingFile);
  report->add_option("--out", rep_out, "Report JSON")->capture_default_str();
  report->add_option("--text", rep_text, "Text summary (default: <out>.txt)");

  // fetch
  auto* fetch = app.add_subcommand("fetch", "Download concept pages into a dump");
  std::string base_url, fetch_out = "dump.jsonl";
  std::vector<std::string> seed_pages;
  FetchOptions fetch_options;
  int interval_ms = 500;
  fetch->add_option("--base-url", base_url, "e.g. http://host:port")->required();
  fetch->add_option("--seed-page", seed_pages, "Tag=path, repeatable")->required();
  fetch->add_option("--max-depth", fetch_options.max_depth, "Link depth")->capture_default_str();
  fetch->add_flag("--follow-instances", fetch_options.follow_instances, "Follow instance links");
  fetch->add_option("--interval-ms", interval_ms, "Delay between requests (>= 500)")
      ->capture_default_str();
  fetch->add_option("--out", fetch_out, "Dump JSONL")->capture_default_str();

  // split
  auto* split = app.add_subcommand("split", "Seeded train/dev/test split of a term TSV");
  std::string split_in, split_prefix;
  std::vector<double> split_fractions{0.7, 0.1, 0.2};
  split->add_option("--input", split_in, "Terms TSV")->required()->check(CLI::ExistingFile);
  split->add_option("--fractions", split_fractions, "Train/dev/test")
      ->delimiter(',')
      ->expected(3);
  split->add_option("--out-prefix", split_prefix, "Output prefix (default: input path)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    for (char& c : msg) {
      if (c == '\n') c = ' ';
    }
    std::cerr << "finhyper: error: stage=cli code=usage message=\"" << msg << "\"\n";
    return 2;
  }

  try {
    if (*extract) {
      stage = "extract";
      RunExtract(g, dump_path, seed_names, max_depth, expand_instances, extract_out);
    } else if (*pairs) {
      stage = "pairs";
      RunPairs(g, pairs_corpus, pair_tags, pos, neg, pairs_out, pairs_split, fractions);
    } else if (*train_word) {
      stage = "train-word";
      RunTrainWord(g, word_texts, word_corpora, word_model, ecfg, word_out);
    } else if (*train_clf) {
      stage = "train-clf";
      RunTrainClf(g, clf_train, clf_features, clf_args, clf_out);
    } else if (*predict) {
      stage = "predict";
      RunPredict(g, pred_model, pred_terms, pred_features, pred_features.zero_fallback, top_k,
                 pred_out);
    } else if (*evaluate) {
      stage = "evaluate";
      Settings s;
      EvalReport rep;
      if (protocol_mode) {
        if (eval_data.empty()) {
          throw Error(ErrorCode::kInvalidArgument, "--protocol needs --data");
        }
        const LabeledTermSet data = ReadTermsTsv(eval_data);
        const FeatureMode mode = eval_features.Mode();
        const LoadedVectors vectors =
            LoadVectors(mode, eval_features.sentence_vectors, eval_features.word_vectors);
        std::vector<std::string> terms;
        for (const auto& t : data) terms.push_back(t.term);
        const FeatureBatch batch = TermFeatures(terms, mode, vectors.sents_ptr(),
                                                vectors.words_ptr(), eval_features.Options(),
                                                g.threads);
        const auto labels = eval_clf.Labels(mode, vectors, eval_features.Options());
        protocol.base_seed = g.seed;
        protocol.cap = cap;
        protocol.threads = g.threads;
        const ProtocolResult result = RunExperiment(data, batch.features, eval_clf.Config(g),
                                                    mode, protocol, labels ? &*labels : nullptr);
        rep = MakeReport(result);
        for (const auto& note : result.notes) WarnLine("evaluate", note);
        s["evaluation"] = "protocol";
        eval_features.AddSettings(s);
        eval_clf.AddSettings(s);
        s["runs"] = std::to_string(protocol.runs);
        s["train_fraction"] = Str(protocol.train_fraction);
        s["train_on_all"] = protocol.train_on_all ? "1" : "0";
        if (!eval_corpus.empty()) {
          AttachDistributions(rep, Distributions(data, ReadCorpusTsv(eval_corpus)));
        }
      } else {
        if (eval_preds.empty() || eval_gold.empty()) {
          throw Error(ErrorCode::kInvalidArgument,
                      "evaluate needs --predictions and --gold, or --protocol --data");
        }
        const auto preds = ReadPredictionsTsv(eval_preds);
        const LabeledTermSet gold = ReadTermsTsv(eval_gold);
        if (preds.size() != gold.size()) {
          throw Error(ErrorCode::kInvalidArgument,
                      "predictions (" + std::to_string(preds.size()) + ") and gold (" +
                          std::to_string(gold.size()) + ") differ in length");
        }
        std::vector<Tag> gold_tags;
        for (std::size_t i = 0; i < gold.size(); ++i) {
          if (NormalizeKey(preds[i].term) != NormalizeKey(gold[i].term)) {
            throw Error(ErrorCode::kInvalidArgument,
                        "row " + std::to_string(i + 1) + ": prediction term '" +
                            preds[i].term + "' does not match gold term '" + gold[i].term + "'");
          }
          gold_tags.push_back(gold[i].gold);
        }
        s["evaluation"] = "predictions";
        rep = MakeReport(Evaluate(preds, gold_tags, cap));
        if (!eval_corpus.empty()) {
          AttachDistributions(rep, Distributions(gold, ReadCorpusTsv(eval_corpus)));
        }
      }
      if (cap) s["cap"] = std::to_string(*cap);
      WriteReport(g, std::move(rep), "evaluate", s, eval_out, eval_text);
    } else if (*report) {
      stage = "report";
      EvalReport rep;
      Settings s;
      if (!rep_from.empty()) {
        auto in = OpenForRead(rep_from);
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        rep = ReportFromJson(text);
      }
      if (!rep_train.empty() || !rep_corpus.empty()) {
        if (rep_train.empty() || rep_corpus.empty()) {
          throw Error(ErrorCode::kInvalidArgument, "report needs both --train and --corpus");
        }
        AttachDistributions(rep, Distributions(ReadTermsTsv(rep_train), ReadCorpusTsv(rep_corpus)));
      } else if (rep_from.empty()) {
        throw Error(ErrorCode::kInvalidArgument, "report needs --train and --corpus, or --from");
      }
      if (!rep_from.empty()) {
        // Re-rendering keeps the original provenance and settings.
        auto file = OpenForWrite(OutPath(g, rep_out));
        file << ReportToJson(rep) << '\n';
        const std::string summary = ReportSummary(rep);
        auto text = OpenForWrite(rep_text.empty() ? OutPath(g, rep_out).string() + ".txt"
                                                  : OutPath(g, rep_text).string());
        text << rep.provenance << '\n' << summary;
        std::cout << summary;
      } else {
        WriteReport(g, std::move(rep), "report", s, rep_out, rep_text);
      }
    } else if (*fetch) {
      stage = "fetch";
      std::vector<FetchSeed> seeds;
      for (const auto& sp : seed_pages) {
        const auto eq = sp.find('=');
        if (eq == std::string::npos) {
          throw Error(ErrorCode::kInvalidArgument, "--seed-page expects Tag=path, got '" + sp + "'");
        }
        seeds.push_back({RequireTag(sp.substr(0, eq)), sp.substr(eq + 1)});
      }
      fetch_options.min_interval = std::chrono::milliseconds(interval_ms);
      const FetchStats stats = FetchPages(base_url, seeds, OutPath(g, fetch_out), fetch_options);
      for (const auto& w : stats.warnings) WarnLine("fetch", w);
      std::cerr << "fetch: " << stats.requests << " requests, " << stats.reused
                << " pages reused\n";
    } else if (*split) {
      stage = "split";
      if (split_fractions.size() != 3) {
        throw Error(ErrorCode::kInvalidArgument, "--fractions needs three values");
      }
      const LabeledTermSet data = ReadTermsTsv(split_in);
      const SplitSpec spec{split_fractions[0], split_fractions[1], split_fractions[2], g.seed};
      auto parts = Split(data, spec);
      const std::string prefix = split_prefix.empty() ? split_in : OutPath(g, split_prefix).string();
      Settings s{{"fractions", Str(spec.train) + "/" + Str(spec.dev) + "/" + Str(spec.test)}};
      const std::string header = MakeProvenance(g, "split", s).HeaderLine();
      for (const auto& [suffix, part] :
           {std::pair{".train", &parts.train}, {".dev", &parts.dev}, {".test", &parts.test}}) {
        auto file = OpenForWrite(prefix + suffix);
        file << header << '\n';
        WriteTermsTsv(*part, file);
      }
    }
  } catch (const Error& e) {
    std::string msg = e.what();
    for (char& c : msg) {
      if (c == '\n') c = ' ';
    }
    std::cerr << "finhyper: error: stage=" << stage << " code=" << ErrorCodeName(e.code())
              << " message=\"" << msg << "\"\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "finhyper: error: stage=" << stage << " code=internal message=\"" << e.what()
              << "\"\n";
    return 1;
  }
  return 0;
}
