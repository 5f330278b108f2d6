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

#include "finhyper/embeddings.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "finhyper/error.h"
#include "finhyper/io.h"
#include "finhyper/rng.h"
#include "finhyper/strings.h"
#include "finhyper/text.h"

namespace finhyper {

void EmbeddingConfig::Validate() const {
  auto bad = [](const std::string& why) {
    return Error(ErrorCode::kInvalidArgument, "embedding config: " + why);
  };
  if (dimension == 0) throw bad("dimension must be > 0");
  if (window < 1) throw bad("window must be >= 1");
  if (negatives < 0) throw bad("negatives must be >= 0");
  if (ngram_min < 1 || ngram_min > ngram_max) {
    throw bad("need 1 <= ngram_min <= ngram_max");
  }
  if (!(learning_rate > 0)) throw bad("learning_rate must be > 0");
  if (epochs < 1) throw bad("epochs must be >= 1");
  if (subwords_enabled && buckets == 0) throw bad("buckets must be > 0");
  if (threads < 1) throw bad("threads must be >= 1");
}

std::vector<std::string> CharNgrams(std::string_view word, int min_n, int max_n) {
  const std::string wrapped = "<" + std::string(word) + ">";
  std::vector<std::size_t> starts;
  for (std::size_t i = 0; i < wrapped.size(); ++i) {
    if ((static_cast<unsigned char>(wrapped[i]) & 0xC0) != 0x80) starts.push_back(i);
  }
  starts.push_back(wrapped.size());
  const std::size_t chars = starts.size() - 1;
  std::vector<std::string> out;
  for (std::size_t s = 0; s < chars; ++s) {
    for (int n = min_n; n <= max_n; ++n) {
      const std::size_t e = s + static_cast<std::size_t>(n);
      if (e > chars) break;
      out.push_back(wrapped.substr(starts[s], starts[e] - starts[s]));
    }
  }
  return out;
}

std::uint32_t NgramBucket(std::string_view ngram, std::uint32_t buckets) {
  return Fnv1a32(ngram) % buckets;
}

// ---- SubwordTable ----

SubwordTable::SubwordTable(std::size_t dimension, int ngram_min, int ngram_max,
                           std::uint32_t buckets)
    : dimension_(dimension),
      ngram_min_(ngram_min),
      ngram_max_(ngram_max),
      buckets_(buckets) {}

void SubwordTable::AddWord(std::string word, std::span<const float> own) {
  if (own.size() != dimension_) {
    throw Error(ErrorCode::kInvalidArgument, "subword own vector has wrong dimension");
  }
  if (!word_index_.emplace(word, words_.size()).second) {
    throw Error(ErrorCode::kInvalidArgument, "duplicate subword word '" + word + "'");
  }
  words_.push_back(std::move(word));
  own_.insert(own_.end(), own.begin(), own.end());
}

void SubwordTable::AddBucket(std::uint32_t bucket, std::span<const float> vector) {
  if (vector.size() != dimension_) {
    throw Error(ErrorCode::kInvalidArgument, "bucket vector has wrong dimension");
  }
  if (bucket >= buckets_) {
    throw Error(ErrorCode::kInvalidArgument,
                "bucket id " + std::to_string(bucket) + " out of range");
  }
  if (!bucket_index_.emplace(bucket, bucket_ids_.size()).second) {
    throw Error(ErrorCode::kInvalidArgument,
                "duplicate bucket " + std::to_string(bucket));
  }
  bucket_ids_.push_back(bucket);
  bucket_rows_.insert(bucket_rows_.end(), vector.begin(), vector.end());
}

std::optional<std::span<const float>> SubwordTable::WordOwn(std::string_view word) const {
  auto it = word_index_.find(std::string(word));
  if (it == word_index_.end()) return std::nullopt;
  return std::span<const float>(own_.data() + it->second * dimension_, dimension_);
}

std::optional<std::span<const float>> SubwordTable::Bucket(std::uint32_t bucket) const {
  auto it = bucket_index_.find(bucket);
  if (it == bucket_index_.end()) return std::nullopt;
  return std::span<const float>(bucket_rows_.data() + it->second * dimension_,
                                dimension_);
}

std::vector<std::uint32_t> SubwordTable::WordBuckets(std::string_view word) const {
  std::vector<std::uint32_t> ids;
  for (const auto& g : CharNgrams(word, ngram_min_, ngram_max_)) {
    ids.push_back(NgramBucket(g, buckets_));
  }
  return ids;
}

void SubwordTable::Write(std::ostream& out) const {
  out << "subword " << dimension_ << ' ' << ngram_min_ << ' ' << ngram_max_ << ' '
      << buckets_ << ' ' << words_.size() << ' ' << bucket_ids_.size() << '\n';
  char buf[32];
  auto row = [&](const float* v) {
    for (std::size_t d = 0; d < dimension_; ++d) {
      std::snprintf(buf, sizeof(buf), " %.9g", static_cast<double>(v[d]));
      out << buf;
    }
    out << '\n';
  };
  for (std::size_t i = 0; i < words_.size(); ++i) {
    out << "w " << words_[i];
    row(own_.data() + i * dimension_);
  }
  for (std::size_t i = 0; i < bucket_ids_.size(); ++i) {
    out << "b " << bucket_ids_[i];
    row(bucket_rows_.data() + i * dimension_);
  }
}

std::shared_ptr<SubwordTable> SubwordTable::Read(const std::filesystem::path& path) {
  const auto lines = ReadLines(path);
  auto fail = [&](std::size_t line, const std::string& why) {
    return Error(ErrorCode::kParse,
                 path.string() + ": line " + std::to_string(line) + ": " + why);
  };
  if (lines.empty()) throw fail(0, "empty sidecar");
  const auto h = SplitWhitespace(lines[0].text);
  if (h.size() != 7 || h[0] != "subword") throw fail(lines[0].number, "bad header");
  std::size_t nums[6];
  for (int i = 0; i < 6; ++i) {
    auto [p, ec] = std::from_chars(h[i + 1].data(), h[i + 1].data() + h[i + 1].size(),
                                   nums[i]);
    if (ec != std::errc()) throw fail(lines[0].number, "bad header number");
  }
  auto table = std::make_shared<SubwordTable>(
      nums[0], static_cast<int>(nums[1]), static_cast<int>(nums[2]),
      static_cast<std::uint32_t>(nums[3]));
  if (lines.size() != 1 + nums[4] + nums[5]) {
    throw fail(lines[0].number, "row count does not match header");
  }
  std::vector<float> v(nums[0]);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = SplitWhitespace(lines[i].text);
    if (f.size() != nums[0] + 2) throw fail(lines[i].number, "wrong row length");
    for (std::size_t d = 0; d < nums[0]; ++d) {
      auto [p, ec] = std::from_chars(f[d + 2].data(), f[d + 2].data() + f[d + 2].size(),
                                     v[d]);
      if (ec != std::errc() || !std::isfinite(v[d])) {
        throw fail(lines[i].number, "bad value '" + f[d + 2] + "'");
      }
    }
    if (f[0] == "w") {
      table->AddWord(f[1], v);
    } else if (f[0] == "b") {
      std::uint32_t id = 0;
      auto [p, ec] = std::from_chars(f[1].data(), f[1].data() + f[1].size(), id);
      if (ec != std::errc()) throw fail(lines[i].number, "bad bucket id");
      table->AddBucket(id, v);
    } else {
      throw fail(lines[i].number, "unknown row kind '" + f[0] + "'");
    }
  }
  return table;
}

WordLookup WordVector(const VectorTable& table, std::string_view word) {
  WordLookup out;
  out.vector.assign(table.dimension(), 0.0);
  if (auto v = table.Find(word)) {
    out.vector.assign(v->begin(), v->end());
    out.in_vocabulary = true;
    return out;
  }
  const SubwordTable* sub = table.subwords();
  if (sub != nullptr) {
    for (std::uint32_t id : sub->WordBuckets(word)) {
      auto row = sub->Bucket(id);
      if (!row) continue;
      ++out.ngrams_found;
      for (std::size_t d = 0; d < out.vector.size(); ++d) out.vector[d] += (*row)[d];
    }
  }
  out.zero_fallback = out.ngrams_found == 0;
  return out;
}

// ---- skip-gram negative sampling ----

namespace {

// log(sigmoid(x)) without overflow.
double LogSigmoid(double x) {
  return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

double Sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

double SgnsLossAndGradient(std::span<const double> hidden,
                           std::span<const double> targets,
                           std::span<double> grad_hidden,
                           std::span<double> grad_targets) {
  const std::size_t dim = hidden.size();
  const std::size_t rows = targets.size() / dim;
  std::fill(grad_hidden.begin(), grad_hidden.end(), 0.0);
  double loss = 0.0;
  for (std::size_t k = 0; k < rows; ++k) {
    const double* t = targets.data() + k * dim;
    double score = 0.0;
    for (std::size_t d = 0; d < dim; ++d) score += t[d] * hidden[d];
    double g;
    if (k == 0) {
      loss -= LogSigmoid(score);
      g = Sigmoid(score) - 1.0;
    } else {
      loss -= LogSigmoid(-score);
      g = Sigmoid(score);
    }
    double* gt = grad_targets.data() + k * dim;
    for (std::size_t d = 0; d < dim; ++d) {
      grad_hidden[d] += g * t[d];
      gt[d] = g * hidden[d];
    }
  }
  return loss;
}

namespace {

struct EncodedCorpus {
  std::vector<std::string> vocab;
  std::vector<std::uint64_t> counts;
  std::vector<std::vector<std::uint32_t>> sentences;
  std::size_t tokens = 0;
};

EncodedCorpus Encode(std::span<const std::string> lines, std::size_t min_count) {
  std::vector<std::vector<std::string>> tokenized;
  std::map<std::string, std::uint64_t> counts;
  for (const auto& line : lines) {
    for (const auto& sentence : Preprocess(line)) {
      auto tokens = SplitWhitespace(sentence);
      for (const auto& t : tokens) ++counts[t];
      tokenized.push_back(std::move(tokens));
    }
  }
  EncodedCorpus c;
  std::vector<std::pair<std::string, std::uint64_t>> kept;
  for (auto& [word, n] : counts) {
    if (n >= min_count) kept.emplace_back(word, n);
  }
  // Frequency descending, then lexicographic: independent of input order.
  std::stable_sort(kept.begin(), kept.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::unordered_map<std::string, std::uint32_t> id;
  for (auto& [word, n] : kept) {
    id.emplace(word, static_cast<std::uint32_t>(c.vocab.size()));
    c.vocab.push_back(word);
    c.counts.push_back(n);
  }
  for (const auto& tokens : tokenized) {
    std::vector<std::uint32_t> ids;
    for (const auto& t : tokens) {
      auto it = id.find(t);
      if (it != id.end()) ids.push_back(it->second);
    }
    c.tokens += ids.size();
    if (ids.size() >= 2) c.sentences.push_back(std::move(ids));
  }
  return c;
}

// Draws from the unigram distribution raised to the 3/4 power.
class NoiseSampler {
 public:
  explicit NoiseSampler(const std::vector<std::uint64_t>& counts) {
    cumulative_.reserve(counts.size());
    double total = 0;
    for (auto n : counts) {
      total += std::pow(static_cast<double>(n), 0.75);
      cumulative_.push_back(total);
    }
  }
  std::uint32_t Draw(Rng& rng) const {
    const double u = rng.Uniform() * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) --it;
    return static_cast<std::uint32_t>(it - cumulative_.begin());
  }

 private:
  std::vector<double> cumulative_;
};

struct PlainAccess {
  static float Load(const float& x) { return x; }
  static void Add(float& x, float delta) { x += delta; }
};

// Relaxed atomics for the lock-free multi-worker mode: updates from other
// workers may interleave, but every individual access is well defined.
struct AtomicAccess {
  static float Load(const float& x) {
    return std::atomic_ref<float>(const_cast<float&>(x)).load(std::memory_order_relaxed);
  }
  static void Add(float& x, float delta) {
    std::atomic_ref<float>(x).fetch_add(delta, std::memory_order_relaxed);
  }
};

class SgnsModel {
 public:
  SgnsModel(const EncodedCorpus& corpus, const EmbeddingConfig& config)
      : corpus_(corpus),
        config_(config),
        dim_(config.dimension),
        sampler_(corpus.counts) {
    const std::size_t v = corpus.vocab.size();
    Rng init(config.seed);
    const double scale = 0.5 / static_cast<double>(dim_);
    own_.resize(v * dim_);
    for (auto& x : own_) x = static_cast<float>(init.Uniform(-scale, scale));
    out_.assign(v * dim_, 0.0f);
    word_rows_.resize(v);
    if (config.subwords_enabled) {
      std::unordered_map<std::uint32_t, std::uint32_t> row_of;
      for (std::size_t w = 0; w < v; ++w) {
        for (const auto& g : CharNgrams(corpus.vocab[w], config.ngram_min,
                                        config.ngram_max)) {
          const std::uint32_t bucket = NgramBucket(g, config.buckets);
          auto [it, inserted] =
              row_of.emplace(bucket, static_cast<std::uint32_t>(bucket_ids_.size()));
          if (inserted) bucket_ids_.push_back(bucket);
          word_rows_[w].push_back(it->second);
        }
      }
      ngrams_.resize(bucket_ids_.size() * dim_);
      for (auto& x : ngrams_) x = static_cast<float>(init.Uniform(-scale, scale));
    }
  }

  std::size_t total_steps() const {
    return static_cast<std::size_t>(config_.epochs) * corpus_.tokens;
  }

  // One pass over sentences [begin, end). Returns (loss sum, examples).
  template <typename Access>
  std::pair<double, std::size_t> Pass(std::size_t begin, std::size_t end, Rng& rng,
                                      std::atomic<std::size_t>& processed,
                                      std::atomic<bool>& failed,
                                      std::atomic<std::size_t>& failed_step) {
    const int k = config_.negatives;
    std::vector<double> hidden(dim_), grad_hidden(dim_);
    std::vector<double> targets((k + 1) * dim_), grad_targets((k + 1) * dim_);
    std::vector<std::uint32_t> ids;
    double loss_sum = 0;
    std::size_t examples = 0;
    const double total = static_cast<double>(total_steps());
    for (std::size_t s = begin; s < end; ++s) {
      if (failed.load(std::memory_order_relaxed)) break;
      const auto& sentence = corpus_.sentences[s];
      for (std::size_t i = 0; i < sentence.size(); ++i) {
        const std::size_t step = processed.fetch_add(1, std::memory_order_relaxed);
        const double lr =
            config_.learning_rate * std::max(1e-4, 1.0 - static_cast<double>(step) / total);
        const std::uint32_t center = sentence[i];
        const std::size_t reach = 1 + rng.Below(static_cast<std::uint64_t>(config_.window));
        const std::size_t lo = i >= reach ? i - reach : 0;
        const std::size_t hi = std::min(sentence.size() - 1, i + reach);
        for (std::size_t j = lo; j <= hi; ++j) {
          if (j == i) continue;
          ids.clear();
          ids.push_back(sentence[j]);
          for (int n = 0; n < k; ++n) {
            const std::uint32_t noise = sampler_.Draw(rng);
            if (noise != sentence[j]) ids.push_back(noise);
          }
          const double loss = Step<Access>(center, ids, lr, hidden, grad_hidden,
                                           targets, grad_targets);
          if (!std::isfinite(loss)) {
            if (!failed.exchange(true)) failed_step.store(step);
            return {loss_sum, examples};
          }
          loss_sum += loss;
          ++examples;
        }
      }
    }
    return {loss_sum, examples};
  }

  TrainedEmbeddings Finish(TrainStats stats) const {
    const std::size_t v = corpus_.vocab.size();
    TrainedEmbeddings result{VectorTable(dim_), std::move(stats)};
    std::shared_ptr<SubwordTable> sub;
    if (config_.subwords_enabled) {
      sub = std::make_shared<SubwordTable>(dim_, config_.ngram_min, config_.ngram_max,
                                           config_.buckets);
      for (std::size_t r = 0; r < bucket_ids_.size(); ++r) {
        sub->AddBucket(bucket_ids_[r], std::span<const float>(&ngrams_[r * dim_], dim_));
      }
    }
    std::vector<double> composed(dim_);
    for (std::size_t w = 0; w < v; ++w) {
      const float* own = &own_[w * dim_];
      for (std::size_t d = 0; d < dim_; ++d) composed[d] = own[d];
      for (std::uint32_t r : word_rows_[w]) {
        const float* g = &ngrams_[r * dim_];
        for (std::size_t d = 0; d < dim_; ++d) composed[d] += g[d];
      }
      result.table.Add(corpus_.vocab[w], composed);
      if (sub) sub->AddWord(corpus_.vocab[w], std::span<const float>(own, dim_));
    }
    result.stats.ngram_buckets = bucket_ids_.size();
    if (sub) result.table.set_subwords(std::move(sub));
    return result;
  }

 private:
  template <typename Access>
  double Step(std::uint32_t center, const std::vector<std::uint32_t>& ids, double lr,
              std::vector<double>& hidden, std::vector<double>& grad_hidden,
              std::vector<double>& targets, std::vector<double>& grad_targets) {
    float* own = &own_[center * dim_];
    for (std::size_t d = 0; d < dim_; ++d) hidden[d] = Access::Load(own[d]);
    for (std::uint32_t r : word_rows_[center]) {
      const float* g = &ngrams_[r * dim_];
      for (std::size_t d = 0; d < dim_; ++d) hidden[d] += Access::Load(g[d]);
    }
    for (std::size_t t = 0; t < ids.size(); ++t) {
      const float* o = &out_[ids[t] * dim_];
      for (std::size_t d = 0; d < dim_; ++d) targets[t * dim_ + d] = Access::Load(o[d]);
    }
    const std::size_t used = ids.size() * dim_;
    const double loss = SgnsLossAndGradient(
        hidden, std::span<const double>(targets.data(), used), grad_hidden,
        std::span<double>(grad_targets.data(), used));
    if (!std::isfinite(loss)) return loss;
    for (std::size_t t = 0; t < ids.size(); ++t) {
      float* o = &out_[ids[t] * dim_];
      for (std::size_t d = 0; d < dim_; ++d) {
        Access::Add(o[d], static_cast<float>(-lr * grad_targets[t * dim_ + d]));
      }
    }
    for (std::size_t d = 0; d < dim_; ++d) {
      Access::Add(own[d], static_cast<float>(-lr * grad_hidden[d]));
    }
    for (std::uint32_t r : word_rows_[center]) {
      float* g = &ngrams_[r * dim_];
      for (std::size_t d = 0; d < dim_; ++d) {
        Access::Add(g[d], static_cast<float>(-lr * grad_hidden[d]));
      }
    }
    return loss;
  }

  const EncodedCorpus& corpus_;
  const EmbeddingConfig& config_;
  std::size_t dim_;
  NoiseSampler sampler_;
  std::vector<float> own_;
  std::vector<float> out_;
  std::vector<float> ngrams_;
  std::vector<std::uint32_t> bucket_ids_;
  std::vector<std::vector<std::uint32_t>> word_rows_;
};

}  // namespace

TrainedEmbeddings TrainEmbeddings(std::span<const std::string> lines,
                                  const EmbeddingConfig& config) {
  config.Validate();
  const EncodedCorpus corpus = Encode(lines, config.min_count);
  if (corpus.vocab.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "empty vocabulary after min_count=" + std::to_string(config.min_count));
  }
  SgnsModel model(corpus, config);
  TrainStats stats;
  stats.vocabulary = corpus.vocab.size();
  stats.tokens = corpus.tokens;

  std::atomic<std::size_t> processed{0};
  std::atomic<bool> failed{false};
  std::atomic<std::size_t> failed_step{0};
  const std::size_t n = corpus.sentences.size();
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    double loss_sum = 0;
    std::size_t examples = 0;
    if (config.threads <= 1) {
      Rng rng(MixSeed(config.seed, static_cast<std::uint64_t>(epoch)));
      std::tie(loss_sum, examples) =
          model.Pass<PlainAccess>(0, n, rng, processed, failed, failed_step);
    } else {
      const int workers = config.threads;
#pragma omp parallel for num_threads(workers) schedule(static, 1) \
    reduction(+ : loss_sum, examples)
      for (int w = 0; w < workers; ++w) {
        Rng rng(MixSeed(config.seed,
                        static_cast<std::uint64_t>(epoch) * 1000003u + static_cast<std::uint64_t>(w)));
        const std::size_t begin = n * static_cast<std::size_t>(w) / workers;
        const std::size_t end = n * static_cast<std::size_t>(w + 1) / workers;
        auto [l, e] = model.Pass<AtomicAccess>(begin, end, rng, processed, failed,
                                               failed_step);
        loss_sum += l;
        examples += e;
      }
    }
    if (failed.load()) {
      throw Error(ErrorCode::kNumerical,
                  "non-finite loss at step " + std::to_string(failed_step.load()) +
                      " (epoch " + std::to_string(epoch) + ")");
    }
    stats.epoch_mean_loss.push_back(examples ? loss_sum / static_cast<double>(examples)
                                             : 0.0);
  }
  return model.Finish(std::move(stats));
}

}  // namespace finhyper
