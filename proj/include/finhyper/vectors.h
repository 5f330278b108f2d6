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

#ifndef FINHYPER_VECTORS_H_
#define FINHYPER_VECTORS_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace finhyper {

class SubwordTable;

// Associative map from a key (token or text) to a fixed-dimension vector.
// Rows are stored contiguously in insertion order.
class VectorTable {
 public:
  VectorTable() = default;
  explicit VectorTable(std::size_t dimension) : dimension_(dimension) {}

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return keys_.size(); }
  bool empty() const { return keys_.empty(); }

  // Throws Error(kInvalidArgument) on a length mismatch, a non-finite value
  // or a duplicate key.
  void Add(std::string key, std::span<const double> vector);

  std::optional<std::span<const double>> Find(std::string_view key) const;
  bool Contains(std::string_view key) const { return index_.count(std::string(key)) > 0; }

  const std::vector<std::string>& keys() const { return keys_; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * dimension_, dimension_};
  }

  // Present only for subword-enriched word models.
  const SubwordTable* subwords() const { return subwords_.get(); }
  void set_subwords(std::shared_ptr<const SubwordTable> subwords) {
    subwords_ = std::move(subwords);
  }

 private:
  std::size_t dimension_ = 0;
  std::vector<std::string> keys_;
  std::vector<double> data_;
  std::unordered_map<std::string, std::size_t> index_;
  std::shared_ptr<const SubwordTable> subwords_;
};

// word2vec text format: "<count> <dimension>" then "<token> v1 ... vd" with
// six decimals. `header_comment`, when non-empty, is written first as its
// own line; readers in this project skip leading '#' lines.
void WriteWord2Vec(const VectorTable& table, std::ostream& out,
                   const std::string& header_comment = {});

// Throws Error(kParse) on a header/row-count mismatch or a row of the wrong
// dimension (the message names the line and token).
VectorTable ReadWord2Vec(const std::filesystem::path& path);

// Saves `path` and, for subword tables, the "<path>.subword" sidecar.
void SaveWord2Vec(const VectorTable& table, const std::filesystem::path& path,
                  const std::string& header_comment = {});

// Loads `path` and attaches the "<path>.subword" sidecar when one exists.
VectorTable LoadWord2Vec(const std::filesystem::path& path);

double Dot(std::span<const double> a, std::span<const double> b);
double Norm(std::span<const double> a);
// Zero when either vector has zero norm.
double Cosine(std::span<const double> a, std::span<const double> b);

}  // namespace finhyper

#endif  // FINHYPER_VECTORS_H_
