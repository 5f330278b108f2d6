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

#include "finhyper/vectors.h"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "finhyper/embeddings.h"
#include "finhyper/error.h"
#include "finhyper/io.h"
#include "finhyper/strings.h"

namespace finhyper {

void VectorTable::Add(std::string key, std::span<const double> vector) {
  if (vector.size() != dimension_) {
    throw Error(ErrorCode::kInvalidArgument,
                "vector for '" + key + "' has dimension " +
                    std::to_string(vector.size()) + ", expected " +
                    std::to_string(dimension_));
  }
  for (double v : vector) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "vector for '" + key + "' has a non-finite component");
    }
  }
  auto [it, inserted] = index_.emplace(key, keys_.size());
  if (!inserted) {
    throw Error(ErrorCode::kInvalidArgument, "duplicate key '" + key + "'");
  }
  keys_.push_back(std::move(key));
  data_.insert(data_.end(), vector.begin(), vector.end());
}

std::optional<std::span<const double>> VectorTable::Find(std::string_view key) const {
  auto it = index_.find(std::string(key));
  if (it == index_.end()) return std::nullopt;
  return row(it->second);
}

void WriteWord2Vec(const VectorTable& table, std::ostream& out,
                   const std::string& header_comment) {
  if (!header_comment.empty()) out << header_comment << '\n';
  out << table.size() << ' ' << table.dimension() << '\n';
  char buf[64];
  for (std::size_t i = 0; i < table.size(); ++i) {
    out << table.keys()[i];
    for (double v : table.row(i)) {
      std::snprintf(buf, sizeof(buf), " %.6f", v);
      out << buf;
    }
    out << '\n';
  }
}

namespace {

bool ParseDouble(std::string_view s, double& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool ParseSize(std::string_view s, std::size_t& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
}

}  // namespace

VectorTable ReadWord2Vec(const std::filesystem::path& path) {
  const auto lines = ReadLines(path);
  std::size_t i = 0;
  while (i < lines.size() && Trim(lines[i].text).empty()) ++i;
  if (i == lines.size()) {
    throw Error(ErrorCode::kParse, path.string() + ": missing header line");
  }
  const auto header = SplitWhitespace(lines[i].text);
  std::size_t count = 0;
  std::size_t dimension = 0;
  if (header.size() != 2 || !ParseSize(header[0], count) ||
      !ParseSize(header[1], dimension) || dimension == 0) {
    throw Error(ErrorCode::kParse, path.string() + ": line " +
                                       std::to_string(lines[i].number) +
                                       ": header must be '<count> <dimension>'");
  }
  VectorTable table(dimension);
  std::vector<double> values(dimension);
  std::size_t rows = 0;
  for (++i; i < lines.size(); ++i) {
    const auto& line = lines[i];
    if (Trim(line.text).empty()) continue;
    const auto fields = SplitWhitespace(line.text);
    const std::string where = path.string() + ": line " + std::to_string(line.number);
    if (fields.size() != dimension + 1) {
      throw Error(ErrorCode::kParse,
                  where + ": row '" + fields.front() + "' has " +
                      std::to_string(fields.size() - 1) + " values, expected " +
                      std::to_string(dimension));
    }
    for (std::size_t d = 0; d < dimension; ++d) {
      if (!ParseDouble(fields[d + 1], values[d]) || !std::isfinite(values[d])) {
        throw Error(ErrorCode::kParse, where + ": row '" + fields.front() +
                                           "' has a bad value '" +
                                           fields[d + 1] + "'");
      }
    }
    ++rows;
    if (rows > count) {
      throw Error(ErrorCode::kParse, where + ": more rows than the header's " +
                                         std::to_string(count));
    }
    try {
      table.Add(fields.front(), values);
    } catch (const Error& e) {
      throw Error(ErrorCode::kParse, where + ": " + e.what());
    }
  }
  if (rows != count) {
    throw Error(ErrorCode::kParse, path.string() + ": header declares " +
                                       std::to_string(count) + " rows, found " +
                                       std::to_string(rows));
  }
  return table;
}

void SaveWord2Vec(const VectorTable& table, const std::filesystem::path& path,
                  const std::string& header_comment) {
  {
    auto out = OpenForWrite(path);
    WriteWord2Vec(table, out, header_comment);
  }
  if (table.subwords() != nullptr) {
    auto out = OpenForWrite(path.string() + ".subword");
    if (!header_comment.empty()) out << header_comment << '\n';
    table.subwords()->Write(out);
  }
}

VectorTable LoadWord2Vec(const std::filesystem::path& path) {
  VectorTable table = ReadWord2Vec(path);
  const std::filesystem::path sidecar = path.string() + ".subword";
  if (std::filesystem::exists(sidecar)) {
    auto subwords = SubwordTable::Read(sidecar);
    if (subwords->dimension() != table.dimension()) {
      throw Error(ErrorCode::kParse, sidecar.string() +
                                         ": dimension differs from the vector file");
    }
    table.set_subwords(std::move(subwords));
  }
  return table;
}

double Dot(std::span<const double> a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double Norm(std::span<const double> a) { return std::sqrt(Dot(a, a)); }

double Cosine(std::span<const double> a, std::span<const double> b) {
  const double na = Norm(a);
  const double nb = Norm(b);
  if (na == 0.0 || nb == 0.0) return 0.0;
  return Dot(a, b) / (na * nb);
}

}  // namespace finhyper
