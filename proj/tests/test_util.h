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

#ifndef FINHYPER_TESTS_TEST_UTIL_H_
#define FINHYPER_TESTS_TEST_UTIL_H_

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "finhyper/ontology.h"
#include "finhyper/rng.h"
#include "finhyper/tags.h"

namespace finhyper::testing {

// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& name) {
    path_ = std::filesystem::temp_directory_path() /
            ("finhyper_" + name + "_" + std::to_string(counter_++) + "_" +
             std::to_string(::getpid()));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  static inline int counter_ = 0;
  std::filesystem::path path_;
};

inline void WriteFile(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::filesystem::path DataDir() { return FINHYPER_TEST_DATA_DIR; }

// A random corpus of `entries` definitions, each of 1..4 short sentences.
inline DefinitionCorpus RandomCorpus(Rng& rng, std::size_t entries) {
  static const char* kWords[] = {"alpha", "beta", "gamma", "delta", "rate", "bond", "index"};
  DefinitionCorpus corpus;
  for (std::size_t e = 0; e < entries; ++e) {
    MinedDefinition d;
    const std::size_t sentences = 1 + rng.Below(4);
    for (std::size_t s = 0; s < sentences; ++s) {
      const std::size_t words = 1 + rng.Below(5);
      for (std::size_t w = 0; w < words; ++w) {
        if (w > 0) d.text += ' ';
        d.text += kWords[rng.Below(std::size(kWords))];
      }
      d.text += ". ";
    }
    d.tag = TagFromIndex(rng.Below(kNumTags));
    d.depth = static_cast<int>(rng.Below(3));
    d.source_iri = "iri:" + std::to_string(e);
    d.property = TextProperty::kDefinition;
    corpus.entries.push_back(std::move(d));
  }
  corpus.Recount();
  return corpus;
}

}  // namespace finhyper::testing

#endif  // FINHYPER_TESTS_TEST_UTIL_H_
