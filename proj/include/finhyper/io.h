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

#ifndef FINHYPER_IO_H_
#define FINHYPER_IO_H_

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace finhyper {

// A data line together with its 1-based line number in the source file.
struct NumberedLine {
  std::size_t number;
  std::string text;
};

std::ifstream OpenForRead(const std::filesystem::path& path);
std::ofstream OpenForWrite(const std::filesystem::path& path);

// Reads all lines, stripping a trailing '\r'. Lines starting with '#' are
// skipped when skip_comments is set; such lines carry provenance and
// metadata in every artifact this project writes.
std::vector<NumberedLine> ReadLines(const std::filesystem::path& path,
                                    bool skip_comments = true);

// The first line of every artifact: tool version, digest of the settings
// that determine the payload, and the seed.
struct Provenance {
  std::string tool_version;
  std::string config_digest;
  std::uint64_t seed = 0;

  std::string HeaderLine() const;  // "# finhyper <ver> config=<hex> seed=<n>"
};

inline constexpr std::string_view kToolVersion = "0.1.0";

}  // namespace finhyper

#endif  // FINHYPER_IO_H_
