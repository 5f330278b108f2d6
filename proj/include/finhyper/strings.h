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

#ifndef FINHYPER_STRINGS_H_
#define FINHYPER_STRINGS_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace finhyper {

// ASCII lowercasing; bytes outside ASCII are left untouched.
std::string ToLower(std::string_view s);

std::string_view Trim(std::string_view s);

// Splits on runs of ASCII whitespace; no empty tokens.
std::vector<std::string> SplitWhitespace(std::string_view s);

// Splits on every occurrence of sep; keeps empty fields.
std::vector<std::string> Split(std::string_view s, char sep);

std::string Join(const std::vector<std::string>& parts, std::string_view sep);

// Lowercase + trim + collapse internal whitespace to single spaces. This is
// the key normalization shared by every text-keyed lookup.
std::string NormalizeKey(std::string_view s);

// Backslash escaping for TSV fields: \t, \n, \r and \\ .
std::string EscapeField(std::string_view s);
std::string UnescapeField(std::string_view s);

// 64-bit FNV-1a.
std::uint64_t Fnv1a64(std::string_view s);

// 32-bit FNV-1a; used for subword bucket hashing.
std::uint32_t Fnv1a32(std::string_view s);

std::string HexDigest(std::uint64_t v);

// Shortest decimal form that parses back to the same double.
std::string FormatDouble(double v);

}  // namespace finhyper

#endif  // FINHYPER_STRINGS_H_
