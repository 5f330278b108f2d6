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

#ifndef FINHYPER_ONTOLOGY_H_
#define FINHYPER_ONTOLOGY_H_

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "finhyper/tags.h"

namespace finhyper {

// One concept page of the ontology dump.
struct OntologyRecord {
  std::string iri;
  std::string label;
  std::optional<std::string> definition;
  std::optional<std::string> explanatory_note;
  std::optional<std::string> generated_description;
  std::vector<std::string> synonyms;
  std::vector<std::string> subclasses;
  std::vector<std::string> instances;

  bool operator==(const OntologyRecord&) const = default;
};

enum class LinkKind { kSubclass, kInstance };

struct DanglingReference {
  std::string from_iri;
  std::string to_iri;
  LinkKind kind;
};

struct OntologyDump {
  std::vector<OntologyRecord> records;
  std::vector<DanglingReference> dangling;
};

// Reads the JSONL dump. Absent keys mean empty. Throws Error on an unreadable
// file, a malformed line (message carries the line number) or a duplicate iri.
OntologyDump LoadDump(const std::filesystem::path& path);

// Parses one dump line. Throws Error(kParse) on malformed input.
OntologyRecord ParseRecordLine(std::string_view line);
std::string RecordToJsonLine(const OntologyRecord& record);

std::vector<DanglingReference> FindDangling(
    const std::vector<OntologyRecord>& records);

enum class TextProperty {
  kDefinition,
  kExplanatoryNote,
  kGeneratedDescription,
  kSynonym,
};

std::string_view TextPropertyName(TextProperty property);
std::optional<TextProperty> ParseTextProperty(std::string_view name);

struct MinedDefinition {
  std::string text;
  Tag tag;
  int depth = 0;
  std::string source_iri;
  TextProperty property;

  bool operator==(const MinedDefinition&) const = default;
};

struct DefinitionCorpus {
  std::vector<MinedDefinition> entries;
  std::array<std::size_t, kNumTags> per_tag_counts{};

  void Recount();
  bool operator==(const DefinitionCorpus&) const = default;
};

// A record that more than one seed reaches within the depth limit.
struct AssignmentConflict {
  std::string iri;
  Tag assigned;
  std::vector<std::pair<Tag, int>> candidates;  // (seed, depth), canonical order
};

struct MineOptions {
  int max_depth = 2;
  bool expand_instances = false;
};

struct MineResult {
  DefinitionCorpus corpus;
  std::vector<AssignmentConflict> conflicts;
};

// Breadth-first walk from every seed over subclass links (and instance links
// when enabled), collecting each non-empty textual property of every record
// within max_depth. A record reachable from several seeds goes to the seed at
// minimal depth, ties going to the lower canonical index. Output order is
// (tag, depth, iri, property) and does not depend on record order.
//
// Throws Error(kNotFound) when a seed has no record whose lowercased label
// matches, and Error(kInvalidArgument) when it matches more than one.
MineResult Mine(const std::vector<OntologyRecord>& records,
                const std::vector<Tag>& seeds, const MineOptions& options = {});

// TSV with header `text\ttag\tdepth\tsource_iri\tproperty`; text is
// backslash-escaped. Comment lines ('#') are skipped on read.
void WriteCorpusTsv(const DefinitionCorpus& corpus, std::ostream& out);
DefinitionCorpus ReadCorpusTsv(const std::filesystem::path& path);

}  // namespace finhyper

#endif  // FINHYPER_ONTOLOGY_H_
