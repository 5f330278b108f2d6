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

#include "finhyper/ontology.h"

#include <algorithm>
#include <deque>
#include <ostream>
#include <set>
#include <tuple>
#include <unordered_map>

#include "finhyper/error.h"
#include "finhyper/io.h"
#include "finhyper/strings.h"
#include "json.hpp"

namespace finhyper {

using nlohmann::json;

namespace {

std::optional<std::string> OptionalString(const json& obj, const char* key,
                                          std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    throw Error(ErrorCode::kParse, "line " + std::to_string(line) + ": key '" +
                                       key + "' must be a string");
  }
  return it->get<std::string>();
}

std::vector<std::string> StringList(const json& obj, const char* key,
                                    std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return {};
  if (!it->is_array()) {
    throw Error(ErrorCode::kParse, "line " + std::to_string(line) + ": key '" +
                                       key + "' must be an array");
  }
  std::vector<std::string> out;
  for (const auto& v : *it) {
    if (!v.is_string()) {
      throw Error(ErrorCode::kParse, "line " + std::to_string(line) +
                                         ": key '" + key +
                                         "' must contain only strings");
    }
    out.push_back(v.get<std::string>());
  }
  return out;
}

OntologyRecord ParseRecord(std::string_view text, std::size_t line) {
  json obj;
  try {
    obj = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse,
                "line " + std::to_string(line) + ": malformed JSON: " + e.what());
  }
  if (!obj.is_object()) {
    throw Error(ErrorCode::kParse,
                "line " + std::to_string(line) + ": expected a JSON object");
  }
  OntologyRecord r;
  auto iri = OptionalString(obj, "iri", line);
  if (!iri || iri->empty()) {
    throw Error(ErrorCode::kParse,
                "line " + std::to_string(line) + ": missing 'iri'");
  }
  r.iri = *iri;
  r.label = OptionalString(obj, "label", line).value_or("");
  r.definition = OptionalString(obj, "definition", line);
  r.explanatory_note = OptionalString(obj, "explanatory_note", line);
  r.generated_description = OptionalString(obj, "generated_description", line);
  r.synonyms = StringList(obj, "synonyms", line);
  r.subclasses = StringList(obj, "subclasses", line);
  r.instances = StringList(obj, "instances", line);
  return r;
}

bool NonEmpty(const std::optional<std::string>& s) {
  return s && !Trim(*s).empty();
}

}  // namespace

OntologyRecord ParseRecordLine(std::string_view line) {
  return ParseRecord(line, 1);
}

std::string RecordToJsonLine(const OntologyRecord& r) {
  json obj;
  obj["iri"] = r.iri;
  obj["label"] = r.label;
  obj["definition"] = r.definition ? json(*r.definition) : json(nullptr);
  obj["explanatory_note"] =
      r.explanatory_note ? json(*r.explanatory_note) : json(nullptr);
  obj["generated_description"] =
      r.generated_description ? json(*r.generated_description) : json(nullptr);
  obj["synonyms"] = r.synonyms;
  obj["subclasses"] = r.subclasses;
  obj["instances"] = r.instances;
  return obj.dump();
}

std::vector<DanglingReference> FindDangling(
    const std::vector<OntologyRecord>& records) {
  std::set<std::string_view> known;
  for (const auto& r : records) known.insert(r.iri);
  std::vector<DanglingReference> out;
  for (const auto& r : records) {
    for (const auto& c : r.subclasses) {
      if (!known.count(c)) out.push_back({r.iri, c, LinkKind::kSubclass});
    }
    for (const auto& c : r.instances) {
      if (!known.count(c)) out.push_back({r.iri, c, LinkKind::kInstance});
    }
  }
  return out;
}

OntologyDump LoadDump(const std::filesystem::path& path) {
  OntologyDump dump;
  std::unordered_map<std::string, std::size_t> first_line;
  for (const auto& line : ReadLines(path, /*skip_comments=*/false)) {
    if (Trim(line.text).empty()) continue;
    OntologyRecord r;
    try {
      r = ParseRecord(line.text, line.number);
    } catch (const Error& e) {
      throw Error(e.code(), path.string() + ": " + e.what());
    }
    auto [it, inserted] = first_line.emplace(r.iri, line.number);
    if (!inserted) {
      throw Error(ErrorCode::kParse,
                  path.string() + ": line " + std::to_string(line.number) +
                      ": duplicate iri '" +
                      r.iri + "' (first seen on line " +
                      std::to_string(it->second) + ")");
    }
    dump.records.push_back(std::move(r));
  }
  dump.dangling = FindDangling(dump.records);
  return dump;
}

std::string_view TextPropertyName(TextProperty property) {
  switch (property) {
    case TextProperty::kDefinition: return "definition";
    case TextProperty::kExplanatoryNote: return "explanatory_note";
    case TextProperty::kGeneratedDescription: return "generated_description";
    case TextProperty::kSynonym: return "synonym";
  }
  return "";
}

std::optional<TextProperty> ParseTextProperty(std::string_view name) {
  for (auto p : {TextProperty::kDefinition, TextProperty::kExplanatoryNote,
                 TextProperty::kGeneratedDescription, TextProperty::kSynonym}) {
    if (TextPropertyName(p) == name) return p;
  }
  return std::nullopt;
}

void DefinitionCorpus::Recount() {
  per_tag_counts.fill(0);
  for (const auto& e : entries) ++per_tag_counts[TagIndex(e.tag)];
}

MineResult Mine(const std::vector<OntologyRecord>& records,
                const std::vector<Tag>& seeds, const MineOptions& options) {
  if (options.max_depth < 0) {
    throw Error(ErrorCode::kInvalidArgument, "max_depth must be >= 0");
  }
  std::unordered_map<std::string_view, std::size_t> by_iri;
  for (std::size_t i = 0; i < records.size(); ++i) by_iri[records[i].iri] = i;

  std::set<Tag> unique_seeds(seeds.begin(), seeds.end());

  // depth_from[seed][record] for every record within max_depth of that seed.
  std::vector<std::pair<Tag, std::unordered_map<std::size_t, int>>> reach;
  for (Tag seed : unique_seeds) {
    const std::string want = NormalizeKey(TagName(seed));
    std::vector<std::size_t> matches;
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (NormalizeKey(records[i].label) == want) matches.push_back(i);
    }
    if (matches.empty()) {
      throw Error(ErrorCode::kNotFound, "seed '" + std::string(TagName(seed)) +
                                            "' has no record with that label");
    }
    if (matches.size() > 1) {
      throw Error(ErrorCode::kInvalidArgument,
                  "seed '" + std::string(TagName(seed)) + "' matches " +
                      std::to_string(matches.size()) + " records");
    }
    std::unordered_map<std::size_t, int> depth;
    std::deque<std::size_t> queue;
    depth[matches.front()] = 0;
    queue.push_back(matches.front());
    while (!queue.empty()) {
      const std::size_t at = queue.front();
      queue.pop_front();
      const int d = depth[at];
      if (d == options.max_depth) continue;
      auto visit = [&](const std::vector<std::string>& links) {
        for (const auto& link : links) {
          auto it = by_iri.find(link);
          if (it == by_iri.end()) continue;  // dangling; reported at load
          if (depth.emplace(it->second, d + 1).second) queue.push_back(it->second);
        }
      };
      visit(records[at].subclasses);
      if (options.expand_instances) visit(records[at].instances);
    }
    reach.emplace_back(seed, std::move(depth));
  }

  struct Assignment {
    Tag tag;
    int depth;
    std::vector<std::pair<Tag, int>> candidates;
  };
  std::unordered_map<std::size_t, Assignment> assigned;
  // reach is in canonical seed order, so the first seed at a given depth wins.
  for (const auto& [seed, depths] : reach) {
    for (const auto& [record, d] : depths) {
      auto [it, inserted] = assigned.try_emplace(record, Assignment{seed, d, {}});
      it->second.candidates.emplace_back(seed, d);
      if (!inserted && d < it->second.depth) {
        it->second.tag = seed;
        it->second.depth = d;
      }
    }
  }

  std::vector<std::size_t> order;
  order.reserve(assigned.size());
  for (const auto& [record, a] : assigned) order.push_back(record);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    const auto& ax = assigned.at(x);
    const auto& ay = assigned.at(y);
    return std::tuple(TagIndex(ax.tag), ax.depth, std::string_view(records[x].iri)) <
           std::tuple(TagIndex(ay.tag), ay.depth, std::string_view(records[y].iri));
  });

  MineResult result;
  for (std::size_t idx : order) {
    const OntologyRecord& r = records[idx];
    const Assignment& a = assigned.at(idx);
    if (a.candidates.size() > 1) {
      result.conflicts.push_back({r.iri, a.tag, a.candidates});
    }
    auto emit = [&](const std::optional<std::string>& text, TextProperty p) {
      if (NonEmpty(text)) {
        result.corpus.entries.push_back(
            {std::string(Trim(*text)), a.tag, a.depth, r.iri, p});
      }
    };
    emit(r.definition, TextProperty::kDefinition);
    emit(r.explanatory_note, TextProperty::kExplanatoryNote);
    emit(r.generated_description, TextProperty::kGeneratedDescription);
    std::set<std::string> seen;
    for (const auto& syn : r.synonyms) {
      std::string text(Trim(syn));
      if (text.empty() || !seen.insert(text).second) continue;
      result.corpus.entries.push_back(
          {std::move(text), a.tag, a.depth, r.iri, TextProperty::kSynonym});
    }
  }
  result.corpus.Recount();
  return result;
}

void WriteCorpusTsv(const DefinitionCorpus& corpus, std::ostream& out) {
  out << "text\ttag\tdepth\tsource_iri\tproperty\n";
  for (const auto& e : corpus.entries) {
    out << EscapeField(e.text) << '\t' << TagName(e.tag) << '\t' << e.depth
        << '\t' << EscapeField(e.source_iri) << '\t'
        << TextPropertyName(e.property) << '\n';
  }
}

DefinitionCorpus ReadCorpusTsv(const std::filesystem::path& path) {
  DefinitionCorpus corpus;
  bool header_seen = false;
  for (const auto& line : ReadLines(path)) {
    if (!header_seen) {
      header_seen = true;
      if (line.text.rfind("text\t", 0) == 0) continue;
    }
    if (line.text.empty()) continue;
    const auto fields = Split(line.text, '\t');
    auto fail = [&](const std::string& why) {
      return Error(ErrorCode::kParse, path.string() + ": line " +
                                          std::to_string(line.number) + ": " + why);
    };
    if (fields.size() != 5) throw fail("expected 5 tab-separated fields");
    auto tag = ParseTag(fields[1]);
    if (!tag) throw fail("unknown tag '" + fields[1] + "'");
    auto property = ParseTextProperty(fields[4]);
    if (!property) throw fail("unknown property '" + fields[4] + "'");
    int depth = 0;
    try {
      depth = std::stoi(fields[2]);
    } catch (const std::exception&) {
      throw fail("bad depth '" + fields[2] + "'");
    }
    corpus.entries.push_back({UnescapeField(fields[0]), *tag, depth,
                              UnescapeField(fields[3]), *property});
  }
  corpus.Recount();
  return corpus;
}

}  // namespace finhyper
