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

#include "finhyper/fetch.h"

#include <algorithm>
#include <deque>
#include <fstream>
#include <map>
#include <set>
#include <thread>

#include "finhyper/error.h"
#include "finhyper/io.h"
#include "finhyper/strings.h"
#include "httplib.h"

namespace finhyper {

namespace {

std::string DecodeEntities(std::string_view s) {
  static const std::pair<std::string_view, char> kEntities[] = {
      {"&amp;", '&'}, {"&lt;", '<'}, {"&gt;", '>'}, {"&quot;", '"'}, {"&#39;", '\''},
      {"&nbsp;", ' '}};
  std::string out;
  for (std::size_t i = 0; i < s.size();) {
    bool matched = false;
    if (s[i] == '&') {
      for (const auto& [name, ch] : kEntities) {
        if (s.compare(i, name.size(), name) == 0) {
          out += ch;
          i += name.size();
          matched = true;
          break;
        }
      }
    }
    if (!matched) out += s[i++];
  }
  return out;
}

// Text content with tags removed; block-level tags become line breaks.
std::string StripTags(std::string_view html) {
  std::string out;
  for (std::size_t i = 0; i < html.size();) {
    if (html[i] == '<') {
      const std::size_t close = html.find('>', i);
      if (close == std::string_view::npos) break;
      const std::string tag = ToLower(html.substr(i + 1, close - i - 1));
      if (tag.rfind("li", 0) == 0 || tag.rfind("br", 0) == 0 || tag.rfind("/p", 0) == 0 ||
          tag.rfind("p", 0) == 0 || tag.rfind("/li", 0) == 0) {
        out += '\n';
      }
      i = close + 1;
    } else {
      out += html[i++];
    }
  }
  return DecodeEntities(out);
}

std::vector<std::string> Hrefs(std::string_view html) {
  std::vector<std::string> out;
  const std::string lower = ToLower(html);
  std::size_t pos = 0;
  while ((pos = lower.find("href=\"", pos)) != std::string::npos) {
    pos += 6;
    const std::size_t end = lower.find('"', pos);
    if (end == std::string::npos) break;
    out.push_back(DecodeEntities(html.substr(pos, end - pos)));
    pos = end;
  }
  return out;
}

std::string CollapseLines(std::string_view text) {
  std::vector<std::string> lines;
  for (const auto& l : Split(text, '\n')) {
    std::string t = Join(SplitWhitespace(l), " ");
    if (!t.empty()) lines.push_back(std::move(t));
  }
  return Join(lines, "\n");
}

}  // namespace

OntologyRecord ParseConceptPage(std::string_view html, std::string iri) {
  OntologyRecord r;
  r.iri = std::move(iri);
  const std::string lower = ToLower(html);
  if (auto h1 = lower.find("<h1"); h1 != std::string::npos) {
    const std::size_t open_end = lower.find('>', h1);
    const std::size_t close = lower.find("</h1>", open_end);
    if (open_end != std::string::npos && close != std::string::npos) {
      r.label = CollapseLines(StripTags(html.substr(open_end + 1, close - open_end - 1)));
    }
  }
  // Section boundaries: every <h2> or <h3> opening tag.
  std::vector<std::size_t> heads;
  for (std::size_t p = 0; (p = lower.find("<h", p)) != std::string::npos; ++p) {
    if (p + 2 < lower.size() && (lower[p + 2] == '2' || lower[p + 2] == '3')) heads.push_back(p);
  }
  heads.push_back(html.size());
  for (std::size_t i = 0; i + 1 < heads.size(); ++i) {
    const std::size_t open_end = lower.find('>', heads[i]);
    const std::size_t close = lower.find("</h", open_end);
    if (open_end == std::string::npos || close == std::string::npos || close > heads[i + 1]) {
      continue;
    }
    const std::string title =
        NormalizeKey(StripTags(html.substr(open_end + 1, close - open_end - 1)));
    const std::size_t body_start = lower.find('>', close) + 1;
    const std::string_view body = html.substr(body_start, heads[i + 1] - body_start);
    const std::string text = CollapseLines(StripTags(body));
    if (title == "definition") {
      r.definition = text;
    } else if (title == "explanatory note") {
      r.explanatory_note = text;
    } else if (title == "generated description") {
      r.generated_description = text;
    } else if (title == "synonym(s)" || title == "synonyms" || title == "synonym") {
      for (const auto& s : Split(text, '\n')) {
        if (!s.empty()) r.synonyms.push_back(s);
      }
    } else if (title == "direct subclasses") {
      r.subclasses = Hrefs(body);
    } else if (title == "instances") {
      r.instances = Hrefs(body);
    }
  }
  return r;
}

FetchStats FetchPages(const std::string& base_url, const std::vector<FetchSeed>& seeds,
                      const std::filesystem::path& out, const FetchOptions& options) {
  FetchStats stats;
  std::map<std::string, OntologyRecord> known;
  if (std::filesystem::exists(out)) {
    for (auto& r : LoadDump(out).records) {
      std::string iri = r.iri;
      known.emplace(std::move(iri), std::move(r));
    }
  }

  httplib::Client client(base_url);
  client.set_connection_timeout(options.timeout_seconds, 0);
  client.set_read_timeout(options.timeout_seconds, 0);
  const auto interval = std::max(options.min_interval, std::chrono::milliseconds(500));
  std::chrono::steady_clock::time_point last_request{};
  bool first_request = true;

  std::ofstream sink;
  auto append = [&](const OntologyRecord& r) {
    if (!sink.is_open()) {
      sink.open(out, std::ios::binary | std::ios::app);
      if (!sink) throw Error(ErrorCode::kIo, "cannot append to '" + out.string() + "'");
    }
    sink << RecordToJsonLine(r) << '\n';
    sink.flush();
  };

  std::deque<std::pair<std::string, int>> queue;
  std::set<std::string> queued;
  for (const auto& seed : seeds) {
    if (queued.insert(seed.path).second) queue.emplace_back(seed.path, 0);
  }
  while (!queue.empty()) {
    auto [iri, depth] = queue.front();
    queue.pop_front();
    const OntologyRecord* record = nullptr;
    if (auto it = known.find(iri); it != known.end()) {
      ++stats.reused;
      record = &it->second;
    } else {
      if (!first_request) {
        const auto wait = last_request + interval - std::chrono::steady_clock::now();
        if (wait.count() > 0) std::this_thread::sleep_for(wait);
      }
      first_request = false;
      last_request = std::chrono::steady_clock::now();
      ++stats.requests;
      auto res = client.Get(iri);
      if (!res) {
        throw Error(ErrorCode::kNetwork, "request for '" + base_url + iri +
                                             "' failed: " + httplib::to_string(res.error()));
      }
      if (res->status != 200) {
        throw Error(ErrorCode::kNetwork, "request for '" + base_url + iri +
                                             "' returned HTTP " + std::to_string(res->status));
      }
      OntologyRecord parsed = ParseConceptPage(res->body, iri);
      if (!parsed.definition && !parsed.explanatory_note && !parsed.generated_description &&
          parsed.synonyms.empty()) {
        stats.warnings.push_back("page '" + iri + "' has none of the four text properties");
      }
      append(parsed);
      record = &known.emplace(iri, std::move(parsed)).first->second;
    }
    if (depth >= options.max_depth) continue;
    auto enqueue = [&](const std::vector<std::string>& links) {
      for (const auto& link : links) {
        if (queued.insert(link).second) queue.emplace_back(link, depth + 1);
      }
    };
    enqueue(record->subclasses);
    if (options.follow_instances) enqueue(record->instances);
  }
  return stats;
}

}  // namespace finhyper
