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

#ifndef FINHYPER_FETCH_H_
#define FINHYPER_FETCH_H_

#include <chrono>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "finhyper/ontology.h"
#include "finhyper/tags.h"

namespace finhyper {

// A seed tag and the path of its concept page under the base URL.
struct FetchSeed {
  Tag tag;
  std::string path;
};

struct FetchOptions {
  int max_depth = 2;
  bool follow_instances = false;
  // Requests are spaced by at least this much; values below 500 ms are raised.
  std::chrono::milliseconds min_interval{500};
  int timeout_seconds = 10;
};

struct FetchStats {
  std::size_t requests = 0;
  std::size_t reused = 0;
  std::vector<std::string> warnings;
};

// Converts one concept page into a record. Recognized section headings
// (<h2>/<h3>): Definition, Explanatory Note, Generated Description,
// Synonym(s), Direct subclasses, Instances. The label comes from <h1>.
// Links inside the subclass and instance sections become iris (their href).
OntologyRecord ParseConceptPage(std::string_view html, std::string iri);

// Breadth-first download from the seed pages, appending one JSONL record per
// page to `out` as soon as it is fetched. Records already present in `out`
// are reused without a request, so an interrupted run resumes where it
// stopped. Throws Error(kNetwork) on a failed request; everything written
// before the failure stays in place.
FetchStats FetchPages(const std::string& base_url, const std::vector<FetchSeed>& seeds,
                      const std::filesystem::path& out, const FetchOptions& options = {});

}  // namespace finhyper

#endif  // FINHYPER_FETCH_H_
