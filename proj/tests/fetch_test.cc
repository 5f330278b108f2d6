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

#include <string>
#include <atomic>
#include <thread>

#include <gtest/gtest.h>

#include "finhyper/error.h"
#include "finhyper/fetch.h"
#include "finhyper/ontology.h"
#include "httplib.h"
#include "test_util.h"

namespace finhyper {
namespace {

using testing::ReadFile;
using testing::TempDir;
using testing::WriteFile;

constexpr char kBondsPage[] = R"(<html><body>
<h1>Bonds</h1>
<h2>Definition</h2><p>A bond is a debt instrument &amp; a promise.</p>
<h2>Synonyms</h2><ul><li>debt security</li><li>bond issue</li></ul>
<h2>Direct subclasses</h2><ul><li><a href="/callable">Callable bond</a></li>
<li><a href="/bare">Bare</a></li></ul>
</body></html>)";

constexpr char kCallablePage[] = R"(<html><body>
<h1>Callable bond</h1>
<h3>Definition</h3><p>A bond the issuer may redeem early.</p>
</body></html>)";

constexpr char kBarePage[] = "<html><body><h1>Bare</h1><p>Nothing here.</p></body></html>";

class FetchTest : public ::testing::Test {
 protected:
  void SetUp() override {
    server_.Get("/bonds", [this](const httplib::Request&, httplib::Response& res) {
      ++hits_;
      res.set_content(kBondsPage, "text/html");
    });
    server_.Get("/callable", [this](const httplib::Request&, httplib::Response& res) {
      ++hits_;
      res.set_content(kCallablePage, "text/html");
    });
    server_.Get("/bare", [this](const httplib::Request&, httplib::Response& res) {
      ++hits_;
      res.set_content(kBarePage, "text/html");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  void TearDown() override {
    server_.stop();
    thread_.join();
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }

  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> hits_{0};
};

TEST(ParseConceptPageTest, OnlyDefinition) {
  const OntologyRecord r = ParseConceptPage(kCallablePage, "/callable");
  EXPECT_EQ(r.iri, "/callable");
  EXPECT_EQ(r.label, "Callable bond");
  EXPECT_EQ(r.definition, "A bond the issuer may redeem early.");
  EXPECT_FALSE(r.explanatory_note.has_value());
  EXPECT_FALSE(r.generated_description.has_value());
  EXPECT_TRUE(r.synonyms.empty());
}

TEST(ParseConceptPageTest, SectionsAndLinks) {
  const OntologyRecord r = ParseConceptPage(kBondsPage, "/bonds");
  EXPECT_EQ(r.label, "Bonds");
  EXPECT_EQ(r.definition, "A bond is a debt instrument & a promise.");
  EXPECT_EQ(r.synonyms, (std::vector<std::string>{"debt security", "bond issue"}));
  EXPECT_EQ(r.subclasses, (std::vector<std::string>{"/callable", "/bare"}));
}

TEST_F(FetchTest, DownloadsResumesAndWarns) {
  TempDir dir("fetch");
  const auto out = dir / "dump.jsonl";
  const FetchStats first = FetchPages(url(), {{Tag::kBonds, "/bonds"}}, out);
  EXPECT_EQ(first.requests, 3u);
  EXPECT_EQ(hits_.load(), 3);
  ASSERT_EQ(first.warnings.size(), 1u);
  EXPECT_NE(first.warnings[0].find("/bare"), std::string::npos);

  const OntologyDump dump = LoadDump(out);
  ASSERT_EQ(dump.records.size(), 3u);
  EXPECT_TRUE(dump.dangling.empty());
  const OntologyRecord& bare = dump.records[2];
  EXPECT_EQ(bare.iri, "/bare");
  EXPECT_FALSE(bare.definition || bare.explanatory_note || bare.generated_description);

  // The dump mines like any offline dump.
  EXPECT_EQ(Mine(dump.records, {Tag::kBonds}).corpus.entries.size(), 4u);

  const std::string before = ReadFile(out);
  const FetchStats again = FetchPages(url(), {{Tag::kBonds, "/bonds"}}, out);
  EXPECT_EQ(again.requests, 0u);
  EXPECT_EQ(again.reused, 3u);
  EXPECT_EQ(hits_.load(), 3);
  EXPECT_EQ(ReadFile(out), before);
}

TEST_F(FetchTest, DepthLimitStopsCrawl) {
  TempDir dir("fetch");
  FetchOptions options;
  options.max_depth = 0;
  const FetchStats s = FetchPages(url(), {{Tag::kBonds, "/bonds"}}, dir / "d.jsonl", options);
  EXPECT_EQ(s.requests, 1u);
}

TEST_F(FetchTest, MissingPageIsNetworkErrorAndKeepsPartialOutput) {
  TempDir dir("fetch");
  const auto out = dir / "dump.jsonl";
  try {
    FetchPages(url(), {{Tag::kBonds, "/bonds"}, {Tag::kSwap, "/swap"}}, out);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNetwork);
  }
  EXPECT_EQ(LoadDump(out).records.size(), 1u);
}

TEST(FetchUnreachableTest, ErrorLeavesPriorFileIntact) {
  TempDir dir("fetch");
  const auto out = dir / "dump.jsonl";
  const std::string prior = R"({"iri":"/done","label":"Done"})"
                            "\n";
  WriteFile(out, prior);
  FetchOptions options;
  options.timeout_seconds = 2;
  try {
    FetchPages("http://127.0.0.1:1", {{Tag::kBonds, "/bonds"}}, out, options);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNetwork);
  }
  EXPECT_EQ(ReadFile(out), prior);

  const auto fresh = dir / "fresh.jsonl";
  EXPECT_THROW(FetchPages("http://127.0.0.1:1", {{Tag::kBonds, "/bonds"}}, fresh, options),
               Error);
  EXPECT_TRUE(!std::filesystem::exists(fresh) || std::filesystem::file_size(fresh) == 0);
}

}  // namespace
}  // namespace finhyper
