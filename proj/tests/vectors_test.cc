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

#include <cmath>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "finhyper/error.h"
#include "finhyper/rng.h"
#include "finhyper/vectors.h"
#include "test_util.h"

namespace finhyper {
namespace {

using testing::TempDir;
using testing::WriteFile;

TEST(VectorTableTest, AddRejectsBadRows) {
  VectorTable t(2);
  t.Add("a", std::vector<double>{1, 2});
  EXPECT_THROW(t.Add("a", std::vector<double>{1, 2}), Error);
  EXPECT_THROW(t.Add("b", std::vector<double>{1, 2, 3}), Error);
  EXPECT_THROW(t.Add("c", std::vector<double>{NAN, 0}), Error);
  EXPECT_EQ(t.size(), 1u);
  EXPECT_FALSE(t.Find("b").has_value());
}

TEST(Word2VecTest, SaveLoadWithinTolerance) {
  Rng rng(4);
  VectorTable t(300);
  for (int w = 0; w < 50; ++w) {
    std::vector<double> v(300);
    for (auto& x : v) x = rng.Gaussian();
    t.Add("tok" + std::to_string(w), v);
  }
  TempDir dir("w2v");
  SaveWord2Vec(t, dir / "v.vec", "# header");
  const VectorTable back = LoadWord2Vec(dir / "v.vec");
  ASSERT_EQ(back.size(), t.size());
  ASSERT_EQ(back.dimension(), 300u);
  EXPECT_EQ(back.keys(), t.keys());
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t d = 0; d < 300; ++d) {
      EXPECT_LE(std::abs(back.row(i)[d] - t.row(i)[d]), 1e-6);
    }
  }
}

TEST(Word2VecTest, HeaderCountMismatchIsError) {
  TempDir dir("w2v");
  std::string body = "2 300\n";
  for (int r = 0; r < 3; ++r) {
    body += "w" + std::to_string(r);
    for (int d = 0; d < 300; ++d) body += " 0.5";
    body += "\n";
  }
  WriteFile(dir / "v.vec", body);
  try {
    ReadWord2Vec(dir / "v.vec");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
  }
}

TEST(Word2VecTest, ShortRowNamesLine) {
  TempDir dir("w2v");
  WriteFile(dir / "v.vec", "2 3\na 1 2 3\nb 1 2\n");
  try {
    ReadWord2Vec(dir / "v.vec");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(VectorMathTest, CosineOfZeroIsZero) {
  const std::vector<double> z{0, 0}, a{1, 0}, b{1, 1};
  EXPECT_EQ(Cosine(z, a), 0.0);
  EXPECT_DOUBLE_EQ(Cosine(a, a), 1.0);
  EXPECT_NEAR(Cosine(a, b), 1 / std::sqrt(2.0), 1e-15);
}

}  // namespace
}  // namespace finhyper
