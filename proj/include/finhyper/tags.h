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

#ifndef FINHYPER_TAGS_H_
#define FINHYPER_TAGS_H_

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace finhyper {

// The 17 hypernym tags, in canonical order. The numeric value of each
// enumerator is its canonical index and is used for all tie-breaking.
enum class Tag : std::uint8_t {
  kBonds = 0,
  kForward,
  kFunds,
  kFuture,
  kMMIs,
  kOption,
  kStocks,
  kSwap,
  kEquityIndex,
  kCreditIndex,
  kSecuritiesRestrictions,
  kParametricSchedules,
  kDebtPricingAndYields,
  kCreditEvents,
  kStockCorporation,
  kCentralSecuritiesDepository,
  kRegulatoryAgency,
};

inline constexpr std::size_t kNumTags = 17;

inline constexpr std::array<std::string_view, kNumTags> kTagNames = {
    "Bonds",
    "Forward",
    "Funds",
    "Future",
    "MMIs",
    "Option",
    "Stocks",
    "Swap",
    "Equity Index",
    "Credit Index",
    "Securities restrictions",
    "Parametric schedules",
    "Debt pricing and yields",
    "Credit Events",
    "Stock Corporation",
    "Central Securities Depository",
    "Regulatory Agency",
};

constexpr std::size_t TagIndex(Tag tag) { return static_cast<std::size_t>(tag); }
constexpr Tag TagFromIndex(std::size_t index) { return static_cast<Tag>(index); }
constexpr std::string_view TagName(Tag tag) { return kTagNames[TagIndex(tag)]; }

// Exact match on the canonical surface string.
std::optional<Tag> ParseTag(std::string_view name);

// Case-insensitive match, used where tags are looked up through ontology
// labels or user-typed flags.
std::optional<Tag> ParseTagLoose(std::string_view name);

// Like ParseTagLoose but throws Error(kInvalidArgument) naming the input.
Tag RequireTag(std::string_view name);

// All 17 tags in canonical order.
std::vector<Tag> AllTags();

}  // namespace finhyper

#endif  // FINHYPER_TAGS_H_
