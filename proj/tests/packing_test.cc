// Copyright 2026 The ptkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ptkit/packing.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.h"

namespace ptkit {
namespace {

std::vector<PackInput> inputs_of(const std::vector<std::uint64_t>& lengths) {
  std::vector<PackInput> in;
  for (std::size_t i = 0; i < lengths.size(); ++i) in.push_back({"d" + std::to_string(i), lengths[i]});
  return in;
}

std::vector<std::pair<std::vector<std::uint64_t>, std::uint64_t>> shape_of(
    const std::vector<PackedSequence>& seqs) {
  std::vector<std::pair<std::vector<std::uint64_t>, std::uint64_t>> out;
  for (const auto& s : seqs) {
    std::vector<std::uint64_t> items;
    for (const auto& e : s.entries) items.push_back(e.length);
    out.emplace_back(items, s.padding);
  }
  return out;
}

TEST(PackOnline, SmallExample) {
  const std::vector<std::uint64_t> lengths = {5, 3, 4, 2};
  const auto r = pack_online(inputs_of(lengths), 8, 2);
  ASSERT_EQ(r.sequences.size(), 2u);
  EXPECT_EQ(r.stats.padding_tokens, 2u);
  EXPECT_DOUBLE_EQ(r.stats.padding_ratio, 2.0 / 16.0);
  EXPECT_EQ(r.stats.truncation_ratio, 0.0);
  EXPECT_EQ(shape_of(r.sequences), oracle::simulate_best_fit(lengths, 8, 2).sealed);
}

TEST(PackOnline, ExactFitAndSkip) {
  auto r = pack_online(inputs_of({8, 4, 4}), 8, 4);
  ASSERT_EQ(r.sequences.size(), 2u);
  EXPECT_EQ(r.stats.padding_tokens, 0u);

  r = pack_online(inputs_of({9, 3}), 8, 4);
  EXPECT_EQ(r.stats.docs_skipped, 1u);
  EXPECT_EQ(r.stats.docs_packed, 1u);
  ASSERT_EQ(r.sequences.size(), 1u);
  EXPECT_EQ(r.sequences[0].entries[0].id, "d1");
  EXPECT_EQ(r.sequences[0].padding, 5u);
}

TEST(PackOnline, Errors) {
  EXPECT_THROW(pack_online(inputs_of({0}), 8, 4), std::invalid_argument);
  EXPECT_THROW(pack_online(inputs_of({1}), 0, 4), std::invalid_argument);
  EXPECT_THROW(pack_online(inputs_of({1}), 8, 0), std::invalid_argument);
}

TEST(PackOnline, StreamingSinkSealsEarly) {
  std::vector<PackedSequence> got;
  OnlinePacker packer(10, 2, [&got](PackedSequence&& s) { got.push_back(std::move(s)); });
  packer.push({"a", 6});
  packer.push({"b", 7});
  EXPECT_EQ(packer.open_bins(), 2u);
  EXPECT_TRUE(got.empty());
  packer.push({"c", 9});  // table full: the fullest bin (b) is sealed
  ASSERT_EQ(got.size(), 1u);
  EXPECT_EQ(got[0].entries[0].id, "b");
  packer.push({"d", 4});  // fills a exactly
  ASSERT_EQ(got.size(), 2u);
  EXPECT_EQ(got[1].entries.size(), 2u);
  packer.finish();
  EXPECT_EQ(got.size(), 3u);
  EXPECT_EQ(packer.open_bins(), 0u);
}

TEST(PackStatsFn, Examples) {
  const std::vector<PackedSequence> seqs = {{8, {{"a", 6}}, 2}, {8, {{"b", 8}}, 0}, {8, {{"c", 4}}, 4}};
  const auto s = pack_stats(std::span(seqs).first(1));
  EXPECT_DOUBLE_EQ(s.padding_ratio, 0.25);
  EXPECT_DOUBLE_EQ(pack_stats(seqs).padding_ratio, 6.0 / 24.0);
  EXPECT_EQ(pack_stats({}).padding_ratio, 0.0);
}

TEST(OptimalBins, Examples) {
  const std::vector<std::uint64_t> a = {5, 3, 4, 2};
  EXPECT_EQ(optimal_bins(a, 8), 2u);
  const std::vector<std::uint64_t> b = {8, 8};
  EXPECT_EQ(optimal_bins(b, 8), 2u);
  EXPECT_EQ(optimal_bins({}, 8), 0u);
  const std::vector<std::uint64_t> many(15, 1);
  EXPECT_THROW(optimal_bins(many, 8), std::invalid_argument);
  const std::vector<std::uint64_t> too_long = {9};
  EXPECT_THROW(optimal_bins(too_long, 8), std::invalid_argument);
}

TEST(OptimalBins, MatchesEnumeration) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const std::uint64_t cap = 5 + rng() % 20;
    std::vector<std::uint64_t> items(1 + rng() % 9);
    for (auto& x : items) x = 1 + rng() % cap;
    ASSERT_EQ(optimal_bins(items, cap), oracle::min_bins_enumerate(items, cap));
  }
}

TEST(PackOnline, MatchesSimulatorAndConserves) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint64_t cap = 8 + rng() % 200;
    const std::size_t max_open = 1 + rng() % 8;
    std::vector<std::uint64_t> lengths(rng() % 300);
    for (auto& x : lengths) x = 1 + rng() % (cap + cap / 4);
    const auto inputs = inputs_of(lengths);
    const auto r = pack_online(inputs, cap, max_open);
    const auto sim = oracle::simulate_best_fit(lengths, cap, max_open);
    ASSERT_EQ(shape_of(r.sequences), sim.sealed);
    ASSERT_EQ(r.stats.docs_skipped, sim.skipped);

    std::multiset<std::string> packed;
    for (const auto& s : r.sequences) {
      std::uint64_t used = 0;
      for (const auto& e : s.entries) {
        packed.insert(e.id);
        used += e.length;
      }
      ASSERT_EQ(used + s.padding, cap);
    }
    std::multiset<std::string> expected;
    for (const auto& in : inputs) {
      if (in.length <= cap) expected.insert(in.id);
    }
    ASSERT_EQ(packed, expected);
    ASSERT_EQ(r.sequences, pack_online(inputs, cap, max_open).sequences);
  }
}

TEST(PackOnline, WithinBestFitBound) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint64_t cap = 20 + rng() % 80;
    std::vector<std::uint64_t> lengths(1 + rng() % 14);
    for (auto& x : lengths) x = 1 + rng() % cap;
    const auto r = pack_online(inputs_of(lengths), cap, lengths.size());
    const auto opt = optimal_bins(lengths, cap);
    ASSERT_LE(r.sequences.size(), static_cast<std::size_t>(std::floor(1.7 * opt)) + 1);
  }
}

}  // namespace
}  // namespace ptkit
