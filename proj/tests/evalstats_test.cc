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

#include "ptkit/evalstats.h"

#include <random>

#include <gtest/gtest.h>

#include "oracles.h"

namespace ptkit {
namespace {

TEST(PassAtK, Examples) {
  EXPECT_EQ(pass_at_k(10, 0, 3), 0.0);
  EXPECT_EQ(pass_at_k(10, 10, 3), 1.0);
  EXPECT_NEAR(pass_at_k(4, 2, 2), 5.0 / 6.0, 1e-15);
  EXPECT_THROW(pass_at_k(3, 1, 4), std::invalid_argument);
  EXPECT_THROW(pass_at_k(3, 4, 1), std::invalid_argument);
  EXPECT_THROW(pass_at_k(0, 0, 0), std::invalid_argument);
}

TEST(PassAtK, MatchesEnumeration) {
  for (unsigned n = 1; n <= 10; ++n) {
    for (unsigned c = 0; c <= n; ++c) {
      for (unsigned k = 1; k <= n; ++k) {
        ASSERT_NEAR(pass_at_k(n, c, k), oracle::pass_at_k_enumerate(n, c, k), 1e-12)
            << n << " " << c << " " << k;
      }
    }
  }
}

TEST(PassAtK, MonotoneAndPassAtOne) {
  for (std::uint64_t n = 1; n <= 64; ++n) {
    for (std::uint64_t c = 0; c <= n; ++c) {
      EXPECT_NEAR(pass_at_k(n, c, 1), static_cast<double>(c) / static_cast<double>(n), 1e-12);
      for (std::uint64_t k = 1; k < n; ++k) {
        ASSERT_LE(pass_at_k(n, c, k), pass_at_k(n, c, k + 1) + 1e-15);
        if (c < n) ASSERT_LE(pass_at_k(n, c, k), pass_at_k(n, c + 1, k) + 1e-15);
      }
    }
  }
}

TEST(PassAtK, LargeNStaysFinite) {
  const double p = pass_at_k(100000, 3, 64);
  EXPECT_GT(p, 0.0);
  EXPECT_LT(p, 0.01);
}

TEST(MemorizationRate, Arithmetic) {
  const std::vector<SentencePair> all = {{"a.", "a."}, {"b.", "b.\n"}};
  EXPECT_DOUBLE_EQ(memorization_rate(all), 100.0);
  const std::vector<SentencePair> none = {{"a.", "b."}, {"b.", " b."}};
  EXPECT_DOUBLE_EQ(memorization_rate(none), 0.0);
  const std::vector<SentencePair> quarter = {
      {"x.", "x."}, {"y.", "Y."}, {"z.", "z"}, {"w.", ""}};
  EXPECT_DOUBLE_EQ(memorization_rate(quarter), 25.0);
  EXPECT_THROW(memorization_rate({}), std::invalid_argument);
  const std::vector<SentencePair> empty_ref = {{"", ""}};
  EXPECT_THROW(memorization_rate(empty_ref), std::invalid_argument);
}

TEST(SplitSentences, PeriodFollowedByWhitespace) {
  EXPECT_EQ(split_sentences("Find x. Then y is 3.5 units.  Compute z"),
            (std::vector<std::string>{"Find x.", "Then y is 3.5 units.", "Compute z"}));
  EXPECT_TRUE(split_sentences("   ").empty());
  EXPECT_EQ(split_sentences("One."), (std::vector<std::string>{"One."}));
}

TEST(MeanOverRuns, Examples) {
  EXPECT_EQ(mean_over_runs(std::vector<double>{1, 1, 1}), 1.0);
  EXPECT_EQ(mean_over_runs(std::vector<double>{0, 1}), 0.5);
  EXPECT_THROW(mean_over_runs({}), std::invalid_argument);
}

TEST(MeanOverRuns, MatchesPreciseReference) {
  std::mt19937_64 rng(64);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> v(64);
    for (auto& x : v) x = u(rng);
    EXPECT_NEAR(mean_over_runs(v), static_cast<double>(oracle::precise_mean(v)), 1e-12);
  }
  const std::vector<double> cancel = {1e16, 1.0, -1e16, 3.0};
  EXPECT_DOUBLE_EQ(mean_over_runs(cancel), 1.0);
}

}  // namespace
}  // namespace ptkit
