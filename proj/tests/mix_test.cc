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

#include "ptkit/mix.h"

#include <numeric>
#include <random>

#include <gtest/gtest.h>

namespace ptkit {
namespace {

TEST(BucketOf, Boundaries) {
  EXPECT_EQ(bucket_of(1), DupBucket::kB1);
  EXPECT_EQ(bucket_of(2), DupBucket::kB2_5);
  EXPECT_EQ(bucket_of(5), DupBucket::kB2_5);
  EXPECT_EQ(bucket_of(6), DupBucket::kB6_100);
  EXPECT_EQ(bucket_of(100), DupBucket::kB6_100);
  EXPECT_EQ(bucket_of(101), DupBucket::kB101_1000);
  EXPECT_EQ(bucket_of(1000), DupBucket::kB101_1000);
  EXPECT_EQ(bucket_of(1001), DupBucket::kB1000plus);
  EXPECT_THROW(bucket_of(0), std::invalid_argument);
  EXPECT_THROW(bucket_of(-3), std::invalid_argument);
}

TEST(BucketOf, MonotoneAndTotal) {
  DupBucket prev = bucket_of(1);
  for (std::int64_t n = 2; n < 5000; ++n) {
    const DupBucket b = bucket_of(n);
    EXPECT_GE(static_cast<int>(b), static_cast<int>(prev));
    prev = b;
  }
}

TEST(WeightOf, CommonCrawlLadder) {
  const auto cc = SourceClass::kCommonCrawl;
  EXPECT_EQ(weight_of(DupBucket::kB1, cc), 1);
  EXPECT_EQ(weight_of(DupBucket::kB2_5, cc), 3);
  EXPECT_EQ(weight_of(DupBucket::kB6_100, cc), 5);
  EXPECT_EQ(weight_of(DupBucket::kB101_1000, cc), 8);
  EXPECT_EQ(weight_of(DupBucket::kB1000plus, cc), 10);
}

TEST(WeightOf, OtherSourcesDoubleWhenDuplicated) {
  for (auto sc : {SourceClass::kCurated, SourceClass::kCode, SourceClass::kSynthetic}) {
    EXPECT_EQ(weight_of(DupBucket::kB1, sc), 1);
    for (auto b : {DupBucket::kB2_5, DupBucket::kB6_100, DupBucket::kB101_1000,
                   DupBucket::kB1000plus}) {
      EXPECT_EQ(weight_of(b, sc), 2);
    }
  }
}

TEST(WeightTable, Overrides) {
  WeightTable t;
  t.set(DupBucket::kB2_5, SourceClass::kCode, 4);
  EXPECT_EQ(t.at(DupBucket::kB2_5, SourceClass::kCode), 4);
  EXPECT_EQ(t.at(DupBucket::kB2_5, SourceClass::kCommonCrawl), 3);
  EXPECT_THROW(t.set(DupBucket::kB1, SourceClass::kCode, 2), std::invalid_argument);
  EXPECT_THROW(t.set(DupBucket::kB6_100, SourceClass::kCode, 0), std::invalid_argument);
}

TEST(BuildManifest, Examples) {
  const std::vector<GroupStats> two = {{"uniq", 1000, DupBucket::kB1, SourceClass::kCommonCrawl},
                                       {"dup", 500, DupBucket::kB2_5, SourceClass::kCommonCrawl}};
  const auto m = build_manifest(two);
  ASSERT_EQ(m.rows.size(), 2u);
  EXPECT_DOUBLE_EQ(m.rows[0].proportion, 0.4);
  EXPECT_DOUBLE_EQ(m.rows[1].proportion, 0.6);
  EXPECT_EQ(m.rows[1].weight, 3);
  EXPECT_EQ(m.rows[1].weighted_tokens, 1500u);

  const std::vector<GroupStats> one = {{"only", 7, DupBucket::kB6_100, SourceClass::kCurated}};
  EXPECT_DOUBLE_EQ(build_manifest(one).rows[0].proportion, 1.0);

  const std::vector<GroupStats> unit = {{"a", 10, DupBucket::kB1, SourceClass::kCode},
                                        {"b", 30, DupBucket::kB1, SourceClass::kCurated}};
  const auto mu = build_manifest(unit);
  EXPECT_DOUBLE_EQ(mu.rows[0].proportion, 0.25);
  EXPECT_DOUBLE_EQ(mu.rows[1].proportion, 0.75);
}

TEST(BuildManifest, AllZeroThrows) {
  const std::vector<GroupStats> zero = {{"a", 0, DupBucket::kB1, SourceClass::kCode}};
  EXPECT_THROW(build_manifest(zero), std::invalid_argument);
  EXPECT_THROW(build_manifest({}), std::invalid_argument);
}

std::vector<GroupStats> random_groups(std::mt19937_64& rng, std::size_t n) {
  std::vector<GroupStats> groups;
  for (std::size_t i = 0; i < n; ++i) {
    groups.push_back({"g" + std::to_string(i), rng() % 1'000'000,
                      static_cast<DupBucket>(rng() % 5), static_cast<SourceClass>(rng() % 4)});
  }
  groups[0].tokens += 1;
  return groups;
}

TEST(BuildManifest, ProportionsSumToOneAndScaleInvariant) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    auto groups = random_groups(rng, 1 + rng() % 40);
    const auto m = build_manifest(groups);
    double sum = 0;
    for (const auto& row : m.rows) sum += row.proportion;
    EXPECT_NEAR(sum, 1.0, 1e-9);
    const std::uint64_t scale = 1 + rng() % 1000;
    for (auto& g : groups) g.tokens *= scale;
    const auto scaled = build_manifest(groups);
    for (std::size_t i = 0; i < m.rows.size(); ++i) {
      EXPECT_NEAR(scaled.rows[i].proportion, m.rows[i].proportion, 1e-15);
    }
  }
}

MixManifest manifest_from(std::vector<double> proportions) {
  MixManifest m;
  // Integer weighted masses proportional to the requested shares.
  for (double p : proportions) {
    m.rows.push_back({"g", 0, 1, static_cast<std::uint64_t>(p * 3'000'000), p});
  }
  return m;
}

TEST(SamplePlan, Examples) {
  EXPECT_EQ(sample_plan(manifest_from({0.4, 0.6}), 10), (std::vector<std::uint64_t>{4, 6}));
  const auto thirds = sample_plan(manifest_from({1.0 / 3, 1.0 / 3, 1.0 / 3}), 10);
  EXPECT_EQ(std::accumulate(thirds.begin(), thirds.end(), std::uint64_t{0}), 10u);
  EXPECT_EQ(thirds, (std::vector<std::uint64_t>{4, 3, 3}));
  EXPECT_EQ(sample_plan(manifest_from({0.4, 0.6}), 0), (std::vector<std::uint64_t>{0, 0}));
}

TEST(SamplePlan, QuotasAlwaysSumToTarget) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 500; ++trial) {
    const auto m = build_manifest(random_groups(rng, 1 + rng() % 30));
    const std::uint64_t target = rng() % 100'000'000'000ULL;
    const auto q = sample_plan(m, target);
    ASSERT_EQ(std::accumulate(q.begin(), q.end(), std::uint64_t{0}), target);
    for (std::size_t i = 0; i < q.size(); ++i) {
      const double ideal = m.rows[i].proportion * static_cast<double>(target);
      EXPECT_LE(std::abs(static_cast<double>(q[i]) - ideal), 1.0 + 1e-6 * ideal);
    }
  }
}

}  // namespace
}  // namespace ptkit
