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

#ifndef PTKIT_MIX_H_
#define PTKIT_MIX_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ptkit/corpus.h"

namespace ptkit {

// Near-duplicate cluster-size ranges that share an upsampling weight.
enum class DupBucket { kB1, kB2_5, kB6_100, kB101_1000, kB1000plus };

std::string_view to_string(DupBucket bucket);

// Accepts the names produced by to_string ("1", "2-5", "6-100", "101-1000",
// ">1000").
std::optional<DupBucket> parse_dup_bucket(std::string_view name);

// Throws std::invalid_argument for dup_count < 1.
DupBucket bucket_of(std::int64_t dup_count);

// CommonCrawl: 1, 3, 5, 8, 10 by bucket. Other sources: 1 when unique, 2 when
// duplicated.
int weight_of(DupBucket bucket, SourceClass source_class);

class WeightTable {
 public:
  // The default table is weight_of().
  WeightTable() = default;

  // Throws std::invalid_argument for non-positive weights or a B1 weight
  // other than 1.
  void set(DupBucket bucket, SourceClass source_class, int weight);
  int at(DupBucket bucket, SourceClass source_class) const;

 private:
  std::map<std::pair<DupBucket, SourceClass>, int> overrides_;
};

struct GroupStats {
  std::string group;
  std::uint64_t tokens = 0;
  DupBucket bucket = DupBucket::kB1;
  SourceClass source_class = SourceClass::kCommonCrawl;
};

struct ManifestRow {
  std::string group;
  std::uint64_t raw_tokens = 0;
  int weight = 1;
  std::uint64_t weighted_tokens = 0;
  double proportion = 0.0;
};

struct MixManifest {
  std::vector<ManifestRow> rows;
};

// Throws std::invalid_argument when no group has tokens.
MixManifest build_manifest(std::span<const GroupStats> groups,
                           const WeightTable& weights = {});

// Largest-remainder apportionment of `target_tokens` by weighted token mass.
// Quotas always sum to exactly `target_tokens`.
std::vector<std::uint64_t> sample_plan(const MixManifest& manifest,
                                       std::uint64_t target_tokens);

}  // namespace ptkit

#endif  // PTKIT_MIX_H_
