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

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace ptkit {

std::string_view to_string(DupBucket bucket) {
  switch (bucket) {
    case DupBucket::kB1:
      return "1";
    case DupBucket::kB2_5:
      return "2-5";
    case DupBucket::kB6_100:
      return "6-100";
    case DupBucket::kB101_1000:
      return "101-1000";
    case DupBucket::kB1000plus:
      return ">1000";
  }
  return "1";
}

std::optional<DupBucket> parse_dup_bucket(std::string_view name) {
  for (auto b : {DupBucket::kB1, DupBucket::kB2_5, DupBucket::kB6_100,
                 DupBucket::kB101_1000, DupBucket::kB1000plus}) {
    if (name == to_string(b)) return b;
  }
  return std::nullopt;
}

DupBucket bucket_of(std::int64_t dup_count) {
  if (dup_count < 1) throw std::invalid_argument("dup_count must be >= 1");
  if (dup_count == 1) return DupBucket::kB1;
  if (dup_count <= 5) return DupBucket::kB2_5;
  if (dup_count <= 100) return DupBucket::kB6_100;
  if (dup_count <= 1000) return DupBucket::kB101_1000;
  return DupBucket::kB1000plus;
}

int weight_of(DupBucket bucket, SourceClass source_class) {
  if (bucket == DupBucket::kB1) return 1;
  if (source_class != SourceClass::kCommonCrawl) return 2;
  switch (bucket) {
    case DupBucket::kB2_5:
      return 3;
    case DupBucket::kB6_100:
      return 5;
    case DupBucket::kB101_1000:
      return 8;
    case DupBucket::kB1000plus:
      return 10;
    case DupBucket::kB1:
      break;
  }
  return 1;
}

void WeightTable::set(DupBucket bucket, SourceClass source_class, int weight) {
  if (weight < 1) throw std::invalid_argument("weights must be positive integers");
  if (bucket == DupBucket::kB1 && weight != 1) {
    throw std::invalid_argument("unique documents always carry weight 1");
  }
  overrides_[{bucket, source_class}] = weight;
}

int WeightTable::at(DupBucket bucket, SourceClass source_class) const {
  if (auto it = overrides_.find({bucket, source_class}); it != overrides_.end()) {
    return it->second;
  }
  return weight_of(bucket, source_class);
}

MixManifest build_manifest(std::span<const GroupStats> groups,
                           const WeightTable& weights) {
  MixManifest manifest;
  manifest.rows.reserve(groups.size());
  unsigned __int128 total = 0;
  for (const auto& g : groups) {
    ManifestRow row;
    row.group = g.group;
    row.raw_tokens = g.tokens;
    row.weight = weights.at(g.bucket, g.source_class);
    row.weighted_tokens = g.tokens * static_cast<std::uint64_t>(row.weight);
    total += row.weighted_tokens;
    manifest.rows.push_back(std::move(row));
  }
  if (total == 0) throw std::invalid_argument("all groups have zero tokens");
  const auto denom = static_cast<long double>(total);
  for (auto& row : manifest.rows) {
    row.proportion =
        static_cast<double>(static_cast<long double>(row.weighted_tokens) / denom);
  }
  return manifest;
}

std::vector<std::uint64_t> sample_plan(const MixManifest& manifest,
                                       std::uint64_t target_tokens) {
  const auto& rows = manifest.rows;
  std::vector<std::uint64_t> quotas(rows.size(), 0);
  unsigned __int128 total = 0;
  for (const auto& row : rows) total += row.weighted_tokens;
  if (total == 0 || target_tokens == 0) return quotas;

  // Exact integer apportionment: floor(w * target / W) plus one unit for the
  // largest remainders; ties go to the earlier row.
  std::vector<unsigned __int128> remainders(rows.size());
  std::uint64_t assigned = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const unsigned __int128 scaled =
        static_cast<unsigned __int128>(rows[i].weighted_tokens) * target_tokens;
    quotas[i] = static_cast<std::uint64_t>(scaled / total);
    remainders[i] = scaled % total;
    assigned += quotas[i];
  }
  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return remainders[a] > remainders[b];
  });
  for (std::size_t k = 0; assigned < target_tokens; ++k, ++assigned) {
    ++quotas[order[k]];
  }
  return quotas;
}

}  // namespace ptkit
