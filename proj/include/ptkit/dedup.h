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

#ifndef PTKIT_DEDUP_H_
#define PTKIT_DEDUP_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ptkit/corpus.h"

namespace ptkit {

// Trims, lowercases, deletes Unicode punctuation (general category P*) and
// collapses every whitespace run to a single ASCII space.
std::string normalize(std::string_view text);

// Word-level n-grams over a normalized text, joined by single spaces. A
// document with fewer than `n` words yields one shingle holding all of them;
// an empty document yields none.
std::vector<std::string> shingles(std::string_view normalized, std::size_t n = 13);

struct Signature {
  std::vector<std::uint64_t> values;
  std::uint64_t perm_seed = 0;

  friend bool operator==(const Signature&, const Signature&) = default;
};

// A seeded family of `num_perm` hash permutations over 61-bit values.
class MinHasher {
 public:
  explicit MinHasher(std::uint64_t perm_seed, std::size_t num_perm = 128);

  // Throws std::invalid_argument on an empty shingle set.
  Signature sign(std::span<const std::string> shingles) const;

  std::size_t num_perm() const { return a_.size(); }
  std::uint64_t perm_seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::vector<std::uint64_t> a_;
  std::vector<std::uint64_t> b_;
};

Signature signature(std::span<const std::string> shingles, std::uint64_t perm_seed,
                    std::size_t num_perm = 128);

// Fraction of equal components. Throws std::invalid_argument when lengths or
// seeds differ.
double estimate_jaccard(const Signature& a, const Signature& b);

struct LshConfig {
  std::size_t bands = 16;
  std::size_t rows = 8;
};

// One key per band; throws std::invalid_argument unless bands * rows equals
// the signature length.
std::vector<std::uint64_t> lsh_keys(const Signature& sig, const LshConfig& config);

struct CandidatePair {
  std::string a;
  std::string b;
};

// All unordered pairs of ids sharing at least one band bucket, each reported
// once with a < b.
std::vector<CandidatePair> candidate_pairs(
    const std::unordered_map<std::string, Signature>& signatures,
    const LshConfig& config);

struct ClusterRecord {
  std::vector<std::string> members;  // sorted
  std::string representative;
  std::size_t size = 0;

  friend bool operator==(const ClusterRecord&, const ClusterRecord&) = default;
};

// Union-find over the candidate pairs whose estimated Jaccard reaches
// `threshold`. Components with at least two members are returned sorted by
// their smallest member; the provisional representative is that member.
std::vector<ClusterRecord> cluster(
    std::span<const CandidatePair> pairs,
    const std::unordered_map<std::string, Signature>& signatures, double threshold);

using DocumentLookup = std::function<const Document*(const std::string& id)>;

// Curated first, then newest timestamp (absent sorts oldest), then smallest
// id. Throws std::out_of_range if a member cannot be resolved.
std::string choose_representative(const ClusterRecord& cluster,
                                  const DocumentLookup& lookup);

struct NearDedupConfig {
  std::size_t num_perm = 128;
  LshConfig lsh;
  double threshold = 0.8;
  std::uint64_t seed = 0;
  std::size_t ngram = 13;
};

struct NearDedupResult {
  std::vector<Document> kept;  // input order; representatives carry dup_count
  std::vector<ClusterRecord> clusters;
  std::size_t dropped = 0;
  std::size_t empty = 0;  // normalized to nothing; passed through
};

// Throws std::invalid_argument on duplicate ids or an inconsistent config.
NearDedupResult near_dedup(std::span<const Document> docs,
                           const NearDedupConfig& config = {});

struct BloomConfig {
  std::uint64_t capacity = 1'000'000;
  double target_fpr = 0.001;
};

class BloomFilter {
 public:
  explicit BloomFilter(const BloomConfig& config);

  // Returns true when the key was possibly present before insertion.
  bool insert(std::string_view key);
  bool contains(std::string_view key) const;

  // Bitwise union with a filter of identical geometry.
  void merge(const BloomFilter& other);

  std::uint64_t bit_count() const { return num_bits_; }
  std::uint32_t hash_count() const { return num_hashes_; }

  static std::uint64_t optimal_bits(std::uint64_t capacity, double fpr);
  static std::uint32_t optimal_hashes(std::uint64_t capacity, std::uint64_t bits);

 private:
  template <typename Fn>
  bool probe(std::string_view key, Fn&& fn) const;

  std::uint64_t num_bits_;
  std::uint32_t num_hashes_;
  std::vector<std::uint64_t> words_;
};

struct ExactDedupStats {
  std::uint64_t seen = 0;
  std::uint64_t dropped = 0;
};

// Streaming form: admit() returns false for documents whose normalized text
// digest has (probably) been seen before.
class ExactDeduplicator {
 public:
  explicit ExactDeduplicator(const BloomConfig& config) : filter_(config) {}

  bool admit(const Document& doc);
  const ExactDedupStats& stats() const { return stats_; }
  const BloomFilter& filter() const { return filter_; }

 private:
  BloomFilter filter_;
  ExactDedupStats stats_;
};

struct ExactDedupResult {
  std::vector<Document> kept;
  ExactDedupStats stats;
};

ExactDedupResult exact_dedup(std::span<const Document> docs, const BloomConfig& config);

}  // namespace ptkit

#endif  // PTKIT_DEDUP_H_
