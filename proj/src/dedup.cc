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

#include "ptkit/dedup.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_set>
#include <utility>

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include "ptkit/hash.h"

namespace ptkit {
namespace {

constexpr std::uint64_t kMersenne61 = (std::uint64_t{1} << 61) - 1;

std::uint64_t mod61(std::uint64_t x) {
  x = (x & kMersenne61) + (x >> 61);
  return x >= kMersenne61 ? x - kMersenne61 : x;
}

std::uint64_t mulmod61(std::uint64_t a, std::uint64_t b) {
  const unsigned __int128 prod = static_cast<unsigned __int128>(a) * b;
  const std::uint64_t lo = static_cast<std::uint64_t>(prod) & kMersenne61;
  const std::uint64_t hi = static_cast<std::uint64_t>(prod >> 61);
  return mod61(lo + hi);
}

void append_utf8(std::string& out, UChar32 c) {
  char buf[U8_MAX_LENGTH];
  std::int32_t len = 0;
  UBool error = false;
  U8_APPEND(buf, len, U8_MAX_LENGTH, c, error);
  if (!error) out.append(buf, static_cast<std::size_t>(len));
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

bool better_representative(const Document& a, const Document& b) {
  if (a.curated != b.curated) return a.curated;
  if (a.timestamp != b.timestamp) {
    if (!a.timestamp) return false;
    if (!b.timestamp) return true;
    return *a.timestamp > *b.timestamp;
  }
  return a.id < b.id;
}

}  // namespace

std::string normalize(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  const auto* s = reinterpret_cast<const std::uint8_t*>(text.data());
  const auto length = static_cast<std::int32_t>(text.size());
  bool pending_space = false;
  for (std::int32_t i = 0; i < length;) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c < 0) c = 0xFFFD;
    if (u_isUWhiteSpace(c)) {
      pending_space = true;
      continue;
    }
    if (u_ispunct(c)) continue;
    if (pending_space && !out.empty()) out.push_back(' ');
    pending_space = false;
    append_utf8(out, u_tolower(c));
  }
  return out;
}

std::vector<std::string> shingles(std::string_view normalized, std::size_t n) {
  if (n == 0) throw std::invalid_argument("shingle size must be positive");
  std::vector<std::string_view> words;
  std::size_t pos = 0;
  while (pos < normalized.size()) {
    while (pos < normalized.size() && normalized[pos] == ' ') ++pos;
    const std::size_t start = pos;
    while (pos < normalized.size() && normalized[pos] != ' ') ++pos;
    if (pos > start) words.push_back(normalized.substr(start, pos - start));
  }

  std::vector<std::string> out;
  if (words.empty()) return out;
  const std::size_t width = std::min(n, words.size());
  out.reserve(words.size() - width + 1);
  for (std::size_t i = 0; i + width <= words.size(); ++i) {
    std::string gram(words[i]);
    for (std::size_t j = i + 1; j < i + width; ++j) {
      gram.push_back(' ');
      gram.append(words[j]);
    }
    out.push_back(std::move(gram));
  }
  return out;
}

MinHasher::MinHasher(std::uint64_t perm_seed, std::size_t num_perm)
    : seed_(perm_seed), a_(num_perm), b_(num_perm) {
  if (num_perm == 0) throw std::invalid_argument("num_perm must be positive");
  std::mt19937_64 rng(perm_seed);
  std::uniform_int_distribution<std::uint64_t> dist_a(1, kMersenne61 - 1);
  std::uniform_int_distribution<std::uint64_t> dist_b(0, kMersenne61 - 1);
  for (std::size_t i = 0; i < num_perm; ++i) {
    a_[i] = dist_a(rng);
    b_[i] = dist_b(rng);
  }
}

Signature MinHasher::sign(std::span<const std::string> shingles) const {
  if (shingles.empty()) {
    throw std::invalid_argument("cannot sign an empty shingle set");
  }
  Signature sig{std::vector<std::uint64_t>(a_.size(),
                                           std::numeric_limits<std::uint64_t>::max()),
                seed_};
  for (const auto& shingle : shingles) {
    const std::uint64_t h = mod61(hash64(shingle));
    for (std::size_t i = 0; i < a_.size(); ++i) {
      const std::uint64_t v = mod61(mulmod61(a_[i], h) + b_[i]);
      if (v < sig.values[i]) sig.values[i] = v;
    }
  }
  return sig;
}

Signature signature(std::span<const std::string> shingles, std::uint64_t perm_seed,
                    std::size_t num_perm) {
  return MinHasher(perm_seed, num_perm).sign(shingles);
}

double estimate_jaccard(const Signature& a, const Signature& b) {
  if (a.values.size() != b.values.size()) {
    throw std::invalid_argument("signature lengths differ");
  }
  if (a.perm_seed != b.perm_seed) {
    throw std::invalid_argument("signatures use different permutation seeds");
  }
  if (a.values.empty()) throw std::invalid_argument("empty signature");
  std::size_t equal = 0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    equal += a.values[i] == b.values[i];
  }
  return static_cast<double>(equal) / static_cast<double>(a.values.size());
}

std::vector<std::uint64_t> lsh_keys(const Signature& sig, const LshConfig& config) {
  if (config.bands == 0 || config.rows == 0 ||
      config.bands * config.rows != sig.values.size()) {
    throw std::invalid_argument("bands * rows must equal the signature length");
  }
  std::vector<std::uint64_t> keys;
  keys.reserve(config.bands);
  for (std::size_t band = 0; band < config.bands; ++band) {
    const auto* first = sig.values.data() + band * config.rows;
    std::string_view bytes(reinterpret_cast<const char*>(first),
                           config.rows * sizeof(std::uint64_t));
    keys.push_back(hash64(bytes, band));
  }
  return keys;
}

std::vector<CandidatePair> candidate_pairs(
    const std::unordered_map<std::string, Signature>& signatures,
    const LshConfig& config) {
  std::vector<const std::string*> ids;
  ids.reserve(signatures.size());
  for (const auto& entry : signatures) ids.push_back(&entry.first);
  std::sort(ids.begin(), ids.end(),
            [](const std::string* x, const std::string* y) { return *x < *y; });

  std::vector<std::unordered_map<std::uint64_t, std::vector<std::uint32_t>>> buckets(
      config.bands);
  for (std::uint32_t i = 0; i < ids.size(); ++i) {
    const auto keys = lsh_keys(signatures.at(*ids[i]), config);
    for (std::size_t band = 0; band < keys.size(); ++band) {
      buckets[band][keys[band]].push_back(i);
    }
  }

  // TODO: very large buckets (templated boilerplate clusters) make this
  // quadratic; link them through a star instead of all pairs once cluster()
  // accepts pre-confirmed edges.
  std::unordered_set<std::uint64_t> seen;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  for (const auto& band : buckets) {
    for (const auto& [key, members] : band) {
      for (std::size_t x = 0; x < members.size(); ++x) {
        for (std::size_t y = x + 1; y < members.size(); ++y) {
          const std::uint64_t code =
              (std::uint64_t{members[x]} << 32) | std::uint64_t{members[y]};
          if (seen.insert(code).second) pairs.emplace_back(members[x], members[y]);
        }
      }
    }
  }
  std::sort(pairs.begin(), pairs.end());

  std::vector<CandidatePair> out;
  out.reserve(pairs.size());
  for (const auto& [x, y] : pairs) out.push_back({*ids[x], *ids[y]});
  return out;
}

std::vector<ClusterRecord> cluster(
    std::span<const CandidatePair> pairs,
    const std::unordered_map<std::string, Signature>& signatures, double threshold) {
  std::vector<std::string> ids;
  ids.reserve(pairs.size() * 2);
  for (const auto& pair : pairs) {
    ids.push_back(pair.a);
    ids.push_back(pair.b);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  auto index_of = [&ids](const std::string& id) {
    return static_cast<std::size_t>(
        std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
  };

  DisjointSets sets(ids.size());
  for (const auto& pair : pairs) {
    if (pair.a == pair.b) continue;
    const double estimate =
        estimate_jaccard(signatures.at(pair.a), signatures.at(pair.b));
    if (estimate >= threshold) sets.unite(index_of(pair.a), index_of(pair.b));
  }

  // Roots are the smallest index of each component, so iterating in index
  // order emits clusters sorted by their smallest member.
  std::unordered_map<std::size_t, std::size_t> slot_of_root;
  std::vector<ClusterRecord> clusters;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const std::size_t root = sets.find(i);
    auto [it, inserted] = slot_of_root.try_emplace(root, clusters.size());
    if (inserted) clusters.push_back({});
    clusters[it->second].members.push_back(ids[i]);
  }
  std::erase_if(clusters, [](const ClusterRecord& c) { return c.members.size() < 2; });
  for (auto& c : clusters) {
    c.size = c.members.size();
    c.representative = c.members.front();
  }
  return clusters;
}

std::string choose_representative(const ClusterRecord& cluster,
                                  const DocumentLookup& lookup) {
  const Document* best = nullptr;
  for (const auto& id : cluster.members) {
    const Document* doc = lookup(id);
    if (doc == nullptr) throw std::out_of_range("unknown cluster member " + id);
    if (best == nullptr || better_representative(*doc, *best)) best = doc;
  }
  if (best == nullptr) throw std::invalid_argument("empty cluster");
  return best->id;
}

NearDedupResult near_dedup(std::span<const Document> docs,
                           const NearDedupConfig& config) {
  if (config.lsh.bands * config.lsh.rows != config.num_perm) {
    throw std::invalid_argument("bands * rows must equal num_perm");
  }
  if (!(config.threshold > 0.0 && config.threshold < 1.0)) {
    throw std::invalid_argument("threshold must lie in (0, 1)");
  }

  std::unordered_map<std::string, const Document*> by_id;
  by_id.reserve(docs.size());
  for (const auto& doc : docs) {
    if (!by_id.emplace(doc.id, &doc).second) {
      throw std::invalid_argument("duplicate document id " + doc.id);
    }
  }

  NearDedupResult result;
  const MinHasher hasher(config.seed, config.num_perm);
  std::unordered_map<std::string, Signature> signatures;
  signatures.reserve(docs.size());
  for (const auto& doc : docs) {
    const auto grams = shingles(normalize(doc.text), config.ngram);
    if (grams.empty()) {
      ++result.empty;
      continue;
    }
    signatures.emplace(doc.id, hasher.sign(grams));
  }

  const auto pairs = candidate_pairs(signatures, config.lsh);
  result.clusters = cluster(pairs, signatures, config.threshold);

  const DocumentLookup lookup = [&by_id](const std::string& id) -> const Document* {
    auto it = by_id.find(id);
    return it == by_id.end() ? nullptr : it->second;
  };
  std::unordered_map<std::string, std::int64_t> representatives;
  std::unordered_set<std::string> dropped;
  for (auto& c : result.clusters) {
    c.representative = choose_representative(c, lookup);
    representatives[c.representative] = static_cast<std::int64_t>(c.size);
    for (const auto& id : c.members) {
      if (id != c.representative) dropped.insert(id);
    }
  }

  result.kept.reserve(docs.size() - dropped.size());
  for (const auto& doc : docs) {
    if (dropped.contains(doc.id)) continue;
    Document kept = doc;
    if (auto it = representatives.find(doc.id); it != representatives.end()) {
      kept.dup_count = it->second;
    }
    result.kept.push_back(std::move(kept));
  }
  result.dropped = dropped.size();
  return result;
}

std::uint64_t BloomFilter::optimal_bits(std::uint64_t capacity, double fpr) {
  const double ln2 = std::log(2.0);
  return static_cast<std::uint64_t>(
      std::ceil(-static_cast<double>(capacity) * std::log(fpr) / (ln2 * ln2)));
}

std::uint32_t BloomFilter::optimal_hashes(std::uint64_t capacity, std::uint64_t bits) {
  const double k = static_cast<double>(bits) / static_cast<double>(capacity) *
                   std::log(2.0);
  return std::max<std::uint32_t>(1, static_cast<std::uint32_t>(std::lround(k)));
}

BloomFilter::BloomFilter(const BloomConfig& config) {
  if (config.capacity < 1) throw std::invalid_argument("capacity must be >= 1");
  if (!(config.target_fpr > 0.0 && config.target_fpr < 1.0)) {
    throw std::invalid_argument("target_fpr must lie in (0, 1)");
  }
  num_bits_ = std::max<std::uint64_t>(64, optimal_bits(config.capacity, config.target_fpr));
  num_hashes_ = optimal_hashes(config.capacity, num_bits_);
  words_.assign((num_bits_ + 63) / 64, 0);
}

template <typename Fn>
bool BloomFilter::probe(std::string_view key, Fn&& fn) const {
  std::uint64_t h1 = hash64(key, 0x5bd1e995);
  std::uint64_t h2 = hash64(key, 0x27d4eb2f165667c5ULL) | 1;
  bool all_set = true;
  for (std::uint32_t i = 0; i < num_hashes_; ++i) {
    const std::uint64_t bit = h1 % num_bits_;
    all_set &= fn(bit);
    h1 += h2;
    h2 += i + 1;
  }
  return all_set;
}

bool BloomFilter::insert(std::string_view key) {
  return probe(key, [this](std::uint64_t bit) {
    std::uint64_t& word = words_[bit >> 6];
    const std::uint64_t mask = std::uint64_t{1} << (bit & 63);
    const bool was_set = (word & mask) != 0;
    word |= mask;
    return was_set;
  });
}

bool BloomFilter::contains(std::string_view key) const {
  return probe(key, [this](std::uint64_t bit) {
    return (words_[bit >> 6] >> (bit & 63)) & 1;
  });
}

void BloomFilter::merge(const BloomFilter& other) {
  if (other.num_bits_ != num_bits_ || other.num_hashes_ != num_hashes_) {
    throw std::invalid_argument("cannot merge Bloom filters of different geometry");
  }
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
}

bool ExactDeduplicator::admit(const Document& doc) {
  ++stats_.seen;
  if (filter_.insert(normalize(doc.text))) {
    ++stats_.dropped;
    return false;
  }
  return true;
}

ExactDedupResult exact_dedup(std::span<const Document> docs, const BloomConfig& config) {
  ExactDeduplicator dedup(config);
  ExactDedupResult result;
  for (const auto& doc : docs) {
    if (dedup.admit(doc)) result.kept.push_back(doc);
  }
  result.stats = dedup.stats();
  return result;
}

}  // namespace ptkit
