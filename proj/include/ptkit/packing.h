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

#ifndef PTKIT_PACKING_H_
#define PTKIT_PACKING_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ptkit {

struct PackInput {
  std::string id;
  std::uint64_t length = 0;
};

struct PackEntry {
  std::string id;
  std::uint64_t length = 0;

  friend bool operator==(const PackEntry&, const PackEntry&) = default;
};

// A fixed-capacity training sequence. The tail `padding` tokens are pad.
struct PackedSequence {
  std::uint64_t capacity = 0;
  std::vector<PackEntry> entries;
  std::uint64_t padding = 0;

  std::uint64_t used() const { return capacity - padding; }

  friend bool operator==(const PackedSequence&, const PackedSequence&) = default;
};

struct PackStats {
  std::uint64_t sequences = 0;
  std::uint64_t docs_packed = 0;
  std::uint64_t docs_skipped = 0;
  std::uint64_t padding_tokens = 0;
  std::uint64_t capacity_tokens = 0;
  double truncation_ratio = 0.0;  // always 0: documents are never split
  double padding_ratio = 0.0;
};

// Online best-fit packer with at most `max_open_bins` open sequences.
//
// Each document goes to the open bin with the least remaining room that
// still fits it; ties go to the bin opened first. If nothing fits, a new bin
// is opened, first sealing the fullest open bin when the table is full.
// Bins that become exactly full are sealed immediately, and documents
// longer than the capacity are skipped. Sealed sequences are handed to the
// sink in sealing order; finish() seals the remaining bins in opening order.
class OnlinePacker {
 public:
  using Sink = std::function<void(PackedSequence&&)>;

  // Throws std::invalid_argument if capacity or max_open_bins is zero.
  OnlinePacker(std::uint64_t capacity, std::size_t max_open_bins, Sink sink);

  // Throws std::invalid_argument for zero-length input.
  void push(const PackInput& input);
  void finish();

  const PackStats& stats() const { return stats_; }
  std::size_t open_bins() const { return by_room_.size(); }

 private:
  struct Bin {
    PackedSequence sequence;
    std::uint64_t room = 0;
  };

  void seal(std::uint64_t serial);

  std::uint64_t capacity_;
  std::size_t max_open_;
  Sink sink_;
  std::uint64_t next_serial_ = 0;
  std::map<std::uint64_t, Bin> bins_;  // by serial
  std::set<std::pair<std::uint64_t, std::uint64_t>> by_room_;  // (room, serial)
  PackStats stats_;
};

struct PackResult {
  std::vector<PackedSequence> sequences;
  PackStats stats;
};

PackResult pack_online(std::span<const PackInput> inputs, std::uint64_t capacity,
                       std::size_t max_open_bins = 64);

// Recomputes statistics from emitted sequences. docs_skipped is unknown here
// and left at zero.
PackStats pack_stats(std::span<const PackedSequence> sequences);

// Exact minimum bin count by branch and bound. Throws std::invalid_argument
// for more than 14 items or an item longer than the capacity.
std::size_t optimal_bins(std::span<const std::uint64_t> lengths, std::uint64_t capacity);

}  // namespace ptkit

#endif  // PTKIT_PACKING_H_
