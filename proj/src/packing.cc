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

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace ptkit {

OnlinePacker::OnlinePacker(std::uint64_t capacity, std::size_t max_open_bins, Sink sink)
    : capacity_(capacity), max_open_(max_open_bins), sink_(std::move(sink)) {
  if (capacity == 0) throw std::invalid_argument("capacity must be >= 1");
  if (max_open_bins == 0) throw std::invalid_argument("max_open_bins must be >= 1");
}

void OnlinePacker::seal(std::uint64_t serial) {
  auto node = bins_.extract(serial);
  Bin& bin = node.mapped();
  by_room_.erase({bin.room, serial});
  bin.sequence.padding = bin.room;
  ++stats_.sequences;
  stats_.padding_tokens += bin.room;
  stats_.capacity_tokens += capacity_;
  stats_.padding_ratio = static_cast<double>(stats_.padding_tokens) /
                         static_cast<double>(stats_.capacity_tokens);
  sink_(std::move(bin.sequence));
}

void OnlinePacker::push(const PackInput& input) {
  if (input.length == 0) throw std::invalid_argument("document length must be >= 1");
  if (input.length > capacity_) {
    ++stats_.docs_skipped;
    return;
  }
  ++stats_.docs_packed;

  auto fit = by_room_.lower_bound({input.length, 0});
  std::uint64_t serial;
  if (fit != by_room_.end()) {
    serial = fit->second;
    by_room_.erase(fit);
  } else {
    if (by_room_.size() >= max_open_) seal(by_room_.begin()->second);
    serial = next_serial_++;
    Bin fresh;
    fresh.sequence.capacity = capacity_;
    fresh.room = capacity_;
    bins_.emplace(serial, std::move(fresh));
  }

  Bin& bin = bins_.at(serial);
  bin.sequence.entries.push_back({input.id, input.length});
  bin.room -= input.length;
  by_room_.emplace(bin.room, serial);
  if (bin.room == 0) seal(serial);
}

void OnlinePacker::finish() {
  while (!bins_.empty()) seal(bins_.begin()->first);
}

PackResult pack_online(std::span<const PackInput> inputs, std::uint64_t capacity,
                       std::size_t max_open_bins) {
  PackResult result;
  OnlinePacker packer(capacity, max_open_bins, [&result](PackedSequence&& seq) {
    result.sequences.push_back(std::move(seq));
  });
  for (const auto& input : inputs) packer.push(input);
  packer.finish();
  result.stats = packer.stats();
  return result;
}

PackStats pack_stats(std::span<const PackedSequence> sequences) {
  PackStats stats;
  for (const auto& seq : sequences) {
    ++stats.sequences;
    stats.docs_packed += seq.entries.size();
    stats.padding_tokens += seq.padding;
    stats.capacity_tokens += seq.capacity;
  }
  if (stats.capacity_tokens > 0) {
    stats.padding_ratio = static_cast<double>(stats.padding_tokens) /
                          static_cast<double>(stats.capacity_tokens);
  }
  return stats;
}

std::size_t optimal_bins(std::span<const std::uint64_t> lengths, std::uint64_t capacity) {
  if (lengths.size() > 14) throw std::invalid_argument("optimal_bins supports <= 14 items");
  if (lengths.empty()) return 0;
  if (capacity == 0) throw std::invalid_argument("capacity must be >= 1");
  std::vector<std::uint64_t> items(lengths.begin(), lengths.end());
  for (auto len : items) {
    if (len > capacity) throw std::invalid_argument("item longer than capacity");
  }
  std::sort(items.begin(), items.end(), std::greater<>());

  const std::uint64_t total = std::accumulate(items.begin(), items.end(), std::uint64_t{0});
  const std::size_t lower = static_cast<std::size_t>((total + capacity - 1) / capacity);
  std::size_t best = items.size();
  std::vector<std::uint64_t> loads;

  std::function<void(std::size_t)> search = [&](std::size_t k) {
    if (best == lower) return;
    if (k == items.size()) {
      best = std::min(best, loads.size());
      return;
    }
    for (std::size_t b = 0; b < loads.size(); ++b) {
      if (loads[b] + items[k] > capacity) continue;
      bool repeat = false;  // equal loads are interchangeable
      for (std::size_t e = 0; e < b; ++e) repeat |= loads[e] == loads[b];
      if (repeat) continue;
      loads[b] += items[k];
      search(k + 1);
      loads[b] -= items[k];
    }
    if (loads.size() + 1 < best) {
      loads.push_back(items[k]);
      search(k + 1);
      loads.pop_back();
    }
  };
  search(0);
  return best;
}

}  // namespace ptkit
