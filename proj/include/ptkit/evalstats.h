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

#ifndef PTKIT_EVALSTATS_H_
#define PTKIT_EVALSTATS_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ptkit {

// Unbiased pass@k: 1 - C(n-c, k) / C(n, k), evaluated as a running product.
// Throws std::invalid_argument unless 1 <= k <= n and c <= n.
double pass_at_k(std::uint64_t n, std::uint64_t c, std::uint64_t k);

struct SentencePair {
  std::string reference;
  std::string generated;
};

// Percentage of pairs whose generated text equals the reference after
// trailing whitespace is trimmed from both. Throws std::invalid_argument on
// an empty list or an empty reference.
double memorization_rate(std::span<const SentencePair> pairs);

// Splits after every '.' that is followed by whitespace or ends the text.
// Sentences keep their period; surrounding whitespace is trimmed.
std::vector<std::string> split_sentences(std::string_view text);

// Compensated (Neumaier) mean. Throws std::invalid_argument on empty input.
double mean_over_runs(std::span<const double> values);

}  // namespace ptkit

#endif  // PTKIT_EVALSTATS_H_
