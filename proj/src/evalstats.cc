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

#include <cmath>
#include <stdexcept>

namespace ptkit {
namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\v' || c == '\f' || c == '\r';
}

std::string_view trim_right(std::string_view s) {
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  return trim_right(s);
}

}  // namespace

double pass_at_k(std::uint64_t n, std::uint64_t c, std::uint64_t k) {
  if (n < 1 || k < 1 || k > n) throw std::invalid_argument("pass@k needs 1 <= k <= n");
  if (c > n) throw std::invalid_argument("correct count exceeds attempts");
  if (n - c < k) return 1.0;
  // C(n-c, k) / C(n, k) = prod_{i=n-c+1}^{n} (1 - k / i)
  double miss = 1.0;
  for (std::uint64_t i = n - c + 1; i <= n; ++i) {
    miss *= 1.0 - static_cast<double>(k) / static_cast<double>(i);
  }
  return 1.0 - miss;
}

double memorization_rate(std::span<const SentencePair> pairs) {
  if (pairs.empty()) throw std::invalid_argument("no sentence pairs");
  std::size_t matches = 0;
  for (const auto& pair : pairs) {
    if (pair.reference.empty()) throw std::invalid_argument("empty reference sentence");
    matches += trim_right(pair.reference) == trim_right(pair.generated);
  }
  return 100.0 * static_cast<double>(matches) / static_cast<double>(pairs.size());
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '.') continue;
    if (i + 1 == text.size() || is_space(text[i + 1])) {
      const auto sentence = trim(text.substr(start, i + 1 - start));
      if (!sentence.empty()) out.emplace_back(sentence);
      start = i + 1;
    }
  }
  if (const auto rest = trim(text.substr(std::min(start, text.size()))); !rest.empty()) {
    out.emplace_back(rest);
  }
  return out;
}

double mean_over_runs(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("mean of no values");
  double sum = 0.0;
  double compensation = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      compensation += (sum - t) + v;
    } else {
      compensation += (v - t) + sum;
    }
    sum = t;
  }
  return (sum + compensation) / static_cast<double>(values.size());
}

}  // namespace ptkit
