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

// Seeded synthetic corpora for dedup tests.

#ifndef PTKIT_TESTS_CORPUS_GEN_H_
#define PTKIT_TESTS_CORPUS_GEN_H_

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "ptkit/corpus.h"

namespace ptkit::testing {

inline std::vector<std::string> make_vocabulary(std::mt19937_64& rng, std::size_t size) {
  std::uniform_int_distribution<int> len(3, 9);
  std::uniform_int_distribution<int> letter('a', 'z');
  std::vector<std::string> vocab;
  vocab.reserve(size);
  for (std::size_t i = 0; i < size; ++i) {
    std::string w;
    for (int k = len(rng); k > 0; --k) w.push_back(static_cast<char>(letter(rng)));
    vocab.push_back(w + std::to_string(i));  // unique
  }
  return vocab;
}

inline std::vector<std::string> random_words(std::mt19937_64& rng,
                                             const std::vector<std::string>& vocab,
                                             std::size_t count) {
  std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
  std::vector<std::string> out(count);
  for (auto& w : out) w = vocab[pick(rng)];
  return out;
}

inline std::string join_words(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out.push_back(' ');
    out += w;
  }
  return out;
}

// Substitutes `count` random positions with random vocabulary words.
inline std::vector<std::string> mutate(std::mt19937_64& rng, std::vector<std::string> words,
                                       const std::vector<std::string>& vocab,
                                       std::size_t count) {
  std::uniform_int_distribution<std::size_t> pos(0, words.size() - 1);
  std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
  for (std::size_t i = 0; i < count; ++i) words[pos(rng)] = vocab[pick(rng)];
  return words;
}

struct PlantedCorpus {
  std::vector<Document> docs;
  std::size_t planted_groups = 0;
};

// Up to `max_docs` documents of 600-1000 words. Planted groups hold a base
// document and 1-5 variants, each with 1-3 word substitutions (< 1% of
// words); the remaining documents are independent, some of them borrowing a
// long passage from another document.
inline PlantedCorpus planted_corpus(std::uint64_t seed, std::size_t max_docs = 200) {
  std::mt19937_64 rng(seed);
  const auto vocab = make_vocabulary(rng, 20000);
  std::uniform_int_distribution<std::size_t> length(600, 1000);
  std::uniform_int_distribution<std::size_t> variants(1, 5);
  std::uniform_int_distribution<std::size_t> edits(1, 3);

  PlantedCorpus corpus;
  auto add = [&](const std::vector<std::string>& words) {
    Document d;
    d.id = "d" + std::to_string(1000 + corpus.docs.size());
    d.text = join_words(words);
    corpus.docs.push_back(std::move(d));
  };
  const std::size_t groups = 10 + rng() % 11;
  for (std::size_t g = 0; g < groups && corpus.docs.size() + 6 <= max_docs; ++g) {
    const auto base = random_words(rng, vocab, length(rng));
    add(base);
    for (std::size_t v = variants(rng); v > 0; --v) add(mutate(rng, base, vocab, edits(rng)));
    ++corpus.planted_groups;
  }
  std::vector<std::vector<std::string>> uniques;
  while (corpus.docs.size() < max_docs) {
    auto words = random_words(rng, vocab, length(rng));
    if (!uniques.empty() && rng() % 4 == 0) {
      // Share roughly a third of another unique document.
      const auto& other = uniques[rng() % uniques.size()];
      const std::size_t take = std::min(other.size(), words.size()) / 3;
      std::copy(other.begin(), other.begin() + static_cast<std::ptrdiff_t>(take), words.begin());
    }
    uniques.push_back(words);
    add(words);
  }
  // Shuffle so planted groups are not contiguous.
  std::shuffle(corpus.docs.begin(), corpus.docs.end(), rng);
  return corpus;
}

}  // namespace ptkit::testing

#endif  // PTKIT_TESTS_CORPUS_GEN_H_
