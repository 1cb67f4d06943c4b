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

#ifndef PTKIT_CORPUS_H_
#define PTKIT_CORPUS_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace ptkit {

enum class SourceClass { kCommonCrawl, kCurated, kCode, kSynthetic };

std::string_view to_string(SourceClass source_class);

// Accepts the canonical names ("CommonCrawl", "Curated", "Code", "Synthetic")
// case-insensitively.
std::optional<SourceClass> parse_source_class(std::string_view name);

// A single corpus record. `dup_count` is the size of the near-duplicate
// cluster the document represents (1 when unique).
struct Document {
  std::string id;
  std::string text;
  SourceClass source_class = SourceClass::kCommonCrawl;
  std::int64_t dup_count = 1;
  bool curated = false;
  std::optional<std::string> timestamp;
  std::map<std::string, std::string> extra;

  friend bool operator==(const Document&, const Document&) = default;
};

// Counts maximal runs of non-whitespace bytes. Whitespace is the ASCII set
// " \t\n\v\f\r".
std::size_t word_count(std::string_view text);

using TokenCounter = std::function<std::size_t(std::string_view)>;

inline TokenCounter whitespace_counter() { return &word_count; }

// JSON <-> Document. `document_from_json` throws std::invalid_argument when
// the object is not a valid record.
nlohmann::json to_json(const Document& doc);
Document document_from_json(const nlohmann::json& object);

struct RecordError {
  std::size_t line = 0;
  std::string message;
};

// Streams documents out of newline-delimited JSON. Malformed lines are
// recorded in errors() and skipped; blank lines are ignored.
class RecordReader {
 public:
  explicit RecordReader(std::istream& in) : in_(in) {}

  std::optional<Document> next();

  const std::vector<RecordError>& errors() const { return errors_; }
  std::size_t line_number() const { return line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
  std::vector<RecordError> errors_;
};

struct ReadResult {
  std::vector<Document> documents;
  std::vector<RecordError> errors;
};

ReadResult read_records(std::istream& in);

// Writes one JSON object per line and returns the number of records written.
// On stream failure, returns the count written before the failure.
std::size_t write_records(std::span<const Document> docs, std::ostream& out);

bool write_record(const Document& doc, std::ostream& out);

}  // namespace ptkit

#endif  // PTKIT_CORPUS_H_
