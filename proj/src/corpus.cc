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

#include "ptkit/corpus.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <stdexcept>

namespace ptkit {
namespace {

constexpr std::array<std::string_view, 6> kKnownKeys = {
    "id", "text", "source_class", "dup_count", "curated", "timestamp"};

bool is_ascii_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\v' || c == '\f' ||
         c == '\r';
}

bool iequals(std::string_view a, std::string_view b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end(),
                    [](char x, char y) {
                      return std::tolower(static_cast<unsigned char>(x)) ==
                             std::tolower(static_cast<unsigned char>(y));
                    });
}

// YYYY-MM-DD, optionally followed by a time part.
bool looks_like_iso_date(std::string_view s) {
  if (s.size() < 10) return false;
  for (std::size_t i = 0; i < 10; ++i) {
    if (i == 4 || i == 7) {
      if (s[i] != '-') return false;
    } else if (!std::isdigit(static_cast<unsigned char>(s[i]))) {
      return false;
    }
  }
  return s.size() == 10 || s[10] == 'T' || s[10] == ' ';
}

}  // namespace

std::string_view to_string(SourceClass source_class) {
  switch (source_class) {
    case SourceClass::kCommonCrawl:
      return "CommonCrawl";
    case SourceClass::kCurated:
      return "Curated";
    case SourceClass::kCode:
      return "Code";
    case SourceClass::kSynthetic:
      return "Synthetic";
  }
  return "CommonCrawl";
}

std::optional<SourceClass> parse_source_class(std::string_view name) {
  for (auto sc : {SourceClass::kCommonCrawl, SourceClass::kCurated,
                  SourceClass::kCode, SourceClass::kSynthetic}) {
    if (iequals(name, to_string(sc))) return sc;
  }
  return std::nullopt;
}

std::size_t word_count(std::string_view text) {
  std::size_t count = 0;
  bool in_word = false;
  for (char ch : text) {
    const bool space = is_ascii_space(static_cast<unsigned char>(ch));
    if (!space && !in_word) ++count;
    in_word = !space;
  }
  return count;
}

nlohmann::json to_json(const Document& doc) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [key, value] : doc.extra) out[key] = value;
  out["id"] = doc.id;
  out["text"] = doc.text;
  out["source_class"] = std::string(to_string(doc.source_class));
  out["dup_count"] = doc.dup_count;
  out["curated"] = doc.curated;
  if (doc.timestamp) out["timestamp"] = *doc.timestamp;
  return out;
}

Document document_from_json(const nlohmann::json& object) {
  if (!object.is_object()) {
    throw std::invalid_argument("record is not a JSON object");
  }
  Document doc;
  const auto text = object.find("text");
  if (text == object.end()) throw std::invalid_argument("missing \"text\"");
  if (!text->is_string()) throw std::invalid_argument("\"text\" is not a string");
  doc.text = text->get<std::string>();

  if (auto it = object.find("id"); it != object.end()) {
    if (it->is_string()) {
      doc.id = it->get<std::string>();
    } else if (it->is_number_integer()) {
      doc.id = it->dump();
    } else {
      throw std::invalid_argument("\"id\" must be a string or integer");
    }
  }
  if (auto it = object.find("source_class"); it != object.end()) {
    if (!it->is_string()) {
      throw std::invalid_argument("\"source_class\" is not a string");
    }
    auto sc = parse_source_class(it->get<std::string>());
    if (!sc) {
      throw std::invalid_argument("unknown source_class \"" +
                                  it->get<std::string>() + "\"");
    }
    doc.source_class = *sc;
  }
  if (auto it = object.find("dup_count"); it != object.end()) {
    if (!it->is_number_integer() || it->get<std::int64_t>() < 1) {
      throw std::invalid_argument("\"dup_count\" must be an integer >= 1");
    }
    doc.dup_count = it->get<std::int64_t>();
  }
  if (auto it = object.find("curated"); it != object.end()) {
    if (!it->is_boolean()) throw std::invalid_argument("\"curated\" is not a boolean");
    doc.curated = it->get<bool>();
  }
  if (auto it = object.find("timestamp"); it != object.end() && !it->is_null()) {
    if (!it->is_string() || !looks_like_iso_date(it->get_ref<const std::string&>())) {
      throw std::invalid_argument("\"timestamp\" is not an ISO-8601 date");
    }
    doc.timestamp = it->get<std::string>();
  }
  for (const auto& [key, value] : object.items()) {
    if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) != kKnownKeys.end()) {
      continue;
    }
    doc.extra[key] = value.is_string() ? value.get<std::string>() : value.dump();
  }
  return doc;
}

std::optional<Document> RecordReader::next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (std::all_of(line.begin(), line.end(), [](char c) {
          return is_ascii_space(static_cast<unsigned char>(c));
        })) {
      continue;
    }
    try {
      Document doc = document_from_json(nlohmann::json::parse(line));
      if (doc.id.empty()) doc.id = std::to_string(line_);
      return doc;
    } catch (const nlohmann::json::exception& e) {
      errors_.push_back({line_, e.what()});
    } catch (const std::invalid_argument& e) {
      errors_.push_back({line_, e.what()});
    }
  }
  return std::nullopt;
}

ReadResult read_records(std::istream& in) {
  RecordReader reader(in);
  ReadResult result;
  while (auto doc = reader.next()) result.documents.push_back(std::move(*doc));
  result.errors = reader.errors();
  return result;
}

bool write_record(const Document& doc, std::ostream& out) {
  out << to_json(doc).dump(-1, ' ', false,
                           nlohmann::json::error_handler_t::replace)
      << '\n';
  return static_cast<bool>(out);
}

std::size_t write_records(std::span<const Document> docs, std::ostream& out) {
  std::size_t written = 0;
  for (const auto& doc : docs) {
    if (!write_record(doc, out)) break;
    ++written;
  }
  return written;
}

}  // namespace ptkit
