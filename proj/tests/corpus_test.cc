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

#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "oracles.h"

namespace ptkit {
namespace {

TEST(WordCount, Examples) {
  EXPECT_EQ(word_count("a b  c"), 3u);
  EXPECT_EQ(word_count(""), 0u);
  EXPECT_EQ(word_count("  x "), 1u);
  EXPECT_EQ(word_count("\tone\ntwo\r\nthree"), 3u);
}

TEST(WordCount, MatchesNaiveSplitter) {
  std::mt19937_64 rng(7);
  const std::string alphabet = "ab \t\n\r\v\fxyz.";
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::uniform_int_distribution<int> len(0, 60);
  for (int trial = 0; trial < 2000; ++trial) {
    std::string s;
    for (int i = len(rng); i > 0; --i) s.push_back(alphabet[pick(rng)]);
    ASSERT_EQ(word_count(s), oracle::split_whitespace(s).size()) << s;
  }
}

TEST(ReadRecords, DefaultsOptionalFields) {
  std::istringstream in(R"({"id":"a","text":"hi"})");
  const auto result = read_records(in);
  ASSERT_EQ(result.documents.size(), 1u);
  const Document& d = result.documents[0];
  EXPECT_EQ(d.id, "a");
  EXPECT_EQ(d.text, "hi");
  EXPECT_EQ(d.dup_count, 1);
  EXPECT_FALSE(d.curated);
  EXPECT_EQ(d.source_class, SourceClass::kCommonCrawl);
  EXPECT_FALSE(d.timestamp.has_value());
  EXPECT_TRUE(result.errors.empty());
}

TEST(ReadRecords, EmptyInput) {
  std::istringstream in("");
  const auto result = read_records(in);
  EXPECT_TRUE(result.documents.empty());
  EXPECT_TRUE(result.errors.empty());
}

TEST(ReadRecords, SkipsAndReportsBadLines) {
  std::istringstream in(
      "{\"id\":\"a\",\"title\":\"no text\"}\n"
      "not json\n"
      "\n"
      "{\"id\":\"b\",\"text\":\"ok\",\"dup_count\":0}\n"
      "{\"id\":\"c\",\"text\":\"fine\",\"source_class\":\"curated\"}\n");
  RecordReader reader(in);
  std::vector<Document> docs;
  while (auto d = reader.next()) docs.push_back(*d);
  ASSERT_EQ(docs.size(), 1u);
  EXPECT_EQ(docs[0].id, "c");
  EXPECT_EQ(docs[0].source_class, SourceClass::kCurated);
  ASSERT_EQ(reader.errors().size(), 3u);
  EXPECT_EQ(reader.errors()[0].line, 1u);
  EXPECT_EQ(reader.errors()[1].line, 2u);
  EXPECT_EQ(reader.errors()[2].line, 4u);
}

TEST(ReadRecords, MissingIdUsesLineNumber) {
  std::istringstream in("\n{\"text\":\"x\"}\n");
  const auto result = read_records(in);
  ASSERT_EQ(result.documents.size(), 1u);
  EXPECT_EQ(result.documents[0].id, "2");
}

TEST(ReadRecords, RejectsMalformedTimestamp) {
  std::istringstream in(R"({"text":"x","timestamp":"yesterday"})");
  const auto result = read_records(in);
  EXPECT_TRUE(result.documents.empty());
  EXPECT_EQ(result.errors.size(), 1u);
}

TEST(ReadRecords, PreservesUnknownKeys) {
  std::istringstream in(R"({"id":"a","text":"t","url":"http://x","meta":{"k":1}})");
  const auto result = read_records(in);
  ASSERT_EQ(result.documents.size(), 1u);
  const auto& extra = result.documents[0].extra;
  EXPECT_EQ(extra.at("url"), "http://x");
  EXPECT_EQ(extra.at("meta"), R"({"k":1})");
}

TEST(WriteRecords, ZeroDocsZeroLines) {
  std::ostringstream out;
  EXPECT_EQ(write_records({}, out), 0u);
  EXPECT_TRUE(out.str().empty());
}

TEST(WriteRecords, ReportsCountOnStreamFailure) {
  std::ostringstream out;
  out.setstate(std::ios::badbit);
  const std::vector<Document> docs(3, Document{"a", "b"});
  EXPECT_EQ(write_records(docs, out), 0u);
}

Document random_document(std::mt19937_64& rng, int index) {
  static const std::vector<std::string> pieces = {
      "alpha", " ", "\n", "\t", "\"", "\\", "{", "}", "é", "漢字", "\r\n", "\x01", "😀", ","};
  std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
  std::uniform_int_distribution<int> len(0, 30);
  Document d;
  d.id = "doc-" + std::to_string(index);
  for (int i = len(rng); i > 0; --i) d.text += pieces[pick(rng)];
  d.source_class = static_cast<SourceClass>(rng() % 4);
  d.dup_count = 1 + static_cast<std::int64_t>(rng() % 5000);
  d.curated = rng() % 2;
  if (rng() % 2) d.timestamp = "2024-0" + std::to_string(1 + rng() % 9) + "-15";
  if (rng() % 3 == 0) d.extra["lang"] = pieces[pick(rng)];
  return d;
}

TEST(WriteRecords, RoundTripRandomDocuments) {
  std::mt19937_64 rng(42);
  std::vector<Document> docs;
  for (int i = 0; i < 500; ++i) docs.push_back(random_document(rng, i));
  std::stringstream buffer;
  ASSERT_EQ(write_records(docs, buffer), docs.size());
  const auto back = read_records(buffer);
  EXPECT_TRUE(back.errors.empty());
  ASSERT_EQ(back.documents.size(), docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) ASSERT_EQ(back.documents[i], docs[i]) << i;
}

TEST(WriteRecords, EmbeddedNewlineStaysOnOneLine) {
  std::stringstream buffer;
  write_record(Document{"n", "line one\nline two"}, buffer);
  const std::string s = buffer.str();
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 1);
  const auto back = read_records(buffer);
  ASSERT_EQ(back.documents.size(), 1u);
  EXPECT_EQ(back.documents[0].text, "line one\nline two");
}

}  // namespace
}  // namespace ptkit
