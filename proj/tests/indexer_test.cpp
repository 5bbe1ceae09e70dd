/*
 * Copyright 2026 The hiro Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "hiro/core/tokenizer.hpp"
#include "hiro/errors.hpp"
#include "hiro/indexer/indexer.hpp"
#include "hiro/rng.hpp"

namespace hiro {
namespace {

std::vector<std::size_t> sizes(const std::vector<std::string>& chunks) {
  std::vector<std::size_t> out;
  for (const auto& c : chunks) out.push_back(count_tokens(c, "whitespace"));
  return out;
}

TEST(ChunkText, UnderLimitIsOneChunk) {
  const auto chunks = chunk_text("one two three", 10, "whitespace");
  ASSERT_EQ(chunks.size(), 1u);
  EXPECT_EQ(chunks[0], "one two three");
}

TEST(ChunkText, PrefersSentenceEnds) {
  const auto chunks = chunk_text("a. b. c. d. e. f. g. h. i. j.", 3, "whitespace");
  EXPECT_EQ(sizes(chunks), (std::vector<std::size_t>{3, 3, 3, 1}));
  // The cut lands after the sentence end even when it is short of the limit.
  const auto mixed = chunk_text("one two. three four five six", 3, "whitespace");
  EXPECT_EQ(mixed[0], "one two.");
  EXPECT_EQ(sizes(mixed), (std::vector<std::size_t>{2, 3, 1}));
}

TEST(ChunkText, HardSplitWithoutPunctuation) {
  const auto chunks = chunk_text("a b c d e f g", 3, "whitespace");
  EXPECT_EQ(sizes(chunks), (std::vector<std::size_t>{3, 3, 1}));
  EXPECT_EQ(chunks[2], "g");
}

TEST(ChunkText, Errors) {
  EXPECT_THROW(chunk_text("", 3, "whitespace"), EmptyDocumentError);
  EXPECT_THROW(chunk_text("   ", 3, "whitespace"), EmptyDocumentError);
}

TEST(ChunkText, PreservesTokensAndRespectsLimit) {
  Rng rng(3);
  const char* vocab[] = {"x", "y.", "z!", "w", "q?", "\"end.\""};
  for (int trial = 0; trial < 200; ++trial) {
    std::string doc;
    const std::size_t n = 1 + rng.below(60);
    for (std::size_t i = 0; i < n; ++i) doc += std::string(vocab[rng.below(6)]) + (rng.below(4) ? " " : "\n  ");
    const std::size_t limit = 1 + rng.below(8);
    const auto chunks = chunk_text(doc, limit, "whitespace");
    std::vector<std::string> rejoined;
    for (const auto& c : chunks) {
      EXPECT_LE(count_tokens(c, "whitespace"), limit);
      for (auto& t : whitespace_tokens(c)) rejoined.push_back(t);
    }
    EXPECT_EQ(rejoined, whitespace_tokens(doc));
  }
}

TEST(DefaultSummarize, Examples) {
  const std::vector<std::string> ab_c = {"a b", "c"};
  EXPECT_EQ(default_summarize(ab_c, 10, "whitespace"), "a b c");
  const std::vector<std::string> ab_cd = {"a b", "c d"};
  EXPECT_EQ(default_summarize(ab_cd, 3, "whitespace"), "a b c");
  const std::vector<std::string> blank = {""};
  EXPECT_THROW(default_summarize(blank, 3, "whitespace"), EmptyDocumentError);
  EXPECT_THROW(default_summarize({}, 3, "whitespace"), EmptyDocumentError);
}

BuildConfig small_config(std::size_t fan_out) {
  BuildConfig c;
  c.fan_out = fan_out;
  c.embedder.dim = 8;
  return c;
}

std::vector<std::string> numbered(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("chunk " + std::to_string(i));
  return out;
}

TEST(BuildHierarchy, SingleChunk) {
  const auto index = build_hierarchy(numbered(1), small_config(2));
  EXPECT_EQ(index.size(), 1u);
  EXPECT_EQ(index.layers().size(), 1u);
  EXPECT_TRUE(index.nodes()[0].is_leaf());
}

TEST(BuildHierarchy, FourChunksFanOutTwo) {
  const auto index = build_hierarchy(numbered(4), small_config(2));
  EXPECT_EQ(index.size(), 6u);
  ASSERT_EQ(index.layers().size(), 2u);
  EXPECT_EQ(index.layers()[0].size(), 2u);
  EXPECT_EQ(index.layers()[1].size(), 4u);
  EXPECT_EQ(index.at(index.layers()[0][0]).text, "chunk 0 chunk 1");
}

TEST(BuildHierarchy, FiveChunksFanOutTwo) {
  const auto index = build_hierarchy(numbered(5), small_config(2));
  EXPECT_EQ(index.size(), 10u);
  ASSERT_EQ(index.layers().size(), 3u);
  EXPECT_EQ(index.layers()[0].size(), 2u);
  EXPECT_EQ(index.layers()[1].size(), 3u);
  EXPECT_EQ(index.layers()[2].size(), 5u);
}

TEST(BuildHierarchy, Errors) {
  EXPECT_THROW(build_hierarchy(std::vector<std::string>{}, small_config(2)), EmptyDocumentError);
  EXPECT_THROW(build_hierarchy(std::vector<std::string>{"ok", " "}, small_config(2)),
               EmptyDocumentError);
  EXPECT_THROW(build_hierarchy(numbered(3), small_config(1)), DomainError);
}

// n + ceil(n/f) + ceil(ceil(n/f)/f) + ..., stopping at the first term <= f.
std::size_t expected_nodes(std::size_t n, std::size_t f) {
  std::size_t total = n;
  while (n > f) {
    n = (n + f - 1) / f;
    total += n;
  }
  return total;
}

TEST(BuildHierarchy, NodeCountMatchesArithmetic) {
  Rng rng(17);
  std::vector<std::size_t> ns;
  for (std::size_t n = 1; n <= 120; ++n) ns.push_back(n);
  for (int i = 0; i < 12; ++i) ns.push_back(121 + rng.below(9880));
  ns.push_back(10000);
  for (std::size_t n : ns) {
    const std::size_t f = 2 + rng.below(7);
    auto config = small_config(f);
    config.chunk_token_limit = 4;
    RandomSphereEmbedder embedder(3, n);
    const auto index = build_hierarchy(numbered(n), config, embedder);
    ASSERT_EQ(index.size(), expected_nodes(n, f)) << "n=" << n << " f=" << f;
    ASSERT_TRUE(index.is_valid());

    // Leaves in layer order reproduce the chunks.
    const auto& leaves = index.layers().back();
    if (n > 1) {
      ASSERT_EQ(leaves.size(), n);
      for (std::size_t i = 0; i < n; ++i) ASSERT_EQ(index.at(leaves[i]).text, "chunk " + std::to_string(i));
    }
  }
}

TEST(BuildHierarchy, ChunksUnderFanOutAreAllRoots) {
  const auto index = build_hierarchy(numbered(3), small_config(4));
  EXPECT_EQ(index.size(), 3u);
  EXPECT_EQ(index.layers()[0].size(), 3u);
}

TEST(LoadCorpus, JsonlTextAndDirectory) {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "hiro_corpus_test";
  fs::remove_all(dir);
  fs::create_directories(dir / "docs");
  {
    std::ofstream(dir / "c.jsonl") << R"({"id":"d1","text":"hello there."})" << "\n\n"
                                   << R"({"id":"d2","text":"second doc"})" << "\n";
    std::ofstream(dir / "docs" / "b.txt") << "bee";
    std::ofstream(dir / "docs" / "a.txt") << "ay";
    std::ofstream(dir / "bad.jsonl") << "{\"id\":1}\n";
  }
  const auto jsonl = load_corpus(dir / "c.jsonl");
  ASSERT_EQ(jsonl.size(), 2u);
  EXPECT_EQ(jsonl[1].id, "d2");
  const auto txt = load_corpus(dir / "docs");
  ASSERT_EQ(txt.size(), 2u);
  EXPECT_EQ(txt[0].id, "a");
  EXPECT_EQ(load_corpus(dir / "docs" / "b.txt")[0].text, "bee");
  EXPECT_THROW(load_corpus(dir / "bad.jsonl"), ParseError);
  fs::remove_all(dir);
}

}  // namespace
}  // namespace hiro
