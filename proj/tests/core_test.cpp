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

#include <cmath>
#include <cstring>
#include <sstream>

#include "fixtures.hpp"
#include "hiro/core/index_io.hpp"
#include "hiro/core/similarity.hpp"
#include "hiro/core/tokenizer.hpp"
#include "hiro/errors.hpp"
#include "hiro/indexer/indexer.hpp"
#include "hiro/rng.hpp"

namespace hiro {
namespace {

using testing::fixture_nodes;
using testing::make_node;

Embedding vec(std::vector<double> v) { return Embedding(std::move(v)); }

TEST(CosineSimilarity, HandValues) {
  EXPECT_DOUBLE_EQ(cosine_similarity(vec({1, 0}), vec({1, 0})), 1.0);
  EXPECT_DOUBLE_EQ(cosine_similarity(vec({1, 0}), vec({0, 1})), 0.0);
  // 1 / sqrt(2)
  EXPECT_NEAR(cosine_similarity(vec({1, 0}), vec({1, 1})), 0.70710678, 1e-8);
}

TEST(CosineSimilarity, Errors) {
  EXPECT_THROW(cosine_similarity(vec({1, 0}), vec({1, 0, 0})), DimensionError);
  EXPECT_THROW(cosine_similarity(vec({0, 0}), vec({1, 0})), DegenerateVectorError);
}

TEST(CosineSimilarity, RandomProperties) {
  Rng rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t dim = 1 + rng.below(16);
    std::vector<double> a(dim), b(dim);
    for (auto& x : a) x = rng.normal() * 10;
    for (auto& x : b) x = rng.normal() * 10;
    const Embedding q(a), n(b);
    const double c = cosine_similarity(q, n);
    EXPECT_LE(std::abs(c), 1.0 + 1e-9);
    EXPECT_NEAR(cosine_similarity(q, q), 1.0, 1e-9);
    EXPECT_DOUBLE_EQ(c, cosine_similarity(n, q));
    const double alpha = std::exp(rng.uniform(-5, 5));
    for (auto& x : a) x *= alpha;
    EXPECT_NEAR(cosine_similarity(Embedding(a), n), c, 1e-9);
  }
}

TEST(Similarity, DistanceKinds) {
  EXPECT_DOUBLE_EQ(similarity(SimilarityMetric::neg_euclidean, vec({3, 4}), vec({3, 4})), 0.0);
  EXPECT_DOUBLE_EQ(similarity(SimilarityMetric::neg_manhattan, vec({1, 0}), vec({0, 1})), -2.0);
  EXPECT_NEAR(similarity(SimilarityMetric::neg_euclidean, vec({1, 0}), vec({0, 1})), -1.41421356,
              1e-8);
  EXPECT_DOUBLE_EQ(similarity(SimilarityMetric::cosine, vec({1, 0}), vec({1, 0})), 1.0);
  // Zero vectors are fine for distances.
  EXPECT_DOUBLE_EQ(similarity(SimilarityMetric::neg_manhattan, vec({0, 0}), vec({0, 0})), 0.0);
  EXPECT_THROW(similarity(SimilarityMetric::neg_euclidean, vec({1}), vec({1, 2})), DimensionError);
}

TEST(Similarity, NearerIsHigherForEveryKind) {
  const auto q = vec({1, 0});
  const auto near = vec({0.9, 0.1});
  const auto far = vec({-1, 0.5});
  for (auto m : {SimilarityMetric::cosine, SimilarityMetric::neg_euclidean,
                 SimilarityMetric::neg_manhattan}) {
    EXPECT_GT(similarity(m, q, near), similarity(m, q, far)) << to_string(m);
  }
}

TEST(Embedding, RejectsEmptyAndNonFinite) {
  EXPECT_THROW(Embedding(std::vector<double>{}), DimensionError);
  EXPECT_THROW(Embedding(std::vector<double>{1.0, NAN}), DegenerateVectorError);
  EXPECT_THROW(Embedding(std::vector<double>{INFINITY}), DegenerateVectorError);
}

TEST(Tokenizer, Whitespace) {
  EXPECT_EQ(count_tokens("", "whitespace"), 0u);
  EXPECT_EQ(count_tokens("the cat sat", "whitespace"), 3u);
  EXPECT_EQ(count_tokens("a  b\tc\n", "whitespace"), 3u);
  EXPECT_EQ(tokenize("  a  b\tc\n", "whitespace"), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_THROW(count_tokens("x", "gpt-9"), UnknownTokenizerError);
}

TEST(Tokenizer, Registry) {
  register_tokenizer("chars", [](std::string_view s) {
    std::vector<std::string> out;
    for (char c : s) out.emplace_back(1, c);
    return out;
  });
  EXPECT_TRUE(has_tokenizer("chars"));
  EXPECT_EQ(count_tokens("abc", "chars"), 3u);
  EXPECT_THROW(register_tokenizer("whitespace", whitespace_tokens), DomainError);
}

HierarchyIndex index_of(std::vector<Node> nodes, std::size_t dim = 2) {
  IndexMeta meta;
  meta.dim = dim;
  meta.embedder_id = "test";
  return HierarchyIndex(meta, std::move(nodes));
}

TEST(ValidateIndex, FixtureAndMinimalTreeAreValid) {
  EXPECT_TRUE(validate_index(testing::fixture_tree()).ok());
  const auto single = index_of({make_node("only", 0, std::nullopt, {}, {1, 0})});
  EXPECT_TRUE(validate_index(single).ok());
  EXPECT_EQ(single.layers().size(), 1u);
}

TEST(ValidateIndex, ParentLinkMismatch) {
  auto nodes = fixture_nodes();
  // A lists B? No: make R list A1 while A1 says its parent is A.
  nodes[0].children.push_back("A1");
  const auto report = validate_index(index_of(nodes));
  ASSERT_FALSE(report.ok());
  bool found = false;
  for (const auto& v : report.violations) found = found || v.message() == "parent-link mismatch at A1";
  EXPECT_TRUE(found);
}

TEST(ValidateIndex, ParentLinkMismatchFromChildSide) {
  auto nodes = fixture_nodes();
  nodes[2].parent = "A";  // B claims A, but only R lists it
  const auto report = validate_index(index_of(nodes));
  bool found = false;
  for (const auto& v : report.violations) found = found || v.message() == "parent-link mismatch at B";
  EXPECT_TRUE(found);
}

TEST(ValidateIndex, CycleDetected) {
  std::vector<Node> nodes = {
      make_node("R", 0, std::nullopt, {}, {1, 0}),
      make_node("X", 1, "Y", {"Y"}, {1, 0}),
      make_node("Y", 2, "X", {"X"}, {0, 1}),
  };
  const auto report = validate_index(index_of(nodes));
  EXPECT_TRUE(report.has("cycle detected"));
}

TEST(ValidateIndex, OtherRules) {
  {
    auto nodes = fixture_nodes();
    nodes.push_back(nodes[4]);
    EXPECT_TRUE(validate_index(index_of(nodes)).has("duplicate-id"));
  }
  {
    auto nodes = fixture_nodes();
    nodes[3].layer = 3;
    EXPECT_TRUE(validate_index(index_of(nodes)).has("layer-arithmetic"));
  }
  {
    auto nodes = fixture_nodes();
    nodes[3].embedding = Embedding({0.0, 0.0});
    EXPECT_TRUE(validate_index(index_of(nodes)).has("zero-norm-embedding"));
  }
  {
    auto nodes = fixture_nodes();
    nodes[3].embedding = Embedding({1.0, 0.0, 0.0});
    EXPECT_TRUE(validate_index(index_of(nodes)).has("dim-mismatch"));
  }
  {
    auto nodes = fixture_nodes();
    nodes[3].token_count += 1;
    EXPECT_TRUE(validate_index(index_of(nodes)).has("token-count-mismatch"));
  }
  {
    auto nodes = fixture_nodes();
    nodes[0].parent = "A";
    EXPECT_TRUE(validate_index(index_of(nodes)).has("root-has-parent"));
  }
  {
    auto nodes = fixture_nodes();
    nodes[1].children.push_back("ghost");
    EXPECT_TRUE(validate_index(index_of(nodes)).has("unknown-child"));
  }
  EXPECT_TRUE(validate_index(index_of({})).has("no-roots"));
}

TEST(HierarchyIndex, LayersDerivedFromTree) {
  auto nodes = fixture_nodes();
  std::reverse(nodes.begin(), nodes.end());
  const HierarchyIndex index(testing::fixture_tree().meta(), nodes);
  ASSERT_TRUE(index.is_valid());
  const std::vector<std::vector<NodeId>> expected = {{"R"}, {"A", "B"}, {"A1", "A2"}};
  EXPECT_EQ(index.layers(), expected);
  EXPECT_EQ(index, testing::fixture_tree());
  EXPECT_THROW(index.at("nope"), InvalidIndexError);
}

TEST(IndexIo, RoundTripIsExact) {
  const auto fixture = testing::fixture_tree();
  EXPECT_EQ(load_index(save_index(fixture)), fixture);

  BuildConfig config;
  config.fan_out = 2;
  config.embedder.dim = 8;
  const std::vector<std::string> chunks = {"alpha beta.", "gamma delta!", "epsilon", "zeta eta"};
  const auto six = build_hierarchy(chunks, config);
  ASSERT_EQ(six.size(), 6u);
  const auto loaded = load_index(save_index(six));
  EXPECT_EQ(loaded, six);
  for (const Node& node : six.nodes()) {
    const auto a = node.embedding.values();
    const auto b = loaded.at(node.id).embedding.values();
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(std::memcmp(&a[i], &b[i], sizeof(double)), 0);
    }
  }
}

TEST(IndexIo, RoundTripRandomTrees) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto tree = testing::random_tree(seed, {.max_nodes = 60});
    ASSERT_TRUE(tree.is_valid());
    EXPECT_EQ(load_index(save_index(tree)), tree) << "seed " << seed;
  }
}

TEST(IndexIo, Errors) {
  const std::string header =
      R"({"version":1,"dim":2,"embedder_id":"e","tokenizer_id":"whitespace","metric":"cosine",)";
  const std::string node_a =
      R"({"id":"a","layer":0,"parent":null,"children":[],"text":"x","token_count":1,"embedding":[1,0]})";
  EXPECT_NO_THROW(load_index(header + R"("nodes":[)" + node_a + "]}"));
  EXPECT_THROW(load_index(header + R"("nodes":[)" + node_a + "," + node_a + "]}"),
               InvalidIndexError);
  const std::string dim3 =
      R"({"version":1,"dim":3,"embedder_id":"e","tokenizer_id":"whitespace","metric":"cosine","nodes":[)";
  EXPECT_THROW(load_index(dim3 + node_a + "]}"), ParseError);
  EXPECT_THROW(load_index("{not json"), ParseError);
  EXPECT_THROW(load_index(header + R"("nodes":"x"})"), ParseError);
  EXPECT_THROW(load_index(std::string(R"({"version":2})")), ParseError);
  const std::string bad_metric =
      R"({"version":1,"dim":2,"embedder_id":"e","tokenizer_id":"whitespace","metric":"dot","nodes":[]})";
  EXPECT_THROW(load_index(bad_metric), ParseError);
}

}  // namespace
}  // namespace hiro
