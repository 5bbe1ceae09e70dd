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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hiro/core/types.hpp"
#include "hiro/retrieval/retrieval.hpp"

namespace hiro::testing {

// T1: root R with children A and B; A has leaves A1 and A2; B is a leaf.
// 2-d embeddings chosen so that q = (1, 0) gives hand-checkable cosines.
std::vector<Node> fixture_nodes();
HierarchyIndex fixture_tree();
Query fixture_query();

Node make_node(std::string id, std::size_t layer, std::optional<std::string> parent,
               std::vector<std::string> children, std::vector<double> embedding,
               std::string text = "");

Query make_query(std::vector<double> embedding);

struct RandomTreeOptions {
  std::size_t max_nodes = 500;
  std::size_t max_roots = 3;
  std::size_t min_dim = 2;
  std::size_t max_dim = 8;
};

// Random forest with random shape and Gaussian embeddings; independent of
// the indexer so shapes are not restricted to consecutive fan-out groups.
HierarchyIndex random_tree(std::uint64_t seed, const RandomTreeOptions& options = {});
Query random_query(std::size_t dim, std::uint64_t seed);

}  // namespace hiro::testing
