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

#include "hiro/core/similarity.hpp"

#include <cmath>
#include <string>

#include "hiro/errors.hpp"

namespace hiro {

namespace {

void check_dims(std::span<const double> q, std::span<const double> n) {
  if (q.size() != n.size()) {
    throw DimensionError("dimension mismatch: " + std::to_string(q.size()) + " vs " +
                         std::to_string(n.size()));
  }
}

}  // namespace

double cosine_similarity(std::span<const double> q, std::span<const double> n) {
  check_dims(q, n);
  double dot = 0.0, qq = 0.0, nn = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    dot += q[i] * n[i];
    qq += q[i] * q[i];
    nn += n[i] * n[i];
  }
  if (qq == 0.0 || nn == 0.0) throw DegenerateVectorError("cosine similarity of a zero vector");
  return dot / (std::sqrt(qq) * std::sqrt(nn));
}

double cosine_similarity(const Embedding& q, const Embedding& n) {
  return cosine_similarity(q.values(), n.values());
}

double similarity(SimilarityMetric metric, std::span<const double> q,
                  std::span<const double> n) {
  switch (metric) {
    case SimilarityMetric::cosine:
      return cosine_similarity(q, n);
    case SimilarityMetric::neg_euclidean: {
      check_dims(q, n);
      double sum = 0.0;
      for (std::size_t i = 0; i < q.size(); ++i) sum += (q[i] - n[i]) * (q[i] - n[i]);
      return -std::sqrt(sum);
    }
    case SimilarityMetric::neg_manhattan: {
      check_dims(q, n);
      double sum = 0.0;
      for (std::size_t i = 0; i < q.size(); ++i) sum += std::abs(q[i] - n[i]);
      return -sum;
    }
  }
  return cosine_similarity(q, n);
}

double similarity(SimilarityMetric metric, const Embedding& q, const Embedding& n) {
  return similarity(metric, q.values(), n.values());
}

}  // namespace hiro
