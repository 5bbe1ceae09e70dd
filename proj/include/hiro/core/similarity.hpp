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

#include <span>

#include "hiro/core/types.hpp"

namespace hiro {

/// (q.n) / (|q| |n|). Throws DimensionError on mismatched dims and
/// DegenerateVectorError when either norm is zero.
double cosine_similarity(const Embedding& q, const Embedding& n);
double cosine_similarity(std::span<const double> q, std::span<const double> n);

/// Metric-dispatched similarity; larger means more similar for every kind.
double similarity(SimilarityMetric metric, const Embedding& q, const Embedding& n);
double similarity(SimilarityMetric metric, std::span<const double> q,
                  std::span<const double> n);

}  // namespace hiro
