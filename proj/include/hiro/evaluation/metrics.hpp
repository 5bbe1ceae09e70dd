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

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hiro {

struct GenScores {
  double rouge_l_f1 = 0.0;
  double bleu1 = 0.0;
  double bleu4 = 0.0;
  double meteor = 0.0;
};

struct ClsScores {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  /// confusion[gold][predicted], rows and columns in `labels` order.
  std::vector<std::vector<std::size_t>> confusion;
};

/// LCS-based ROUGE-L F1. Throws EmptyReferenceError.
double rouge_l_f1(std::string_view candidate, std::string_view reference,
                  std::string_view tokenizer_id = "whitespace");

/// Sentence BLEU with uniform weights over 1..n-grams, clipped counts, the
/// closest-reference brevity penalty and no smoothing. Throws
/// EmptyReferenceError when `references` is empty.
double bleu_n(std::string_view candidate, std::span<const std::string> references, int n,
              std::string_view tokenizer_id = "whitespace");

/// METEOR without synonym matching: exact then Porter-stem unigram
/// alignment, F_mean = 10PR/(R+9P), fragmentation penalty 0.5 (chunks/m)^3.
double meteor_lite(std::string_view candidate, std::string_view reference,
                   std::string_view tokenizer_id = "whitespace");

/// Confusion matrix, accuracy and macro-averaged precision/recall/F1.
/// Throws ShapeError on empty or mismatched inputs and on labels missing
/// from `labels`.
ClsScores classification_metrics(std::span<const int> predictions, std::span<const int> gold,
                                 std::span<const int> labels);

/// score / ln(avg_context_tokens). Throws DomainError unless
/// avg_context_tokens > 1.
double efficiency_adjusted(double score, double avg_context_tokens);

/// 2PR/(P+R), 0 when P+R = 0.
double harmonic_f1(double precision, double recall);

}  // namespace hiro
