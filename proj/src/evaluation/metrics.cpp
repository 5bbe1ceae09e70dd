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

#include "hiro/evaluation/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <unordered_map>

#include "hiro/core/tokenizer.hpp"
#include "hiro/errors.hpp"
#include "hiro/evaluation/porter.hpp"

namespace hiro {

namespace {

std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

using NgramCounts = std::map<std::vector<std::string>, std::size_t>;

NgramCounts ngrams(const std::vector<std::string>& tokens, std::size_t n) {
  NgramCounts out;
  if (tokens.size() < n) return out;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++out[std::vector<std::string>(tokens.begin() + i, tokens.begin() + i + n)];
  }
  return out;
}

// Aligns still-unmatched candidate tokens to unmatched reference tokens that
// share the same key. Each candidate takes the reference occurrence that
// continues the previous alignment when possible, else the leftmost free one;
// this keeps the match count maximal and keeps chunks low.
void align_stage(const std::vector<std::string>& cand_keys, const std::vector<std::string>& ref_keys,
                 std::vector<long>& cand_to_ref, std::vector<bool>& ref_used) {
  std::unordered_map<std::string, std::vector<std::size_t>> free_refs;
  for (std::size_t j = 0; j < ref_keys.size(); ++j) {
    if (!ref_used[j]) free_refs[ref_keys[j]].push_back(j);
  }
  for (std::size_t i = 0; i < cand_keys.size(); ++i) {
    if (cand_to_ref[i] >= 0) continue;
    auto it = free_refs.find(cand_keys[i]);
    if (it == free_refs.end() || it->second.empty()) continue;
    auto& slots = it->second;
    auto pick = slots.begin();
    if (i > 0 && cand_to_ref[i - 1] >= 0) {
      const auto want = static_cast<std::size_t>(cand_to_ref[i - 1] + 1);
      auto hit = std::find(slots.begin(), slots.end(), want);
      if (hit != slots.end()) pick = hit;
    }
    cand_to_ref[i] = static_cast<long>(*pick);
    ref_used[*pick] = true;
    slots.erase(pick);
  }
}

}  // namespace

double rouge_l_f1(std::string_view candidate, std::string_view reference,
                  std::string_view tokenizer_id) {
  const auto ref = tokenize(reference, tokenizer_id);
  if (ref.empty()) throw EmptyReferenceError("ROUGE-L needs a non-empty reference");
  const auto cand = tokenize(candidate, tokenizer_id);
  if (cand.empty()) return 0.0;
  // 2PR/(P+R) with P = lcs/|cand| and R = lcs/|ref|, in one rounding step.
  const std::size_t lcs = lcs_length(cand, ref);
  return 2.0 * static_cast<double>(lcs) / static_cast<double>(cand.size() + ref.size());
}

double bleu_n(std::string_view candidate, std::span<const std::string> references, int n,
              std::string_view tokenizer_id) {
  if (references.empty()) throw EmptyReferenceError("BLEU needs at least one reference");
  if (n < 1) throw DomainError("BLEU order must be >= 1");
  const auto cand = tokenize(candidate, tokenizer_id);
  if (cand.empty()) return 0.0;
  std::vector<std::vector<std::string>> refs;
  refs.reserve(references.size());
  for (const auto& r : references) refs.push_back(tokenize(r, tokenizer_id));

  double log_sum = 0.0;
  for (int order = 1; order <= n; ++order) {
    const auto cand_counts = ngrams(cand, static_cast<std::size_t>(order));
    if (cand_counts.empty()) return 0.0;
    NgramCounts max_ref;
    for (const auto& r : refs) {
      for (const auto& [gram, count] : ngrams(r, static_cast<std::size_t>(order))) {
        auto& slot = max_ref[gram];
        slot = std::max(slot, count);
      }
    }
    std::size_t clipped = 0, total = 0;
    for (const auto& [gram, count] : cand_counts) {
      total += count;
      auto it = max_ref.find(gram);
      if (it != max_ref.end()) clipped += std::min(count, it->second);
    }
    if (clipped == 0) return 0.0;
    log_sum += std::log(static_cast<double>(clipped) / static_cast<double>(total));
  }

  // Closest reference length; ties go to the shorter reference.
  const auto c = static_cast<long>(cand.size());
  long r = -1;
  for (const auto& ref : refs) {
    const auto len = static_cast<long>(ref.size());
    if (r < 0 || std::labs(len - c) < std::labs(r - c) ||
        (std::labs(len - c) == std::labs(r - c) && len < r)) {
      r = len;
    }
  }
  const double bp = c < r ? std::exp(1.0 - static_cast<double>(r) / static_cast<double>(c)) : 1.0;
  return bp * std::exp(log_sum / n);
}

double meteor_lite(std::string_view candidate, std::string_view reference,
                   std::string_view tokenizer_id) {
  const auto ref = tokenize(reference, tokenizer_id);
  if (ref.empty()) throw EmptyReferenceError("METEOR needs a non-empty reference");
  const auto cand = tokenize(candidate, tokenizer_id);
  if (cand.empty()) return 0.0;

  std::vector<long> cand_to_ref(cand.size(), -1);
  std::vector<bool> ref_used(ref.size(), false);
  align_stage(cand, ref, cand_to_ref, ref_used);

  std::vector<std::string> cand_stems, ref_stems;
  cand_stems.reserve(cand.size());
  ref_stems.reserve(ref.size());
  for (const auto& t : cand) cand_stems.push_back(porter_stem(t));
  for (const auto& t : ref) ref_stems.push_back(porter_stem(t));
  align_stage(cand_stems, ref_stems, cand_to_ref, ref_used);

  std::size_t matches = 0, chunks = 0;
  long prev = -2;
  for (long j : cand_to_ref) {
    if (j < 0) {
      prev = -2;
      continue;
    }
    ++matches;
    if (j != prev + 1) ++chunks;
    prev = j;
  }
  if (matches == 0) return 0.0;

  const double m = static_cast<double>(matches);
  const double p = m / static_cast<double>(cand.size());
  const double r = m / static_cast<double>(ref.size());
  const double f_mean = 10.0 * p * r / (r + 9.0 * p);
  const double frag = static_cast<double>(chunks) / m;
  const double penalty = 0.5 * frag * frag * frag;
  return f_mean * (1.0 - penalty);
}

double harmonic_f1(double precision, double recall) {
  return precision + recall == 0.0 ? 0.0 : 2.0 * precision * recall / (precision + recall);
}

ClsScores classification_metrics(std::span<const int> predictions, std::span<const int> gold,
                                 std::span<const int> labels) {
  if (predictions.size() != gold.size()) {
    throw ShapeError("predictions and gold differ in length");
  }
  if (predictions.empty()) throw ShapeError("no examples to score");
  if (labels.empty()) throw ShapeError("no labels");
  std::map<int, std::size_t> slot;
  for (std::size_t i = 0; i < labels.size(); ++i) slot.emplace(labels[i], i);
  auto slot_of = [&](int label) {
    auto it = slot.find(label);
    if (it == slot.end()) throw ShapeError("label " + std::to_string(label) + " not in label set");
    return it->second;
  };

  const std::size_t k = labels.size();
  ClsScores out;
  out.confusion.assign(k, std::vector<std::size_t>(k, 0));
  for (std::size_t i = 0; i < gold.size(); ++i) ++out.confusion[slot_of(gold[i])][slot_of(predictions[i])];

  std::size_t correct = 0;
  for (std::size_t i = 0; i < k; ++i) correct += out.confusion[i][i];
  out.accuracy = static_cast<double>(correct) / static_cast<double>(gold.size());

  double p_sum = 0.0, r_sum = 0.0, f_sum = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t predicted = 0, actual = 0;
    for (std::size_t i = 0; i < k; ++i) {
      predicted += out.confusion[i][c];
      actual += out.confusion[c][i];
    }
    const double tp = static_cast<double>(out.confusion[c][c]);
    const double p = predicted == 0 ? 0.0 : tp / static_cast<double>(predicted);
    const double r = actual == 0 ? 0.0 : tp / static_cast<double>(actual);
    p_sum += p;
    r_sum += r;
    f_sum += harmonic_f1(p, r);
  }
  out.precision = p_sum / static_cast<double>(k);
  out.recall = r_sum / static_cast<double>(k);
  out.f1 = f_sum / static_cast<double>(k);
  return out;
}

double efficiency_adjusted(double score, double avg_context_tokens) {
  if (!(avg_context_tokens > 1.0)) {
    throw DomainError("efficiency adjustment needs an average context length above 1 token");
  }
  return score / std::log(avg_context_tokens);
}

}  // namespace hiro
