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

#include <algorithm>
#include <cmath>

#include "fixtures.hpp"
#include "hiro/errors.hpp"
#include "hiro/rng.hpp"
#include "hiro/tuning/tuning.hpp"

namespace hiro {
namespace {

double quadratic(const TuningPoint& p) {
  return -(p.s - 0.6) * (p.s - 0.6) - (p.delta - 0.1) * (p.delta - 0.1);
}

TrialRecord trial(std::map<std::string, double> raw) {
  TrialRecord t;
  t.raw_metrics = std::move(raw);
  return t;
}

std::vector<TrialRecord> series(std::initializer_list<double> xs) {
  std::vector<TrialRecord> h;
  for (double x : xs) h.push_back(trial({{"m", x}}));
  return h;
}

void expect_near(const std::vector<double>& got, const std::vector<double>& want) {
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], want[i], 1e-12) << i;
}

TEST(Normalize, Examples) {
  expect_near(normalize_scores(series({0.2, 0.6, 1.0}), "m"), {0.0, 0.5, 1.0});
  expect_near(normalize_scores(series({0.4, 0.4}), "m"), {0.5, 0.5});
  expect_near(normalize_scores(series({1, 3, 2}), "m"), {0.0, 1.0, 0.5});
  EXPECT_THROW(normalize_scores(series({1.0}), "other"), UnknownMetricError);
  EXPECT_THROW(normalize_scores(std::vector<TrialRecord>{}, "m"), DomainError);
}

TEST(Normalize, StaysInUnitInterval) {
  Rng rng(3);
  for (int i = 0; i < 300; ++i) {
    std::vector<TrialRecord> h;
    const std::size_t n = 1 + rng.below(30);
    for (std::size_t j = 0; j < n; ++j) h.push_back(trial({{"m", rng.normal() * 10}}));
    for (double v : normalize_scores(h, "m")) {
      ASSERT_GE(v, 0.0);
      ASSERT_LE(v, 1.0);
    }
  }
}

TEST(Objectives, Examples) {
  EXPECT_DOUBLE_EQ(narrativeqa_objective({1, 1, 1, 1}), 4.0);
  EXPECT_DOUBLE_EQ(narrativeqa_objective({0, 0, 0, 0}), 0.0);
  EXPECT_DOUBLE_EQ(narrativeqa_objective({0.5, 0.25, 0.25, 0.5}), 1.5);
  ClsScores s;
  s.precision = s.recall = 1.0;
  EXPECT_DOUBLE_EQ(quality_objective(s), 1.0);
  s.recall = 0.0;
  EXPECT_DOUBLE_EQ(quality_objective(s), 0.0);
  s.precision = 0.476749;
  s.recall = 0.488198;
  EXPECT_NEAR(quality_objective(s), 0.482406, 1e-4);
}

TEST(Bounds, ParseAndValidate) {
  const auto b = parse_bounds("0,1,-0.1,0.5");
  EXPECT_EQ(b.s_max, 1.0);
  EXPECT_EQ(b.d_min, -0.1);
  EXPECT_THROW(parse_bounds("0,1,0.5"), DomainError);
  EXPECT_THROW(parse_bounds("1,0,0,0"), DomainError);
  EXPECT_THROW(parse_bounds("0,1,x,0"), DomainError);
  EXPECT_THROW(parse_bounds("0,1,0,nan"), DomainError);
}

TEST(BayesOptimize, SingletonBounds) {
  const ParamBounds b{0.3, 0.3, 0.2, 0.2};
  const auto r = bayes_optimize(quadratic, b, 3, 1);
  EXPECT_LE(r.history.size(), 3u);
  EXPECT_EQ(r.best, (TuningPoint{0.3, 0.2}));
  EXPECT_DOUBLE_EQ(r.best_value, quadratic({0.3, 0.2}));
}

TEST(BayesOptimize, BudgetOne) {
  const auto r = bayes_optimize(quadratic, ParamBounds{}, 1, 5);
  ASSERT_EQ(r.history.size(), 1u);
  EXPECT_EQ(r.best, r.history[0].params);
}

TEST(BayesOptimize, RejectsBadInput) {
  EXPECT_THROW(bayes_optimize(quadratic, ParamBounds{}, 0, 1), DomainError);
  EXPECT_THROW(bayes_optimize(quadratic, ParamBounds{1, 0, 0, 1}, 5, 1), DomainError);
  EXPECT_THROW(bayes_optimize([](const TuningPoint&) { return NAN; }, ParamBounds{}, 3, 1), DomainError);
}

// The argmax of the test objective found by brute force on a dense grid.
TuningPoint grid_argmax() {
  TuningPoint best{};
  double best_v = -1e300;
  for (int i = 0; i <= 1000; ++i) {
    for (int j = 0; j <= 600; ++j) {
      const TuningPoint p{i / 1000.0, -0.1 + j / 1000.0};
      if (const double v = quadratic(p); v > best_v) {
        best_v = v;
        best = p;
      }
    }
  }
  return best;
}

TEST(BayesOptimize, FindsQuadraticOptimum) {
  const auto target = grid_argmax();
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto r = bayes_optimize(quadratic, ParamBounds{}, 40, seed);
    hits += std::max(std::abs(r.best.s - target.s), std::abs(r.best.delta - target.delta)) <= 0.05;
  }
  EXPECT_GE(hits, 18);
}

TEST(BayesOptimize, HistoryInvariants) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const ParamBounds b{0.2, 0.9, -0.05, 0.3};
    const auto r = bayes_optimize(quadratic, b, 25, seed);
    ASSERT_LE(r.history.size(), 25u);
    EXPECT_TRUE(b.contains(r.best.s, r.best.delta));
    double incumbent = -1e300;
    for (std::size_t i = 0; i < r.history.size(); ++i) {
      const auto& t = r.history[i];
      EXPECT_TRUE(b.contains(t.params.s, t.params.delta));
      EXPECT_EQ(t.iteration, i);
      const double next = std::max(incumbent, t.objective);
      EXPECT_GE(next, incumbent);
      incumbent = next;
    }
    EXPECT_EQ(incumbent, r.best_value);
  }
}

TEST(BayesOptimize, InitialPointsAreLatinHypercube) {
  const auto r = bayes_optimize(quadratic, ParamBounds{}, 40, 9);
  std::vector<bool> s_strata(8), d_strata(8);
  for (std::size_t i = 0; i < 8; ++i) {
    s_strata[static_cast<std::size_t>(r.history[i].params.s * 8)] = true;
    d_strata[static_cast<std::size_t>((r.history[i].params.delta + 0.1) / 0.6 * 8)] = true;
  }
  EXPECT_TRUE(std::all_of(s_strata.begin(), s_strata.end(), [](bool b) { return b; }));
  EXPECT_TRUE(std::all_of(d_strata.begin(), d_strata.end(), [](bool b) { return b; }));
}

void expect_same_history(const TuningResult& a, const TuningResult& b) {
  ASSERT_EQ(a.history.size(), b.history.size());
  for (std::size_t i = 0; i < a.history.size(); ++i) {
    EXPECT_EQ(a.history[i].params, b.history[i].params);
    EXPECT_EQ(a.history[i].objective, b.history[i].objective);
  }
  EXPECT_EQ(a.best, b.best);
}

TEST(BayesOptimize, SeededDeterminism) {
  expect_same_history(bayes_optimize(quadratic, ParamBounds{}, 20, 7),
                      bayes_optimize(quadratic, ParamBounds{}, 20, 7));
}

TEST(RandomSearch, Examples) {
  const auto one = random_search_baseline(quadratic, ParamBounds{}, 1, 3);
  ASSERT_EQ(one.history.size(), 1u);
  EXPECT_EQ(one.best, one.history[0].params);
  const auto single = random_search_baseline(quadratic, ParamBounds{0.4, 0.4, 0.0, 0.0}, 4, 3);
  EXPECT_EQ(single.best, (TuningPoint{0.4, 0.0}));
  expect_same_history(random_search_baseline(quadratic, ParamBounds{}, 15, 2),
                      random_search_baseline(quadratic, ParamBounds{}, 15, 2));
}

TEST(BayesOptimize, MedianBeatsRandomSearch) {
  std::vector<double> bo, rs;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    bo.push_back(bayes_optimize(quadratic, ParamBounds{}, 40, seed).best_value);
    rs.push_back(random_search_baseline(quadratic, ParamBounds{}, 40, seed).best_value);
  }
  std::sort(bo.begin(), bo.end());
  std::sort(rs.begin(), rs.end());
  EXPECT_GE((bo[9] + bo[10]) / 2, (rs[9] + rs[10]) / 2);
}

TEST(RetrievalObjective, TunesOnFixtureTree) {
  const auto tree = testing::fixture_tree();
  QaDataset ds;
  for (const auto& n : tree.nodes()) ds.examples.push_back({n.id, n.text, {n.text}, {}, -1});

  // Queries embed onto the stored embedding of the node they are named after.
  class LookupEmbedder final : public Embedder {
   public:
    explicit LookupEmbedder(const HierarchyIndex& idx) : idx_(idx) {}
    std::string id() const override { return "fixture"; }
    std::size_t dim() const override { return 2; }
    std::vector<Embedding> embed(std::span<const std::string> texts) override {
      std::vector<Embedding> out;
      for (const auto& t : texts) {
        for (const auto& n : idx_.nodes()) {
          if (n.text == t) out.push_back(n.embedding);
        }
      }
      return out;
    }

   private:
    const HierarchyIndex& idx_;
  } embedder(tree);

  ExtractiveReader reader;
  const auto obj = make_retrieval_objective(tree, ds, embedder, reader);
  const auto r = bayes_optimize(obj, ParamBounds{}, 6, 4);
  ASSERT_EQ(r.history.size(), 6u);
  for (const auto& t : r.history) {
    EXPECT_GE(t.objective, 0.0);
    EXPECT_LE(t.objective, 4.0);
    EXPECT_EQ(t.raw_metrics.count("rouge_l_f1"), 1u);
  }
  const auto j = to_json(r);
  EXPECT_EQ(j.at("history").size(), 6u);
  EXPECT_TRUE(j.at("best").contains("Delta"));
  EXPECT_EQ(j.at("seed"), 4);
}

}  // namespace
}  // namespace hiro
