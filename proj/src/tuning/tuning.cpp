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


#include "hiro/tuning/tuning.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>

#include "hiro/errors.hpp"
#include "hiro/rng.hpp"

namespace hiro {

using nlohmann::json;

void ParamBounds::validate() const {
  for (double v : {s_min, s_max, d_min, d_max}) {
    if (!std::isfinite(v)) throw DomainError("parameter bounds must be finite");
  }
  if (s_min > s_max) throw DomainError("S bounds are inverted");
  if (d_min > d_max) throw DomainError("Delta bounds are inverted");
}

bool ParamBounds::contains(double s, double delta) const {
  return s >= s_min && s <= s_max && delta >= d_min && delta <= d_max;
}

ParamBounds parse_bounds(std::string_view text) {
  std::array<double, 4> v{};
  std::stringstream in{std::string(text)};
  std::string item;
  std::size_t i = 0;
  while (std::getline(in, item, ',')) {
    if (i == v.size()) throw DomainError("bounds need exactly four values");
    try {
      std::size_t used = 0;
      v[i] = std::stod(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw DomainError("bad bound value '" + item + "'");
    }
    ++i;
  }
  if (i != v.size()) throw DomainError("bounds need exactly four values");
  ParamBounds b{v[0], v[1], v[2], v[3]};
  b.validate();
  return b;
}

std::vector<double> normalize_scores(std::span<const TrialRecord> history, std::string_view metric) {
  if (history.empty()) throw DomainError("cannot normalize an empty history");
  std::vector<double> raw;
  raw.reserve(history.size());
  for (const auto& t : history) {
    auto it = t.raw_metrics.find(std::string(metric));
    if (it == t.raw_metrics.end()) throw UnknownMetricError("unknown metric '" + std::string(metric) + "'");
    raw.push_back(it->second);
  }
  const auto [lo, hi] = std::minmax_element(raw.begin(), raw.end());
  const double min = *lo, span = *hi - *lo;
  for (double& x : raw) x = span > 0.0 ? (x - min) / span : 0.5;
  return raw;
}

double narrativeqa_objective(const GenScores& normalized) {
  return normalized.rouge_l_f1 + normalized.bleu1 + normalized.bleu4 + normalized.meteor;
}

double quality_objective(const ClsScores& scores) { return harmonic_f1(scores.precision, scores.recall); }

namespace {

constexpr double kNoise = 1e-6;
constexpr std::size_t kCandidates = 1000;
constexpr std::size_t kLocalStarts = 3;

using Vec2 = std::array<double, 2>;

struct Space {
  ParamBounds b;

  double width(std::size_t d) const { return d == 0 ? b.s_max - b.s_min : b.d_max - b.d_min; }
  bool degenerate() const { return width(0) == 0.0 && width(1) == 0.0; }

  TuningPoint to_point(const Vec2& u) const {
    return {b.s_min + std::clamp(u[0], 0.0, 1.0) * width(0),
            b.d_min + std::clamp(u[1], 0.0, 1.0) * width(1)};
  }
  Vec2 to_unit(const TuningPoint& p) const {
    return {width(0) > 0 ? (p.s - b.s_min) / width(0) : 0.0,
            width(1) > 0 ? (p.delta - b.d_min) / width(1) : 0.0};
  }
};

class Tracker {
 public:
  Tracker(const MetricObjective& objective, std::uint64_t seed, const ParamBounds& bounds)
      : objective_(objective) {
    result_.seed = seed;
    result_.bounds = bounds;
  }

  void evaluate(const TuningPoint& p) {
    const auto start = std::chrono::steady_clock::now();
    TrialRecord t;
    t.params = p;
    t.raw_metrics = objective_.evaluate(p);
    t.wall_time_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    t.iteration = result_.history.size();
    result_.history.push_back(std::move(t));
    rescore();
  }

  const std::vector<TrialRecord>& history() const { return result_.history; }

  TuningResult finish() {
    std::size_t best = 0;
    for (std::size_t i = 1; i < result_.history.size(); ++i) {
      if (result_.history[i].objective > result_.history[best].objective) best = i;
    }
    result_.best = result_.history[best].params;
    result_.best_value = result_.history[best].objective;
    return std::move(result_);
  }

 private:
  void rescore() {
    const auto values = objective_.combine(result_.history);
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!std::isfinite(values[i])) throw DomainError("objective returned a non-finite value");
      result_.history[i].objective = values[i];
    }
  }

  const MetricObjective& objective_;
  TuningResult result_;
};

MetricObjective wrap(const Objective& f) {
  return {[&f](const TuningPoint& p) { return std::map<std::string, double>{{"value", f(p)}}; },
          [](std::span<const TrialRecord> h) {
            std::vector<double> out;
            out.reserve(h.size());
            for (const auto& t : h) out.push_back(t.raw_metrics.at("value"));
            return out;
          }};
}

std::vector<Vec2> latin_hypercube(std::size_t n, Rng& rng) {
  std::vector<Vec2> pts(n);
  for (std::size_t d = 0; d < 2; ++d) {
    std::vector<std::size_t> strata(n);
    for (std::size_t i = 0; i < n; ++i) strata[i] = i;
    for (std::size_t i = n; i > 1; --i) std::swap(strata[i - 1], strata[rng.below(i)]);
    for (std::size_t i = 0; i < n; ++i) {
      pts[i][d] = (static_cast<double>(strata[i]) + rng.uniform()) / static_cast<double>(n);
    }
  }
  return pts;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }
double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

// Zero-mean GP on standardized targets with an RBF kernel whose per-axis
// length scales maximize the marginal likelihood (signal variance profiled
// out in closed form).
class Gp {
 public:
  Gp(const std::vector<Vec2>& x, const std::vector<double>& y) : x_(x) {
    const auto n = static_cast<Eigen::Index>(y.size());
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : y) var += (v - mean) * (v - mean);
    const double sd = var > 0.0 ? std::sqrt(var / static_cast<double>(n)) : 1.0;
    y_.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) y_(i) = (y[static_cast<std::size_t>(i)] - mean) / sd;
    best_y_ = y_.maxCoeff();
    fit();
  }

  double expected_improvement(const Vec2& u) const {
    const Eigen::VectorXd r = kernel_row(u, ls_);
    const double mu = r.dot(alpha_);
    const Eigen::VectorXd v = llt_.matrixL().solve(r);
    const double var = std::max(sigma2_ * (1.0 + jitter_ - v.squaredNorm()), 1e-12);
    const double sd = std::sqrt(var);
    const double gain = mu - best_y_ - 0.01;
    const double z = gain / sd;
    return gain * normal_cdf(z) + sd * normal_pdf(z);
  }

 private:
  Eigen::VectorXd kernel_row(const Vec2& u, const Vec2& ls) const {
    Eigen::VectorXd r(static_cast<Eigen::Index>(x_.size()));
    for (std::size_t i = 0; i < x_.size(); ++i) {
      double d2 = 0.0;
      for (std::size_t d = 0; d < 2; ++d) {
        const double t = (u[d] - x_[i][d]) / ls[d];
        d2 += t * t;
      }
      r(static_cast<Eigen::Index>(i)) = std::exp(-0.5 * d2);
    }
    return r;
  }

  // Returns the profiled log marginal likelihood, or -inf if the matrix is
  // not positive definite even with extra jitter.
  double factor(const Vec2& ls, Eigen::LLT<Eigen::MatrixXd>& llt, double& jitter) const {
    const auto n = static_cast<Eigen::Index>(x_.size());
    Eigen::MatrixXd k(n, n);
    for (Eigen::Index i = 0; i < n; ++i) k.row(i) = kernel_row(x_[static_cast<std::size_t>(i)], ls);
    for (jitter = kNoise; jitter < 1e-1; jitter *= 10.0) {
      llt.compute(k + jitter * Eigen::MatrixXd::Identity(n, n));
      if (llt.info() == Eigen::Success) break;
    }
    if (llt.info() != Eigen::Success) return -std::numeric_limits<double>::infinity();
    const Eigen::VectorXd a = llt.solve(y_);
    const double quad = std::max(y_.dot(a) / static_cast<double>(n), 1e-300);
    const double logdet = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
    return -0.5 * static_cast<double>(n) * std::log(quad) - 0.5 * logdet;
  }

  void fit() {
    constexpr int kGrid = 14;
    double best = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < kGrid; ++i) {
      for (int j = 0; j < kGrid; ++j) {
        const Vec2 ls{0.03 * std::pow(100.0, i / double(kGrid - 1)),
                      0.03 * std::pow(100.0, j / double(kGrid - 1))};
        Eigen::LLT<Eigen::MatrixXd> llt;
        double jitter = kNoise;
        const double lml = factor(ls, llt, jitter);
        if (lml > best) {
          best = lml;
          ls_ = ls;
        }
      }
    }
    factor(ls_, llt_, jitter_);
    alpha_ = llt_.solve(y_);
    sigma2_ = std::max(y_.dot(alpha_) / static_cast<double>(y_.size()), 1e-12);
  }

  std::vector<Vec2> x_;
  Eigen::VectorXd y_;
  double best_y_ = 0.0;
  Vec2 ls_{1.0, 1.0};
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::VectorXd alpha_;
  double sigma2_ = 1.0;
  double jitter_ = kNoise;
};

Vec2 clamp_unit(Vec2 u) {
  for (double& c : u) c = std::clamp(c, 0.0, 1.0);
  return u;
}

bool already_seen(const Vec2& u, const std::vector<Vec2>& xs) {
  for (const auto& x : xs) {
    if (std::abs(x[0] - u[0]) < 1e-9 && std::abs(x[1] - u[1]) < 1e-9) return true;
  }
  return false;
}

Vec2 maximize_ei(const Gp& gp, const std::vector<Vec2>& xs, Rng& rng, const Space& space) {
  const std::array<bool, 2> active{space.width(0) > 0, space.width(1) > 0};
  auto sample = [&] {
    return Vec2{active[0] ? rng.uniform() : 0.0, active[1] ? rng.uniform() : 0.0};
  };

  std::vector<std::pair<double, Vec2>> scored;
  scored.reserve(kCandidates);
  for (std::size_t i = 0; i < kCandidates; ++i) {
    const Vec2 u = sample();
    scored.emplace_back(gp.expected_improvement(u), u);
  }
  const std::size_t starts = std::min(kLocalStarts, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(starts), scored.end(),
                    [](const auto& a, const auto& b) { return a.first > b.first; });

  // Compass search from the best few candidates.
  double best_ei = scored[0].first;
  Vec2 best = scored[0].second;
  for (std::size_t s = 0; s < starts; ++s) {
    auto [ei, u] = scored[s];
    for (double step = 0.05; step > 1e-4; step *= 0.5) {
      bool moved = true;
      while (moved) {
        moved = false;
        for (std::size_t d = 0; d < 2; ++d) {
          if (!active[d]) continue;
          for (double sign : {1.0, -1.0}) {
            Vec2 v = u;
            v[d] += sign * step;
            v = clamp_unit(v);
            const double e = gp.expected_improvement(v);
            if (e > ei) {
              ei = e;
              u = v;
              moved = true;
            }
          }
        }
      }
    }
    if (ei > best_ei) {
      best_ei = ei;
      best = u;
    }
  }
  if (already_seen(best, xs)) best = sample();
  return best;
}

TuningResult run_bayes(const MetricObjective& objective, const ParamBounds& bounds,
                       std::size_t budget, std::uint64_t seed) {
  bounds.validate();
  if (budget < 1) throw DomainError("tuning budget must be at least 1");
  const Space space{bounds};
  Tracker tracker(objective, seed, bounds);
  if (space.degenerate()) {
    tracker.evaluate(space.to_point({0.0, 0.0}));
    return tracker.finish();
  }

  Rng rng(seed);
  const std::size_t n_init = std::min(budget, std::max<std::size_t>(2, budget / 5));
  std::vector<Vec2> xs = latin_hypercube(n_init, rng);
  for (auto& u : xs) {
    if (space.width(0) == 0) u[0] = 0.0;
    if (space.width(1) == 0) u[1] = 0.0;
    tracker.evaluate(space.to_point(u));
  }

  while (tracker.history().size() < budget) {
    std::vector<double> ys;
    for (const auto& t : tracker.history()) ys.push_back(t.objective);
    const Gp gp(xs, ys);
    const Vec2 next = maximize_ei(gp, xs, rng, space);
    xs.push_back(next);
    tracker.evaluate(space.to_point(next));
  }
  return tracker.finish();
}

TuningResult run_random(const MetricObjective& objective, const ParamBounds& bounds,
                        std::size_t budget, std::uint64_t seed) {
  bounds.validate();
  if (budget < 1) throw DomainError("tuning budget must be at least 1");
  const Space space{bounds};
  Tracker tracker(objective, seed, bounds);
  Rng rng(seed);
  for (std::size_t i = 0; i < budget; ++i) {
    const double a = rng.uniform();
    const double b = rng.uniform();
    tracker.evaluate(space.to_point({a, b}));
  }
  return tracker.finish();
}

}  // namespace

TuningResult bayes_optimize(const Objective& objective, const ParamBounds& bounds,
                            std::size_t budget, std::uint64_t seed) {
  return run_bayes(wrap(objective), bounds, budget, seed);
}

TuningResult bayes_optimize(const MetricObjective& objective, const ParamBounds& bounds,
                            std::size_t budget, std::uint64_t seed) {
  return run_bayes(objective, bounds, budget, seed);
}

TuningResult random_search_baseline(const Objective& objective, const ParamBounds& bounds,
                                    std::size_t budget, std::uint64_t seed) {
  return run_random(wrap(objective), bounds, budget, seed);
}

TuningResult random_search_baseline(const MetricObjective& objective, const ParamBounds& bounds,
                                    std::size_t budget, std::uint64_t seed) {
  return run_random(objective, bounds, budget, seed);
}

MetricObjective make_retrieval_objective(const HierarchyIndex& index, const QaDataset& dataset,
                                         Embedder& embedder, Reader& reader, HiroVariant variant,
                                         std::string tokenizer_id) {
  if (dataset.examples.empty()) throw DomainError("tuning needs a non-empty dataset");
  index.require_valid();
  std::vector<std::string> questions;
  for (const auto& ex : dataset.examples) questions.push_back(ex.question);
  auto embeddings = std::make_shared<std::vector<Embedding>>(embedder.embed(questions));
  const EvalMode mode = dataset.mode;

  MetricObjective obj;
  obj.evaluate = [&index, &dataset, &reader, embeddings, variant, tokenizer_id,
                  questions = std::move(questions)](const TuningPoint& p) {
    RetrieverConfig cfg;
    cfg.algorithm = variant == HiroVariant::iterative ? Algorithm::hiro_iterative : Algorithm::hiro;
    cfg.params.selection_threshold = p.s;
    cfg.params.delta_threshold = p.delta;
    cfg.params.variant = variant;
    std::vector<QueryRecord> records;
    for (std::size_t i = 0; i < dataset.examples.size(); ++i) {
      const Query q{questions[i], (*embeddings)[i]};
      records.push_back(make_record(dataset.examples[i].id, cfg, run_query(q, index, cfg)));
    }
    EvalOptions opts;
    opts.tokenizer_id = tokenizer_id;
    const auto rep = evaluate_retrieval_run(records, dataset, reader, opts);
    std::map<std::string, double> m;
    if (rep.generative) {
      m = {{"rouge_l_f1", rep.generative->rouge_l_f1},
           {"bleu1", rep.generative->bleu1},
           {"bleu4", rep.generative->bleu4},
           {"meteor_lite", rep.generative->meteor}};
    } else if (rep.classification) {
      m = {{"accuracy", rep.classification->accuracy},
           {"precision", rep.classification->precision},
           {"recall", rep.classification->recall},
           {"f1", rep.classification->f1}};
    }
    m["avg_context_tokens"] = rep.avg_context_tokens.value_or(0.0);
    return m;
  };
  if (mode == EvalMode::generative) {
    obj.combine = [](std::span<const TrialRecord> h) {
      const auto r = normalize_scores(h, "rouge_l_f1");
      const auto b1 = normalize_scores(h, "bleu1");
      const auto b4 = normalize_scores(h, "bleu4");
      const auto m = normalize_scores(h, "meteor_lite");
      std::vector<double> out(h.size());
      for (std::size_t i = 0; i < h.size(); ++i) out[i] = narrativeqa_objective({r[i], b1[i], b4[i], m[i]});
      return out;
    };
  } else {
    obj.combine = [](std::span<const TrialRecord> h) {
      std::vector<double> out;
      for (const auto& t : h) {
        ClsScores s;
        s.precision = t.raw_metrics.at("precision");
        s.recall = t.raw_metrics.at("recall");
        out.push_back(quality_objective(s));
      }
      return out;
    };
  }
  return obj;
}

json to_json(const ParamBounds& b) {
  return {{"s_min", b.s_min}, {"s_max", b.s_max}, {"d_min", b.d_min}, {"d_max", b.d_max}};
}

json to_json(const TrialRecord& t) {
  return {{"params", {{"S", t.params.s}, {"Delta", t.params.delta}}},
          {"objective", t.objective},
          {"raw_metrics", t.raw_metrics},
          {"timestamp", t.iteration},
          {"wall_time_ns", t.wall_time_ns}};
}

json to_json(const TuningResult& r) {
  json history = json::array();
  for (const auto& t : r.history) history.push_back(to_json(t));
  return {{"best", {{"S", r.best.s}, {"Delta", r.best.delta}}},
          {"best_value", r.best_value},
          {"history", std::move(history)},
          {"seed", r.seed},
          {"bounds", to_json(r.bounds)}};
}

}  // namespace hiro
