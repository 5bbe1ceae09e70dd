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


#include "hiro/bench/bench.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "hiro/embedding/embedder.hpp"
#include "hiro/errors.hpp"
#include "hiro/indexer/indexer.hpp"
#include "hiro/rng.hpp"

namespace hiro {

using nlohmann::json;

namespace {

// splitmix64 finalizer; derives independent per-size streams from one seed.
std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

void BenchSpec::validate() const {
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] < 1) throw DomainError("bench sizes must be positive");
    if (i > 0 && sizes[i] <= sizes[i - 1]) throw DomainError("bench sizes must be strictly increasing");
  }
  if (queries_per_size < 1) throw DomainError("queries_per_size must be at least 1");
  if (fan_out < 2) throw DomainError("fan_out must be at least 2");
  if (dim < 1) throw DomainError("dim must be at least 1");
  if (k < 1) throw DomainError("k must be at least 1");
}

HierarchyIndex generate_random_tree(std::size_t n_leaves, std::size_t fan_out, std::size_t dim,
                                    std::uint64_t seed) {
  if (n_leaves < 1) throw DomainError("a random tree needs at least one leaf");
  std::vector<std::string> chunks;
  chunks.reserve(n_leaves);
  for (std::size_t i = 0; i < n_leaves; ++i) chunks.push_back("t" + std::to_string(i));
  BuildConfig config;
  config.fan_out = fan_out;
  config.embedder.embedder_id = "random-sphere";
  config.embedder.dim = dim;
  RandomSphereEmbedder embedder(dim, seed);
  return build_hierarchy(chunks, config, embedder);
}

Query random_sphere_query(std::size_t dim, std::uint64_t seed) {
  RandomSphereEmbedder e(dim, seed);
  return Query{"", e.draw()};
}

BenchReport run_scaling_bench(const BenchSpec& spec) {
  spec.validate();
  BenchReport report;
  report.spec = spec;
  if (spec.algorithms.empty()) return report;

  for (std::size_t n : spec.sizes) {
    const std::uint64_t size_seed = mix(spec.seed ^ mix(n));
    const auto tree = generate_random_tree(n, spec.fan_out, spec.dim, size_seed);
    std::size_t widest = 0;
    for (const auto& layer : tree.layers()) widest = std::max(widest, layer.size());

    std::vector<Query> queries;
    for (std::size_t q = 0; q < spec.queries_per_size; ++q) {
      queries.push_back(random_sphere_query(spec.dim, mix(size_seed + q + 1)));
    }

    for (Algorithm algorithm : spec.algorithms) {
      RetrieverConfig cfg;
      cfg.algorithm = algorithm;
      cfg.params = spec.params;
      cfg.k = spec.k;
      BenchRow row;
      row.algorithm = algorithm;
      row.n_leaves = n;
      row.n_nodes = tree.size();
      row.largest_layer = widest;
      for (std::size_t q = 0; q < queries.size(); ++q) {
        const auto r = run_query(queries[q], tree, cfg);
        const bool hiro = algorithm == Algorithm::hiro || algorithm == Algorithm::hiro_iterative;
        if (hiro && r.sim_evals > tree.size()) {
          throw std::logic_error("HIRO scored more nodes than the tree holds");
        }
        if (algorithm == Algorithm::collapsed_tree && r.sim_evals != tree.size()) {
          throw std::logic_error("collapsed tree did not score every node exactly once");
        }
        report.runs.push_back({algorithm, n, tree.size(), q, r.sim_evals, r.nodes_visited,
                               r.sort_comparisons, r.context_tokens, r.emitted.size(),
                               r.wall_time.count()});
        row.mean_sim_evals += static_cast<double>(r.sim_evals);
        row.mean_sort_comparisons += static_cast<double>(r.sort_comparisons);
        row.mean_context_tokens += static_cast<double>(r.context_tokens);
        row.mean_wall_time_ns += static_cast<double>(r.wall_time.count());
      }
      const double count = static_cast<double>(queries.size());
      row.mean_sim_evals /= count;
      row.mean_sort_comparisons /= count;
      row.mean_context_tokens /= count;
      row.mean_wall_time_ns /= count;
      report.rows.push_back(row);
    }
  }
  return report;
}

std::string to_csv(const BenchReport& report) {
  std::ostringstream out;
  out << "algorithm,n_nodes,mean_sim_evals,mean_sort_comparisons,mean_context_tokens,mean_wall_time_ns\n";
  for (const auto& r : report.rows) {
    out << bench_name(r.algorithm) << ',' << r.n_nodes << ',' << fixed(r.mean_sim_evals) << ','
        << fixed(r.mean_sort_comparisons) << ',' << fixed(r.mean_context_tokens) << ','
        << fixed(r.mean_wall_time_ns) << '\n';
  }
  return out.str();
}

json to_json(const BenchReport& report, bool include_wall_time) {
  const auto& s = report.spec;
  json algorithms = json::array();
  for (auto a : s.algorithms) algorithms.push_back(bench_name(a));
  json spec = {{"sizes", s.sizes},
               {"fan_out", s.fan_out},
               {"dim", s.dim},
               {"queries_per_size", s.queries_per_size},
               {"seed", s.seed},
               {"algorithms", std::move(algorithms)},
               {"params",
                {{"S", s.params.selection_threshold},
                 {"Delta", s.params.delta_threshold},
                 {"retain_parent", s.params.retain_parent_on_prune}}},
               {"k", s.k}};
  json rows = json::array();
  for (const auto& r : report.rows) {
    json row = {{"algorithm", bench_name(r.algorithm)},
                {"n_leaves", r.n_leaves},
                {"n_nodes", r.n_nodes},
                {"largest_layer", r.largest_layer},
                {"mean_sim_evals", r.mean_sim_evals},
                {"mean_sort_comparisons", r.mean_sort_comparisons},
                {"mean_context_tokens", r.mean_context_tokens}};
    if (include_wall_time) row["mean_wall_time_ns"] = r.mean_wall_time_ns;
    rows.push_back(std::move(row));
  }
  json runs = json::array();
  for (const auto& r : report.runs) {
    json run = {{"algorithm", bench_name(r.algorithm)},
                {"n_leaves", r.n_leaves},
                {"n_nodes", r.n_nodes},
                {"query", r.query},
                {"sim_evals", r.sim_evals},
                {"nodes_visited", r.nodes_visited},
                {"sort_comparisons", r.sort_comparisons},
                {"context_tokens", r.context_tokens},
                {"emitted", r.emitted}};
    if (include_wall_time) run["wall_time_ns"] = r.wall_time_ns;
    runs.push_back(std::move(run));
  }
  return {{"spec", std::move(spec)}, {"rows", std::move(rows)}, {"runs", std::move(runs)}};
}

std::string row_label(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::tree_traversal:
      return "Tree Traversal Querying";
    case Algorithm::hiro:
      return "HIRO Querying";
    case Algorithm::hiro_iterative:
      return "HIRO Iterative Querying";
    case Algorithm::collapsed_tree:
      return "Collapsed Tree Querying";
  }
  return "";
}

ContextReport context_length_report(const HierarchyIndex& index, std::span<const Query> queries,
                                    std::span<const RetrieverConfig> configs,
                                    std::span<const std::string> query_ids) {
  if (!query_ids.empty() && query_ids.size() != queries.size()) {
    throw ShapeError("query_ids and queries differ in length");
  }
  ContextReport report;
  for (const auto& cfg : configs) {
    ContextRow row;
    row.label = row_label(cfg.algorithm);
    row.algorithm = cfg.algorithm;
    row.n_queries = queries.size();
    for (std::size_t i = 0; i < queries.size(); ++i) {
      const auto r = run_query(queries[i], index, cfg);
      row.mean_context_tokens += static_cast<double>(r.context_tokens);
      report.records.push_back(
          make_record(query_ids.empty() ? "q" + std::to_string(i) : query_ids[i], cfg, r));
    }
    if (!queries.empty()) row.mean_context_tokens /= static_cast<double>(queries.size());
    report.rows.push_back(std::move(row));
  }

  auto mean_of = [&](Algorithm a) -> std::optional<double> {
    for (const auto& r : report.rows) {
      if (r.algorithm == a) return r.mean_context_tokens;
    }
    return std::nullopt;
  };
  const auto tt = mean_of(Algorithm::tree_traversal);
  const auto hiro = mean_of(Algorithm::hiro);
  const auto ct = mean_of(Algorithm::collapsed_tree);
  if (tt && hiro && ct) report.ordering_holds = *tt >= *hiro && *hiro >= *ct;
  return report;
}

json to_json(const ContextReport& report, bool include_wall_time) {
  json rows = json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"label", r.label},
                    {"algorithm", bench_name(r.algorithm)},
                    {"n_queries", r.n_queries},
                    {"mean_context_tokens", r.mean_context_tokens}});
  }
  json records = json::array();
  for (auto rec : report.records) {
    if (!include_wall_time) rec.wall_time_ns = 0;
    records.push_back(to_json(rec, false));
  }
  return {{"rows", std::move(rows)},
          {"ordering", "tree_traversal >= hiro_recursive >= collapsed_tree"},
          {"ordering_holds", report.ordering_holds ? json(*report.ordering_holds) : json(nullptr)},
          {"records", std::move(records)}};
}

std::string to_table(const ContextReport& report) {
  std::size_t width = std::string("Configuration").size();
  for (const auto& r : report.rows) width = std::max(width, r.label.size());
  std::ostringstream out;
  out << std::string("Configuration").append(width - 13, ' ') << "  Context Length\n";
  for (const auto& r : report.rows) {
    out << r.label << std::string(width - r.label.size(), ' ') << "  " << fixed(r.mean_context_tokens)
        << '\n';
  }
  if (report.ordering_holds) {
    out << "ordering tree_traversal >= hiro >= collapsed_tree: "
        << (*report.ordering_holds ? "holds" : "does not hold") << '\n';
  }
  return out.str();
}

}  // namespace hiro
