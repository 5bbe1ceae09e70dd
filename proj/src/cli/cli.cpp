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


#include "hiro/cli/cli.hpp"

#include <CLI11.hpp>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "hiro/bench/bench.hpp"
#include "hiro/core/index_io.hpp"
#include "hiro/core/types.hpp"
#include "hiro/embedding/embedder.hpp"
#include "hiro/errors.hpp"
#include "hiro/evaluation/evaluate.hpp"
#include "hiro/indexer/indexer.hpp"
#include "hiro/retrieval/retrieval.hpp"
#include "hiro/tuning/tuning.hpp"

namespace hiro {
namespace {

using nlohmann::json;

struct Options {
  std::string index, corpus, dataset, results, out, json_out;
  std::vector<std::string> questions;
  std::string algorithm = "hiro";
  double s = HiroParams{}.selection_threshold;
  double delta = HiroParams{}.delta_threshold;
  std::string variant = "recursive";
  bool retain_parent = false;
  std::size_t k = 5;
  std::optional<std::size_t> token_cap;
  std::string metric = "cosine";
  std::optional<std::string> embedder;
  std::size_t dim = 64;
  std::size_t fan_out = 4;
  std::size_t chunk_tokens = 100;
  std::uint64_t seed = 0;
  std::size_t budget = 30;
  std::string bounds = "0,1,-0.1,0.5";
  std::string reader = "extractive";
  std::vector<std::size_t> sizes{1000, 2000, 4000, 8000, 16000};
  std::size_t queries = 30;
  std::vector<std::string> algorithms{"tree-traversal", "hiro", "hiro-iterative", "collapsed-tree"};
  bool no_context = false;
  bool per_document = false;
};

class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : fallback_(fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw ReaderError("cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : fallback_; }

 private:
  std::ofstream file_;
  std::ostream& fallback_;
};

HiroParams hiro_params(const Options& o) {
  HiroParams p;
  p.selection_threshold = o.s;
  p.delta_threshold = o.delta;
  p.retain_parent_on_prune = o.retain_parent;
  p.variant = o.variant == "iterative" ? HiroVariant::iterative : HiroVariant::recursive;
  return p;
}

RetrieverConfig retriever_config(const Options& o, Algorithm algorithm) {
  RetrieverConfig c;
  c.algorithm = algorithm;
  c.params = hiro_params(o);
  if (algorithm == Algorithm::hiro && c.params.variant == HiroVariant::iterative) {
    c.algorithm = Algorithm::hiro_iterative;
  }
  if (c.algorithm == Algorithm::hiro_iterative) c.params.variant = HiroVariant::iterative;
  c.k = o.k;
  c.token_cap = o.token_cap;
  return c;
}

// Query embedder matching the index; --embedder overrides the recorded id.
std::unique_ptr<Embedder> query_embedder(const HierarchyIndex& index, const Options& o) {
  EmbedderConfig cfg;
  cfg.embedder_id = o.embedder.value_or(index.meta().embedder_id);
  cfg.dim = index.dim();
  if (cfg.embedder_id != "deterministic" && cfg.embedder_id != "remote") {
    throw DomainError("index was built with embedder '" + cfg.embedder_id +
                      "', which cannot embed queries; pass --embedder");
  }
  return make_embedder(cfg);
}

struct QuerySet {
  std::vector<std::string> ids;
  std::vector<Query> queries;
};

QuerySet load_queries(const HierarchyIndex& index, const Options& o) {
  QuerySet set;
  std::vector<std::string> texts;
  if (!o.dataset.empty()) {
    for (auto& q : load_questions(o.dataset)) {
      set.ids.push_back(std::move(q.id));
      texts.push_back(std::move(q.question));
    }
  }
  for (std::size_t i = 0; i < o.questions.size(); ++i) {
    set.ids.push_back("q" + std::to_string(i));
    texts.push_back(o.questions[i]);
  }
  const auto embeddings = query_embedder(index, o)->embed(texts);
  for (std::size_t i = 0; i < texts.size(); ++i) set.queries.push_back({texts[i], embeddings[i]});
  return set;
}

std::string file_stem_for(const std::string& id) {
  std::string out = id;
  for (char& c : out) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_' && c != '.') c = '_';
  }
  return out.empty() ? "doc" : out;
}

int run_build(const Options& o, std::ostream& out, std::ostream& err) {
  BuildConfig cfg;
  cfg.chunk_token_limit = o.chunk_tokens;
  cfg.fan_out = o.fan_out;
  cfg.embedder.embedder_id = o.embedder.value_or("deterministic");
  cfg.embedder.dim = o.dim;
  cfg.metric = parse_metric(o.metric);
  const auto docs = load_corpus(o.corpus);

  if (o.per_document) {
    if (o.out.empty()) throw DomainError("--per-document needs --out DIR");
    std::filesystem::create_directories(o.out);
    for (const auto& doc : docs) {
      const auto chunks = chunk_text(doc.text, cfg.chunk_token_limit, cfg.tokenizer_id);
      const auto index = build_hierarchy(chunks, cfg);
      const auto path = std::filesystem::path(o.out) / (file_stem_for(doc.id) + ".json");
      save_index_file(index, path);
      err << path.string() << ": " << index.size() << " nodes in " << index.layers().size() << " layers\n";
    }
    return kExitOk;
  }

  std::vector<std::string> chunks;
  for (const auto& doc : docs) {
    for (auto& c : chunk_text(doc.text, cfg.chunk_token_limit, cfg.tokenizer_id)) chunks.push_back(std::move(c));
  }
  if (chunks.empty()) throw EmptyDocumentError("corpus '" + o.corpus + "' has no text");
  const auto index = build_hierarchy(chunks, cfg);
  Output dest(o.out, out);
  save_index(index, dest.stream());
  err << "built " << index.size() << " nodes in " << index.layers().size() << " layers from "
      << chunks.size() << " chunks\n";
  return kExitOk;
}

int run_validate(const Options& o, std::ostream& out, std::ostream& err) {
  try {
    const auto index = load_index_file(o.index);
    out << "ok (" << index.size() << " nodes, " << index.layers().size() << " layers)\n";
    return kExitOk;
  } catch (const InvalidIndexError& e) {
    out << "invalid\n";
    err << e.kind() << ": " << e.what() << '\n';
    return kExitData;
  }
}

int run_query_cmd(const Options& o, std::ostream& out, std::ostream& err) {
  const auto index = load_index_file(o.index);
  const auto set = load_queries(index, o);
  if (set.queries.empty()) throw DomainError("no queries: pass --question or --dataset");
  const auto cfg = retriever_config(o, parse_algorithm(o.algorithm));
  Output dest(o.out, out);
  std::size_t emitted = 0;
  for (std::size_t i = 0; i < set.queries.size(); ++i) {
    const auto rec = make_record(set.ids[i], cfg, run_query(set.queries[i], index, cfg));
    emitted += rec.emitted.size();
    dest.stream() << to_json(rec, !o.no_context).dump() << '\n';
  }
  err << set.queries.size() << " queries, " << emitted << " nodes emitted\n";
  return kExitOk;
}

int run_eval(const Options& o, std::ostream& out, std::ostream& err) {
  const auto results = load_results(o.results);
  const auto dataset = load_dataset(o.dataset);
  std::optional<HierarchyIndex> index;
  EvalOptions opts;
  if (!o.index.empty()) {
    index = load_index_file(o.index);
    opts.index = &*index;
  }
  if (o.reader != "extractive") throw DomainError("unknown reader '" + o.reader + "'");
  ExtractiveReader reader;
  const auto report = evaluate_retrieval_run(results, dataset, reader, opts);
  Output dest(o.out, out);
  dest.stream() << to_json(report).dump(2) << '\n';
  err << report.n_queries << " queries evaluated\n";
  return kExitOk;
}

int run_tune(const Options& o, std::ostream& out, std::ostream& err) {
  const auto index = load_index_file(o.index);
  const auto dataset = load_dataset(o.dataset);
  const auto bounds = parse_bounds(o.bounds);
  auto embedder = query_embedder(index, o);
  ExtractiveReader reader;
  const auto objective = make_retrieval_objective(index, dataset, *embedder, reader, hiro_params(o).variant);
  const auto result = bayes_optimize(objective, bounds, o.budget, o.seed);
  Output dest(o.out, out);
  dest.stream() << to_json(result).dump(2) << '\n';
  err << "best S=" << result.best.s << " Delta=" << result.best.delta << " value=" << result.best_value
      << " after " << result.history.size() << " trials\n";
  return kExitOk;
}

int run_bench(const Options& o, std::ostream& out, std::ostream& err) {
  BenchSpec spec;
  spec.sizes = o.sizes;
  spec.fan_out = o.fan_out;
  spec.dim = o.dim;
  spec.queries_per_size = o.queries;
  spec.seed = o.seed;
  spec.algorithms.clear();
  for (const auto& a : o.algorithms) spec.algorithms.push_back(parse_algorithm(a));
  spec.params = hiro_params(o);
  spec.k = o.k;
  const auto report = run_scaling_bench(spec);
  {
    Output dest(o.out, out);
    dest.stream() << to_csv(report);
  }
  if (!o.json_out.empty()) {
    Output js(o.json_out, out);
    js.stream() << to_json(report, true).dump(2) << '\n';
  }
  err << report.rows.size() << " rows\n";
  return kExitOk;
}

int run_context_report(const Options& o, std::ostream& out, std::ostream& err) {
  const auto index = load_index_file(o.index);
  const auto set = load_queries(index, o);
  std::vector<RetrieverConfig> configs;
  for (const auto& a : o.algorithms) configs.push_back(retriever_config(o, parse_algorithm(a)));
  const auto report = context_length_report(index, set.queries, configs, set.ids);
  out << to_table(report);
  if (!o.out.empty()) {
    Output dest(o.out, err);
    dest.stream() << to_json(report).dump(2) << '\n';
  }
  if (!o.json_out.empty()) {
    Output dest(o.json_out, err);
    for (const auto& rec : report.records) dest.stream() << to_json(rec, false).dump() << '\n';
  }
  return kExitOk;
}

void add_hiro_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--s", o.s, "Selection threshold S")->capture_default_str();
  cmd->add_option("--delta", o.delta, "Delta threshold")->capture_default_str();
  cmd->add_option("--variant", o.variant, "HIRO variant")
      ->check(CLI::IsMember({"recursive", "iterative"}))
      ->capture_default_str();
  cmd->add_flag("--retain-parent", o.retain_parent, "Emit a parent whose subtree was pruned empty");
  cmd->add_option("--k", o.k, "Top-k for the baselines")->check(CLI::PositiveNumber)->capture_default_str();
}

void add_embedder_flag(CLI::App* cmd, Options& o) {
  cmd->add_option("--embedder", o.embedder, "Embedder id (env HIRO_EMBED_ENDPOINT sets the remote URL)")
      ->check(CLI::IsMember({"deterministic", "remote"}));
}

const std::vector<std::string> kAlgorithms{"hiro", "hiro-iterative", "tree-traversal", "collapsed-tree"};

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Hierarchical retrieval over summary trees", "hiro"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  auto* build = app.add_subcommand("build", "Chunk a corpus and build an index file");
  build->add_option("--corpus", o.corpus, "Directory of .txt files, a .jsonl file or a text file")
      ->required()
      ->check(CLI::ExistingPath);
  build->add_option("--out", o.out, "Index file to write (default stdout); a directory with --per-document");
  build->add_flag("--per-document", o.per_document, "Build one index per document instead of one per corpus");
  add_embedder_flag(build, o);
  build->add_option("--dim", o.dim, "Embedding width")->check(CLI::PositiveNumber)->capture_default_str();
  build->add_option("--fan-out", o.fan_out, "Children per summary node")->check(CLI::Range(2, 1 << 20))->capture_default_str();
  build->add_option("--chunk-tokens", o.chunk_tokens, "Chunk size in tokens")->check(CLI::PositiveNumber)->capture_default_str();
  build->add_option("--metric", o.metric, "Similarity metric")
      ->check(CLI::IsMember({"cosine", "neg_euclidean", "neg_manhattan"}))
      ->capture_default_str();
  build->add_option("--seed", o.seed, "Seed (the build itself is deterministic)");

  auto* validate = app.add_subcommand("validate", "Check an index file against the tree invariants");
  validate->add_option("--index", o.index, "Index file")->required()->check(CLI::ExistingFile);

  auto* query = app.add_subcommand("query", "Retrieve context for questions and write results JSONL");
  query->add_option("--index", o.index, "Index file")->required()->check(CLI::ExistingFile);
  query->add_option("--question", o.questions, "Question text (repeatable)");
  query->add_option("--dataset", o.dataset, "Query batch or dataset JSONL ({\"id\", \"question\"} per line)")->check(CLI::ExistingFile);
  query->add_option("--out", o.out, "Results JSONL (default stdout)");
  query->add_option("--algorithm", o.algorithm, "Retriever")->check(CLI::IsMember(kAlgorithms))->capture_default_str();
  add_hiro_flags(query, o);
  query->add_option("--token-cap", o.token_cap, "Token cap for collapsed-tree");
  add_embedder_flag(query, o);
  query->add_option("--seed", o.seed, "Seed (retrieval is deterministic)");
  query->add_flag("--no-context", o.no_context, "Omit the context text from each record");

  auto* eval = app.add_subcommand("eval", "Score a results file against a dataset");
  eval->add_option("--results", o.results, "Results JSONL from `query`")->required()->check(CLI::ExistingFile);
  eval->add_option("--dataset", o.dataset, "Dataset JSONL")->required()->check(CLI::ExistingFile);
  eval->add_option("--index", o.index, "Index used to rebuild contexts missing from results")->check(CLI::ExistingFile);
  eval->add_option("--reader", o.reader, "Reader")->check(CLI::IsMember({"extractive"}))->capture_default_str();
  eval->add_option("--out", o.out, "Report JSON (default stdout)");
  eval->add_option("--seed", o.seed, "Seed (evaluation is deterministic)");

  auto* tune = app.add_subcommand("tune", "Bayesian optimization of S and Delta on a dataset");
  tune->add_option("--index", o.index, "Index file")->required()->check(CLI::ExistingFile);
  tune->add_option("--dataset", o.dataset, "Dataset JSONL")->required()->check(CLI::ExistingFile);
  tune->add_option("--bounds", o.bounds, "S_MIN,S_MAX,D_MIN,D_MAX")->capture_default_str();
  tune->add_option("--budget", o.budget, "Objective evaluations")->check(CLI::PositiveNumber)->capture_default_str();
  tune->add_option("--seed", o.seed, "Tuner seed")->capture_default_str();
  tune->add_option("--variant", o.variant, "HIRO variant")
      ->check(CLI::IsMember({"recursive", "iterative"}))
      ->capture_default_str();
  add_embedder_flag(tune, o);
  tune->add_option("--out", o.out, "Tuning JSON (default stdout)");

  auto* bench = app.add_subcommand("bench", "Operation-count scaling benchmark on synthetic trees");
  bench->add_option("--sizes", o.sizes, "Leaf counts, strictly increasing")->delimiter(',')->capture_default_str();
  bench->add_option("--fan-out", o.fan_out, "Children per summary node")->check(CLI::Range(2, 1 << 20))->capture_default_str();
  bench->add_option("--dim", o.dim, "Embedding width")->check(CLI::PositiveNumber)->capture_default_str();
  bench->add_option("--queries", o.queries, "Queries per size")->check(CLI::PositiveNumber)->capture_default_str();
  bench->add_option("--algorithm", o.algorithms, "Algorithms to run (repeatable)")
      ->check(CLI::IsMember(kAlgorithms))
      ->capture_default_str();
  add_hiro_flags(bench, o);
  bench->add_option("--seed", o.seed, "Seed for trees and queries")->capture_default_str();
  bench->add_option("--out", o.out, "CSV output (default stdout)");
  bench->add_option("--json-out", o.json_out, "JSON output with per-run records");

  auto* report = app.add_subcommand("context-report", "Mean context length per retriever over one query set");
  report->add_option("--index", o.index, "Index file")->required()->check(CLI::ExistingFile);
  report->add_option("--question", o.questions, "Question text (repeatable)");
  report->add_option("--dataset", o.dataset, "Query batch or dataset JSONL ({\"id\", \"question\"} per line)")->check(CLI::ExistingFile);
  report->add_option("--algorithm", o.algorithms, "Algorithms to compare (repeatable)")
      ->check(CLI::IsMember(kAlgorithms))
      ->capture_default_str();
  add_hiro_flags(report, o);
  report->add_option("--token-cap", o.token_cap, "Token cap for collapsed-tree");
  add_embedder_flag(report, o);
  report->add_option("--seed", o.seed, "Seed (retrieval is deterministic)");
  report->add_option("--out", o.out, "Report JSON");
  report->add_option("--json-out", o.json_out, "Per-query results JSONL");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    err << "run with --help for usage\n";
    return kExitUsage;
  }

  try {
    if (*build) return run_build(o, out, err);
    if (*validate) return run_validate(o, out, err);
    if (*query) return run_query_cmd(o, out, err);
    if (*eval) return run_eval(o, out, err);
    if (*tune) return run_tune(o, out, err);
    if (*bench) return run_bench(o, out, err);
    if (*report) return run_context_report(o, out, err);
  } catch (const Error& e) {
    err << e.kind() << ": " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace hiro
