// Copyright 2026 The plab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include "plab/bm25.hpp"
#include "plab/corpus.hpp"
#include "plab/embeddings.hpp"
#include "plab/error.hpp"
#include "plab/fusion.hpp"
#include "plab/kernel_training.hpp"
#include "plab/manifest.hpp"
#include "plab/metrics.hpp"
#include "plab/rerank.hpp"
#include "plab/scoring.hpp"
#include "plab/sweep.hpp"
#include "plab/synth.hpp"
#include "plab/tokenizer.hpp"
#include "plab/triples.hpp"

namespace plab::cli {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;
using Stats = std::vector<std::pair<std::string, double>>;

struct Global {
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

struct Context {
  const CLI::App& root;
  const Global& global;
  std::ostream& out;
  std::string command;
};

void require_inputs(const std::vector<fs::path>& paths) {
  for (const auto& p : paths) {
    if (p.empty()) continue;
    if (!fs::exists(p)) {
      throw Error(ErrorKind::kNotFound, "input path does not exist: " + p.string());
    }
  }
}

fs::path manifest_path_for(const fs::path& artifact) {
  if (fs::is_directory(artifact)) return artifact / "manifest.json";
  return fs::path(artifact.string() + ".manifest.json");
}

// Global keys plus the keys of the command that ran, as TOML.
std::string config_snapshot(const Context& ctx) {
  std::string prefix = ctx.command;
  std::replace(prefix.begin(), prefix.end(), ' ', '.');
  prefix += '.';
  std::istringstream all(ctx.root.config_to_str(true, false));
  std::string snapshot, line;
  while (std::getline(all, line)) {
    const auto key = line.substr(0, line.find('='));
    if (key.find('.') == std::string::npos || line.starts_with(prefix)) {
      snapshot += line;
      snapshot += '\n';
    }
  }
  return snapshot;
}

// Writes the manifest next to the first output and prints a one-line summary.
void finish(const Context& ctx, const std::vector<fs::path>& inputs,
            const std::vector<fs::path>& outputs, const Stats& stats) {
  Manifest manifest(ctx.command);
  manifest.set_config(config_snapshot(ctx));
  manifest.set_seed(ctx.global.seed);
  for (const auto& p : inputs) {
    if (!p.empty()) manifest.add_input(p);
  }
  for (const auto& p : outputs) manifest.add_output(p);
  for (const auto& [k, v] : stats) manifest.add_stat(k, v);
  const auto manifest_path = manifest_path_for(outputs.front());
  manifest.write(manifest_path);

  Json line;
  line["command"] = ctx.command;
  Json outs = Json::array();
  for (const auto& p : outputs) outs.push_back(p.string());
  line["outputs"] = std::move(outs);
  line["manifest"] = manifest_path.string();
  for (const auto& [k, v] : stats) line[k] = v;
  ctx.out << line.dump() << '\n';
}

QuerySet read_queries(const std::vector<fs::path>& paths) {
  QuerySet all;
  for (const auto& p : paths) all = all.merged(load_queries(p, QuerySplit::kTrain));
  return all;
}

Tokenizer read_tokenizer(const fs::path& stopwords) {
  if (stopwords.empty()) return Tokenizer{};
  return Tokenizer(load_stopwords(stopwords));
}

std::vector<fs::path> concat(std::vector<fs::path> a, const std::vector<fs::path>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

// ---------------------------------------------------------------------------

struct ScorerOptions {
  std::string kind;
  fs::path query_vectors;
  fs::path passage_vectors;
  fs::path query_tokens;
  fs::path passage_tokens;
  fs::path model;
  fs::path scores;
  double corrupt_rate = 0.05;

  void bind(CLI::App* sub, const std::vector<std::string>& kinds, std::string fallback) {
    kind = std::move(fallback);
    sub->add_option("--scorer", kind, "re-ranking model")->check(CLI::IsMember(kinds))
        ->capture_default_str();
    sub->add_option("--query-vectors", query_vectors, "query vectors (.tkv), dense scorer");
    sub->add_option("--passage-vectors", passage_vectors, "passage vectors (.tkv), dense scorer");
    sub->add_option("--query-tokens", query_tokens, "query token matrices (.tkm)");
    sub->add_option("--passage-tokens", passage_tokens, "passage token matrices (.tkm)");
    sub->add_option("--model", model, "kernel model file, kernel scorer");
    sub->add_option("--scores", scores, "qid<TAB>pid<TAB>score file, scores scorer");
  }

  std::vector<fs::path> inputs() const {
    if (kind == "dense") return {query_vectors, passage_vectors};
    if (kind == "colbert") return {query_tokens, passage_tokens};
    if (kind == "kernel") return {query_tokens, passage_tokens, model};
    if (kind == "scores") return {scores};
    return {};
  }
};

struct LoadedScorer {
  VectorStore query_vectors;
  VectorStore passage_vectors;
  TokenMatrixStore query_tokens;
  TokenMatrixStore passage_tokens;
  ExternalScores external;
  std::unique_ptr<Scorer> scorer;
};

void need(const fs::path& p, const std::string& kind, const char* flag) {
  if (p.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "--scorer " + kind + " requires " + flag);
  }
}

std::unique_ptr<LoadedScorer> load_scorer(const ScorerOptions& o, const Qrels* qrels,
                                          std::uint64_t seed) {
  auto s = std::make_unique<LoadedScorer>();
  if (o.kind == "dense") {
    need(o.query_vectors, o.kind, "--query-vectors");
    need(o.passage_vectors, o.kind, "--passage-vectors");
    s->query_vectors = load_vectors(o.query_vectors);
    s->passage_vectors = load_vectors(o.passage_vectors);
    s->scorer = std::make_unique<DenseScorer>(s->query_vectors, s->passage_vectors);
  } else if (o.kind == "colbert" || o.kind == "kernel") {
    need(o.query_tokens, o.kind, "--query-tokens");
    need(o.passage_tokens, o.kind, "--passage-tokens");
    s->query_tokens = load_token_matrices(o.query_tokens);
    s->passage_tokens = load_token_matrices(o.passage_tokens);
    if (o.kind == "colbert") {
      s->scorer = std::make_unique<LateInteractionScorer>(s->query_tokens, s->passage_tokens);
    } else {
      need(o.model, o.kind, "--model");
      KernelBank bank;
      KernelWeights weights;
      load_kernel_model(o.model, bank, weights);
      s->scorer = std::make_unique<KernelScorer>(s->query_tokens, s->passage_tokens,
                                                 std::move(bank), std::move(weights));
    }
  } else if (o.kind == "scores") {
    need(o.scores, o.kind, "--scores");
    s->external = load_external_scores(o.scores);
    s->scorer = std::make_unique<ExternalScoreScorer>(s->external);
  } else if (o.kind == "oracle") {
    s->scorer = std::make_unique<OracleScorer>(*qrels);
  } else if (o.kind == "corrupted") {
    s->scorer = std::make_unique<CorruptedScorer>(*qrels, o.corrupt_rate, seed);
  } else if (o.kind == "first-stage") {
    s->scorer = std::make_unique<FirstStageScorer>();
  } else {
    throw Error(ErrorKind::kInvalidArgument, "unknown scorer '" + o.kind + "'");
  }
  return s;
}

// ---------------------------------------------------------------------------

using Action = std::function<void(const Context&)>;

struct Command {
  std::string name;
  CLI::App* app = nullptr;
  Action action;
};

class Registry {
 public:
  explicit Registry(CLI::App& root) : root_(root) {}

  CLI::App* group(const std::string& name, const std::string& help) {
    auto* g = root_.add_subcommand(name, help);
    g->require_subcommand(1);
    return g;
  }

  CLI::App* add(CLI::App* parent, const std::string& name, const std::string& help,
                std::string full_name, Action action) {
    auto* sub = parent->add_subcommand(name, help);
    commands_.push_back({std::move(full_name), sub, std::move(action)});
    return sub;
  }

  const Command* selected() const {
    for (const auto& c : commands_) {
      if (c.app->parsed()) return &c;
    }
    return nullptr;
  }

 private:
  CLI::App& root_;
  std::vector<Command> commands_;
};

const std::vector<std::string> kRerankScorers = {"dense", "colbert", "kernel", "scores"};
const std::vector<std::string> kSweepScorers = {"oracle", "corrupted",   "dense", "colbert",
                                                "kernel", "first-stage", "scores"};

struct Options {
  // synth
  fs::path synth_out;
  SynthParams synth;
  // stats
  fs::path stats_collection;
  std::vector<fs::path> stats_queries;
  fs::path stats_out;
  // qrels build
  fs::path clicks;
  std::string label_mode = "dctr";
  std::vector<double> thresholds{std::begin(kDefaultDctrThresholds),
                                 std::end(kDefaultDctrThresholds)};
  fs::path qrels_out;
  // index build / search
  fs::path collection;
  fs::path index_dir;
  Bm25Params bm25;
  fs::path stopwords;
  fs::path index_out;
  std::vector<fs::path> queries;
  std::size_t search_k = 1000;
  std::string run_name = "bm25";
  fs::path run_out;
  // triples
  fs::path qrels;
  SamplingConfig sampling;
  fs::path triples;
  fs::path triples_out;
  // embed static
  fs::path embedding;
  fs::path embed_out;
  // dense retrieve
  fs::path dense_passages;
  fs::path dense_queries;
  std::size_t dense_k = 1000;
  std::string dense_name = "dense";
  // rerank / sweep
  fs::path run;
  std::size_t rerank_depth = 200;
  std::string on_missing = "error";
  ScorerOptions scorer;
  ScorerOptions sweep_scorer;
  std::vector<std::size_t> depths{50, 100, 200, 500};
  fs::path sweep_out;
  // train kernel
  fs::path query_tokens;
  fs::path passage_tokens;
  TrainHyper hyper;
  std::vector<double> mus;
  std::vector<double> sigmas;
  fs::path init_model;
  fs::path model_out;
  // eval
  fs::path splits;
  std::vector<std::size_t> cutoffs{10, 100, 200, 1000};
  std::string zero_positive = "exclude";
  fs::path report_out;
  fs::path report_json;
  // fuse
  std::vector<fs::path> runs;
  std::string fusion = "minmax";
  double rrf_k = 60.0;
  fs::path fused_out;
};

MetricsConfig metrics_config(const Options& o) {
  auto config = MetricsConfig::from_cutoffs(o.cutoffs);
  config.zero_positive =
      o.zero_positive == "zero" ? ZeroPositivePolicy::kScoreZero : ZeroPositivePolicy::kExclude;
  return config;
}

SplitMap read_splits(const fs::path& path) {
  return path.empty() ? SplitMap{} : load_split_map(path);
}

void define_commands(Registry& reg, CLI::App& root, Options& o) {
  // synth ------------------------------------------------------------------
  {
    auto* sub = reg.add(&root, "synth", "write a synthetic fixture with planted relevance",
                        "synth", [&o](const Context& ctx) {
                          auto params = o.synth;
                          params.seed = ctx.global.seed;
                          const auto fixture = synth_fixture(params);
                          write_fixture(fixture, o.synth_out);
                          finish(ctx, {}, {o.synth_out},
                                 {{"passages", double(fixture.collection.size())},
                                  {"test_queries", double(fixture.test_queries.size())},
                                  {"train_queries", double(fixture.train_queries.size())},
                                  {"qrels_entries", double(fixture.qrels.entry_count())}});
                        });
    sub->add_option("--out", o.synth_out, "output directory")->required();
    sub->add_option("--passages", o.synth.passages)->capture_default_str();
    sub->add_option("--queries", o.synth.test_queries, "evaluation queries")
        ->capture_default_str();
    sub->add_option("--train-queries", o.synth.train_queries)->capture_default_str();
    sub->add_option("--dim", o.synth.dense_dim, "dense vector dimension")->capture_default_str();
    sub->add_option("--token-dim", o.synth.token_dim)->capture_default_str();
    sub->add_option("--background-vocab", o.synth.background_vocab)->capture_default_str();
    sub->add_option("--topic-vocab", o.synth.topic_vocab)->capture_default_str();
  }

  // stats ------------------------------------------------------------------
  {
    auto* sub = reg.add(&root, "stats", "collection and query statistics", "stats",
                        [&o](const Context& ctx) {
                          require_inputs(concat({o.stats_collection}, o.stats_queries));
                          const auto store = load_collection(o.stats_collection);
                          const auto queries = read_queries(o.stats_queries);
                          const auto s = corpus_stats(store, queries);
                          Json j;
                          j["passage_count"] = s.passage_count;
                          j["query_count"] = s.query_count;
                          j["avg_passage_words"] = s.avg_passage_words;
                          j["avg_query_words"] = s.avg_query_words;
                          j["empty_text_count"] = s.empty_text_count;
                          if (o.stats_out.empty()) {
                            ctx.out << j.dump() << '\n';
                            return;
                          }
                          {
                            auto parent = o.stats_out.parent_path();
                            if (!parent.empty()) fs::create_directories(parent);
                            std::ofstream f(o.stats_out, std::ios::binary);
                            f << j.dump(2) << '\n';
                            if (!f) throw Error(ErrorKind::kIo, "cannot write " + o.stats_out.string());
                          }
                          finish(ctx, concat({o.stats_collection}, o.stats_queries), {o.stats_out},
                                 {{"passage_count", double(s.passage_count)},
                                  {"query_count", double(s.query_count)},
                                  {"avg_passage_words", s.avg_passage_words},
                                  {"avg_query_words", s.avg_query_words}});
                        });
    sub->add_option("--collection", o.stats_collection)->required();
    sub->add_option("--queries", o.stats_queries, "query files");
    sub->add_option("--out", o.stats_out, "write the statistics as JSON");
  }

  // qrels build ------------------------------------------------------------
  {
    auto* group = reg.group("qrels", "relevance judgments");
    auto* sub = reg.add(group, "build", "derive qrels from a click log", "qrels build",
                        [&o](const Context& ctx) {
                          require_inputs({o.clicks});
                          const auto records = load_clicks(o.clicks);
                          const auto qrels = build_qrels_from_clicks(
                              records, parse_label_mode(o.label_mode), o.thresholds);
                          write_qrels(qrels, o.qrels_out);
                          finish(ctx, {o.clicks}, {o.qrels_out},
                                 {{"click_records", double(records.size())},
                                  {"queries", double(qrels.query_count())},
                                  {"entries", double(qrels.entry_count())}});
                        });
    sub->add_option("--clicks", o.clicks, "qid<TAB>pid<TAB>impressions<TAB>clicks")->required();
    sub->add_option("--mode", o.label_mode)
        ->check(CLI::IsMember({"raw", "dctr"}))
        ->capture_default_str();
    sub->add_option("--thresholds", o.thresholds, "ascending CTR grade thresholds")
        ->delimiter(',')
        ->capture_default_str();
    sub->add_option("--out", o.qrels_out)->required();
  }

  // index build / search ---------------------------------------------------
  {
    auto* group = reg.group("index", "BM25 inverted index");
    auto* build = reg.add(group, "build", "index a collection", "index build",
                          [&o](const Context& ctx) {
                            require_inputs({o.collection, o.stopwords});
                            const auto store = load_collection(o.collection);
                            const auto index = InvertedIndex::build(
                                store, o.bm25, read_tokenizer(o.stopwords), ctx.global.threads);
                            index.save(o.index_out);
                            finish(ctx, {o.collection, o.stopwords}, {o.index_out},
                                   {{"documents", double(index.doc_count())},
                                    {"terms", double(index.term_count())},
                                    {"avg_doc_length", index.avg_doc_length()}});
                          });
    build->add_option("--collection", o.collection, "id<TAB>text passages")->required();
    build->add_option("--k1", o.bm25.k1)->capture_default_str();
    build->add_option("--b", o.bm25.b)->capture_default_str();
    build->add_option("--stopwords", o.stopwords, "one stopword per line");
    build->add_option("--out", o.index_out, "index directory")->required();

    auto* search = reg.add(group, "search", "BM25 top-k for every query", "index search",
                           [&o](const Context& ctx) {
                             require_inputs(concat({o.index_dir}, o.queries));
                             const auto index = InvertedIndex::load(o.index_dir);
                             const auto queries = read_queries(o.queries);
                             const auto run = search_all(index, queries, o.search_k, o.run_name,
                                                         ctx.global.threads);
                             write_trec_run(run, o.run_out);
                             finish(ctx, concat({o.index_dir}, o.queries), {o.run_out},
                                    {{"queries", double(run.queries.size())}});
                           });
    search->add_option("--index", o.index_dir)->required();
    search->add_option("--queries", o.queries)->required();
    search->add_option("--k", o.search_k)->capture_default_str();
    search->add_option("--name", o.run_name, "run tag")->capture_default_str();
    search->add_option("--out", o.run_out, "TREC run file")->required();
  }

  // triples ----------------------------------------------------------------
  {
    auto* group = reg.group("triples", "training triples");
    auto* gen = reg.add(group, "generate", "sample (query, positive, negative) triples",
                        "triples generate", [&o](const Context& ctx) {
                          const auto inputs = concat({o.index_dir, o.qrels}, o.queries);
                          require_inputs(inputs);
                          const auto index = InvertedIndex::load(o.index_dir);
                          const auto queries = read_queries(o.queries);
                          const auto qrels = load_qrels(o.qrels);
                          auto config = o.sampling;
                          config.seed = ctx.global.seed;
                          const auto result =
                              generate_triples(queries, qrels, index, config, ctx.global.threads);
                          write_triples(result.triples, o.triples_out);
                          const auto& r = result.report;
                          finish(ctx, inputs, {o.triples_out},
                                 {{"queries_seen", double(r.queries_seen)},
                                  {"queries_without_positives", double(r.queries_without_positives)},
                                  {"queries_without_negatives", double(r.queries_without_negatives)},
                                  {"positive_pairs", double(r.positive_pairs)},
                                  {"triples_generated", double(r.triples_generated)},
                                  {"triples_written", double(r.triples_written)}});
                        });
    gen->add_option("--index", o.index_dir)->required();
    gen->add_option("--queries", o.queries)->required();
    gen->add_option("--qrels", o.qrels)->required();
    gen->add_option("--depth", o.sampling.candidate_depth, "BM25 candidate depth")
        ->capture_default_str();
    gen->add_option("--max-neg", o.sampling.max_negatives_per_positive,
                    "negatives per (query, positive)")
        ->capture_default_str();
    gen->add_option("--cap", o.sampling.triple_cap, "maximum triples written")
        ->capture_default_str();
    gen->add_flag("--legacy-mode", o.sampling.legacy_mode,
                  "only exclude the positive itself from negatives");
    gen->add_option("--out", o.triples_out)->required();

    auto* text = reg.add(group, "text", "materialize triples as query/positive/negative text",
                         "triples text", [&o](const Context& ctx) {
                           const auto inputs = concat({o.triples, o.collection}, o.queries);
                           require_inputs(inputs);
                           const auto triples = load_triples(o.triples);
                           const auto store = load_collection(o.collection);
                           const auto queries = read_queries(o.queries);
                           {
                             auto parent = o.triples_out.parent_path();
                             if (!parent.empty()) fs::create_directories(parent);
                             std::ofstream f(o.triples_out, std::ios::binary);
                             if (!f) throw Error(ErrorKind::kIo, "cannot write " + o.triples_out.string());
                             write_text_triples(triples, queries, store, f);
                             if (!f) throw Error(ErrorKind::kIo, "cannot write " + o.triples_out.string());
                           }
                           finish(ctx, inputs, {o.triples_out},
                                  {{"triples", double(triples.size())}});
                         });
    text->add_option("--triples", o.triples)->required();
    text->add_option("--collection", o.collection)->required();
    text->add_option("--queries", o.queries)->required();
    text->add_option("--out", o.triples_out)->required();
  }

  // embed static -----------------------------------------------------------
  {
    auto* group = reg.group("embed", "token matrices");
    auto* sub = reg.add(
        group, "static", "token matrices from a static word embedding", "embed static",
        [&o](const Context& ctx) {
          if (o.collection.empty() == o.queries.empty()) {
            throw Error(ErrorKind::kInvalidArgument,
                        "embed static: give exactly one of --collection or --queries");
          }
          const auto inputs = concat({o.embedding, o.collection, o.stopwords}, o.queries);
          require_inputs(inputs);
          const auto embedding = load_static_embedding(o.embedding);
          const auto tokenizer = read_tokenizer(o.stopwords);
          StaticEmbeddingReport report;
          const auto store =
              o.collection.empty()
                  ? embed_queries_static(read_queries(o.queries), embedding, tokenizer, &report)
                  : embed_passages_static(load_collection(o.collection), embedding, tokenizer,
                                          &report);
          write_token_matrices(store, o.embed_out);
          finish(ctx, inputs, {o.embed_out},
                 {{"embedded", double(report.embedded)},
                  {"skipped_all_oov", double(report.skipped_all_oov)},
                  {"oov_tokens", double(report.oov_tokens)}});
        });
    sub->add_option("--embedding", o.embedding, "term v1 ... vN text file")->required();
    sub->add_option("--collection", o.collection);
    sub->add_option("--queries", o.queries);
    sub->add_option("--stopwords", o.stopwords);
    sub->add_option("--out", o.embed_out, ".tkm output")->required();
  }

  // dense retrieve ---------------------------------------------------------
  {
    auto* group = reg.group("dense", "exact dense retrieval");
    auto* sub = reg.add(group, "retrieve", "top-k by dot product over all passages",
                        "dense retrieve", [&o](const Context& ctx) {
                          require_inputs({o.dense_passages, o.dense_queries});
                          const auto passages = load_vectors(o.dense_passages);
                          const auto queries = load_vectors(o.dense_queries);
                          const auto run = dense_retrieve_all(passages, queries, o.dense_k,
                                                              o.dense_name, ctx.global.threads);
                          write_trec_run(run, o.run_out);
                          finish(ctx, {o.dense_passages, o.dense_queries}, {o.run_out},
                                 {{"queries", double(run.queries.size())}});
                        });
    sub->add_option("--passages", o.dense_passages, "passage vectors (.tkv)")->required();
    sub->add_option("--queries", o.dense_queries, "query vectors (.tkv)")->required();
    sub->add_option("--k", o.dense_k)->capture_default_str();
    sub->add_option("--name", o.dense_name, "run tag")->capture_default_str();
    sub->add_option("--out", o.run_out)->required();
  }

  // rerank -----------------------------------------------------------------
  {
    auto* sub = reg.add(&root, "rerank", "re-score the top candidates of a run", "rerank",
                        [&o](const Context& ctx) {
                          const auto inputs = concat({o.run}, o.scorer.inputs());
                          require_inputs(inputs);
                          const auto first = load_trec_run(o.run);
                          const auto loaded = load_scorer(o.scorer, nullptr, ctx.global.seed);
                          RerankStats stats;
                          const auto run = rerank(first, o.rerank_depth, *loaded->scorer,
                                                  parse_missing_policy(o.on_missing), &stats,
                                                  ctx.global.threads);
                          write_trec_run(run, o.run_out);
                          finish(ctx, inputs, {o.run_out},
                                 {{"rescored", double(stats.rescored)},
                                  {"skipped", double(stats.skipped)}});
                        });
    sub->add_option("--run", o.run, "first-stage TREC run")->required();
    sub->add_option("--depth", o.rerank_depth)->capture_default_str();
    o.scorer.bind(sub, kRerankScorers, "dense");
    sub->add_option("--on-missing", o.on_missing, "candidate without a representation")
        ->check(CLI::IsMember({"error", "skip"}))
        ->capture_default_str();
    sub->add_option("--out", o.run_out)->required();
  }

  // train kernel -----------------------------------------------------------
  {
    auto* group = reg.group("train", "model training");
    auto* sub = reg.add(
        group, "kernel", "fit kernel-pooling weights with a pairwise hinge loss", "train kernel",
        [&o](const Context& ctx) {
          const std::vector<fs::path> inputs{o.triples, o.query_tokens, o.passage_tokens,
                                             o.init_model};
          require_inputs(inputs);
          const auto triples = load_triples(o.triples);
          const auto query_tokens = load_token_matrices(o.query_tokens);
          const auto passage_tokens = load_token_matrices(o.passage_tokens);
          KernelBank bank = KernelBank::standard();
          std::optional<KernelWeights> initial;
          if (!o.init_model.empty()) {
            KernelWeights w;
            load_kernel_model(o.init_model, bank, w);
            initial = std::move(w);
          }
          if (!o.mus.empty() || !o.sigmas.empty()) {
            if (initial) {
              throw Error(ErrorKind::kInvalidArgument,
                          "--mus/--sigmas cannot be combined with --init");
            }
            bank.mus = Eigen::Map<const Eigen::VectorXd>(o.mus.data(),
                                                         static_cast<Eigen::Index>(o.mus.size()));
            bank.sigmas = Eigen::Map<const Eigen::VectorXd>(
                o.sigmas.data(), static_cast<Eigen::Index>(o.sigmas.size()));
            bank.validate();
          }
          auto hyper = o.hyper;
          hyper.seed = ctx.global.seed;
          const auto result = train_kernel_weights(triples, query_tokens, passage_tokens, bank,
                                                   hyper, initial, ctx.global.threads);
          write_kernel_model(bank, result.weights, o.model_out);
          const auto& t = result.telemetry;
          finish(ctx, inputs, {o.model_out},
                 {{"pairwise_accuracy", t.pairwise_accuracy},
                  {"mean_margin", t.mean_margin},
                  {"initial_loss", t.loss_curve.front()},
                  {"final_loss", t.loss_curve.back()},
                  {"triples_used", double(t.triples_used)},
                  {"triples_skipped", double(t.triples_skipped)}});
        });
    sub->add_option("--triples", o.triples)->required();
    sub->add_option("--query-tokens", o.query_tokens, "query token matrices (.tkm)")->required();
    sub->add_option("--passage-tokens", o.passage_tokens, "passage token matrices (.tkm)")
        ->required();
    sub->add_option("--lr", o.hyper.learning_rate)->capture_default_str();
    sub->add_option("--epochs", o.hyper.epochs)->capture_default_str();
    sub->add_option("--margin", o.hyper.margin)->capture_default_str();
    sub->add_option("--batch", o.hyper.batch_size)->capture_default_str();
    sub->add_option("--mus", o.mus, "kernel centres (default: standard 11-kernel bank)")
        ->delimiter(',');
    sub->add_option("--sigmas", o.sigmas, "kernel widths, one per centre")->delimiter(',');
    sub->add_option("--init", o.init_model, "start from this model instead of random weights");
    sub->add_option("--out", o.model_out, "model file")->required();
  }

  // eval -------------------------------------------------------------------
  {
    auto* sub = reg.add(&root, "eval", "nDCG/MRR/recall/judged metrics for a run", "eval",
                        [&o](const Context& ctx) {
                          const std::vector<fs::path> inputs{o.run, o.qrels, o.splits};
                          require_inputs(inputs);
                          const auto run = load_trec_run(o.run);
                          const auto qrels = load_qrels(o.qrels);
                          const auto report =
                              evaluate_run(run, qrels, read_splits(o.splits), metrics_config(o));
                          {
                            auto parent = o.report_out.parent_path();
                            if (!parent.empty()) fs::create_directories(parent);
                            std::ofstream f(o.report_out, std::ios::binary);
                            write_report_tsv(report, f);
                            if (!f) throw Error(ErrorKind::kIo, "cannot write " + o.report_out.string());
                          }
                          std::vector<fs::path> outputs{o.report_out};
                          if (!o.report_json.empty()) {
                            std::ofstream f(o.report_json, std::ios::binary);
                            f << report_to_json(report) << '\n';
                            if (!f) throw Error(ErrorKind::kIo, "cannot write " + o.report_json.string());
                            outputs.push_back(o.report_json);
                          }
                          Stats stats;
                          const auto* all = report.split("all");
                          for (std::size_t i = 0; all && i < report.metric_names.size(); ++i) {
                            stats.emplace_back(report.metric_names[i], all->means[i]);
                          }
                          finish(ctx, inputs, outputs, stats);
                        });
    sub->add_option("--run", o.run)->required();
    sub->add_option("--qrels", o.qrels)->required();
    sub->add_option("--splits", o.splits, "qid<TAB>split file; default one 'all' split");
    sub->add_option("--cutoffs", o.cutoffs, "first: nDCG/MRR/J cutoff, rest: recall cutoffs")
        ->delimiter(',')
        ->capture_default_str();
    sub->add_option("--zero-positive", o.zero_positive, "queries without positives")
        ->check(CLI::IsMember({"exclude", "zero"}))
        ->capture_default_str();
    sub->add_option("--out", o.report_out, "TSV report")->required();
    sub->add_option("--json", o.report_json, "also write the report as JSON");
  }

  // fuse -------------------------------------------------------------------
  {
    auto* sub = reg.add(&root, "fuse", "ensemble several runs", "fuse",
                        [&o](const Context& ctx) {
                          require_inputs(o.runs);
                          std::vector<RankedRun> runs;
                          for (const auto& p : o.runs) runs.push_back(load_trec_run(p));
                          const auto fused =
                              fuse_runs(runs, parse_fusion_method(o.fusion), o.rrf_k);
                          write_trec_run(fused, o.fused_out);
                          finish(ctx, o.runs, {o.fused_out},
                                 {{"queries", double(fused.queries.size())}});
                        });
    sub->add_option("--runs", o.runs, "TREC runs (two or more)")->required()->expected(2, -1);
    sub->add_option("--method", o.fusion)
        ->check(CLI::IsMember({"minmax", "rrf"}))
        ->capture_default_str();
    sub->add_option("--rrf-k", o.rrf_k)->capture_default_str();
    sub->add_option("--out", o.fused_out)->required();
  }

  // sweep ------------------------------------------------------------------
  {
    auto* sub = reg.add(
        &root, "sweep", "metrics of one scorer across re-ranking depths", "sweep",
        [&o](const Context& ctx) {
          const auto inputs = concat({o.run, o.qrels, o.splits}, o.sweep_scorer.inputs());
          require_inputs(inputs);
          const auto first = load_trec_run(o.run);
          const auto qrels = load_qrels(o.qrels);
          const auto loaded = load_scorer(o.sweep_scorer, &qrels, ctx.global.seed);
          const auto rows = depth_sweep(first, *loaded->scorer, o.depths, qrels,
                                        read_splits(o.splits), metrics_config(o),
                                        parse_missing_policy(o.on_missing), ctx.global.threads);
          {
            auto parent = o.sweep_out.parent_path();
            if (!parent.empty()) fs::create_directories(parent);
            std::ofstream f(o.sweep_out, std::ios::binary);
            write_sweep_tsv(rows, f);
            if (!f) throw Error(ErrorKind::kIo, "cannot write " + o.sweep_out.string());
          }
          Stats stats;
          const auto rank_metric = "nDCG@" + std::to_string(metrics_config(o).rank_cutoff);
          for (const auto& row : rows) {
            stats.emplace_back(rank_metric + "/depth=" + std::to_string(row.depth),
                               row.report.value("all", rank_metric));
          }
          finish(ctx, inputs, {o.sweep_out}, stats);
        });
    sub->add_option("--run", o.run, "first-stage TREC run")->required();
    sub->add_option("--qrels", o.qrels)->required();
    sub->add_option("--splits", o.splits);
    sub->add_option("--depths", o.depths, "strictly ascending")
        ->delimiter(',')
        ->capture_default_str();
    o.sweep_scorer.bind(sub, kSweepScorers, "oracle");
    sub->add_option("--corrupt-rate", o.sweep_scorer.corrupt_rate,
                    "fraction of negatives the corrupted scorer pushes to the top")
        ->capture_default_str();
    sub->add_option("--cutoffs", o.cutoffs)->delimiter(',')->capture_default_str();
    sub->add_option("--zero-positive", o.zero_positive)
        ->check(CLI::IsMember({"exclude", "zero"}))
        ->capture_default_str();
    sub->add_option("--on-missing", o.on_missing)
        ->check(CLI::IsMember({"error", "skip"}))
        ->capture_default_str();
    sub->add_option("--out", o.sweep_out, "TSV: one row per depth")->required();
  }
}

const CLI::App* deepest_parsed(const CLI::App& app) {
  for (const auto* sub : app.get_subcommands()) {
    if (sub->parsed()) return deepest_parsed(*sub);
  }
  return &app;
}

std::string error_line(std::string_view kind, std::string_view message) {
  Json j;
  j["error"] = kind;
  j["message"] = message;
  return j.dump();
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Passage ranking lab: index, sample, score, evaluate.", "plab"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML config; every key can also be given as a flag");
  app.set_version_flag("--version", std::string(kToolkitVersion));

  Global global;
  app.add_option("--seed", global.seed, "seed for every random choice")->capture_default_str();
  app.add_option("--threads", global.threads, "worker threads, 0 = all cores")
      ->capture_default_str();

  Options options;
  Registry registry(app);
  define_commands(registry, app, options);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << deepest_parsed(app)->help();
    return 2;
  }

  const Command* command = registry.selected();
  if (command == nullptr) {
    err << app.help();
    return 2;
  }

  auto previous = set_warning_sink([&err](std::string_view msg) {
    Json j;
    j["warning"] = msg;
    err << j.dump() << '\n';
  });
  int code = 0;
  try {
    command->action(Context{app, global, out, command->name});
  } catch (const Error& e) {
    err << error_line(to_string(e.kind()), e.what()) << '\n';
    code = 1;
  } catch (const std::exception& e) {
    err << error_line("internal", e.what()) << '\n';
    code = 1;
  }
  set_warning_sink(std::move(previous));
  return code;
}

}  // namespace plab::cli
