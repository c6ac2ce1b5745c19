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

#include "plab/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "plab/random.hpp"

namespace plab {

namespace {

constexpr std::size_t kTopicTermsPerQuery = 3;
constexpr std::size_t kUnclickedImpressions = 5;
constexpr double kMaxCrossQueryCosine = 0.7;
constexpr double kParaphraseRate = 0.35;
constexpr double kParaphraseCosine = 0.8;
// The most frequent background words get no static vector, as stopwords
// would not in a real embedding vocabulary.
constexpr std::size_t kEmbeddingSkipWords = 50;

std::string padded(const char* prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%06zu", prefix, i);
  return buf;
}

std::string topic_word(std::size_t i) { return "t" + std::to_string(i); }
std::string background_word(std::size_t i) { return "w" + std::to_string(i); }
std::string paraphrase_word(std::size_t i) { return "s" + std::to_string(i); }

struct PlannedQuery {
  std::string id;
  std::vector<std::size_t> topics;
  std::string text;
  QuerySplit split;
  std::vector<std::size_t> relevant;  // passage slots
  std::vector<int> grades;
};

Eigen::VectorXd random_unit(Eigen::Index dim, Rng& rng) {
  Eigen::VectorXd v(dim);
  do {
    for (Eigen::Index i = 0; i < dim; ++i) v[i] = rng.normal();
  } while (v.norm() == 0.0);
  return v.normalized();
}

void append_background(std::vector<std::string>& words, std::size_t count,
                       std::size_t vocab, Rng& rng) {
  for (std::size_t i = 0; i < count; ++i) {
    // Squared uniform skews toward low ids, a cheap Zipf-like profile.
    const double u = rng.uniform();
    words.push_back(background_word(static_cast<std::size_t>(u * u * static_cast<double>(vocab))));
  }
}

void insert_randomly(std::vector<std::string>& words, std::string word, Rng& rng) {
  const auto pos = static_cast<std::ptrdiff_t>(rng.below(words.size() + 1));
  words.insert(words.begin() + pos, std::move(word));
}

std::string join(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

}  // namespace

SynthFixture synth_fixture(const SynthParams& params) {
  if (params.passages < 1 || params.test_queries + params.train_queries < 1 ||
      params.dense_dim < 2 || params.token_dim < 2 || params.background_vocab < 1 ||
      params.topic_vocab < kTopicTermsPerQuery) {
    throw Error(ErrorKind::kInvalidArgument, "synthetic fixture: sizes must be positive");
  }
  Rng rng(params.seed);
  const std::size_t total_queries = params.test_queries + params.train_queries;

  std::vector<PlannedQuery> planned(total_queries);
  std::size_t slot = 0;
  for (std::size_t i = 0; i < total_queries; ++i) {
    auto& q = planned[i];
    const bool test = i < params.test_queries;
    q.id = test ? padded("q", i) : padded("tq", i - params.test_queries);
    if (test) {
      static constexpr QuerySplit kSplits[] = {QuerySplit::kHead, QuerySplit::kTorso,
                                               QuerySplit::kTail};
      q.split = kSplits[i % 3];
    } else {
      q.split = QuerySplit::kTrain;
    }
    while (q.topics.size() < kTopicTermsPerQuery) {
      const auto t = static_cast<std::size_t>(rng.below(params.topic_vocab));
      if (std::find(q.topics.begin(), q.topics.end(), t) == q.topics.end()) q.topics.push_back(t);
    }
    std::vector<std::string> words;
    for (auto t : q.topics) words.push_back(topic_word(t));
    // A frequent word makes BM25 candidate lists deep, as with real queries.
    insert_randomly(words, background_word(rng.below(10)), rng);
    if (rng.uniform() < 0.5) insert_randomly(words, background_word(rng.below(50)), rng);
    q.text = join(words);
    const auto n_relevant = 1 + static_cast<std::size_t>(rng.below(3));
    for (std::size_t r = 0; r < n_relevant; ++r) {
      q.relevant.push_back(slot++);
      q.grades.push_back(1 + static_cast<int>(rng.below(2)));
    }
  }
  if (slot > params.passages) {
    throw Error(ErrorKind::kInvalidArgument,
                "synthetic fixture: " + std::to_string(params.passages) +
                    " passages cannot hold " + std::to_string(slot) + " relevant passages");
  }

  // Slot -> passage id through a random permutation, so id order says
  // nothing about relevance.
  std::vector<std::size_t> id_of_slot(params.passages);
  std::iota(id_of_slot.begin(), id_of_slot.end(), std::size_t{0});
  shuffle(std::span(id_of_slot), rng);
  auto passage_id = [&](std::size_t s) { return padded("p", id_of_slot[s]); };

  std::vector<std::string> texts(params.passages);
  std::vector<std::ptrdiff_t> owner(params.passages, -1);
  std::vector<int> owner_grade(params.passages, 0);
  for (std::size_t qi = 0; qi < planned.size(); ++qi) {
    const auto& q = planned[qi];
    for (std::size_t r = 0; r < q.relevant.size(); ++r) {
      const auto s = q.relevant[r];
      owner[s] = static_cast<std::ptrdiff_t>(qi);
      owner_grade[s] = q.grades[r];
      std::vector<std::string> words;
      append_background(words, 20 + rng.below(41), params.background_vocab, rng);
      // Secondary relevant passages sometimes use paraphrases of the query
      // terms only: invisible to exact matching, close in embedding space.
      const bool paraphrase = r > 0 && rng.uniform() < kParaphraseRate;
      auto word = paraphrase ? paraphrase_word : topic_word;
      std::vector<std::size_t> injected;
      for (auto t : q.topics) {
        if (rng.uniform() < 0.6) injected.push_back(t);
      }
      if (injected.empty()) injected.push_back(q.topics[rng.below(q.topics.size())]);
      for (auto t : injected) {
        const auto repeats = 1 + rng.below(2);
        for (std::uint64_t k = 0; k < repeats; ++k) insert_randomly(words, word(t), rng);
      }
      texts[s] = join(words);
    }
  }
  for (std::size_t s = slot; s < params.passages; ++s) {
    std::vector<std::string> words;
    append_background(words, 20 + rng.below(41), params.background_vocab, rng);
    if (rng.uniform() < 0.5) {
      const auto n = 1 + rng.below(3);
      for (std::uint64_t k = 0; k < n; ++k) {
        insert_randomly(words, topic_word(rng.below(params.topic_vocab)), rng);
      }
    }
    texts[s] = join(words);
  }

  SynthFixture fx;
  {
    std::vector<Passage> passages(params.passages);
    for (std::size_t s = 0; s < params.passages; ++s) passages[s] = {passage_id(s), texts[s]};
    std::sort(passages.begin(), passages.end(),
              [](const Passage& a, const Passage& b) { return a.id < b.id; });
    fx.collection = PassageStore(std::move(passages));
  }
  {
    std::vector<Query> test, train;
    for (const auto& q : planned) {
      (q.split == QuerySplit::kTrain ? train : test).push_back({q.id, q.text, q.split});
    }
    fx.test_queries = QuerySet(std::move(test));
    fx.train_queries = QuerySet(std::move(train));
  }

  // Clicks: relevant passages land in the CTR band of their grade
  // ([0.1, 0.3) for 1, [0.3, 0.8] for 2); a few other passages are shown
  // without being clicked.
  std::vector<ClickRecord> head_clicks, raw_clicks;
  for (const auto& q : planned) {
    auto& sink = q.split == QuerySplit::kHead ? head_clicks : raw_clicks;
    for (std::size_t r = 0; r < q.relevant.size(); ++r) {
      const std::uint64_t imp = 10 + rng.below(41);
      const std::uint64_t lo = (imp + 9) / 10;
      const std::uint64_t mid = (3 * imp + 9) / 10;
      const std::uint64_t hi = (8 * imp) / 10;
      const std::uint64_t clicks =
          q.grades[r] == 1 ? lo + rng.below(mid - lo) : mid + rng.below(hi - mid + 1);
      sink.push_back({q.id, passage_id(q.relevant[r]), imp, clicks});
    }
    std::vector<std::size_t> shown;
    while (shown.size() < kUnclickedImpressions && params.passages > q.relevant.size() + shown.size()) {
      const auto s = static_cast<std::size_t>(rng.below(params.passages));
      if (std::find(q.relevant.begin(), q.relevant.end(), s) != q.relevant.end()) continue;
      if (std::find(shown.begin(), shown.end(), s) != shown.end()) continue;
      shown.push_back(s);
      sink.push_back({q.id, passage_id(s), 5 + rng.below(26), 0});
    }
  }
  fx.clicks = head_clicks;
  fx.clicks.insert(fx.clicks.end(), raw_clicks.begin(), raw_clicks.end());
  {
    auto head = build_qrels_from_clicks(head_clicks, LabelMode::kDctr, kDefaultDctrThresholds);
    auto raw = build_qrels_from_clicks(raw_clicks, LabelMode::kRaw, kDefaultDctrThresholds);
    fx.qrels = std::move(head);
    for (const auto& [qid, judgments] : raw) {
      for (const auto& [pid, grade] : judgments) fx.qrels.set(qid, pid, grade);
    }
  }
  for (const auto& q : planned) {
    if (q.split != QuerySplit::kTrain) fx.splits.assign(q.id, to_string(q.split));
  }

  // Dense vectors. Query directions are pairwise well separated; a relevant
  // passage is (1.5 + 0.5 * grade) * direction plus noise of norm <= 0.2,
  // every other passage is a random vector of norm 0.5.
  const Eigen::Index dim = params.dense_dim;
  std::vector<Eigen::VectorXd> directions;
  directions.reserve(planned.size());
  for (std::size_t qi = 0; qi < planned.size(); ++qi) {
    Eigen::VectorXd u;
    bool separated = false;
    for (int attempt = 0; attempt < 1000 && !separated; ++attempt) {
      u = random_unit(dim, rng);
      separated = std::all_of(directions.begin(), directions.end(), [&](const Eigen::VectorXd& v) {
        return std::abs(u.dot(v)) < kMaxCrossQueryCosine;
      });
    }
    if (!separated) {
      throw Error(ErrorKind::kInvalidArgument,
                  "synthetic fixture: dense dimension too small for the number of queries");
    }
    directions.push_back(std::move(u));
  }
  {
    RowMatrix<float> qv(static_cast<Eigen::Index>(planned.size()), dim);
    std::vector<std::string> ids;
    for (std::size_t qi = 0; qi < planned.size(); ++qi) {
      qv.row(static_cast<Eigen::Index>(qi)) = directions[qi].transpose().cast<float>();
      ids.push_back(planned[qi].id);
    }
    fx.query_vectors = VectorStore(std::move(ids), std::move(qv));
  }
  {
    RowMatrix<float> pv(static_cast<Eigen::Index>(params.passages), dim);
    std::vector<std::string> ids(params.passages);
    for (std::size_t s = 0; s < params.passages; ++s) {
      Eigen::VectorXd v;
      if (owner[s] >= 0) {
        const double scale = 1.5 + 0.5 * owner_grade[s];
        v = scale * directions[static_cast<std::size_t>(owner[s])] +
            0.2 * rng.uniform() * random_unit(dim, rng);
      } else {
        v = 0.5 * random_unit(dim, rng);
      }
      const auto row = static_cast<Eigen::Index>(id_of_slot[s]);
      pv.row(row) = v.transpose().cast<float>();
      ids[id_of_slot[s]] = passage_id(s);
    }
    fx.passage_vectors = VectorStore(std::move(ids), std::move(pv));
  }

  // Static word embedding over the whole vocabulary. A paraphrase term has
  // cosine kParaphraseCosine with its topic term.
  {
    std::vector<std::string> terms;
    for (std::size_t t = 0; t < params.topic_vocab; ++t) terms.push_back(topic_word(t));
    for (std::size_t t = 0; t < params.topic_vocab; ++t) terms.push_back(paraphrase_word(t));
    for (std::size_t w = kEmbeddingSkipWords; w < params.background_vocab; ++w) {
      terms.push_back(background_word(w));
    }
    const auto topics = static_cast<Eigen::Index>(params.topic_vocab);
    RowMatrix<float> table(static_cast<Eigen::Index>(terms.size()), params.token_dim);
    for (Eigen::Index r = 0; r < table.rows(); ++r) {
      if (r >= topics && r < 2 * topics) {
        const Eigen::VectorXd u = table.row(r - topics).transpose().cast<double>();
        Eigen::VectorXd n = random_unit(params.token_dim, rng);
        n = (n - n.dot(u) * u).normalized();
        const Eigen::VectorXd v =
            kParaphraseCosine * u + std::sqrt(1.0 - kParaphraseCosine * kParaphraseCosine) * n;
        table.row(r) = v.transpose().cast<float>();
      } else {
        table.row(r) = random_unit(params.token_dim, rng).transpose().cast<float>();
      }
    }
    fx.static_embedding = StaticEmbedding(std::move(terms), std::move(table));
  }
  const Tokenizer tokenizer;
  fx.passage_tokens = embed_passages_static(fx.collection, fx.static_embedding, tokenizer);
  fx.query_tokens = embed_queries_static(fx.test_queries.merged(fx.train_queries),
                                         fx.static_embedding, tokenizer);
  return fx;
}

std::vector<std::filesystem::path> write_fixture(const SynthFixture& fx,
                                                 const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  auto track = [&](const char* name) {
    written.push_back(dir / name);
    return written.back();
  };
  write_collection(fx.collection, track("collection.tsv"));
  for (auto split : {QuerySplit::kHead, QuerySplit::kTorso, QuerySplit::kTail}) {
    std::vector<Query> subset;
    for (const auto& q : fx.test_queries) {
      if (q.split == split) subset.push_back(q);
    }
    const auto name = "queries." + std::string(to_string(split)) + ".tsv";
    written.push_back(dir / name);
    write_queries(QuerySet(std::move(subset)), written.back());
  }
  write_queries(fx.test_queries, track("queries.test.tsv"));
  write_queries(fx.train_queries, track("queries.train.tsv"));
  write_clicks(fx.clicks, track("clicks.tsv"));
  write_qrels(fx.qrels, track("qrels.tsv"));
  write_split_map(fx.splits, track("splits.tsv"));
  write_vectors(fx.query_vectors, track("queries.tkv"));
  write_vectors(fx.passage_vectors, track("passages.tkv"));
  write_token_matrices(fx.query_tokens, track("queries.tkm"));
  write_token_matrices(fx.passage_tokens, track("passages.tkm"));
  write_static_embedding(fx.static_embedding, track("static.vec"));
  return written;
}

}  // namespace plab
