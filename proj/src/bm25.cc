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

#include "plab/bm25.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "plab/detail/binary_io.hpp"
#include "plab/detail/tsv.hpp"
#include "plab/error.hpp"
#include "plab/parallel.hpp"

namespace plab {

namespace {

constexpr std::string_view kIndexHeader = "plab-bm25-index\tversion=1\n";
constexpr std::size_t kBuildBatch = 4096;

}  // namespace

InvertedIndex InvertedIndex::build(const PassageStore& store, Bm25Params params,
                                   Tokenizer tokenizer, unsigned threads) {
  if (store.empty()) {
    throw Error(ErrorKind::kEmpty, "cannot build an index over an empty collection");
  }
  if (params.k1 < 0.0 || params.b < 0.0 || params.b > 1.0) {
    throw Error(ErrorKind::kInvalidArgument, "bm25 needs k1 >= 0 and b in [0, 1]");
  }
  InvertedIndex index;
  index.params_ = params;
  index.tokenizer_ = std::move(tokenizer);

  std::vector<const Passage*> order;
  order.reserve(store.size());
  for (const auto& p : store) order.push_back(&p);
  std::sort(order.begin(), order.end(),
            [](const Passage* a, const Passage* b) { return a->id < b->id; });

  index.doc_ids_.reserve(order.size());
  index.doc_lengths_.assign(order.size(), 0);
  for (const auto* p : order) index.doc_ids_.push_back(p->id);

  // Batches are fixed-size and merged in document order, so the postings
  // come out sorted and identical for any thread count.
  detail::StringMap<std::vector<Posting>> postings;
  std::vector<std::vector<std::pair<std::string, std::uint32_t>>> batch;
  for (std::size_t start = 0; start < order.size(); start += kBuildBatch) {
    const std::size_t n = std::min(kBuildBatch, order.size() - start);
    batch.assign(n, {});
    parallel_for(n, threads, [&](std::size_t i) {
      const auto doc = start + i;
      auto tokens = index.tokenizer_(order[doc]->text);
      index.doc_lengths_[doc] = static_cast<std::uint32_t>(tokens.size());
      std::sort(tokens.begin(), tokens.end());
      auto& counts = batch[i];
      for (std::size_t t = 0; t < tokens.size();) {
        std::size_t u = t;
        while (u < tokens.size() && tokens[u] == tokens[t]) ++u;
        counts.emplace_back(std::move(tokens[t]), static_cast<std::uint32_t>(u - t));
        t = u;
      }
    });
    for (std::size_t i = 0; i < n; ++i) {
      const auto doc = static_cast<std::uint32_t>(start + i);
      for (auto& [term, tf] : batch[i]) {
        auto it = postings.find(term);
        if (it == postings.end()) it = postings.emplace(std::move(term), std::vector<Posting>{}).first;
        it->second.push_back({doc, tf});
      }
    }
  }

  index.terms_.reserve(postings.size());
  for (const auto& [term, list] : postings) index.terms_.push_back(term);
  std::sort(index.terms_.begin(), index.terms_.end());
  index.postings_.reserve(index.terms_.size());
  for (const auto& term : index.terms_) {
    index.postings_.push_back(std::move(postings.find(term)->second));
  }
  index.finalize();
  return index;
}

void InvertedIndex::finalize() {
  const double total = std::accumulate(doc_lengths_.begin(), doc_lengths_.end(), 0.0);
  avg_doc_length_ = doc_ids_.empty() ? 0.0 : total / static_cast<double>(doc_ids_.size());
  norms_.resize(doc_ids_.size());
  for (std::size_t d = 0; d < doc_ids_.size(); ++d) {
    const double rel = avg_doc_length_ > 0.0 ? doc_lengths_[d] / avg_doc_length_ : 0.0;
    norms_[d] = params_.k1 * (1.0 - params_.b + params_.b * rel);
  }
  term_index_.clear();
  term_index_.reserve(terms_.size());
  for (std::size_t t = 0; t < terms_.size(); ++t) {
    term_index_.emplace(terms_[t], static_cast<std::uint32_t>(t));
  }
  doc_index_.clear();
  doc_index_.reserve(doc_ids_.size());
  for (std::size_t d = 0; d < doc_ids_.size(); ++d) {
    doc_index_.emplace(doc_ids_[d], static_cast<std::uint32_t>(d));
  }
}

std::span<const Posting> InvertedIndex::postings(std::string_view term) const {
  auto it = term_index_.find(term);
  if (it == term_index_.end()) return {};
  return postings_[it->second];
}

std::optional<std::uint32_t> InvertedIndex::find_doc(std::string_view passage_id) const {
  auto it = doc_index_.find(passage_id);
  if (it == doc_index_.end()) return std::nullopt;
  return it->second;
}

double InvertedIndex::idf(std::uint32_t df) const {
  const double n = static_cast<double>(doc_count());
  const double d = static_cast<double>(df);
  return std::log(1.0 + (n - d + 0.5) / (d + 0.5));
}

bool operator==(const InvertedIndex& a, const InvertedIndex& b) {
  return a.params_.k1 == b.params_.k1 && a.params_.b == b.params_.b &&
         a.tokenizer_.stopwords() == b.tokenizer_.stopwords() &&
         a.doc_ids_ == b.doc_ids_ && a.doc_lengths_ == b.doc_lengths_ &&
         a.terms_ == b.terms_ && a.postings_ == b.postings_;
}

void InvertedIndex::save(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  const auto path = dir / "index.bin";
  auto out = detail::open_output(path, true);
  detail::BinaryWriter w(out);
  w.bytes(kIndexHeader);
  w.f64(params_.k1);
  w.f64(params_.b);
  w.u32(static_cast<std::uint32_t>(tokenizer_.stopwords().size()));
  for (const auto& s : tokenizer_.stopwords()) w.string(s);
  w.u64(doc_ids_.size());
  for (std::size_t d = 0; d < doc_ids_.size(); ++d) {
    w.string(doc_ids_[d]);
    w.u32(doc_lengths_[d]);
  }
  w.u64(terms_.size());
  for (std::size_t t = 0; t < terms_.size(); ++t) {
    w.string(terms_[t]);
    w.u32(static_cast<std::uint32_t>(postings_[t].size()));
    for (const auto& p : postings_[t]) {
      w.u32(p.doc);
      w.u32(p.tf);
    }
  }
  out.flush();
  if (!out) throw Error(ErrorKind::kIo, "failed writing '" + path.string() + "'");
}

InvertedIndex InvertedIndex::load(const std::filesystem::path& dir) {
  const auto path = dir / "index.bin";
  auto in = detail::open_input(path, true);
  detail::BinaryReader r(in, path.string());
  if (r.bytes(kIndexHeader.size()) != kIndexHeader) {
    throw Error(ErrorKind::kFormat, path.string() + ": not a plab index (version 1)");
  }
  InvertedIndex index;
  index.params_.k1 = r.f64();
  index.params_.b = r.f64();
  std::vector<std::string> stopwords(r.u32());
  for (auto& s : stopwords) s = r.string();
  index.tokenizer_ = Tokenizer(std::move(stopwords));
  const auto docs = r.u64();
  index.doc_ids_.resize(docs);
  index.doc_lengths_.resize(docs);
  for (std::size_t d = 0; d < docs; ++d) {
    index.doc_ids_[d] = r.string();
    index.doc_lengths_[d] = r.u32();
    if (d > 0 && !(index.doc_ids_[d - 1] < index.doc_ids_[d])) {
      throw Error(ErrorKind::kFormat, path.string() + ": document ids out of order");
    }
  }
  const auto terms = r.u64();
  index.terms_.resize(terms);
  index.postings_.resize(terms);
  for (std::size_t t = 0; t < terms; ++t) {
    index.terms_[t] = r.string();
    auto& list = index.postings_[t];
    list.resize(r.u32());
    for (auto& p : list) {
      p.doc = r.u32();
      p.tf = r.u32();
      if (p.doc >= docs) {
        throw Error(ErrorKind::kFormat, path.string() + ": posting references unknown document");
      }
    }
  }
  r.expect_end();
  index.finalize();
  return index;
}

namespace {

struct QueryTerm {
  std::span<const Posting> postings;
  double idf;
};

std::vector<QueryTerm> resolve_terms(const InvertedIndex& index,
                                     std::span<const std::string> query_tokens) {
  std::vector<QueryTerm> terms;
  for (const auto& token : query_tokens) {
    auto list = index.postings(token);
    if (!list.empty()) terms.push_back({list, index.idf(static_cast<std::uint32_t>(list.size()))});
  }
  return terms;
}

// Term weights summed in ascending order, so documents whose weights are
// equal as a multiset get bit-identical scores.
double canonical_score(const InvertedIndex& index, std::span<const QueryTerm> terms,
                       std::uint32_t doc, std::vector<double>& weights) {
  weights.clear();
  const double k1 = index.params().k1;
  for (const auto& t : terms) {
    auto it = std::lower_bound(t.postings.begin(), t.postings.end(), doc,
                               [](const Posting& p, std::uint32_t d) { return p.doc < d; });
    if (it == t.postings.end() || it->doc != doc) continue;
    weights.push_back(bm25_term_weight(t.idf, it->tf, index.length_norm(doc), k1));
  }
  std::sort(weights.begin(), weights.end());
  double score = 0.0;
  for (double w : weights) score += w;
  return score;
}

}  // namespace

double bm25_score(const InvertedIndex& index, std::span<const std::string> query_tokens,
                  std::string_view passage_id) {
  const auto doc = index.find_doc(passage_id);
  if (!doc) {
    throw Error(ErrorKind::kNotFound,
                "passage '" + std::string(passage_id) + "' is not in the index");
  }
  std::vector<double> weights;
  return canonical_score(index, resolve_terms(index, query_tokens), *doc, weights);
}

Ranking search_tokens(const InvertedIndex& index, std::span<const std::string> query_tokens,
                      std::size_t k) {
  if (k == 0) throw Error(ErrorKind::kInvalidArgument, "search depth k must be >= 1");

  thread_local std::vector<double> accumulator;
  thread_local std::vector<std::uint8_t> touched_flag;
  if (accumulator.size() < index.doc_count()) {
    accumulator.assign(index.doc_count(), 0.0);
    touched_flag.assign(index.doc_count(), 0);
  }
  std::vector<std::uint32_t> touched;

  const auto terms = resolve_terms(index, query_tokens);
  const double k1 = index.params().k1;
  for (const auto& t : terms) {
    for (const auto& p : t.postings) {
      if (!touched_flag[p.doc]) {
        touched_flag[p.doc] = 1;
        touched.push_back(p.doc);
      }
      accumulator[p.doc] += bm25_term_weight(t.idf, p.tf, index.length_norm(p.doc), k1);
    }
  }

  // Term-at-a-time sums depend on query order in the last bits. Everything
  // within a small band of the k-th score is re-scored canonically before
  // the final cut.
  Ranking ranking;
  if (!touched.empty()) {
    const std::size_t n = std::min(k, touched.size());
    std::nth_element(touched.begin(), touched.begin() + static_cast<std::ptrdiff_t>(n - 1),
                     touched.end(), [&](std::uint32_t a, std::uint32_t b) {
                       return accumulator[a] > accumulator[b];
                     });
    const double kth = accumulator[touched[n - 1]];
    const double floor = kth - 1e-9 * std::max(1.0, std::abs(kth));
    std::vector<std::pair<double, std::uint32_t>> band;
    std::vector<double> weights;
    for (auto doc : touched) {
      if (accumulator[doc] >= floor) {
        band.emplace_back(canonical_score(index, terms, doc, weights), doc);
      }
    }
    const std::size_t m = std::min(n, band.size());
    std::partial_sort(band.begin(), band.begin() + static_cast<std::ptrdiff_t>(m), band.end(),
                      [](const auto& a, const auto& b) {
                        if (a.first != b.first) return a.first > b.first;
                        return a.second < b.second;
                      });
    ranking.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
      ranking.push_back({index.doc_id(band[i].second), band[i].first});
    }
  }
  for (auto doc : touched) {
    accumulator[doc] = 0.0;
    touched_flag[doc] = 0;
  }
  return ranking;
}

Ranking search(const InvertedIndex& index, std::string_view query_text, std::size_t k) {
  const auto tokens = index.tokenizer()(query_text);
  return search_tokens(index, tokens, k);
}

RankedRun search_all(const InvertedIndex& index, const QuerySet& queries, std::size_t k,
                     std::string run_name, unsigned threads) {
  std::vector<Ranking> results(queries.size());
  parallel_for(queries.size(), threads,
               [&](std::size_t i) { results[i] = search(index, queries[i].text, k); });
  RankedRun run{std::move(run_name), "bm25", {}};
  for (std::size_t i = 0; i < queries.size(); ++i) {
    run.queries.emplace(queries[i].id, std::move(results[i]));
  }
  return run;
}

}  // namespace plab
