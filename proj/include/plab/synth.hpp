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

#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "plab/corpus.hpp"
#include "plab/embeddings.hpp"

namespace plab {

struct SynthParams {
  std::size_t passages = 1000;
  std::size_t test_queries = 100;
  std::size_t train_queries = 0;
  Eigen::Index dense_dim = 64;
  Eigen::Index token_dim = 32;
  std::size_t background_vocab = 2000;
  std::size_t topic_vocab = 400;
  std::uint64_t seed = 0;
};

/// A small collection with known relevance, for runs without licensed data.
///
/// Every query gets 1-3 relevant passages. The first always contains some of
/// the query's topic terms; later ones may use paraphrase terms instead,
/// which exact matching cannot see. Distractor passages carry random topic
/// terms. Clicks follow the
/// planted grades (head queries are labelled by CTR thresholds, everything
/// else by raw clicks). Dense vectors are planted so that each query's
/// relevant passages out-score every other passage, and token matrices come
/// from a random static word embedding.
struct SynthFixture {
  PassageStore collection;
  QuerySet test_queries;
  QuerySet train_queries;
  std::vector<ClickRecord> clicks;
  Qrels qrels;
  SplitMap splits;
  VectorStore query_vectors;
  VectorStore passage_vectors;
  StaticEmbedding static_embedding;
  TokenMatrixStore query_tokens;
  TokenMatrixStore passage_tokens;
};

/// Deterministic in `params`. Throws when there are too few passages to
/// host the relevant sets.
SynthFixture synth_fixture(const SynthParams& params);

/// Writes the fixture as the toolkit's interchange files and returns their
/// paths: collection.tsv, queries.{head,torso,tail,test,train}.tsv,
/// clicks.tsv, qrels.tsv, splits.tsv, {queries,passages}.tkv,
/// {queries,passages}.tkm, static.vec.
std::vector<std::filesystem::path> write_fixture(const SynthFixture& fixture,
                                                 const std::filesystem::path& dir);

}  // namespace plab
