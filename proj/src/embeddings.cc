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

#include "plab/embeddings.hpp"

#include <span>

#include "plab/detail/binary_io.hpp"
#include "plab/detail/tsv.hpp"

namespace plab {

namespace {

constexpr std::string_view kVectorMagic = "TKV1";
constexpr std::string_view kTokenMagic = "TKM1";

std::span<float> row_span(RowMatrix<float>& m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}

std::span<const float> row_span(const RowMatrix<float>& m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}

template <typename Source>
TokenMatrixStore embed_static(const Source& source, const StaticEmbedding& embedding,
                              const Tokenizer& tokenizer, StaticEmbeddingReport* report) {
  TokenMatrixStore store(embedding.dim());
  StaticEmbeddingReport local;
  for (const auto& item : source) {
    try {
      auto m = embed_tokens_static(item.text, embedding, tokenizer);
      local.oov_tokens += m.oov_count;
      store.add(item.id, std::move(m.matrix));
      ++local.embedded;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kEmpty) throw;
      ++local.skipped_all_oov;
      local.oov_tokens += tokenizer(item.text).size();
    }
  }
  if (report != nullptr) *report = local;
  return store;
}

}  // namespace

StaticEmbedding::StaticEmbedding(std::vector<std::string> terms, RowMatrix<float> table)
    : terms_(std::move(terms)), table_(std::move(table)) {
  if (static_cast<Eigen::Index>(terms_.size()) != table_.rows()) {
    throw Error(ErrorKind::kInvalidArgument, "static embedding: term count != row count");
  }
  index_.reserve(terms_.size());
  for (Eigen::Index r = 0; r < table_.rows(); ++r) {
    detail::check_unique_id(index_, terms_[r], r);
    detail::check_finite(table_.row(r), terms_[r]);
  }
}

std::optional<Eigen::Index> StaticEmbedding::find(std::string_view term) const {
  auto it = index_.find(term);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

VectorStore load_vectors(const std::filesystem::path& path) {
  auto in = detail::open_input(path, true);
  detail::BinaryReader r(in, path.string());
  if (r.bytes(4) != kVectorMagic) {
    throw Error(ErrorKind::kFormat, path.string() + ": bad magic (expected TKV1)");
  }
  const auto count = r.u32();
  const auto dim = r.u32();
  std::vector<std::string> ids(count);
  for (auto& id : ids) id = r.string();
  RowMatrix<float> vectors(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(dim));
  r.f32_array(row_span(vectors));
  r.expect_end();
  try {
    return VectorStore(std::move(ids), std::move(vectors));
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

void write_vectors(const VectorStore& store, const std::filesystem::path& path) {
  auto out = detail::open_output(path, true);
  detail::BinaryWriter w(out);
  w.bytes(kVectorMagic);
  w.u32(static_cast<std::uint32_t>(store.size()));
  w.u32(static_cast<std::uint32_t>(store.dim()));
  for (const auto& id : store.ids()) w.string(id);
  w.f32_array(row_span(store.matrix()));
  out.flush();
  if (!out) throw Error(ErrorKind::kIo, "failed writing '" + path.string() + "'");
}

TokenMatrixStore load_token_matrices(const std::filesystem::path& path) {
  auto in = detail::open_input(path, true);
  detail::BinaryReader r(in, path.string());
  if (r.bytes(4) != kTokenMagic) {
    throw Error(ErrorKind::kFormat, path.string() + ": bad magic (expected TKM1)");
  }
  const auto count = r.u32();
  const auto dim = r.u32();
  TokenMatrixStore store(static_cast<Eigen::Index>(dim));
  for (std::uint32_t i = 0; i < count; ++i) {
    auto id = r.string();
    const auto n_tokens = r.u32();
    RowMatrix<float> m(static_cast<Eigen::Index>(n_tokens), static_cast<Eigen::Index>(dim));
    r.f32_array(row_span(m));
    try {
      store.add(std::move(id), std::move(m));
    } catch (const Error& e) {
      throw Error(ErrorKind::kFormat, path.string() + ": " + e.what());
    }
  }
  r.expect_end();
  return store;
}

void write_token_matrices(const TokenMatrixStore& store, const std::filesystem::path& path) {
  auto out = detail::open_output(path, true);
  detail::BinaryWriter w(out);
  w.bytes(kTokenMagic);
  w.u32(static_cast<std::uint32_t>(store.size()));
  w.u32(static_cast<std::uint32_t>(store.dim()));
  for (std::size_t i = 0; i < store.size(); ++i) {
    w.string(store.ids()[i]);
    w.u32(static_cast<std::uint32_t>(store.matrix(i).rows()));
    w.f32_array(row_span(store.matrix(i)));
  }
  out.flush();
  if (!out) throw Error(ErrorKind::kIo, "failed writing '" + path.string() + "'");
}

StaticEmbedding load_static_embedding(const std::filesystem::path& path) {
  std::vector<std::string> terms;
  std::vector<float> values;
  std::size_t dim = 0;
  detail::for_each_line(path, [&](std::size_t line_no, std::string_view line) {
    auto fields = detail::split_whitespace(line);
    if (fields.empty()) return;
    if (line_no == 1 && fields.size() == 2 &&
        fields[0].find_first_not_of("0123456789") == std::string_view::npos &&
        fields[1].find_first_not_of("0123456789") == std::string_view::npos) {
      return;  // word2vec header
    }
    if (fields.size() < 2) {
      throw Error(ErrorKind::kFormat, detail::location(path, line_no) + ": expected 'term v1 ... vN'");
    }
    if (dim == 0) dim = fields.size() - 1;
    if (fields.size() - 1 != dim) {
      throw Error(ErrorKind::kFormat, detail::location(path, line_no) + ": expected " +
                                          std::to_string(dim) + " components");
    }
    terms.emplace_back(fields[0]);
    for (std::size_t i = 1; i < fields.size(); ++i) {
      try {
        values.push_back(static_cast<float>(detail::parse_double(fields[i], "component")));
      } catch (const Error& e) {
        throw Error(ErrorKind::kFormat, detail::location(path, line_no) + ": " + e.what());
      }
    }
  });
  RowMatrix<float> table(static_cast<Eigen::Index>(terms.size()), static_cast<Eigen::Index>(dim));
  std::copy(values.begin(), values.end(), table.data());
  try {
    return StaticEmbedding(std::move(terms), std::move(table));
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

void write_static_embedding(const StaticEmbedding& embedding,
                            const std::filesystem::path& path) {
  auto out = detail::open_output(path);
  for (std::size_t r = 0; r < embedding.size(); ++r) {
    out << embedding.terms()[r];
    for (Eigen::Index c = 0; c < embedding.dim(); ++c) {
      out << ' ' << detail::format_double(embedding.table()(static_cast<Eigen::Index>(r), c));
    }
    out << '\n';
  }
}

StaticTokenMatrix embed_tokens_static(std::string_view text, const StaticEmbedding& embedding,
                                      const Tokenizer& tokenizer) {
  const auto tokens = tokenizer(text);
  std::vector<Eigen::Index> rows;
  rows.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (auto r = embedding.find(t)) rows.push_back(*r);
  }
  if (rows.empty()) {
    throw Error(ErrorKind::kEmpty, "no in-vocabulary token in text '" +
                                       std::string(text.substr(0, 80)) + "'");
  }
  StaticTokenMatrix out;
  out.oov_count = tokens.size() - rows.size();
  out.matrix = embedding.table()(rows, Eigen::all);
  return out;
}

TokenMatrixStore embed_passages_static(const PassageStore& passages,
                                       const StaticEmbedding& embedding,
                                       const Tokenizer& tokenizer,
                                       StaticEmbeddingReport* report) {
  return embed_static(passages, embedding, tokenizer, report);
}

TokenMatrixStore embed_queries_static(const QuerySet& queries,
                                      const StaticEmbedding& embedding,
                                      const Tokenizer& tokenizer,
                                      StaticEmbeddingReport* report) {
  return embed_static(queries, embedding, tokenizer, report);
}

}  // namespace plab
