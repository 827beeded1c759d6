#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ivr/text.hpp"

namespace ivr {

struct KnowledgeDoc {
  std::string doc_id;
  std::string text;
  TokenList tokens;  // normalize(text)
  std::optional<std::string> class_hint;

  static KnowledgeDoc make(std::string doc_id, std::string text,
                           std::optional<std::string> class_hint = std::nullopt);
};

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;
};

struct ScoredDoc {
  std::string doc_id;
  double score = 0.0;

  friend bool operator==(const ScoredDoc&, const ScoredDoc&) = default;
};

/// Immutable BM25 index over knowledge documents.
///
/// score(d, q) = sum over distinct query terms t of
///   idf(t) * tf(t,d) * (k1 + 1) / (tf(t,d) + k1 * (1 - b + b * |d| / avgdl))
/// with idf(t) = ln((N - n_t + 0.5) / (n_t + 0.5) + 1), which is always
/// positive, so a document scores above zero iff it shares a term with the
/// query.
class KnowledgeStore {
 public:
  KnowledgeStore() = default;
  /// Throws ConfigError on duplicate doc_id.
  explicit KnowledgeStore(std::vector<KnowledgeDoc> docs, Bm25Params params = {});

  const std::vector<KnowledgeDoc>& docs() const noexcept { return docs_; }
  const KnowledgeDoc* find(std::string_view doc_id) const;
  std::size_t size() const noexcept { return docs_.size(); }
  bool empty() const noexcept { return docs_.empty(); }
  const Bm25Params& params() const noexcept { return params_; }
  double average_length() const noexcept { return avgdl_; }

  /// Top-k by score descending, ties by ascending doc_id. Zero-score
  /// documents are never returned. Throws ConfigError if k == 0.
  std::vector<ScoredDoc> retrieve(const TokenList& query, std::size_t k) const;

 private:
  struct Posting {
    std::size_t doc;
    std::size_t tf;
  };

  std::vector<KnowledgeDoc> docs_;
  Bm25Params params_;
  double avgdl_ = 0.0;
  std::unordered_map<std::string, std::vector<Posting>> postings_;
  std::unordered_map<std::string, std::size_t> by_id_;
};

inline std::vector<ScoredDoc> retrieve(const TokenList& query, const KnowledgeStore& store,
                                       std::size_t k) {
  return store.retrieve(query, k);
}

}  // namespace ivr
