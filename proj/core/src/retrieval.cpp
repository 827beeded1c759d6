#include "ivr/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_set>

#include "ivr/errors.hpp"

namespace ivr {

KnowledgeDoc KnowledgeDoc::make(std::string doc_id, std::string text,
                                std::optional<std::string> class_hint) {
  KnowledgeDoc d;
  d.doc_id = std::move(doc_id);
  d.text = std::move(text);
  d.tokens = normalize(d.text);
  d.class_hint = std::move(class_hint);
  return d;
}

KnowledgeStore::KnowledgeStore(std::vector<KnowledgeDoc> docs, Bm25Params params)
    : docs_(std::move(docs)), params_(params) {
  std::size_t total_len = 0;
  for (std::size_t i = 0; i < docs_.size(); ++i) {
    const auto& d = docs_[i];
    if (!by_id_.emplace(d.doc_id, i).second) {
      throw ConfigError("", "doc_id", "duplicate doc_id '" + d.doc_id + "'");
    }
    total_len += d.tokens.size();
    std::map<std::string_view, std::size_t> tf;
    for (const auto& t : d.tokens) {
      ++tf[t];
    }
    for (const auto& [term, count] : tf) {
      postings_[std::string(term)].push_back(Posting{i, count});
    }
  }
  if (!docs_.empty()) {
    avgdl_ = static_cast<double>(total_len) / static_cast<double>(docs_.size());
  }
}

const KnowledgeDoc* KnowledgeStore::find(std::string_view doc_id) const {
  auto it = by_id_.find(std::string(doc_id));
  return it == by_id_.end() ? nullptr : &docs_[it->second];
}

std::vector<ScoredDoc> KnowledgeStore::retrieve(const TokenList& query, std::size_t k) const {
  if (k == 0) {
    throw ConfigError("", "rag_k", "must be >= 1");
  }
  if (docs_.empty()) {
    return {};
  }
  const double n_docs = static_cast<double>(docs_.size());
  std::vector<double> scores(docs_.size(), 0.0);
  std::vector<bool> touched(docs_.size(), false);
  std::unordered_set<std::string_view> seen;
  for (const auto& term : query) {
    if (!seen.insert(term).second) {
      continue;
    }
    auto it = postings_.find(term);
    if (it == postings_.end()) {
      continue;
    }
    const double df = static_cast<double>(it->second.size());
    const double idf = std::log((n_docs - df + 0.5) / (df + 0.5) + 1.0);
    for (const Posting& p : it->second) {
      const double tf = static_cast<double>(p.tf);
      const double dl = static_cast<double>(docs_[p.doc].tokens.size());
      const double norm = params_.k1 * (1.0 - params_.b + params_.b * dl / avgdl_);
      scores[p.doc] += idf * (tf * (params_.k1 + 1.0)) / (tf + norm);
      touched[p.doc] = true;
    }
  }

  std::vector<ScoredDoc> ranked;
  for (std::size_t i = 0; i < docs_.size(); ++i) {
    if (touched[i] && scores[i] > 0.0) {
      ranked.push_back(ScoredDoc{docs_[i].doc_id, scores[i]});
    }
  }
  std::sort(ranked.begin(), ranked.end(), [](const ScoredDoc& a, const ScoredDoc& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.doc_id < b.doc_id;
  });
  if (ranked.size() > k) {
    ranked.resize(k);
  }
  return ranked;
}

}  // namespace ivr
