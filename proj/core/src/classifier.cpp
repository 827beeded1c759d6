#include "ivr/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include <json.hpp>

#include "ivr/errors.hpp"
#include "ivr/prompt.hpp"
#include "remote.hpp"

namespace ivr {

namespace {

using nlohmann::json;

bool ranks_before(const std::pair<std::string, double>& a, const std::pair<std::string, double>& b) {
  if (a.second != b.second) return a.second > b.second;
  return a.first < b.first;
}

bool valid_confidence(double c) { return std::isfinite(c) && c >= 0.0 && c <= 1.0; }

}  // namespace

void check_result(const ClassificationResult& r, const IntentTaxonomy& taxonomy) {
  if (!taxonomy.contains(r.class_id)) {
    throw BackendContractError("unknown class_id '" + r.class_id + "'");
  }
  if (!valid_confidence(r.confidence)) {
    throw BackendContractError("confidence outside [0, 1]");
  }
  for (std::size_t i = 0; i < r.alternates.size(); ++i) {
    const auto& [id, conf] = r.alternates[i];
    if (!taxonomy.contains(id)) {
      throw BackendContractError("unknown alternate class_id '" + id + "'");
    }
    if (!valid_confidence(conf)) {
      throw BackendContractError("alternate confidence outside [0, 1]");
    }
    if (id == r.class_id) {
      throw BackendContractError("alternate repeats the chosen class '" + id + "'");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (r.alternates[j].first == id) throw BackendContractError("duplicate alternate '" + id + "'");
    }
    if (conf > r.confidence) {
      throw BackendContractError("alternate '" + id + "' outranks the chosen class");
    }
    if (i > 0 && r.alternates[i - 1].second < conf) {
      throw BackendContractError("alternates not sorted by confidence");
    }
  }
}

KeywordClassifier::KeywordClassifier(const IntentTaxonomy& taxonomy) {
  const auto& classes = taxonomy.classes();
  class_ids_.reserve(classes.size());
  keyword_counts_.reserve(classes.size());
  for (std::size_t i = 0; i < classes.size(); ++i) {
    class_ids_.push_back(classes[i].class_id);
    std::unordered_set<std::string> unique(classes[i].keywords.begin(), classes[i].keywords.end());
    keyword_counts_.push_back(unique.size());
    for (const auto& kw : unique) {
      index_[kw].push_back(i);
    }
  }
}

std::vector<double> KeywordClassifier::scores(const TokenList& tokens) const {
  std::vector<std::size_t> hits(class_ids_.size(), 0);
  std::unordered_set<std::string_view> seen;
  for (const auto& t : tokens) {
    if (!seen.insert(t).second) continue;
    if (auto it = index_.find(t); it != index_.end()) {
      for (std::size_t c : it->second) ++hits[c];
    }
  }
  std::vector<double> out(class_ids_.size(), 0.0);
  for (std::size_t c = 0; c < out.size(); ++c) {
    out[c] = static_cast<double>(hits[c]) / static_cast<double>(keyword_counts_[c]);
  }
  return out;
}

ClassificationResult KeywordClassifier::classify(const ClassifyRequest& request) const {
  if (class_ids_.empty()) {
    throw BackendContractError("keyword classifier has an empty taxonomy");
  }
  const auto raw = scores(request.transcript.tokens());
  std::vector<std::pair<std::string, double>> ranked;
  ranked.reserve(raw.size());
  for (std::size_t c = 0; c < raw.size(); ++c) {
    ranked.emplace_back(class_ids_[c], raw[c]);
  }
  const std::size_t top = std::min<std::size_t>(3, ranked.size());
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(top),
                    ranked.end(), ranks_before);

  double sum = 0.0;
  for (std::size_t i = 0; i < top; ++i) sum += ranked[i].second;

  ClassificationResult result;
  result.class_id = ranked[0].first;
  result.confidence = sum > 0.0 ? ranked[0].second / sum : 0.0;
  for (std::size_t i = 1; i < top; ++i) {
    if (ranked[i].second > 0.0) {
      result.alternates.emplace_back(ranked[i].first, ranked[i].second / sum);
    }
  }
  return result;
}

RemoteClassifier::RemoteClassifier(std::string endpoint, std::chrono::milliseconds timeout,
                                   std::ptrdiff_t max_connections)
    : endpoint_(std::move(endpoint)),
      timeout_(timeout),
      slots_(std::clamp<std::ptrdiff_t>(max_connections, 1, 1024)) {}

ClassificationResult RemoteClassifier::classify(const ClassifyRequest& request) const {
  const json body = {{"prompt", request.prompt}};
  detail::HttpReply reply;
  slots_.acquire();
  try {
    reply = detail::post_json(endpoint_, "/v1/classify", body.dump(), timeout_);
  } catch (const std::exception& e) {
    slots_.release();
    throw ClassifierUnavailableError(e.what());
  }
  slots_.release();
  if (reply.status != 200) {
    throw ClassifierUnavailableError("classifier returned HTTP " + std::to_string(reply.status));
  }
  return parse_classifier_reply(reply.body, request.taxonomy);
}

ClassificationResult parse_classifier_reply(std::string_view body, const IntentTaxonomy& taxonomy) {
  const json j = json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw BackendContractError("classifier reply is not a JSON object");
  }
  if (!j.contains("class_id") || !j["class_id"].is_string()) {
    throw BackendContractError("classifier reply lacks string 'class_id'");
  }
  if (!j.contains("confidence") || !j["confidence"].is_number()) {
    throw BackendContractError("classifier reply lacks numeric 'confidence'");
  }
  ClassificationResult r;
  r.class_id = j["class_id"].get<std::string>();
  r.confidence = j["confidence"].get<double>();
  if (j.contains("alternates")) {
    const auto& alts = j["alternates"];
    if (!alts.is_array()) {
      throw BackendContractError("'alternates' must be an array");
    }
    for (const auto& a : alts) {
      if (!a.is_array() || a.size() != 2 || !a[0].is_string() || !a[1].is_number()) {
        throw BackendContractError("alternate must be [class_id, confidence]");
      }
      r.alternates.emplace_back(a[0].get<std::string>(), a[1].get<double>());
    }
  }
  std::stable_sort(r.alternates.begin(), r.alternates.end(), ranks_before);
  check_result(r, taxonomy);
  return r;
}

ClassificationResult classify(const Transcript& transcript, const ClassifierBackend& backend,
                              const KnowledgeStore& store, const IntentTaxonomy& taxonomy,
                              const TextTemplate& prompt_template, std::size_t rag_k) {
  if (transcript.empty()) {
    throw EmptyUtteranceError("cannot classify an empty transcript");
  }
  const auto hits = store.retrieve(transcript.tokens(), rag_k);
  std::vector<KnowledgeDoc> docs;
  docs.reserve(hits.size());
  for (const auto& h : hits) {
    docs.push_back(*store.find(h.doc_id));
  }
  const std::string prompt = build_prompt(transcript, docs, taxonomy, prompt_template);
  ClassificationResult result = backend.classify(ClassifyRequest{transcript, taxonomy, prompt});
  check_result(result, taxonomy);
  result.context_docs.clear();
  for (const auto& h : hits) {
    result.context_docs.push_back(h.doc_id);
  }
  return result;
}

}  // namespace ivr
