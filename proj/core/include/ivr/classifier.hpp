#pragma once

#include <chrono>
#include <memory>
#include <semaphore>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ivr/asr.hpp"
#include "ivr/retrieval.hpp"
#include "ivr/taxonomy.hpp"
#include "ivr/text_template.hpp"

namespace ivr {

struct ClassificationResult {
  std::string class_id;
  double confidence = 0.0;
  std::vector<std::pair<std::string, double>> alternates;  // descending
  std::vector<std::string> context_docs;

  friend bool operator==(const ClassificationResult&, const ClassificationResult&) = default;
};

/// Checks confidence range and dominance, alternate ordering, and that every
/// class_id is in the taxonomy. Throws BackendContractError.
void check_result(const ClassificationResult& result, const IntentTaxonomy& taxonomy);

struct ClassifyRequest {
  const Transcript& transcript;
  const IntentTaxonomy& taxonomy;
  const std::string& prompt;
};

class ClassifierBackend {
 public:
  virtual ~ClassifierBackend() = default;
  virtual ClassificationResult classify(const ClassifyRequest& request) const = 0;
};

/// Deterministic keyword-overlap scorer.
///
/// score(c) = |distinct tokens ∩ keywords(c)| / |keywords(c)|. Classes are
/// ranked by score descending then class_id ascending; confidence of the best
/// class is its score over the sum of the top-3 scores (0 when all are 0).
/// Ranks 2 and 3 with a positive score become alternates.
class KeywordClassifier final : public ClassifierBackend {
 public:
  explicit KeywordClassifier(const IntentTaxonomy& taxonomy);
  ClassificationResult classify(const ClassifyRequest& request) const override;

  /// Raw overlap score of every class in taxonomy order.
  std::vector<double> scores(const TokenList& tokens) const;

 private:
  std::vector<std::string> class_ids_;
  std::vector<std::size_t> keyword_counts_;
  std::unordered_map<std::string, std::vector<std::size_t>> index_;  // keyword -> classes
};

/// HTTP POST {endpoint}/v1/classify with {"prompt": ...}.
class RemoteClassifier final : public ClassifierBackend {
 public:
  RemoteClassifier(std::string endpoint, std::chrono::milliseconds timeout,
                   std::ptrdiff_t max_connections);
  ClassificationResult classify(const ClassifyRequest& request) const override;

 private:
  std::string endpoint_;
  std::chrono::milliseconds timeout_;
  mutable std::counting_semaphore<1024> slots_;
};

/// Parses a remote classifier reply body and validates it against the
/// taxonomy. Alternates are re-sorted (confidence desc, class_id asc).
/// Throws BackendContractError on malformed replies or unknown class_ids.
ClassificationResult parse_classifier_reply(std::string_view body, const IntentTaxonomy& taxonomy);

/// Retrieval-augmented classification: retrieve rag_k docs, build the prompt,
/// ask the backend, validate the result and record the context doc ids.
/// Throws EmptyUtteranceError for a transcript without tokens.
ClassificationResult classify(const Transcript& transcript, const ClassifierBackend& backend,
                              const KnowledgeStore& store, const IntentTaxonomy& taxonomy,
                              const TextTemplate& prompt_template, std::size_t rag_k);

}  // namespace ivr
