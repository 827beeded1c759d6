#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ivr/phase.hpp"
#include "ivr/text.hpp"

namespace ivr {

struct EditCounts {
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;
  std::size_t ref_len = 0;

  std::size_t errors() const noexcept { return substitutions + deletions + insertions; }

  EditCounts& operator+=(const EditCounts& o) noexcept;
  friend bool operator==(const EditCounts&, const EditCounts&) = default;
};

/// Minimum unit-cost word alignment of hyp against ref (Levenshtein DP).
/// Among cost-equal alignments the backtrace prefers substitution/match over
/// deletion over insertion, which pins the S/D/I split.
EditCounts word_edit_distance(const TokenList& ref, const TokenList& hyp);

/// (S + D + I) / ref_len. An empty reference scores 0 against an empty
/// hypothesis and throws EmptyReferenceError otherwise.
double utterance_wer(const EditCounts& counts);

using TokenPair = std::pair<TokenList, TokenList>;  // (reference, hypothesis)

struct CorpusWer {
  double pooled = 0.0;              // sum of errors / sum of ref_len
  double mean_utterance = 0.0;      // informational
  std::size_t utterance_count = 0;
  EditCounts totals;
};

/// Pooled corpus WER. Throws EmptyReferenceError naming the first pair whose
/// reference is empty.
CorpusWer corpus_wer(std::span<const TokenPair> pairs);

/// Terminal state of one simulated or live call, as seen by the report.
struct SessionOutcome {
  std::string call_id;
  Phase phase = Phase::Listening;
  std::optional<std::string> classified_as;   // last classification, if any
  std::optional<std::string> expected_class;  // scenario ground truth
};

struct EvalReport {
  CorpusWer wer;
  std::size_t sessions = 0;
  std::size_t failed_runs = 0;
  double rate_routed = 0.0;
  double rate_escalated = 0.0;
  double rate_abandoned = 0.0;
  double routed_correct_rate = 0.0;  // over sessions + failed runs
  std::optional<double> class_accuracy;
  std::map<std::string, double> per_class_accuracy;
};

/// Aggregates terminal-state rates, accuracy against ground truth and corpus
/// WER. Throws IncompleteBatchError if any outcome is non-terminal.
EvalReport build_report(std::span<const SessionOutcome> outcomes,
                        std::span<const TokenPair> wer_pairs, std::size_t failed_runs = 0);

/// Stable single-object JSON rendering (fixed key order).
std::string to_json(const EvalReport& report, int indent = 2);
std::string to_json(const CorpusWer& wer, int indent = 2);

}  // namespace ivr
