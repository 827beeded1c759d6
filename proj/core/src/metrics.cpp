#include "ivr/metrics.hpp"

#include <algorithm>
#include <cstdint>

#include "ivr/errors.hpp"
#include "json_io.hpp"

namespace ivr {

std::string_view to_string(Phase p) noexcept {
  switch (p) {
    case Phase::Listening:
      return "Listening";
    case Phase::Classifying:
      return "Classifying";
    case Phase::Confirming:
      return "Confirming";
    case Phase::Routed:
      return "Routed";
    case Phase::Escalated:
      return "Escalated";
    case Phase::Abandoned:
      return "Abandoned";
  }
  return "Unknown";
}

std::optional<Phase> parse_phase(std::string_view name) noexcept {
  for (Phase p : {Phase::Listening, Phase::Classifying, Phase::Confirming, Phase::Routed,
                  Phase::Escalated, Phase::Abandoned}) {
    if (to_string(p) == name) {
      return p;
    }
  }
  return std::nullopt;
}

EditCounts& EditCounts::operator+=(const EditCounts& o) noexcept {
  substitutions += o.substitutions;
  deletions += o.deletions;
  insertions += o.insertions;
  ref_len += o.ref_len;
  return *this;
}

EditCounts word_edit_distance(const TokenList& ref, const TokenList& hyp) {
  const std::size_t n = ref.size();
  const std::size_t m = hyp.size();
  const std::size_t width = m + 1;
  std::vector<std::uint32_t> cost((n + 1) * width);
  auto at = [&](std::size_t i, std::size_t j) -> std::uint32_t& { return cost[i * width + j]; };

  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = static_cast<std::uint32_t>(i);
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = static_cast<std::uint32_t>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const std::uint32_t diag = at(i - 1, j - 1) + (ref[i - 1] == hyp[j - 1] ? 0u : 1u);
      const std::uint32_t del = at(i - 1, j) + 1;
      const std::uint32_t ins = at(i, j - 1) + 1;
      at(i, j) = std::min({diag, del, ins});
    }
  }

  EditCounts counts;
  counts.ref_len = n;
  std::size_t i = n;
  std::size_t j = m;
  while (i > 0 || j > 0) {
    const std::uint32_t here = at(i, j);
    if (i > 0 && j > 0) {
      const bool same = ref[i - 1] == hyp[j - 1];
      if (here == at(i - 1, j - 1) + (same ? 0u : 1u)) {
        if (!same) ++counts.substitutions;
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && here == at(i - 1, j) + 1) {
      ++counts.deletions;
      --i;
      continue;
    }
    ++counts.insertions;
    --j;
  }
  return counts;
}

double utterance_wer(const EditCounts& counts) {
  if (counts.ref_len == 0) {
    if (counts.errors() != 0) {
      throw EmptyReferenceError();
    }
    return 0.0;
  }
  return static_cast<double>(counts.errors()) / static_cast<double>(counts.ref_len);
}

CorpusWer corpus_wer(std::span<const TokenPair> pairs) {
  CorpusWer out;
  double sum_utt = 0.0;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto& [ref, hyp] = pairs[k];
    if (ref.empty()) {
      throw EmptyReferenceError(k);
    }
    const EditCounts c = word_edit_distance(ref, hyp);
    out.totals += c;
    sum_utt += utterance_wer(c);
  }
  out.utterance_count = pairs.size();
  if (out.totals.ref_len > 0) {
    out.pooled = static_cast<double>(out.totals.errors()) /
                 static_cast<double>(out.totals.ref_len);
    out.mean_utterance = sum_utt / static_cast<double>(pairs.size());
  }
  return out;
}

EvalReport build_report(std::span<const SessionOutcome> outcomes,
                        std::span<const TokenPair> wer_pairs, std::size_t failed_runs) {
  EvalReport report;
  report.wer = corpus_wer(wer_pairs);
  report.sessions = outcomes.size();
  report.failed_runs = failed_runs;

  std::size_t routed = 0;
  std::size_t escalated = 0;
  std::size_t abandoned = 0;
  std::size_t routed_correct = 0;
  std::size_t labelled = 0;
  std::size_t correct = 0;
  std::map<std::string, std::pair<std::size_t, std::size_t>> per_class;  // (correct, total)

  for (const auto& o : outcomes) {
    switch (o.phase) {
      case Phase::Routed:
        ++routed;
        break;
      case Phase::Escalated:
        ++escalated;
        break;
      case Phase::Abandoned:
        ++abandoned;
        break;
      default:
        throw IncompleteBatchError("session '" + o.call_id + "' ended in non-terminal phase " +
                                   std::string(to_string(o.phase)));
    }
    if (o.expected_class) {
      const bool hit = o.classified_as && *o.classified_as == *o.expected_class;
      ++labelled;
      auto& slot = per_class[*o.expected_class];
      ++slot.second;
      if (hit) {
        ++correct;
        ++slot.first;
        if (o.phase == Phase::Routed) {
          ++routed_correct;
        }
      }
    }
  }

  if (!outcomes.empty()) {
    const auto total = static_cast<double>(outcomes.size());
    report.rate_routed = static_cast<double>(routed) / total;
    report.rate_escalated = static_cast<double>(escalated) / total;
    report.rate_abandoned = static_cast<double>(abandoned) / total;
  }
  const std::size_t runs = outcomes.size() + failed_runs;
  if (runs > 0) {
    report.routed_correct_rate = static_cast<double>(routed_correct) / static_cast<double>(runs);
  }
  if (labelled > 0) {
    report.class_accuracy = static_cast<double>(correct) / static_cast<double>(labelled);
  }
  for (const auto& [cls, tally] : per_class) {
    report.per_class_accuracy[cls] =
        static_cast<double>(tally.first) / static_cast<double>(tally.second);
  }
  return report;
}

namespace detail {

ojson to_ojson(const EditCounts& c) {
  ojson j;
  j["substitutions"] = c.substitutions;
  j["deletions"] = c.deletions;
  j["insertions"] = c.insertions;
  j["ref_len"] = c.ref_len;
  return j;
}

ojson to_ojson(const CorpusWer& wer) {
  ojson j;
  j["corpus_wer"] = wer.pooled;
  j["mean_utterance_wer"] = wer.mean_utterance;
  j["utterance_count"] = wer.utterance_count;
  j["edit_counts"] = to_ojson(wer.totals);
  return j;
}

ojson to_ojson(const EvalReport& r) {
  ojson j;
  j["corpus_wer"] = r.wer.pooled;
  j["mean_utterance_wer"] = r.wer.mean_utterance;
  j["utterance_count"] = r.wer.utterance_count;
  j["edit_counts"] = to_ojson(r.wer.totals);
  j["sessions"] = r.sessions;
  j["failed_runs"] = r.failed_runs;
  j["rate_routed"] = r.rate_routed;
  j["rate_escalated"] = r.rate_escalated;
  j["rate_abandoned"] = r.rate_abandoned;
  j["routed_correct_rate"] = r.routed_correct_rate;
  j["class_accuracy"] = r.class_accuracy ? ojson(*r.class_accuracy) : ojson(nullptr);
  ojson per_class = ojson::object();
  for (const auto& [cls, acc] : r.per_class_accuracy) {
    per_class[cls] = acc;
  }
  j["per_class_accuracy"] = std::move(per_class);
  return j;
}

}  // namespace detail

std::string to_json(const EvalReport& report, int indent) {
  return detail::to_ojson(report).dump(indent, ' ', false);
}

std::string to_json(const CorpusWer& wer, int indent) {
  return detail::to_ojson(wer).dump(indent, ' ', false);
}

}  // namespace ivr
