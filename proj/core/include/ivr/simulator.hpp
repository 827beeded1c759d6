#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ivr/engine.hpp"
#include "ivr/metrics.hpp"

namespace ivr::sim {

enum class StepKind { Utterance, Reply, Hangup };

struct ScenarioStep {
  StepKind kind = StepKind::Utterance;
  std::string text;  // reference speech; empty for Hangup

  friend bool operator==(const ScenarioStep&, const ScenarioStep&) = default;
};

/// A scripted caller. Utterances and replies are both spoken text fed through
/// the mock ASR; replies are interpreted by the confirmation lexicon.
struct Scenario {
  std::string scenario_id;
  std::string language;
  std::vector<ScenarioStep> steps;
  std::optional<std::string> expected_class;
  Phase expected_terminal = Phase::Routed;

  /// Throws ConfigError (origin names the source file).
  void validate(const IntentTaxonomy& taxonomy, const std::string& origin = "") const;
};

/// Accepts a single scenario object or an array of them.
std::vector<Scenario> parse_scenarios(std::string_view json_text, const std::string& origin);

/// Loads a .json/.jsonl file, or every such file in a directory. The result
/// is sorted by scenario_id; duplicate ids are rejected.
std::vector<Scenario> load_scenarios(const std::filesystem::path& path);

struct SessionReport {
  std::string scenario_id;
  std::string call_id;
  Phase terminal = Phase::Listening;
  std::optional<std::string> classified_as;
  std::optional<std::string> expected_class;
  Phase expected_terminal = Phase::Routed;
  std::vector<std::string> action_trace;  // "<event> -> <action>" per emitted action
  std::vector<TokenPair> wer_pairs;       // (reference tokens, transcript tokens)
  std::vector<LogRecord> log;
  std::size_t steps_used = 0;

  bool matches_expectation() const {
    return terminal == expected_terminal &&
           (expected_terminal != Phase::Routed || classified_as == expected_class);
  }
};

struct RunOptions {
  double error_rate = 0.0;
  std::uint64_t seed = 0;  // batch seed; combined with scenario_id into the session seed
  std::optional<std::string> call_id;
};

/// Drives one session through the scenario with the mock ASR at
/// options.error_rate. Every utterance and reply is passed as an audio
/// reference carrying its reference text. The session seed depends on the
/// batch seed and scenario_id only, so sweeps over error_rate share their
/// randomness. Throws ScenarioUnderrunError if the steps run out first.
SessionReport run_scenario(const Scenario& scenario, const Engine& engine,
                           const RunOptions& options = {});

/// Convenience overload that builds an Engine with a mock ASR override.
SessionReport run_scenario(const Scenario& scenario,
                           std::shared_ptr<const EngineConfig> config,
                           const RunOptions& options = {});

struct FailedRun {
  std::string scenario_id;
  std::uint64_t seed = 0;
  std::string error;
};

struct RateReport {
  double error_rate = 0.0;
  EvalReport report;
  std::vector<FailedRun> failures;
  std::size_t expectation_mismatches = 0;
};

struct BatchOptions {
  std::vector<std::uint64_t> seeds{0};
  std::vector<double> error_rates{0.0};
  std::size_t threads = 0;         // 0: hardware concurrency
  bool timestamps = false;         // wall clock in logs instead of logical ticks
  CallLogWriter* log = nullptr;    // receives every record, in run order
};

struct BatchReport {
  std::size_t scenarios = 0;
  std::vector<std::uint64_t> seeds;
  std::vector<RateReport> rates;
  std::optional<std::string> generated_at;
};

/// Runs scenarios x seeds x error_rates. Failures are collected per rate, not
/// thrown. Results are aggregated in (seed, scenario_id) order regardless of
/// thread scheduling, so the report is a pure function of the inputs.
BatchReport run_batch(const std::vector<Scenario>& scenarios,
                      std::shared_ptr<const EngineConfig> config, const BatchOptions& options);

std::string to_json(const BatchReport& report, int indent = 2);
std::string to_json(const SessionReport& report, int indent = 2);

/// "scenario_id@seed@rate", the call_id used for batch runs.
std::string batch_call_id(const std::string& scenario_id, std::uint64_t seed, double rate);

/// Reads line-aligned reference and hypothesis files. Throws InputError on a
/// line-count mismatch and EmptyReferenceError on an empty reference line.
CorpusWer eval_asr(const std::filesystem::path& ref_file, const std::filesystem::path& hyp_file);

/// Same, for a single file of "reference<TAB>hypothesis" lines.
CorpusWer eval_asr_tsv(const std::filesystem::path& tsv_file);

}  // namespace ivr::sim
