#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>

#include "ivr/asr.hpp"
#include "ivr/call_log.hpp"
#include "ivr/classifier.hpp"
#include "ivr/config.hpp"
#include "ivr/session.hpp"
#include "ivr/tts.hpp"

namespace ivr {

/// What the caller said: text that bypasses ASR, or audio routed through the
/// configured ASR backend.
struct UtteranceInput {
  std::variant<std::string, AudioRef> content;

  static UtteranceInput text(std::string t) { return {std::move(t)}; }
  static UtteranceInput audio(std::string ref) { return {AudioRef{std::move(ref)}}; }
};

/// How a PlayPrompt reaches the caller: synthesized audio, or the text itself
/// when TTS is unavailable.
struct Playback {
  std::optional<std::string> audio_ref;
  std::optional<std::string> text;
};

/// Drives CallSessions through the backends. Holds only immutable state, so a
/// single Engine may serve many sessions concurrently; each session must still
/// be advanced by one thread at a time.
class Engine {
 public:
  using Clock = std::function<Timestamp()>;

  struct Options {
    std::optional<AsrBackendConfig> asr_override;
    Clock clock;                                        // default: wall clock
    CallLogWriter* log = nullptr;                       // not owned
    std::shared_ptr<const ClassifierBackend> classifier;  // default: from config
    std::shared_ptr<const TtsBackend> tts;                // default: from config
  };

  struct Step {
    CallSession session;
    std::vector<DialogAction> actions;
    std::optional<Transcript> transcript;
  };

  explicit Engine(std::shared_ptr<const EngineConfig> config);
  Engine(std::shared_ptr<const EngineConfig> config, Options options);

  const EngineConfig& config() const noexcept { return *config_; }
  const ClassifierBackend& classifier() const noexcept { return *classifier_; }

  /// Opens a session and applies SessionStart. Without an explicit seed the
  /// session seed is derived from the config seed and call_id.
  Step start(std::string call_id, std::string language,
             std::optional<std::uint64_t> seed = std::nullopt) const;

  /// Handles one caller utterance in Listening (ASR -> classify ->
  /// ClassificationReady) or Confirming (ASR -> parse_confirmation). Backend
  /// failures become BackendFailure events; an empty reply while confirming is
  /// ConfirmUnclear. utterance_index feeds the per-utterance ASR seed.
  Step utterance(CallSession session, const UtteranceInput& input,
                 std::size_t utterance_index) const;

  Step hangup(CallSession session) const;

  /// advance() plus logging.
  Transition apply(CallSession session, const DialogEvent& event) const;

  Playback render(const actions::PlayPrompt& prompt, const std::string& language) const;

  static Timestamp wall_clock();
  /// Constant clock; advance() turns it into 1us logical ticks per session.
  static Timestamp logical_clock();

 private:
  std::shared_ptr<const EngineConfig> config_;
  Options options_;
  AsrBackendConfig asr_;
  std::shared_ptr<const ClassifierBackend> classifier_;
  std::shared_ptr<const TtsBackend> tts_;
};

}  // namespace ivr
