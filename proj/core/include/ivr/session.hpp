#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ivr/asr.hpp"
#include "ivr/classifier.hpp"
#include "ivr/config.hpp"
#include "ivr/phase.hpp"

namespace ivr {

using Timestamp = std::chrono::sys_time<std::chrono::microseconds>;

namespace events {
struct SessionStart {
  friend bool operator==(const SessionStart&, const SessionStart&) = default;
};
struct UtteranceReceived {
  Transcript transcript;
  friend bool operator==(const UtteranceReceived&, const UtteranceReceived&) = default;
};
struct ClassificationReady {
  ClassificationResult result;
  friend bool operator==(const ClassificationReady&, const ClassificationReady&) = default;
};
struct ConfirmYes {
  friend bool operator==(const ConfirmYes&, const ConfirmYes&) = default;
};
struct ConfirmNo {
  friend bool operator==(const ConfirmNo&, const ConfirmNo&) = default;
};
struct ConfirmUnclear {
  friend bool operator==(const ConfirmUnclear&, const ConfirmUnclear&) = default;
};
struct Hangup {
  friend bool operator==(const Hangup&, const Hangup&) = default;
};
// ASR or classifier failure; escalates from any live phase.
struct BackendFailure {
  std::string reason;
  friend bool operator==(const BackendFailure&, const BackendFailure&) = default;
};
}  // namespace events

using DialogEvent =
    std::variant<events::SessionStart, events::UtteranceReceived, events::ClassificationReady,
                 events::ConfirmYes, events::ConfirmNo, events::ConfirmUnclear, events::Hangup,
                 events::BackendFailure>;

namespace actions {
struct PlayPrompt {
  std::string text;
  friend bool operator==(const PlayPrompt&, const PlayPrompt&) = default;
};
struct Listen {
  friend bool operator==(const Listen&, const Listen&) = default;
};
struct Transfer {
  std::string queue_id;
  friend bool operator==(const Transfer&, const Transfer&) = default;
};
struct TransferOperator {
  friend bool operator==(const TransferOperator&, const TransferOperator&) = default;
};
struct LogOnly {
  std::string note;
  friend bool operator==(const LogOnly&, const LogOnly&) = default;
};
}  // namespace actions

using DialogAction = std::variant<actions::PlayPrompt, actions::Listen, actions::Transfer,
                                  actions::TransferOperator, actions::LogOnly>;

std::string_view event_name(const DialogEvent& e) noexcept;
std::string_view action_name(const DialogAction& a) noexcept;

struct LogRecord {
  Timestamp ts;
  Phase phase_before = Phase::Listening;
  DialogEvent event;
  std::vector<DialogAction> actions;
  Phase phase_after = Phase::Listening;

  friend bool operator==(const LogRecord&, const LogRecord&) = default;
};

/// Per-call dialog state.
struct CallSession {
  std::string call_id;
  std::string language;
  std::uint64_t seed = 0;  // drives per-utterance ASR noise
  Phase phase = Phase::Listening;
  int confirm_attempts = 0;
  int unclear_replays = 0;
  std::optional<ClassificationResult> last_classification;
  std::vector<LogRecord> event_log;  // append-only, strictly increasing ts

  bool terminal() const noexcept { return is_terminal(phase); }

  static CallSession open(std::string call_id, std::string language, std::uint64_t seed = 0);

  friend bool operator==(const CallSession&, const CallSession&) = default;
};

struct Transition {
  CallSession session;
  std::vector<DialogAction> actions;
};

/// Pure dialog transition.
///
///   Listening   + SessionStart (first event)     -> Listening   [greeting, Listen]
///   Listening   + UtteranceReceived              -> Classifying []
///   Classifying + ClassificationReady (c >= tau) -> Confirming  [confirm prompt, Listen]
///   Classifying + ClassificationReady (c < tau)  -> Escalated   [TransferOperator]
///   Confirming  + ConfirmYes                     -> Routed      [Transfer(queue)]
///   Confirming  + ConfirmNo  (attempts+1 < max)  -> Listening   [re-ask prompt, Listen]
///   Confirming  + ConfirmNo  (otherwise)         -> Escalated   [TransferOperator]
///   Confirming  + ConfirmUnclear (first in call) -> Confirming  [confirm prompt, Listen]
///   Confirming  + ConfirmUnclear (again)         -> Escalated   [TransferOperator]
///   any live    + BackendFailure                 -> Escalated   [TransferOperator]
///   any live    + Hangup                         -> Abandoned   []
///
/// An unroutable or unknown class escalates instead of routing. The log
/// record's timestamp is max(at, previous + 1us), so the log stays strictly
/// ordered even with a constant clock.
///
/// Throws TerminalSessionError if the session already ended and
/// ProtocolViolationError for an event that is not valid in the phase.
Transition advance(CallSession session, const DialogEvent& event, const EngineConfig& config,
                   Timestamp at = Timestamp{});

}  // namespace ivr
