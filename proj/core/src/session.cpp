#include "ivr/session.hpp"

#include "ivr/errors.hpp"
#include "ivr/routing.hpp"
#include "ivr/tts.hpp"

namespace ivr {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::vector<DialogAction> escalate(CallSession& s) {
  s.phase = Phase::Escalated;
  return {actions::TransferOperator{}};
}

// Confirmation prompt for the current classification, or escalation if the
// class is unknown to the taxonomy.
std::vector<DialogAction> confirm_prompt(CallSession& s, const EngineConfig& config) {
  const IntentClass* intent = config.taxonomy.find(s.last_classification->class_id);
  if (intent == nullptr) {
    auto out = std::vector<DialogAction>{
        actions::LogOnly{"unknown class '" + s.last_classification->class_id + "'"}};
    auto esc = escalate(s);
    out.insert(out.end(), esc.begin(), esc.end());
    return out;
  }
  const auto rendered =
      render_confirmation(*intent, s.language, config.prompts_for(s.language).confirm);
  std::vector<DialogAction> out;
  if (rendered.warning) {
    out.push_back(actions::LogOnly{*rendered.warning});
  }
  out.push_back(actions::PlayPrompt{rendered.text});
  out.push_back(actions::Listen{});
  s.phase = Phase::Confirming;
  return out;
}

[[noreturn]] void violation(const CallSession& s, const DialogEvent& e) {
  throw ProtocolViolationError("event " + std::string(event_name(e)) + " is not valid in phase " +
                               std::string(to_string(s.phase)) + " (call '" + s.call_id + "')");
}

}  // namespace

std::string_view event_name(const DialogEvent& e) noexcept {
  return std::visit(overloaded{
                        [](const events::SessionStart&) { return "session_start"; },
                        [](const events::UtteranceReceived&) { return "utterance_received"; },
                        [](const events::ClassificationReady&) { return "classification_ready"; },
                        [](const events::ConfirmYes&) { return "confirm_yes"; },
                        [](const events::ConfirmNo&) { return "confirm_no"; },
                        [](const events::ConfirmUnclear&) { return "confirm_unclear"; },
                        [](const events::Hangup&) { return "hangup"; },
                        [](const events::BackendFailure&) { return "backend_failure"; },
                    },
                    e);
}

std::string_view action_name(const DialogAction& a) noexcept {
  return std::visit(overloaded{
                        [](const actions::PlayPrompt&) { return "play_prompt"; },
                        [](const actions::Listen&) { return "listen"; },
                        [](const actions::Transfer&) { return "transfer"; },
                        [](const actions::TransferOperator&) { return "transfer_operator"; },
                        [](const actions::LogOnly&) { return "log_only"; },
                    },
                    a);
}

CallSession CallSession::open(std::string call_id, std::string language, std::uint64_t seed) {
  CallSession s;
  s.call_id = std::move(call_id);
  s.language = std::move(language);
  s.seed = seed;
  return s;
}

Transition advance(CallSession s, const DialogEvent& event, const EngineConfig& config,
                   Timestamp at) {
  if (s.terminal()) {
    throw TerminalSessionError("call '" + s.call_id + "' already ended in " +
                               std::string(to_string(s.phase)));
  }
  const Phase before = s.phase;
  const bool started = !s.event_log.empty();
  std::vector<DialogAction> out;

  std::visit(
      overloaded{
          [&](const events::SessionStart&) {
            if (started || s.phase != Phase::Listening) violation(s, event);
            out.push_back(actions::PlayPrompt{
                config.prompts_for(s.language).greeting.render({})});
            out.push_back(actions::Listen{});
          },
          [&](const events::UtteranceReceived& u) {
            if (!started || s.phase != Phase::Listening) violation(s, event);
            if (u.transcript.raw_text().empty()) {
              throw ProtocolViolationError("utterance with empty text (call '" + s.call_id + "')");
            }
            s.phase = Phase::Classifying;
          },
          [&](const events::ClassificationReady& r) {
            if (s.phase != Phase::Classifying) violation(s, event);
            s.last_classification = r.result;
            if (r.result.confidence >= config.confidence_threshold) {
              out = confirm_prompt(s, config);
            } else {
              out = escalate(s);
            }
          },
          [&](const events::ConfirmYes&) {
            if (s.phase != Phase::Confirming) violation(s, event);
            try {
              const std::string queue = route(s.last_classification->class_id, config.routing);
              s.phase = Phase::Routed;
              out.push_back(actions::Transfer{queue});
            } catch (const UnroutableClassError& e) {
              out.push_back(actions::LogOnly{e.what()});
              auto esc = escalate(s);
              out.insert(out.end(), esc.begin(), esc.end());
            }
          },
          [&](const events::ConfirmNo&) {
            if (s.phase != Phase::Confirming) violation(s, event);
            if (s.confirm_attempts + 1 < config.max_confirm_attempts) {
              ++s.confirm_attempts;
              s.phase = Phase::Listening;
              out.push_back(actions::PlayPrompt{config.prompts_for(s.language).reask.render({})});
              out.push_back(actions::Listen{});
            } else {
              s.confirm_attempts = config.max_confirm_attempts;
              out = escalate(s);
            }
          },
          [&](const events::ConfirmUnclear&) {
            if (s.phase != Phase::Confirming) violation(s, event);
            if (s.unclear_replays == 0) {
              ++s.unclear_replays;
              out = confirm_prompt(s, config);
            } else {
              out = escalate(s);
            }
          },
          [&](const events::Hangup&) { s.phase = Phase::Abandoned; },
          [&](const events::BackendFailure& f) {
            if (!started) violation(s, event);
            out.push_back(actions::LogOnly{f.reason});
            auto esc = escalate(s);
            out.insert(out.end(), esc.begin(), esc.end());
          },
      },
      event);

  Timestamp ts = at;
  if (!s.event_log.empty() && ts <= s.event_log.back().ts) {
    ts = s.event_log.back().ts + std::chrono::microseconds(1);
  }
  s.event_log.push_back(LogRecord{ts, before, event, out, s.phase});
  return Transition{std::move(s), std::move(out)};
}

}  // namespace ivr
