#include "ivr/engine.hpp"

#include "ivr/confirmation.hpp"
#include "ivr/errors.hpp"
#include "ivr/rng.hpp"

namespace ivr {

namespace {

std::shared_ptr<const ClassifierBackend> make_classifier(const EngineConfig& cfg) {
  if (cfg.classifier.kind == ClassifierBackendConfig::Kind::Remote) {
    return std::make_shared<RemoteClassifier>(*cfg.classifier.endpoint, cfg.classifier.timeout,
                                              cfg.classifier.max_connections);
  }
  return std::make_shared<KeywordClassifier>(cfg.taxonomy);
}

std::shared_ptr<const TtsBackend> make_tts(const EngineConfig& cfg) {
  if (cfg.tts.kind == TtsBackendConfig::Kind::Remote) {
    return std::make_shared<RemoteTts>(*cfg.tts.endpoint, cfg.tts.timeout);
  }
  return std::make_shared<MockTts>();
}

void append(std::vector<DialogAction>& to, std::vector<DialogAction> from) {
  to.insert(to.end(), std::make_move_iterator(from.begin()), std::make_move_iterator(from.end()));
}

}  // namespace

Engine::Engine(std::shared_ptr<const EngineConfig> config) : Engine(std::move(config), Options{}) {}

Engine::Engine(std::shared_ptr<const EngineConfig> config, Options options)
    : config_(std::move(config)), options_(std::move(options)) {
  if (!config_) {
    throw ConfigError("engine requires a configuration");
  }
  asr_ = options_.asr_override.value_or(config_->asr);
  asr_.validate();
  classifier_ = options_.classifier ? options_.classifier : make_classifier(*config_);
  tts_ = options_.tts ? options_.tts : make_tts(*config_);
  if (!options_.clock) {
    options_.clock = &Engine::wall_clock;
  }
}

Timestamp Engine::wall_clock() {
  return std::chrono::time_point_cast<std::chrono::microseconds>(std::chrono::system_clock::now());
}

Timestamp Engine::logical_clock() { return Timestamp{}; }

Transition Engine::apply(CallSession session, const DialogEvent& event) const {
  Transition t = advance(std::move(session), event, *config_, options_.clock());
  if (options_.log != nullptr) {
    options_.log->append(t.session.call_id, t.session.event_log.back());
  }
  return t;
}

Engine::Step Engine::start(std::string call_id, std::string language,
                           std::optional<std::uint64_t> seed) const {
  const std::uint64_t s = seed.value_or(mix_seed(config_->seed, fnv1a64(call_id)));
  auto t = apply(CallSession::open(std::move(call_id), std::move(language), s),
                 events::SessionStart{});
  return Step{std::move(t.session), std::move(t.actions), std::nullopt};
}

Engine::Step Engine::hangup(CallSession session) const {
  auto t = apply(std::move(session), events::Hangup{});
  return Step{std::move(t.session), std::move(t.actions), std::nullopt};
}

Engine::Step Engine::utterance(CallSession session, const UtteranceInput& input,
                               std::size_t utterance_index) const {
  if (session.terminal()) {
    throw TerminalSessionError("call '" + session.call_id + "' already ended");
  }
  if (session.phase != Phase::Listening && session.phase != Phase::Confirming) {
    throw ProtocolViolationError("utterance while " + std::string(to_string(session.phase)));
  }
  Step step{std::move(session), {}, std::nullopt};
  auto fail = [&](const std::string& reason) {
    auto t = apply(std::move(step.session), events::BackendFailure{reason});
    step.session = std::move(t.session);
    append(step.actions, std::move(t.actions));
    return std::move(step);
  };

  // Speech to text.
  std::optional<Transcript> transcript;
  try {
    if (const auto* text = std::get_if<std::string>(&input.content)) {
      transcript = Transcript(*text, step.session.language, TranscriptSource::identity());
    } else {
      AsrBackendConfig asr = asr_;
      asr.seed = mix_seed(step.session.seed, utterance_index);
      transcript = transcribe(std::get<AudioRef>(input.content), step.session.language, asr);
    }
  } catch (const EmptyUtteranceError& e) {
    if (step.session.phase == Phase::Listening) {
      return fail(std::string("asr: ") + e.what());
    }
    transcript = Transcript("", step.session.language);
  } catch (const AsrUnavailableError& e) {
    return fail(std::string("asr: ") + e.what());
  }
  step.transcript = transcript;

  if (step.session.phase == Phase::Confirming) {
    DialogEvent ev;
    switch (parse_confirmation(*transcript, config_->lexicon)) {
      case Confirmation::Yes:
        ev = events::ConfirmYes{};
        break;
      case Confirmation::No:
        ev = events::ConfirmNo{};
        break;
      case Confirmation::Unclear:
        ev = events::ConfirmUnclear{};
        break;
    }
    auto t = apply(std::move(step.session), ev);
    step.session = std::move(t.session);
    append(step.actions, std::move(t.actions));
    return step;
  }

  if (transcript->empty()) {
    return fail("asr: transcript has no words");
  }
  {
    auto t = apply(std::move(step.session), events::UtteranceReceived{*transcript});
    step.session = std::move(t.session);
    append(step.actions, std::move(t.actions));
  }
  ClassificationResult result;
  try {
    result = classify(*transcript, *classifier_, config_->knowledge, config_->taxonomy,
                      config_->classify_prompt, config_->rag_k);
  } catch (const IvrError& e) {
    // EmptyUtterance, ClassifierUnavailable, BackendContract
    return fail(std::string("classifier: ") + e.what());
  }
  auto t = apply(std::move(step.session), events::ClassificationReady{std::move(result)});
  step.session = std::move(t.session);
  append(step.actions, std::move(t.actions));
  return step;
}

Playback Engine::render(const actions::PlayPrompt& prompt, const std::string& language) const {
  try {
    SynthesisRequest req{prompt.text, language, config_->tts.voice};
    return Playback{synthesize(req, *tts_), std::nullopt};
  } catch (const IvrError&) {
    return Playback{std::nullopt, prompt.text};
  }
}

}  // namespace ivr
