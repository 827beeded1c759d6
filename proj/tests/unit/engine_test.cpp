#include <gtest/gtest.h>

#include "ivr/engine.hpp"
#include "ivr/errors.hpp"
#include "test_support.hpp"

using namespace ivr;

namespace {

class ThrowingClassifier final : public ClassifierBackend {
 public:
  ClassificationResult classify(const ClassifyRequest&) const override {
    throw ClassifierUnavailableError("stub down");
  }
};

class BadContractClassifier final : public ClassifierBackend {
 public:
  ClassificationResult classify(const ClassifyRequest&) const override {
    return {"card_lost", 0.2, {{"balance", 0.9}}, {}};
  }
};

class ThrowingTts final : public TtsBackend {
 public:
  std::string synthesize(const SynthesisRequest&) const override { throw TtsUnavailableError("tts down"); }
};

Engine make_engine(std::shared_ptr<EngineConfig> cfg, Engine::Options o = {}) {
  if (!o.clock) o.clock = &Engine::logical_clock;
  return Engine(std::move(cfg), std::move(o));
}

bool escalated_with_note(const Engine::Step& s, const std::string& needle) {
  if (s.session.phase != Phase::Escalated) return false;
  for (const auto& a : s.actions) {
    if (const auto* l = std::get_if<actions::LogOnly>(&a); l && l->note.find(needle) != std::string::npos) {
      return true;
    }
  }
  return false;
}

}  // namespace

TEST(Engine, TextHappyPath) {
  const auto engine = make_engine(support::toy_config());
  auto s = engine.start("c1", "kk");
  EXPECT_EQ(s.session.phase, Phase::Listening);
  s = engine.utterance(std::move(s.session), UtteranceInput::text("Мен картамды жоғалттым"), 0);
  EXPECT_EQ(s.session.phase, Phase::Confirming);
  ASSERT_TRUE(s.transcript.has_value());
  s = engine.utterance(std::move(s.session), UtteranceInput::text("Иә"), 1);
  EXPECT_EQ(s.session.phase, Phase::Routed);
  EXPECT_EQ(std::get<actions::Transfer>(s.actions.back()).queue_id, "Q17");
  EXPECT_EQ(s.session.event_log.size(), 4u);
}

TEST(Engine, AudioGoesThroughMockAsr) {
  Engine::Options o;
  o.asr_override = AsrBackendConfig::mock(1.0, 0);
  const auto engine = make_engine(support::toy_config(), std::move(o));
  auto s = engine.start("c1", "kk");
  s = engine.utterance(std::move(s.session), UtteranceInput::audio("картамды жоғалттым"), 0);
  ASSERT_TRUE(s.transcript.has_value());
  EXPECT_EQ(s.transcript->source().kind, TranscriptSource::Kind::MockNoisy);
  EXPECT_NE(s.transcript->tokens(), normalize("картамды жоғалттым"));
}

TEST(Engine, SameSeedSameNoise) {
  Engine::Options o;
  o.asr_override = AsrBackendConfig::mock(0.5, 0);
  const auto engine = make_engine(support::toy_config(), std::move(o));
  auto a = engine.start("c1", "kk", 99);
  auto b = engine.start("c2", "kk", 99);
  const auto ta = engine.utterance(std::move(a.session), UtteranceInput::audio("мен картамды кеше жоғалттым"), 0);
  const auto tb = engine.utterance(std::move(b.session), UtteranceInput::audio("мен картамды кеше жоғалттым"), 0);
  EXPECT_EQ(ta.transcript->tokens(), tb.transcript->tokens());
}

TEST(Engine, EmptyAudioWhileListeningEscalates) {
  const auto engine = make_engine(support::toy_config());
  auto s = engine.start("c1", "kk");
  const auto r = engine.utterance(std::move(s.session), UtteranceInput::audio("..."), 0);
  EXPECT_TRUE(escalated_with_note(r, "asr"));
}

TEST(Engine, EmptyReplyWhileConfirmingIsUnclear) {
  const auto engine = make_engine(support::toy_config());
  auto s = engine.start("c1", "kk");
  s = engine.utterance(std::move(s.session), UtteranceInput::text("картамды жоғалттым"), 0);
  s = engine.utterance(std::move(s.session), UtteranceInput::audio("..."), 1);
  EXPECT_EQ(s.session.phase, Phase::Confirming);
  EXPECT_EQ(s.session.unclear_replays, 1);
}

TEST(Engine, ClassifierFailureEscalates) {
  Engine::Options o;
  o.classifier = std::make_shared<ThrowingClassifier>();
  const auto engine = make_engine(support::toy_config(), std::move(o));
  auto s = engine.start("c1", "kk");
  const auto r = engine.utterance(std::move(s.session), UtteranceInput::text("баланс"), 0);
  EXPECT_TRUE(escalated_with_note(r, "stub down"));
}

TEST(Engine, ContractViolationEscalates) {
  Engine::Options o;
  o.classifier = std::make_shared<BadContractClassifier>();
  const auto engine = make_engine(support::toy_config(), std::move(o));
  auto s = engine.start("c1", "kk");
  const auto r = engine.utterance(std::move(s.session), UtteranceInput::text("баланс"), 0);
  EXPECT_TRUE(escalated_with_note(r, "classifier"));
}

TEST(Engine, RemoteAsrDownEscalates) {
  Engine::Options o;
  auto asr = AsrBackendConfig::remote("http://127.0.0.1:1");
  asr.timeout = std::chrono::milliseconds(200);
  o.asr_override = asr;
  const auto engine = make_engine(support::toy_config(), std::move(o));
  auto s = engine.start("c1", "kk");
  const auto r = engine.utterance(std::move(s.session), UtteranceInput::audio("ref-1"), 0);
  EXPECT_TRUE(escalated_with_note(r, "asr"));
}

TEST(Engine, RenderUsesTtsAndFallsBackToText) {
  const auto engine = make_engine(support::toy_config());
  const auto ok = engine.render(actions::PlayPrompt{"Сәлем"}, "kk");
  ASSERT_TRUE(ok.audio_ref.has_value());
  EXPECT_EQ(ok.audio_ref->rfind("mock-audio:", 0), 0u);

  Engine::Options o;
  o.tts = std::make_shared<ThrowingTts>();
  const auto degraded = make_engine(support::toy_config(), std::move(o)).render(actions::PlayPrompt{"Сәлем"}, "kk");
  EXPECT_FALSE(degraded.audio_ref.has_value());
  EXPECT_EQ(degraded.text, "Сәлем");
}

TEST(Engine, UnknownLanguageUsesDefaultPrompts) {
  const auto engine = make_engine(support::toy_config());
  const auto s = engine.start("c1", "en");
  EXPECT_EQ(std::get<actions::PlayPrompt>(s.actions[0]).text, "Сәлеметсіз бе");
}

TEST(Engine, WritesEveryTransitionToTheLog) {
  support::TempDir dir;
  {
    CallLogWriter log(dir / "log.jsonl");
    Engine::Options o;
    o.log = &log;
    const auto engine = make_engine(support::toy_config(), std::move(o));
    auto s = engine.start("c1", "kk");
    s = engine.utterance(std::move(s.session), UtteranceInput::text("картамды жоғалттым"), 0);
    engine.hangup(std::move(s.session));
  }
  const std::string text = support::slurp(dir / "log.jsonl");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);
  EXPECT_NE(text.find("\"phase_after\":\"Abandoned\""), std::string::npos);
}

TEST(Engine, UtteranceOnTerminalSessionThrows) {
  const auto engine = make_engine(support::toy_config());
  auto s = engine.hangup(engine.start("c1", "kk").session);
  EXPECT_THROW(engine.utterance(std::move(s.session), UtteranceInput::text("x"), 0), TerminalSessionError);
}
