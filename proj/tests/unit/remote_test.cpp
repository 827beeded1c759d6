#include <gtest/gtest.h>

#include <atomic>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "ivr/asr.hpp"
#include "ivr/classifier.hpp"
#include "ivr/errors.hpp"
#include "ivr/tts.hpp"
#include "test_support.hpp"

using namespace ivr;
using nlohmann::json;

namespace {

// Minimal HTTP stub: every path answers with the configured status and body,
// and remembers the last request body it saw.
class Stub {
 public:
  Stub() {
    server_.Post(R"(/v1/.*)", [this](const httplib::Request& req, httplib::Response& res) {
      std::lock_guard lock(mu_);
      last_path_ = req.path;
      last_body_ = req.body;
      res.status = status_;
      res.set_content(body_, "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~Stub() {
    server_.stop();
    thread_.join();
  }

  void reply(int status, std::string body) {
    std::lock_guard lock(mu_);
    status_ = status;
    body_ = std::move(body);
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_); }
  json last_request() const {
    std::lock_guard lock(mu_);
    return json::parse(last_body_);
  }
  std::string last_path() const {
    std::lock_guard lock(mu_);
    return last_path_;
  }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  mutable std::mutex mu_;
  int status_ = 200;
  std::string body_ = "{}";
  std::string last_path_;
  std::string last_body_;
};

const std::string kDeadUrl = "http://127.0.0.1:1";

}  // namespace

TEST(RemoteAsr, ReturnsNormalizedTranscript) {
  Stub stub;
  stub.reply(200, R"({"text":"Мен КАРТАМДЫ жоғалттым!"})");
  const auto t = transcribe(AudioRef{"blob:42"}, "kk", AsrBackendConfig::remote(stub.url()));
  EXPECT_EQ(stub.last_path(), "/v1/transcribe");
  EXPECT_EQ(stub.last_request(), json({{"audio_ref", "blob:42"}, {"language", "kk"}}));
  EXPECT_EQ(t.tokens(), (TokenList{"мен", "картамды", "жоғалттым"}));
  EXPECT_EQ(t.source().kind, TranscriptSource::Kind::RemoteBackend);
}

TEST(RemoteAsr, FailuresAreUnavailable) {
  Stub stub;
  stub.reply(503, "{}");
  EXPECT_THROW(transcribe(AudioRef{"a"}, "kk", AsrBackendConfig::remote(stub.url())), AsrUnavailableError);
  stub.reply(200, R"({"txt":"x"})");
  EXPECT_THROW(transcribe(AudioRef{"a"}, "kk", AsrBackendConfig::remote(stub.url())), AsrUnavailableError);
  auto dead = AsrBackendConfig::remote(kDeadUrl);
  dead.timeout = std::chrono::milliseconds(500);
  EXPECT_THROW(transcribe(AudioRef{"a"}, "kk", dead), AsrUnavailableError);
}

TEST(RemoteClassifier, SendsPromptAndParsesReply) {
  Stub stub;
  stub.reply(200, R"({"class_id":"card_lost","confidence":0.8,"alternates":[["balance",0.15]]})");
  const auto cfg = support::toy_config();
  const RemoteClassifier backend(stub.url(), std::chrono::milliseconds(2000), 4);
  const Transcript t("картамды жоғалттым", "kk", TranscriptSource::remote());
  const std::string prompt = "classify this";
  const auto r = backend.classify(ClassifyRequest{t, cfg->taxonomy, prompt});
  EXPECT_EQ(stub.last_path(), "/v1/classify");
  EXPECT_EQ(stub.last_request(), json({{"prompt", "classify this"}}));
  EXPECT_EQ(r.class_id, "card_lost");
  EXPECT_DOUBLE_EQ(r.confidence, 0.8);
  ASSERT_EQ(r.alternates.size(), 1u);
  EXPECT_EQ(r.alternates[0].first, "balance");
}

TEST(RemoteClassifier, ErrorsAreTyped) {
  Stub stub;
  const auto cfg = support::toy_config();
  const RemoteClassifier backend(stub.url(), std::chrono::milliseconds(2000), 1);
  const Transcript t("картамды", "kk", TranscriptSource::remote());
  const std::string prompt = "p";
  const ClassifyRequest req{t, cfg->taxonomy, prompt};

  stub.reply(500, "{}");
  EXPECT_THROW(backend.classify(req), ClassifierUnavailableError);
  stub.reply(200, "not json");
  EXPECT_THROW(backend.classify(req), BackendContractError);
  stub.reply(200, R"({"class_id":"nope","confidence":0.9})");
  EXPECT_THROW(backend.classify(req), BackendContractError);
  stub.reply(200, R"({"class_id":"card_lost","confidence":1.5})");
  EXPECT_THROW(backend.classify(req), BackendContractError);
  stub.reply(200, R"({"class_id":"card_lost","confidence":0.5,"alternates":[{"id":"balance"}]})");
  EXPECT_THROW(backend.classify(req), BackendContractError);

  const RemoteClassifier dead(kDeadUrl, std::chrono::milliseconds(500), 1);
  EXPECT_THROW(dead.classify(req), ClassifierUnavailableError);
}

TEST(RemoteTts, PassesVoiceThrough) {
  Stub stub;
  stub.reply(200, R"({"audio_ref":"tts:1"})");
  const RemoteTts tts(stub.url(), std::chrono::milliseconds(2000));
  EXPECT_EQ(tts.synthesize({"Сәлем", "kk", "anna"}), "tts:1");
  EXPECT_EQ(stub.last_path(), "/v1/synthesize");
  EXPECT_EQ(stub.last_request(), json({{"text", "Сәлем"}, {"language", "kk"}, {"voice", "anna"}}));
  EXPECT_EQ(tts.synthesize({"Сәлем", "kk", std::nullopt}), "tts:1");
  EXPECT_FALSE(stub.last_request().contains("voice"));
}

TEST(RemoteTts, FailuresAreUnavailable) {
  Stub stub;
  const RemoteTts tts(stub.url(), std::chrono::milliseconds(2000));
  stub.reply(502, "{}");
  EXPECT_THROW(tts.synthesize({"a", "kk", std::nullopt}), TtsUnavailableError);
  stub.reply(200, R"({"audio":1})");
  EXPECT_THROW(tts.synthesize({"a", "kk", std::nullopt}), TtsUnavailableError);
}
