#include <gtest/gtest.h>

#include <thread>

#include "ivr/bridge.hpp"
#include "ivr/bridge_server.hpp"
#include "tcp_client.hpp"
#include "test_support.hpp"

using namespace ivr;
using namespace ivr::bridge;
using namespace std::chrono_literals;

namespace {

class BridgeServerTest : public ::testing::Test {
 protected:
  void SetUp() override {
    log = std::make_unique<CallLogWriter>(dir / "calls.jsonl");
    Engine::Options o;
    o.log = log.get();
    engine = std::make_unique<Engine>(support::toy_config(), std::move(o));
    server = std::make_unique<BridgeServer>(*engine, Endpoint{"127.0.0.1", 0}, 4);
    server->start();
  }
  void TearDown() override { server->stop(); }

  Command next(support::LineClient& c) {
    auto line = c.read_line();
    if (!line) throw std::runtime_error("no frame");
    return decode_command(*line);
  }

  std::string log_text() { return support::slurp(dir / "calls.jsonl"); }

  bool wait_for_log(const std::string& needle) {
    for (int i = 0; i < 100; ++i) {
      if (log_text().find(needle) != std::string::npos) return true;
      std::this_thread::sleep_for(50ms);
    }
    return false;
  }

  support::TempDir dir;
  std::unique_ptr<CallLogWriter> log;
  std::unique_ptr<Engine> engine;
  std::unique_ptr<BridgeServer> server;
};

std::string start_frame(const std::string& id, const std::string& lang = "kk") {
  return encode(Message{MessageType::SessionStart, id, lang, std::nullopt, std::nullopt});
}
std::string say(const std::string& id, const std::string& text) {
  return encode(Message{MessageType::Utterance, id, "", text, std::nullopt});
}

}  // namespace

TEST_F(BridgeServerTest, HappyPathTransfersThenHangsUp) {
  ASSERT_NE(server->port(), 0);
  support::LineClient c(server->port());
  c.send(start_frame("c1"));
  EXPECT_EQ(next(c).type, CommandType::Play);
  EXPECT_EQ(next(c).type, CommandType::Listen);
  c.send(say("c1", "Мен картамды жоғалттым"));
  const Command confirm = next(c);
  EXPECT_EQ(confirm.type, CommandType::Play);
  EXPECT_EQ(confirm.audio_ref, MockTts().synthesize({"Сіздің мәселеңіз: карта жоғалды. Дұрыс па?", "kk", std::nullopt}));
  EXPECT_EQ(next(c).type, CommandType::Listen);
  c.send(say("c1", "иә"));
  const Command transfer = next(c);
  EXPECT_EQ(transfer.type, CommandType::Transfer);
  EXPECT_EQ(transfer.queue_id, "Q17");
  EXPECT_EQ(next(c).type, CommandType::Hangup);
  EXPECT_TRUE(wait_for_log("\"phase_after\":\"Routed\""));
}

TEST_F(BridgeServerTest, EscalationTransfersToOperatorQueue) {
  support::LineClient c(server->port());
  c.send(start_frame("c1", "ru"));
  next(c);
  next(c);
  c.send(say("c1", "ничего не понимаю"));  // no keyword -> confidence 0
  const Command t = next(c);
  EXPECT_EQ(t.type, CommandType::Transfer);
  EXPECT_EQ(t.queue_id, "Q00");
  EXPECT_EQ(next(c).type, CommandType::Hangup);
}

TEST_F(BridgeServerTest, DroppedConnectionAbandonsLiveCalls) {
  {
    support::LineClient c(server->port());
    c.send(start_frame("drop-1"));
    next(c);
    next(c);
    c.send(say("drop-1", "картамды жоғалттым"));
    next(c);
    next(c);  // now Confirming
  }
  ASSERT_TRUE(wait_for_log("\"call_id\":\"drop-1\",\"phase_before\":\"Confirming\",\"event\":{\"type\":\"hangup\"}"));
  EXPECT_TRUE(wait_for_log("\"phase_after\":\"Abandoned\""));
}

TEST_F(BridgeServerTest, InterleavedCallsKeepPerCallOrder) {
  support::LineClient c(server->port());
  c.send(start_frame("a") + start_frame("b", "ru") + say("a", "картамды жоғалттым") +
         say("b", "баланс") + say("a", "иә") + say("b", "да"));
  std::map<std::string, std::vector<CommandType>> seen;
  for (int i = 0; i < 12; ++i) {
    const Command cmd = next(c);
    seen[cmd.call_id].push_back(cmd.type);
  }
  const std::vector<CommandType> expected{CommandType::Play, CommandType::Listen, CommandType::Play,
                                          CommandType::Listen, CommandType::Transfer, CommandType::Hangup};
  EXPECT_EQ(seen["a"], expected);
  EXPECT_EQ(seen["b"], expected);
}

TEST_F(BridgeServerTest, ManyConcurrentConnections) {
  std::vector<std::thread> clients;
  std::atomic<int> routed{0};
  for (int k = 0; k < 16; ++k) {
    clients.emplace_back([&, k] {
      support::LineClient c(server->port());
      const std::string id = "par-" + std::to_string(k);
      c.send(start_frame(id) + say(id, "картамды жоғалттым") + say(id, "иә"));
      for (int i = 0; i < 6; ++i) {
        auto line = c.read_line();
        if (!line) return;
        if (decode_command(*line).type == CommandType::Transfer) ++routed;
      }
    });
  }
  for (auto& t : clients) t.join();
  EXPECT_EQ(routed.load(), 16);
}

TEST_F(BridgeServerTest, BadFramesGetErrorsAndNoCommands) {
  support::LineClient c(server->port());
  c.send("this is not json\n");
  EXPECT_EQ(*c.read_line(), error_frame("parse"));
  c.send(say("ghost", "сәлем"));
  EXPECT_EQ(*c.read_line(), error_frame("unknown call_id: ghost"));
  c.send(start_frame("c1"));
  next(c);
  next(c);
  c.send(start_frame("c1"));
  EXPECT_EQ(*c.read_line(), error_frame("duplicate call_id: c1"));
  c.send(encode(Message{MessageType::Hangup, "c1", "", std::nullopt, std::nullopt}));
  c.send(say("c1", "иә"));  // call is gone
  EXPECT_EQ(*c.read_line(), error_frame("unknown call_id: c1"));
}

TEST_F(BridgeServerTest, StopWithOpenConnection) {
  support::LineClient c(server->port());
  c.send(start_frame("c1"));
  next(c);
  next(c);
  server->stop();
  EXPECT_TRUE(wait_for_log("\"phase_after\":\"Abandoned\""));
}
