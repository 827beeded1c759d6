#include <gtest/gtest.h>

#include "bridge_gen.hpp"
#include "ivr/bridge_server.hpp"
#include "ivr/errors.hpp"
#include "test_support.hpp"

using namespace ivr;
using namespace ivr::bridge;

namespace {

std::string reason_of(std::string_view frame) {
  try {
    decode(frame);
  } catch (const FrameError& e) {
    return e.reason();
  }
  return "<decoded>";
}

}  // namespace

TEST(Decode, SessionStart) {
  const auto m = decode("{\"type\":\"session_start\",\"call_id\":\"c1\",\"language\":\"kk\"}\n");
  EXPECT_EQ(m.type, MessageType::SessionStart);
  EXPECT_EQ(m.call_id, "c1");
  EXPECT_EQ(m.language, "kk");
}

TEST(Decode, Errors) {
  EXPECT_EQ(reason_of("\x01\x02garbage"), "parse");
  EXPECT_EQ(reason_of("[1,2]"), "parse");
  EXPECT_EQ(reason_of("{\"type\":\"dance\",\"call_id\":\"c\"}"), "unknown type: dance");
  EXPECT_EQ(reason_of("{\"type\":\"hangup\"}"), "missing field: call_id");
  EXPECT_EQ(reason_of("{\"type\":\"session_start\",\"call_id\":\"c\"}"), "missing field: language");
  EXPECT_EQ(reason_of("{\"type\":\"hangup\",\"call_id\":7}"), "invalid field: call_id");
  EXPECT_EQ(reason_of("{\"type\":\"hangup\",\"call_id\":\"\"}"), "empty field: call_id");
  EXPECT_EQ(reason_of("{\"type\":\"utterance\",\"call_id\":\"c\"}"), "missing field: text");
}

TEST(Encode, TransferGolden) {
  EXPECT_EQ(encode(Command::transfer("c1", "Q17")),
            "{\"type\":\"transfer\",\"call_id\":\"c1\",\"queue_id\":\"Q17\"}\n");
}

TEST(Encode, PlayWithTextAndAudioIsRejected) {
  Command c = Command::play_text("c1", "x");
  c.audio_ref = "a";
  EXPECT_THROW(encode(c), EncodeError);
  EXPECT_THROW(encode(Command::listen("")), EncodeError);
  Command t = Command::transfer("c1", "Q1");
  t.text = "x";
  EXPECT_THROW(encode(t), EncodeError);
}

TEST(Encode, GoldenCommandFrames) {
  std::string all;
  for (const auto& c : support::golden_commands()) all += encode(c);
  EXPECT_EQ(all, support::slurp(std::filesystem::path(IVR_GOLDEN_DIR) / "bridge_commands.ndjson"));
}

TEST(Encode, GoldenMessageFrames) {
  std::string all;
  for (const auto& m : support::golden_messages()) all += encode(m);
  EXPECT_EQ(all, support::slurp(std::filesystem::path(IVR_GOLDEN_DIR) / "bridge_messages.ndjson"));
}

TEST(ErrorFrame, Shape) {
  EXPECT_EQ(error_frame("parse"), "{\"type\":\"error\",\"reason\":\"parse\"}\n");
}

TEST(RoundTrip, RandomCommandsAndMessages) {
  std::mt19937_64 rng(4242);
  for (int i = 0; i < 10000; ++i) {
    const Command c = support::random_command(rng);
    const std::string cf = encode(c);
    ASSERT_EQ(std::count(cf.begin(), cf.end(), '\n'), 1);
    ASSERT_EQ(cf.back(), '\n');
    ASSERT_EQ(decode_command(cf), c);

    const Message m = support::random_message(rng);
    const std::string mf = encode(m);
    ASSERT_EQ(std::count(mf.begin(), mf.end(), '\n'), 1);
    ASSERT_EQ(decode(mf), m);
  }
}

TEST(Endpoint, Parsing) {
  EXPECT_EQ(parse_endpoint("0.0.0.0:9000").host, "0.0.0.0");
  EXPECT_EQ(parse_endpoint("0.0.0.0:9000").port, 9000);
  EXPECT_EQ(parse_endpoint(":0").port, 0);
  EXPECT_EQ(parse_endpoint(":0").host, "127.0.0.1");
  EXPECT_EQ(parse_endpoint("localhost").port, kDefaultBridgePort);
  EXPECT_THROW(parse_endpoint("h:99999"), ConfigError);
  EXPECT_THROW(parse_endpoint("h:abc"), ConfigError);
}
