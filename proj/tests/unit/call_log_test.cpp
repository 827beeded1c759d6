#include <gtest/gtest.h>

#include <json.hpp>
#include <sstream>
#include <thread>

#include "ivr/call_log.hpp"
#include "test_support.hpp"

using namespace ivr;

namespace {

LogRecord utterance_record(const std::string& text, int micros) {
  return LogRecord{Timestamp{} + std::chrono::microseconds(micros), Phase::Listening,
                   events::UtteranceReceived{Transcript(text, "kk")}, {}, Phase::Classifying};
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST(FormatRfc3339, MicrosecondUtc) {
  EXPECT_EQ(format_rfc3339(Timestamp{} + std::chrono::microseconds(5)), "1970-01-01T00:00:00.000005Z");
  EXPECT_EQ(format_rfc3339(Timestamp{} + std::chrono::seconds(1791100800)),
            "2026-10-04T08:00:00.000000Z");
}

TEST(CallLogLine, GoldenShape) {
  EXPECT_EQ(call_log_line("c1", utterance_record("Мен картамды жоғалттым", 5)),
            R"({"ts":"1970-01-01T00:00:00.000005Z","call_id":"c1","phase_before":"Listening",)"
            R"("event":{"type":"utterance_received","text":"Мен картамды жоғалттым","source":"mock_identity"},)"
            R"("actions":[],"phase_after":"Classifying"})");
  const LogRecord r{Timestamp{}, Phase::Confirming, events::ConfirmYes{},
                    {actions::Transfer{"Q17"}}, Phase::Routed};
  EXPECT_EQ(call_log_line("c2", r),
            R"({"ts":"1970-01-01T00:00:00.000000Z","call_id":"c2","phase_before":"Confirming",)"
            R"("event":{"type":"confirm_yes"},"actions":[{"type":"transfer","queue_id":"Q17"}],)"
            R"("phase_after":"Routed"})");
}

TEST(CallLogWriter, ThousandRecordsThousandLines) {
  support::TempDir dir;
  {
    CallLogWriter w(dir / "calls.jsonl");
    ASSERT_TRUE(w.ok());
    for (int i = 0; i < 1000; ++i) w.append("c" + std::to_string(i), utterance_record("сөз", i));
  }
  const auto lines = lines_of(support::slurp(dir / "calls.jsonl"));
  ASSERT_EQ(lines.size(), 1000u);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto j = nlohmann::json::parse(lines[i]);
    EXPECT_EQ(j["call_id"], "c" + std::to_string(i));
  }
}

TEST(CallLogWriter, ConcurrentWritersNeverTear) {
  support::TempDir dir;
  constexpr int kWriters = 8;
  constexpr int kEach = 500;
  {
    CallLogWriter w(dir / "calls.jsonl");
    std::vector<std::thread> threads;
    for (int t = 0; t < kWriters; ++t) {
      threads.emplace_back([&w, t] {
        // Long payload so that a torn write would be visible.
        const std::string text(2000 + t * 100, static_cast<char>('a' + t));
        for (int i = 0; i < kEach; ++i) w.append("w" + std::to_string(t), utterance_record(text, i));
      });
    }
    for (auto& th : threads) th.join();
  }
  const auto lines = lines_of(support::slurp(dir / "calls.jsonl"));
  ASSERT_EQ(lines.size(), static_cast<std::size_t>(kWriters * kEach));
  std::map<std::string, int> per_writer;
  for (const auto& l : lines) {
    const auto j = nlohmann::json::parse(l);  // throws on a torn line
    const std::string id = j["call_id"];
    const int t = id[1] - '0';
    EXPECT_EQ(j["event"]["text"].get<std::string>(), std::string(2000 + t * 100, static_cast<char>('a' + t)));
    ++per_writer[id];
  }
  for (const auto& [id, n] : per_writer) EXPECT_EQ(n, kEach) << id;
}

TEST(CallLogWriter, KazakhTextRoundTripsByteForByte) {
  support::TempDir dir;
  const std::string text = "Сәлеметсіз бе! Қалай көмектесе аламын? Ғ Ү Ұ Қ Ө Һ І Ә Ң";
  {
    CallLogWriter w(dir / "calls.jsonl");
    w.append("kk-1", utterance_record(text, 1));
  }
  const auto lines = lines_of(support::slurp(dir / "calls.jsonl"));
  ASSERT_EQ(lines.size(), 1u);
  EXPECT_NE(lines[0].find(text), std::string::npos);  // stored unescaped
  EXPECT_EQ(nlohmann::json::parse(lines[0])["event"]["text"].get<std::string>(), text);
}

TEST(CallLogWriter, AppendsToExistingFile) {
  support::TempDir dir;
  support::spit(dir / "calls.jsonl", "{\"old\":true}\n");
  {
    CallLogWriter w(dir / "calls.jsonl");
    w.append("c", utterance_record("x", 1));
  }
  EXPECT_EQ(lines_of(support::slurp(dir / "calls.jsonl")).size(), 2u);
}
