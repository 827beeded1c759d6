#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace ivr::bridge {

// Inbound frames (telephony platform -> engine).
enum class MessageType { SessionStart, Utterance, Hangup };

struct Message {
  MessageType type = MessageType::SessionStart;
  std::string call_id;
  std::string language;                  // session_start
  std::optional<std::string> text;       // utterance, exclusive with audio_ref
  std::optional<std::string> audio_ref;  // utterance

  friend bool operator==(const Message&, const Message&) = default;
};

// Outbound frames (engine -> telephony platform).
enum class CommandType { Play, Listen, Transfer, Hangup };

struct Command {
  CommandType type = CommandType::Listen;
  std::string call_id;
  std::optional<std::string> text;       // play, exclusive with audio_ref
  std::optional<std::string> audio_ref;  // play
  std::optional<std::string> queue_id;   // transfer

  static Command play_text(std::string call_id, std::string text);
  static Command play_audio(std::string call_id, std::string audio_ref);
  static Command listen(std::string call_id);
  static Command transfer(std::string call_id, std::string queue_id);
  static Command hangup(std::string call_id);

  friend bool operator==(const Command&, const Command&) = default;
};

std::string_view to_string(MessageType t) noexcept;
std::string_view to_string(CommandType t) noexcept;

/// Parses one NDJSON frame. A single trailing LF (optionally preceded by CR)
/// is accepted. Throws FrameError whose reason is "parse", "unknown type: X",
/// "missing field: F", "invalid field: F" or "empty field: F".
Message decode(std::string_view line);
Command decode_command(std::string_view line);

/// Compact single-line UTF-8 JSON, keys ordered type, call_id, payload,
/// terminated by exactly one LF. Throws EncodeError on invariant violations.
std::string encode(const Command& cmd);
std::string encode(const Message& msg);

/// {"type":"error","reason":...}\n
std::string error_frame(std::string_view reason);

}  // namespace ivr::bridge
