#include "ivr/bridge.hpp"

#include <json.hpp>

#include "ivr/errors.hpp"

namespace ivr::bridge {

namespace {

using ojson = nlohmann::ordered_json;
using nlohmann::json;

std::string_view strip_eol(std::string_view line) {
  if (!line.empty() && line.back() == '\n') line.remove_suffix(1);
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

json parse_frame(std::string_view line) {
  line = strip_eol(line);
  if (line.find('\n') != std::string_view::npos) {
    throw FrameError("parse");
  }
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw FrameError("parse");
  }
  return j;
}

std::optional<std::string> optional_string(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) {
    return std::nullopt;
  }
  if (!j[key].is_string()) {
    throw FrameError(std::string("invalid field: ") + key);
  }
  std::string v = j[key].get<std::string>();
  if (v.empty()) {
    throw FrameError(std::string("empty field: ") + key);
  }
  return v;
}

std::string required_string(const json& j, const char* key) {
  if (!j.contains(key)) {
    throw FrameError(std::string("missing field: ") + key);
  }
  auto v = optional_string(j, key);
  if (!v) {
    throw FrameError(std::string("missing field: ") + key);
  }
  return *v;
}

std::string dump_line(const ojson& j) {
  std::string out = j.dump(-1, ' ', false, json::error_handler_t::strict);
  out.push_back('\n');
  return out;
}

}  // namespace

std::string_view to_string(MessageType t) noexcept {
  switch (t) {
    case MessageType::SessionStart:
      return "session_start";
    case MessageType::Utterance:
      return "utterance";
    case MessageType::Hangup:
      return "hangup";
  }
  return "";
}

std::string_view to_string(CommandType t) noexcept {
  switch (t) {
    case CommandType::Play:
      return "play";
    case CommandType::Listen:
      return "listen";
    case CommandType::Transfer:
      return "transfer";
    case CommandType::Hangup:
      return "hangup";
  }
  return "";
}

Command Command::play_text(std::string call_id, std::string text) {
  return Command{CommandType::Play, std::move(call_id), std::move(text), std::nullopt, std::nullopt};
}
Command Command::play_audio(std::string call_id, std::string audio_ref) {
  return Command{CommandType::Play, std::move(call_id), std::nullopt, std::move(audio_ref),
                 std::nullopt};
}
Command Command::listen(std::string call_id) {
  return Command{CommandType::Listen, std::move(call_id), std::nullopt, std::nullopt, std::nullopt};
}
Command Command::transfer(std::string call_id, std::string queue_id) {
  return Command{CommandType::Transfer, std::move(call_id), std::nullopt, std::nullopt,
                 std::move(queue_id)};
}
Command Command::hangup(std::string call_id) {
  return Command{CommandType::Hangup, std::move(call_id), std::nullopt, std::nullopt, std::nullopt};
}

Message decode(std::string_view line) {
  const json j = parse_frame(line);
  const std::string type = required_string(j, "type");
  Message m;
  if (type == "session_start") {
    m.type = MessageType::SessionStart;
    m.call_id = required_string(j, "call_id");
    m.language = required_string(j, "language");
  } else if (type == "utterance") {
    m.type = MessageType::Utterance;
    m.call_id = required_string(j, "call_id");
    m.text = optional_string(j, "text");
    m.audio_ref = optional_string(j, "audio_ref");
    if (m.text.has_value() == m.audio_ref.has_value()) {
      throw FrameError(m.text ? "invalid field: text and audio_ref are exclusive"
                              : "missing field: text");
    }
  } else if (type == "hangup") {
    m.type = MessageType::Hangup;
    m.call_id = required_string(j, "call_id");
  } else {
    throw FrameError("unknown type: " + type);
  }
  return m;
}

Command decode_command(std::string_view line) {
  const json j = parse_frame(line);
  const std::string type = required_string(j, "type");
  Command c;
  if (type == "play") {
    c.type = CommandType::Play;
    c.call_id = required_string(j, "call_id");
    c.text = optional_string(j, "text");
    c.audio_ref = optional_string(j, "audio_ref");
    if (c.text.has_value() == c.audio_ref.has_value()) {
      throw FrameError(c.text ? "invalid field: text and audio_ref are exclusive"
                              : "missing field: text");
    }
  } else if (type == "listen") {
    c.type = CommandType::Listen;
    c.call_id = required_string(j, "call_id");
  } else if (type == "transfer") {
    c.type = CommandType::Transfer;
    c.call_id = required_string(j, "call_id");
    c.queue_id = required_string(j, "queue_id");
  } else if (type == "hangup") {
    c.type = CommandType::Hangup;
    c.call_id = required_string(j, "call_id");
  } else {
    throw FrameError("unknown type: " + type);
  }
  return c;
}

std::string encode(const Command& cmd) {
  if (cmd.call_id.empty()) {
    throw EncodeError("command without call_id");
  }
  ojson j;
  j["type"] = std::string(to_string(cmd.type));
  j["call_id"] = cmd.call_id;
  switch (cmd.type) {
    case CommandType::Play:
      if (cmd.text.has_value() == cmd.audio_ref.has_value()) {
        throw EncodeError("play needs exactly one of text, audio_ref");
      }
      if (cmd.queue_id) throw EncodeError("play does not carry queue_id");
      if (cmd.text) {
        if (cmd.text->empty()) throw EncodeError("play with empty text");
        j["text"] = *cmd.text;
      } else {
        if (cmd.audio_ref->empty()) throw EncodeError("play with empty audio_ref");
        j["audio_ref"] = *cmd.audio_ref;
      }
      break;
    case CommandType::Transfer:
      if (!cmd.queue_id || cmd.queue_id->empty()) {
        throw EncodeError("transfer needs a queue_id");
      }
      if (cmd.text || cmd.audio_ref) throw EncodeError("transfer carries only queue_id");
      j["queue_id"] = *cmd.queue_id;
      break;
    case CommandType::Listen:
    case CommandType::Hangup:
      if (cmd.text || cmd.audio_ref || cmd.queue_id) {
        throw EncodeError(std::string(to_string(cmd.type)) + " carries no payload");
      }
      break;
  }
  try {
    return dump_line(j);
  } catch (const json::exception& e) {
    throw EncodeError(std::string("invalid UTF-8: ") + e.what());
  }
}

std::string encode(const Message& msg) {
  if (msg.call_id.empty()) {
    throw EncodeError("message without call_id");
  }
  ojson j;
  j["type"] = std::string(to_string(msg.type));
  j["call_id"] = msg.call_id;
  switch (msg.type) {
    case MessageType::SessionStart:
      if (msg.language.empty()) throw EncodeError("session_start needs a language");
      if (msg.text || msg.audio_ref) throw EncodeError("session_start carries no utterance");
      j["language"] = msg.language;
      break;
    case MessageType::Utterance:
      if (msg.text.has_value() == msg.audio_ref.has_value()) {
        throw EncodeError("utterance needs exactly one of text, audio_ref");
      }
      if (!msg.language.empty()) throw EncodeError("utterance carries no language");
      if ((msg.text && msg.text->empty()) || (msg.audio_ref && msg.audio_ref->empty())) {
        throw EncodeError("utterance with empty payload");
      }
      if (msg.text) {
        j["text"] = *msg.text;
      } else {
        j["audio_ref"] = *msg.audio_ref;
      }
      break;
    case MessageType::Hangup:
      if (!msg.language.empty() || msg.text || msg.audio_ref) {
        throw EncodeError("hangup carries no payload");
      }
      break;
  }
  try {
    return dump_line(j);
  } catch (const json::exception& e) {
    throw EncodeError(std::string("invalid UTF-8: ") + e.what());
  }
}

std::string error_frame(std::string_view reason) {
  ojson j;
  j["type"] = "error";
  j["reason"] = std::string(reason);
  std::string out = j.dump(-1, ' ', false, json::error_handler_t::replace);
  out.push_back('\n');
  return out;
}

}  // namespace ivr::bridge
