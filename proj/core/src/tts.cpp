#include "ivr/tts.hpp"

#include <cstdio>

#include <json.hpp>

#include "ivr/errors.hpp"
#include "ivr/rng.hpp"
#include "remote.hpp"

namespace ivr {

using nlohmann::json;

TextTemplate parse_confirmation_template(std::string text, std::string origin) {
  return TextTemplate::parse(std::move(text), {"class_name"}, std::move(origin));
}

RenderedPrompt render_confirmation(const IntentClass& intent, std::string_view language,
                                   const TextTemplate& confirmation_template) {
  RenderedPrompt out;
  std::string name;
  auto it = intent.display_name.find(std::string(language));
  if (it != intent.display_name.end() && !it->second.empty()) {
    name = it->second;
  } else {
    name = intent.class_id;
    out.warning = "class '" + intent.class_id + "' has no display name for language '" +
                  std::string(language) + "'";
  }
  out.text = confirmation_template.render({{"class_name", name}});
  return out;
}

std::string MockTts::synthesize(const SynthesisRequest& request) const {
  std::string key = request.language;
  key.push_back('\0');
  key += request.text;
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a64(key)));
  return std::string("mock-audio:") + hex;
}

RemoteTts::RemoteTts(std::string endpoint, std::chrono::milliseconds timeout)
    : endpoint_(std::move(endpoint)), timeout_(timeout) {}

std::string RemoteTts::synthesize(const SynthesisRequest& request) const {
  json body = {{"text", request.text}, {"language", request.language}};
  if (request.voice) {
    body["voice"] = *request.voice;
  }
  detail::HttpReply reply;
  try {
    reply = detail::post_json(endpoint_, "/v1/synthesize", body.dump(), timeout_);
  } catch (const std::exception& e) {
    throw TtsUnavailableError(e.what());
  }
  if (reply.status != 200) {
    throw TtsUnavailableError("tts backend returned HTTP " + std::to_string(reply.status));
  }
  const json j = json::parse(reply.body, nullptr, false);
  if (!j.is_object() || !j.contains("audio_ref") || !j["audio_ref"].is_string()) {
    throw TtsUnavailableError("tts reply lacks string 'audio_ref'");
  }
  return j["audio_ref"].get<std::string>();
}

std::string synthesize(const SynthesisRequest& request, const TtsBackend& backend) {
  if (request.text.empty()) {
    throw ConfigError("", "text", "synthesis request text must be non-empty");
  }
  return backend.synthesize(request);
}

}  // namespace ivr
