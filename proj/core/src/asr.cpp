#include "ivr/asr.hpp"

#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "ivr/errors.hpp"
#include "ivr/rng.hpp"
#include "remote.hpp"

namespace ivr {

namespace {

using nlohmann::json;

constexpr std::uint64_t kGarbageSpace = 100000;

enum class Edit : std::uint8_t { Keep, Substitute, Delete, Insert };

std::string garbage_token(std::uint64_t k) {
  return "⟨err" + std::to_string(k) + "⟩";
}

Transcript transcribe_remote(const AudioRef& audio, std::string_view language,
                             const AsrBackendConfig& backend) {
  const json request = {{"audio_ref", audio.value}, {"language", std::string(language)}};
  detail::HttpReply reply;
  try {
    reply = detail::post_json(*backend.endpoint, "/v1/transcribe", request.dump(),
                              backend.timeout);
  } catch (const std::exception& e) {
    throw AsrUnavailableError(e.what());
  }
  if (reply.status != 200) {
    throw AsrUnavailableError("asr backend returned HTTP " + std::to_string(reply.status));
  }
  const json body = json::parse(reply.body, nullptr, false);
  if (!body.is_object() || !body.contains("text") || !body["text"].is_string()) {
    throw AsrUnavailableError("asr backend reply lacks a string 'text'");
  }
  return Transcript(body["text"].get<std::string>(), std::string(language),
                    TranscriptSource::remote());
}

}  // namespace

std::string_view to_string(TranscriptSource::Kind kind) {
  switch (kind) {
    case TranscriptSource::Kind::RemoteBackend:
      return "remote";
    case TranscriptSource::Kind::MockIdentity:
      return "mock_identity";
    case TranscriptSource::Kind::MockNoisy:
      return "mock_noisy";
  }
  return "unknown";
}

Transcript::Transcript(std::string raw_text, std::string language, TranscriptSource source)
    : raw_text_(std::move(raw_text)),
      tokens_(normalize(raw_text_)),
      language_(std::move(language)),
      source_(source) {}

AsrBackendConfig AsrBackendConfig::mock(double error_rate, std::uint64_t seed) {
  AsrBackendConfig cfg;
  cfg.kind = Kind::Mock;
  cfg.error_rate = error_rate;
  cfg.seed = seed;
  return cfg;
}

AsrBackendConfig AsrBackendConfig::remote(std::string endpoint) {
  AsrBackendConfig cfg;
  cfg.kind = Kind::Remote;
  cfg.endpoint = std::move(endpoint);
  return cfg;
}

void AsrBackendConfig::validate() const {
  if (kind == Kind::Remote && (!endpoint || endpoint->empty())) {
    throw ConfigError("", "asr.endpoint", "remote ASR backend requires an endpoint");
  }
  if (kind == Kind::Mock && !(error_rate >= 0.0 && error_rate <= 1.0)) {
    throw ConfigError("", "asr.error_rate", "must be within [0, 1]");
  }
}

TokenList inject_errors(const TokenList& tokens, double rate, std::uint64_t seed,
                        InjectionMode mode) {
  if (!(rate >= 0.0 && rate <= 1.0)) {
    throw ConfigError("", "error_rate", "must be within [0, 1], got " + std::to_string(rate));
  }
  SplitMix64 rng(seed);
  std::vector<Edit> edits(tokens.size(), Edit::Keep);
  std::vector<std::uint64_t> garbage(tokens.size(), 0);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const double u = rng.uniform();
    const auto kind = rng.below(3);
    garbage[i] = rng.below(kGarbageSpace);
    if (u >= rate) {
      continue;
    }
    if (mode == InjectionMode::SubstitutionOnly) {
      edits[i] = Edit::Substitute;
    } else {
      edits[i] = kind == 0 ? Edit::Substitute : kind == 1 ? Edit::Delete : Edit::Insert;
    }
  }

  TokenList out;
  out.reserve(tokens.size() + tokens.size() / 4);
  const std::size_t n = tokens.size();
  for (std::size_t i = 0; i < n; ++i) {
    switch (edits[i]) {
      case Edit::Keep:
        out.push_back(tokens[i]);
        break;
      case Edit::Substitute:
        out.push_back(garbage_token(garbage[i]));
        break;
      case Edit::Delete:
        break;
      case Edit::Insert: {
        const bool next_deleted = i + 1 < n && edits[i + 1] == Edit::Delete;
        const bool prev_deleted = i > 0 && edits[i - 1] == Edit::Delete;
        if (next_deleted && !prev_deleted) {
          out.push_back(garbage_token(garbage[i]));
          out.push_back(tokens[i]);
        } else {
          out.push_back(tokens[i]);
          out.push_back(garbage_token(garbage[i]));
        }
        break;
      }
    }
  }
  return out;
}

Transcript transcribe(const AudioRef& audio, std::string_view language,
                      const AsrBackendConfig& backend) {
  if (audio.value.empty()) {
    throw EmptyUtteranceError("empty audio reference");
  }
  backend.validate();
  if (backend.kind == AsrBackendConfig::Kind::Remote) {
    return transcribe_remote(audio, language, backend);
  }
  const TokenList reference = normalize(audio.value);
  if (reference.empty()) {
    throw EmptyUtteranceError("reference utterance has no words");
  }
  if (backend.error_rate == 0.0) {
    return Transcript(audio.value, std::string(language), TranscriptSource::identity());
  }
  const TokenList corrupted = inject_errors(reference, backend.error_rate, backend.seed);
  return Transcript(join_tokens(corrupted), std::string(language),
                    TranscriptSource::noisy(backend.error_rate, backend.seed));
}

}  // namespace ivr
