#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

#include "ivr/taxonomy.hpp"
#include "ivr/text_template.hpp"

namespace ivr {

struct SynthesisRequest {
  std::string text;
  std::string language;
  std::optional<std::string> voice;  // passed through to the backend untouched
};

struct RenderedPrompt {
  std::string text;
  std::optional<std::string> warning;  // set when falling back to class_id
};

/// Requires {class_name}. Throws TemplateError otherwise.
TextTemplate parse_confirmation_template(std::string text, std::string origin = "");

/// Substitutes display_name[language] for {class_name}, or the raw class_id
/// (with a warning) when the class has no name in that language.
RenderedPrompt render_confirmation(const IntentClass& intent, std::string_view language,
                                   const TextTemplate& confirmation_template);

class TtsBackend {
 public:
  virtual ~TtsBackend() = default;
  /// Returns an audio reference. Throws TtsUnavailableError on failure.
  virtual std::string synthesize(const SynthesisRequest& request) const = 0;
};

/// "mock-audio:" + hex FNV-1a-64 of (language, NUL, text). Pure.
class MockTts final : public TtsBackend {
 public:
  std::string synthesize(const SynthesisRequest& request) const override;
};

/// HTTP POST {endpoint}/v1/synthesize.
class RemoteTts final : public TtsBackend {
 public:
  RemoteTts(std::string endpoint, std::chrono::milliseconds timeout);
  std::string synthesize(const SynthesisRequest& request) const override;

 private:
  std::string endpoint_;
  std::chrono::milliseconds timeout_;
};

/// Throws ConfigError for empty text, otherwise delegates to the backend.
std::string synthesize(const SynthesisRequest& request, const TtsBackend& backend);

}  // namespace ivr
