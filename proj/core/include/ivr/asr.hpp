#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "ivr/text.hpp"

namespace ivr {

/// Where a transcript came from.
struct TranscriptSource {
  enum class Kind { RemoteBackend, MockIdentity, MockNoisy };

  Kind kind = Kind::MockIdentity;
  double rate = 0.0;        // MockNoisy only
  std::uint64_t seed = 0;   // MockNoisy only

  static TranscriptSource remote() { return {Kind::RemoteBackend, 0.0, 0}; }
  static TranscriptSource identity() { return {Kind::MockIdentity, 0.0, 0}; }
  static TranscriptSource noisy(double rate, std::uint64_t seed) {
    return {Kind::MockNoisy, rate, seed};
  }

  friend bool operator==(const TranscriptSource&, const TranscriptSource&) = default;
};

std::string_view to_string(TranscriptSource::Kind kind);

/// Recognized utterance. tokens() == normalize(raw_text()) by construction.
class Transcript {
 public:
  Transcript() = default;
  Transcript(std::string raw_text, std::string language,
             TranscriptSource source = TranscriptSource::identity());

  const std::string& raw_text() const noexcept { return raw_text_; }
  const TokenList& tokens() const noexcept { return tokens_; }
  const std::string& language() const noexcept { return language_; }
  const TranscriptSource& source() const noexcept { return source_; }
  bool empty() const noexcept { return tokens_.empty(); }

  friend bool operator==(const Transcript&, const Transcript&) = default;

 private:
  std::string raw_text_;
  TokenList tokens_;
  std::string language_;
  TranscriptSource source_;
};

/// Opaque audio handle. The mock backend interprets it as the reference
/// text the caller "said".
struct AudioRef {
  std::string value;
};

struct AsrBackendConfig {
  enum class Kind { Mock, Remote };

  Kind kind = Kind::Mock;
  std::optional<std::string> endpoint;  // Remote: base URL, e.g. http://127.0.0.1:9000
  double error_rate = 0.0;              // Mock
  std::uint64_t seed = 0;               // Mock
  std::chrono::milliseconds timeout{5000};

  static AsrBackendConfig mock(double error_rate, std::uint64_t seed);
  static AsrBackendConfig remote(std::string endpoint);

  /// Throws ConfigError when the kind-specific requirements are not met.
  void validate() const;
};

enum class InjectionMode {
  Mixed,             // substitute / delete / insert, chosen uniformly
  SubstitutionOnly,
};

/// Corrupts a token sequence. Each token is edited with probability `rate`.
/// The edit kind and garbage token are drawn from a SplitMix64 stream seeded
/// with `seed`; every token consumes the same number of draws regardless of
/// rate, so the edited set grows monotonically with rate for a fixed seed.
///
/// Garbage tokens look like "⟨errK⟩". An inserted token goes after its
/// source token, except when the next token is deleted and the previous one
/// is not, in which case it goes before; this keeps an insertion from
/// merging with a neighbouring deletion into one substitution during
/// alignment.
///
/// Throws ConfigError unless 0 <= rate <= 1.
TokenList inject_errors(const TokenList& tokens, double rate, std::uint64_t seed,
                        InjectionMode mode = InjectionMode::Mixed);

/// Runs the configured backend. Mock: `audio` is the reference text, which is
/// normalized and passed through inject_errors(error_rate, seed).
///
/// Throws EmptyUtteranceError for empty audio (or a reference with no
/// tokens), AsrUnavailableError when the remote backend fails.
Transcript transcribe(const AudioRef& audio, std::string_view language,
                      const AsrBackendConfig& backend);

}  // namespace ivr
