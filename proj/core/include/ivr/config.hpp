#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "ivr/asr.hpp"
#include "ivr/confirmation.hpp"
#include "ivr/retrieval.hpp"
#include "ivr/routing.hpp"
#include "ivr/taxonomy.hpp"
#include "ivr/text_template.hpp"

namespace ivr {

struct ClassifierBackendConfig {
  enum class Kind { Mock, Remote };
  Kind kind = Kind::Mock;
  std::optional<std::string> endpoint;
  std::chrono::milliseconds timeout{10000};
  std::ptrdiff_t max_connections = 4;
};

struct TtsBackendConfig {
  enum class Kind { Mock, Remote };
  Kind kind = Kind::Mock;
  std::optional<std::string> endpoint;
  std::chrono::milliseconds timeout{5000};
  std::optional<std::string> voice;
};

/// Spoken prompts for one language.
struct PromptSet {
  TextTemplate greeting;
  TextTemplate confirm;  // requires {class_name}
  TextTemplate reask;
};

/// Fully loaded, validated engine configuration. Immutable after load.
struct EngineConfig {
  std::filesystem::path source;  // empty for programmatic configs

  double confidence_threshold = 0.7;
  int max_confirm_attempts = 2;
  std::size_t rag_k = 3;
  std::uint64_t seed = 0;
  std::string default_language = "kk";

  AsrBackendConfig asr;
  ClassifierBackendConfig classifier;
  TtsBackendConfig tts;

  IntentTaxonomy taxonomy;
  RoutingTable routing;
  KnowledgeStore knowledge;
  TextTemplate classify_prompt;
  std::map<std::string, PromptSet, std::less<>> prompts;
  ConfirmationLexicon lexicon;

  std::optional<std::filesystem::path> call_log;
  std::string bind_address = "127.0.0.1:8573";

  /// Prompts for `language`, falling back to default_language.
  const PromptSet& prompts_for(std::string_view language) const;

  /// Re-checks every invariant. Throws ConfigError naming the field.
  void validate() const;
};

inline constexpr std::uint16_t kDefaultBridgePort = 8573;

/// Loads engine JSON plus every file it references (paths resolve relative to
/// the config file). Validation is eager; throws ConfigError with the file
/// path and field on the first problem.
EngineConfig load_config(const std::filesystem::path& path);

// Individual loaders, also used by tools and tests.
IntentTaxonomy load_taxonomy(const std::filesystem::path& path);
KnowledgeStore load_knowledge_base(const std::filesystem::path& path);
RoutingTable load_routing(const std::filesystem::path& path, const IntentTaxonomy& taxonomy);
ConfirmationLexicon load_lexicon(const std::filesystem::path& path);
std::map<std::string, PromptSet, std::less<>> load_prompts(const std::filesystem::path& path);

/// Reads a whole file; throws ConfigError if it cannot be opened.
std::string read_file(const std::filesystem::path& path);

}  // namespace ivr
