#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace ivr {

// Base for every error the engine raises on purpose.
class IvrError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Configuration or precondition problem. what() always names the file path
// (if any) and the offending field.
class ConfigError : public IvrError {
 public:
  ConfigError(std::string path, std::string field, const std::string& message);
  explicit ConfigError(const std::string& message);

  const std::string& path() const noexcept { return path_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::string path_;
  std::string field_;
};

class TemplateError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// core-session
class TerminalSessionError : public IvrError {
 public:
  using IvrError::IvrError;
};
class ProtocolViolationError : public IvrError {
 public:
  using IvrError::IvrError;
};
class UnroutableClassError : public IvrError {
 public:
  explicit UnroutableClassError(std::string class_id);
  const std::string& class_id() const noexcept { return class_id_; }

 private:
  std::string class_id_;
};

// Backend adapters
class EmptyUtteranceError : public IvrError {
 public:
  using IvrError::IvrError;
};
class AsrUnavailableError : public IvrError {
 public:
  using IvrError::IvrError;
};
class ClassifierUnavailableError : public IvrError {
 public:
  using IvrError::IvrError;
};
class BackendContractError : public IvrError {
 public:
  using IvrError::IvrError;
};
class TtsUnavailableError : public IvrError {
 public:
  using IvrError::IvrError;
};

// metrics
class EmptyReferenceError : public IvrError {
 public:
  // Single-utterance form: empty reference against a non-empty hypothesis.
  EmptyReferenceError();
  explicit EmptyReferenceError(std::size_t pair_index);
  std::optional<std::size_t> pair_index() const noexcept { return pair_index_; }

 private:
  std::optional<std::size_t> pair_index_;
};
class IncompleteBatchError : public IvrError {
 public:
  using IvrError::IvrError;
};

// telephony bridge
class FrameError : public IvrError {
 public:
  explicit FrameError(std::string reason);
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::string reason_;
};
class EncodeError : public IvrError {
 public:
  using IvrError::IvrError;
};

// simulator / CLI
class ScenarioUnderrunError : public IvrError {
 public:
  using IvrError::IvrError;
};
class InputError : public IvrError {
 public:
  using IvrError::IvrError;
};

}  // namespace ivr
