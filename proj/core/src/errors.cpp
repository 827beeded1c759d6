#include "ivr/errors.hpp"

namespace ivr {

namespace {

std::string config_message(const std::string& path, const std::string& field,
                           const std::string& message) {
  std::string out;
  if (!path.empty()) {
    out += path;
    out += ": ";
  }
  if (!field.empty()) {
    out += field;
    out += ": ";
  }
  out += message;
  return out;
}

}  // namespace

ConfigError::ConfigError(std::string path, std::string field, const std::string& message)
    : IvrError(config_message(path, field, message)),
      path_(std::move(path)),
      field_(std::move(field)) {}

ConfigError::ConfigError(const std::string& message) : IvrError(message) {}

UnroutableClassError::UnroutableClassError(std::string class_id)
    : IvrError("no route for class '" + class_id + "'"), class_id_(std::move(class_id)) {}

EmptyReferenceError::EmptyReferenceError()
    : IvrError("empty reference with a non-empty hypothesis") {}

EmptyReferenceError::EmptyReferenceError(std::size_t pair_index)
    : IvrError("empty reference at pair " + std::to_string(pair_index)),
      pair_index_(pair_index) {}

FrameError::FrameError(std::string reason)
    : IvrError("bad frame: " + reason), reason_(std::move(reason)) {}

}  // namespace ivr
