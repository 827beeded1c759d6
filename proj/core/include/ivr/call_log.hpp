#pragma once

#include <filesystem>
#include <mutex>
#include <string>

#include "ivr/session.hpp"

namespace ivr {

/// RFC 3339 UTC with microseconds, e.g. "2026-10-16T08:30:00.000125Z".
std::string format_rfc3339(Timestamp ts);

/// One call-log line (no trailing newline):
/// {"ts","call_id","phase_before","event","actions","phase_after"}.
std::string call_log_line(const std::string& call_id, const LogRecord& record);

/// Append-only JSONL writer shared by all sessions.
///
/// Each record is written with a single write(2) on an O_APPEND descriptor
/// while holding the writer's mutex, so lines never interleave or tear. I/O
/// failures are reported on stderr and otherwise ignored.
class CallLogWriter {
 public:
  explicit CallLogWriter(const std::filesystem::path& path);
  ~CallLogWriter();

  CallLogWriter(const CallLogWriter&) = delete;
  CallLogWriter& operator=(const CallLogWriter&) = delete;

  void append(const std::string& call_id, const LogRecord& record);
  /// Appends a pre-rendered line; a trailing LF is added.
  void append_line(std::string line);
  void flush();

  bool ok() const noexcept { return fd_ >= 0; }
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
  int fd_ = -1;
  std::mutex mu_;
};

}  // namespace ivr
