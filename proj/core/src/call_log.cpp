#include "ivr/call_log.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <iostream>

#include "json_io.hpp"

namespace ivr {

namespace {

using detail::ojson;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

ojson event_json(const DialogEvent& e) {
  ojson j;
  j["type"] = std::string(event_name(e));
  std::visit(overloaded{
                 [&](const events::UtteranceReceived& u) {
                   j["text"] = u.transcript.raw_text();
                   j["source"] = std::string(to_string(u.transcript.source().kind));
                 },
                 [&](const events::ClassificationReady& r) {
                   j["class_id"] = r.result.class_id;
                   j["confidence"] = r.result.confidence;
                   ojson alts = ojson::array();
                   for (const auto& [id, c] : r.result.alternates) alts.push_back(ojson::array({id, c}));
                   j["alternates"] = std::move(alts);
                   j["context_docs"] = r.result.context_docs;
                 },
                 [&](const events::BackendFailure& f) { j["reason"] = f.reason; },
                 [](const auto&) {},
             },
             e);
  return j;
}

ojson action_json(const DialogAction& a) {
  ojson j;
  j["type"] = std::string(action_name(a));
  std::visit(overloaded{
                 [&](const actions::PlayPrompt& p) { j["text"] = p.text; },
                 [&](const actions::Transfer& t) { j["queue_id"] = t.queue_id; },
                 [&](const actions::LogOnly& l) { j["note"] = l.note; },
                 [](const auto&) {},
             },
             a);
  return j;
}

}  // namespace

std::string call_log_line(const std::string& call_id, const LogRecord& record) {
  ojson j;
  j["ts"] = format_rfc3339(record.ts);
  j["call_id"] = call_id;
  j["phase_before"] = std::string(to_string(record.phase_before));
  j["event"] = event_json(record.event);
  ojson acts = ojson::array();
  for (const auto& a : record.actions) acts.push_back(action_json(a));
  j["actions"] = std::move(acts);
  j["phase_after"] = std::string(to_string(record.phase_after));
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

CallLogWriter::CallLogWriter(const std::filesystem::path& path) : path_(path) {
  fd_ = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) {
    std::cerr << "call log: cannot open " << path << ": " << std::strerror(errno) << '\n';
  }
}

CallLogWriter::~CallLogWriter() {
  if (fd_ >= 0) {
    ::close(fd_);
  }
}

void CallLogWriter::append(const std::string& call_id, const LogRecord& record) {
  append_line(call_log_line(call_id, record));
}

void CallLogWriter::append_line(std::string line) {
  line.push_back('\n');
  std::lock_guard lock(mu_);
  if (fd_ < 0) {
    return;
  }
  const char* p = line.data();
  std::size_t left = line.size();
  while (left > 0) {
    const ssize_t n = ::write(fd_, p, left);
    if (n < 0) {
      if (errno == EINTR) continue;
      std::cerr << "call log: write to " << path_ << " failed: " << std::strerror(errno) << '\n';
      return;
    }
    p += n;
    left -= static_cast<std::size_t>(n);
  }
}

void CallLogWriter::flush() {
  std::lock_guard lock(mu_);
  if (fd_ >= 0) {
    ::fsync(fd_);
  }
}

}  // namespace ivr
