#include <cstdio>
#include <ctime>

#include "ivr/call_log.hpp"

namespace ivr {

std::string format_rfc3339(Timestamp ts) {
  using namespace std::chrono;
  const auto secs = floor<seconds>(ts);
  const auto micros = duration_cast<microseconds>(ts - secs).count();
  const std::time_t t = system_clock::to_time_t(system_clock::time_point(secs));
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[48];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%06lldZ", tm.tm_year + 1900,
                tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec,
                static_cast<long long>(micros));
  return buf;
}

}  // namespace ivr
