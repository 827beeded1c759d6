#include "remote.hpp"

#include <stdexcept>

#include <httplib.h>

namespace ivr::detail {

HttpReply post_json(const std::string& base_url, const std::string& path,
                    const std::string& body, std::chrono::milliseconds timeout) {
  httplib::Client client(base_url);
  if (!client.is_valid()) {
    throw std::runtime_error("invalid endpoint '" + base_url + "'");
  }
  const auto secs = static_cast<time_t>(timeout.count() / 1000);
  const auto usecs = static_cast<time_t>((timeout.count() % 1000) * 1000);
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);

  auto res = client.Post(path, body, "application/json");
  if (!res) {
    throw std::runtime_error(base_url + path + ": " + httplib::to_string(res.error()));
  }
  return HttpReply{res->status, res->body};
}

}  // namespace ivr::detail
