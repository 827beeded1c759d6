#pragma once

#include <chrono>
#include <string>

namespace ivr::detail {

struct HttpReply {
  int status = 0;
  std::string body;
};

/// POSTs a JSON body to base_url + path. Throws std::runtime_error on any
/// transport failure (connect refused, timeout, malformed URL).
HttpReply post_json(const std::string& base_url, const std::string& path,
                    const std::string& body, std::chrono::milliseconds timeout);

}  // namespace ivr::detail
