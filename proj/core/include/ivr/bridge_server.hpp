#pragma once

#include <atomic>
#include <cstdint>
#include <list>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <stop_token>
#include <thread>

#include "ivr/engine.hpp"

namespace ivr::bridge {

struct Endpoint {
  std::string host = "127.0.0.1";
  std::uint16_t port = kDefaultBridgePort;
};

/// Parses "host:port", "host" or ":port". Throws ConfigError.
Endpoint parse_endpoint(std::string_view address);

/// NDJSON-over-TCP front end for the engine.
///
/// Each connection may multiplex many call_ids. Frames from one connection are
/// decoded in arrival order; work for each call runs on its own strand of a
/// shared thread pool, so a slow backend on one call does not hold up the
/// others. Writes to a connection are serialized and every command batch for
/// a call is written in the order the session produced it. When a connection
/// drops, each of its live calls receives Hangup (-> Abandoned).
class BridgeServer {
 public:
  BridgeServer(const Engine& engine, Endpoint endpoint, std::size_t worker_threads = 0);
  ~BridgeServer();

  BridgeServer(const BridgeServer&) = delete;
  BridgeServer& operator=(const BridgeServer&) = delete;

  /// Binds and starts accepting. Throws IvrError if the address cannot be bound.
  void start();
  /// Stops accepting, drops connections (their calls are abandoned) and joins.
  void stop();
  /// Blocks until stop() is called from another thread.
  void wait();

  /// Port actually bound (useful with port 0).
  std::uint16_t port() const noexcept { return bound_port_.load(); }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::atomic<std::uint16_t> bound_port_{0};
};

/// Binds `address` and serves until `stop` is requested.
void serve(std::string_view address, const Engine& engine, std::stop_token stop);

}  // namespace ivr::bridge
