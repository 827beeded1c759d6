#include "ivr/bridge_server.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <condition_variable>
#include <cstring>
#include <iostream>
#include <map>
#include <vector>

#include <boost/asio/post.hpp>
#include <boost/asio/strand.hpp>
#include <boost/asio/thread_pool.hpp>

#include "ivr/bridge.hpp"
#include "ivr/errors.hpp"

namespace ivr::bridge {

namespace asio = boost::asio;

Endpoint parse_endpoint(std::string_view address) {
  Endpoint ep;
  const auto colon = address.rfind(':');
  std::string_view host = address;
  if (colon != std::string_view::npos) {
    host = address.substr(0, colon);
    const auto port_str = address.substr(colon + 1);
    unsigned value = 0;
    auto [ptr, ec] = std::from_chars(port_str.data(), port_str.data() + port_str.size(), value);
    if (ec != std::errc{} || ptr != port_str.data() + port_str.size() || value > 65535) {
      throw ConfigError("", "bind", "invalid port in '" + std::string(address) + "'");
    }
    ep.port = static_cast<std::uint16_t>(value);
  }
  if (!host.empty()) {
    ep.host = std::string(host);
  }
  return ep;
}

namespace {

using Strand = asio::strand<asio::thread_pool::executor_type>;

void write_all(int fd, const std::string& bytes) {
  const char* p = bytes.data();
  std::size_t left = bytes.size();
  while (left > 0) {
    const ssize_t n = ::send(fd, p, left, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      return;  // peer gone; the reader will notice and abandon the calls
    }
    p += n;
    left -= static_cast<std::size_t>(n);
  }
}

}  // namespace

struct BridgeServer::Impl {
  struct Call {
    explicit Call(Strand s) : strand(std::move(s)) {}
    Strand strand;
    CallSession session;
    std::size_t utterances = 0;
  };

  struct Connection {
    explicit Connection(int f) : fd(f) {}
    int fd;
    std::mutex write_mu;
    std::mutex calls_mu;
    std::map<std::string, std::shared_ptr<Call>> calls;
    std::mutex pending_mu;
    std::condition_variable pending_cv;
    std::size_t pending = 0;

    void send(const std::string& bytes) {
      std::lock_guard lock(write_mu);
      write_all(fd, bytes);
    }
  };

  Impl(const Engine& e, Endpoint ep, std::size_t threads)
      : engine(e), endpoint(std::move(ep)), pool(threads == 0 ? default_threads() : threads) {}

  static std::size_t default_threads() {
    const auto n = std::thread::hardware_concurrency();
    return n == 0 ? 4 : n;
  }

  const Engine& engine;
  Endpoint endpoint;
  asio::thread_pool pool;
  int listen_fd = -1;
  std::thread acceptor;
  std::mutex conns_mu;
  std::list<std::pair<std::shared_ptr<Connection>, std::thread>> conns;
  std::atomic<bool> stopping{false};
  std::mutex stop_mu;
  std::condition_variable stop_cv;
  bool stopped = false;

  void post(const std::shared_ptr<Connection>& conn, const std::shared_ptr<Call>& call,
            std::function<void()> work) {
    {
      std::lock_guard lock(conn->pending_mu);
      ++conn->pending;
    }
    asio::post(call->strand, [conn, work = std::move(work)] {
      try {
        work();
      } catch (const std::exception& e) {
        conn->send(error_frame(e.what()));
      }
      std::lock_guard lock(conn->pending_mu);
      if (--conn->pending == 0) conn->pending_cv.notify_all();
    });
  }

  // Converts dialog actions to wire commands and writes them as one batch.
  void emit(Connection& conn, const CallSession& session, const std::vector<DialogAction>& acts) {
    std::string batch;
    for (const auto& a : acts) {
      if (const auto* p = std::get_if<actions::PlayPrompt>(&a)) {
        const Playback pb = engine.render(*p, session.language);
        batch += encode(pb.audio_ref ? Command::play_audio(session.call_id, *pb.audio_ref)
                                     : Command::play_text(session.call_id, *pb.text));
      } else if (std::holds_alternative<actions::Listen>(a)) {
        batch += encode(Command::listen(session.call_id));
      } else if (const auto* t = std::get_if<actions::Transfer>(&a)) {
        batch += encode(Command::transfer(session.call_id, t->queue_id));
      } else if (std::holds_alternative<actions::TransferOperator>(a)) {
        batch += encode(
            Command::transfer(session.call_id, engine.config().routing.operator_queue()));
      }
    }
    if (session.phase == Phase::Routed || session.phase == Phase::Escalated) {
      batch += encode(Command::hangup(session.call_id));
    }
    if (!batch.empty()) {
      conn.send(batch);
    }
  }

  void retire_if_done(Connection& conn, const std::shared_ptr<Call>& call) {
    if (!call->session.terminal()) return;
    std::lock_guard lock(conn.calls_mu);
    auto it = conn.calls.find(call->session.call_id);
    if (it != conn.calls.end() && it->second == call) {
      conn.calls.erase(it);
    }
  }

  void on_frame(const std::shared_ptr<Connection>& conn, std::string_view line) {
    Message msg;
    try {
      msg = decode(line);
    } catch (const FrameError& e) {
      conn->send(error_frame(e.reason()));
      return;
    }
    std::shared_ptr<Call> call;
    {
      std::lock_guard lock(conn->calls_mu);
      auto it = conn->calls.find(msg.call_id);
      if (msg.type == MessageType::SessionStart) {
        if (it != conn->calls.end()) {
          conn->send(error_frame("duplicate call_id: " + msg.call_id));
          return;
        }
        call = std::make_shared<Call>(asio::make_strand(pool));
        call->session.call_id = msg.call_id;
        conn->calls.emplace(msg.call_id, call);
      } else {
        if (it == conn->calls.end()) {
          conn->send(error_frame("unknown call_id: " + msg.call_id));
          return;
        }
        call = it->second;
      }
    }

    Connection& c = *conn;
    switch (msg.type) {
      case MessageType::SessionStart:
        post(conn, call, [this, &c, call, msg] {
          auto step = engine.start(msg.call_id, msg.language);
          call->session = std::move(step.session);
          emit(c, call->session, step.actions);
          retire_if_done(c, call);
        });
        break;
      case MessageType::Utterance:
        post(conn, call, [this, &c, call, msg] {
          if (call->session.terminal() || call->session.event_log.empty()) return;
          const UtteranceInput input = msg.text ? UtteranceInput::text(*msg.text)
                                                : UtteranceInput::audio(*msg.audio_ref);
          auto step = engine.utterance(std::move(call->session), input, call->utterances++);
          call->session = std::move(step.session);
          emit(c, call->session, step.actions);
          retire_if_done(c, call);
        });
        break;
      case MessageType::Hangup: {
        // Forget the call now so later frames for it are refused in order.
        std::lock_guard lock(conn->calls_mu);
        conn->calls.erase(msg.call_id);
      }
        post(conn, call, [this, &c, call] { hang_up(c, call); });
        break;
    }
  }

  void hang_up(Connection& conn, const std::shared_ptr<Call>& call) {
    if (!call->session.terminal() && !call->session.event_log.empty()) {
      auto step = engine.hangup(std::move(call->session));
      call->session = std::move(step.session);
    }
    retire_if_done(conn, call);
  }

  void read_loop(const std::shared_ptr<Connection>& conn) {
    std::string buffer;
    char chunk[4096];
    for (;;) {
      const ssize_t n = ::recv(conn->fd, chunk, sizeof chunk, 0);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) break;
      buffer.append(chunk, static_cast<std::size_t>(n));
      std::size_t start = 0;
      for (std::size_t nl; (nl = buffer.find('\n', start)) != std::string::npos; start = nl + 1) {
        const std::string_view line(buffer.data() + start, nl - start + 1);
        if (line.find_first_not_of(" \t\r\n") != std::string_view::npos) {
          on_frame(conn, line);
        }
      }
      buffer.erase(0, start);
    }

    // Connection dropped: abandon every live call once its queued work drains.
    std::vector<std::shared_ptr<Call>> live;
    {
      std::lock_guard lock(conn->calls_mu);
      for (auto& [id, call] : conn->calls) live.push_back(call);
    }
    Connection& c = *conn;
    for (auto& call : live) {
      post(conn, call, [this, &c, call] { hang_up(c, call); });
    }
    std::unique_lock lock(conn->pending_mu);
    conn->pending_cv.wait(lock, [&] { return conn->pending == 0; });
    ::close(conn->fd);
    conn->fd = -1;
  }

  void accept_loop() {
    for (;;) {
      sockaddr_storage addr{};
      socklen_t len = sizeof addr;
      const int fd = ::accept(listen_fd, reinterpret_cast<sockaddr*>(&addr), &len);
      if (fd < 0) {
        if (errno == EINTR) continue;
        if (stopping.load()) return;
        if (errno == EMFILE || errno == ENFILE || errno == ECONNABORTED) continue;
        return;
      }
      if (stopping.load()) {
        ::close(fd);
        return;
      }
      int one = 1;
      ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
      auto conn = std::make_shared<Connection>(fd);
      std::lock_guard lock(conns_mu);
      // Reap finished connection threads.
      for (auto it = conns.begin(); it != conns.end();) {
        if (it->first->fd < 0 && it->second.joinable()) {
          it->second.join();
          it = conns.erase(it);
        } else {
          ++it;
        }
      }
      conns.emplace_back(conn, std::thread([this, conn] { read_loop(conn); }));
    }
  }
};

BridgeServer::BridgeServer(const Engine& engine, Endpoint endpoint, std::size_t worker_threads)
    : impl_(std::make_unique<Impl>(engine, std::move(endpoint), worker_threads)) {}

BridgeServer::~BridgeServer() { stop(); }

void BridgeServer::start() {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  hints.ai_flags = AI_PASSIVE;
  addrinfo* res = nullptr;
  const std::string port = std::to_string(impl_->endpoint.port);
  const int rc = ::getaddrinfo(impl_->endpoint.host.c_str(), port.c_str(), &hints, &res);
  if (rc != 0) {
    throw IvrError("bridge: cannot resolve '" + impl_->endpoint.host + "': " + gai_strerror(rc));
  }
  int fd = -1;
  std::string last_error = "no addresses";
  for (addrinfo* ai = res; ai != nullptr; ai = ai->ai_next) {
    fd = ::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC, ai->ai_protocol);
    if (fd < 0) {
      last_error = std::strerror(errno);
      continue;
    }
    int one = 1;
    ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    if (::bind(fd, ai->ai_addr, ai->ai_addrlen) == 0 && ::listen(fd, 64) == 0) {
      break;
    }
    last_error = std::strerror(errno);
    ::close(fd);
    fd = -1;
  }
  ::freeaddrinfo(res);
  if (fd < 0) {
    throw IvrError("bridge: cannot bind " + impl_->endpoint.host + ":" + port + ": " + last_error);
  }
  sockaddr_storage bound{};
  socklen_t len = sizeof bound;
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&bound), &len);
  if (bound.ss_family == AF_INET) {
    bound_port_ = ntohs(reinterpret_cast<sockaddr_in*>(&bound)->sin_port);
  } else if (bound.ss_family == AF_INET6) {
    bound_port_ = ntohs(reinterpret_cast<sockaddr_in6*>(&bound)->sin6_port);
  }
  impl_->listen_fd = fd;
  impl_->acceptor = std::thread([this] { impl_->accept_loop(); });
}

void BridgeServer::stop() {
  if (!impl_ || impl_->stopping.exchange(true)) {
    return;
  }
  if (impl_->listen_fd >= 0) {
    ::shutdown(impl_->listen_fd, SHUT_RDWR);
    ::close(impl_->listen_fd);
    impl_->listen_fd = -1;
  }
  if (impl_->acceptor.joinable()) {
    impl_->acceptor.join();
  }
  std::list<std::pair<std::shared_ptr<Impl::Connection>, std::thread>> conns;
  {
    std::lock_guard lock(impl_->conns_mu);
    conns.swap(impl_->conns);
  }
  for (auto& [conn, thread] : conns) {
    if (conn->fd >= 0) ::shutdown(conn->fd, SHUT_RDWR);
  }
  for (auto& [conn, thread] : conns) {
    if (thread.joinable()) thread.join();
  }
  impl_->pool.join();
  {
    std::lock_guard lock(impl_->stop_mu);
    impl_->stopped = true;
  }
  impl_->stop_cv.notify_all();
}

void BridgeServer::wait() {
  std::unique_lock lock(impl_->stop_mu);
  impl_->stop_cv.wait(lock, [&] { return impl_->stopped; });
}

void serve(std::string_view address, const Engine& engine, std::stop_token stop) {
  BridgeServer server(engine, parse_endpoint(address));
  server.start();
  std::stop_callback on_stop(stop, [&server] { server.stop(); });
  server.wait();
}

}  // namespace ivr::bridge
