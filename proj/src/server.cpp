#include "pmt/server.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <ctime>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "pmt/error.hpp"
#include "pmt/session.hpp"

namespace pmt {

namespace {

class Fd {
 public:
  explicit Fd(int fd = -1) : fd_(fd) {}
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  ~Fd() {
    if (fd_ >= 0) ::close(fd_);
  }
  int get() const { return fd_; }

 private:
  int fd_;
};

[[noreturn]] void sys_fail(const std::string& what) { throw std::runtime_error(what + ": " + std::strerror(errno)); }

void send_all(int fd, const std::string& data) {
  std::size_t sent = 0;
  while (sent < data.size()) {
    const ssize_t n = ::send(fd, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw std::runtime_error("client went away");
    }
    sent += static_cast<std::size_t>(n);
  }
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

SessionRecord serve_session(const SessionPlan& plan, const ServeOptions& options, std::ostream& status) {
  if (!(options.time_scale > 0.0)) throw ValidationError("time scale must be positive");
  Fd listener(::socket(AF_INET, SOCK_STREAM, 0));
  if (listener.get() < 0) sys_fail("socket");
  int yes = 1;
  ::setsockopt(listener.get(), SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(options.port);
  if (::bind(listener.get(), reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0)
    sys_fail("cannot bind port " + std::to_string(options.port));
  if (::listen(listener.get(), 1) < 0) sys_fail("listen");
  socklen_t len = sizeof addr;
  ::getsockname(listener.get(), reinterpret_cast<sockaddr*>(&addr), &len);
  const std::uint16_t port = ntohs(addr.sin_port);
  status << "listening on 127.0.0.1:" << port << std::endl;
  if (options.on_listen) options.on_listen(port);

  Fd client(::accept(listener.get(), nullptr, nullptr));
  if (client.get() < 0) sys_fail("accept");

  std::filesystem::create_directories(options.out_dir);
  const auto stem = options.out_dir / ("session" + std::to_string(plan.session_number));
  std::ofstream log_file(stem.string() + ".pmtlog", std::ios::binary | std::ios::trunc);
  if (!log_file) throw std::runtime_error("cannot write " + stem.string() + ".pmtlog");
  EventLogWriter writer(log_file, plan.to_json(), utc_now());
  SessionRunner runner(plan, [&](const EventLogEntry& e) { writer.append(e); });

  bool connected = true;
  auto deliver = [&](const std::vector<ProtocolMessage>& messages) {
    if (!connected) return;
    std::string frames;
    for (const auto& m : messages) frames += encode(m) + '\n';
    try {
      send_all(client.get(), frames);
    } catch (const std::runtime_error&) {
      connected = false;
    }
  };

  deliver(runner.start());
  SequenceGuard guard;
  std::string buffer;
  using Clock = std::chrono::steady_clock;
  auto last = Clock::now();
  double carry = 0.0;

  while (!runner.ended() && connected) {
    pollfd pfd{client.get(), POLLIN, 0};
    const int ready = ::poll(&pfd, 1, 20);
    if (ready < 0 && errno != EINTR) sys_fail("poll");

    const auto now = Clock::now();
    carry += std::chrono::duration<double, std::milli>(now - last).count() * options.time_scale;
    last = now;
    const auto whole = static_cast<RealMillis>(carry);
    carry -= static_cast<double>(whole);
    if (whole > 0) deliver(runner.advance(whole));

    if (ready > 0 && (pfd.revents & (POLLIN | POLLHUP | POLLERR))) {
      char chunk[4096];
      const ssize_t n = ::recv(client.get(), chunk, sizeof chunk, 0);
      if (n <= 0) {
        connected = false;
        break;
      }
      buffer.append(chunk, static_cast<std::size_t>(n));
      std::size_t nl;
      while ((nl = buffer.find('\n')) != std::string::npos && !runner.ended()) {
        const std::string frame = buffer.substr(0, nl);
        buffer.erase(0, nl + 1);
        if (frame.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
          const auto message = decode(frame);
          guard.accept(message.seq);
          deliver(runner.submit(to_command(message)));
        } catch (const ProtocolError& e) {
          deliver(runner.reject_frame(e.what()));
        }
      }
    }
  }

  if (!runner.ended()) {
    status << "client disconnected; aborting session" << std::endl;
    deliver(runner.abort());
  }
  writer.close();
  const SessionRecord record = runner.started() && runner.ended() ? runner.engine().finish() : SessionRecord{};
  std::ofstream(stem.string() + ".record.json") << record.to_json().dump(2) << '\n';
  status << "session " << plan.session_number << " ended (" << record.end_reason << "); log " << stem.string()
         << ".pmtlog" << std::endl;
  return record;
}

}  // namespace pmt
