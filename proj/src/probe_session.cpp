#include "ltem/probe_session.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstring>
#include <string>

#include "ltem/log.hpp"
#include "ltem/textio.hpp"

namespace ltem::probe {

namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t now_us(Clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - t0).count();
}

std::uint64_t wall_us() {
  return std::chrono::duration_cast<std::chrono::microseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

struct Socket {
  int fd = -1;

  Socket() {
    fd = ::socket(AF_INET, SOCK_DGRAM, 0);
    if (fd < 0) throw NetError(std::string("socket: ") + std::strerror(errno));
  }
  ~Socket() {
    if (fd >= 0) ::close(fd);
  }
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;
};

sockaddr_in resolve(const std::string& host, std::uint16_t port) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) == 1) return addr;
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_DGRAM;
  addrinfo* res = nullptr;
  int rc = ::getaddrinfo(host.c_str(), nullptr, &hints, &res);
  if (rc != 0 || res == nullptr) {
    throw NetError("cannot resolve host '" + host + "': " + gai_strerror(rc));
  }
  addr.sin_addr = reinterpret_cast<sockaddr_in*>(res->ai_addr)->sin_addr;
  ::freeaddrinfo(res);
  return addr;
}

void send_datagram(int fd, const sockaddr_in& to, const std::vector<std::uint8_t>& bytes) {
  ssize_t n = ::sendto(fd, bytes.data(), bytes.size(), 0,
                       reinterpret_cast<const sockaddr*>(&to), sizeof to);
  if (n != static_cast<ssize_t>(bytes.size())) {
    throw NetError(std::string("sendto: ") + std::strerror(errno));
  }
}

// Waits at most timeout_ms for a datagram. Returns false on timeout.
bool recv_datagram(int fd, int timeout_ms, std::vector<std::uint8_t>& out,
                   sockaddr_in* from = nullptr) {
  pollfd pfd{fd, POLLIN, 0};
  int rc = ::poll(&pfd, 1, timeout_ms);
  if (rc < 0) throw NetError(std::string("poll: ") + std::strerror(errno));
  if (rc == 0) return false;
  out.resize(2048);
  sockaddr_in addr{};
  socklen_t alen = sizeof addr;
  ssize_t n = ::recvfrom(fd, out.data(), out.size(), 0,
                         reinterpret_cast<sockaddr*>(&addr), &alen);
  if (n < 0) throw NetError(std::string("recvfrom: ") + std::strerror(errno));
  out.resize(static_cast<std::size_t>(n));
  if (from) *from = addr;
  return true;
}

}  // namespace

void ProbeSessionConfig::validate() const {
  if (cycles < 0) throw ScenarioError("cycles must be >= 0");
  if (burst_count < 0 || burst_count > 65535) throw ScenarioError("bad burst count");
  if (burst_bytes < kHeaderBytes || burst_bytes > 65000) {
    throw ScenarioError("burst bytes must fit a datagram and carry the header");
  }
  if (rtt_probe_count <= 0 || rtt_probe_count > 65535) throw ScenarioError("bad probe count");
  if (cycle_period_ms <= 0.0 || rtt_probe_spacing_ms <= 0.0) {
    throw ScenarioError("cycle period and probe spacing must be > 0");
  }
  // Probes occupy the second half of the cycle.
  if (rtt_probe_count * rtt_probe_spacing_ms > cycle_period_ms / 2.0 + 1e-9) {
    throw ScenarioError("probe window exceeds half the cycle period");
  }
}

CsqSource CsqSource::make(const std::string& spec) {
  CsqSource src;
  if (spec.empty()) return src;
  if (spec.rfind("value:", 0) == 0) {
    src.configured_ = true;
    src.fixed_ = static_cast<int>(parse_int(spec.substr(6), "csq source"));
    return src;
  }
  if (spec.rfind("exec:", 0) == 0) {
    src.configured_ = true;
    src.exec_path_ = spec.substr(5);
    return src;
  }
  throw ScenarioError("csq source must be 'value:<n>' or 'exec:<path>'");
}

std::optional<int> CsqSource::poll() {
  if (!configured_) return std::nullopt;
  if (fixed_) return fixed_;
  FILE* pipe = ::popen(exec_path_.c_str(), "r");
  if (!pipe) return std::nullopt;
  char buf[64] = {};
  std::optional<int> value;
  if (std::fgets(buf, sizeof buf, pipe) != nullptr) {
    try {
      value = static_cast<int>(parse_int(trim(buf), "csq exec output"));
    } catch (const ParseError&) {
      value = std::nullopt;
    }
  }
  ::pclose(pipe);
  return value;
}

SessionResult run_server(const ProbeSessionConfig& config) {
  config.validate();
  Socket sock;
  sockaddr_in bind_addr = resolve(config.host, config.port);
  if (::bind(sock.fd, reinterpret_cast<sockaddr*>(&bind_addr), sizeof bind_addr) != 0) {
    throw NetError("bind " + config.host + ":" + std::to_string(config.port) + ": " +
                   std::strerror(errno));
  }

  SessionResult result;
  result.log.epoch_us = wall_us();
  Clock::time_point t0 = Clock::now();

  // Session open: a kind-1 datagram with cycle_id 0 tells us the client
  // address.
  LTEM_INFO("probe server: waiting for session open on %s:%u", config.host.c_str(),
            static_cast<unsigned>(config.port));
  sockaddr_in client{};
  std::vector<std::uint8_t> buf;
  while (true) {
    if (!recv_datagram(sock.fd, 30000, buf, &client)) {
      throw NetError("no session-open datagram within 30 s");
    }
    try {
      ProbePacket p = decode(buf);
      if (p.kind == PacketKind::rtt_probe && p.cycle_id == 0) break;
    } catch (const ParseError&) {
      // Stray datagram; keep waiting.
    }
  }
  LTEM_INFO("probe server: session open, running %d cycles", config.cycles);
  t0 = Clock::now();  // cycle schedule starts at session open

  const double period_us = config.cycle_period_ms * 1000.0;
  const double spacing_us = config.rtt_probe_spacing_ms * 1000.0;

  for (int c = 1; c <= config.cycles; ++c) {
    const double cycle_start = (c - 1) * period_us;
    // Burst, back to back: as fast as the socket accepts.
    for (int j = 0; j < config.burst_count; ++j) {
      ProbePacket p{PacketKind::burst, static_cast<std::uint32_t>(c),
                    static_cast<std::uint16_t>(j), now_us(t0)};
      auto bytes = encode(p);
      bytes.resize(config.burst_bytes, 0);
      send_datagram(sock.fd, client, bytes);
    }
    // Probes at fixed offsets in the second half of the cycle; drain echo
    // arrivals while waiting so receive timestamps stay prompt.
    for (int j = 0; j < config.rtt_probe_count; ++j) {
      std::uint64_t target = static_cast<std::uint64_t>(cycle_start + period_us / 2.0 +
                                                        j * spacing_us);
      while (now_us(t0) < target) {
        int wait_ms = static_cast<int>((target - now_us(t0)) / 1000);
        if (recv_datagram(sock.fd, std::max(0, wait_ms), buf)) {
          std::uint64_t stamp = now_us(t0);
          try {
            ProbePacket p = decode(buf);
            if (p.kind == PacketKind::rtt_echo) {
              result.log.records.push_back(ProbeLogRecord{
                  stamp, p.cycle_id, static_cast<std::uint8_t>(p.kind), p.seq_in_cycle,
                  p.send_timestamp_us, static_cast<std::uint32_t>(buf.size()), std::nullopt});
            }
          } catch (const ParseError&) {
          }
        }
      }
      ProbePacket p{PacketKind::rtt_probe, static_cast<std::uint32_t>(c),
                    static_cast<std::uint16_t>(j), now_us(t0)};
      send_datagram(sock.fd, client, encode(p));
    }
    // Remainder of the cycle: keep receiving echoes.
    std::uint64_t cycle_end = static_cast<std::uint64_t>(cycle_start + period_us);
    while (now_us(t0) < cycle_end) {
      int wait_ms = static_cast<int>((cycle_end - now_us(t0)) / 1000);
      if (recv_datagram(sock.fd, std::max(0, wait_ms), buf)) {
        std::uint64_t stamp = now_us(t0);
        try {
          ProbePacket p = decode(buf);
          if (p.kind == PacketKind::rtt_echo) {
            result.log.records.push_back(ProbeLogRecord{
                stamp, p.cycle_id, static_cast<std::uint8_t>(p.kind), p.seq_in_cycle,
                p.send_timestamp_us, static_cast<std::uint32_t>(buf.size()), std::nullopt});
          }
        } catch (const ParseError&) {
        }
      }
    }
  }
  // Grace window for the last echoes.
  std::uint64_t deadline = now_us(t0) + 500000;
  while (now_us(t0) < deadline) {
    if (recv_datagram(sock.fd, 100, buf)) {
      std::uint64_t stamp = now_us(t0);
      try {
        ProbePacket p = decode(buf);
        if (p.kind == PacketKind::rtt_echo) {
          result.log.records.push_back(ProbeLogRecord{
              stamp, p.cycle_id, static_cast<std::uint8_t>(p.kind), p.seq_in_cycle,
              p.send_timestamp_us, static_cast<std::uint32_t>(buf.size()), std::nullopt});
        }
      } catch (const ParseError&) {
      }
    }
  }

  for (std::size_t i = 1; i < result.log.records.size(); ++i) {
    if (result.log.records[i].recv_time_us <= result.log.records[i - 1].recv_time_us) {
      result.log.records[i].recv_time_us = result.log.records[i - 1].recv_time_us + 1;
    }
  }
  if (!config.log_path.empty()) write_log(config.log_path, result.log);
  result.summaries = summarize_log(result.log, config.rtt_probe_count);
  return result;
}

SessionResult run_client(const ProbeSessionConfig& config) {
  config.validate();
  Socket sock;
  sockaddr_in server = resolve(config.host, config.port);

  SessionResult result;
  result.log.epoch_us = wall_us();
  Clock::time_point t0 = Clock::now();

  CsqSource csq_source = CsqSource::make(config.csq_source);
  std::optional<int> csq = csq_source.poll();
  std::uint64_t next_csq_poll_us = 1000000;

  // Session open.
  send_datagram(sock.fd, server,
                encode(ProbePacket{PacketKind::rtt_probe, 0, 0, now_us(t0)}));
  LTEM_INFO("probe client: session open sent to %s:%u", config.host.c_str(),
            static_cast<unsigned>(config.port));

  const std::uint64_t total_us =
      static_cast<std::uint64_t>((config.cycles + 2) * config.cycle_period_ms * 1000.0);
  const std::uint64_t idle_limit_us = 5000000;
  std::uint64_t last_arrival_us = now_us(t0);
  bool saw_traffic = false;

  std::vector<std::uint8_t> buf;
  while (true) {
    std::uint64_t now = now_us(t0);
    if (now > total_us) break;
    if (now - last_arrival_us > idle_limit_us && (saw_traffic || now > idle_limit_us * 2)) {
      break;  // server silent; stop rather than hang
    }
    if (now >= next_csq_poll_us) {
      csq = csq_source.poll();
      next_csq_poll_us += 1000000;
    }
    if (!recv_datagram(sock.fd, 50, buf)) continue;
    std::uint64_t stamp = now_us(t0);
    last_arrival_us = stamp;
    saw_traffic = true;
    ProbePacket p;
    try {
      p = decode(buf);
    } catch (const ParseError&) {
      continue;
    }
    result.log.records.push_back(ProbeLogRecord{stamp, p.cycle_id,
                                                static_cast<std::uint8_t>(p.kind),
                                                p.seq_in_cycle, p.send_timestamp_us,
                                                static_cast<std::uint32_t>(buf.size()), csq});
    if (p.kind == PacketKind::rtt_probe) {
      // Echo immediately, preserving the probe's identity and timestamp.
      ProbePacket echo = p;
      echo.kind = PacketKind::rtt_echo;
      send_datagram(sock.fd, server, encode(echo));
    }
    // A full run ends after the last probe of the last cycle.
    if (p.kind == PacketKind::rtt_probe &&
        p.cycle_id == static_cast<std::uint32_t>(config.cycles) &&
        p.seq_in_cycle == config.rtt_probe_count - 1) {
      break;
    }
  }

  // Receive timestamps must be strictly increasing in the log; equal
  // microsecond stamps can happen on fast loopback arrivals.
  for (std::size_t i = 1; i < result.log.records.size(); ++i) {
    if (result.log.records[i].recv_time_us <= result.log.records[i - 1].recv_time_us) {
      result.log.records[i].recv_time_us = result.log.records[i - 1].recv_time_us + 1;
    }
  }

  if (!config.log_path.empty()) write_log(config.log_path, result.log);
  result.summaries = summarize_log(result.log, config.rtt_probe_count);
  return result;
}

}  // namespace ltem::probe
