#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "ltem/probe_log.hpp"

namespace ltem::probe {

// One measurement cycle: a back-to-back burst in the first half-second,
// evenly spaced RTT probes in the second half. Cycle ids on the wire start
// at 1; cycle 0 is reserved for the client's session-open datagram.
struct ProbeSessionConfig {
  std::string host = "127.0.0.1";
  std::uint16_t port = 48372;
  int cycles = 10;
  int burst_count = 50;
  std::uint32_t burst_bytes = 1470;
  int rtt_probe_count = 10;
  double rtt_probe_spacing_ms = 50.0;
  double cycle_period_ms = 1000.0;
  std::string log_path;
  std::string csq_source;  // "", "value:<n>" or "exec:<path>"

  void validate() const;  // throws ScenarioError
};

// Link-quality hook: a fixed value or an executable printing an integer,
// polled at 1 Hz by the client.
class CsqSource {
 public:
  static CsqSource make(const std::string& spec);  // throws ScenarioError

  bool configured() const { return configured_; }
  std::optional<int> poll();

 private:
  bool configured_ = false;
  std::optional<int> fixed_;
  std::string exec_path_;
};

struct SessionResult {
  ProbeLog log;
  std::vector<CycleSummary> summaries;
};

// Real-socket endpoints (UDP). The server waits for a session-open
// datagram, then drives `cycles` cycles, logging echo arrivals; the client
// timestamps and logs every arrival, echoes probes, and stamps records with
// the polled CSQ. Both throw NetError on socket failures.
SessionResult run_server(const ProbeSessionConfig& config);
SessionResult run_client(const ProbeSessionConfig& config);

}  // namespace ltem::probe
